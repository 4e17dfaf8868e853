# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
gwk, generalized Wendland and Matern covariance toolkit
"""
