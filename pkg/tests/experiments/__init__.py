# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
experiments tests
"""
