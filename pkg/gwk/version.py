# This file is part of gwk project governed by MIT license, see the LICENSE.txt file.
"""
version definition
"""

__version__ = '0.1.0'
