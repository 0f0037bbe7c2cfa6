"""
Service module for cover-arithmetic: settings, errors, checks and I/O schemas.
"""
