"""
Command modules for the cover-arithmetic command line.
"""
