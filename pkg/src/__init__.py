"""
Cover-arithmetic.
"""
