"""Exact arithmetic: rationals, cyclotomic fields, radicals, tori, covers and Ẑ."""
