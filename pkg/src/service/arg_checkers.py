"""
Argument validation helper functions.
"""

from sympy import isprime

from src.service.exceptions import MalformedInputError, NotPrimeError


def not_falsy(val, name: str):
    """
    Check that a value is not falsy.

    Args:
        val: The value to check.
        name: The name of the value for error messages.

    Returns:
        The value if it is not falsy.

    Raises:
        MalformedInputError: If the value is falsy.
    """
    if not val:
        raise MalformedInputError(f"{name} is required and cannot be empty")
    return val


def positive_int(val: int, name: str) -> int:
    """
    Check that a value is a positive integer.

    Raises:
        MalformedInputError: If the value is not an int or is less than 1.
    """
    if isinstance(val, bool) or not isinstance(val, int) or val < 1:
        raise MalformedInputError(f"{name} must be a positive integer, got {val!r}")
    return val


def require_prime(val: int, name: str) -> int:
    """
    Check that a value is a rational prime.

    Raises:
        NotPrimeError: If the value is not prime.
    """
    if not isprime(val):
        raise NotPrimeError(f"{name} must be prime, got {val}")
    return val
