"""
Exception handling for the cover-arithmetic command line.
"""

import json
import logging

from pydantic import ValidationError

from src.service.exceptions import CoverArithmeticError, InputError
from src.service.models import ErrorResponse

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_MALFORMED_INPUT = 2


def _format_error(
    exit_code: int,
    error_type_str: str | None,
    message: str | None,
) -> tuple[int, ErrorResponse]:
    """Format error response with consistent structure."""
    error_response = ErrorResponse(
        error=exit_code,
        error_type=error_type_str,
        message=message or error_type_str or "Unknown error",
    )
    return exit_code, error_response


def universal_error_handler(exc: Exception) -> tuple[int, ErrorResponse]:
    """
    Universal handler for all types of exceptions.

    Returns:
        The process exit code and the machine-readable error object.
    """
    if isinstance(exc, InputError):
        exit_code = EXIT_MALFORMED_INPUT
        error_type_str = type(exc).__name__
        message = str(exc) or error_type_str

    elif isinstance(exc, ValidationError):
        # Payload did not match the command schema
        exit_code = EXIT_MALFORMED_INPUT
        error_type_str = "payload_validation_failed"
        message = str(exc.errors(include_url=False))

    elif isinstance(exc, json.JSONDecodeError):
        exit_code = EXIT_MALFORMED_INPUT
        error_type_str = "payload_not_json"
        message = str(exc)

    elif isinstance(exc, CoverArithmeticError):
        exit_code = EXIT_DOMAIN_ERROR
        error_type_str = type(exc).__name__
        message = str(exc) or error_type_str

    else:
        logger.error("Unhandled exception: %s", exc, exc_info=True)
        exit_code = EXIT_DOMAIN_ERROR
        error_type_str = None
        message = "An unexpected error occurred"

    return _format_error(exit_code, error_type_str, message)
