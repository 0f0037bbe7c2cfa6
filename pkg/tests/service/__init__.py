"""Tests service module."""
