"""Tests core module."""
