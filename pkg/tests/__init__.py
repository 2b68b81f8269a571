"""Test suite for formscheme."""
