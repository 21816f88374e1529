"""Tests for girg_lab."""
