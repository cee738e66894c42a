"""Solid-State Polariton Storage Simulator - Main package."""

__version__ = "0.2.0"
