"""
Shared utilities, schemas and errors used across all components.
"""
