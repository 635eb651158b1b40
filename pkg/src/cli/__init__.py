"""Command-line front end."""

from .commands import cleanup_intermediates, cli, exit_code_for, intermediate_names, main

__all__ = ["cleanup_intermediates", "cli", "exit_code_for", "intermediate_names", "main"]
