"""Command-line surface: documents, rendering and commands."""
