"""Command-line interface of the Hardy verification suite."""
