"""hardy-verify configuration templates."""
