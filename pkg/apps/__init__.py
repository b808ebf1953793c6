"""Hardy verification applications package."""
