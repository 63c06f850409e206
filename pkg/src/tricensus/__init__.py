"""Census toolkit (under construction)."""
