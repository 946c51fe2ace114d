"""Infrastructure layer: JSON schemas, file repositories and settings."""
