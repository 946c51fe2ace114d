"""Domain layer: value types, exact/numeric arithmetic and ports."""
