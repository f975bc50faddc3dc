"""Exception types shared across the package."""


class DatasetError(ValueError):
    """Malformed or inconsistent population dataset."""


class SizeLimitError(ValueError):
    """Problem instance exceeds the exact-enumeration limits."""
