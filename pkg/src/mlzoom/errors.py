"""Exception types shared across the package."""


class MLZoomError(Exception):
    """Base class for all mlzoom errors."""


class ImageFormatError(MLZoomError, ValueError):
    """Unreadable, malformed, or unsupported image file."""


class DegenerateImageError(MLZoomError, ValueError):
    """Image too small for the requested operation."""


class DimensionMismatchError(MLZoomError, ValueError):
    """Two images were required to share dimensions but do not."""


class ModelFormatError(MLZoomError, ValueError):
    """Malformed or incompatible serialized model file."""


class ResourceLimitError(MLZoomError, RuntimeError):
    """Requested output would exceed the configured pixel budget."""
