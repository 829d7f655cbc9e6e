class RothpyError(Exception):
    """Base class for all rothpy exceptions"""
    pass


class ConfigurationError(RothpyError):
    """Invalid grid or run configuration, or mismatched grid configurations"""
    pass


class ValidationError(RothpyError):
    """Invalid input data. Offending items are kept in offenders."""

    def __init__(self, msg, offenders=None):
        self.offenders = list(offenders) if offenders else []
        if self.offenders:
            msg = "{}: {}".format(msg, "; ".join(str(o) for o in self.offenders))
        super().__init__(msg)


class ResolutionError(RothpyError):
    """A scale or radius below what the grid can resolve"""
    pass


class DomainError(RothpyError):
    """Curve evaluated outside of its domain"""
    pass


class RangeError(RothpyError):
    """Frequency or scale index outside the representable range"""
    pass


class FileError(RothpyError):
    """Unreadable or malformed input file"""
    pass
