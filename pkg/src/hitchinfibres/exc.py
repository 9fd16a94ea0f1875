class HitchinFibreError(Exception):

    pass


class OddMultiplicity(HitchinFibreError):

    pass


class DegreeMismatch(HitchinFibreError):

    pass


class OddCuspCount(HitchinFibreError):

    pass


class TruncationTooShort(HitchinFibreError):

    pass


class ShiftOutOfWindow(HitchinFibreError):

    pass


class NotLarger(HitchinFibreError):

    pass


class DivisionByNonUnit(HitchinFibreError):

    pass


class CompatibilityFailure(HitchinFibreError):

    pass


class InvariantFailure(HitchinFibreError):

    pass


class ConfigError(HitchinFibreError):

    pass


class ValidationError(HitchinFibreError):
    def __init__(self, message, path="$"):
        self.message = message
        self.path = path
        super().__init__(message, path)

    def __str__(self):
        return f"{self.path}: {self.message}"

    def as_dict(self):
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "path": self.path,
        }

    def nested(self, prefix):
        """Re-root the error path under ``prefix``."""
        path = self.path[1:] if self.path.startswith("$") else self.path
        return self.__class__(self.message, f"{prefix}{path}")
