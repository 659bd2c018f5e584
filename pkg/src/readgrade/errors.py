"""Exception types shared across the toolkit."""


class ReadgradeError(Exception):
    """Base class for all toolkit errors."""


class EmptyDocument(ReadgradeError):
    """Raised when tokenization yields no sentences or tokens."""


class LoadError(ReadgradeError):
    """A file referenced by a manifest or resource table could not be read."""


class ManifestError(ReadgradeError):
    """The corpus manifest is structurally invalid (bad grade, missing key)."""


class SchemaError(ReadgradeError):
    """A lexicon line does not conform to the declared level schema."""


class DomainError(ReadgradeError):
    """An argument is outside the mathematical domain of an operation."""


class TreeSyntaxError(ReadgradeError):
    """Malformed bracketed tree. Carries the character offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at char {offset})")
        self.offset = offset


class PatternSyntaxError(ReadgradeError):
    """Malformed tree-pattern expression. Carries the position of the fault."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class AnnotationMismatch(ReadgradeError):
    """A sidecar annotation does not line up with its document."""


class SingularDesign(ReadgradeError):
    """The regression design matrix is rank deficient."""

    def __init__(self, message: str, features: list[str] | None = None):
        super().__init__(message)
        self.features = features or []


class MissingFeature(ReadgradeError):
    """A feature required by a fitted model is masked or absent."""

    def __init__(self, message: str, features: list[str] | None = None):
        super().__init__(message)
        self.features = features or []


class UndefinedCorrelation(ReadgradeError):
    """Pearson correlation requested on a zero-variance input."""


class BicUndefined(ReadgradeError):
    """BIC requested with RSS = 0 (perfect fit has no finite BIC)."""


class ConfigError(ReadgradeError):
    """Invalid run configuration (fold count, row count, bad flag value)."""


class IoError(ReadgradeError):
    """An output file could not be written."""
