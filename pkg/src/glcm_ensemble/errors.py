"""Exception hierarchy shared by every module of the package."""


class GlcmEnsembleError(Exception):
    """Base class for all errors raised by this package."""


# imaging
class ImagingError(GlcmEnsembleError):
    pass


class UnsupportedFormat(ImagingError):
    pass


class CorruptFile(ImagingError):
    pass


class ImageIOError(ImagingError, OSError):
    pass


class InvalidDimensions(ImagingError, ValueError):
    pass


class InvalidLevels(ImagingError, ValueError):
    pass


# features
class NoValidPairs(GlcmEnsembleError, ValueError):
    """The offset is larger than the image, so no pixel pair lies inside it."""


class InvalidBinCount(GlcmEnsembleError, ValueError):
    pass


class EmptyHistogram(GlcmEnsembleError, ValueError):
    pass


# classifiers
class EmptyTrainingSet(GlcmEnsembleError, ValueError):
    pass


class SingleClass(GlcmEnsembleError, ValueError):
    pass


class NotFitted(GlcmEnsembleError, RuntimeError):
    pass


# ensemble / evaluation
class EmptyMatrix(GlcmEnsembleError, ValueError):
    pass


class RaggedRow(GlcmEnsembleError, ValueError):
    pass


class UnknownExhausted(GlcmEnsembleError, ValueError):
    """Strict cascade mode: every model in the chain abstained."""


class ClassTooSmall(GlcmEnsembleError, ValueError):
    pass


class LengthMismatch(GlcmEnsembleError, ValueError):
    pass


class UnknownTrueLabel(GlcmEnsembleError, ValueError):
    pass


# pipeline / persistence
class ManifestError(GlcmEnsembleError, ValueError):
    pass


class ConfigError(GlcmEnsembleError, ValueError):
    pass


class VersionMismatch(GlcmEnsembleError):
    pass


class SchemaMismatch(GlcmEnsembleError):
    pass


class CorruptModel(GlcmEnsembleError):
    pass


class ExtractionError(GlcmEnsembleError):
    """An image failed to load or featurize; ``path`` names it."""

    def __init__(self, path, cause: Exception):
        super().__init__(f"{path}: {cause}")
        self.path = str(path)
        self.cause = cause
