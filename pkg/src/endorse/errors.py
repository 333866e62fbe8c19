"""Exception types shared across the pipeline.

Each error carries the CLI exit code it maps to: 2 for configuration or
usage problems, 3 for bad or insufficient data, 4 for I/O failures.
"""


class EndorseError(Exception):
    exit_code = 3


class ConfigError(EndorseError):
    exit_code = 2


class MalformedLine(EndorseError):
    def __init__(self, line_no, reason=""):
        self.line_no = line_no
        msg = f"malformed line {line_no}"
        super().__init__(f"{msg}: {reason}" if reason else msg)


class ProviderUnavailable(EndorseError):
    exit_code = 4


class QuotaExceeded(EndorseError):
    exit_code = 4


class EmptyLexicon(EndorseError):
    pass


class ConflictError(EndorseError):
    exit_code = 2

    def __init__(self, words):
        self.words = sorted(words)
        super().__init__(f"words added to both polarities: {', '.join(self.words)}")


class EmptyEntity(EndorseError):
    def __init__(self, entity):
        self.entity = entity
        super().__init__(f"EmptyEntity: no tweets to aggregate for {entity!r}")


class EmptyClass(EndorseError):
    def __init__(self, label):
        self.label = label
        super().__init__(f"EmptyClass: no training documents for class {label!r}")


class InvalidAlpha(EndorseError):
    exit_code = 2

    def __init__(self, alpha):
        self.alpha = alpha
        super().__init__(f"InvalidAlpha: smoothing constant must be > 0, got {alpha!r}")


class VersionMismatch(EndorseError):
    pass
