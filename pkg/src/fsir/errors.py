"""Error and warning types shared across the package."""

__all__ = [
    "DegenerateOperatorError",
    "RankDeficiencyError",
    "DegenerateSignalError",
    "SchemaError",
    "ConfigError",
    "RankDeficiencyWarning",
]


class DegenerateOperatorError(ValueError):
    """Operator has no usable positive spectrum (e.g. inverting a zero operator)."""


class RankDeficiencyError(ValueError):
    """A curve set expected to be linearly independent is not."""


class DegenerateSignalError(ValueError):
    """A diagnostic ratio is undefined because the reference variance is zero."""


class SchemaError(ValueError):
    """An input file does not have the expected columns."""


class ConfigError(ValueError):
    """An experiment configuration is inconsistent or incomplete."""


class RankDeficiencyWarning(UserWarning):
    """Estimation continued best-effort after hitting a rank-deficient operator."""
