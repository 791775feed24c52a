"""Exception types shared across the package."""


class EtlinkError(Exception):
    """Base class for all library errors."""


class ConfigError(EtlinkError):
    """Invalid configuration: bad parameters, inapplicable predictor, size caps."""


class DatasetError(EtlinkError):
    """Unusable input data: parse failures, empty files, empty test sets."""


class NumericalError(EtlinkError):
    """Numerical failure: non-convergence, singular or ill-conditioned solves."""
