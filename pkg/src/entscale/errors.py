"""Error taxonomy shared across modules."""


class ConfigError(ValueError):
    """Invalid configuration, grammar, or out-of-range grid; CLI exit 1."""


class NumericalError(RuntimeError):
    """A numerical contract was violated at run time; CLI exit 2."""
