"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the model is defined."""


class SchemaError(ValueError):
    """Input data (pattern files, logs, scenario files) does not match its schema."""
