"""Error types shared across the package.

Invalid call arguments raise plain ValueError; these classes cover the
two failure modes that are not a caller bug.
"""


class ConfigError(Exception):
    """A configuration value violates an invariant (names the field)."""


class TransportError(Exception):
    """The serial/loopback/file link could not be opened or written."""
