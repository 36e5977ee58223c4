"""Exception hierarchy shared by the library and the command line."""


class SpherAreaError(Exception):
    """Base class for every error raised by :mod:`spherarea`."""


class DomainError(SpherAreaError, ValueError):
    """A side length or face degree lies outside the regular-polygon domain."""


class NoSignChange(SpherAreaError, ValueError):
    pass


class MaxIterations(SpherAreaError, RuntimeError):
    pass


class NotAdmissible(SpherAreaError, ValueError):
    """Vertex pattern with non-positive curvature or a face of degree above 41."""


class MarginTooLarge(SpherAreaError, ValueError):
    pass


class CatalogError(SpherAreaError, ValueError):
    """Malformed catalog file; ``location`` names the line or field at fault."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class RobustnessError(SpherAreaError, RuntimeError):
    """Extremal search result not separated from its numerical uncertainty."""


class CatalogSyntaxError(CatalogError):
    """Catalog text is not valid JSON."""
