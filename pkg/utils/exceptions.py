"""Exceptions raised by the rank estimation library."""


class RankEstError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(RankEstError, ValueError):
    """An argument lies outside the range an operation accepts."""


class ParseError(RankEstError):
    """A malformed line in an edge list."""

    def __init__(self, line_number, line, reason='expected two integer tokens'):
        self.line_number = line_number
        self.line = line
        super().__init__('line %i: %s (%r)' % (line_number, reason, line))


class InsufficientSamplesError(RankEstError):
    """The sample holds too little information, e.g. a walk without collisions."""


class DegenerateStatisticsError(RankEstError):
    """Degree statistics for which the power law exponent is undefined."""


class SingularityError(RankEstError):
    """A closed form formula is evaluated at a singular point."""


class GraphMismatchError(RankEstError):
    """Two objects that must describe the same graph do not."""


class CacheFormatError(RankEstError):
    """A binary graph cache with an unknown or missing version header."""
