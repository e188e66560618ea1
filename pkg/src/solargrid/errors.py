"""Exception hierarchy shared across the toolkit."""


class SolarGridError(Exception):
    """Base class for every error raised by solargrid."""


class ConfigError(SolarGridError):
    pass


class WeatherError(SolarGridError):
    pass


class MalformedHeader(WeatherError):
    pass


class RowCountMismatch(WeatherError):
    pass


class ValueOutOfRange(WeatherError):
    """A weather value violates its physical bounds.

    ``row`` is the 1-based data row (header lines excluded) and ``line`` the
    1-based line number in the file.
    """

    def __init__(self, message, row=None, line=None):
        super().__init__(message)
        self.row = row
        self.line = line


class DateNotFound(WeatherError):
    pass


class NonFiniteState(SolarGridError):
    def __init__(self, message, hour=None):
        super().__init__(message)
        self.hour = hour


class TraceLengthMismatch(SolarGridError):
    pass


class EmptyScenario(SolarGridError):
    pass


class IterationLimit(SolarGridError):
    pass


class ZeroProduction(SolarGridError):
    pass
