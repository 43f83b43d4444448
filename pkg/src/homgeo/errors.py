"""Exception hierarchy. Every error raised by the package derives from HomGeoError."""


class HomGeoError(Exception):
    pass


class DimensionError(HomGeoError, ValueError):
    pass


class ValidationError(HomGeoError, ValueError):
    pass


class MetricError(HomGeoError, ValueError):
    pass


class SignatureError(MetricError):
    pass


class ParseError(HomGeoError, ValueError):
    pass


class ReductiveError(HomGeoError, ValueError):
    pass


class DivergenceError(HomGeoError, ArithmeticError):
    pass


class UndefinedWindingError(HomGeoError, ArithmeticError):
    pass


class ConfigError(HomGeoError, ValueError):
    pass
