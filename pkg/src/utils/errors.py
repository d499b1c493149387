# src/utils/errors.py
"""Exception hierarchy shared by every module.

Each error carries a stable ``code`` (printed by the CLI) and an ``exit_code``.
Ranges: 2 usage, 3 config, 4 domain, 10-19 zero data, 20-29 relations, 30-39 density,
40-49 landau, 50-59 diophantine, 60-69 empirical.
"""


class ZetaFractionalError(ValueError):
    """Base class for all expected failures"""

    code = "error"
    exit_code = 1

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details

    def __str__(self) -> str:
        return f"{self.code}: {self.args[0]}"


class UsageError(ZetaFractionalError):
    code = "usage"
    exit_code = 2


class ConfigError(ZetaFractionalError):
    code = "config"
    exit_code = 3


# zeros_store
class ZeroParseError(ZetaFractionalError):
    code = "zeros-parse"
    exit_code = 10

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}", line=line)
        self.line = line


class NonMonotoneError(ZeroParseError):
    code = "zeros-non-monotone"
    exit_code = 11


class CacheError(ZetaFractionalError):
    code = "cache"
    exit_code = 12


class CacheBadMagicError(CacheError):
    code = "cache-bad-magic"
    exit_code = 13


class CacheVersionError(CacheError):
    code = "cache-version-mismatch"
    exit_code = 14


class CacheTruncatedError(CacheError):
    code = "cache-truncated"
    exit_code = 15


class DomainError(ZetaFractionalError):
    code = "domain"
    exit_code = 4


class InsufficientDataError(ZetaFractionalError):
    code = "insufficient-data"
    exit_code = 17


# relations
class RelationError(ZetaFractionalError):
    code = "relation"
    exit_code = 20


class RankDeficientError(RelationError):
    code = "relation-rank-deficient"
    exit_code = 21


class RepeatedPrimeError(RelationError):
    code = "relation-repeated-prime"
    exit_code = 22


class RowGcdError(RelationError):
    code = "relation-row-gcd"
    exit_code = 23


class NonPositiveExponentError(RelationError):
    code = "relation-nonpositive-exponent"
    exit_code = 24


class UnderdeterminedError(RelationError):
    code = "relation-underdetermined"
    exit_code = 25


class AmbiguousRelationError(RelationError):
    code = "relation-ambiguous"
    exit_code = 26


class AlphaError(RelationError):
    code = "alpha-invalid"
    exit_code = 27


# density
class DensityError(ZetaFractionalError):
    code = "density"
    exit_code = 30


class DimensionError(DensityError):
    code = "density-dimension"
    exit_code = 31


class AmbiguousFrequencyError(DensityError):
    code = "density-ambiguous-frequency"
    exit_code = 32


class TestFunctionError(DensityError):
    __test__ = False
    code = "test-function"
    exit_code = 33


# landau
class LandauError(ZetaFractionalError):
    code = "landau"
    exit_code = 40


# diophantine
class DiophantineError(ZetaFractionalError):
    code = "diophantine"
    exit_code = 50


# empirical
class EmpiricalError(ZetaFractionalError):
    code = "empirical"
    exit_code = 60


class InconsistentSystemError(EmpiricalError):
    code = "empirical-inconsistent-system"
    exit_code = 61
