"""Exception types shared across the package."""

from __future__ import annotations


class Gw3Error(Exception):
    """Base class for all errors raised by gw3ca."""


class DivisionByZero(Gw3Error, ZeroDivisionError):
    """Division by the zero rational function."""


class PoleHit(Gw3Error, ZeroDivisionError):
    """A substitution made a denominator vanish."""


class UnknownPreset(Gw3Error, KeyError):
    pass


class CMZero(Gw3Error, ValueError):
    """The central charge c_M was specialised to zero where c_M != 0 is required."""


class LBarZero(Gw3Error, ValueError):
    pass


class ParameterPole(Gw3Error, ValueError):
    pass


class IndexOutOfRange(Gw3Error, IndexError):
    pass


class ParseError(Gw3Error, ValueError):
    pass


class VerificationError(Gw3Error, AssertionError):
    """A computed object failed an internal consistency re-check."""
