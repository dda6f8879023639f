"""Optimal cutoff and risk rate of the Fourier estimator by regularity class.

Exponents are exact ``Fraction`` values whenever the class parameters are
given as integers, fractions or short decimals.
"""

from dataclasses import dataclass
from fractions import Fraction
import math


def _exact(v, name):
    if isinstance(v, Fraction):
        f = v
    elif isinstance(v, int):
        f = Fraction(v)
    else:
        f = Fraction(repr(float(v)))
    if f <= 0:
        raise ValueError(f"{name} must be positive")
    return f


@dataclass(frozen=True)
class OrdinarySmoothTarget:
    """``int (1 + u^2)^beta |phi_X|^2 <= L``."""

    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "beta", _exact(self.beta, "beta"))


@dataclass(frozen=True)
class SuperSmoothTarget:
    """``int exp(c |u|^s) |phi_X|^2 <= L``."""

    c: Fraction
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", _exact(self.c, "c"))
        object.__setattr__(self, "s", _exact(self.s, "s"))


@dataclass(frozen=True)
class OrdinarySmoothNoise:
    """``|phi_eps(u)|^2`` of order ``(1 + u^2)^{-a}``, ``a > 1/2``."""

    a: Fraction

    def __post_init__(self):
        a = _exact(self.a, "a")
        if a <= Fraction(1, 2):
            raise ValueError("ordinary smooth noise needs a > 1/2")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class SuperSmoothNoise:
    """``|phi_eps(u)|^2`` of order ``exp(-b |u|^s)``."""

    b: Fraction
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "b", _exact(self.b, "b"))
        object.__setattr__(self, "s", _exact(self.s, "s"))


@dataclass(frozen=True)
class Rate:
    """``m* ~ cutoff_base ** cutoff_exponent`` and ``risk = O(risk_base ** risk_exponent)``.

    A base is either ``"J"`` or ``"ln(J)/k"`` with ``k`` given by ``log_scale``.
    """

    cutoff_base: str
    cutoff_exponent: Fraction
    risk_base: str
    risk_exponent: Fraction
    log_scale: Fraction = Fraction(1)

    def _base(self, kind, J):
        return J if kind == "J" else math.log(J) / self.log_scale

    def cutoff(self, J):
        return self._base(self.cutoff_base, J) ** float(self.cutoff_exponent)

    def risk(self, J):
        return self._base(self.risk_base, J) ** float(self.risk_exponent)

    def describe(self):
        def show(kind):
            return "J" if kind == "J" else f"(ln J / {self.log_scale})"
        return (
            f"m* ~ {show(self.cutoff_base)}^({self.cutoff_exponent}), "
            f"risk = O({show(self.risk_base)}^({self.risk_exponent}))"
        )


def theoretical_rate(target, noise):
    """Cutoff rule and rate for a (target, noise) regularity pair.

    >>> theoretical_rate(OrdinarySmoothTarget(1), OrdinarySmoothNoise(1)).risk_exponent
    Fraction(-2, 5)
    """
    if isinstance(target, OrdinarySmoothTarget) and isinstance(noise, OrdinarySmoothNoise):
        denom = 2 * noise.a + 2 * target.beta + 1
        return Rate("J", 1 / denom, "J", -2 * target.beta / denom)
    if isinstance(target, OrdinarySmoothTarget) and isinstance(noise, SuperSmoothNoise):
        return Rate("lnJ", 1 / noise.s, "lnJ", -2 * target.beta / noise.s, noise.b)
    if isinstance(target, SuperSmoothTarget) and isinstance(noise, OrdinarySmoothNoise):
        return Rate("lnJ", 1 / target.s, "J", Fraction(-1), target.c)
    if isinstance(target, SuperSmoothTarget) and isinstance(noise, SuperSmoothNoise):
        if target.s != noise.s:
            raise ValueError("super smooth target and noise must share the exponent s")
        return Rate("lnJ", 1 / target.s, "J", -target.c / (noise.b + target.c), noise.b + target.c)
    raise TypeError(f"unsupported class pair: {type(target).__name__}, {type(noise).__name__}")
