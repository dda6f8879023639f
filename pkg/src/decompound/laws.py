"""Jump and noise laws: sampling plus closed-form transforms used as oracles.

The set of laws is closed on purpose. Each one knows how to sample itself
and, where a closed form exists, its characteristic function, Mellin
transform and density.
"""

from dataclasses import dataclass
import math
import re

import numpy as np
from scipy import special, stats


class Unsupported(NotImplementedError):
    """The law has no closed form for the requested quantity."""


class OutsideStrip(ValueError):
    """Mellin abscissa outside the fundamental strip."""


class LawSyntaxError(ValueError):
    pass


def _positive(name, value):
    value = float(value)
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be a positive finite number, got {value}")
    return value


def _fmt(v):
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


class Law:
    """Base class. Subclasses are frozen dataclasses."""

    #: whether every draw is strictly positive
    positive_support = False
    #: whether E[X^2] is finite (moment-based checks are skipped otherwise)
    has_second_moment = True
    has_density = True

    def sample(self, count, rng):
        raise NotImplementedError

    def _cf_nonneg(self, u):
        raise Unsupported(f"{type(self).__name__} has no closed-form characteristic function")

    def cf(self, u):
        """Characteristic function, Hermitian by construction."""
        u = np.asarray(u, dtype=float)
        val = np.asarray(self._cf_nonneg(np.abs(u)), dtype=complex)
        return np.where(u < 0, np.conj(val), val)

    def mellin(self, s):
        raise Unsupported(f"{type(self).__name__} has no closed-form Mellin transform")

    def pdf(self, x):
        raise Unsupported(f"{type(self).__name__} has no density")

    def literal(self):
        raise NotImplementedError

    def __str__(self):
        return self.literal()


@dataclass(frozen=True)
class Gaussian(Law):
    mean: float = 0.0
    sd: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "sd", _positive("sd", self.sd))

    def sample(self, count, rng):
        return rng.normal(self.mean, self.sd, size=count)

    def _cf_nonneg(self, u):
        return np.exp(1j * u * self.mean - 0.5 * (self.sd * u) ** 2)

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mean) / self.sd
        return np.exp(-0.5 * z * z) / (self.sd * math.sqrt(2 * math.pi))

    def literal(self):
        return f"N({_fmt(self.mean)},{_fmt(self.sd)})"


@dataclass(frozen=True)
class GaussianMixture(Law):
    weights: tuple
    means: tuple
    sds: tuple

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        mu = tuple(float(v) for v in self.means)
        sd = tuple(_positive("sd", v) for v in self.sds)
        if not (len(w) == len(mu) == len(sd) >= 1):
            raise ValueError("mixture weights, means and sds must have the same nonzero length")
        if any(v < 0 for v in w):
            raise ValueError("mixture weights must be nonnegative")
        if abs(math.fsum(w) - 1.0) > 1e-12:
            raise ValueError(f"mixture weights must sum to 1, got {math.fsum(w)!r}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "means", mu)
        object.__setattr__(self, "sds", sd)

    def sample(self, count, rng):
        comp = rng.choice(len(self.weights), size=count, p=self.weights)
        mu = np.asarray(self.means)[comp]
        sd = np.asarray(self.sds)[comp]
        return mu + sd * rng.standard_normal(count)

    def _cf_nonneg(self, u):
        out = np.zeros(np.shape(u), dtype=complex)
        for w, mu, sd in zip(self.weights, self.means, self.sds):
            out = out + w * np.exp(1j * u * mu - 0.5 * (sd * u) ** 2)
        return out

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return sum(w * Gaussian(mu, sd).pdf(x) for w, mu, sd in zip(self.weights, self.means, self.sds))

    def literal(self):
        parts = [f"{_fmt(w)}:{Gaussian(mu, sd).literal()}" for w, mu, sd in zip(self.weights, self.means, self.sds)]
        return "mixture(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class Gamma(Law):
    shape: float
    scale: float = 1.0

    positive_support = True

    def __post_init__(self):
        object.__setattr__(self, "shape", _positive("shape", self.shape))
        object.__setattr__(self, "scale", _positive("scale", self.scale))

    def sample(self, count, rng):
        return rng.gamma(self.shape, self.scale, size=count)

    def _cf_nonneg(self, u):
        return (1 - 1j * self.scale * u) ** (-self.shape)

    def pdf(self, x):
        return stats.gamma.pdf(x, self.shape, scale=self.scale)

    def literal(self):
        return f"gamma({_fmt(self.shape)},{_fmt(self.scale)})"


@dataclass(frozen=True)
class Cauchy(Law):
    location: float = 0.0
    scale: float = 1.0

    has_second_moment = False

    def __post_init__(self):
        object.__setattr__(self, "location", float(self.location))
        object.__setattr__(self, "scale", _positive("scale", self.scale))

    def sample(self, count, rng):
        return self.location + self.scale * rng.standard_cauchy(count)

    def _cf_nonneg(self, u):
        return np.exp(1j * u * self.location - self.scale * u)

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.location) / self.scale
        return 1.0 / (math.pi * self.scale * (1 + z * z))

    def literal(self):
        return f"cauchy({_fmt(self.location)},{_fmt(self.scale)})"


@dataclass(frozen=True)
class Beta(Law):
    a: float
    b: float

    positive_support = True

    def __post_init__(self):
        object.__setattr__(self, "a", _positive("alpha", self.a))
        object.__setattr__(self, "b", _positive("beta", self.b))

    def sample(self, count, rng):
        return rng.beta(self.a, self.b, size=count)

    def mellin(self, s):
        # E[X^(s-1)] = B(a + s - 1, b) / B(a, b), defined for Re(s) > 1 - a
        s = np.asarray(s, dtype=complex)
        if np.any(s.real <= 1 - self.a):
            raise OutsideStrip(f"Re(s) must exceed {1 - self.a} for {self.literal()}")
        a, b = self.a, self.b
        return np.exp(
            special.loggamma(a + s - 1) + special.loggamma(a + b)
            - special.loggamma(a) - special.loggamma(a + b + s - 1)
        )

    def pdf(self, x):
        return stats.beta.pdf(x, self.a, self.b)

    def mean_log(self):
        return special.digamma(self.a) - special.digamma(self.a + self.b)

    def literal(self):
        return f"beta({_fmt(self.a)},{_fmt(self.b)})"


@dataclass(frozen=True)
class PointMass(Law):
    x0: float

    has_density = False

    def __post_init__(self):
        x0 = float(self.x0)
        if not math.isfinite(x0):
            raise ValueError("point mass location must be finite")
        object.__setattr__(self, "x0", x0)

    @property
    def positive_support(self):
        return self.x0 > 0

    def sample(self, count, rng):
        return np.full(count, self.x0)

    def _cf_nonneg(self, u):
        return np.exp(1j * u * self.x0)

    def mellin(self, s):
        if self.x0 <= 0:
            raise Unsupported("Mellin transform needs a point mass at a positive location")
        s = np.asarray(s, dtype=complex)
        return np.exp((s - 1) * math.log(self.x0))

    def literal(self):
        return f"point({_fmt(self.x0)})"


@dataclass(frozen=True)
class Degenerate0(Law):
    """The constant 0, used as "no noise"."""

    has_density = False

    def sample(self, count, rng):
        return np.zeros(count)

    def _cf_nonneg(self, u):
        return np.ones(np.shape(u), dtype=complex)

    def literal(self):
        return "none"


# module-level operations


def sample(law, count, rng):
    """Draw ``count`` i.i.d. values from ``law`` using the generator ``rng``."""
    count = int(count)
    if count < 0:
        raise ValueError("count must be nonnegative")
    return np.asarray(law.sample(count, rng), dtype=float)


def analytic_cf(law, u):
    """Closed-form characteristic function; a Python complex for scalar ``u``."""
    val = law.cf(u)
    return complex(val) if np.ndim(val) == 0 else val


def analytic_mellin(law, c, t):
    """Closed-form Mellin transform at ``s = c + i t``."""
    s = c + 1j * np.asarray(t, dtype=float)
    val = law.mellin(s)
    return complex(val) if np.ndim(val) == 0 else val


def analytic_density(law, x):
    if not law.has_density:
        raise Unsupported(f"{law.literal()} is atomic and has no density")
    val = law.pdf(x)
    return float(val) if np.ndim(val) == 0 else np.asarray(val, dtype=float)


# literal grammar: name(args), mixture(w:comp, w:comp, ...)

_NAME = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*")


def _split_top(text):
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


def _numbers(args, text, n):
    try:
        vals = [float(a) for a in args]
    except ValueError:
        raise LawSyntaxError(f"non-numeric parameter in {text!r}") from None
    if len(vals) not in n:
        raise LawSyntaxError(f"{text!r}: expected {' or '.join(map(str, n))} parameters, got {len(vals)}")
    return vals


def parse_law(text):
    """Parse a law literal such as ``mixture(0.3:N(-3.5,1), 0.7:N(3.5,1))``.

    >>> parse_law("gamma(2,1)")
    Gamma(shape=2.0, scale=1.0)
    >>> parse_law("none")
    Degenerate0()
    """
    text = text.strip()
    if text.lower() in ("none", "zero", "0"):
        return Degenerate0()
    m = _NAME.match(text)
    if not m or not text.endswith(")") or "(" not in text:
        raise LawSyntaxError(f"cannot parse law {text!r}")
    name = m.group(1)
    inner = text[m.end():]
    if not inner.startswith("("):
        raise LawSyntaxError(f"cannot parse law {text!r}")
    args = _split_top(inner[1:-1])
    try:
        if name in ("N", "normal", "gaussian"):
            mean, sd = _numbers(args, text, (2,))
            return Gaussian(mean, sd)
        if name == "gamma":
            vals = _numbers(args, text, (1, 2))
            return Gamma(*vals)
        if name == "cauchy":
            return Cauchy(*_numbers(args, text, (2,)))
        if name == "beta":
            return Beta(*_numbers(args, text, (2,)))
        if name in ("point", "pointmass", "dirac"):
            return PointMass(*_numbers(args, text, (1,)))
        if name == "mixture":
            weights, means, sds = [], [], []
            for item in args:
                w, sep, comp = item.partition(":")
                if not sep:
                    raise LawSyntaxError(f"mixture component {item!r} lacks a weight")
                law = parse_law(comp)
                if not isinstance(law, Gaussian):
                    raise LawSyntaxError("mixture components must be Gaussian")
                weights.append(float(w))
                means.append(law.mean)
                sds.append(law.sd)
            return GaussianMixture(tuple(weights), tuple(means), tuple(sds))
    except LawSyntaxError:
        raise
    except ValueError as exc:
        raise LawSyntaxError(f"invalid law {text!r}: {exc}") from None
    raise LawSyntaxError(f"unknown law {name!r}")
