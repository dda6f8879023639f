"""Empirical characteristic functions and the numerical distinguished logarithm."""

from dataclasses import dataclass
import math

import numpy as np

from .grids import FrequencyGrid, GridMismatch

#: lower clamp on |denominator| in the log-derivative quotient
DENOM_FLOOR = 1e-300
#: cap on the number of complex exponentials held in memory at once
_CHUNK = 1 << 22


class EmptyData(ValueError):
    pass


@dataclass
class ComplexProfile:
    """Complex values tabulated on a symmetric frequency grid.

    When ``hermitian`` is set, ``values[-u] == conj(values[u])`` holds
    exactly: such profiles are built on ``u >= 0`` and mirrored.
    """

    grid: FrequencyGrid
    values: np.ndarray
    hermitian: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.grid.size,):
            raise ValueError(f"expected {self.grid.size} values, got {self.values.shape}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("profile values must be finite")

    @property
    def u(self):
        return self.grid.points

    @property
    def positive(self):
        """Values on ``u >= 0``."""
        return self.values[self.grid.K:]

    def at(self, u):
        """Value at the grid point nearest ``u``."""
        k = int(round(u / self.grid.step)) + self.grid.K
        if not 0 <= k < self.grid.size:
            raise IndexError(f"frequency {u} is off the grid")
        return complex(self.values[k])

    def restrict(self, m):
        sub, sl = self.grid.restrict(m)
        return ComplexProfile(sub, self.values[sl].copy(), self.hermitian)

    def replace(self, values):
        return ComplexProfile(self.grid, values, self.hermitian)

    def is_hermitian(self):
        v = self.values
        return bool(np.array_equal(v[::-1], np.conj(v)))

    def to_rows(self):
        return zip(self.u, self.values.real, self.values.imag)


def mirror(positive):
    """Extend values on ``u >= 0`` to the symmetric grid by conjugation."""
    return np.concatenate([np.conj(positive[:0:-1]), positive])


def mirror_derivative(positive):
    """Same as ``mirror`` for derivatives of Hermitian profiles: ``d(-u) = -conj(d(u))``."""
    return np.concatenate([-np.conj(positive[:0:-1]), positive])


def _check_data(data):
    x = np.asarray(data, dtype=float).ravel()
    if x.size == 0:
        raise EmptyData("empty sample")
    return x


def weighted_transform_pair(x, freqs, weights=None, want_deriv=True):
    """Return ``mean(w e^{i f x})`` and ``mean(i x w e^{i f x})`` for each frequency f.

    ``freqs`` must be uniformly spaced (``f_k = f_0 + k h``). Rows are formed
    in blocks as ``e^{i f_b x} * e^{i j h x}``, re-anchored with an exact
    exponential at every block start, which replaces most complex
    exponentials by multiplications.
    """
    n = x.size
    a = np.ones(n) if weights is None else np.asarray(weights, dtype=float)
    ix = 1j * x * a
    cf = np.empty(freqs.size, dtype=complex)
    deriv = np.empty(freqs.size, dtype=complex) if want_deriv else None
    block = int(min(freqs.size, max(1, min(math.isqrt(freqs.size) + 1, 64, _CHUNK // n))))
    h = freqs[1] - freqs[0] if freqs.size > 1 else 0.0
    powers = np.exp(1j * np.outer(np.arange(block) * h, x))
    for s in range(0, freqs.size, block):
        stop = min(freqs.size, s + block)
        e = powers[: stop - s] * np.exp(1j * freqs[s] * x)
        cf[s:stop] = e @ a
        if want_deriv:
            deriv[s:stop] = e @ ix
    # divide after summing so that a constant sample gives exactly 1
    cf /= n
    if want_deriv:
        deriv /= n
    return cf, deriv


def empirical_cf_pair(data, grid):
    """Empirical CF and its derivative from one pass over the data."""
    x = _check_data(data)
    cf, d = weighted_transform_pair(x, grid.positive)
    cf[0] = 1.0
    d[0] = 1j * x.mean()
    return (
        ComplexProfile(grid, mirror(cf), hermitian=True),
        ComplexProfile(grid, mirror_derivative(d), hermitian=False),
    )


def empirical_cf(data, grid):
    """``(1/N) sum_k exp(i u X_k)`` on ``grid``; equals 1 at ``u = 0``."""
    x = _check_data(data)
    cf, _ = weighted_transform_pair(x, grid.positive, want_deriv=False)
    cf[0] = 1.0
    return ComplexProfile(grid, mirror(cf), hermitian=True)


def empirical_cf_derivative(data, grid):
    """``(1/N) sum_k i X_k exp(i u X_k)`` on ``grid``."""
    return empirical_cf_pair(data, grid)[1]


def _cumtrapz_from_zero(q, step):
    out = np.zeros(q.size, dtype=complex)
    out[1:] = np.cumsum((q[1:] + q[:-1]) * (0.5 * step))
    return out


def log_derivative_quotient(cf, cf_deriv):
    """``cf_deriv / cf`` with ``|cf|`` clamped below at ``DENOM_FLOOR``."""
    c = cf.values
    mod = np.abs(c)
    small = mod < DENOM_FLOOR
    if np.any(small):
        c = c.copy()
        tiny = c[small]
        nonzero = tiny != 0
        tiny[nonzero] /= mod[small][nonzero]
        tiny[~nonzero] = 1.0
        c[small] = DENOM_FLOOR * tiny
    with np.errstate(over="ignore", invalid="ignore"):
        q = cf_deriv.values / c
    return np.nan_to_num(q, nan=0.0, posinf=np.finfo(float).max, neginf=-np.finfo(float).max)


def distinguished_log(cf: ComplexProfile, cf_deriv: ComplexProfile) -> ComplexProfile:
    """Continuous logarithm ``int_0^u cf'/cf`` anchored at ``log cf(0) = 0``.

    The integral is accumulated with the trapezoid rule outward from zero on
    each half-grid. For a Hermitian ``cf`` only the positive half is
    integrated and the negative half is its conjugate.
    """
    if not cf.grid.same_as(cf_deriv.grid):
        raise GridMismatch("cf and its derivative live on different grids")
    K, h = cf.grid.K, cf.grid.step
    q = log_derivative_quotient(cf, cf_deriv)
    pos = _cumtrapz_from_zero(q[K:], h)
    if cf.hermitian:
        values = mirror(pos)
    else:
        neg = _cumtrapz_from_zero(q[K::-1], -h)
        values = np.concatenate([neg[:0:-1], pos])
    with np.errstate(invalid="ignore"):
        values = np.nan_to_num(values, nan=0.0, posinf=np.finfo(float).max, neginf=-np.finfo(float).max)
    return ComplexProfile(cf.grid, values, hermitian=cf.hermitian)
