"""Complex (eps=+1) and split-complex (eps=-1) numbers.

A :class:`CEps` is ``re + j*im`` with ``j*j = -eps``.  The two parts may be
Python floats or numpy arrays of a common shape, so the same formulas serve
single points and whole parameter grids.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from .errors import AlgebraMismatchError, SingularDivisorError

__all__ = ["CEps", "arith", "elementary", "as_ceps", "J"]

Real = Union[float, int, np.ndarray]


def _check_eps(eps):
    if eps not in (1, -1):
        raise AlgebraMismatchError(f"eps must be +1 or -1, got {eps!r}")
    return int(eps)


class CEps:
    __slots__ = ("re", "im", "eps")
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, re: Real = 0.0, im: Real = 0.0, eps: int = 1):
        self.re = re
        self.im = im
        self.eps = _check_eps(eps)

    # construction helpers
    @classmethod
    def from_complex(cls, w, eps: int = 1) -> "CEps":
        w = np.asarray(w) if not isinstance(w, complex) else w
        if isinstance(w, np.ndarray):
            return cls(w.real.astype(float), w.imag.astype(float), eps)
        return cls(float(w.real), float(w.imag), eps)

    def to_complex(self):
        """Pack the (re, im) parts into a Python/numpy complex; no algebra implied."""
        return self.re + 1j * self.im

    @property
    def shape(self):
        return np.shape(self.re)

    def __getitem__(self, idx) -> "CEps":
        return CEps(np.asarray(self.re)[idx], np.asarray(self.im)[idx], self.eps)

    def _coerce(self, other) -> "CEps":
        if isinstance(other, CEps):
            if other.eps != self.eps:
                raise AlgebraMismatchError(
                    f"cannot combine eps={self.eps} with eps={other.eps}"
                )
            return other
        if isinstance(other, complex):
            return CEps(other.real, other.imag, self.eps)
        if isinstance(other, (int, float, np.floating, np.integer, np.ndarray)):
            return CEps(other, 0.0 * other if isinstance(other, np.ndarray) else 0.0, self.eps)
        return NotImplemented

    # ring operations
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CEps(self.re + o.re, self.im + o.im, self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CEps(self.re - o.re, self.im - o.im, self.eps)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return CEps(-self.re, -self.im, self.eps)

    def __pos__(self):
        return self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CEps(
            self.re * o.re - self.eps * self.im * o.im,
            self.re * o.im + self.im * o.re,
            self.eps,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        den = o.mod_sq()
        null = den == 0
        if np.any(null):
            n = int(np.count_nonzero(null))
            raise SingularDivisorError(
                f"division by a null-cone element ({n} sample(s)); eps={self.eps}"
            )
        num = self * o.conj()
        return CEps(num.re / den, num.im / den, self.eps)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            raise TypeError("only integer powers are supported")
        n = int(n)
        if n < 0:
            return CEps(np.ones_like(self.re) if isinstance(self.re, np.ndarray) else 1.0,
                        0.0 * self.im, self.eps) / (self ** (-n))
        result = CEps(np.ones_like(self.re) if isinstance(self.re, np.ndarray) else 1.0,
                      0.0 * self.im, self.eps)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # elementary functions
    def conj(self) -> "CEps":
        return CEps(self.re, -self.im, self.eps)

    def mod_sq(self):
        """``re(z * conj(z)) = re**2 + eps*im**2``; negative values occur for eps=-1."""
        return self.re * self.re + self.eps * self.im * self.im

    def exp(self) -> "CEps":
        scale = np.exp(self.re)
        if self.eps == 1:
            return CEps(scale * np.cos(self.im), scale * np.sin(self.im), 1)
        return CEps(scale * np.cosh(self.im), scale * np.sinh(self.im), -1)

    def isclose(self, other, tol: float = 1e-12) -> bool:
        o = self._coerce(other)
        return bool(np.all(np.abs(self.re - o.re) <= tol) and np.all(np.abs(self.im - o.im) <= tol))

    def __eq__(self, other):
        if not isinstance(other, CEps):
            return NotImplemented
        return (self.eps == other.eps and np.array_equal(self.re, other.re)
                and np.array_equal(self.im, other.im))

    def __hash__(self):
        if isinstance(self.re, np.ndarray):
            raise TypeError("array-valued CEps is unhashable")
        return hash((self.re, self.im, self.eps))

    def __repr__(self):
        return f"CEps({self.re!r}, {self.im!r}, eps={self.eps})"


def J(eps: int) -> CEps:
    """The unit ``j`` of the algebra selected by ``eps``."""
    return CEps(0.0, 1.0, eps)


def as_ceps(value, eps: int) -> CEps:
    if isinstance(value, CEps):
        if value.eps != eps:
            raise AlgebraMismatchError(f"expected eps={eps}, got eps={value.eps}")
        return value
    if isinstance(value, complex):
        return CEps(value.real, value.imag, eps)
    return CEps(float(value), 0.0, eps)


_BINARY = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def arith(a: CEps, b: CEps, op: str) -> CEps:
    if a.eps != b.eps:
        raise AlgebraMismatchError(f"cannot combine eps={a.eps} with eps={b.eps}")
    try:
        return _BINARY[op](a, b)
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None


def elementary(z: CEps, fn: str):
    if fn == "conj":
        return z.conj()
    if fn == "mod_sq":
        return z.mod_sq()
    if fn == "re_part":
        return z.re
    if fn == "im_part":
        return z.im
    if fn == "exp":
        return z.exp()
    raise ValueError(f"unknown function {fn!r}")
