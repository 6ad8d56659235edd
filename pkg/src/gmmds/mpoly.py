"""Sparse multivariate polynomials with integer coefficients.

Terms are stored in a dict keyed on exponent tuples (one slot per variable).
Only what the exact determinant expansion needs: ring operations, evaluation,
and a zero test. Coefficients live in Z, so an identically-zero result is
independent of the choice of field.
"""

from __future__ import annotations

from typing import Mapping


class MPoly:
    """Integer-coefficient polynomial in a fixed number of variables."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, int] | None = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, nvars: int, c: int) -> "MPoly":
        zero = (0,) * nvars
        return cls(nvars, {zero: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return isinstance(other, MPoly) and self.terms == other.terms

    def __add__(self, other: "MPoly") -> "MPoly":
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly(self.nvars, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        if not self.terms or not other.terms:
            return MPoly(self.nvars)
        out: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MPoly(self.nvars, out)

    def scale(self, c: int) -> "MPoly":
        if c == 0:
            return MPoly(self.nvars)
        return MPoly(self.nvars, {e: c * v for e, v in self.terms.items()})

    def evaluate_mod(self, point: list[int], p: int) -> int:
        """Value of the polynomial at an integer point, reduced mod p."""
        acc = 0
        for e, c in self.terms.items():
            t = c % p
            for x, d in zip(point, e):
                if d:
                    t = t * pow(x, d, p) % p
            acc = (acc + t) % p
        return acc

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def __repr__(self) -> str:
        return f"MPoly({self.terms})"
