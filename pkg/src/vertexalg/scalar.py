"""Exact coefficient arithmetic: rationals extended by formal parameters.

A ParamScalar is a polynomial in formal parameters (k, gluing coefficients
c_ab, ...) with Fraction coefficients, kept in canonical sparse form.  All
other modules use these as their coefficient ring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .errors import NonlinearCondition, NonScalarDivisor

# A parameter monomial: sorted tuple of (name, positive exponent).
Monomial = tuple[tuple[str, int], ...]

RationalLike = Union[int, Fraction]


def _mul_monomials(m1: Monomial, m2: Monomial) -> Monomial:
    exps: dict[str, int] = {}
    for name, e in m1:
        exps[name] = exps.get(name, 0) + e
    for name, e in m2:
        exps[name] = exps.get(name, 0) + e
    return tuple(sorted((n, e) for n, e in exps.items() if e != 0))


class ParamScalar:
    """Polynomial in formal parameters over the rationals, canonical form.

    Canonical form: no zero coefficients stored, monomial keys unique and
    sorted by name.  Instances are immutable and hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c != 0:
                    clean[mono] = c
        self._terms: dict[Monomial, Fraction] = clean
        self._hash: int | None = None

    # -- constructors ------------------------------------------------

    @staticmethod
    def of(value: RationalLike) -> "ParamScalar":
        c = Fraction(value)
        return ParamScalar({(): c} if c else {})

    @staticmethod
    def var(name: str) -> "ParamScalar":
        return ParamScalar({((name, 1),): Fraction(1)})

    @staticmethod
    def zero() -> "ParamScalar":
        return ParamScalar({})

    @staticmethod
    def one() -> "ParamScalar":
        return ParamScalar.of(1)

    # -- queries -----------------------------------------------------

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == () for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise NonScalarDivisor("non-scalar divisor")
        return self._terms.get((), Fraction(0))

    def parameters(self) -> set[str]:
        return {name for mono in self._terms for name, _ in mono}

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce(other) -> "ParamScalar":
        if isinstance(other, ParamScalar):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamScalar.of(other)
        return NotImplemented

    def __add__(self, other) -> "ParamScalar":
        other = ParamScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self._terms)
        for mono, c in other._terms.items():
            s = out.get(mono, Fraction(0)) + c
            if s:
                out[mono] = s
            else:
                out.pop(mono, None)
        return ParamScalar(out)

    __radd__ = __add__

    def __neg__(self) -> "ParamScalar":
        return ParamScalar({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "ParamScalar":
        other = ParamScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ParamScalar":
        return ParamScalar._coerce(other) - self

    def __mul__(self, other) -> "ParamScalar":
        other = ParamScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mul_monomials(m1, m2)
                s = out.get(m, Fraction(0)) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return ParamScalar(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ParamScalar":
        other = ParamScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise NonScalarDivisor("non-scalar divisor")
        if not other.is_constant():
            raise NonScalarDivisor("non-scalar divisor")
        inv = Fraction(1) / other.constant_value()
        return self * ParamScalar.of(inv)

    def __pow__(self, n: int) -> "ParamScalar":
        out = ParamScalar.one()
        for _ in range(n):
            out = out * self
        return out

    def substitute(self, assignment: Mapping[str, "RationalLike | ParamScalar"]) -> "ParamScalar":
        """Substitute values (rational or scalar) for some parameters."""
        out = ParamScalar.zero()
        for mono, coeff in self._terms.items():
            value = ParamScalar.of(coeff)
            for name, e in mono:
                if name in assignment:
                    val = ParamScalar._coerce(assignment[name])
                    value = value * val ** e
                else:
                    value = value * ParamScalar({((name, e),): Fraction(1)})
            out = out + value
        return out

    # -- protocol ------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = ParamScalar._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __repr__(self) -> str:
        return f"ParamScalar({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono in sorted(self._terms):
            c = self._terms[mono]
            factors = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in mono
            )
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append(factors)
            elif c == -1:
                parts.append(f"-{factors}")
            else:
                parts.append(f"{c}*{factors}")
        out = parts[0]
        for p in parts[1:]:
            out += f" + {p}" if not p.startswith("-") else f" - {p[1:]}"
        return out


ZERO = ParamScalar.zero()
ONE = ParamScalar.one()


@dataclass
class LinearSolution:
    """Outcome of an exact affine-linear solve in the formal parameters.

    Assignment values are ParamScalars: they may involve the parameters that
    were not solved for.
    """

    status: str  # "unique" | "underdetermined" | "inconsistent"
    assignment: dict[str, ParamScalar] | None = None


def _affine_split(eq: ParamScalar, unknowns: list[str]) -> tuple[list[Fraction], ParamScalar]:
    """Write eq as  const + sum coeffs[i] * unknowns[i];  exact, or raise.

    The constant part may involve parameters outside the unknown list; the
    unknowns themselves must enter with rational coefficients.
    """
    unknown_set = set(unknowns)
    coeffs = [Fraction(0)] * len(unknowns)
    const = ParamScalar.zero()
    for mono, c in eq._terms.items():
        touched = [(name, e) for name, e in mono if name in unknown_set]
        if not touched:
            const = const + ParamScalar({mono: c})
            continue
        if len(touched) > 1 or touched[0][1] > 1 or len(mono) > 1:
            raise NonlinearCondition("nonlinear condition")
        coeffs[unknowns.index(touched[0][0])] += c
    return coeffs, const


def solve_linear_system(
    equations: Iterable[ParamScalar], unknowns: list[str]
) -> LinearSolution:
    """Classify and solve an affine-linear system in the given parameters.

    Exact Gaussian elimination over Fraction.  Returns a unique assignment,
    or flags the system underdetermined / inconsistent.
    """
    rows: list[list] = []
    for eq in equations:
        coeffs, const = _affine_split(eq, unknowns)
        rows.append(list(coeffs) + [const])

    n = len(unknowns)
    pivots: list[tuple[int, int]] = []  # (row, col)
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][col]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, col))
        r += 1

    for row in rows[r:]:
        if row[n] != 0:
            return LinearSolution("inconsistent")
    if len(pivots) < n:
        return LinearSolution("underdetermined")
    assignment = {}
    for row, col in pivots:
        # row reads: u_col + const = 0
        assignment[unknowns[col]] = -rows[row][n]
    return LinearSolution("unique", assignment)
