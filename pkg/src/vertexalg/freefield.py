"""Exact weight-truncated free-field engine over Laurent chart rings.

The state space is a Fock module for n pairs of commuting fields: a weight-0
coordinate field per variable and its weight-1 conjugate frame field.  A
basis state is a Laurent monomial in the zero modes times a multiset of
creation symbols; every _(n) product is computed recursively from the axioms
(vacuum, translation, skew-symmetry, Jacobi, quasi-associativity), so this
module is the ground truth the structured algebroid layer is checked against.

Creation symbols are normalized divided translates:
    ('y', i, m)  <->  T^m(y_i)/m!        conformal weight m,  m >= 1
    ('d', i, m)  <->  T^m(dual_i)/m!     conformal weight m+1, m >= 0
where dual_i is the frame field paired with y_i.  Negative zero-mode
exponents are allowed: the inverse coordinate is a genuine state and its
modes are computed from the inverse of the coordinate field.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import InhomogeneousInput, VariableMismatch, WeightBoundExceeded
from .laurent import LaurentElement
from .scalar import ONE, ZERO, ParamScalar

Symbol = tuple[str, int, int]  # (class 'y'|'d', coordinate index, order m)
ExpVec = tuple[int, ...]
TermKey = tuple[ExpVec, tuple[Symbol, ...]]
Terms = dict[TermKey, ParamScalar]


def _sym_weight(s: Symbol) -> int:
    return s[2] if s[0] == "y" else s[2] + 1


def _sort_key(s: Symbol):
    # coordinate symbols before frame symbols; ascending index; descending order
    return (0 if s[0] == "y" else 1, s[1], -s[2])


def _term_weight(key: TermKey) -> int:
    return sum(_sym_weight(s) for s in key[1])


def _binom(l: int, m: int) -> Fraction:
    num = 1
    for t in range(m):
        num *= l - t
    return Fraction(num, math.factorial(m))


def _partitions(total: int):
    """All multisets of parts >= 1 summing to total, as sorted tuples."""
    if total == 0:
        yield ()
        return

    def rec(remaining, cap):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    yield from rec(total, total)


def _add_term(acc: Terms, key: TermKey, coeff) -> None:
    s = acc.get(key, ZERO) + coeff
    if s.is_zero():
        acc.pop(key, None)
    else:
        acc[key] = s


class FreeFieldAlgebra:
    """Context object: variable list plus the session conformal weight bound."""

    def __init__(self, variables: tuple[str, ...], max_weight: int = 3):
        self.variables = tuple(variables)
        self.n = len(self.variables)
        self.max_weight = max_weight
        self._zero_exp = (0,) * self.n

    # -- element constructors ------------------------------------------

    def element(self, terms: Mapping[TermKey, ParamScalar]) -> "FreeFieldElement":
        return FreeFieldElement(self, terms)

    def zero(self) -> "FreeFieldElement":
        return self.element({})

    def vacuum(self) -> "FreeFieldElement":
        return self.element({(self._zero_exp, ()): ONE})

    def coordinate(self, i: int) -> "FreeFieldElement":
        exp = list(self._zero_exp)
        exp[i - 1] = 1
        return self.element({(tuple(exp), ()): ONE})

    def frame(self, i: int) -> "FreeFieldElement":
        return self.element({(self._zero_exp, (("d", i, 0),)): ONE})

    def from_laurent(self, f: LaurentElement) -> "FreeFieldElement":
        if f.variables != self.variables:
            raise VariableMismatch("laurent element over wrong variable list")
        return self.element({(exp, ()): c for exp, c in f.terms.items()})

    def word(self, f: LaurentElement, symbols: Iterable[Symbol]) -> "FreeFieldElement":
        """Raw normally ordered word: zero-mode prefix f times creation symbols."""
        if f.variables != self.variables:
            raise VariableMismatch("laurent element over wrong variable list")
        tail = tuple(sorted(symbols, key=_sort_key))
        return self.element({(exp, tail): c for exp, c in f.terms.items()})

    def virasoro_element(self) -> "FreeFieldElement":
        terms: Terms = {}
        for j in range(1, self.n + 1):
            tail = tuple(sorted([("y", j, 1), ("d", j, 0)], key=_sort_key))
            terms[(self._zero_exp, tail)] = ONE
        return self.element(terms)

    # -- mode actions of the generating fields ---------------------------

    def _gen_mode(self, cls: str, i: int, p: int, terms: Terms) -> Terms:
        """Apply mode p of coordinate field i (cls 'y') or frame field i (cls 'd')."""
        out: Terms = {}
        for (alpha, tail), coeff in terms.items():
            if cls == "y":
                if p <= -1:
                    if p == -1:
                        new = list(alpha)
                        new[i - 1] += 1
                        _add_term(out, (tuple(new), tail), coeff)
                    else:
                        sym = ("y", i, -1 - p)
                        newtail = tuple(sorted(tail + (sym,), key=_sort_key))
                        _add_term(out, (alpha, newtail), coeff)
                else:
                    sym = ("d", i, p)
                    count = tail.count(sym)
                    if count:
                        lst = list(tail)
                        lst.remove(sym)
                        _add_term(out, (alpha, tuple(lst)), coeff * (-count))
            else:
                if p <= -1:
                    sym = ("d", i, -1 - p)
                    newtail = tuple(sorted(tail + (sym,), key=_sort_key))
                    _add_term(out, (alpha, newtail), coeff)
                elif p == 0:
                    e = alpha[i - 1]
                    if e:
                        new = list(alpha)
                        new[i - 1] = e - 1
                        _add_term(out, (tuple(new), tail), coeff * e)
                else:
                    sym = ("y", i, p)
                    count = tail.count(sym)
                    if count:
                        lst = list(tail)
                        lst.remove(sym)
                        _add_term(out, (alpha, tuple(lst)), coeff * count)
        return out

    def _w_mode(self, i: int, n: int, terms: Terms) -> Terms:
        """Apply mode n of the inverse coordinate field for variable i.

        The coordinate field splits as creation part A(z) plus annihilation
        part B(z); all its modes commute, B is locally nilpotent, and the
        inverse field is the geometric series sum_k (-1)^k A^{-1-k} B^k.
        """
        out: Terms = {}
        layer: dict[int, Terms] = {0: dict(terms)}  # z-power -> terms
        k = 0
        while layer:
            for zpow, tl in layer.items():
                big = -n - 1 - zpow
                if big < 0:
                    continue
                for parts in _partitions(big):
                    l = len(parts)
                    mult = Fraction(math.factorial(l))
                    for m in set(parts):
                        mult /= math.factorial(parts.count(m))
                    factor = (-1) ** k * _binom(-1 - k, l) * mult
                    syms = tuple(("y", i, m) for m in parts)
                    for (alpha, tail), coeff in tl.items():
                        new = list(alpha)
                        new[i - 1] -= 1 + k + l
                        newtail = tuple(sorted(tail + syms, key=_sort_key))
                        _add_term(out, (tuple(new), newtail), coeff * factor)
            # one more annihilation layer: B(z) contributes z^{-p-1} per mode p
            nxt: dict[int, Terms] = {}
            for zpow, tl in layer.items():
                orders = {s[2] for key in tl for s in key[1] if s[:2] == ("d", i)}
                for p in orders:
                    res = self._gen_mode("y", i, p, tl)
                    if res:
                        tgt = nxt.setdefault(zpow - p - 1, {})
                        for key, c in res.items():
                            _add_term(tgt, key, c)
            layer = {z: t for z, t in nxt.items() if t}
            k += 1
        return out

    # -- the recursive product kernel -----------------------------------

    def _peel(self, alpha: ExpVec, tail: tuple[Symbol, ...], rng=None):
        """Split a basis word as c_(-1) applied to a shorter word.

        Returns (mode_fn, c_weight, alpha', tail') where mode_fn(l, terms)
        applies the l-th mode of the peeled factor c.  Inverse coordinates
        are peeled only once the symbol tail is empty, where their modes
        act without contractions against frame symbols of the remainder.
        """
        choices = []
        for idx in range(len(tail)):
            choices.append(("sym", idx))
        for i in range(1, self.n + 1):
            if alpha[i - 1] > 0:
                choices.append(("pos", i))
        if not tail:
            for i in range(1, self.n + 1):
                if alpha[i - 1] < 0:
                    choices.append(("neg", i))
        pick = rng.choice(choices) if rng is not None else choices[-1]
        kind, val = pick
        if kind == "sym":
            sym = tail[val]
            cls, i, m = sym
            rest = tail[:val] + tail[val + 1:]

            def mode_fn(l, terms, cls=cls, i=i, m=m):
                factor = (-1) ** m * _binom(l, m)
                if factor == 0:
                    return {}
                res = self._gen_mode(cls, i, l - m, terms)
                return {key: c * factor for key, c in res.items()}

            return mode_fn, _sym_weight(sym), alpha, rest
        if kind == "pos":
            i = val
            new = list(alpha)
            new[i - 1] -= 1
            return (lambda l, terms, i=i: self._gen_mode("y", i, l, terms),
                    0, tuple(new), tail)
        i = val
        new = list(alpha)
        new[i - 1] += 1
        return (lambda l, terms, i=i: self._w_mode(i, l, terms),
                0, tuple(new), tail)

    def _word_mode(self, alpha: ExpVec, tail: tuple[Symbol, ...], n: int,
                   terms: Terms, rng=None) -> Terms:
        """Apply mode n of the basis word (alpha, tail) to a homogeneous state."""
        if not terms:
            return {}
        if not tail and alpha == self._zero_exp:
            return dict(terms) if n == -1 else {}
        wt_b = _term_weight(next(iter(terms)))
        wt_a = sum(_sym_weight(s) for s in tail)
        if wt_a + wt_b - n - 1 < 0:
            return {}
        mode_fn, wt_c, alpha2, tail2 = self._peel(alpha, tail, rng)
        wt_rest = sum(_sym_weight(s) for s in tail2)
        out: Terms = {}
        # quasi-associativity: (c_(-1) a')_(n) =
        #   sum_{j>=0} c_(-1-j) a'_(n+j)  +  sum_{j>=1} a'_(n-j) c_(-1+j)
        j = 0
        while wt_rest + wt_b - (n + j) - 1 >= 0:
            inner = self._word_mode(alpha2, tail2, n + j, terms, rng)
            if inner:
                for key, c in mode_fn(-1 - j, inner).items():
                    _add_term(out, key, c)
            j += 1
        for j in range(1, wt_c + wt_b + 1):
            inner = mode_fn(-1 + j, terms)
            if inner:
                for key, c in self._word_mode(alpha2, tail2, n - j, inner, rng).items():
                    _add_term(out, key, c)
        return out


class FreeFieldElement:
    """Weight-homogeneous exact sum of normally ordered basis words."""

    __slots__ = ("algebra", "_terms", "_weight")

    def __init__(self, algebra: FreeFieldAlgebra, terms: Mapping[TermKey, ParamScalar]):
        self.algebra = algebra
        clean: Terms = {}
        weight = None
        for key, coeff in terms.items():
            if isinstance(coeff, (int, Fraction)):
                coeff = ParamScalar.of(coeff)
            if coeff.is_zero():
                continue
            alpha, tail = key
            key = (tuple(alpha), tuple(sorted(tail, key=_sort_key)))
            w = _term_weight(key)
            if weight is None:
                weight = w
            elif w != weight:
                raise InhomogeneousInput(
                    f"mixed conformal weights {weight} and {w} in one element"
                )
            _add_term(clean, key, coeff)
        self._terms = clean
        self._weight = weight if clean else None

    @property
    def terms(self) -> Terms:
        return dict(self._terms)

    @property
    def weight(self) -> int | None:
        return self._weight

    def is_zero(self) -> bool:
        return not self._terms

    def _check(self, other: "FreeFieldElement") -> None:
        if self.algebra.variables != other.algebra.variables:
            raise VariableMismatch("elements over different variable lists")

    def __add__(self, other: "FreeFieldElement") -> "FreeFieldElement":
        self._check(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            _add_term(out, key, c)
        return FreeFieldElement(self.algebra, out)

    def __neg__(self) -> "FreeFieldElement":
        return FreeFieldElement(self.algebra, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "FreeFieldElement") -> "FreeFieldElement":
        return self + (-other)

    def scale(self, c) -> "FreeFieldElement":
        if isinstance(c, (int, Fraction)):
            c = ParamScalar.of(c)
        return FreeFieldElement(self.algebra, {k: c * v for k, v in self._terms.items()})

    def __mul__(self, c) -> "FreeFieldElement":
        return self.scale(c)

    __rmul__ = __mul__

    def substitute_params(self, assignment) -> "FreeFieldElement":
        return FreeFieldElement(
            self.algebra, {k: c.substitute(assignment) for k, c in self._terms.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeFieldElement):
            return NotImplemented
        return (self.algebra.variables == other.algebra.variables
                and self._terms == other._terms)

    def __hash__(self) -> int:
        return hash((self.algebra.variables, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"FreeFieldElement({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        names = self.algebra.variables
        parts = []
        for (alpha, tail) in sorted(self._terms):
            c = self._terms[(alpha, tail)]
            factors = []
            for v, e in zip(names, alpha):
                if e:
                    factors.append(v if e == 1 else f"{v}^{e}")
            for cls, i, m in tail:
                base = names[i - 1] if cls == "y" else f"d{i}"
                factors.append(base if (cls == "d" and m == 0) else f"T{m}({base})")
            body = "*".join(factors) or "1"
            cs = str(c)
            if " " in cs:
                cs = f"({cs})"
            parts.append(body if cs == "1" else f"{cs}*{body}")
        return " + ".join(parts)


# -- public operations -----------------------------------------------------


def nproduct(a: FreeFieldElement, n: int, b: FreeFieldElement,
             rng=None) -> FreeFieldElement:
    """The _(n) product, computed recursively from the defining axioms."""
    alg = a.algebra
    a._check(b)
    if a.is_zero() or b.is_zero():
        return alg.zero()
    rw = a.weight + b.weight - n - 1
    if rw < 0:
        return alg.zero()
    if rw > alg.max_weight:
        raise WeightBoundExceeded(
            f"result weight {rw} exceeds bound {alg.max_weight}"
        )
    out: Terms = {}
    for (alpha, tail), coeff in a._terms.items():
        for key, c in alg._word_mode(alpha, tail, n, b._terms, rng).items():
            _add_term(out, key, coeff * c)
    return FreeFieldElement(alg, out)


def translate(a: FreeFieldElement) -> FreeFieldElement:
    """The translation operator T, a derivation of the normal ordering."""
    alg = a.algebra
    if a.is_zero():
        return a
    if a.weight + 1 > alg.max_weight:
        raise WeightBoundExceeded(
            f"result weight {a.weight + 1} exceeds bound {alg.max_weight}"
        )
    out: Terms = {}
    for (alpha, tail), coeff in a._terms.items():
        for i in range(1, alg.n + 1):
            e = alpha[i - 1]
            if e:
                new = list(alpha)
                new[i - 1] = e - 1
                newtail = tuple(sorted(tail + (("y", i, 1),), key=_sort_key))
                _add_term(out, (tuple(new), newtail), coeff * e)
        for idx, (cls, i, m) in enumerate(tail):
            lst = list(tail)
            lst[idx] = (cls, i, m + 1)
            newtail = tuple(sorted(lst, key=_sort_key))
            _add_term(out, (alpha, newtail), coeff * (m + 1))
    return FreeFieldElement(alg, out)


def translate_power(a: FreeFieldElement, j: int) -> FreeFieldElement:
    """T^j(a)/j!, the divided translate."""
    out = a
    for _ in range(j):
        out = translate(out)
    return out.scale(Fraction(1, math.factorial(j)))


def axiom_defect(kind: str, *args, rng=None) -> FreeFieldElement:
    """LHS minus RHS of a named axiom instance; zero means the axiom holds."""
    if kind == "vacuum":
        (a,) = args
        vac = a.algebra.vacuum()
        return nproduct(a, -1, vac, rng) - a
    if kind == "translation":
        a, n, b = args
        return nproduct(translate(a), n, b, rng) + nproduct(a, n - 1, b, rng).scale(n)
    if kind == "skew":
        a, n, b = args
        lhs = nproduct(a, n, b, rng)
        alg = a.algebra
        rhs = alg.zero()
        j = 0
        while b.weight + a.weight - (n + j) - 1 >= 0:
            term = nproduct(b, n + j, a, rng)
            if not term.is_zero():
                rhs = rhs + translate_power(term, j).scale((-1) ** (n + 1 + j))
            j += 1
        return lhs - rhs
    if kind == "jacobi":
        a, m, b, n, c = args
        alg = a.algebra
        lhs = nproduct(a, m, nproduct(b, n, c, rng), rng) - nproduct(
            b, n, nproduct(a, m, c, rng), rng
        )
        rhs = alg.zero()
        j = 0
        while a.weight + b.weight - j - 1 >= 0:
            coeff = _binom(m, j)
            if coeff:
                inner = nproduct(a, j, b, rng)
                if not inner.is_zero():
                    rhs = rhs + nproduct(inner, m + n - j, c, rng).scale(coeff)
            j += 1
        return lhs - rhs
    if kind == "quasi_assoc":
        a, b, c, n = args
        alg = a.algebra
        lhs = nproduct(nproduct(a, -1, b, rng), n, c, rng)
        rhs = alg.zero()
        j = 0
        while b.weight + c.weight - (n + j) - 1 >= 0:
            inner = nproduct(b, n + j, c, rng)
            if not inner.is_zero():
                rhs = rhs + nproduct(a, -1 - j, inner, rng)
            j += 1
        for j in range(1, a.weight + c.weight + 1):
            inner = nproduct(a, -1 + j, c, rng)
            if not inner.is_zero():
                rhs = rhs + nproduct(b, n - j, inner, rng)
        return lhs - rhs
    raise ValueError(f"unknown axiom kind {kind!r}")


def virasoro(n_vars: int, max_weight: int = 4) -> FreeFieldElement:
    """The conformal element L = sum_j T(y_j) applied to the j-th frame field."""
    alg = FreeFieldAlgebra(tuple(f"y{i}" for i in range(1, n_vars + 1)), max_weight)
    return alg.virasoro_element()


def frame_filtration_part(a: FreeFieldElement, degree: int) -> FreeFieldElement:
    """Terms whose count of frame-field symbols is exactly the given degree.

    The frame-symbol count is the filtration degree whose associated graded
    carries the quasiclassical (Poisson) vertex structure; projecting a
    product onto its expected top degree extracts the classical value.
    """
    return FreeFieldElement(
        a.algebra,
        {key: c for key, c in a.terms.items()
         if sum(1 for s in key[1] if s[0] == "d") == degree},
    )


def conformal_invariance_defect(xi: FreeFieldElement) -> FreeFieldElement:
    """Leading part of xi_(0)L for a weight-1 field xi and the conformal element L.

    Vanishes for every xi = sum f_i applied to frame fields with polynomial
    f_i: the quantum product xi_(0)L is a pure second translate (one
    filtration step down), so its frame-symbol component, the value in the
    quasiclassical limit, is zero.
    """
    full = nproduct(xi, 0, xi.algebra.virasoro_element())
    return frame_filtration_part(full, 1)
