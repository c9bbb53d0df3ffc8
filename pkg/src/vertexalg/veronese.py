"""Cone-of-monomials models and their quantization verifiers.

A model packages the invariant subring of a polynomial ring generated by all
degree-N monomials (for two variables: x_j maps to y1^(N-j) y2^j) together
with its binomial relations.  On top of it sit the exact checkers: graded
membership of one-forms in the span of generator differentials, the relation
defects produced by quantum products on the twisted punctured plane, the
charge solver that pins the unique gluing multiple, the admissible-gluing
classification by section extension, the quantized gl_2 morphism, graded
derivation computation, and the higher-dimensional obstruction witness.

The identity current convention: the trace element of gl_2 acts on the model
through N times the Euler derivation (see euler_derivation); the factor N is
a normalization choice kept as a documented constant, NORMALIZATION_FACTOR.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebroid import (
    WeightOneElement,
    embed,
    extract,
    fock_algebra,
    gl_basis,
    gl_bracket_table,
    gl_pairing_table,
    morphism_check,
    MorphismReport,
)
from .errors import InhomogeneousInput, VertexAlgError
from .freefield import nproduct, translate
from .geometry import GluingForm, V2, extend_section, invariant_sections
from .laurent import LaurentElement, OneForm, de_rham
from .scalar import ZERO, ParamScalar, solve_linear_system

# the trace of gl_2 maps to NORMALIZATION_FACTOR(N) times the Euler field
def NORMALIZATION_FACTOR(N: int) -> int:
    return N


ExpVec = tuple[int, ...]


@dataclass
class VeroneseModel:
    n: int
    N: int
    degree_bound: int
    variables: tuple[str, ...]
    generators: dict[str, ExpVec]
    relations: list[tuple[tuple[str, str], tuple[str, str]]]

    def generator_element(self, name: str) -> LaurentElement:
        return LaurentElement.monomial(self.variables, self.generators[name])


@dataclass
class ChargeResult:
    status: str  # "unique" | "unconstrained" | "no_solution"
    charge: Fraction | None
    admissible_gluing: GluingForm | None


def _exponents(total: int, n: int):
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _exponents(total - first, n - 1):
            yield (first,) + rest


def build_model(n: int, N: int, degree_bound: int | None = None) -> VeroneseModel:
    """All degree-N monomials as generators plus their binomial syzygies."""
    if n < 2 or N < 1:
        raise ValueError("need n >= 2 and N >= 1")
    if degree_bound is None:
        degree_bound = 2 * N + 2
    variables = tuple(f"y{i}" for i in range(1, n + 1))
    if n == 2:
        generators = {f"x{j}": (N - j, j) for j in range(N + 1)}
        relations = [((f"x{i}", f"x{j}"), (f"x{i + 1}", f"x{j - 1}"))
                     for i in range(N - 1) for j in range(i + 2, N + 1)]
    else:
        exps = sorted(_exponents(N, n), reverse=True)
        generators = {f"x{j}": e for j, e in enumerate(exps)}
        names = list(generators)
        by_product: dict[ExpVec, list[tuple[str, str]]] = {}
        for a in range(len(names)):
            for b in range(a, len(names)):
                key = tuple(x + y for x, y in zip(exps[a], exps[b]))
                by_product.setdefault(key, []).append((names[a], names[b]))
        relations = []
        for pairs in by_product.values():
            anchor = pairs[0]
            for other in pairs[1:]:
                relations.append((anchor, other))
    for (u, v), (w, z) in relations:
        lhs = tuple(x + y for x, y in zip(generators[u], generators[v]))
        rhs = tuple(x + y for x, y in zip(generators[w], generators[z]))
        if lhs != rhs:
            raise VertexAlgError("relation is not a syzygy of the generator map")
    return VeroneseModel(n, N, degree_bound, variables, generators, relations)


# -- graded membership in the span of generator differentials ----------------


def _form_degree(omega: OneForm) -> int | None:
    degs = set()
    for g in omega.components.values():
        degs |= {d + 1 for d in g.degrees()}
    if not degs:
        return None
    if len(degs) > 1:
        raise InhomogeneousInput(f"one-form has mixed internal degrees {sorted(degs)}")
    return degs.pop()


def membership_residuals(omega: OneForm, model: VeroneseModel) -> list[ParamScalar]:
    """Residual conditions for omega to lie in the span, over degree-matched
    invariant monomials, of the generator differentials.

    The span matrix is rational and is eliminated exactly; whatever cannot be
    matched is returned as a list of scalar conditions (possibly involving
    parameters), so an empty-or-zero residual list means membership.
    """
    degree = _form_degree(omega)
    if degree is None:
        return []
    if degree > model.degree_bound:
        raise ValueError(f"degree {degree} exceeds model bound {model.degree_bound}")
    n, N = model.n, model.N
    span: list[OneForm] = []
    if degree >= N and (degree - N) % N == 0:
        for m in _exponents(degree - N, n):
            mono = LaurentElement.monomial(model.variables, m)
            for gexp in model.generators.values():
                g = LaurentElement.monomial(model.variables, gexp)
                span.append(de_rham(g).ring_scale(mono))
    def vec(form: OneForm) -> dict[tuple[int, ExpVec], ParamScalar]:
        return {(i, exp): c for i, g in form.components.items()
                for exp, c in g.terms.items()}
    span_vecs = [vec(s) for s in span]
    target = vec(omega)
    coords = sorted(set(target) | {c for v in span_vecs for c in v})
    rows = []
    for coord in coords:
        coeffs = [v.get(coord, ZERO).constant_value() for v in span_vecs]
        rows.append((coeffs, target.get(coord, ZERO)))
    r = 0
    for c in range(len(span_vecs)):
        pivot = next((i for i in range(r, len(rows)) if rows[i][0][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        prow, prhs = rows[r]
        pv = prow[c]
        for i in range(len(rows)):
            if i != r and rows[i][0][c] != 0:
                f = rows[i][0][c] / pv
                rows[i] = ([x - f * y for x, y in zip(rows[i][0], prow)],
                           rows[i][1] - prhs * ParamScalar.of(f))
        r += 1
        if r == len(rows):
            break
    return [rhs for coeffs, rhs in rows
            if all(x == 0 for x in coeffs) and not rhs.is_zero()]


def omega_membership(omega: OneForm, model: VeroneseModel,
                     degree: int | None = None) -> bool:
    """Exact graded test: is omega a combination of invariant-monomial
    multiples of the generator differentials?"""
    found = _form_degree(omega)
    if degree is not None and found is not None and degree != found:
        raise ValueError(f"stated degree {degree} but computed {found}")
    return not membership_residuals(omega, model)


# -- the twisted punctured-plane gl_2 sections --------------------------------


def gl2_chart_images(k, chart: str = "U1") -> dict[str, WeightOneElement]:
    """Sections on the chart where y1 is invertible, gluing multiple k."""
    if not isinstance(k, ParamScalar):
        k = ParamScalar.of(k)
    y1 = LaurentElement.coordinate(V2, 1)
    y2 = LaurentElement.coordinate(V2, 2)
    inv = LaurentElement.monomial(V2, (-1, 0))
    return {
        "E12": WeightOneElement.field(chart, V2, 2, y1),
        "E21": WeightOneElement.field(chart, V2, 1, y2)
        + WeightOneElement.form(chart, OneForm(V2, {2: inv.scale(-k)})),
        "E11": WeightOneElement.field(chart, V2, 1, y1),
        "E22": WeightOneElement.field(chart, V2, 2, y2)
        + WeightOneElement.form(chart, OneForm(V2, {1: inv.scale(k)})),
    }


RELATION_PAIRS = (("E12", "E22"), ("E11", "E21"))


def relation_defect(model: VeroneseModel, r: int,
                    pair: tuple[str, str] = ("E12", "E22"),
                    k=None) -> WeightOneElement:
    """Quantum lift of the degree-N module relation indexed by r.

    Evaluates (y1^r y2^(N-r))_(-1) applied to the first section minus
    (y1^(r+1) y2^(N-r-1))_(-1) applied to the second in the free-field
    engine; the vector-field parts must cancel exactly, so the value is a
    pure one-form whose membership is the quantization condition.
    """
    if model.n != 2:
        raise ValueError("relation defects are defined for the two-variable model")
    if not 0 <= r < model.N:
        raise ValueError(f"r must satisfy 0 <= r < N, got {r}")
    if pair not in RELATION_PAIRS:
        raise ValueError(f"pair must be one of {RELATION_PAIRS}")
    if k is None:
        k = ParamScalar.var("k")
    images = gl2_chart_images(k)
    alg = fock_algebra(V2, 3)
    N = model.N
    m1 = alg.from_laurent(LaurentElement.monomial(V2, (r, N - r)))
    m2 = alg.from_laurent(LaurentElement.monomial(V2, (r + 1, N - r - 1)))
    out = nproduct(m1, -1, embed(images[pair[0]], alg)) \
        - nproduct(m2, -1, embed(images[pair[1]], alg))
    defect = extract(out, "U1")
    if defect.field_part:
        raise VertexAlgError(
            "relation defect has a vector-field component; the module relation broke"
        )
    return defect


# -- classification and the charge solver -------------------------------------


def classify_admissible(model: VeroneseModel,
                        degree_bound: int = 4) -> list[GluingForm]:
    """Equivariant gluing basis lines under which every invariant-monomial
    multiple of a linear coordinate field extends to a global section.

    Candidates are the basis forms with index sum a + b at most the bound and
    a + b - 2 divisible by N; a candidate survives when extend_section
    succeeds for every monomial field of invariant internal degree up to the
    bound.
    """
    if model.n != 2:
        raise ValueError("classification runs on the two-variable model")
    N = model.N
    candidates = [GluingForm.basis(a, b)
                  for a in range(1, degree_bound)
                  for b in range(1, degree_bound + 1 - a)
                  if (a + b - 2) % N == 0]
    survivors = []
    for omega in candidates:
        ok = True
        for d in range(0, degree_bound + 1):
            if d % N != 0:
                continue
            for v in invariant_sections(d, N, "field"):
                if extend_section(v, omega) is None:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            survivors.append(omega)
    return survivors


def solve_charge(model: VeroneseModel, classify_bound: int = 4) -> ChargeResult:
    """Pin the gluing line by classification, then solve the membership
    conditions of every relation defect for the multiple k."""
    if model.n != 2:
        raise ValueError("the charge solver runs on the two-variable model")
    survivors = classify_admissible(model, classify_bound)
    if len(survivors) != 1:
        raise VertexAlgError(f"expected one admissible gluing line, got {survivors}")
    line = survivors[0]
    if model.N == 1:
        return ChargeResult("unconstrained", None, line)
    k = ParamScalar.var("k")
    conditions: list[ParamScalar] = []
    for pair in RELATION_PAIRS:
        for r in range(model.N):
            defect = relation_defect(model, r, pair, k)
            conditions.extend(membership_residuals(defect.form_part, model))
    sol = solve_linear_system(conditions, ["k"])
    if sol.status == "unique":
        return ChargeResult("unique", sol.assignment["k"].constant_value(), line)
    if sol.status == "underdetermined":
        return ChargeResult("unconstrained", None, line)
    return ChargeResult("no_solution", None, line)


def quantized_gl2(model: VeroneseModel):
    """The gl_2 sections at the solved charge k = N + 1, with their levels."""
    if model.n != 2:
        raise ValueError("the quantized gl_2 action lives on the two-variable model")
    N = model.N
    images = gl2_chart_images(ParamScalar.of(N + 1))
    report = morphism_check(gl_basis(2), gl_bracket_table(2), gl_pairing_table(2),
                            images)
    want = (ParamScalar.of(-N - 2), ParamScalar.of(N))
    if report.status == "pass" and report.levels != want:
        report = MorphismReport("fail", report.levels,
                                [("levels", 1, f"expected {want}")])
    return report, images


# -- graded derivations --------------------------------------------------------


@dataclass
class DerivationReport:
    degree: int
    dimension: int
    monomials: list[ExpVec]
    basis: list[dict[str, LaurentElement]]
    gl_generates: bool


def _rank(vectors: list[list[Fraction]]) -> int:
    mat = [v[:] for v in vectors if any(v)]
    rank = 0
    ncols = len(vectors[0]) if vectors else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][c]
        mat[rank] = [x / pv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def _nullspace(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    mat = [r[:] for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        pv = mat[r][c]
        mat[r] = [x / pv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


def _derivation_rows(model: VeroneseModel, monos: list[ExpVec]):
    """Linear constraints on the generator images of a graded derivation."""
    names = list(model.generators)
    mono_pos = {m: i for i, m in enumerate(monos)}

    def slot(gname: str, exp: ExpVec) -> int | None:
        if any(e < 0 for e in exp):
            return None
        pos = mono_pos.get(exp)
        if pos is None:
            return None
        return len(monos) * names.index(gname) + pos

    ncols = len(names) * len(monos)
    rows: dict[ExpVec, dict[int, Fraction]] = {}
    for (u, v), (w, z) in model.relations:
        contributions = [(u, model.generators[v], 1), (v, model.generators[u], 1),
                         (w, model.generators[z], -1), (z, model.generators[w], -1)]
        targets: set[ExpVec] = set()
        for m in monos:
            for _, other, _ in contributions:
                targets.add(tuple(a + b for a, b in zip(m, other)))
        for target in targets:
            row: dict[int, Fraction] = {}
            for gname, other, sign in contributions:
                col = slot(gname, tuple(a - b for a, b in zip(target, other)))
                if col is not None:
                    row[col] = row.get(col, Fraction(0)) + sign
            row = {c: x for c, x in row.items() if x}
            if row:
                key = (target, (u, v), (w, z))
                rows[key] = row
    dense = []
    for row in rows.values():
        vec = [Fraction(0)] * ncols
        for c, x in row.items():
            vec[c] = x
        dense.append(vec)
    return names, dense, ncols


def derivations(model: VeroneseModel, degree: int) -> DerivationReport:
    """Basis of the degree-d derivations of the model ring, computed by an
    exact nullspace solve on generator-image coefficients, plus a report on
    whether invariant multiples of the linear coordinate fields span it."""
    n, N = model.n, model.N
    if abs(degree) > model.degree_bound:
        raise ValueError(f"degree {degree} exceeds model bound {model.degree_bound}")
    if degree % N != 0 or N + degree < 0:
        return DerivationReport(degree, 0, [], [], True)
    monos = list(_exponents(N + degree, n))
    names, rows, ncols = _derivation_rows(model, monos)
    null = _nullspace(rows, ncols)
    basis = []
    for vec in null:
        images: dict[str, LaurentElement] = {}
        for gi, gname in enumerate(names):
            f = LaurentElement(model.variables)
            for mi, m in enumerate(monos):
                c = vec[gi * len(monos) + mi]
                if c:
                    f = f + LaurentElement.monomial(model.variables, m, c)
            images[gname] = f
        _verify_derivation(model, images)
        basis.append(images)
    gl_vecs = _gl_multiple_vectors(model, degree, monos, names)
    for vec in gl_vecs:
        for row in rows:
            if sum(a * b for a, b in zip(row, vec)):
                raise VertexAlgError("coordinate-field image violates a relation")
    generates = _rank(gl_vecs) == len(null)
    return DerivationReport(degree, len(null), monos, basis, generates)


def _gl_multiple_vectors(model: VeroneseModel, degree: int,
                         monos: list[ExpVec], names: list[str]):
    """Coefficient vectors of m * y_a d/dy_b for invariant monomials m."""
    n = model.n
    mono_pos = {m: i for i, m in enumerate(monos)}
    vecs = []
    for m in _exponents(degree, n):
        for a in range(n):
            for b in range(n):
                vec = [Fraction(0)] * (len(names) * len(monos))
                nonzero = False
                for gi, gname in enumerate(names):
                    gexp = model.generators[gname]
                    if gexp[b] == 0:
                        continue
                    out = list(gexp)
                    out[b] -= 1
                    out[a] += 1
                    exp = tuple(x + y for x, y in zip(out, m))
                    pos = mono_pos.get(exp)
                    if pos is None:
                        raise VertexAlgError("image monomial escaped the graded slice")
                    vec[gi * len(monos) + pos] += gexp[b]
                    nonzero = True
                if nonzero:
                    vecs.append(vec)
    return vecs


def _verify_derivation(model: VeroneseModel, images: dict[str, LaurentElement]):
    for (u, v), (w, z) in model.relations:
        val = images[u] * model.generator_element(v) \
            + model.generator_element(u) * images[v] \
            - images[w] * model.generator_element(z) \
            - model.generator_element(w) * images[z]
        if not val.is_zero():
            raise VertexAlgError("computed derivation does not preserve the relations")


def euler_derivation(model: VeroneseModel) -> dict[str, LaurentElement]:
    """x_j maps to x_j; the trace of gl_2 acts by NORMALIZATION_FACTOR(N)
    times this derivation."""
    return {g: model.generator_element(g) for g in model.generators}


def derivation_in_span(model: VeroneseModel, report: DerivationReport,
                       candidate: dict[str, LaurentElement]) -> bool:
    names = list(model.generators)
    mono_pos = {m: i for i, m in enumerate(report.monomials)}
    vec = [Fraction(0)] * (len(names) * len(report.monomials))
    for gi, gname in enumerate(names):
        for exp, c in candidate.get(gname, LaurentElement(model.variables)).terms.items():
            pos = mono_pos.get(exp)
            if pos is None:
                return False
            vec[gi * len(report.monomials) + pos] = c.constant_value()
    basis_vecs = []
    for images in report.basis:
        bvec = [Fraction(0)] * len(vec)
        for gi, gname in enumerate(names):
            for exp, c in images[gname].terms.items():
                bvec[gi * len(report.monomials) + mono_pos[exp]] = c.constant_value()
        basis_vecs.append(bvec)
    return _rank(basis_vecs) == _rank(basis_vecs + [vec])


# -- the higher-dimensional obstruction witness --------------------------------


def higher_witness(model: VeroneseModel):
    """A one-form produced by quantum products that escapes the generator
    span, certifying that no quantization exists for n >= 3, N >= 2.

    Computes (x3 x2^(N-1))_(-1)(x1 applied to the first frame) minus
    (x3 x2^(N-2) x1)_(-1)(x2 applied to the first frame) in the free-field
    engine, checks it equals (T(x3 x2^(N-2)))_(-1) x2, and runs the graded
    membership test, which must fail.
    """
    if model.n < 3:
        raise ValueError("the witness needs at least three variables")
    if model.N < 2:
        raise ValueError("degree 1 gives a polynomial ring; nothing to witness")
    variables = model.variables
    N = model.N
    alg = fock_algebra(variables, 2)

    def mono(*pairs) -> LaurentElement:
        exp = [0] * model.n
        for i, e in pairs:
            exp[i - 1] += e
        return LaurentElement.monomial(variables, exp)

    x1_d1 = embed(WeightOneElement.field("U1", variables, 1,
                                         LaurentElement.coordinate(variables, 1)), alg)
    x2_d1 = embed(WeightOneElement.field("U1", variables, 1,
                                         LaurentElement.coordinate(variables, 2)), alg)
    w = nproduct(alg.from_laurent(mono((3, 1), (2, N - 1))), -1, x1_d1) \
        - nproduct(alg.from_laurent(mono((3, 1), (2, N - 2), (1, 1))), -1, x2_d1)
    display = nproduct(translate(alg.from_laurent(mono((3, 1), (2, N - 2)))), -1,
                       alg.from_laurent(mono((2, 1))))
    if w != display:
        raise VertexAlgError("witness does not match its closed form")
    witness = extract(w, "U1")
    if witness.field_part:
        raise VertexAlgError("witness has a vector-field component")
    if omega_membership(witness.form_part, model):
        raise VertexAlgError("witness lies in the generator span; no obstruction")
    return witness, "non-quantizable"
