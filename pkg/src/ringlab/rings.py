"""Arbitrary rings (possibly non-associative, non-unital) by structure
constants: annihilator, square ideal, verbal ideals, regularity,
foundations and additions, the characteristic-zero and bounded
decomposition pipelines, mixed central splitting, model construction by
base change, and the categoricity verdict.

Component enrichment: the k_i-action on an indecomposable component is
realized inside its centroid (endomorphisms X with X(xy) = (Xx)y =
x(Xy)), which is a local commutative algebra for the components produced
here; Hensel lifting a field of representatives in the centroid yields
scalar matrices that commute with multiplication by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .artinian import (
    JSeriesReport,
    LocalFactor,
    field_of_representatives,
    j_series,
    local_decomposition,
)
from .bilinear import (
    BilinearMap,
    Carrier,
    FIELD,
    INTEGER,
    WidthReport,
    canonical_span_rows,
    coords_in_rows,
    field_carrier,
    image_submodule,
    module_carrier,
    torsion_split,
    two_sided_kernel,
)
from .domains import Domain, Extension, PrimeField, QQ, Rationals
from .errors import (
    DegenerateInput,
    EnumerationTooLarge,
    ExtensionNotOverK0,
    NoSplit,
    UnsupportedDomain,
    ValidationError,
)
from .linalg import Matrix, kernel_basis
from .modules import (
    submodule_adapted_basis,
    submodule_canonical_gens,
    submodule_contains,
    split_complement,
)
from .scalars import (
    EndoAlgebra,
    ScalarActionReport,
    endo_commutative_algebra,
    largest_scalar_action,
)


@dataclass(frozen=True)
class RingPresentation:
    """A ring on a carrier with multiplication tensor[i][j] = b_i * b_j.

    The associativity/commutativity/Lie flags are computed on all basis
    triples, never trusted from input.
    """

    carrier: Carrier
    tensor: tuple
    associative: bool = False
    commutative: bool = False
    lie: bool = False

    def __post_init__(self):
        bil = BilinearMap(self.carrier, self.carrier, self.tensor)
        object.__setattr__(self, "tensor", bil.tensor)
        object.__setattr__(self, "associative", self._check_associative())
        object.__setattr__(self, "commutative", self._check_commutative())
        object.__setattr__(self, "lie", self._check_lie())

    def as_bilinear(self) -> BilinearMap:
        return BilinearMap(self.carrier, self.carrier, self.tensor)

    @property
    def dim(self) -> int:
        return self.carrier.dim

    def _basis(self):
        out = []
        for i in range(self.dim):
            coords = list(self.carrier.zero())
            if self.carrier.kind == FIELD:
                coords[i] = self.carrier.domain.one()
            else:
                coords[i] = 1
            out.append(self.carrier.reduce(coords))
        return out

    def mult(self, x, y):
        return self.as_bilinear().evaluate(x, y)

    def _check_commutative(self) -> bool:
        for i in range(self.dim):
            for j in range(self.dim):
                if not self.carrier.eq(self.tensor[i][j], self.tensor[j][i]):
                    return False
        return True

    def _check_associative(self) -> bool:
        basis = self._basis()
        f = self.as_bilinear()
        for x in basis:
            for y in basis:
                xy = f.evaluate(x, y)
                for z in basis:
                    if not self.carrier.eq(
                        f.evaluate(xy, z), f.evaluate(x, f.evaluate(y, z))
                    ):
                        return False
        return True

    def _check_lie(self) -> bool:
        basis = self._basis()
        f = self.as_bilinear()
        for i, x in enumerate(basis):
            if not self.carrier.is_zero(f.evaluate(x, x)):
                return False
            for j, y in enumerate(basis):
                anti = self.carrier.add(f.evaluate(x, y), f.evaluate(y, x))
                if not self.carrier.is_zero(anti):
                    return False
        for x in basis:
            for y in basis:
                for z in basis:
                    jac = self.carrier.add(
                        f.evaluate(x, f.evaluate(y, z)),
                        self.carrier.add(
                            f.evaluate(y, f.evaluate(z, x)),
                            f.evaluate(z, f.evaluate(x, y)),
                        ),
                    )
                    if not self.carrier.is_zero(jac):
                        return False
        return True


def ring_on_rows(parent: RingPresentation, rows) -> RingPresentation:
    """The subring spanned by rows (field carriers), on its own basis."""
    d = parent.carrier.domain
    f = parent.as_bilinear()
    tensor = []
    for x in rows:
        row = []
        for y in rows:
            value = f.evaluate(x, y)
            coords = coords_in_rows(d, list(rows), value)
            if coords is None:
                raise ValidationError("rows do not span a subring")
            row.append(coords)
        tensor.append(tuple(row))
    return RingPresentation(field_carrier(d, len(rows)), tuple(tensor))


# -- basic ideals ----------------------------------------------------------------


def annihilator(r: RingPresentation):
    """Canonical generators of Ann(R) = {x : xR = Rx = 0}."""
    return two_sided_kernel(r.as_bilinear())


def square_ideal(r: RingPresentation):
    """Canonical generators of R^2, closed under multiplication until stable.

    Over a field or Z the linear span of all basis products is already an
    ideal, so the closure loop stabilizes immediately; it is kept as a
    certificate.
    """
    f = r.as_bilinear()
    gens = image_submodule(f)
    basis = r._basis()
    while True:
        extra = []
        for g in gens:
            for b in basis:
                extra.append(f.evaluate(g, b))
                extra.append(f.evaluate(b, g))
        new_gens = _span_canonical(r.carrier, list(gens) + extra)
        if new_gens == gens:
            return gens
        gens = new_gens


def _span_canonical(carrier: Carrier, vectors):
    if carrier.kind == FIELD:
        return canonical_span_rows(carrier.domain, vectors, carrier.dim)
    if carrier.kind == INTEGER:
        return submodule_canonical_gens(carrier.desc, vectors)
    # mixed: canonicalize blockwise
    from .modules import divisible_bounded_split, project_coords

    desc = carrier.desc
    m_d, m_b, (d_idx, b_idx) = divisible_bounded_split(desc)
    d_vectors = [project_coords(v, d_idx) for v in vectors]
    b_vectors = [project_coords(v, b_idx) for v in vectors]
    d_rows = canonical_span_rows(QQ, d_vectors, len(d_idx))
    b_rows = submodule_canonical_gens(m_b, b_vectors)
    out = []
    for row in d_rows:
        coords = list(desc.zero())
        for i, c in zip(d_idx, row):
            coords[i] = c
        out.append(desc.reduce(coords))
    for row in b_rows:
        coords = list(desc.zero())
        for i, c in zip(b_idx, row):
            coords[i] = c
        out.append(desc.reduce(coords))
    return out


def _contains(carrier: Carrier, gens, x) -> bool:
    if carrier.kind == FIELD:
        return coords_in_rows(carrier.domain, list(gens), x) is not None
    if carrier.kind == INTEGER:
        return submodule_contains(carrier.desc, gens, x)
    from .modules import divisible_bounded_split, project_coords

    desc = carrier.desc
    m_d, m_b, (d_idx, b_idx) = divisible_bounded_split(desc)
    d_gens = [project_coords(g, d_idx) for g in gens]
    b_gens = [project_coords(g, b_idx) for g in gens]
    d_ok = coords_in_rows(QQ, canonical_span_rows(QQ, d_gens, len(d_idx)),
                          project_coords(x, d_idx)) is not None
    b_ok = submodule_contains(m_b, b_gens, project_coords(x, b_idx))
    return d_ok and b_ok


def span_intersection_rows(domain: Domain, rows_a, rows_b, dim: int):
    """Canonical basis of span(rows_a) intersect span(rows_b) over a field."""
    if not rows_a or not rows_b:
        return []
    cols = [tuple(r) for r in rows_a] + [tuple(domain.neg(c) for c in r) for r in rows_b]
    mat = Matrix.from_cols(domain, cols)
    kern = kernel_basis(mat)
    vectors = []
    for j in range(kern.cols):
        coeffs = kern.col(j)[: len(rows_a)]
        vec = [domain.zero()] * dim
        for c, row in zip(coeffs, rows_a):
            for t in range(dim):
                vec[t] = domain.add(vec[t], domain.mul(c, row[t]))
        vectors.append(tuple(vec))
    return canonical_span_rows(domain, vectors, dim)


def _intersection(carrier: Carrier, gens_a, gens_b):
    if carrier.kind == FIELD:
        return span_intersection_rows(carrier.domain, gens_a, gens_b, carrier.dim)
    if carrier.kind == INTEGER:
        from .modules import generator_matrix, relation_matrix
        from .linalg import kernel_basis_int

        desc = carrier.desc
        ga = generator_matrix(desc, gens_a).hstack(relation_matrix(desc))
        gb = generator_matrix(desc, gens_b).hstack(relation_matrix(desc))
        neg_gb = Matrix.from_rows(
            ga.domain, [[-x for x in gb.row(i)] for i in range(gb.rows)]
        )
        kern = kernel_basis_int(ga.hstack(neg_gb))
        vectors = []
        for j in range(kern.cols):
            coeffs = kern.col(j)[: ga.cols]
            vectors.append(tuple(ga.apply(coeffs)))
        return submodule_canonical_gens(desc, vectors)
    raise UnsupportedDomain("intersection over mixed carriers: split the torsion first")


def delta_ideal(r: RingPresentation):
    """Delta(R) = Ann(R) intersect R^2."""
    return _intersection(r.carrier, annihilator(r), square_ideal(r))


def is_regular(r: RingPresentation) -> bool:
    """Ann(R) <= R^2."""
    sq = square_ideal(r)
    return all(_contains(r.carrier, sq, a) for a in annihilator(r))


# -- verbal ideals ----------------------------------------------------------------


@dataclass(frozen=True)
class Word:
    """Multiplication-only term tree: a variable or a product."""

    op: str  # "var" | "mul"
    name: str = ""
    left: "Word | None" = None
    right: "Word | None" = None

    def variables(self):
        if self.op == "var":
            return [self.name]
        seen = []
        for v in self.left.variables() + self.right.variables():
            if v not in seen:
                seen.append(v)
        return seen

    def is_multilinear(self) -> bool:
        counts = {}

        def walk(w):
            if w.op == "var":
                counts[w.name] = counts.get(w.name, 0) + 1
            else:
                walk(w.left)
                walk(w.right)

        walk(self)
        return all(c == 1 for c in counts.values())

    def evaluate(self, f: BilinearMap, assignment):
        if self.op == "var":
            return assignment[self.name]
        return f.evaluate(
            self.left.evaluate(f, assignment), self.right.evaluate(f, assignment)
        )

    def format(self) -> str:
        if self.op == "var":
            return self.name
        return f"({self.left.format()}*{self.right.format()})"


def parse_word(text: str) -> Word:
    """Parse terms like  x , x*y , (x*y)*z  (left-assoc without parens)."""
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()*":
            tokens.append(c)
            i += 1
        elif c.isalnum() or c == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise ValidationError(f"unexpected character {c!r} in term")
    pos = 0

    def parse_atom():
        nonlocal pos
        if pos >= len(tokens):
            raise ValidationError("unexpected end of term")
        tok = tokens[pos]
        if tok == "(":
            pos += 1
            node = parse_product()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValidationError("unbalanced parenthesis in term")
            pos += 1
            return node
        if tok in ")*":
            raise ValidationError(f"unexpected {tok!r} in term")
        pos += 1
        return Word("var", tok)

    def parse_product():
        nonlocal pos
        node = parse_atom()
        while pos < len(tokens) and tokens[pos] == "*":
            pos += 1
            node = Word("mul", left=node, right=parse_atom())
        return node

    node = parse_product()
    if pos != len(tokens):
        raise ValidationError("trailing tokens in term")
    return node


@dataclass(frozen=True)
class VerbalIdealReport:
    generators: tuple
    width: WidthReport | None


_VERBAL_ENUM_CAP = 3**7


def verbal_ideal(r: RingPresentation, term: Word | str) -> VerbalIdealReport:
    """Ideal generated by all values of a multiplication word, with width.

    Multilinear words are evaluated on basis tuples (exact by
    multilinearity); other words are enumerated over small prime fields
    and rejected over infinite fields.
    """
    if isinstance(term, str):
        term = parse_word(term)
    f = r.as_bilinear()
    variables = term.variables()
    basis = r._basis()
    values = []
    if term.is_multilinear():
        def rec(assignment, remaining):
            if not remaining:
                values.append(term.evaluate(f, assignment))
                return
            for b in basis:
                assignment[remaining[0]] = b
                rec(assignment, remaining[1:])
        rec({}, variables)
    else:
        if r.carrier.kind != FIELD or not isinstance(r.carrier.domain, PrimeField):
            raise UnsupportedDomain(
                "non-multilinear words need exhaustive enumeration; "
                "available over small prime fields only"
            )
        p = r.carrier.domain.p
        if p ** (r.dim * len(variables)) > _VERBAL_ENUM_CAP:
            raise EnumerationTooLarge("too many tuples for verbal evaluation")
        import itertools

        for combo in itertools.product(
            itertools.product(range(p), repeat=r.dim), repeat=len(variables)
        ):
            assignment = {v: tuple(c) for v, c in zip(variables, combo)}
            values.append(term.evaluate(f, assignment))
    gens = _span_canonical(r.carrier, values)
    # ideal closure
    while True:
        extra = []
        for g in gens:
            for b in basis:
                extra.append(f.evaluate(g, b))
                extra.append(f.evaluate(b, g))
        new_gens = _span_canonical(r.carrier, list(gens) + extra)
        if new_gens == gens:
            break
        gens = new_gens
    width_report = None
    if r.carrier.kind == FIELD:
        width_report = _verbal_width(r, term, gens)
    return VerbalIdealReport(tuple(gens), width_report)


def _verbal_width(r: RingPresentation, term: Word, gens) -> WidthReport:
    if not gens:
        return WidthReport(0, 0, True, ())
    d = r.carrier.domain
    if isinstance(d, PrimeField) and d.p**r.dim <= _VERBAL_ENUM_CAP:
        return _verbal_width_bfs(r, term, gens)
    if term.op == "var":
        return WidthReport(1, 1, True, ())
    bound = len(gens)
    exact = bound <= 1
    return WidthReport(bound if exact else None, bound, exact, ())


def _verbal_width_bfs(r: RingPresentation, term: Word, gens) -> WidthReport:
    import itertools

    import numpy as np

    from . import gfenum

    p = r.carrier.domain.p
    f = r.as_bilinear()
    variables = term.variables()
    if p ** (r.dim * len(variables)) > _VERBAL_ENUM_CAP:
        raise EnumerationTooLarge("too many tuples for verbal width enumeration")
    values = set()
    for combo in itertools.product(
        itertools.product(range(p), repeat=r.dim), repeat=len(variables)
    ):
        assignment = {v: tuple(c) for v, c in zip(variables, combo)}
        values.add(tuple(int(c) % p for c in term.evaluate(f, assignment)))
    value_rows = np.array(sorted(values), dtype=np.int16)
    target = gfenum.span_rows(
        np.array([[int(c) % p for c in g] for g in gens], dtype=np.int16), p
    )
    reach = value_rows
    k = 1
    while not gfenum.same_row_set(
        gfenum.unique_rows(np.concatenate([reach, target]), p), reach, p
    ):
        k += 1
        if k > 2 * len(gens) + 4:
            raise EnumerationTooLarge("verbal width search failed to close")
        reach = gfenum.sumset(reach, value_rows, p)
    return WidthReport(k, k, True, ())


# -- foundations and additions ------------------------------------------------------


@dataclass(frozen=True)
class FoundationSplit:
    foundation: RingPresentation
    addition: RingPresentation
    foundation_rows: tuple
    addition_rows: tuple
    delta_rows: tuple
    ann_rows: tuple
    square_rows: tuple


def foundation_addition(r: RingPresentation) -> FoundationSplit:
    """R = R_F x R_0 with R_0 a complement of Delta(R) in Ann(R) and
    R_F a complement of R_0 containing R^2.

    Always succeeds over a field; over Z either split may fail (NoSplit
    names the missing one).
    """
    ann = annihilator(r)
    sq = square_ideal(r)
    delta = _intersection(r.carrier, ann, sq)
    if r.carrier.kind == FIELD:
        d = r.carrier.domain
        # extend delta to ann: the added vectors form R_0
        r0_rows = []
        current = list(delta)
        for a in ann:
            trial = canonical_span_rows(d, current + [a], r.dim)
            if len(trial) > len(current):
                r0_rows.append(a)
                current = trial
        # complement of R_0 containing R^2
        found_rows = list(sq)
        blocked = list(r0_rows)
        for i in range(r.dim):
            e = tuple(d.one() if k == i else d.zero() for k in range(r.dim))
            trial = canonical_span_rows(d, found_rows + blocked + [e], r.dim)
            if len(trial) > len(canonical_span_rows(d, found_rows + blocked, r.dim)):
                found_rows.append(e)
        found_rows = canonical_span_rows(d, found_rows, r.dim)
        r0_rows = canonical_span_rows(d, r0_rows, r.dim)
        foundation = ring_on_rows(r, found_rows)
        addition = RingPresentation(
            field_carrier(d, len(r0_rows)),
            tuple(
                tuple((d.zero(),) * len(r0_rows) for _ in r0_rows) for _ in r0_rows
            ),
        )
        return FoundationSplit(
            foundation, addition, tuple(found_rows), tuple(r0_rows),
            tuple(delta), tuple(ann), tuple(sq),
        )
    if r.carrier.kind != INTEGER:
        raise UnsupportedDomain(
            "foundation/addition over mixed carriers: split the torsion first"
        )
    # additions: complement of Delta inside Ann, computed in Ann's own shape
    ann_sub = submodule_adapted_basis(r.carrier.desc, ann)
    delta_in_ann = [ann_sub.coords_of(g) for g in delta]
    r0_in_ann = split_complement(delta_in_ann, ann_sub.desc)
    if r0_in_ann is None:
        raise NoSplit(
            "Delta(R) = R^2 n Ann(R) does not split off inside Ann(R): "
            "no addition exists", which="addition",
        )
    r0_rows = []
    for coords in r0_in_ann:
        vec = list(r.carrier.zero())
        for c, row in zip(coords, ann_sub.basis):
            for t in range(r.dim):
                vec[t] = vec[t] + c * row[t]
        r0_rows.append(r.carrier.reduce(vec))
    found_gens = split_complement(r0_rows, r.carrier.desc, kill=sq)
    if found_gens is None:
        raise NoSplit(
            "the addition does not split off inside R: no foundation complement",
            which="foundation",
        )
    found_sub = submodule_adapted_basis(r.carrier.desc, found_gens)
    f = r.as_bilinear()
    tensor = []
    for x in found_sub.basis:
        row = []
        for y in found_sub.basis:
            row.append(found_sub.coords_of(f.evaluate(x, y)))
        tensor.append(tuple(row))
    foundation = RingPresentation(module_carrier(found_sub.desc), tuple(tensor))
    r0_sub = submodule_adapted_basis(r.carrier.desc, r0_rows)
    addition = RingPresentation(
        module_carrier(r0_sub.desc),
        tuple(
            tuple(module_carrier(r0_sub.desc).zero() for _ in r0_sub.basis)
            for _ in r0_sub.basis
        ),
    )
    return FoundationSplit(
        foundation, addition, tuple(found_sub.basis), tuple(r0_sub.basis),
        tuple(delta), tuple(ann), tuple(sq),
    )


# -- centroid and component enrichment ------------------------------------------------


def centroid(r: RingPresentation) -> EndoAlgebra:
    """{X in End(R) : X(xy) = (Xx)y = x(Xy)}; the scalars of R itself."""
    if r.carrier.kind != FIELD:
        raise UnsupportedDomain("centroid is computed over field carriers")
    d = r.carrier.domain
    n = r.dim
    rows = []
    for i in range(n):
        for j in range(n):
            c = r.tensor[i][j]
            for t in range(n):
                # X(c) - (X b_i) b_j = 0
                row = [d.zero()] * (n * n)
                for s in range(n):
                    row[t * n + s] = d.add(row[t * n + s], c[s])
                for l in range(n):
                    row[l * n + i] = d.sub(row[l * n + i], r.tensor[l][j][t])
                rows.append(tuple(row))
                # X(c) - b_i (X b_j) = 0
                row = [d.zero()] * (n * n)
                for s in range(n):
                    row[t * n + s] = d.add(row[t * n + s], c[s])
                for l in range(n):
                    row[l * n + j] = d.sub(row[l * n + j], r.tensor[i][l][t])
                rows.append(tuple(row))
    if not rows:
        vectors = []
        for a in range(n):
            for b in range(n):
                e = [d.zero()] * (n * n)
                e[a * n + b] = d.one()
                vectors.append(tuple(e))
        return EndoAlgebra.from_vectors(d, n, vectors)
    kern = kernel_basis(Matrix.from_rows(d, rows))
    return EndoAlgebra.from_vectors(d, n, [kern.col(j) for j in range(kern.cols)])


@dataclass(frozen=True)
class Enrichment:
    """A field acting on a component: matrices for 1, s, ..., s^(d-1)
    where s satisfies the residue minimal polynomial exactly and every
    matrix commutes with multiplication (it lives in the centroid)."""

    matrices: tuple
    minpoly: tuple  # coefficient tuple over the base
    residue_degree: int


def component_enrichment(ring: RingPresentation, seed: int = 0) -> Enrichment:
    """Scalar action of the residue field, found inside the centroid."""
    cent = centroid(ring)
    if not cent.is_commutative():
        raise ValidationError(
            "component centroid is not commutative; no scalar enrichment"
        )
    alg = endo_commutative_algebra(cent)
    factors = local_decomposition(alg, seed)
    if len(factors) != 1:
        raise ValidationError("component centroid is not local: ring decomposes")
    lf = factors[0]
    rep = field_of_representatives(lf)
    mats = []
    d = cent.domain
    for block_row in rep.basis:
        # block coords -> centroid coords -> endomorphism
        cent_coords = [d.zero()] * alg.dim
        for c, row in zip(block_row, lf.basis):
            for t in range(alg.dim):
                cent_coords[t] = d.add(cent_coords[t], d.mul(c, row[t]))
        mats.append(cent.combine(tuple(cent_coords)))
    return Enrichment(tuple(mats), rep.minpoly.coeffs, lf.residue_degree)


def verify_enrichment(ring: RingPresentation, enrichment: Enrichment) -> bool:
    """alpha(xy) = (alpha x)y = x(alpha y), exactly, on all basis triples."""
    d = ring.carrier.domain
    f = ring.as_bilinear()
    basis = ring._basis()
    for mat in enrichment.matrices:
        for x in basis:
            for y in basis:
                ax = mat.apply(x)
                ay = mat.apply(y)
                axy = mat.apply(f.evaluate(x, y))
                if f.evaluate(ax, y) != axy or f.evaluate(x, ay) != axy:
                    return False
    return True


# -- characteristic zero decomposition -------------------------------------------------


@dataclass(frozen=True)
class RingComponent:
    ring: RingPresentation
    rows: tuple                    # basis rows in the input's coordinates
    local: LocalFactor             # local factor of A(R)
    j_report: JSeriesReport
    enrichment: Enrichment
    residue_degree: int
    dim_over_residue: int


@dataclass(frozen=True)
class RingDecomposition:
    components: tuple
    addition: RingPresentation | None
    addition_rows: tuple
    foundation_rows: tuple
    ann_rows: tuple
    square_rows: tuple
    delta_rows: tuple
    scalar: ScalarActionReport | None

    @property
    def change_rows(self):
        rows = [row for c in self.components for row in c.rows]
        rows.extend(self.addition_rows)
        return tuple(rows)


def _rows_through(rows, base_rows, carrier: Carrier):
    """Interpret rows given in base_rows-coordinates back into the ambient."""
    out = []
    for row in rows:
        vec = list(carrier.zero())
        for c, base in zip(row, base_rows):
            for t in range(carrier.dim):
                vec[t] = (
                    carrier.domain.add(vec[t], carrier.domain.mul(c, base[t]))
                    if carrier.kind == FIELD
                    else vec[t] + c * base[t]
                )
        out.append(carrier.reduce(vec))
    return out


def decompose_char0(r: RingPresentation, seed: int = 0) -> RingDecomposition:
    """The characteristic-zero pipeline: foundation/addition, A(R), local
    decomposition, idempotent pullback, residue enrichment, r_k data."""
    if r.carrier.kind != FIELD or r.carrier.domain.char != 0:
        raise UnsupportedDomain("decompose_char0 needs a characteristic-zero field")
    d = r.carrier.domain
    sq = square_ideal(r)
    if not sq:
        basis = tuple(
            tuple(d.one() if k == i else d.zero() for k in range(r.dim))
            for i in range(r.dim)
        )
        return RingDecomposition(
            components=(),
            addition=r,
            addition_rows=basis,
            foundation_rows=(),
            ann_rows=tuple(annihilator(r)),
            square_rows=(),
            delta_rows=(),
            scalar=None,
        )
    split = foundation_addition(r)
    rf = split.foundation
    ann_f = annihilator(rf)
    sq_f = square_ideal(rf)
    scalar = largest_scalar_action(rf.as_bilinear(), ann_f, sq_f)
    alg = endo_commutative_algebra(scalar.algebra)
    factors = local_decomposition(alg, seed)
    components = []
    total = 0
    for lf in factors:
        e_q = scalar.algebra.combine(lf.idempotent)
        e_sq = Matrix.zero(d, len(scalar.square_rows), len(scalar.square_rows))
        for c, act in zip(lf.idempotent, scalar.action_on_square):
            e_sq = e_sq.add(act.scale(c))
        s_rows_sq = canonical_span_rows(
            d, [e_sq.col(j) for j in range(e_sq.cols)], e_sq.rows
        )
        q_rows = canonical_span_rows(
            d, [e_q.col(j) for j in range(e_q.cols)], e_q.rows
        )
        # eta-image of the square part inside the quotient block
        eta_s = canonical_span_rows(
            d, [scalar.eta.apply(srow) for srow in s_rows_sq], scalar.eta.rows
        )
        d_rows = []
        current = list(eta_s)
        for q in q_rows:
            trial = canonical_span_rows(d, current + [q], scalar.eta.rows)
            if len(trial) > len(current):
                d_rows.append(q)
                current = trial
        s_part = _rows_through(s_rows_sq, scalar.square_rows, rf.carrier)
        d_part = _rows_through(d_rows, scalar.quotient_rows, rf.carrier)
        comp_rows_rf = list(s_part) + list(d_part)
        if len(canonical_span_rows(d, comp_rows_rf, rf.dim)) != len(comp_rows_rf):
            raise RuntimeError("component basis is not independent")
        comp_ring = ring_on_rows(rf, comp_rows_rf)
        rows_ambient = _rows_through(comp_rows_rf, split.foundation_rows, r.carrier)
        enrichment = component_enrichment(comp_ring, seed)
        if enrichment.residue_degree != lf.residue_degree:
            raise RuntimeError(
                "centroid residue degree disagrees with the scalar ring's"
            )
        if comp_ring.dim % lf.residue_degree:
            raise RuntimeError("component dimension not divisible by residue degree")
        components.append(
            RingComponent(
                ring=comp_ring,
                rows=tuple(rows_ambient),
                local=lf,
                j_report=j_series(lf),
                enrichment=enrichment,
                residue_degree=lf.residue_degree,
                dim_over_residue=comp_ring.dim // lf.residue_degree,
            )
        )
        total += comp_ring.dim
    if total != rf.dim:
        raise RuntimeError("component dimensions do not fill the foundation")
    # cross products vanish exactly
    f = r.as_bilinear()
    for i, a in enumerate(components):
        for j, b in enumerate(components):
            if i != j:
                for x in a.rows:
                    for y in b.rows:
                        if not r.carrier.is_zero(f.evaluate(x, y)):
                            raise RuntimeError("cross-component product is nonzero")
    return RingDecomposition(
        components=tuple(components),
        addition=split.addition,
        addition_rows=tuple(split.addition_rows),
        foundation_rows=tuple(split.foundation_rows),
        ann_rows=tuple(split.ann_rows),
        square_rows=tuple(split.square_rows),
        delta_rows=tuple(split.delta_rows),
        scalar=scalar,
    )


def verify_ring_reassembly(r: RingPresentation, deco: RingDecomposition) -> bool:
    """Exact: block tensors pushed through the recorded rows reproduce r."""
    d = r.carrier.domain
    change = list(deco.change_rows)
    if len(change) != r.dim:
        return False
    sizes = [len(c.rows) for c in deco.components]
    f = r.as_bilinear()
    basis = [
        tuple(d.one() if k == i else d.zero() for k in range(r.dim))
        for i in range(r.dim)
    ]
    for x in basis:
        xc = coords_in_rows(d, change, x)
        if xc is None:
            return False
        for y in basis:
            yc = coords_in_rows(d, change, y)
            total = [d.zero()] * r.dim
            off = 0
            for comp, size in zip(deco.components, sizes):
                xs = xc[off : off + size]
                ys = yc[off : off + size]
                value = comp.ring.mult(xs, ys)
                for c, row in zip(value, comp.rows):
                    for t in range(r.dim):
                        total[t] = d.add(total[t], d.mul(c, row[t]))
                off += size
            # the addition block multiplies to zero
            if tuple(total) != f.evaluate(x, y):
                return False
    return True


# -- mixed and bounded cases -------------------------------------------------------


@dataclass(frozen=True)
class MixedSplit:
    divisible: RingPresentation
    bounded: RingPresentation
    divisible_indices: tuple
    bounded_indices: tuple
    cross_annihilation: bool
    intersection_trivial: bool


def central_split_mixed(r: RingPresentation) -> MixedSplit:
    """R = R_D * R_C on a mixed carrier, with mutual annihilation certified."""
    f_d, f_c, ((m_didx, _), (m_bidx, _)) = torsion_split(r.as_bilinear())
    div_ring = RingPresentation(f_d.m, f_d.tensor)
    bd_ring = RingPresentation(f_c.m, f_c.tensor)
    cross_ok = True
    for i in m_didx:
        for j in m_bidx:
            if not r.carrier.is_zero(r.tensor[i][j]) or not r.carrier.is_zero(
                r.tensor[j][i]
            ):
                cross_ok = False
    return MixedSplit(
        divisible=div_ring,
        bounded=bd_ring,
        divisible_indices=tuple(m_didx),
        bounded_indices=tuple(m_bidx),
        cross_annihilation=cross_ok,
        intersection_trivial=True,  # formal summands are disjoint
    )


@dataclass(frozen=True)
class QuasiComponent:
    ring: RingPresentation
    rows: tuple
    local: LocalFactor
    residue_degree: int


@dataclass(frozen=True)
class CentralProductReport:
    components: tuple
    scalar: ScalarActionReport
    ann_rows: tuple


def decompose_bounded(r: RingPresentation, seed: int = 0) -> CentralProductReport:
    """Central product of A_i-quasi algebras over GF(p): preimages of the
    idempotent blocks of A(R) acting on R/Ann(R)."""
    if r.carrier.kind != FIELD or not isinstance(r.carrier.domain, PrimeField):
        raise UnsupportedDomain("decompose_bounded needs a GF(p) carrier")
    d = r.carrier.domain
    sq = square_ideal(r)
    if not sq:
        raise DegenerateInput("zero multiplication: nothing to decompose")
    ann = annihilator(r)
    scalar = largest_scalar_action(r.as_bilinear(), ann, sq)
    alg = endo_commutative_algebra(scalar.algebra)
    factors = local_decomposition(alg, seed)
    components = []
    for lf in factors:
        e_q = scalar.algebra.combine(lf.idempotent)
        q_rows = canonical_span_rows(d, [e_q.col(j) for j in range(e_q.cols)], e_q.rows)
        lifted = _rows_through(q_rows, scalar.quotient_rows, r.carrier)
        rows = canonical_span_rows(d, list(lifted) + list(ann), r.dim)
        comp_ring = ring_on_rows(r, rows)
        components.append(
            QuasiComponent(
                ring=comp_ring,
                rows=tuple(rows),
                local=lf,
                residue_degree=lf.residue_degree,
            )
        )
    f = r.as_bilinear()
    for i, a in enumerate(components):
        for j, b in enumerate(components):
            if i != j:
                for x in a.rows:
                    for y in b.rows:
                        if not r.carrier.is_zero(f.evaluate(x, y)):
                            raise RuntimeError(
                                "central factors fail mutual annihilation"
                            )
    return CentralProductReport(tuple(components), scalar, tuple(ann))


# -- model construction and categoricity ----------------------------------------------


@dataclass(frozen=True)
class ModelConstruction:
    ring: RingPresentation       # the same constants over the new field
    special_basis: tuple         # rows in the input coordinates
    constants_field: str         # description of k_0
    constants_are_prime: bool


def _constants_subfield(domain: Domain, tensor) -> tuple:
    """(k0 is the prime field?, description)."""
    if isinstance(domain, Rationals):
        return True, "Q"
    if isinstance(domain, PrimeField):
        return True, domain.describe()
    if isinstance(domain, Extension):
        for row in tensor:
            for entry in row:
                for c in entry:
                    if any(not domain.base.is_zero(x) for x in c[1:]):
                        return False, domain.describe()
        return True, domain.base.describe()
    raise UnsupportedDomain("unsupported base field for model construction")


def model_construct(
    r: RingPresentation, target: Domain, seed: int = 0
) -> ModelConstruction:
    """Re-read the structure constants of an indecomposable component over
    an extension of the constants' subfield k_0."""
    if r.carrier.kind != FIELD:
        raise UnsupportedDomain("model_construct needs a field carrier")
    base = r.carrier.domain
    cent = centroid(r)
    if not cent.is_commutative():
        raise ValidationError("centroid is not commutative")
    alg = endo_commutative_algebra(cent)
    factors = local_decomposition(alg, seed)
    if len(factors) != 1:
        raise ValidationError("ring is decomposable; model construction needs an "
                              "indecomposable component")
    lf = factors[0]
    d = base
    # J-adapted basis: extend the filtration J^m R < ... < J R < R bottom-up
    j_mats = []
    for row in lf.radical_rows:
        coords = [d.zero()] * alg.dim
        for c, b in zip(row, lf.basis):
            for t in range(alg.dim):
                coords[t] = d.add(coords[t], d.mul(c, b[t]))
        j_mats.append(cent.combine(tuple(coords)))
    spaces = []
    current = [
        tuple(d.one() if k == i else d.zero() for k in range(r.dim))
        for i in range(r.dim)
    ]
    while current:
        spaces.append(list(current))
        moved = [m.apply(v) for m in j_mats for v in current]
        current = canonical_span_rows(d, moved, r.dim)
    special = []
    for depth in range(len(spaces) - 1, -1, -1):
        for v in spaces[depth]:
            trial = canonical_span_rows(d, special + [v], r.dim)
            if len(trial) > len(special):
                special.append(v)
    special_ring = ring_on_rows(r, special)
    prime_constants, k0_desc = _constants_subfield(base, special_ring.tensor)
    # the target must contain k0
    if prime_constants:
        if isinstance(base, (Rationals, Extension)) and base.char == 0:
            ok = target.is_field and target.char == 0
        else:
            ok = target.is_field and target.char == base.char
    else:
        ok = target == base
    if not ok:
        raise ExtensionNotOverK0(
            f"target field {target.describe()} does not contain k0 = {k0_desc}"
        )

    def convert(c):
        if base == target:
            return c
        if isinstance(base, Rationals):
            if isinstance(target, Extension):
                return target.from_base(c)
            return c
        if isinstance(base, PrimeField):
            if isinstance(target, Extension):
                return target.from_base(c)
            return target.from_int(c)
        if isinstance(base, Extension) and prime_constants:
            const = c[0]
            if isinstance(target, Extension):
                return target.from_base(const)
            return const
        raise ExtensionNotOverK0("no embedding of the constants into the target")

    tensor = tuple(
        tuple(tuple(convert(c) for c in entry) for entry in row)
        for row in special_ring.tensor
    )
    out = RingPresentation(field_carrier(target, r.dim), tensor)
    return ModelConstruction(
        ring=out,
        special_basis=tuple(special),
        constants_field=k0_desc,
        constants_are_prime=prime_constants,
    )


@dataclass(frozen=True)
class CategoricityVerdict:
    satisfied: bool
    component_count: int
    addition_dim: int
    note: str


def categoricity_check(deco: RingDecomposition) -> CategoricityVerdict:
    """Structural criterion: one indecomposable component, no addition.

    The remaining hypothesis (the scalar field being uncountable and
    algebraically closed) is model-theoretic and reported, not computed.
    """
    addition_dim = len(deco.addition_rows)
    satisfied = len(deco.components) == 1 and addition_dim == 0
    return CategoricityVerdict(
        satisfied=satisfied,
        component_count=len(deco.components),
        addition_dim=addition_dim,
        note=(
            "structural criterion only; uncountable algebraically closed "
            "scalars are a model-theoretic hypothesis not checked here"
        ),
    )
