"""The largest scalar ring of a bilinear map and its relatives: symmetric
endomorphisms Sym_f(M), their commutant Z(f), the relation-preserving ring
P(f) with its induced action on the image, the enumerated Z_n chain used
as a brute-force oracle, scalar-driven decomposition, and the A(R)
computation for ring multiplication maps.

P(f) is computed as the stabilizer of ker(f-bar) inside Z(f): in finite
dimension every relation among products is a finite sum of simple
tensors, so preserving all length-n relations for every n is one linear
condition on the kernel of the structure matrix.  The Z_n chain is kept
as an independent diagnostic that enumerates achievable sums over small
prime fields and must agree once it stabilizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gfenum
from .artinian import CommutativeAlgebra, LocalFactor, local_decomposition
from .bilinear import (
    BilinearMap,
    FIELD,
    canonical_span_rows,
    complement_rows,
    coords_in_rows,
    field_carrier,
    image_submodule,
    is_full,
    two_sided_kernel,
)
from .domains import Domain, PrimeField
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    EnumerationTooLarge,
    NonFieldDomain,
    UnsupportedDomain,
    ValidationError,
)
from .linalg import Matrix, inverse, kernel_basis, solve

_ZN_ENUM_CAP = 81  # |M| cap for the enumerated diagnostic


@dataclass(frozen=True)
class EndoAlgebra:
    """A subspace of End(M) with a canonical (echelonized) basis."""

    domain: Domain
    dim: int
    basis: tuple  # of Matrix
    closed: bool
    unital: bool

    @staticmethod
    def from_vectors(domain: Domain, dim: int, vectors) -> "EndoAlgebra":
        rows = canonical_span_rows(domain, vectors, dim * dim)
        mats = tuple(Matrix(domain, dim, dim, tuple(r)) for r in rows)
        closed = True
        for a in mats:
            for b in mats:
                prod = a.mul(b)
                if coords_in_rows(domain, rows, prod.entries) is None:
                    closed = False
                    break
            if not closed:
                break
        unital = (
            coords_in_rows(domain, rows, Matrix.identity(domain, dim).entries)
            is not None
            if rows
            else dim == 0
        )
        return EndoAlgebra(domain, dim, mats, closed, unital)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def vectors(self):
        return [m.entries for m in self.basis]

    def contains(self, mat: Matrix) -> bool:
        return coords_in_rows(self.domain, self.vectors(), mat.entries) is not None

    def coords_of(self, mat: Matrix):
        return coords_in_rows(self.domain, self.vectors(), mat.entries)

    def combine(self, coeffs) -> Matrix:
        acc = Matrix.zero(self.domain, self.dim, self.dim)
        for c, b in zip(coeffs, self.basis):
            acc = acc.add(b.scale(c))
        return acc

    def equal(self, other: "EndoAlgebra") -> bool:
        return self.vectors() == other.vectors()

    def is_commutative(self) -> bool:
        for a in self.basis:
            for b in self.basis:
                if not a.mul(b).eq(b.mul(a)):
                    return False
        return True


def _require_field_map(f: BilinearMap, what: str):
    if f.m.kind != FIELD:
        raise NonFieldDomain(f"{what} needs a field carrier")


def tensor_matrix(f: BilinearMap) -> Matrix:
    """The structure matrix of f-bar: rows = N coordinates, columns indexed
    by basis pairs (i, j) flattened as i * dim + j."""
    d = f.m.domain
    n = f.m.dim
    rows = []
    for t in range(f.n.dim):
        row = []
        for i in range(n):
            for j in range(n):
                row.append(f.tensor[i][j][t])
        rows.append(tuple(row))
    return Matrix.from_rows(d, rows) if rows else Matrix(d, 0, n * n, ())


def symmetric_endos(f: BilinearMap) -> EndoAlgebra:
    """Solution space of f(Ax, y) = f(x, Ay) on all basis pairs."""
    _require_field_map(f, "symmetric_endos")
    d = f.m.domain
    n = f.m.dim
    rows = []
    for i in range(n):
        for j in range(n):
            for t in range(f.n.dim):
                row = [d.zero()] * (n * n)
                for l in range(n):
                    row[l * n + i] = d.add(row[l * n + i], f.tensor[l][j][t])
                    row[l * n + j] = d.sub(row[l * n + j], f.tensor[i][l][t])
                rows.append(tuple(row))
    if not rows:
        # no constraints (zero-dimensional codomain): all of End(M)
        vectors = []
        for r in range(n):
            for c in range(n):
                e = [d.zero()] * (n * n)
                e[r * n + c] = d.one()
                vectors.append(tuple(e))
        return EndoAlgebra.from_vectors(d, n, vectors)
    kern = kernel_basis(Matrix.from_rows(d, rows))
    return EndoAlgebra.from_vectors(d, n, [kern.col(j) for j in range(kern.cols)])


def z_center(f: BilinearMap, sym: EndoAlgebra | None = None) -> EndoAlgebra:
    """Elements of Sym_f(M) commuting with all of Sym_f(M)."""
    if sym is None:
        sym = symmetric_endos(f)
    d = sym.domain
    if not sym.basis:
        return sym
    rows = []
    for b in sym.basis:
        for r in range(sym.dim):
            for c in range(sym.dim):
                row = []
                for a in sym.basis:
                    comm = a.mul(b).sub(b.mul(a))
                    row.append(comm.get(r, c))
                rows.append(tuple(row))
    kern = kernel_basis(Matrix.from_rows(d, rows))
    vectors = []
    for j in range(kern.cols):
        vectors.append(sym.combine(kern.col(j)).entries)
    return EndoAlgebra.from_vectors(d, sym.dim, vectors)


def _tensor_action_vector(a_mat: Matrix, kappa, n: int, d: Domain):
    """(A (x) id) applied to a flattened tensor kappa."""
    out = [d.zero()] * (n * n)
    for l in range(n):
        for j in range(n):
            acc = d.zero()
            for i in range(n):
                acc = d.add(acc, d.mul(a_mat.get(l, i), kappa[i * n + j]))
            out[l * n + j] = acc
    return tuple(out)


def _stabilizer_inside(f: BilinearMap, z: EndoAlgebra, kernel_vectors) -> EndoAlgebra:
    """{A in span(z): f-bar((A (x) id) kappa) = 0 for all kappa}."""
    d = f.m.domain
    n = f.m.dim
    tmat = tensor_matrix(f)
    if not z.basis:
        return z
    rows = []
    for kappa in kernel_vectors:
        images = [
            tmat.apply(_tensor_action_vector(a, kappa, n, d)) for a in z.basis
        ]
        for t in range(f.n.dim):
            rows.append(tuple(img[t] for img in images))
    if not rows:
        return z
    kern = kernel_basis(Matrix.from_rows(d, rows))
    vectors = [z.combine(kern.col(j)).entries for j in range(kern.cols)]
    return EndoAlgebra.from_vectors(d, n, vectors)


@dataclass(frozen=True)
class ScalarRingReport:
    """P(f) with its image action and the relation kernel used to cut it."""

    algebra: EndoAlgebra
    image_rows: tuple              # echelon basis of im(f) in N coordinates
    action_on_image: tuple         # one Matrix per algebra basis element
    relation_kernel: tuple         # flattened tensors spanning ker(f-bar)
    bilinear_certified: bool


def p_of_f(f: BilinearMap) -> ScalarRingReport:
    """The largest scalar ring of a nondegenerate bilinear map.

    Computed as the stabilizer of ker(f-bar) inside Z(f); the report
    carries the induced action on im(f) and certifies that f is bilinear
    over the result: f(Ax, y) = f(x, Ay) = A f(x, y).
    """
    _require_field_map(f, "p_of_f")
    kernel_gens = two_sided_kernel(f)
    if kernel_gens:
        raise DegenerateInput(
            "C(f) is nonzero; split off the foundation before computing P(f)"
        )
    d = f.m.domain
    n = f.m.dim
    z = z_center(f)
    tmat = tensor_matrix(f)
    kern = kernel_basis(tmat)
    kernel_vectors = [kern.col(j) for j in range(kern.cols)]
    p = _stabilizer_inside(f, z, kernel_vectors)
    if not p.unital or not p.closed or not p.is_commutative():
        raise RuntimeError("P(f) failed the unital commutative closure invariants")
    image_rows = image_submodule(f)
    action = []
    for a in p.basis:
        cols = []
        for v in image_rows:
            pre = solve(tmat, v)
            if pre is None:
                raise RuntimeError("image element has no tensor preimage")
            moved = tmat.apply(_tensor_action_vector(a, pre[0], n, d))
            coords = coords_in_rows(d, image_rows, moved)
            if coords is None:
                raise RuntimeError("scalar action left the image")
            cols.append(coords)
        action.append(Matrix.from_cols(d, cols) if cols else Matrix(d, 0, 0, ()))
    report = ScalarRingReport(
        algebra=p,
        image_rows=tuple(image_rows),
        action_on_image=tuple(action),
        relation_kernel=tuple(kernel_vectors),
        bilinear_certified=False,
    )
    if not _certify_bilinearity(f, report):
        raise RuntimeError("P(f) bilinearity certificate failed")
    return ScalarRingReport(
        report.algebra,
        report.image_rows,
        report.action_on_image,
        report.relation_kernel,
        True,
    )


def _apply_action_in_n(report: ScalarRingReport, index: int, value, d: Domain, n_dim: int):
    """A . value for value in N coordinates, via the image basis."""
    coords = coords_in_rows(d, list(report.image_rows), value)
    if coords is None:
        return None
    moved = report.action_on_image[index].apply(coords)
    out = [d.zero()] * n_dim
    for c, row in zip(moved, report.image_rows):
        for t in range(n_dim):
            out[t] = d.add(out[t], d.mul(c, row[t]))
    return tuple(out)


def _certify_bilinearity(f: BilinearMap, report: ScalarRingReport) -> bool:
    """f(Ax, y) = f(x, Ay) = A f(x, y), exactly, on all basis pairs."""
    d = f.m.domain
    n = f.m.dim
    for idx, a in enumerate(report.algebra.basis):
        for i in range(n):
            ai = [a.get(l, i) for l in range(n)]
            for j in range(n):
                aj = [a.get(l, j) for l in range(n)]
                left = [d.zero()] * f.n.dim
                right = [d.zero()] * f.n.dim
                for l in range(n):
                    if not d.is_zero(ai[l]):
                        for t in range(f.n.dim):
                            left[t] = d.add(left[t], d.mul(ai[l], f.tensor[l][j][t]))
                    if not d.is_zero(aj[l]):
                        for t in range(f.n.dim):
                            right[t] = d.add(right[t], d.mul(aj[l], f.tensor[i][l][t]))
                scaled = _apply_action_in_n(report, idx, f.tensor[i][j], d, f.n.dim)
                if scaled is None:
                    return False
                if tuple(left) != tuple(right) or tuple(left) != scaled:
                    return False
    return True


# -- enumerated Z_n diagnostic ---------------------------------------------------


def _simple_tensor_rows(f: BilinearMap) -> np.ndarray:
    p = f.m.domain.p
    n = f.m.dim
    xs = gfenum.all_vectors(p, n).astype(np.int64)
    outer = np.einsum("ai,bj->abij", xs, xs).reshape(-1, n * n) % p
    return gfenum.unique_rows(outer.astype(np.int16), p)


def _relation_span_from_sums(f: BilinearMap, sums: np.ndarray):
    """Differences of equal-f-sum tensors, as a canonical GF(p) span."""
    p = f.m.domain.p
    n = f.m.dim
    tmat = np.array(
        [
            [int(f.tensor[i][j][t]) % p for i in range(n) for j in range(n)]
            for t in range(f.n.dim)
        ],
        dtype=np.int64,
    )
    if f.n.dim:
        values = (sums.astype(np.int64) @ tmat.T) % p
        keys = gfenum.pack_rows(values.astype(np.int16), p)
    else:
        keys = np.zeros(len(sums), dtype=np.int64)
    order = np.argsort(keys, kind="stable")
    sorted_sums = sums[order]
    sorted_keys = keys[order]
    gens = []
    start = 0
    while start < len(sorted_keys):
        end = start
        while end < len(sorted_keys) and sorted_keys[end] == sorted_keys[start]:
            end += 1
        base_row = sorted_sums[start]
        for r in range(start + 1, end):
            gens.append(tuple(int(x) % p for x in (sorted_sums[r] - base_row) % p))
        start = end
    d = f.m.domain
    return canonical_span_rows(d, gens, f.m.dim * f.m.dim)


def z_n_diagnostic(f: BilinearMap, n: int) -> EndoAlgebra:
    """Exact Z_n(f) over a small prime field by enumerating all sums of at
    most n products; validates the kernel-stabilizer shortcut."""
    chain, _ = z_n_chain(f, n)
    # the chain is constant past its stabilization point
    return chain[min(n, len(chain)) - 1]


def z_n_chain(f: BilinearMap, max_n: int):
    """[Z_1, ..., Z_k] with k <= max_n, stopping early at stabilization.

    Returns (chain, stabilized_at) where stabilized_at is the first n
    with Z_n = Z_{n+1}, or None if the chain kept moving.
    """
    _require_field_map(f, "z_n_chain")
    if not isinstance(f.m.domain, PrimeField):
        raise UnsupportedDomain("the Z_n diagnostic enumerates prime fields only")
    p = f.m.domain.p
    if p**f.m.dim > _ZN_ENUM_CAP:
        raise EnumerationTooLarge(
            f"|M| = {p}^{f.m.dim} exceeds the diagnostic cap {_ZN_ENUM_CAP}"
        )
    z = z_center(f)
    simple = _simple_tensor_rows(f)
    sums = simple
    chain = []
    stabilized_at = None
    for level in range(1, max_n + 1):
        span = _relation_span_from_sums(f, sums)
        chain.append(_stabilizer_inside(f, z, span))
        if len(chain) >= 2 and chain[-1].equal(chain[-2]) and stabilized_at is None:
            stabilized_at = level - 1
            break
        if level < max_n:
            sums = gfenum.sumset(sums, simple, p)
    return chain, stabilized_at


# -- scalar-driven decomposition ---------------------------------------------------


def endo_commutative_algebra(endo: EndoAlgebra) -> CommutativeAlgebra:
    """A closed unital commutative EndoAlgebra as an abstract algebra."""
    d = endo.domain
    tensor = []
    for a in endo.basis:
        row = []
        for b in endo.basis:
            coords = endo.coords_of(a.mul(b))
            if coords is None:
                raise RuntimeError("endomorphism algebra is not closed")
            row.append(coords)
        tensor.append(tuple(row))
    unit = endo.coords_of(Matrix.identity(d, endo.dim))
    if unit is None:
        raise RuntimeError("endomorphism algebra has no identity")
    return CommutativeAlgebra(d, endo.rank, tuple(tensor), unit)


def scalar_ring_as_algebra(report: ScalarRingReport) -> CommutativeAlgebra:
    """P(f) as an abstract commutative algebra in its canonical basis."""
    return endo_commutative_algebra(report.algebra)


@dataclass(frozen=True)
class BilinearComponent:
    map: BilinearMap
    m_rows: tuple
    n_rows: tuple
    local: LocalFactor


@dataclass(frozen=True)
class BilinearDecomposition:
    components: tuple
    scalar_report: ScalarRingReport
    scalar_algebra: CommutativeAlgebra

    @property
    def m_change_rows(self):
        return tuple(row for c in self.components for row in c.m_rows)

    @property
    def n_change_rows(self):
        return tuple(row for c in self.components for row in c.n_rows)


def decompose_via_scalars(f: BilinearMap, seed: int = 0) -> BilinearDecomposition:
    """Split a full nondegenerate map along the idempotents of P(f)."""
    _require_field_map(f, "decompose_via_scalars")
    if not is_full(f):
        raise ValidationError("decompose_via_scalars needs a full map")
    report = p_of_f(f)
    d = f.m.domain
    algebra = scalar_ring_as_algebra(report)
    factors = local_decomposition(algebra, seed)
    im_mat_t = Matrix.from_rows(d, list(report.image_rows)).transpose()
    im_mat_t_inv = inverse(im_mat_t)
    components = []
    for lf in factors:
        e_m = report.algebra.combine(lf.idempotent)
        alpha = Matrix.zero(d, f.n.dim, f.n.dim)
        for c, act in zip(lf.idempotent, report.action_on_image):
            alpha = alpha.add(act.scale(c))
        e_n = im_mat_t.mul(alpha).mul(im_mat_t_inv)
        m_rows = canonical_span_rows(d, [e_m.col(j) for j in range(e_m.cols)], f.m.dim)
        n_rows = canonical_span_rows(d, [e_n.col(j) for j in range(e_n.cols)], f.n.dim)
        tensor = []
        for x in m_rows:
            row = []
            for y in m_rows:
                value = f.evaluate(x, y)
                coords = coords_in_rows(d, n_rows, value)
                if coords is None:
                    raise RuntimeError("component value left its image block")
                row.append(coords)
            tensor.append(tuple(row))
        comp_map = BilinearMap(
            field_carrier(d, len(m_rows)), field_carrier(d, len(n_rows)), tuple(tensor)
        )
        components.append(
            BilinearComponent(comp_map, tuple(m_rows), tuple(n_rows), lf)
        )
    deco = BilinearDecomposition(tuple(components), report, algebra)
    _verify_component_structure(f, deco)
    return deco


def _verify_component_structure(f: BilinearMap, deco: BilinearDecomposition):
    d = f.m.domain
    if sum(len(c.m_rows) for c in deco.components) != f.m.dim:
        raise RuntimeError("component M blocks do not fill M")
    if sum(len(c.n_rows) for c in deco.components) != f.n.dim:
        raise RuntimeError("component N blocks do not fill N")
    for i, a in enumerate(deco.components):
        for j, b in enumerate(deco.components):
            if i == j:
                continue
            for x in a.m_rows:
                for y in b.m_rows:
                    if not f.n.is_zero(f.evaluate(x, y)):
                        raise RuntimeError("cross-component product is nonzero")
    for comp in deco.components:
        sub_report = p_of_f(comp.map)
        if sub_report.algebra.rank != comp.local.algebra.dim:
            raise RuntimeError(
                "component scalar ring does not match its local factor"
            )


def verify_decomposition_reassembly(f: BilinearMap, deco: BilinearDecomposition) -> bool:
    """Exact: pushing the block tensors through the recorded bases gives f."""
    d = f.m.domain
    m_rows = list(deco.m_change_rows)
    n_rows = list(deco.n_change_rows)
    sizes_m = [len(c.m_rows) for c in deco.components]
    sizes_n = [len(c.n_rows) for c in deco.components]
    basis = [
        tuple(d.one() if k == i else d.zero() for k in range(f.m.dim))
        for i in range(f.m.dim)
    ]
    for x in basis:
        xc = coords_in_rows(d, m_rows, x)
        for y in basis:
            yc = coords_in_rows(d, m_rows, y)
            if xc is None or yc is None:
                return False
            total = [d.zero()] * f.n.dim
            off_m = 0
            off_n = 0
            for comp, sm, sn in zip(deco.components, sizes_m, sizes_n):
                xs = xc[off_m : off_m + sm]
                ys = yc[off_m : off_m + sm]
                value = comp.map.evaluate(xs, ys)
                for c, row in zip(value, n_rows[off_n : off_n + sn]):
                    for t in range(f.n.dim):
                        total[t] = d.add(total[t], d.mul(c, row[t]))
                off_m += sm
                off_n += sn
            if tuple(total) != f.evaluate(x, y):
                return False
    return True


# -- A(R): the largest ring of scalars of a ring multiplication ---------------------


@dataclass(frozen=True)
class ScalarActionReport:
    """A(R) acting on R/Ann(R), with the compatible action on R^2."""

    algebra: EndoAlgebra          # on quotient coordinates
    action_on_square: tuple       # one Matrix per basis element, in R^2 basis coords
    quotient_rows: tuple          # lifts of the R/Ann basis, in R coordinates
    annihilator_rows: tuple
    square_rows: tuple            # basis of R^2, in R coordinates
    eta: Matrix                   # R^2 basis -> quotient coordinates
    p_report: ScalarRingReport    # P(f') on the quotient
    quotient_map: BilinearMap     # f' itself


def largest_scalar_action(
    mult: BilinearMap, ann_rows, square_rows
) -> ScalarActionReport:
    """A(R) = {A in P(f') : A is eta-linear}, f' the induced quotient map.

    mult is the ring multiplication R x R -> R over a field carrier;
    ann_rows and square_rows are canonical bases of Ann(R) and R^2.
    """
    _require_field_map(mult, "largest_scalar_action")
    if mult.m.dim != mult.n.dim:
        raise DimensionMismatch("ring multiplication must map R x R into R")
    if not square_rows:
        raise DegenerateInput("zero multiplication: the quotient map is degenerate")
    d = mult.m.domain
    dim = mult.m.dim
    q_rows = complement_rows(d, list(ann_rows), dim)
    tensor = []
    for x in q_rows:
        row = []
        for y in q_rows:
            value = mult.evaluate(x, y)
            coords = coords_in_rows(d, list(square_rows), value)
            if coords is None:
                raise RuntimeError("a product left the span of R^2")
            row.append(coords)
        tensor.append(tuple(row))
    fprime = BilinearMap(
        field_carrier(d, len(q_rows)), field_carrier(d, len(square_rows)), tuple(tensor)
    )
    if two_sided_kernel(fprime):
        raise RuntimeError("induced quotient map is degenerate")
    rep = p_of_f(fprime)
    # transport the image action into R^2 basis coordinates
    im_t = Matrix.from_rows(d, list(rep.image_rows)).transpose()
    im_t_inv = inverse(im_t)
    actions_sq = [im_t.mul(a).mul(im_t_inv) for a in rep.action_on_image]
    # eta: the class of each R^2 basis vector in the quotient
    change = list(q_rows) + list(ann_rows)
    eta_cols = []
    for s in square_rows:
        coords = coords_in_rows(d, change, s)
        if coords is None:
            raise RuntimeError("R^2 vector outside R")
        eta_cols.append(coords[: len(q_rows)])
    eta = (
        Matrix.from_cols(d, eta_cols)
        if eta_cols
        else Matrix(d, len(q_rows), 0, ())
    )
    # eta-linearity: A_Q . eta = eta . A_{R^2}, linear over the P basis
    rows = []
    for a_q, a_sq in zip(rep.algebra.basis, actions_sq):
        diff = a_q.mul(eta).sub(eta.mul(a_sq))
        rows.append(diff.entries)
    coeff_rows = []
    if rows:
        for entry_idx in range(len(rows[0])):
            coeff_rows.append(tuple(rows[a][entry_idx] for a in range(len(rows))))
    if coeff_rows:
        kern = kernel_basis(Matrix.from_rows(d, coeff_rows))
        vectors = [
            rep.algebra.combine(kern.col(j)).entries for j in range(kern.cols)
        ]
        algebra = EndoAlgebra.from_vectors(d, len(q_rows), vectors)
    else:
        algebra = rep.algebra
    final_actions = []
    for a in algebra.basis:
        coords = rep.algebra.coords_of(a)
        acc = Matrix.zero(d, len(square_rows), len(square_rows))
        for c, act in zip(coords, actions_sq):
            acc = acc.add(act.scale(c))
        final_actions.append(acc)
    return ScalarActionReport(
        algebra=algebra,
        action_on_square=tuple(final_actions),
        quotient_rows=tuple(q_rows),
        annihilator_rows=tuple(ann_rows),
        square_rows=tuple(square_rows),
        eta=eta,
        p_report=rep,
        quotient_map=fprime,
    )
