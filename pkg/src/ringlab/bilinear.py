"""Bilinear maps on formal modules: two-sided kernel, image, fullness,
foundation/addition splitting, divisible/bounded splitting, and width.

A Carrier is the home of one side of a map: a finite-dimensional vector
space over an exact field, a finitely generated Z-module given by a
formal summand list, or a mixed divisible-plus-torsion formal sum.  The
general case M1 != M2 is not modeled; maps are f: M x M -> N presented by
a structure tensor tensor[i][j] = f(b_i, b_j) in N-coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gfenum
from .domains import Domain, PrimeField, QQ, Rationals, ZZ
from .errors import (
    DimensionMismatch,
    NoSplit,
    SearchBoundExceeded,
    UnsupportedDomain,
    ValidationError,
)
from .linalg import Matrix, kernel_basis, kernel_basis_int, rref, solve
from .modules import (
    CYCLIC,
    RATIONAL,
    ModuleDesc,
    cyclic,
    divisible_bounded_split,
    rational_line,
    relation_matrix,
    split_complement,
    submodule_adapted_basis,
    submodule_canonical_gens,
    quotient_invariants,
)

FIELD = "field"
INTEGER = "integer"
MIXED = "mixed"


@dataclass(frozen=True)
class Carrier:
    """One side of a bilinear map; see the module docstring."""

    domain: Domain | None
    dim: int
    desc: ModuleDesc | None

    @property
    def kind(self) -> str:
        if self.domain is not None and self.domain.is_field:
            return FIELD
        if self.domain == ZZ:
            return INTEGER
        return MIXED

    def zero(self):
        if self.kind == FIELD:
            return (self.domain.zero(),) * self.dim
        return self.desc.zero()

    def reduce(self, coords):
        if len(coords) != self.dim:
            raise DimensionMismatch(f"expected {self.dim} coordinates, got {len(coords)}")
        if self.kind == FIELD:
            return tuple(coords)
        return self.desc.reduce(coords)

    def add(self, a, b):
        if self.kind == FIELD:
            d = self.domain
            return tuple(d.add(x, y) for x, y in zip(a, b))
        return self.desc.add(a, b)

    def neg(self, a):
        if self.kind == FIELD:
            return tuple(self.domain.neg(x) for x in a)
        return self.desc.neg(a)

    def is_zero(self, a) -> bool:
        if self.kind == FIELD:
            return all(self.domain.is_zero(x) for x in a)
        return self.desc.is_zero_elem(a)

    def eq(self, a, b) -> bool:
        return self.is_zero(self.add(a, self.neg(b)))

    def describe(self) -> str:
        if self.kind == FIELD:
            return f"{self.domain.describe()}^{self.dim}"
        return self.desc.describe()

    def format_elem(self, a) -> str:
        if self.kind == FIELD:
            fmt = []
            for x in a:
                s = self.domain.format(x)
                fmt.append(str(s) if not isinstance(s, list) else "[" + ",".join(s) + "]")
            return "(" + ", ".join(fmt) + ")"
        return self.desc.format_elem(a)


def field_carrier(domain: Domain, dim: int) -> Carrier:
    if not domain.is_field:
        raise ValidationError("field_carrier needs a field domain")
    return Carrier(domain, dim, None)


def module_carrier(desc: ModuleDesc) -> Carrier:
    """Carrier for a formal sum; pure-rational sums become Q-vector spaces."""
    if desc.is_divisible():
        return field_carrier(QQ, desc.dim)
    if desc.is_fg_integral():
        return Carrier(ZZ, desc.dim, desc)
    return Carrier(None, desc.dim, desc)


def prime_field_carrier_of(desc: ModuleDesc) -> Carrier | None:
    """Reinterpret a uniform Z/p formal sum as a GF(p) vector space."""
    moduli = {s.modulus for s in desc.summands if s.kind == CYCLIC}
    if len(moduli) == 1 and len(desc.summands) == len(desc.bounded_part):
        p = moduli.pop()
        try:
            return field_carrier(PrimeField(p), desc.dim)
        except ValidationError:
            return None
    return None


@dataclass(frozen=True)
class BilinearMap:
    m: Carrier
    n: Carrier
    tensor: tuple  # tensor[i][j] = f(b_i, b_j) coordinates in N

    def __post_init__(self):
        tensor = tuple(
            tuple(self.n.reduce(entry) for entry in row) for row in self.tensor
        )
        if len(tensor) != self.m.dim or any(len(row) != self.m.dim for row in tensor):
            raise DimensionMismatch("tensor shape must be dim(M) x dim(M)")
        object.__setattr__(self, "tensor", tensor)
        self._validate_cross_structure()

    def _validate_cross_structure(self):
        """Torsion and divisibility constraints forced by Z-bilinearity.

        An entry indexed by a cyclic basis vector of order q is killed by
        q; an entry indexed by a divisible basis vector must itself be
        divisible.  Together these force divisible x bounded pairs to 0.
        """
        m_desc = self.m.desc
        n_desc = self.n.desc
        if self.m.kind == FIELD and self.n.kind == FIELD:
            if self.m.domain != self.n.domain:
                raise ValidationError(
                    "both sides of a bilinear map must share the scalar domain"
                )
            return
        if (self.m.kind == FIELD) != (self.n.kind == FIELD):
            m_desc = m_desc or _field_desc(self.m)
            n_desc = n_desc or _field_desc(self.n)
            if m_desc is None or n_desc is None:
                raise ValidationError("cannot mix an extension field side with modules")
        for i in range(self.m.dim):
            si = m_desc.summands[i]
            for j in range(self.m.dim):
                for entry, label in ((self.tensor[i][j], "row"), (self.tensor[j][i], "col")):
                    if si.kind == CYCLIC:
                        killed = n_desc.scale_int(si.modulus, entry)
                        if not n_desc.is_zero_elem(killed):
                            raise ValidationError(
                                f"entry f involving torsion basis vector {i} "
                                f"(order {si.modulus}) is not killed by the order"
                            )
                    if si.kind == RATIONAL:
                        for t, st in enumerate(n_desc.summands):
                            if st.kind != RATIONAL and entry[t] != 0:
                                raise ValidationError(
                                    f"entry f involving divisible basis vector {i} "
                                    "has non-divisible support"
                                )

    def evaluate(self, x, y):
        x = self.m.reduce(x)
        y = self.m.reduce(y)
        if self.m.kind == FIELD:
            d = self.m.domain
            acc = list(self.n.zero())
            for i, xi in enumerate(x):
                if d.is_zero(xi):
                    continue
                for j, yj in enumerate(y):
                    if d.is_zero(yj):
                        continue
                    c = d.mul(xi, yj)
                    entry = self.tensor[i][j]
                    for t in range(self.n.dim):
                        acc[t] = d.add(acc[t], d.mul(c, entry[t]))
            return self.n.reduce(tuple(acc))
        # int/Fraction coordinates: accumulate exactly, reduce mod orders at
        # the end; zero tensor coordinates are skipped so Fraction scalars
        # never touch cyclic coordinates
        acc = [0] * self.n.dim
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                c = xi * yj
                entry = self.tensor[i][j]
                for t in range(self.n.dim):
                    if entry[t] != 0:
                        acc[t] = acc[t] + c * entry[t]
        return self.n.reduce(tuple(acc))

    def entries(self):
        for i in range(self.m.dim):
            for j in range(self.m.dim):
                yield (i, j), self.tensor[i][j]

    def describe(self) -> str:
        return f"{self.m.describe()} x {self.m.describe()} -> {self.n.describe()}"


def _field_desc(carrier: Carrier) -> ModuleDesc | None:
    """Formal-sum shape of a field carrier when one exists."""
    if isinstance(carrier.domain, Rationals):
        return ModuleDesc(tuple(rational_line() for _ in range(carrier.dim)))
    if isinstance(carrier.domain, PrimeField):
        return ModuleDesc(tuple(cyclic(carrier.domain.p) for _ in range(carrier.dim)))
    return None


# -- canonical spans over a field ---------------------------------------------


def canonical_span_rows(domain: Domain, vectors, width: int):
    """Echelonized basis (as rows) of the span of the given vectors."""
    vectors = [tuple(v) for v in vectors if not all(domain.is_zero(x) for x in v)]
    if not vectors:
        return []
    reduced, _, rank = rref(Matrix.from_rows(domain, vectors))
    return [reduced.row(i) for i in range(rank)]


def complement_rows(domain: Domain, span_rows_, width: int):
    """Standard basis vectors completing an echelonized span to the ambient."""
    pivots = set()
    if span_rows_:
        _, piv, _ = rref(Matrix.from_rows(domain, span_rows_))
        pivots = set(piv)
    out = []
    for i in range(width):
        if i not in pivots:
            out.append(
                tuple(domain.one() if k == i else domain.zero() for k in range(width))
            )
    return out


def coords_in_rows(domain: Domain, rows, vec):
    """Coordinates of vec in the given row basis, or None."""
    if not rows:
        return () if all(domain.is_zero(x) for x in vec) else None
    mat = Matrix.from_cols(domain, rows)
    res = solve(mat, tuple(vec))
    return None if res is None else res[0]


# -- kernel and image ----------------------------------------------------------


def _field_kernel(f: BilinearMap):
    d = f.m.domain
    rows = []
    for j in range(f.m.dim):
        for t in range(f.n.dim):
            rows.append(tuple(f.tensor[i][j][t] for i in range(f.m.dim)))
            rows.append(tuple(f.tensor[j][i][t] for i in range(f.m.dim)))
    if not rows:
        return [
            tuple(d.one() if k == i else d.zero() for k in range(f.m.dim))
            for i in range(f.m.dim)
        ]
    kern = kernel_basis(Matrix.from_rows(d, rows))
    cols = [kern.col(j) for j in range(kern.cols)]
    return canonical_span_rows(d, cols, f.m.dim)


def _integer_kernel(f: BilinearMap):
    m_desc, n_desc = f.m.desc, f.n.desc
    lam_n = relation_matrix(n_desc)
    blocks = []
    for j in range(f.m.dim):
        for left in (True, False):
            block = []
            for t in range(f.n.dim):
                row = [
                    int(f.tensor[i][j][t] if left else f.tensor[j][i][t])
                    for i in range(f.m.dim)
                ]
                block.append(row)
            blocks.append(block)
    total_rows = len(blocks) * f.n.dim
    q = lam_n.cols
    width = f.m.dim + len(blocks) * q
    rows = []
    for b, block in enumerate(blocks):
        for t in range(f.n.dim):
            row = [0] * width
            row[: f.m.dim] = block[t]
            for c in range(q):
                row[f.m.dim + b * q + c] = -lam_n.get(t, c)
            rows.append(row)
    if not rows:
        gens = [tuple(1 if k == i else 0 for k in range(f.m.dim)) for i in range(f.m.dim)]
        return submodule_canonical_gens(m_desc, gens)
    system = Matrix.from_rows(ZZ, rows)
    kern = kernel_basis_int(system)
    gens = [tuple(kern.col(j)[: f.m.dim]) for j in range(kern.cols)]
    return submodule_canonical_gens(m_desc, gens)


def two_sided_kernel(f: BilinearMap):
    """Canonical generators of C(f) = {x : f(x, M) = f(M, x) = 0}."""
    if f.m.kind == FIELD:
        return _field_kernel(f)
    if f.m.kind == INTEGER:
        return _integer_kernel(f)
    f_d, f_c, (d_idx, b_idx) = torsion_split(f)
    out = []
    for gen in two_sided_kernel(f_d):
        coords = list(f.m.zero())
        for i, c in zip(d_idx[0], gen):
            coords[i] = c
        out.append(f.m.reduce(coords))
    for gen in two_sided_kernel(f_c):
        coords = list(f.m.zero())
        for i, c in zip(b_idx[0], gen):
            coords[i] = c
        out.append(f.m.reduce(coords))
    return out


def image_submodule(f: BilinearMap):
    """Canonical generators of <f(M, M)> inside N."""
    entries = [entry for _, entry in f.entries()]
    if f.n.kind == FIELD:
        return canonical_span_rows(f.n.domain, entries, f.n.dim)
    if f.n.kind == INTEGER:
        return submodule_canonical_gens(f.n.desc, entries)
    return _mixed_image(f)


def _mixed_image(f: BilinearMap):
    f_d, f_c, (d_idx, b_idx) = torsion_split(f)
    out = []
    for gen in image_submodule(f_d):
        coords = list(f.n.zero())
        for i, c in zip(d_idx[1], gen):
            coords[i] = c
        out.append(f.n.reduce(coords))
    for gen in image_submodule(f_c):
        coords = list(f.n.zero())
        for i, c in zip(b_idx[1], gen):
            coords[i] = c
        out.append(f.n.reduce(coords))
    return out


def is_full(f: BilinearMap) -> bool:
    gens = image_submodule(f)
    if f.n.kind == FIELD:
        return len(gens) == f.n.dim
    if f.n.kind == INTEGER:
        return quotient_invariants(f.n.desc, gens) == ()
    f_d, f_c, _ = torsion_split(f)
    return is_full(f_d) and is_full(f_c)


def is_nondegenerate(f: BilinearMap) -> bool:
    return not two_sided_kernel(f)


def is_identically_degenerate(f: BilinearMap) -> bool:
    return all(f.n.is_zero(entry) for _, entry in f.entries())


# -- torsion split -------------------------------------------------------------


def _desc_of(carrier: Carrier) -> ModuleDesc:
    desc = carrier.desc or _field_desc(carrier)
    if desc is None:
        raise UnsupportedDomain(
            "no formal-sum shape for this carrier (extension field)"
        )
    return desc


def torsion_split(f: BilinearMap):
    """(f_D, f_C, ((M_D idx, N_D idx), (M_B idx, N_B idx))).

    f_D is the restriction to the divisible parts, f_C to the bounded
    parts; cross blocks are zero by the construction invariant.
    """
    m_desc = _desc_of(f.m)
    n_desc = _desc_of(f.n)
    m_d, m_b, (m_didx, m_bidx) = divisible_bounded_split(m_desc)
    n_d, n_b, (n_didx, n_bidx) = divisible_bounded_split(n_desc)
    tensor_d = tuple(
        tuple(
            tuple(f.tensor[i][j][t] for t in n_didx)
            for j in m_didx
        )
        for i in m_didx
    )
    tensor_b = tuple(
        tuple(
            tuple(f.tensor[i][j][t] for t in n_bidx)
            for j in m_bidx
        )
        for i in m_bidx
    )
    f_d = BilinearMap(module_carrier(m_d), module_carrier(n_d), tensor_d)
    f_c = BilinearMap(module_carrier(m_b), module_carrier(n_b), tensor_b)
    return f_d, f_c, ((m_didx, n_didx), (m_bidx, n_bidx))


# -- foundation / addition -----------------------------------------------------


@dataclass(frozen=True)
class BilinearSplit:
    foundation: BilinearMap
    addition: BilinearMap
    m_foundation_basis: tuple
    m_kernel_basis: tuple
    n_image_basis: tuple
    n_complement_basis: tuple


def _restrict_field(f: BilinearMap, basis_rows, image_rows):
    d = f.m.domain
    tensor = []
    for a in basis_rows:
        row = []
        for b in basis_rows:
            value = f.evaluate(a, b)
            coords = coords_in_rows(d, image_rows, value)
            if coords is None:
                raise ValidationError("restricted value left the image span")
            row.append(coords)
        tensor.append(tuple(row))
    return BilinearMap(
        field_carrier(d, len(basis_rows)),
        field_carrier(d, len(image_rows)),
        tuple(tensor),
    )


def foundation_addition_split(f: BilinearMap) -> BilinearSplit:
    """Split f into a full nondegenerate foundation and a degenerate addition.

    Over a field the complements always exist; over a f.g. Z-module the
    kernel and image must split off, otherwise NoSplit says which side
    obstructed.
    """
    kernel_gens = two_sided_kernel(f)
    image_gens = image_submodule(f)
    if f.m.kind == FIELD:
        d = f.m.domain
        m_found = complement_rows(d, kernel_gens, f.m.dim)
        n_comp = complement_rows(d, image_gens, f.n.dim)
        foundation = _restrict_field(f, m_found, image_gens)
        addition = BilinearMap(
            field_carrier(d, len(kernel_gens)),
            field_carrier(d, len(n_comp)),
            tuple(
                tuple((d.zero(),) * len(n_comp) for _ in kernel_gens)
                for _ in kernel_gens
            ),
        )
        return BilinearSplit(
            foundation,
            addition,
            tuple(m_found),
            tuple(kernel_gens),
            tuple(image_gens),
            tuple(n_comp),
        )
    if f.m.kind != INTEGER or f.n.kind != INTEGER:
        raise UnsupportedDomain(
            "foundation/addition over mixed carriers: split the torsion first"
        )
    m_found_gens = split_complement(kernel_gens, f.m.desc)
    if m_found_gens is None:
        raise NoSplit("C(f) does not split off inside M", which="kernel")
    n_comp_gens = split_complement(image_gens, f.n.desc)
    if n_comp_gens is None:
        raise NoSplit("im(f) does not split off inside N", which="image")
    m_found = submodule_adapted_basis(f.m.desc, m_found_gens)
    image = submodule_adapted_basis(f.n.desc, image_gens)
    kernel = submodule_adapted_basis(f.m.desc, kernel_gens)
    n_comp = submodule_adapted_basis(f.n.desc, n_comp_gens)
    tensor = []
    for a in m_found.basis:
        row = []
        for b in m_found.basis:
            row.append(image.coords_of(f.evaluate(a, b)))
        tensor.append(tuple(row))
    foundation = BilinearMap(
        module_carrier(m_found.desc), module_carrier(image.desc), tuple(tensor)
    )
    zero_row = tuple(module_carrier(n_comp.desc).zero() for _ in kernel.basis)
    addition = BilinearMap(
        module_carrier(kernel.desc),
        module_carrier(n_comp.desc),
        tuple(zero_row for _ in kernel.basis),
    )
    return BilinearSplit(
        foundation,
        addition,
        tuple(m_found.basis),
        tuple(kernel.basis),
        tuple(image.basis),
        tuple(n_comp.basis),
    )


def verify_reassembly(f: BilinearMap, split: BilinearSplit) -> bool:
    """Exact check of f(x, y) = f^F(x_1, y_1) + f^0(x_2, y_2) on basis pairs."""
    if f.m.kind != FIELD:
        # over Z, check on the adapted generators: kernel pairs vanish and
        # foundation pairs reproduce the restricted tensor lifted back to N
        for x in split.m_kernel_basis:
            for y in list(split.m_foundation_basis) + list(split.m_kernel_basis):
                if not f.n.is_zero(f.evaluate(x, y)) or not f.n.is_zero(f.evaluate(y, x)):
                    return False
        for a, x in enumerate(split.m_foundation_basis):
            for b, y in enumerate(split.m_foundation_basis):
                coords = split.foundation.tensor[a][b]
                lifted = [0] * f.n.dim
                for c, gen in zip(coords, split.n_image_basis):
                    if c == 0:
                        continue
                    for t in range(f.n.dim):
                        if gen[t] != 0:
                            lifted[t] = lifted[t] + c * gen[t]
                if not f.n.eq(f.n.reduce(tuple(lifted)), f.evaluate(x, y)):
                    return False
        return True
    d = f.m.domain
    basis_m = [
        tuple(d.one() if k == i else d.zero() for k in range(f.m.dim))
        for i in range(f.m.dim)
    ]
    change = list(split.m_foundation_basis) + list(split.m_kernel_basis)
    for x in basis_m:
        for y in basis_m:
            xc = coords_in_rows(d, change, x)
            yc = coords_in_rows(d, change, y)
            if xc is None or yc is None:
                return False
            nf = len(split.m_foundation_basis)
            x1, x2 = xc[:nf], xc[nf:]
            y1, y2 = yc[:nf], yc[nf:]
            val_f = split.foundation.evaluate(x1, y1) if nf else ()
            # lift foundation value through the image basis
            lifted = [d.zero()] * f.n.dim
            for c, row in zip(val_f, split.n_image_basis):
                for t in range(f.n.dim):
                    lifted[t] = d.add(lifted[t], d.mul(c, row[t]))
            val_0 = split.addition.evaluate(x2, y2) if split.addition.m.dim else ()
            for c, row in zip(val_0, split.n_complement_basis):
                for t in range(f.n.dim):
                    lifted[t] = d.add(lifted[t], d.mul(c, row[t]))
            if tuple(lifted) != f.evaluate(x, y):
                return False
    return True


# -- width ----------------------------------------------------------------------


@dataclass(frozen=True)
class WidthReport:
    width: int | None
    upper_bound: int
    exact: bool
    certificates: tuple

    def describe(self) -> str:
        if self.exact:
            return f"width {self.width} (exact)"
        return f"width <= {self.upper_bound}"


_WIDTH_ENUM_CAP = 3**6


def width(f: BilinearMap, search_bound: int = 16) -> WidthReport:
    """Exact width by sumset search over small prime fields; the dim-im
    upper bound with one-product certificates over infinite fields."""
    image = image_submodule(f)
    if not image:
        return WidthReport(0, 0, True, ())
    if f.m.kind == FIELD and isinstance(f.m.domain, PrimeField):
        p = f.m.domain.p
        if p**f.m.dim <= _WIDTH_ENUM_CAP:
            return _width_bfs(f, search_bound)
    if f.m.kind == FIELD:
        certs = _pivot_entry_certificates(f)
        bound = len(image)
        exact = bound <= 1
        return WidthReport(bound if exact else None, bound, exact, certs)
    raise UnsupportedDomain("width is computed over field carriers in v1")


def _pivot_entry_certificates(f: BilinearMap):
    """Tensor entries forming a basis of im(f): each im-basis vector is a
    single product, so every element is a sum of dim-im products."""
    d = f.n.domain
    chosen = []
    rows = []
    for (i, j), entry in f.entries():
        trial = rows + [entry]
        if len(canonical_span_rows(d, trial, f.n.dim)) > len(
            canonical_span_rows(d, rows, f.n.dim)
        ):
            rows.append(entry)
            chosen.append((i, j))
    return tuple(chosen)


def _width_bfs(f: BilinearMap, search_bound: int) -> WidthReport:
    p = f.m.domain.p
    xs = gfenum.all_vectors(p, f.m.dim)
    tens = np.array(
        [[[int(c) % p for c in f.tensor[i][j]] for j in range(f.m.dim)] for i in range(f.m.dim)],
        dtype=np.int64,
    )
    # all products f(x, y) over all pairs
    left = np.einsum("ad,det->aet", xs.astype(np.int64), tens) % p
    prods = np.einsum("aet,be->abt", left, xs.astype(np.int64)) % p
    values = gfenum.unique_rows(prods.reshape(-1, f.n.dim).astype(np.int16), p)
    image_gens = np.array(
        [[int(c) % p for c in g] for g in image_submodule(f)], dtype=np.int16
    )
    target = gfenum.span_rows(image_gens, p)
    reach = values
    k = 1
    while not gfenum.same_row_set(
        gfenum.unique_rows(np.concatenate([reach, target]), p), reach, p
    ):
        k += 1
        if k > search_bound:
            raise SearchBoundExceeded(f"width exceeded the search bound {search_bound}")
        reach = gfenum.sumset(reach, values, p)
    return WidthReport(k, k, True, ())
