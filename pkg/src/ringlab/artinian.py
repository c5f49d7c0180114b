"""Finite-dimensional commutative unital algebras over an exact field:
radical, decomposition into local factors, J-series with the r_k witness,
and fields of representatives by Hensel lifting.

Splitting strategy: probe elements (basis vectors, then a deterministic
seeded stream; exhaustive over small prime fields), compute minimal
polynomials, and turn a coprime factorization of a probe's minimal
polynomial into exact orthogonal idempotents of the subalgebra it
generates; recurse on the blocks.  A factor is accepted as local once a
probe exhibits a primitive residue element, certifying that the residue
ring is a field.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bilinear import canonical_span_rows, coords_in_rows
from .domains import Domain, Extension, PrimeField, Rationals, poly_xgcd
from .errors import (
    ActionNotWellFormed,
    NonFieldDomain,
    ProbeFailure,
    UnsupportedDomain,
    ValidationError,
)
from .linalg import Matrix, kernel_basis, rref, solve
from .polynomials import Poly, gcd as poly_gcd, poly_factor

_PROBE_ROUNDS = 40
_EXHAUSTIVE_CAP = 2048


@dataclass(frozen=True)
class CommutativeAlgebra:
    """Unital commutative associative algebra by structure constants.

    tensor[i][j] = coordinates of b_i * b_j; laws are verified on all
    basis triples at construction.
    """

    base: Domain
    dim: int
    tensor: tuple
    unit: tuple

    def __post_init__(self):
        if not self.base.is_field:
            raise NonFieldDomain("commutative algebras are constructed over fields")
        z = self.base.zero()
        tensor = tuple(
            tuple(tuple(self.base.add(c, z) for c in entry) for entry in row)
            for row in self.tensor
        )
        object.__setattr__(self, "tensor", tensor)
        object.__setattr__(self, "unit", tuple(self.base.add(c, z) for c in self.unit))
        self._verify_laws()

    @staticmethod
    def from_tensor(base: Domain, tensor, unit=None) -> "CommutativeAlgebra":
        """Build an algebra, locating the unit by a linear solve if absent."""
        dim = len(tensor)
        if unit is None:
            rows = []
            rhs = []
            for i in range(dim):
                for t in range(dim):
                    rows.append(tuple(tensor[k][i][t] for k in range(dim)))
                    rhs.append(base.one() if t == i else base.zero())
            res = solve(Matrix.from_rows(base, rows), tuple(rhs))
            if res is None:
                raise ValidationError("algebra has no unit element")
            unit = res[0]
        return CommutativeAlgebra(base, dim, tensor, unit)

    def _verify_laws(self):
        d = self.base
        for i in range(self.dim):
            for j in range(self.dim):
                if any(
                    not d.eq(a, b)
                    for a, b in zip(self.tensor[i][j], self.tensor[j][i])
                ):
                    raise ValidationError(f"multiplication not commutative at ({i},{j})")
        basis = [
            tuple(d.one() if k == i else d.zero() for k in range(self.dim))
            for i in range(self.dim)
        ]
        for i in range(self.dim):
            if self.mult(self.unit, basis[i]) != basis[i]:
                raise ValidationError("unit law fails")
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    left = self.mult(self.mult(basis[i], basis[j]), basis[k])
                    right = self.mult(basis[i], self.mult(basis[j], basis[k]))
                    if left != right:
                        raise ValidationError(
                            f"multiplication not associative at ({i},{j},{k})"
                        )

    def mult(self, x, y) -> tuple:
        d = self.base
        acc = [d.zero()] * self.dim
        for i, xi in enumerate(x):
            if d.is_zero(xi):
                continue
            for j, yj in enumerate(y):
                if d.is_zero(yj):
                    continue
                c = d.mul(xi, yj)
                entry = self.tensor[i][j]
                for t in range(self.dim):
                    acc[t] = d.add(acc[t], d.mul(c, entry[t]))
        return tuple(acc)

    def left_mult_matrix(self, x) -> Matrix:
        cols = []
        d = self.base
        for j in range(self.dim):
            basis_j = tuple(d.one() if k == j else d.zero() for k in range(self.dim))
            cols.append(self.mult(x, basis_j))
        return Matrix.from_cols(d, cols)

    def power(self, x, n: int) -> tuple:
        acc = self.unit
        base = x
        while n > 0:
            if n & 1:
                acc = self.mult(acc, base)
            base = self.mult(base, base)
            n >>= 1
        return acc

    def evaluate_poly(self, poly: Poly, x) -> tuple:
        d = self.base
        acc = (d.zero(),) * self.dim
        for c in reversed(poly.coeffs):
            acc = self.mult(acc, x)
            acc = tuple(d.add(a, d.mul(c, u)) for a, u in zip(acc, self.unit))
        return acc

    def minimal_polynomial(self, x) -> Poly:
        d = self.base
        powers = [self.unit]
        while True:
            rows = powers
            reduced, _, rank = rref(Matrix.from_rows(d, rows))
            if rank < len(rows):
                # first linear dependence: solve for the last power
                mat = Matrix.from_cols(d, powers[:-1])
                res = solve(mat, powers[-1])
                assert res is not None
                coeffs = tuple(d.neg(c) for c in res[0]) + (d.one(),)
                return Poly(d, coeffs)
            powers.append(self.mult(powers[-1], x))

    def is_zero_elem(self, x) -> bool:
        return all(self.base.is_zero(c) for c in x)


# -- radical -------------------------------------------------------------------


def radical(a: CommutativeAlgebra):
    """Canonical basis (echelon rows) of the ideal of nilpotent elements.

    Char 0: kernel of the trace form.  GF(p): kernel of the iterated
    p-power map (GF(p)-linear in a commutative algebra of char p).
    """
    d = a.base
    if isinstance(d, (Rationals,)) or (isinstance(d, Extension) and d.char == 0):
        traces = []
        for k in range(a.dim):
            basis_k = tuple(d.one() if t == k else d.zero() for t in range(a.dim))
            m = a.left_mult_matrix(basis_k)
            tr = d.zero()
            for i in range(a.dim):
                tr = d.add(tr, m.get(i, i))
            traces.append(tr)
        rows = []
        for i in range(a.dim):
            row = []
            for j in range(a.dim):
                acc = d.zero()
                for k in range(a.dim):
                    acc = d.add(acc, d.mul(a.tensor[i][j][k], traces[k]))
                row.append(acc)
            rows.append(tuple(row))
        kern = kernel_basis(Matrix.from_rows(d, rows))
        cols = [kern.col(j) for j in range(kern.cols)]
        return canonical_span_rows(d, cols, a.dim)
    if isinstance(d, PrimeField):
        p = d.p
        e = 1
        while p**e < a.dim:
            e += 1
        cols = []
        for i in range(a.dim):
            x = tuple(d.one() if t == i else d.zero() for t in range(a.dim))
            for _ in range(e):
                x = a.power(x, p)
            cols.append(x)
        kern = kernel_basis(Matrix.from_cols(d, cols))
        vecs = [kern.col(j) for j in range(kern.cols)]
        return canonical_span_rows(d, vecs, a.dim)
    raise UnsupportedDomain(
        f"radical over {d.describe()} is outside v1 (need Q, an extension of Q, or GF(p))"
    )


# -- local decomposition -------------------------------------------------------


@dataclass(frozen=True)
class LocalFactor:
    """One local block of a decomposed algebra, in original coordinates."""

    idempotent: tuple        # original coordinates
    basis: tuple             # rows, original coordinates
    algebra: CommutativeAlgebra  # structure on the block basis
    radical_rows: tuple      # rows, block coordinates
    nilpotency_index: int
    residue_primitive: tuple  # block coordinates
    residue_minpoly: Poly     # irreducible over the base
    residue_degree: int
    projection: Matrix        # block coords -> residue coords (powers of the primitive)

    def residue_domain(self):
        if self.residue_degree == 1:
            return self.algebra.base
        return Extension(
            self.algebra.base, self.residue_minpoly.coeffs, check_irreducible=False
        )


def _probe_stream(a: CommutativeAlgebra, seed: int):
    d = a.base
    for i in range(a.dim):
        yield tuple(d.one() if k == i else d.zero() for k in range(a.dim))
    if isinstance(d, PrimeField) and d.p**a.dim <= _EXHAUSTIVE_CAP:
        # exhaustive and therefore decisive over a small prime field
        p = d.p
        for n in range(1, p**a.dim):
            coords = []
            k = n
            for _ in range(a.dim):
                coords.append(d.from_int(k % p))
                k //= p
            yield tuple(coords)
        return
    rng = random.Random(seed)

    def scalar():
        if isinstance(d, Extension):
            return d.parse([rng.randint(-9, 9) for _ in range(d.degree)])
        return d.from_int(rng.randint(-9, 9))

    for _ in range(_PROBE_ROUNDS):
        yield tuple(scalar() for _ in range(a.dim))


def _crt_idempotents(a: CommutativeAlgebra, u, factors):
    """Exact orthogonal idempotents of k[u] from coprime primary factors
    of the minimal polynomial of u."""
    d = a.base
    m = Poly(d, (d.one(),))
    primaries = []
    for f, e in factors:
        primary = Poly(d, (d.one(),))
        for _ in range(e):
            primary = primary.mul(f)
        primaries.append(primary)
        m = m.mul(primary)
    out = []
    for primary in primaries:
        g = m.exact_div(primary)
        # g * s = 1 mod primary
        _, s, _ = poly_xgcd(d, g.coeffs, primary.coeffs)
        h = g.mul(Poly(d, s)).mod(m)
        e_elem = a.evaluate_poly(h, u)
        if a.mult(e_elem, e_elem) != e_elem:
            raise RuntimeError("CRT idempotent failed exactness check")
        out.append(e_elem)
    return out


def _subalgebra_on(a: CommutativeAlgebra, idempotent):
    """Block e*A as an algebra with unit e, plus its basis rows."""
    d = a.base
    cols = []
    for i in range(a.dim):
        basis_i = tuple(d.one() if k == i else d.zero() for k in range(a.dim))
        cols.append(a.mult(idempotent, basis_i))
    basis_rows = canonical_span_rows(d, cols, a.dim)
    tensor = []
    for x in basis_rows:
        row = []
        for y in basis_rows:
            prod = a.mult(x, y)
            coords = coords_in_rows(d, basis_rows, prod)
            if coords is None:
                raise RuntimeError("block is not multiplicatively closed")
            row.append(coords)
        tensor.append(tuple(row))
    unit_coords = coords_in_rows(d, basis_rows, idempotent)
    block = CommutativeAlgebra(d, len(basis_rows), tuple(tensor), unit_coords)
    return block, basis_rows


def _restrict_scalars(a: CommutativeAlgebra):
    """View an algebra over an extension field as one over the prime base.

    Idempotents are ring-theoretic, so splitting can be found downstairs
    and mapped back; basis vector (i, j) downstairs is t^j * b_i.
    """
    ext = a.base
    base = ext.base
    deg = ext.degree
    dim = a.dim * deg
    t_gen = ext.generator()

    def up(coords_down):
        out = []
        for i in range(a.dim):
            c = ext.zero()
            power = ext.one()
            for j in range(deg):
                c = ext.add(c, ext.mul(ext.from_base(coords_down[i * deg + j]), power))
                power = ext.mul(power, t_gen)
            out.append(c)
        return tuple(out)

    basis_up = []
    for i in range(a.dim):
        for j in range(deg):
            power = ext.one()
            for _ in range(j):
                power = ext.mul(power, t_gen)
            coords = [ext.zero()] * a.dim
            coords[i] = power
            basis_up.append(tuple(coords))

    def down(coords_up):
        out = []
        for c in coords_up:
            out.extend(list(c))
        return tuple(out)

    tensor = []
    for x in basis_up:
        row = []
        for y in basis_up:
            row.append(down(a.mult(x, y)))
        tensor.append(tuple(row))
    unit = down(tuple(a.unit))
    restricted = CommutativeAlgebra(base, dim, tuple(tensor), unit)
    return restricted, up


def _split_once(a: CommutativeAlgebra, seed: int):
    """One splitting step: idempotents from some probe, or a locality
    certificate.

    A probe whose minimal polynomial has two coprime primary parts yields
    exact CRT idempotents; one whose minimal polynomial is a power of an
    irreducible of degree dim(A/rad) certifies A is local (the residue
    lcm of component minimal polynomials can only reach full degree with
    a single component).
    """
    rad_rows = radical(a)
    residue_dim = a.dim - len(rad_rows)
    for u in _probe_stream(a, seed):
        m = a.minimal_polynomial(u)
        if m.degree < 1:
            continue
        factors = poly_factor(m)
        if len(factors) >= 2:
            return ("split", _crt_idempotents(a, u, factors))
        f, _ = factors[0]
        if f.degree == residue_dim:
            return ("local", (u, f))
    raise ProbeFailure(
        "probing exhausted without a split or a primitive residue element"
    )


def _radical_power_rows(a: CommutativeAlgebra, rad_rows):
    """Bases of J, J^2, ... until zero; returns the list (without J^0)."""
    powers = []
    current = list(rad_rows)
    while current:
        powers.append(tuple(current))
        next_products = []
        for x in current:
            for g in rad_rows:
                next_products.append(a.mult(x, g))
        current = canonical_span_rows(a.base, next_products, a.dim)
    return powers


def _residue_projection(a: CommutativeAlgebra, u, minpoly: Poly, rad_rows):
    d = a.base
    deg = minpoly.degree
    powers = [a.unit]
    for _ in range(deg - 1):
        powers.append(a.mult(powers[-1], u))
    change = list(powers) + list(rad_rows)
    rows = []
    for i in range(a.dim):
        basis_i = tuple(d.one() if k == i else d.zero() for k in range(a.dim))
        coords = coords_in_rows(d, change, basis_i)
        if coords is None:
            raise RuntimeError("residue powers plus radical do not span the factor")
        rows.append(coords[:deg])
    return Matrix.from_rows(d, rows).transpose()


def local_decomposition(a: CommutativeAlgebra, seed: int = 0):
    """Complete orthogonal primitive idempotents with their local blocks."""
    if a.dim == 0:
        return []
    if isinstance(a.base, Extension):
        restricted, up = _restrict_scalars(a)
        down_factors = local_decomposition(restricted, seed)
        out = []
        for lf in down_factors:
            out.append(_build_local_factor(a, up(lf.idempotent), seed))
        return out

    def recurse(idempotent):
        block, basis_rows = _subalgebra_on(a, idempotent)
        verdict, payload = _split_once(block, seed)
        if verdict == "local":
            return [idempotent]
        out = []
        for e_block in payload:
            # block coordinates -> original coordinates
            d = a.base
            e_orig = [d.zero()] * a.dim
            for c, row in zip(e_block, basis_rows):
                for t in range(a.dim):
                    e_orig[t] = d.add(e_orig[t], d.mul(c, row[t]))
            out.extend(recurse(tuple(e_orig)))
        return out

    idempotents = recurse(a.unit)
    factors = [_build_local_factor(a, e, seed) for e in idempotents]
    _verify_complete_orthogonal(a, [f.idempotent for f in factors])
    return factors


def _primary_root(block: CommutativeAlgebra, m: Poly) -> Poly:
    """The irreducible under a primary minimal polynomial of a local block.

    Over an extension base there is no v1 factorization, but the block is
    already certified local, so every minimal polynomial is primary and
    its squarefree part is the irreducible itself.
    """
    if isinstance(block.base, Extension):
        return m.exact_div(poly_gcd(m, m.derivative())).monic()
    factors = poly_factor(m)
    if len(factors) != 1:
        raise RuntimeError("block is not local after decomposition")
    return factors[0][0]


def _build_local_factor(a: CommutativeAlgebra, idempotent, seed: int) -> LocalFactor:
    block, basis_rows = _subalgebra_on(a, idempotent)
    rad_rows = radical(block)
    powers = _radical_power_rows(block, rad_rows)
    nilpotency_index = len(powers) + 1 if rad_rows else 1
    residue_dim = block.dim - len(rad_rows)
    primitive = None
    for u in _probe_stream(block, seed):
        m = block.minimal_polynomial(u)
        if m.degree < 1:
            continue
        f = _primary_root(block, m)
        if f.degree == residue_dim:
            primitive = (u, f)
            break
    if primitive is None:
        raise ProbeFailure("no primitive residue element found for a local factor")
    u, f = primitive
    projection = _residue_projection(block, u, f, rad_rows)
    return LocalFactor(
        idempotent=tuple(idempotent),
        basis=tuple(basis_rows),
        algebra=block,
        radical_rows=tuple(rad_rows),
        nilpotency_index=nilpotency_index,
        residue_primitive=tuple(u),
        residue_minpoly=f,
        residue_degree=f.degree,
        projection=projection,
    )


def _verify_complete_orthogonal(a: CommutativeAlgebra, idempotents):
    d = a.base
    total = (d.zero(),) * a.dim
    for e in idempotents:
        if a.mult(e, e) != tuple(e):
            raise RuntimeError("non-idempotent in decomposition")
        if a.is_zero_elem(e):
            raise RuntimeError("zero idempotent in decomposition")
        total = tuple(d.add(x, y) for x, y in zip(total, e))
    if total != tuple(a.unit):
        raise RuntimeError("idempotents do not sum to 1")
    for i, e in enumerate(idempotents):
        for j, f in enumerate(idempotents):
            if i != j and not a.is_zero_elem(a.mult(e, f)):
                raise RuntimeError("idempotents are not orthogonal")


# -- J-series and r_k ----------------------------------------------------------


@dataclass(frozen=True)
class JSeriesReport:
    layer_dims: tuple  # dim_k(J^i / J^{i+1}) for i = 0, 1, ...
    r_k: int


def j_series(lf: LocalFactor) -> JSeriesReport:
    """Layer dimensions of A > J > J^2 > ... > 0 over the residue field."""
    block = lf.algebra
    powers = [
        [
            tuple(
                block.base.one() if t == i else block.base.zero()
                for t in range(block.dim)
            )
            for i in range(block.dim)
        ]
    ]
    powers.extend(list(rows) for rows in _radical_power_rows(block, lf.radical_rows))
    dims = [len(canonical_span_rows(block.base, rows, block.dim)) for rows in powers]
    dims.append(0)
    layers = []
    for a, b in zip(dims, dims[1:]):
        diff = a - b
        if diff % lf.residue_degree:
            raise RuntimeError("layer dimension not divisible by the residue degree")
        layers.append(diff // lf.residue_degree)
    return JSeriesReport(tuple(layers), sum(layers))


def r_k_module(lf: LocalFactor, action) -> int:
    """r_k of a module over the factor, given matrices for the block basis.

    action[i] is the matrix of the i-th block basis vector acting on the
    module; the matrices must satisfy the block's structure constants.
    """
    block = lf.algebra
    d = block.base
    if len(action) != block.dim:
        raise ActionNotWellFormed("need one action matrix per block basis vector")
    mdim = action[0].rows if action else 0
    for m in action:
        if m.rows != mdim or m.cols != mdim:
            raise ActionNotWellFormed("action matrices must be square of equal size")
    # structure constants must be respected
    for i in range(block.dim):
        for j in range(block.dim):
            prod = action[i].mul(action[j])
            expected = Matrix.zero(d, mdim, mdim)
            for k, c in enumerate(block.tensor[i][j]):
                expected = expected.add(action[k].scale(c))
            if not prod.eq(expected):
                raise ActionNotWellFormed(f"action violates structure constants at ({i},{j})")
    unit_matrix = Matrix.zero(d, mdim, mdim)
    for k, c in enumerate(block.unit):
        unit_matrix = unit_matrix.add(action[k].scale(c))
    if not unit_matrix.eq(Matrix.identity(d, mdim)):
        raise ActionNotWellFormed("unit does not act as the identity")

    def act(element_rows, space_rows):
        out = []
        for rad_elem in element_rows:
            mat = Matrix.zero(d, mdim, mdim)
            for k, c in enumerate(rad_elem):
                mat = mat.add(action[k].scale(c))
            for v in space_rows:
                out.append(mat.apply(v))
        return canonical_span_rows(d, out, mdim)

    current = [
        tuple(d.one() if k == i else d.zero() for k in range(mdim)) for i in range(mdim)
    ]
    dims = [len(canonical_span_rows(d, current, mdim))]
    while True:
        current = act(lf.radical_rows, current)
        dims.append(len(current))
        if not current:
            break
        if len(dims) > block.dim + mdim + 2:
            raise RuntimeError("J-filtration failed to terminate")
    total = 0
    for a, b in zip(dims, dims[1:]):
        diff = a - b
        if diff % lf.residue_degree:
            raise RuntimeError("module layer not divisible by the residue degree")
        total += diff // lf.residue_degree
    return total


# -- field of representatives ---------------------------------------------------


@dataclass(frozen=True)
class FieldOfRepresentatives:
    basis: tuple        # rows in block coordinates: 1, s, ..., s^(d-1)
    lifted_root: tuple  # block coordinates of the Hensel-lifted primitive
    minpoly: Poly


def field_of_representatives(lf: LocalFactor) -> FieldOfRepresentatives:
    """Subfield L with L + J = A and L isomorphic to the residue field.

    Newton-iterates the residue primitive against its minimal polynomial;
    separability makes the derivative invertible in the local ring, and
    nilpotency of J terminates the iteration.
    """
    block = lf.algebra
    d = block.base
    f = lf.residue_minpoly
    fprime = f.derivative()
    s = lf.residue_primitive
    for _ in range(2 * lf.nilpotency_index + 2):
        value = block.evaluate_poly(f, s)
        if block.is_zero_elem(value):
            break
        deriv = block.evaluate_poly(fprime, s)
        res = solve(block.left_mult_matrix(deriv), block.unit)
        if res is None:
            raise RuntimeError("derivative not invertible during Hensel lifting")
        inv = res[0]
        correction = block.mult(value, inv)
        s = tuple(d.sub(a, b) for a, b in zip(s, correction))
    else:
        raise RuntimeError("Hensel lifting did not converge within the index bound")
    basis = [block.unit]
    for _ in range(lf.residue_degree - 1):
        basis.append(block.mult(basis[-1], s))
    # L  J = 0: the basis together with the radical must be independent
    stacked = list(basis) + list(lf.radical_rows)
    if len(canonical_span_rows(d, stacked, block.dim)) != len(stacked):
        raise RuntimeError("lifted subfield meets the radical")
    return FieldOfRepresentatives(tuple(basis), tuple(s), f)
