"""Exact coefficient domains.

A Domain supplies arithmetic on plain Python values: Fraction for the
rationals, int for integers / prime fields / residue rings, and tuples of
base-field values for simple algebraic extensions.  Every operation is
exact; nothing here ever rounds.

Domains are immutable and hashable, so any value may be shared freely
across threads.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import NonFieldDomain, UnsupportedDegree, ValidationError


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Domain:
    """Common interface; concrete domains override the arithmetic."""

    is_field = False
    char = 0
    kind = "abstract"

    def zero(self):
        return self.from_int(0)

    def one(self):
        return self.from_int(1)

    def from_int(self, n: int):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NonFieldDomain(f"{self} has no division")

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def eq(self, a, b) -> bool:
        return self.sub(a, b) == self.zero()

    def element_seed(self, n: int):
        """Deterministic element stream for probing; n = 0, 1, 2, ..."""
        return self.from_int(n)

    # -- literal I/O ------------------------------------------------------

    def parse(self, obj):
        raise NotImplementedError

    def format(self, a):
        raise NotImplementedError

    def describe(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return self.describe()


class Rationals(Domain):
    is_field = True
    char = 0
    kind = "rationals"

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return 1 / Fraction(a)

    def parse(self, obj):
        if isinstance(obj, bool) or isinstance(obj, float):
            raise ValidationError(f"rational literals must be exact, got {obj!r}")
        if isinstance(obj, int):
            return Fraction(obj)
        if isinstance(obj, str):
            try:
                return Fraction(obj.strip())
            except (ValueError, ZeroDivisionError):
                raise ValidationError(f"not a rational literal: {obj!r}") from None
        raise ValidationError(f"not a rational literal: {obj!r}")

    def format(self, a):
        return str(a)

    def describe(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")


class Integers(Domain):
    is_field = False
    char = 0
    kind = "integers"

    def from_int(self, n):
        return int(n)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def parse(self, obj):
        if isinstance(obj, bool) or isinstance(obj, float):
            raise ValidationError(f"integer literals must be exact ints, got {obj!r}")
        if isinstance(obj, int):
            return obj
        if isinstance(obj, str):
            try:
                return int(obj.strip())
            except ValueError:
                raise ValidationError(f"not an integer literal: {obj!r}") from None
        raise ValidationError(f"not an integer literal: {obj!r}")

    def format(self, a):
        return str(a)

    def describe(self):
        return "Z"

    def __eq__(self, other):
        return isinstance(other, Integers)

    def __hash__(self):
        return hash("Z")


class PrimeField(Domain):
    is_field = True
    kind = "prime_field"

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValidationError(f"GF modulus must be prime, got {p}")
        self.p = p
        self.char = p

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return pow(a, self.p - 2, self.p)

    def parse(self, obj):
        if isinstance(obj, bool) or isinstance(obj, float):
            raise ValidationError(f"GF({self.p}) literals must be exact ints, got {obj!r}")
        if isinstance(obj, int):
            return obj % self.p
        if isinstance(obj, str):
            text = obj.strip()
            if " mod " in text:
                value, modulus = text.split(" mod ", 1)
                if int(modulus.strip()) != self.p:
                    raise ValidationError(f"literal {obj!r} has wrong modulus for GF({self.p})")
                text = value
            try:
                return int(text) % self.p
            except ValueError:
                raise ValidationError(f"not a GF({self.p}) literal: {obj!r}") from None
        raise ValidationError(f"not a GF({self.p}) literal: {obj!r}")

    def format(self, a):
        return str(a % self.p)

    def describe(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


class Residues(Domain):
    """Z/m for composite m: element arithmetic only.

    Linear algebra over composite residues is intentionally not provided;
    mixed-module questions go through INTEGERS plus Smith normal form.
    """

    is_field = False
    kind = "residues"

    def __init__(self, m: int):
        if m < 2:
            raise ValidationError(f"residue modulus must be >= 2, got {m}")
        self.m = m
        self.char = m

    def from_int(self, n):
        return n % self.m

    def add(self, a, b):
        return (a + b) % self.m

    def neg(self, a):
        return (-a) % self.m

    def mul(self, a, b):
        return (a * b) % self.m

    def parse(self, obj):
        if isinstance(obj, bool) or isinstance(obj, float):
            raise ValidationError(f"Z/{self.m} literals must be exact ints, got {obj!r}")
        if isinstance(obj, int):
            return obj % self.m
        if isinstance(obj, str):
            text = obj.strip()
            if " mod " in text:
                value, modulus = text.split(" mod ", 1)
                if int(modulus.strip()) != self.m:
                    raise ValidationError(f"literal {obj!r} has wrong modulus for Z/{self.m}")
                text = value
            try:
                return int(text) % self.m
            except ValueError:
                raise ValidationError(f"not a Z/{self.m} literal: {obj!r}") from None
        raise ValidationError(f"not a Z/{self.m} literal: {obj!r}")

    def format(self, a):
        return str(a % self.m)

    def describe(self):
        return f"Z/{self.m}"

    def __eq__(self, other):
        return isinstance(other, Residues) and other.m == self.m

    def __hash__(self):
        return hash(("Z/", self.m))


# -- raw polynomial helpers over a base domain ----------------------------
# Coefficient tuples, constant term first, trailing zeros stripped.  These
# exist here (not in polynomials.py) so Extension arithmetic has no import
# cycle; polynomials.py builds the public Poly type on top.


def poly_trim(domain, coeffs):
    coeffs = list(coeffs)
    while coeffs and domain.is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


def poly_add(domain, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else domain.zero()
        y = b[i] if i < len(b) else domain.zero()
        out.append(domain.add(x, y))
    return poly_trim(domain, out)


def poly_neg(domain, a):
    return tuple(domain.neg(x) for x in a)


def poly_mul(domain, a, b):
    if not a or not b:
        return ()
    out = [domain.zero()] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if domain.is_zero(x):
            continue
        for j, y in enumerate(b):
            out[i + j] = domain.add(out[i + j], domain.mul(x, y))
    return poly_trim(domain, out)


def poly_divmod(domain, a, b):
    """Exact division with remainder over a field."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quo = [domain.zero()] * max(0, len(a) - len(b) + 1)
    lead_inv = domain.inv(b[-1])
    for i in range(len(rem) - len(b), -1, -1):
        c = domain.mul(rem[i + len(b) - 1], lead_inv)
        if domain.is_zero(c):
            continue
        quo[i] = c
        for j, y in enumerate(b):
            rem[i + j] = domain.sub(rem[i + j], domain.mul(c, y))
    return poly_trim(domain, quo), poly_trim(domain, rem)


def poly_mod(domain, a, b):
    return poly_divmod(domain, a, b)[1]


def poly_xgcd(domain, a, b):
    """Monic gcd g with s*a + t*b = g, over a field."""
    r0, r1 = poly_trim(domain, a), poly_trim(domain, b)
    s0, s1 = (domain.one(),), ()
    t0, t1 = (), (domain.one(),)
    while r1:
        q, r = poly_divmod(domain, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_add(domain, s0, poly_neg(domain, poly_mul(domain, q, s1)))
        t0, t1 = t1, poly_add(domain, t0, poly_neg(domain, poly_mul(domain, q, t1)))
    if r0:
        c = domain.inv(r0[-1])
        scale = (c,)
        r0 = poly_mul(domain, r0, scale)
        s0 = poly_mul(domain, s0, scale)
        t0 = poly_mul(domain, t0, scale)
    return r0, s0, t0


def poly_gcd(domain, a, b):
    return poly_xgcd(domain, a, b)[0]


class Extension(Domain):
    """Simple algebraic extension base[t]/(minpoly).

    Elements are coefficient tuples of length deg(minpoly), constant term
    first, over the base domain.  The base must be RATIONALS or a prime
    field and the minimal polynomial irreducible of degree >= 2.
    """

    is_field = True
    kind = "extension"

    def __init__(self, base: Domain, minpoly, check_irreducible: bool = True):
        if not isinstance(base, (Rationals, PrimeField)):
            raise ValidationError("extension base must be Q or a prime field")
        minpoly = poly_trim(base, tuple(minpoly))
        if len(minpoly) < 3:
            raise ValidationError("extension minimal polynomial must have degree >= 2")
        lead = minpoly[-1]
        if not base.eq(lead, base.one()):
            inv = base.inv(lead)
            minpoly = tuple(base.mul(c, inv) for c in minpoly)
        self.base = base
        self.minpoly = minpoly
        self.degree = len(minpoly) - 1
        self.char = base.char
        if check_irreducible:
            self._check_irreducible()

    def _check_irreducible(self):
        from .polynomials import Poly, is_irreducible

        try:
            ok = is_irreducible(Poly(self.base, self.minpoly))
        except UnsupportedDegree:
            raise UnsupportedDegree(
                "cannot certify irreducibility of the minimal polynomial "
                f"(degree {self.degree}) with v1 factorization"
            ) from None
        if not ok:
            raise ValidationError("extension minimal polynomial is reducible")

    def _lift(self, coeffs):
        coeffs = tuple(coeffs)[: self.degree]
        return coeffs + (self.base.zero(),) * (self.degree - len(coeffs))

    def from_int(self, n):
        return self._lift((self.base.from_int(n),))

    def from_base(self, a):
        return self._lift((a,))

    def generator(self):
        return self._lift((self.base.zero(), self.base.one()))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        prod = poly_mul(self.base, a, b)
        return self._lift(poly_mod(self.base, prod, self.minpoly))

    def inv(self, a):
        ap = poly_trim(self.base, a)
        if not ap:
            raise ZeroDivisionError("inverse of 0")
        g, s, _ = poly_xgcd(self.base, ap, self.minpoly)
        if len(g) != 1:
            raise ZeroDivisionError("element is not invertible (reducible minpoly?)")
        s = poly_mul(self.base, s, (self.base.inv(g[0]),))
        return self._lift(s)

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def eq(self, a, b):
        return all(self.base.eq(x, y) for x, y in zip(a, b))

    def element_seed(self, n: int):
        # enumerate tuples over the base seed stream, diagonal-ish
        coeffs = []
        k = n
        for _ in range(self.degree):
            coeffs.append(self.base.element_seed(k % 7 + k // 7))
            k //= 7
        return self._lift(coeffs)

    def parse(self, obj):
        if isinstance(obj, list):
            if len(obj) > self.degree:
                raise ValidationError(
                    f"extension literal has {len(obj)} coefficients, degree is {self.degree}"
                )
            return self._lift(tuple(self.base.parse(x) for x in obj))
        return self.from_base(self.base.parse(obj))

    def format(self, a):
        return [self.base.format(x) for x in a]

    def format_text(self, a, var="t"):
        terms = []
        for i, c in enumerate(a):
            if self.base.is_zero(c):
                continue
            if i == 0:
                terms.append(self.base.format(c))
            elif i == 1:
                terms.append(f"{self.base.format(c)}*{var}")
            else:
                terms.append(f"{self.base.format(c)}*{var}^{i}")
        return " + ".join(terms) if terms else "0"

    def describe(self):
        inner = ",".join(self.base.format(c) for c in self.minpoly)
        return f"{self.base.describe()}[t]/({inner})"

    def __eq__(self, other):
        return (
            isinstance(other, Extension)
            and other.base == self.base
            and other.minpoly == self.minpoly
        )

    def __hash__(self):
        return hash(("ext", self.base, self.minpoly))


QQ = Rationals()
ZZ = Integers()


def require_field(domain: Domain, what: str = "operation"):
    if not domain.is_field:
        raise NonFieldDomain(f"{what} requires a field domain, got {domain.describe()}")
