"""Arithmetic and linear algebra over finite fields F_{ell^k}.

Elements are stored as coefficient tuples (low degree first) modulo a fixed
monic irreducible polynomial. The modulus is the least irreducible one of its
degree, ordering monic polynomials by the coefficient tuple
(c_{k-1}, ..., c_0) lexicographically.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator, Sequence

from sympy import ZZ
from sympy.polys.galoistools import gf_irreducible_p


@lru_cache(maxsize=None)
def least_irreducible(ell: int, k: int) -> tuple[int, ...]:
    """Coefficients (low first, monic) of the least irreducible degree-k polynomial over F_ell."""
    for tail in itertools.product(range(ell), repeat=k):
        coeffs_high = [1, *tail]
        if gf_irreducible_p(coeffs_high, ell, ZZ):
            return tuple(reversed(coeffs_high))
    raise ArithmeticError("no irreducible polynomial found")  # unreachable


class GF:
    """The field with ell^k elements."""

    _cache: dict[tuple[int, int], GF] = {}

    def __new__(cls, ell: int, k: int = 1):
        key = (ell, k)
        if key not in cls._cache:
            obj = super().__new__(cls)
            obj._setup(ell, k)
            cls._cache[key] = obj
        return cls._cache[key]

    def _setup(self, ell: int, k: int) -> None:
        self.ell = ell
        self.k = k
        self.order = ell**k
        self.modulus = least_irreducible(ell, k)
        # reduction table: x^(k+i) expressed in the power basis
        red = []
        cur = [(-c) % ell for c in self.modulus[:k]]  # x^k
        for _ in range(max(k - 1, 0)):
            red.append(tuple(cur))
            nxt = [0] + cur[:-1]
            top = cur[-1]
            nxt = [(a + top * b) % ell for a, b in zip(nxt, red[0])]
            cur = nxt
        red.append(tuple(cur))
        self._red = red
        self.zero = FFElement(self, (0,) * k)
        self.one = FFElement(self, (1,) + (0,) * (k - 1))

    def __reduce__(self):
        return (GF, (self.ell, self.k))

    def __repr__(self) -> str:
        return f"GF({self.ell}^{self.k})"

    def __call__(self, x) -> FFElement:
        if isinstance(x, FFElement):
            if x.field is self:
                return x
            if x.field.k == 1:
                return self(x.c[0])
            return self.embed(x)
        if isinstance(x, int):
            return FFElement(self, (x % self.ell,) + (0,) * (self.k - 1))
        x = tuple(int(a) % self.ell for a in x)
        return FFElement(self, x + (0,) * (self.k - len(x)))

    def gen(self) -> FFElement:
        """The class of x (a field generator over F_ell)."""
        if self.k == 1:
            return self(-self.modulus[0])
        return self((0, 1))

    def elements(self) -> Iterator[FFElement]:
        for c in itertools.product(range(self.ell), repeat=self.k):
            yield FFElement(self, tuple(reversed(c)))

    def _mul(self, a: tuple, b: tuple) -> tuple:
        k, ell = self.k, self.ell
        if k == 1:
            return ((a[0] * b[0]) % ell,)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:k]
        for i, coef in enumerate(prod[k:]):
            if coef:
                for j, r in enumerate(self._red[i]):
                    out[j] += coef * r
        return tuple(v % ell for v in out)

    def embed(self, x: FFElement) -> FFElement:
        """Image of an element of a subfield GF(ell, d), d | k, under a fixed embedding.

        The embedding sends the generator of the subfield to the least root of
        its modulus in this field.
        """
        sub = x.field
        if self.k % sub.k:
            raise ValueError("not a subfield")
        root = min(poly_roots([self(c) for c in sub.modulus], self), key=lambda e: e.c[::-1])
        out = self.zero
        power = self.one
        for coef in x.c:
            out = out + power * coef
            power = power * root
        return out


class FFElement:
    """An element of GF(ell^k)."""

    __slots__ = ("field", "c")

    def __init__(self, field: GF, c: tuple[int, ...]):
        self.field = field
        self.c = c

    def _lift(self, other) -> FFElement:
        if isinstance(other, FFElement):
            if other.field is self.field:
                return other
            return self.field(other)
        return self.field(other)

    def __add__(self, other):
        o = self._lift(other)
        ell = self.field.ell
        return FFElement(self.field, tuple((a + b) % ell for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        ell = self.field.ell
        return FFElement(self.field, tuple((a - b) % ell for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        ell = self.field.ell
        return FFElement(self.field, tuple((-a) % ell for a in self.c))

    def __mul__(self, other):
        if isinstance(other, int):
            ell = self.field.ell
            return FFElement(self.field, tuple((a * other) % ell for a in self.c))
        o = self._lift(other)
        return FFElement(self.field, self.field._mul(self.c, o.c))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> FFElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.field.k == 1:
            return FFElement(self.field, (pow(self.c[0], -1, self.field.ell),))
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def is_zero(self) -> bool:
        return not any(self.c)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.field(other)
        if not isinstance(other, FFElement):
            return NotImplemented
        return self.field is other.field and self.c == other.c

    def __hash__(self) -> int:
        return hash((self.field.ell, self.field.k, self.c))

    def frobenius(self, times: int = 1) -> FFElement:
        return self ** (self.field.ell**times)

    def in_prime_field(self) -> bool:
        return not any(self.c[1:])

    def sort_key(self) -> tuple[int, ...]:
        return tuple(reversed(self.c))

    def to_json(self):
        return self.c[0] if self.field.k == 1 else list(self.c)

    def __repr__(self) -> str:
        if self.field.k == 1:
            return f"{self.c[0]} (mod {self.field.ell})"
        return f"GF({self.field.ell}^{self.field.k}){list(self.c)}"


# ---------------------------------------------------------------- polynomials
# Polynomials over a field are lists of FFElements, lowest degree first.

def _trim(f: list) -> list:
    while f and f[-1].is_zero():
        f.pop()
    return f


def poly_divmod(f: Sequence[FFElement], g: Sequence[FFElement]) -> tuple[list, list]:
    f = _trim(list(f))
    g = _trim(list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    F = g[0].field
    inv = g[-1].inverse()
    q = [F.zero] * max(len(f) - len(g) + 1, 1)
    r = list(f)
    while len(r) >= len(g) and r:
        shift = len(r) - len(g)
        coef = r[-1] * inv
        q[shift] = coef
        for i, b in enumerate(g):
            r[shift + i] = r[shift + i] - coef * b
        r.pop()
        _trim(r)
    return _trim(q), r


def poly_mod(f, g) -> list:
    return poly_divmod(f, g)[1]


def poly_mul(f, g) -> list:
    if not f or not g:
        return []
    F = f[0].field
    out = [F.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = out[i + j] + a * b
    return _trim(out)


def poly_sub(f, g) -> list:
    n = max(len(f), len(g))
    F = (f or g)[0].field
    f = list(f) + [F.zero] * (n - len(f))
    g = list(g) + [F.zero] * (n - len(g))
    return _trim([a - b for a, b in zip(f, g)])


def poly_monic(f) -> list:
    f = _trim(list(f))
    inv = f[-1].inverse()
    return [a * inv for a in f]


def poly_gcd(f, g) -> list:
    f = _trim(list(f))
    g = _trim(list(g))
    while g:
        f, g = g, poly_mod(f, g)
    return poly_monic(f) if f else f


def poly_powmod(base, e: int, mod) -> list:
    F = mod[0].field
    result = [F.one]
    base = poly_mod(base, mod)
    while e:
        if e & 1:
            result = poly_mod(poly_mul(result, base), mod)
        base = poly_mod(poly_mul(base, base), mod)
        e >>= 1
    return result


def poly_eval(f, x):
    acc = x.field.zero
    for coef in reversed(f):
        acc = acc * x + coef
    return acc


def poly_roots(f: Sequence[FFElement], F: GF) -> list[FFElement]:
    """All distinct roots in F of a polynomial with coefficients in F.

    Cantor-Zassenhaus equal-degree splitting with a deterministic sequence of
    shifts; the trace map replaces the quadratic-residue split in characteristic 2.
    """
    f = _trim([F(a) for a in f])
    if len(f) <= 1:
        return []
    x = [F.zero, F.one]
    g = poly_gcd(f, poly_sub(poly_powmod(x, F.order, f), x))
    roots: list[FFElement] = []
    _split(g, F, roots)
    return sorted(set(roots), key=lambda e: e.sort_key())


def _split(g: list, F: GF, out: list) -> None:
    deg = len(g) - 1
    if deg <= 0:
        return
    if deg == 1:
        out.append(-g[0] / g[1])
        return
    shifts = F.elements()
    for delta in shifts:
        base = [delta, F.one]
        if F.ell == 2:
            h = []
            term = poly_mod(base, g)
            for _ in range(F.k):
                h = _add(h, term)
                term = poly_mod(poly_mul(term, term), g)
        else:
            h = poly_sub(poly_powmod(base, (F.order - 1) // 2, g), [F.one])
        d = poly_gcd(g, h)
        if 0 < len(d) - 1 < deg:
            _split(d, F, out)
            _split(poly_divmod(g, d)[0], F, out)
            return
    # Exhausted shifts without a split (only possible for tiny fields): brute force.
    for e in F.elements():
        if poly_eval(g, e).is_zero():
            out.append(e)


def _add(f, g) -> list:
    if not f:
        return list(g)
    n = max(len(f), len(g))
    F = (f or g)[0].field
    f = list(f) + [F.zero] * (n - len(f))
    g = list(g) + [F.zero] * (n - len(g))
    return _trim([a + b for a, b in zip(f, g)])


# -------------------------------------------------------------- linear algebra

def to_field_matrix(m, F: GF) -> list[list[FFElement]]:
    rows = m.rows if hasattr(m, "rows") else m
    return [[F(x) for x in r] for r in rows]


def rref_ff(rows: Sequence[Sequence[FFElement]], ncols: int, F: GF) -> tuple[list[list[FFElement]], list[int]]:
    A = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = A[r][c].inverse()
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A[:r], pivots


def kernel_mod_ell(m, F: GF | None = None, ell: int | None = None) -> list[list[FFElement]]:
    """Basis of {v : m v = 0} over F (or over F_ell for an integer matrix)."""
    if F is None:
        F = GF(ell)
    rows = to_field_matrix(m, F)
    ncols = len(rows[0]) if rows else (m.ncols if hasattr(m, "ncols") else 0)
    R, piv = rref_ff(rows, ncols, F)
    pivset = set(piv)
    basis = []
    for f in (c for c in range(ncols) if c not in pivset):
        v = [F.zero] * ncols
        v[f] = F.one
        for row, pc in zip(R, piv):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def rank_ff(rows, F: GF) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    return len(rref_ff(rows, len(rows[0]), F)[1])


def matmul_ff(A, B) -> list[list[FFElement]]:
    Bt = list(zip(*B))
    F = A[0][0].field
    out = []
    for r in A:
        row = []
        for c in Bt:
            acc = F.zero
            for a, b in zip(r, c):
                if a and b:
                    acc = acc + a * b
            row.append(acc)
        out.append(row)
    return out


def matvec_ff(A, v) -> list[FFElement]:
    F = v[0].field
    out = []
    for r in A:
        acc = F.zero
        for a, b in zip(r, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def solve_in_span(basis: Sequence[Sequence[FFElement]], v: Sequence[FFElement], F: GF) -> list[FFElement] | None:
    """Coordinates c with sum c_i basis_i = v, or None."""
    n = len(v)
    k = len(basis)
    aug = [[basis[j][i] for j in range(k)] + [v[i]] for i in range(n)]
    R, piv = rref_ff(aug, k + 1, F)
    if piv and piv[-1] == k:
        return None
    c = [F.zero] * k
    for row, pc in zip(R, piv):
        c[pc] = row[k]
    return c
