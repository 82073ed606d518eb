"""Exact arithmetic: rationals, the rational-exponent group ring Q[q^Q], dense
matrices over Q and generalized eigenspaces of rationally split endomorphisms.

Nothing in here touches floating point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import SizeMismatch, SplittingError

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def rat(x) -> Fraction:
    """Coerce ints, strings like ``"-2/3"``, ``(num, den)`` pairs or Fractions."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (tuple, list)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rational(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# QLaurent
# ---------------------------------------------------------------------------


class QLaurent:
    """Finite Q-linear combination of monomials ``q^a`` with ``a`` rational.

    Instances are immutable.  Terms are kept sorted by exponent and never hold
    a zero coefficient, so equality is structural.

    >>> q = QLaurent.q()
    >>> str((1 - q) * (1 + q))
    '1 - q^(2)'
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[RationalLike, RationalLike] | Iterable = ()):
        acc: dict[Fraction, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exp, coeff in items:
            e, c = rat(exp), rat(coeff)
            acc[e] = acc.get(e, Fraction(0)) + c
        self._terms = tuple((e, c) for e, c in sorted(acc.items()) if c != 0)
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple) -> "QLaurent":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls) -> "QLaurent":
        return cls._raw(())

    @classmethod
    def one(cls) -> "QLaurent":
        return cls.constant(1)

    @classmethod
    def constant(cls, c: RationalLike) -> "QLaurent":
        return cls({0: c})

    @classmethod
    def monomial(cls, exponent: RationalLike, coeff: RationalLike = 1) -> "QLaurent":
        return cls({exponent: coeff})

    @classmethod
    def q(cls) -> "QLaurent":
        return cls.monomial(1)

    @classmethod
    def coerce(cls, x) -> "QLaurent":
        if isinstance(x, QLaurent):
            return x
        return cls.constant(rat(x))

    # access ---------------------------------------------------------------

    @property
    def terms(self) -> dict[Fraction, Fraction]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Fraction, Fraction]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficient(self, exponent: RationalLike) -> Fraction:
        e = rat(exponent)
        for exp, c in self._terms:
            if exp == e:
                return c
        return Fraction(0)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        try:
            other = QLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._terms, other._terms
        if not b:
            return self
        if not a:
            return other
        # merge of two exponent-sorted term lists
        out = []
        i = j = 0
        while i < len(a) and j < len(b):
            ea, eb = a[i][0], b[j][0]
            if ea == eb:
                c = a[i][1] + b[j][1]
                if c:
                    out.append((ea, c))
                i += 1
                j += 1
            elif ea < eb:
                out.append(a[i])
                i += 1
            else:
                out.append(b[j])
                j += 1
        out.extend(a[i:])
        out.extend(b[j:])
        return QLaurent._raw(tuple(out))

    __radd__ = __add__

    def __neg__(self) -> "QLaurent":
        return QLaurent._raw(tuple((e, -c) for e, c in self._terms))

    def __sub__(self, other):
        try:
            other = QLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return QLaurent.coerce(other) - self

    def __mul__(self, other):
        try:
            other = QLaurent.coerce(other)
        except TypeError:
            return NotImplemented
        if not self._terms or not other._terms:
            return QLaurent._raw(())
        # a monomial factor just shifts and rescales; order and nonzeroness survive
        if len(other._terms) == 1:
            (e0, c0), = other._terms
            return QLaurent._raw(tuple((e + e0, c * c0) for e, c in self._terms))
        if len(self._terms) == 1:
            (e0, c0), = self._terms
            return QLaurent._raw(tuple((e + e0, c * c0) for e, c in other._terms))
        acc: dict[Fraction, Fraction] = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                e = e1 + e2
                acc[e] = acc.get(e, Fraction(0)) + c1 * c2
        return QLaurent._raw(tuple((e, c) for e, c in sorted(acc.items()) if c != 0))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QLaurent":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible")
            (e, c), = self._terms
            return QLaurent.monomial(-e * -k, Fraction(1) / c ** -k)
        out = QLaurent.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, QLaurent):
            return self._terms == other._terms
        try:
            return self._terms == QLaurent.coerce(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # transformations -------------------------------------------------------

    def invert_variable(self) -> "QLaurent":
        """Substitute q -> 1/q."""
        return QLaurent._raw(tuple((-e, c) for e, c in reversed(self._terms)))

    def eval_at_one(self) -> Fraction:
        return sum((c for _, c in self._terms), Fraction(0))

    def shift(self, exponent: RationalLike) -> "QLaurent":
        """Multiply by q^exponent."""
        s = rat(exponent)
        return QLaurent._raw(tuple((e + s, c) for e, c in self._terms))

    # serialization ----------------------------------------------------------

    def to_json(self) -> list:
        return [
            [c.numerator, c.denominator, [e.numerator, e.denominator]]
            for e, c in self._terms
        ]

    @classmethod
    def from_json(cls, data) -> "QLaurent":
        terms = []
        for item in data:
            cn, cd, (en, ed) = item
            if int(cd) == 0 or int(ed) == 0:
                raise ValueError("zero denominator in QLaurent term")
            terms.append((Fraction(int(en), int(ed)), Fraction(int(cn), int(cd))))
        return cls(terms)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self._terms):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = format_rational(mag)
            else:
                mono = f"q^({format_rational(e)})"
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            if i == 0:
                parts.append(("-" if sign == "-" else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"QLaurent({str(self)!r})"

    _TERM = re.compile(
        r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(q(?:\^\(?\s*(-?\d+(?:/\d+)?)\s*\)?)?)?\s*"
    )

    @classmethod
    def parse(cls, text: str) -> "QLaurent":
        """Parse the printed form, e.g. ``"1 - q^(1/3) + 2*q^(-1)"``."""
        text = text.strip()
        if text == "0":
            return cls.zero()
        terms = []
        pos = 0
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
                raise ValueError(f"cannot parse QLaurent near {text[pos:]!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
            if m.group(3):
                exp = Fraction(m.group(4)) if m.group(4) else Fraction(1)
            else:
                exp = Fraction(0)
            terms.append((exp, sign * coeff))
            pos = m.end()
        return cls(terms)


def qlaurent_arith(a: QLaurent, b: QLaurent, op: str) -> QLaurent:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def qlaurent_invert_variable(a: QLaurent) -> QLaurent:
    return a.invert_variable()


def qlaurent_eval_at_one(a: QLaurent) -> Fraction:
    return a.eval_at_one()


# ---------------------------------------------------------------------------
# Dense rational matrices
# ---------------------------------------------------------------------------


class RationalMatrix:
    """Immutable dense matrix over Q stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[RationalLike]):
        self.rows = rows
        self.cols = cols
        self.entries = tuple(rat(x) for x in entries)
        if len(self.entries) != rows * cols:
            raise SizeMismatch(
                f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]], cols: int | None = None):
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise SizeMismatch("ragged rows")
        return cls(len(rows), cols, [x for r in rows for x in r])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RationalLike]], rows: int):
        cols = len(columns)
        return cls(rows, cols, [columns[j][i] for i in range(rows) for j in range(cols)])

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None):
        cols = rows if cols is None else cols
        return cls(rows, cols, [0] * (rows * cols))

    @classmethod
    def identity(cls, n: int):
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> list[Fraction]:
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def col(self, j: int) -> list[Fraction]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def tolist(self) -> list[list[Fraction]]:
        return [self.row(i) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return not any(self.entries)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows,
                              [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._same_shape(other)
        return RationalMatrix(self.rows, self.cols,
                              [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix(self.rows, self.cols, [-a for a in self.entries])

    def scale(self, c: RationalLike) -> "RationalMatrix":
        c = rat(c)
        return RationalMatrix(self.rows, self.cols, [c * a for a in self.entries])

    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.cols != other.rows:
                raise SizeMismatch(f"cannot multiply {self.shape} by {other.shape}")
            ocols = [other.col(j) for j in range(other.cols)]
            out = []
            for i in range(self.rows):
                r = self.row(i)
                for c in ocols:
                    out.append(sum((a * b for a, b in zip(r, c) if a and b), Fraction(0)))
            return RationalMatrix(self.rows, other.cols, out)
        vec = [rat(x) for x in other]
        if len(vec) != self.cols:
            raise SizeMismatch("vector length does not match matrix")
        return [sum((a * b for a, b in zip(self.row(i), vec) if a and b), Fraction(0))
                for i in range(self.rows)]

    def __pow__(self, k: int) -> "RationalMatrix":
        if not self.is_square:
            raise SizeMismatch("power of a non-square matrix")
        out = RationalMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise SizeMismatch(f"shape {self.shape} != {other.shape}")

    def __eq__(self, other) -> bool:
        return (isinstance(other, RationalMatrix) and self.shape == other.shape
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(format_rational(x) for x in self.row(i))
                         for i in range(self.rows))
        return f"RationalMatrix[{body}]"


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form.  Returns ``(rows, pivot_columns)``."""
    m = [list(map(rat, r)) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(m: RationalMatrix) -> int:
    return len(rref(m.tolist(), m.cols)[1])


def nullspace(m: RationalMatrix) -> list[list[Fraction]]:
    """Basis of ``{x : m x = 0}`` (one vector per free column)."""
    red, pivots = rref(m.tolist(), m.cols)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(m: RationalMatrix, b: Sequence[RationalLike]) -> list[Fraction] | None:
    """One solution of ``m x = b`` or None when the system is inconsistent."""
    if len(b) != m.rows:
        raise SizeMismatch("right-hand side length")
    aug = [m.row(i) + [rat(b[i])] for i in range(m.rows)]
    red, pivots = rref(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [Fraction(0)] * m.cols
    for row, p in zip(red, pivots):
        x[p] = row[m.cols]
    return x


def inverse(m: RationalMatrix) -> RationalMatrix:
    if not m.is_square:
        raise SizeMismatch("inverse of a non-square matrix")
    n = m.rows
    aug = [m.row(i) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("matrix is singular")
    return RationalMatrix.from_rows([r[n:] for r in red])


def independent_columns(vectors: Sequence[Sequence[Fraction]], dim: int) -> list[int]:
    """Indices of a maximal linearly independent prefix-greedy subset."""
    if not vectors:
        return []
    mat = RationalMatrix.from_columns(vectors, dim)
    return rref(mat.tolist(), mat.cols)[1]


# ---------------------------------------------------------------------------
# Characteristic polynomial and rational roots
# ---------------------------------------------------------------------------


def charpoly(m: RationalMatrix) -> list[Fraction]:
    """Coefficients of ``det(xI - m)``, highest degree first.

    Berkowitz's algorithm: only ring operations, no division.
    """
    if not m.is_square:
        raise SizeMismatch("characteristic polynomial of a non-square matrix")
    n = m.rows
    a = m.tolist()
    if n == 0:
        return [Fraction(1)]
    poly = [Fraction(1), -a[0][0]]
    for r in range(1, n):
        R = a[r][:r]
        S = [a[i][r] for i in range(r)]
        lead = [a[i][:r] for i in range(r)]
        # first column of the Toeplitz matrix: 1, -a_rr, -R S, -R M S, ...
        col = [Fraction(1), -a[r][r]]
        v = S
        for _ in range(r):
            col.append(-sum((x * y for x, y in zip(R, v)), Fraction(0)))
            v = [sum((lead[i][j] * v[j] for j in range(r)), Fraction(0)) for i in range(r)]
        new = []
        for i in range(r + 2):
            new.append(sum((col[i - j] * poly[j] for j in range(min(i, r) + 1)),
                           Fraction(0)))
        poly = new
    return poly


def _integer_poly(coeffs: Sequence[Fraction]) -> list[int]:
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g else ints


def _factorize(n: int) -> dict[int, int]:
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    """Positive divisors of ``n != 0``, ascending."""
    if n == 0:
        raise ValueError("0 has infinitely many divisors")
    divs = [1]
    for p, k in _factorize(n).items():
        divs = [d * p ** e for d in divs for e in range(k + 1)]
    return sorted(divs)


def _deflate(coeffs: list[Fraction], root: Fraction) -> tuple[list[Fraction], Fraction]:
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + out[-1] * root)
    return out[:-1], out[-1]


def rational_roots(coeffs: Sequence[RationalLike]) -> tuple[list[tuple[Fraction, int]], list[Fraction]]:
    """Rational roots with multiplicity of a polynomial (highest degree first).

    Returns ``(roots, remainder)`` where ``remainder`` is the cofactor with no
    rational roots left.  Candidates come from the rational root theorem.
    """
    poly = [rat(c) for c in coeffs]
    while poly and poly[0] == 0:
        poly.pop(0)
    if not poly:
        raise ValueError("zero polynomial")
    found: dict[Fraction, int] = {}
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
        found[Fraction(0)] = found.get(Fraction(0), 0) + 1
    while len(poly) > 1:
        ints = _integer_poly(poly)
        lead, const = ints[0], ints[-1]
        hit = None
        for den in divisors(lead):
            for num in divisors(const):
                for cand in (Fraction(num, den), Fraction(-num, den)):
                    if _eval_int_poly(ints, cand) == 0:
                        hit = cand
                        break
                if hit is not None:
                    break
            if hit is not None:
                break
        if hit is None:
            break
        while len(poly) > 1:
            quotient, rem = _deflate(poly, hit)
            if rem != 0:
                break
            poly = quotient
            found[hit] = found.get(hit, 0) + 1
    return sorted(found.items()), poly


def _eval_int_poly(ints: Sequence[int], x: Fraction) -> int:
    # homogenized Horner: sum a_i p^(d-i) q^i, zero iff p/q is a root
    p, q = x.numerator, x.denominator
    acc = 0
    d = len(ints) - 1
    for i, c in enumerate(ints):
        acc += c * p ** (d - i) * q ** i
    return acc


# ---------------------------------------------------------------------------
# Generalized eigenspaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenBlock:
    eigenvalue: Fraction
    multiplicity: int
    basis: tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class EigenDecomposition:
    size: int
    blocks: tuple[EigenBlock, ...]

    def multiplicities(self) -> dict[Fraction, int]:
        return {b.eigenvalue: b.multiplicity for b in self.blocks}

    def change_of_basis(self) -> RationalMatrix:
        cols = [v for b in self.blocks for v in b.basis]
        return RationalMatrix.from_columns(cols, self.size)


def generalized_eigenspaces(m: RationalMatrix) -> EigenDecomposition:
    """Split Q^n into generalized eigenspaces of ``m``.

    Raises SplittingError unless every root of the characteristic polynomial
    is rational.
    """
    if not m.is_square:
        raise SizeMismatch("eigenspaces of a non-square matrix")
    n = m.rows
    if n == 0:
        return EigenDecomposition(0, ())
    roots, rest = rational_roots(charpoly(m))
    if len(rest) > 1:
        raise SplittingError(
            f"characteristic polynomial has a factor of degree {len(rest) - 1} "
            "without rational roots"
        )
    blocks = []
    for lam, mult in roots:
        shifted = m - RationalMatrix.identity(n).scale(lam)
        basis = nullspace(shifted ** mult)
        if len(basis) != mult:
            raise ArithmeticError("generalized eigenspace dimension mismatch")
        blocks.append(EigenBlock(lam, mult, tuple(tuple(v) for v in basis)))
    return EigenDecomposition(n, tuple(blocks))
