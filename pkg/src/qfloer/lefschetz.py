"""q-deformed Picard-Lefschetz action on lattices of Lagrangian classes.

Classes live in a free module over the QLaurent ring with basis the given
Lagrangians; the q-intersection pairing is extended bilinearly.  A Dehn twist
along a sphere acts on the left argument of the pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (LatticeInvariantError, NotASphere, SchemaError, SizeMismatch,
                     UnsupportedDimension)
from .exactalg import QLaurent

Matrix = tuple[tuple[QLaurent, ...], ...]
LatticeVector = tuple[QLaurent, ...]
Letter = tuple[int, int]


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def sphere_self_pairing(n: int) -> QLaurent:
    """1 + (-1)^n q."""
    return QLaurent({0: 1, 1: _sign(n)})


def dual_value(value: QLaurent, n: int) -> QLaurent:
    """(-1)^n q value(1/q): the pairing with the arguments swapped."""
    return value.invert_variable().shift(1) * _sign(n)


@dataclass(frozen=True)
class QLattice:
    n: int
    labels: tuple[str, ...]
    pairing: Matrix
    sphere_flags: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "sphere_flags", tuple(bool(f) for f in self.sphere_flags))
        object.__setattr__(self, "pairing",
                           tuple(tuple(QLaurent.coerce(x) for x in row) for row in self.pairing))
        size = len(self.labels)
        if len(self.sphere_flags) != size or len(self.pairing) != size:
            raise LatticeInvariantError("labels, sphere flags and pairing disagree in size")
        if any(len(row) != size for row in self.pairing):
            raise LatticeInvariantError("pairing matrix is not square")
        diag = sphere_self_pairing(self.n)
        for i, flag in enumerate(self.sphere_flags):
            if flag and self.pairing[i][i] != diag:
                raise LatticeInvariantError(
                    f"sphere {self.labels[i]!r} has self-pairing {self.pairing[i][i]}, "
                    f"expected {diag}")
        for i in range(size):
            for j in range(i, size):
                if self.pairing[j][i] != dual_value(self.pairing[i][j], self.n):
                    raise LatticeInvariantError(
                        f"duality fails for ({self.labels[i]}, {self.labels[j]})")

    @property
    def size(self) -> int:
        return len(self.labels)

    def basis_vector(self, i: int) -> LatticeVector:
        self._check_index(i)
        return tuple(QLaurent.one() if k == i else QLaurent.zero() for k in range(self.size))

    def spheres(self) -> list[int]:
        return [i for i, f in enumerate(self.sphere_flags) if f]

    def _check_index(self, i: int):
        if not 0 <= i < self.size:
            raise IndexError(f"index {i} out of range for lattice of size {self.size}")

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "labels": list(self.labels),
            "spheres": list(self.sphere_flags),
            "pairing": [[x.to_json() for x in row] for row in self.pairing],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QLattice":
        try:
            pairing = [[QLaurent.from_json(x) for x in row] for row in data["pairing"]]
            return cls(int(data["n"]), tuple(data["labels"]), pairing, tuple(data["spheres"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad lattice document: {exc}") from exc


@dataclass(frozen=True)
class TwistWord:
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        letters = tuple((int(i), int(e)) for i, e in self.letters)
        for _, e in letters:
            if e not in (1, -1):
                raise ValueError("twist exponents must be +1 or -1")
        object.__setattr__(self, "letters", letters)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((i, -e) for i, e in reversed(self.letters)))

    def __add__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def validate(self, lat: QLattice):
        for i, _ in self.letters:
            if not 0 <= i < lat.size:
                raise IndexError(f"twist index {i} out of range")
            if not lat.sphere_flags[i]:
                raise NotASphere(f"{lat.labels[i]!r} is not a sphere")

    def to_json(self) -> list:
        return [["tau", i, e] for i, e in self.letters]

    @classmethod
    def from_json(cls, data) -> "TwistWord":
        try:
            letters = []
            for item in data:
                tag, i, e = item
                if tag != "tau":
                    raise ValueError(f"unknown letter tag {tag!r}")
                letters.append((int(i), int(e)))
            return cls(tuple(letters))
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad word document: {exc}") from exc

    def __str__(self) -> str:
        if not self.letters:
            return "()"
        return " ".join(f"{i}{'+' if e > 0 else '-'}" for i, e in self.letters)


# ---------------------------------------------------------------------------
# matrix helpers over QLaurent
# ---------------------------------------------------------------------------


def identity_matrix(size: int) -> Matrix:
    one, zero = QLaurent.one(), QLaurent.zero()
    return tuple(tuple(one if i == j else zero for j in range(size)) for i in range(size))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    size = len(b[0]) if b else 0
    out = []
    for row in a:
        new = []
        for j in range(size):
            acc = QLaurent.zero()
            for k, x in enumerate(row):
                if x and b[k][j]:
                    acc = acc + x * b[k][j]
            new.append(acc)
        out.append(tuple(new))
    return tuple(out)


def mat_vec(a: Matrix, x: Sequence[QLaurent]) -> LatticeVector:
    out = []
    for row in a:
        acc = QLaurent.zero()
        for aij, xj in zip(row, x):
            if aij and xj:
                acc = acc + aij * xj
        out.append(acc)
    return tuple(out)


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def is_zero_matrix(a: Matrix) -> bool:
    return not any(x for row in a for x in row)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def twist_coefficient(n: int) -> QLaurent:
    """(-1)^(n+1) q^-1, the correction factor of the twist formula."""
    return QLaurent.monomial(-1, _sign(n + 1))


def pair(lat: QLattice, x: Sequence[QLaurent], y: Sequence[QLaurent]) -> QLaurent:
    """Bilinear extension: sum_ij x_i y_j pairing(i, j)."""
    if len(x) != lat.size or len(y) != lat.size:
        raise SizeMismatch(f"vectors of length {len(x)}, {len(y)} for lattice of size {lat.size}")
    acc = QLaurent.zero()
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            pij = lat.pairing[i][j]
            if yj and pij:
                acc = acc + xi * yj * pij
    return acc


def _require_sphere(lat: QLattice, v: int):
    lat._check_index(v)
    if not lat.sphere_flags[v]:
        raise NotASphere(f"{lat.labels[v]!r} is not a sphere")


def twist_operator(lat: QLattice, v: int) -> Matrix:
    """Matrix of T(x) = x + (-1)^(n+1) q^-1 pair(x, e_v) e_v (columns = images of basis)."""
    _require_sphere(lat, v)
    c = twist_coefficient(lat.n)
    rows = [list(r) for r in identity_matrix(lat.size)]
    for i in range(lat.size):
        rows[v][i] = rows[v][i] + c * lat.pairing[i][v]
    return tuple(tuple(r) for r in rows)


def inverse_twist_operator(lat: QLattice, v: int) -> Matrix:
    """Matrix of T^-1(y) = y - pair(y, e_v) e_v."""
    _require_sphere(lat, v)
    rows = [list(r) for r in identity_matrix(lat.size)]
    for i in range(lat.size):
        rows[v][i] = rows[v][i] - lat.pairing[i][v]
    return tuple(tuple(r) for r in rows)


def word_matrix(lat: QLattice, w: TwistWord) -> Matrix:
    """Matrix of the composite; the first letter acts first."""
    w.validate(lat)
    out = identity_matrix(lat.size)
    for v, e in w.letters:
        op = twist_operator(lat, v) if e > 0 else inverse_twist_operator(lat, v)
        out = mat_mul(op, out)
    return out


def apply_word(lat: QLattice, w: TwistWord, x: Sequence[QLaurent]) -> LatticeVector:
    w.validate(lat)
    if len(x) != lat.size:
        raise SizeMismatch("vector length does not match lattice")
    vec = tuple(QLaurent.coerce(c) for c in x)
    for v, e in w.letters:
        op = twist_operator(lat, v) if e > 0 else inverse_twist_operator(lat, v)
        vec = mat_vec(op, vec)
    return vec


def word_value(lat: QLattice, w: TwistWord, source: int, target: int) -> QLaurent:
    """w(L_source) ._q L_target."""
    lat._check_index(target)
    return pair(lat, apply_word(lat, w, lat.basis_vector(source)), lat.basis_vector(target))


def word_value_right(lat: QLattice, w: TwistWord, source: int, target: int) -> QLaurent:
    """L_target ._q w(L_source), computed as w^-1(L_target) ._q L_source.

    Twists act on both sides of the pairing at once without changing it, so
    moving w across costs an inverse.  No duality formula is used here.
    """
    lat._check_index(source)
    return pair(lat, apply_word(lat, w.inverse(), lat.basis_vector(target)),
                lat.basis_vector(source))


def iter_word_tables(lat: QLattice, max_len: int):
    """Yield (word, left, right) for every word of length <= max_len.

    left[i][j] = w(L_i) ._q L_j and right[j][i] = w^-1(L_j) ._q L_i.  Words come
    in depth-first order; a letter on v changes the tables by a rank-one update
    through column v (or row v), so each step costs O(size^2).
    """
    spheres = [v for v in range(lat.size) if lat.sphere_flags[v]]
    c, minus = twist_coefficient(lat.n), QLaurent.constant(-1)
    P = lat.pairing
    size = lat.size

    def step(left, right, v, e):
        k_fwd, k_back = (c, minus) if e > 0 else (minus, c)
        new_left = tuple(
            tuple(left[i][j] + k_fwd * left[i][v] * P[v][j] if left[i][v] and P[v][j] else left[i][j]
                  for j in range(size))
            for i in range(size))
        new_right = tuple(
            tuple(right[j][i] + k_back * P[j][v] * right[v][i] if P[j][v] and right[v][i] else right[j][i]
                  for i in range(size))
            for j in range(size))
        return new_left, new_right

    def walk(word, left, right):
        yield TwistWord(word), left, right
        if len(word) == max_len:
            return
        for v in spheres:
            for e in (1, -1):
                yield from walk(word + ((v, e),), *step(left, right, v, e))

    yield from walk((), P, P)


def les_defect(lat: QLattice, v: int, i: int, j: int) -> QLaurent:
    """tau_v(L_i) ._q L_j - L_i ._q L_j."""
    _require_sphere(lat, v)
    lat._check_index(i)
    lat._check_index(j)
    return twist_coefficient(lat.n) * lat.pairing[i][v] * lat.pairing[v][j]


@dataclass(frozen=True)
class BraidReport:
    i: int
    j: int
    commute_difference: Matrix
    braid_difference: Matrix

    @property
    def commutes(self) -> bool:
        return is_zero_matrix(self.commute_difference)

    @property
    def braid_holds(self) -> bool:
        return is_zero_matrix(self.braid_difference)

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "commutes": self.commutes,
            "braid_relation": self.braid_holds,
            "braid_difference": [[x.to_json() for x in row] for row in self.braid_difference],
        }


def braid_probe(lat: QLattice, i: int, j: int) -> BraidReport:
    """Compute T_i T_j T_i - T_j T_i T_j (and T_i T_j - T_j T_i) exactly."""
    ti, tj = twist_operator(lat, i), twist_operator(lat, j)
    comm = mat_sub(mat_mul(ti, tj), mat_mul(tj, ti))
    braid = mat_sub(mat_mul(ti, mat_mul(tj, ti)), mat_mul(tj, mat_mul(ti, tj)))
    return BraidReport(i, j, comm, braid)


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def build_Am(m: int, n: int = 3) -> QLattice:
    """Chain of m Lagrangian spheres in the A_m Milnor fibre (n = 3 only).

    Adjacent spheres meet in HF^1 with weight 1/3, so L_i ._q L_(i+1) = -q^(1/3);
    the reverse entry is forced by duality.
    """
    if m < 1:
        raise ValueError("m must be at least 1")
    if n != 3:
        raise UnsupportedDimension("adjacent weights are only pinned down for n = 3")
    zero = QLaurent.zero()
    pairing = [[zero] * m for _ in range(m)]
    fwd = QLaurent.monomial(Fraction(1, 3), -1)
    for i in range(m):
        pairing[i][i] = sphere_self_pairing(n)
        if i + 1 < m:
            pairing[i][i + 1] = fwd
            pairing[i + 1][i] = dual_value(fwd, n)
    labels = tuple(f"L{i + 1}" for i in range(m))
    return QLattice(n, labels, pairing, (True,) * m)


def build_affine_A1(n: int = 3) -> QLattice:
    """Two spheres in the affine A_1 fibre, HF^k(L0, L1) = K for k = 1, 2 with weight k/3."""
    if n != 3:
        raise UnsupportedDimension("the affine A_1 weights are only pinned down for n = 3")
    v01 = QLaurent({Fraction(1, 3): -1, Fraction(2, 3): 1})
    pairing = [[sphere_self_pairing(n), v01],
               [dual_value(v01, n), sphere_self_pairing(n)]]
    return QLattice(n, ("L0", "L1"), pairing, (True, True))
