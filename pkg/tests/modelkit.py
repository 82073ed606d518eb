"""Small model builders shared by the chain-level tests."""

from fractions import Fraction
import random

from qfloer.chainmodel.core import GradedSpace, ModelBuilder, MultiOp
from qfloer.chainmodel.fixtures import ALL_OPS
from qfloer.exactalg import RationalMatrix, inverse

BETA, E, B = 0, 1, 2


def bare_model(degrees, n=3, entries=(), unit=None, c=None, e=True, b=True, delta=True, labels=()):
    """One object V with CF(V, V) in the given degrees; every other tensor is zero
    unless listed in ``entries`` as (name, objects, key, output)."""
    mb = ModelBuilder(n, {-1: 1, 0: 1, 1: 1}, ("beta", "e", "b"))
    if e:
        mb.cochains["e"] = {E: Fraction(1)}
    if b:
        mb.cochains["b"] = {B: Fraction(1)}
    if delta:
        mb.entry("delta", (), (B,), {E: 1})
    mb.space("V", "V", degrees, labels)
    for name, objs, key, out in entries:
        mb.entry(name, objs, key, out)
    mb.units["V"] = dict(unit or {})
    mb.c["V"] = dict(c or {})
    mb.declare_all(*ALL_OPS)
    return mb.build()


def random_complex(rng: random.Random, max_dim=6):
    """Random cochain complex with a known cohomology.

    Returns (space, differential, expected dims): a sum of cancelling pairs
    and single classes, conjugated by a random degree-preserving basis change.
    """
    dim = rng.randint(1, max_dim)
    degs = sorted(rng.randint(-1, 2) for _ in range(dim))
    diff = [[Fraction(0)] * dim for _ in range(dim)]
    used = set()
    for i in range(dim):
        for j in range(dim):
            if i in used or j in used or i == j:
                continue
            if degs[j] == degs[i] + 1 and rng.random() < 0.6:
                diff[j][i] = Fraction(rng.choice([1, -1, 2, 3]))
                used.update((i, j))
    expected = {}
    for i in range(dim):
        if i not in used:
            expected[degs[i]] = expected.get(degs[i], 0) + 1
    P = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    for k in set(degs):
        idx = [i for i in range(dim) if degs[i] == k]
        while True:
            block = [[Fraction(rng.randint(-2, 2)) for _ in idx] for _ in idx]
            try:
                inverse(RationalMatrix.from_rows(block))
                break
            except ZeroDivisionError:
                continue
        for a, i in enumerate(idx):
            for bb, j in enumerate(idx):
                P[i][j] = block[a][bb]
    Pm = RationalMatrix.from_rows(P)
    D = Pm @ RationalMatrix.from_rows(diff) @ inverse(Pm)
    space = GradedSpace("C", tuple(degs))
    entries = {}
    for i in range(dim):
        out = {j: D[j, i] for j in range(dim) if D[j, i]}
        if out:
            entries[(i,)] = out
    return space, MultiOp("d", (space,), space, 1, entries), expected


def failing(reports):
    return sorted(r.identity for r in reports if not r.passed)
