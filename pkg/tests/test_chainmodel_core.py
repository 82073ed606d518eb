from fractions import Fraction as F
import random

import pytest
from hypothesis import given, settings, strategies as st

from qfloer.chainmodel.core import DegreeError, GradedSpace, ModelBuilder, MultiOp, basis, vadd, vscale
from qfloer.chainmodel.fixtures import sphere_model
from qfloer.chainmodel.homology import Cohomology
from qfloer.errors import IdentityFailure, MissingTensor

from modelkit import random_complex


# -- graded spaces and operations -------------------------------------------------------


def test_graded_space_basics():
    sp = GradedSpace.from_dims("C", {2: 1, -1: 2})
    assert sp.degrees == (-1, -1, 2)
    assert sp.dims == {-1: 2, 2: 1}
    assert sp.in_degree(-1) == [0, 1]
    assert sp.degree_of({2: F(1)}) == 2
    assert sp.degree_of({}) is None
    with pytest.raises(ValueError):
        sp.degree_of({0: F(1), 2: F(1)})
    with pytest.raises(ValueError):
        GradedSpace("C", (0, 1), ("a",))


def test_multiop_is_multilinear():
    A = GradedSpace("A", (0, 0))
    op = MultiOp("m", (A, A), A, 0, {(0, 1): {1: F(2)}, (1, 1): {0: F(1)}})
    x = {0: F(3), 1: F(-1)}
    y = {1: F(1, 2)}
    assert op(x, y) == vadd(vscale(F(3, 2), {1: F(2)}), vscale(F(-1, 2), {0: F(1)}))
    with pytest.raises(TypeError):
        op(x)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-2, 3), min_size=1, max_size=4), st.integers(1, 3), st.integers(-3, 3),
       st.data())
def test_degree_bookkeeping_fuzz(degrees, arity, shift, data):
    sp = GradedSpace("A", tuple(sorted(degrees)))
    key = tuple(data.draw(st.integers(0, sp.dim - 1)) for _ in range(arity))
    out = data.draw(st.integers(0, sp.dim - 1))
    expected_ok = sp.degrees[out] == sum(sp.degrees[k] for k in key) + shift
    if expected_ok:
        op = MultiOp("m", (sp,) * arity, sp, shift, {key: {out: F(1)}})
        assert op.on_basis(*key) == {out: F(1)}
    else:
        with pytest.raises(DegreeError):
            MultiOp("m", (sp,) * arity, sp, shift, {key: {out: F(1)}})


def test_out_of_range_entries_rejected():
    sp = GradedSpace("A", (0,))
    with pytest.raises(IndexError):
        MultiOp("m", (sp,), sp, 0, {(1,): {0: 1}})
    with pytest.raises(IndexError):
        MultiOp("m", (sp,), sp, 0, {(0,): {3: 1}})


def test_model_lookups():
    m = sphere_model(3)
    assert m.cf("V", "V").dim == 2
    with pytest.raises(MissingTensor):
        m.cf("V", "W")
    with pytest.raises(MissingTensor):
        m.op("mu2", "V", "W", "V")
    with pytest.raises(ValueError):
        m.make_op("mu2", ("V",))
    assert m.has("phi1", "V", "V")
    mutated = m.with_entry("mu2", ("V", "V", "V"), (0, 1), 1)
    assert mutated.op("mu2", "V", "V", "V").on_basis(0, 1) == {1: F(2)}
    assert m.op("mu2", "V", "V", "V").on_basis(0, 1) == {1: F(1)}


def test_builder_declares_composable_tuples():
    mb = ModelBuilder(3, {0: 1})
    mb.space("A", "A", [0]).space("A", "B", [1]).space("B", "B", [0])
    mb.declare_all("mu2", "mu3", "hvee")
    m = mb.build()
    assert m.has("mu2", "A", "A", "B") and m.has("mu2", "A", "B", "B")
    assert not m.has("mu2", "B", "A", "B")  # CF(B, A) is absent
    assert not m.has("hvee", "A", "B")


# -- cohomology ------------------------------------------------------------------------------


def _rank(rows):
    # straightforward elimination, kept separate from the library code
    a = [list(r) for r in rows]
    r = 0
    cols = len(a[0]) if a else 0
    for c in range(cols):
        piv = next((i for i in range(r, len(a)) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def _brute_force_dims(space, d):
    out = {}
    for k in sorted(set(space.degrees)):
        src, tgt, prev = space.in_degree(k), space.in_degree(k + 1), space.in_degree(k - 1)
        dk = [[d.on_basis(i).get(j, F(0)) for i in src] for j in tgt]
        dprev = [[d.on_basis(i).get(j, F(0)) for i in prev] for j in src]
        rk = _rank(dk) if tgt else 0
        rprev = _rank(dprev) if prev else 0
        dim = len(src) - rk - rprev
        if dim:
            out[k] = dim
    return out


def test_zero_differential_cohomology():
    sp = GradedSpace("C", (0, 0, 2))
    d = MultiOp("d", (sp,), sp, 1)
    coh = Cohomology(sp, d)
    assert coh.dims() == {0: 2, 2: 1}
    f = MultiOp("f", (sp,), sp, 0, {(0,): {1: F(3)}, (1,): {0: F(1)}, (2,): {2: F(5)}})
    mats = coh.induced(f)
    assert mats[0].tolist() == [[0, 1], [3, 0]]
    assert mats[2].tolist() == [[5]]


def test_acyclic_two_term_complex():
    sp = GradedSpace("C", (0, 1))
    d = MultiOp("d", (sp,), sp, 1, {(0,): {1: F(2)}})
    coh = Cohomology(sp, d)
    assert coh.total_dim() == 0
    assert coh.is_boundary(1, {1: F(1)})
    assert coh.primitive(1, {1: F(1)}) == {0: F(1, 2)}
    assert coh.coordinates(0, {0: F(1)}) is None  # not a cycle


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32))
def test_cohomology_against_rank_oracle(seed):
    space, d, expected = random_complex(random.Random(seed))
    coh = Cohomology(space, d)
    dims = {k: v for k, v in coh.dims().items() if v}
    assert dims == expected
    assert dims == _brute_force_dims(space, d)
    # class coordinates of the chosen representatives are the standard basis
    for k in coh.degrees:
        for t, rep in enumerate(coh.classes(k)):
            coords = coh.coordinates(k, rep)
            assert coords == [F(int(s == t)) for s in range(coh.dim(k))]


def test_induced_map_must_preserve_boundaries():
    sp = GradedSpace("C", (0, 1, 1))
    d = MultiOp("d", (sp,), sp, 1, {(0,): {1: F(1)}})
    coh = Cohomology(sp, d)
    swap = MultiOp("f", (sp,), sp, 0, {(1,): {2: F(1)}, (2,): {1: F(1)}})
    with pytest.raises(IdentityFailure):
        coh.induced(swap)


def test_basis_helper():
    assert basis(3) == {3: F(1)}
