"""Finite chain-level models: graded spaces, multilinear operations, models."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ..errors import MissingTensor
from ..exactalg import RationalMatrix, rat

Vector = dict  # sparse: basis index -> nonzero Fraction


# ---------------------------------------------------------------------------
# sparse vectors
# ---------------------------------------------------------------------------


def vec(items: Iterable[tuple[int, object]] | Mapping = ()) -> Vector:
    out: Vector = {}
    pairs = items.items() if isinstance(items, Mapping) else items
    for i, c in pairs:
        c = rat(c)
        if c:
            out[i] = out.get(i, Fraction(0)) + c
            if not out[i]:
                del out[i]
    return out


def basis(i: int) -> Vector:
    return {i: Fraction(1)}


def vadd(*vs: Vector) -> Vector:
    out: Vector = {}
    for v in vs:
        for i, c in v.items():
            s = out.get(i, Fraction(0)) + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
    return out


def vscale(c, v: Vector) -> Vector:
    c = rat(c)
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def vsub(a: Vector, b: Vector) -> Vector:
    return vadd(a, vscale(-1, b))


def dense(v: Vector, size: int) -> list[Fraction]:
    out = [Fraction(0)] * size
    for i, c in v.items():
        out[i] = c
    return out


def sparse(values: Sequence[Fraction]) -> Vector:
    return {i: rat(c) for i, c in enumerate(values) if c}


def vector_json(v: Vector) -> list:
    return [[i, c.numerator, c.denominator] for i, c in sorted(v.items())]


# ---------------------------------------------------------------------------
# graded spaces and operations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space; basis element ``i`` has degree ``degrees[i]``."""

    name: str
    degrees: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"{self.name}#{i}" for i in range(self.dim)))
        elif len(self.labels) != self.dim:
            raise ValueError("one label per basis element")

    @classmethod
    def from_dims(cls, name: str, dims: Mapping[int, int], labels: Sequence[str] = ()):
        degrees = [int(d) for d in sorted(dims, key=int) for _ in range(int(dims[d]))]
        return cls(name, tuple(degrees), tuple(labels))

    @property
    def dim(self) -> int:
        return len(self.degrees)

    @property
    def dims(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return dict(sorted(out.items()))

    def in_degree(self, k: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == k]

    def degree_of(self, v: Vector) -> int | None:
        """Common degree of the support of ``v`` (None for the zero vector)."""
        degs = {self.degrees[i] for i in v}
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous vector in {self.name}")
        return degs.pop() if degs else None


GROUND = GradedSpace("K", (0,), ("1",))


class DegreeError(ValueError):
    """A tensor entry does not respect the declared degree shift."""


class MultiOp:
    """Multilinear map ``inputs[0] x ... x inputs[-1] -> output`` of fixed degree.

    ``entries`` maps tuples of input basis indices to sparse output vectors.
    Arguments are listed in the written order, e.g. ``mu2(a2, a1)``.
    """

    __slots__ = ("name", "inputs", "output", "shift", "entries")

    def __init__(self, name: str, inputs: Sequence[GradedSpace], output: GradedSpace,
                 shift: int, entries: Mapping[tuple[int, ...], Mapping[int, object]] = ()):
        self.name = name
        self.inputs = tuple(inputs)
        self.output = output
        self.shift = int(shift)
        clean: dict[tuple[int, ...], Vector] = {}
        items = entries.items() if isinstance(entries, Mapping) else entries
        for key, out in items:
            key = tuple(int(k) for k in key)
            if len(key) != len(self.inputs):
                raise ValueError(f"{name}: entry {key} has wrong arity")
            for sp, k in zip(self.inputs, key):
                if not 0 <= k < sp.dim:
                    raise IndexError(f"{name}: basis index {k} out of range for {sp.name}")
            v = vadd(clean.get(key, {}), vec(out))
            target = sum(sp.degrees[k] for sp, k in zip(self.inputs, key)) + self.shift
            for o in v:
                if not 0 <= o < output.dim:
                    raise IndexError(f"{name}: output index {o} out of range for {output.name}")
                if output.degrees[o] != target:
                    raise DegreeError(
                        f"{name}{key} -> {output.labels[o]} has degree {output.degrees[o]}, "
                        f"expected {target}")
            if v:
                clean[key] = v
            else:
                clean.pop(key, None)
        self.entries = MappingProxyType(dict(sorted(clean.items())))

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def on_basis(self, *idx: int) -> Vector:
        return dict(self.entries.get(tuple(idx), {}))

    def __call__(self, *args: Vector) -> Vector:
        if len(args) != self.arity:
            raise TypeError(f"{self.name} takes {self.arity} arguments")
        out: Vector = {}
        for combo in product(*(a.items() for a in args)):
            key = tuple(i for i, _ in combo)
            image = self.entries.get(key)
            if not image:
                continue
            coeff = Fraction(1)
            for _, c in combo:
                coeff *= c
            out = vadd(out, vscale(coeff, image))
        return out

    def basis_tuples(self):
        return product(*(range(sp.dim) for sp in self.inputs))

    def with_entry(self, key: Sequence[int], output_index: int, delta=1) -> "MultiOp":
        extra = {tuple(key): {output_index: rat(delta)}}
        merged = {k: dict(v) for k, v in self.entries.items()}
        merged[tuple(key)] = vadd(merged.get(tuple(key), {}), extra[tuple(key)])
        return MultiOp(self.name, self.inputs, self.output, self.shift, merged)

    def is_zero(self) -> bool:
        return not self.entries

    def matrix(self, domain_idx: Sequence[int] | None = None,
               codomain_idx: Sequence[int] | None = None) -> RationalMatrix:
        """Matrix of an arity-one operation restricted to the given basis subsets."""
        if self.arity != 1:
            raise ValueError("matrix() needs an arity-one operation")
        dom = list(range(self.inputs[0].dim)) if domain_idx is None else list(domain_idx)
        cod = list(range(self.output.dim)) if codomain_idx is None else list(codomain_idx)
        rows = [[self.entries.get((j,), {}).get(i, Fraction(0)) for j in dom] for i in cod]
        return RationalMatrix(len(cod), len(dom), [x for r in rows for x in r])

    def __repr__(self) -> str:
        return f"MultiOp({self.name}, arity={self.arity}, shift={self.shift}, nnz={len(self.entries)})"


# ---------------------------------------------------------------------------
# chain models
# ---------------------------------------------------------------------------

# name -> (number of objects, description used in error messages)
OP_OBJECT_COUNT = {
    "d": 0, "delta": 0,
    "mu1": 2, "mu2": 3, "mu3": 4,
    "phi0": 1, "phi0_dual": 1, "phi1": 2, "phi2": 3,
    "unit_dual": 1, "hvee": 2, "kvee": 1,
}


@dataclass(frozen=True)
class ChainModel:
    """Explicit tensors for the closed/open TQFT operations at one slope.

    Lagrangian pairs are keyed ``(L0, L1)`` for CF(L0, L1).  Operations are
    keyed ``(name, objects)``; see :data:`OP_OBJECT_COUNT` and
    :meth:`signature` for their shapes.
    """

    n: int
    closed: GradedSpace
    lagrangians: tuple[str, ...]
    spaces: Mapping[tuple[str, str], GradedSpace]
    ops: Mapping[tuple[str, tuple[str, ...]], MultiOp] = field(default_factory=dict)
    e: Vector = field(default_factory=dict)
    b: Vector = field(default_factory=dict)
    beta: Vector = field(default_factory=dict)
    units: Mapping[str, Vector] = field(default_factory=dict)
    c: Mapping[str, Vector] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "lagrangians", tuple(self.lagrangians))
        object.__setattr__(self, "spaces", MappingProxyType(dict(self.spaces)))
        object.__setattr__(self, "ops", MappingProxyType(dict(self.ops)))
        object.__setattr__(self, "units", MappingProxyType({k: vec(v) for k, v in self.units.items()}))
        object.__setattr__(self, "c", MappingProxyType({k: vec(v) for k, v in self.c.items()}))
        for name in ("e", "b", "beta"):
            object.__setattr__(self, name, vec(getattr(self, name)))
        for (name, objs), op in self.ops.items():
            expected = self.signature(name, objs)
            if tuple(s.name for s in op.inputs) != tuple(s.name for s in expected[0]) \
                    or op.output.name != expected[1].name or op.shift != expected[2]:
                raise ValueError(f"operation {name}{objs} does not match its signature")

    # shapes ----------------------------------------------------------------

    def cf(self, l0: str, l1: str) -> GradedSpace:
        try:
            return self.spaces[(l0, l1)]
        except KeyError:
            raise MissingTensor(f"no Floer complex CF({l0},{l1}) in the model") from None

    def signature(self, name: str, objs: Sequence[str]):
        """``(input spaces, output space, degree shift)`` for an operation."""
        objs = tuple(objs)
        if name not in OP_OBJECT_COUNT:
            raise KeyError(f"unknown operation {name!r}")
        if len(objs) != OP_OBJECT_COUNT[name]:
            raise ValueError(f"{name} takes {OP_OBJECT_COUNT[name]} objects, got {objs}")
        n, C = self.n, self.closed
        if name == "d":
            return (C,), C, 1
        if name == "delta":
            return (C,), C, -1
        if name == "mu1":
            s = self.cf(*objs)
            return (s,), s, 1
        if name == "mu2":
            l0, l1, l2 = objs
            return (self.cf(l1, l2), self.cf(l0, l1)), self.cf(l0, l2), 0
        if name == "mu3":
            l0, l1, l2, l3 = objs
            return (self.cf(l2, l3), self.cf(l1, l2), self.cf(l0, l1)), self.cf(l0, l3), -1
        if name == "phi0":
            (l,) = objs
            return (C,), self.cf(l, l), 0
        if name == "phi0_dual":
            (l,) = objs
            return (C, self.cf(l, l)), GROUND, -n
        if name == "phi1":
            l0, l1 = objs
            return (C, self.cf(l0, l1)), self.cf(l0, l1), -1
        if name == "phi2":
            l0, l1, l2 = objs
            return (C, self.cf(l1, l2), self.cf(l0, l1)), self.cf(l0, l2), -2
        if name == "unit_dual":
            (l,) = objs
            return (self.cf(l, l),), GROUND, -n
        if name == "hvee":
            l0, l1 = objs
            return (self.cf(l1, l0), self.cf(l0, l1)), GROUND, -(n + 1)
        if name == "kvee":
            (l,) = objs
            return (C, self.cf(l, l)), GROUND, -(n + 2)
        raise AssertionError(name)

    def make_op(self, name: str, objs: Sequence[str], entries=()) -> MultiOp:
        ins, out, shift = self.signature(name, objs)
        label = name if not objs else f"{name}[{','.join(objs)}]"
        return MultiOp(label, ins, out, shift, entries)

    # access ------------------------------------------------------------------

    def op(self, name: str, *objs: str) -> MultiOp:
        try:
            return self.ops[(name, tuple(objs))]
        except KeyError:
            raise MissingTensor(f"model has no tensor {name}{tuple(objs)}") from None

    def has(self, name: str, *objs: str) -> bool:
        return (name, tuple(objs)) in self.ops

    def unit(self, l: str) -> Vector:
        try:
            return self.units[l]
        except KeyError:
            raise MissingTensor(f"no unit e_{l}") from None

    def equivariant_structure(self, l: str) -> Vector:
        try:
            return self.c[l]
        except KeyError:
            raise MissingTensor(f"no equivariant structure c_{l}") from None

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self.spaces)

    def object_tuples(self, k: int) -> list[tuple[str, ...]]:
        """Composable tuples (L0, ..., L_{k-1}) with every consecutive CF present."""
        out = []
        for objs in product(self.lagrangians, repeat=k):
            if all((objs[i], objs[i + 1]) in self.spaces for i in range(k - 1)):
                out.append(objs)
        return out

    # immutable updates ---------------------------------------------------------

    def with_op(self, op_key: tuple[str, tuple[str, ...]], op: MultiOp) -> "ChainModel":
        ops = dict(self.ops)
        ops[op_key] = op
        return self._replace(ops=ops)

    def with_entry(self, name: str, objs: Sequence[str], key: Sequence[int],
                   output_index: int, delta=1) -> "ChainModel":
        """Add ``delta`` to one tensor coefficient (used for mutation testing)."""
        objs = tuple(objs)
        current = self.ops.get((name, objs)) or self.make_op(name, objs)
        return self.with_op((name, objs), current.with_entry(key, output_index, delta))

    def with_cochain(self, which: str, value: Vector, label: str | None = None) -> "ChainModel":
        if which in ("e", "b", "beta"):
            return self._replace(**{which: value})
        if which in ("units", "c"):
            mapping = dict(getattr(self, which))
            mapping[label] = value
            return self._replace(**{which: mapping})
        raise KeyError(which)

    def _replace(self, **changes) -> "ChainModel":
        kwargs = dict(n=self.n, closed=self.closed, lagrangians=self.lagrangians,
                      spaces=self.spaces, ops=self.ops, e=self.e, b=self.b, beta=self.beta,
                      units=self.units, c=self.c)
        kwargs.update(changes)
        return ChainModel(**kwargs)


class ModelBuilder:
    """Mutable helper used to assemble a :class:`ChainModel`."""

    def __init__(self, n: int, closed_dims: Mapping[int, int], closed_labels: Sequence[str] = ()):
        self.n = n
        self.closed = GradedSpace.from_dims("CF(H)", closed_dims, closed_labels)
        self.lagrangians: list[str] = []
        self.spaces: dict[tuple[str, str], GradedSpace] = {}
        self.ops: dict[tuple[str, tuple[str, ...]], dict] = {}
        self.cochains: dict[str, Vector] = {"e": {}, "b": {}, "beta": {}}
        self.units: dict[str, Vector] = {}
        self.c: dict[str, Vector] = {}

    def lagrangian(self, label: str):
        if label not in self.lagrangians:
            self.lagrangians.append(label)
        return self

    def space(self, l0: str, l1: str, degrees: Sequence[int], labels: Sequence[str] = ()):
        self.lagrangian(l0).lagrangian(l1)
        self.spaces[(l0, l1)] = GradedSpace(f"CF({l0},{l1})", tuple(degrees), tuple(labels))
        return self

    def entry(self, name: str, objs: Sequence[str], key: Sequence[int], out: Mapping[int, object]):
        table = self.ops.setdefault((name, tuple(objs)), {})
        table[tuple(key)] = vadd(table.get(tuple(key), {}), vec(out))
        return self

    def declare(self, name: str, objs: Sequence[str]):
        """Make an operation present (possibly zero)."""
        self.ops.setdefault((name, tuple(objs)), {})
        return self

    def declare_all(self, *names: str):
        """Declare every listed operation for every composable object tuple."""
        model = self.build(validate_ops=False)
        for name in names:
            k = OP_OBJECT_COUNT[name]
            if name in ("d", "delta"):
                self.declare(name, ())
            elif name == "hvee":
                for l0, l1 in model.object_tuples(2):
                    if (l1, l0) in self.spaces:
                        self.declare(name, (l0, l1))
            elif name in ("phi0", "phi0_dual", "unit_dual", "kvee"):
                for l in self.lagrangians:
                    if (l, l) in self.spaces:
                        self.declare(name, (l,))
            elif name in ("mu1", "phi1"):
                for pair in self.spaces:
                    self.declare(name, pair)
            else:
                # mu2: (L0,L1,L2), mu3: (L0,..,L3), phi2: (L0,L1,L2); the outer CF must exist
                for objs in model.object_tuples(k):
                    if (objs[0], objs[-1]) in self.spaces:
                        self.declare(name, objs)
        return self

    def build(self, validate_ops: bool = True) -> ChainModel:
        skeleton = ChainModel(self.n, self.closed, tuple(self.lagrangians), self.spaces,
                              {}, self.cochains["e"], self.cochains["b"], self.cochains["beta"],
                              self.units, self.c)
        if not validate_ops:
            return skeleton
        ops = {}
        for (name, objs), entries in self.ops.items():
            ops[(name, objs)] = skeleton.make_op(name, objs, entries)
        return skeleton._replace(ops=ops)
