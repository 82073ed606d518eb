"""Command-line front end.

Exit codes: 0 success, 1 identity failure, 2 schema or input error,
3 lattice invariant violated, 4 eigenvalues not rational.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .chainmodel import checks
from .chainmodel.cone import floer_table
from .chainmodel.fixtures import affine_a1_model, am_model, padded_sphere_model, projective_model, sphere_model
from .errors import (DivisibilityError, IdentityFailure, LatticeInvariantError, MissingTensor, NotASphere,
                     NotEquivariant, SchemaError, SizeMismatch, SplittingError, UnsupportedDimension)
from .exactalg import format_rational
from .lefschetz import QLattice, TwistWord, build_affine_A1, build_Am, pair, word_matrix, word_value
from .qnumbers import q_intersection

EXIT_OK, EXIT_IDENTITY, EXIT_SCHEMA, EXIT_LATTICE, EXIT_SPLITTING = 0, 1, 2, 3, 4

MAX_SNAPSHOT_LEN = 6
MAX_SNAPSHOT_SIZE = 8

# checkers whose failure makes the corrected map or its table meaningless
TABLE_PREREQUISITES = ("differentials", "chain_maps", "mu2_leibniz", "dilation", "equivariance",
                       "phi1_homotopy")


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: str | None = None
    options: dict = field(default_factory=dict)

    def check_inputs(self):
        for p in self.inputs:
            if not Path(p).is_file():
                raise SchemaError(f"{p}: no such file")


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _value_lines(value, as_json: bool) -> str:
    at_one = value.eval_at_one()
    if as_json:
        return io.dumps({"value": value.to_json(), "text": str(value), "at_q_1": format_rational(at_one)})
    return f"{value}\nat q=1: {format_rational(at_one)}\n"


def _index(lat: QLattice, raw: str, what: str) -> int:
    try:
        i = int(raw)
    except ValueError:
        raise SchemaError(f"{what} index {raw!r} is not an integer") from None
    if not 0 <= i < lat.size:
        raise SchemaError(f"{what} index {i} out of range for a lattice of size {lat.size}")
    return i


# -- commands -----------------------------------------------------------------


def cmd_pair(cfg: RunConfig) -> int:
    lat = io.load_lattice(cfg.inputs[0])
    i = _index(lat, cfg.options["i"], "first")
    j = _index(lat, cfg.options["j"], "second")
    _emit(_value_lines(lat.pairing[i][j], cfg.options.get("json", False)))
    return EXIT_OK


def cmd_twist(cfg: RunConfig) -> int:
    lat = io.load_lattice(cfg.inputs[0])
    word = io.load_word(cfg.inputs[1])
    src = _index(lat, cfg.options["source"], "source")
    tgt = _index(lat, cfg.options["target"], "target")
    try:
        word.validate(lat)
    except (NotASphere, IndexError) as exc:
        raise SchemaError(f"word: {exc}") from None
    repeat = cfg.options.get("repeat", 1)
    if repeat < 0:
        raise SchemaError("repeat count must be non-negative")
    word = TwistWord(word.letters * repeat)
    value = word_value(lat, word, src, tgt)
    _emit(_value_lines(value, cfg.options.get("json", False)))
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    model = io.load_model(cfg.inputs[0])
    reports = checks.run_all(model)
    ok = all(r.passed for r in reports)
    doc = {"schema": 1, "status": "pass" if ok else "fail",
           "failed": [r.identity for r in reports if not r.passed],
           "reports": [r.to_json() for r in reports]}
    text = io.dumps(doc)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    if cfg.options.get("verbose", False) or not cfg.output:
        _emit(text)
    else:
        for r in reports:
            _emit(f"{r.identity}: {r.status}")
    return EXIT_OK if ok else EXIT_IDENTITY


def cmd_table(cfg: RunConfig) -> int:
    model = io.load_model(cfg.inputs[0])
    l0, l1 = cfg.options["L0"], cfg.options["L1"]
    for l in (l0, l1):
        if l not in model.lagrangians:
            raise SchemaError(f"unknown object {l!r}")
    failed = []
    for name in TABLE_PREREQUISITES:
        try:
            rep = checks.CHECKERS[name](model)
        except MissingTensor:
            if name in ("differentials", "equivariance", "phi1_homotopy"):
                raise
            continue
        if not rep.passed:
            failed.append(rep)
    if failed:
        _emit(io.dumps({"status": "fail", "reports": [r.to_json() for r in failed]}))
        return EXIT_IDENTITY
    table = floer_table(model, l0, l1)
    value = q_intersection(table)
    if cfg.options.get("json", False):
        _emit(io.dumps({"table": table.to_json(), "value": value.to_json(), "text": str(value),
                        "at_q_1": format_rational(value.eval_at_one())}))
    else:
        lines = [f"deg {d} weight {format_rational(w)} dim {dim}" for (d, w), dim in table.entries.items()]
        _emit("\n".join(lines + [str(value), f"at q=1: {format_rational(value.eval_at_one())}"]))
    return EXIT_OK


def snapshot_rows(lat: QLattice, max_len: int, workers: int = 1) -> list[tuple[TwistWord, int, int, object]]:
    """Every word in the sphere twists up to ``max_len`` letters, every (source, target)."""
    if not 0 <= max_len <= MAX_SNAPSHOT_LEN:
        raise SchemaError(f"snapshot word length must be between 0 and {MAX_SNAPSHOT_LEN}")
    if lat.size > MAX_SNAPSHOT_SIZE:
        raise SchemaError(f"snapshot needs a lattice of at most {MAX_SNAPSHOT_SIZE} elements")
    letters = [(v, e) for v in lat.spheres() for e in (1, -1)]
    words: list[tuple] = [()]
    frontier: list[tuple] = [()]
    for _ in range(max_len):
        frontier = [w + (a,) for w in frontier for a in letters]
        words.extend(frontier)

    def rows_for(w):
        word = TwistWord(w)
        m = word_matrix(lat, word)
        out = []
        for s in range(lat.size):
            image = tuple(m[k][s] for k in range(lat.size))
            for t in range(lat.size):
                out.append((word, s, t, pair(lat, image, lat.basis_vector(t))))
        return out

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(rows_for, words))  # map keeps submission order
    else:
        chunks = [rows_for(w) for w in words]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (len(r[0]), r[0].letters, r[1], r[2]))
    return rows


def cmd_snapshot(cfg: RunConfig) -> int:
    lat = io.load_lattice(cfg.inputs[0])
    workers = _thread_cap()
    rows = snapshot_rows(lat, cfg.options["max_len"], workers)
    lines = ["# word\tsource\ttarget\tvalue\tat_q_1"]
    for word, s, t, value in rows:
        lines.append(f"{word}\t{s}\t{t}\t{value}\t{format_rational(value.eval_at_one())}")
    text = "\n".join(lines) + "\n"
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
        _emit(f"{len(rows)} rows written to {cfg.output}")
    else:
        _emit(text)
    return EXIT_OK


def _thread_cap() -> int:
    raw = os.environ.get("QFLOER_THREADS", "")
    try:
        cap = int(raw) if raw else (os.cpu_count() or 1)
    except ValueError:
        raise SchemaError(f"QFLOER_THREADS must be an integer, got {raw!r}") from None
    return max(1, min(cap, os.cpu_count() or 1))


def cmd_export(cfg: RunConfig) -> int:
    kind, name = cfg.options["kind"], cfg.options["name"]
    size = cfg.options.get("size")
    if kind == "lattice":
        builders = {"am": lambda: build_Am(size or 2), "affine-a1": build_affine_A1}
        if name not in builders:
            raise SchemaError(f"unknown lattice {name!r}; choose from {sorted(builders)}")
        doc = builders[name]().to_json()
    else:
        builders = {
            "sphere": lambda: sphere_model(size or 3),
            "projective": lambda: projective_model(size or 4),
            "am": lambda: am_model(size or 2),
            "affine-a1": affine_a1_model,
            "padded": lambda: padded_sphere_model(size or 3),
        }
        if name not in builders:
            raise SchemaError(f"unknown model {name!r}; choose from {sorted(builders)}")
        doc = io.model_to_json(builders[name]())
    text = io.dumps(doc)
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
    else:
        _emit(text)
    return EXIT_OK


COMMANDS = {"pair": cmd_pair, "twist": cmd_twist, "check": cmd_check, "table": cmd_table,
            "snapshot": cmd_snapshot, "export": cmd_export}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qfloer", description="q-intersection numbers and chain-level checks")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("pair", help="pairing of two lattice elements")
    s.add_argument("lattice")
    s.add_argument("i")
    s.add_argument("j")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("twist", help="pairing after applying a word of sphere twists")
    s.add_argument("lattice")
    s.add_argument("word")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--repeat", type=int, default=1, help="apply the word this many times")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("check", help="run every applicable chain-level checker")
    s.add_argument("model")
    s.add_argument("--out", help="write the JSON report here")
    s.add_argument("--verbose", action="store_true", help="print the full report even with --out")

    s = sub.add_parser("table", help="equivariant table and q-intersection of a pair")
    s.add_argument("model")
    s.add_argument("L0")
    s.add_argument("L1")
    s.add_argument("--json", action="store_true")

    s = sub.add_parser("snapshot", help="all word values up to a length")
    s.add_argument("lattice")
    s.add_argument("--max-len", type=int, required=True)
    s.add_argument("--out")

    s = sub.add_parser("export", help="write a built-in lattice or chain model")
    s.add_argument("kind", choices=["lattice", "model"])
    s.add_argument("name")
    s.add_argument("--size", type=int, help="n for sphere/projective/padded, m for am")
    s.add_argument("--out")
    return p


def _config(ns: argparse.Namespace) -> RunConfig:
    c = ns.command
    if c == "pair":
        return RunConfig(c, [ns.lattice], None, {"i": ns.i, "j": ns.j, "json": ns.json})
    if c == "twist":
        return RunConfig(c, [ns.lattice, ns.word], None,
                         {"source": ns.source, "target": ns.target, "repeat": ns.repeat, "json": ns.json})
    if c == "check":
        return RunConfig(c, [ns.model], ns.out, {"verbose": ns.verbose})
    if c == "table":
        return RunConfig(c, [ns.model], None, {"L0": ns.L0, "L1": ns.L1, "json": ns.json})
    if c == "snapshot":
        return RunConfig(c, [ns.lattice], ns.out, {"max_len": ns.max_len})
    return RunConfig(c, [], ns.out, {"kind": ns.kind, "name": ns.name, "size": ns.size})


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    cfg = _config(ns)
    try:
        cfg.check_inputs()
        return COMMANDS[cfg.command](cfg)
    except (SchemaError, MissingTensor, SizeMismatch, DivisibilityError, UnsupportedDimension) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except LatticeInvariantError as exc:
        print(f"lattice invariant violated: {exc}", file=sys.stderr)
        return EXIT_LATTICE
    except SplittingError as exc:
        print(f"eigenvalues are not rational: {exc}", file=sys.stderr)
        return EXIT_SPLITTING
    except (IdentityFailure, NotEquivariant) as exc:
        print(f"identity failure: {exc}", file=sys.stderr)
        return EXIT_IDENTITY


if __name__ == "__main__":
    sys.exit(main())
