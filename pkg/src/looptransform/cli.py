"""Command-line driver.

Every subcommand reads its inputs as JSON (inline text or a file path),
runs one operation or sweep and prints a report::

    {"command", "inputs_digest", "seed", "results": [...], "output", "pass", "runtime_ms"}

Exit status is 0 when every check passes, 1 when one fails and 2 for
usage errors or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from typing import Any, Callable

import numpy as np

from . import hoop_core, holonomy as hol, lattice, positivity, suites, torus, transform
from . import serialization as ser
from .errors import LoopTransformError
from .hoop_core import (
    abelianize,
    decompose,
    kernel_test,
    spanning_tree_generators,
    substitute,
)
from .sampling import DEFAULT_SEED, random_graph, random_loop, rng_from
from .suites import Check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad flags or unreadable input; maps to exit status 2."""


# operation -> subcommand that exercises it (audited by ``selftest``)
COVERAGE = {
    "hoop_core.reduce": "decompose",
    "hoop_core.compose": "mandelstam-sweep",
    "hoop_core.invert": "mandelstam-sweep",
    "hoop_core.spanning_tree_generators": "generators",
    "hoop_core.decompose": "decompose",
    "hoop_core.substitute": "decompose",
    "hoop_core.abelianize": "abelianize",
    "hoop_core.kernel_test": "kernel-test",
    "hoop_core.path_abelianize": "path-transform",
    "hoop_core.generator_power_word": "selftest",
    "holonomy.holonomy": "holonomy",
    "holonomy.wilson": "holonomy",
    "holonomy.interpolate": "interpolate",
    "holonomy.mandelstam_check": "mandelstam-sweep",
    "holonomy.conjugation_invariance_check": "mandelstam-sweep",
    "torus.add": "fft-crosscheck",
    "torus.scale": "fft-crosscheck",
    "torus.mul": "bochner-check",
    "torus.conj": "bochner-check",
    "torus.haar_integral": "fft-crosscheck",
    "torus.inner_product": "verify-unitarity",
    "torus.eval_at": "fft-crosscheck",
    "torus.fourier": "transform",
    "torus.inverse_fourier": "inverse-transform",
    "torus.fft_oracle": "fft-crosscheck",
    "lattice.hnf_solve": "verify-diagram",
    "lattice.is_independent": "verify-diagram",
    "lattice.refinement_matrix": "verify-diagram",
    "lattice.join_levels": "verify-unitarity",
    "transform.include_function": "verify-diagram",
    "transform.include_coeffs": "verify-diagram",
    "transform.cylinder_inner_product": "verify-unitarity",
    "transform.loop_transform": "transform",
    "transform.inverse_transform": "inverse-transform",
    "transform.verify_diagram": "verify-diagram",
    "transform.path_transform": "path-transform",
    "positivity.functional_from_density": "bochner-check",
    "positivity.density_from_functional": "bochner-check",
    "positivity.psd_test": "bochner-check",
    "positivity.grid_positivity_test": "bochner-check",
    "positivity.l2_continuity_check": "bochner-check",
}

_MODULES = {
    "hoop_core": hoop_core,
    "holonomy": hol,
    "torus": torus,
    "lattice": lattice,
    "transform": transform,
    "positivity": positivity,
}


# input handling

def _load(text: str | None, flag: str):
    if text is None:
        return None
    raw = text
    if not text.lstrip().startswith(("{", "[")) and os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            raw = fh.read()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{flag}: malformed JSON ({exc.msg} at position {exc.pos})") from None


def _need(args, name: str):
    value = getattr(args, f"{name}_json")
    if value is None:
        raise UsageError(f"--{name} is required for {args.command}")
    return value


def _graph(args):
    return ser.graph_from_json(_need(args, "graph"))


def _word(args, g):
    return ser.word_from_json(_need(args, "word"), g)


def _cylinder(args):
    """``--poly`` as a cylinder function; a bare polynomial needs ``--level``."""
    d = _need(args, "poly")
    if "level" in d:
        return ser.cylinder_from_json(d)
    if args.level_json is None:
        raise UsageError("--poly is a bare polynomial; give --level or a {level, poly} object")
    return transform.CylinderFunction(ser.level_from_json(args.level_json), ser.poly_from_json(d))


def _poly(args):
    d = _need(args, "poly")
    return ser.poly_from_json(d["poly"] if "level" in d else d)


def _tol(args, default: float) -> float:
    return default if args.tol is None else args.tol


def _write_table(path: str | None, header: list[str], rows) -> None:
    if not path:
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _sample_rows(p, grid):
    pts, vals = torus.sample(p, grid)
    pts = pts.reshape(-1, p.dim)
    vals = np.asarray(vals).ravel()
    for t, v in zip(pts, vals):
        yield [repr(float(x)) for x in t] + [repr(float(v.real)), repr(float(v.imag))]


# subcommands; each returns (checks, output)

def cmd_generators(args):
    g = _graph(args)
    basis = spanning_tree_generators(g)
    once = all(
        sum(1 for e, _ in b.steps if e in basis.chords) == 1 and (c, 1) in b.steps
        for c, b in zip(basis.chords, basis.generators)
    )
    checks = [
        Check.holds("rank_law", basis.rank == len(g.edges) - len(g.vertices) + 1, basis.rank),
        Check.holds("each_generator_crosses_its_chord_once", once),
    ]
    return checks, ser.basis_to_json(basis)


def _symbol(i: int, s: int) -> str:
    return f"g{i}" if s == 1 else f"~g{i}"


def cmd_decompose(args):
    g = _graph(args)
    basis = spanning_tree_generators(g)
    w = _word(args, g)
    word = decompose(w, basis)
    ok = substitute(word, basis).steps == w.steps
    out = {"word": ser.word_to_json(w), "generators": [_symbol(i, s) for i, s in word]}
    return [Check.holds("substitution_round_trip", ok)], out


def cmd_abelianize(args):
    g = _graph(args)
    basis = spanning_tree_generators(g)
    w = _word(args, g)
    v = abelianize(w, basis)
    recount = [0] * basis.rank
    for i, s in decompose(w, basis):
        recount[i] += s
    return [Check.holds("matches_generator_exponents", list(v) == recount, list(v))], {"hoop": list(v)}


def cmd_kernel_test(args):
    g = _graph(args)
    basis = spanning_tree_generators(g)
    w = _word(args, g)
    return [Check.holds("kernel_test", kernel_test(w, basis), list(abelianize(w, basis)))], None


def cmd_interpolate(args):
    g = _graph(args)
    basis = spanning_tree_generators(g)
    group = args.group
    raw = args.targets_json
    if raw is None:
        rng = rng_from(args.seed)
        draw = hol.random_u1 if group == hol.U1_TAG else hol.random_su2
        targets = [draw(rng) for _ in range(basis.rank)]
    else:
        if not isinstance(raw, list):
            raise UsageError("--targets must be a JSON list")
        targets = [ser.element_from_json(x, group) for x in raw]
    A = hol.interpolate(basis, targets)
    err = max((hol.holonomy(A, b).distance(t) for b, t in zip(basis.generators, targets)), default=0.0)
    return [Check.at_most("interpolation_max_error", err, _tol(args, 1e-12))], ser.connection_to_json(A)


def cmd_holonomy(args):
    g = _graph(args)
    A = ser.connection_from_json(_need(args, "connection"), g)
    w = _word(args, g)
    h = hol.holonomy(A, w)
    W = hol.wilson(A, w)
    out = {"holonomy": ser.element_to_json(h), "wilson": ser.complex_to_json(W)}
    return [Check.at_most("wilson_modulus_excess", max(abs(W) - 1.0, 0.0), _tol(args, 1e-12))], out


def cmd_mandelstam_sweep(args):
    rng = rng_from(args.seed)
    fixed = None if args.graph_json is None else _graph(args)
    worst_m = worst_c = 0.0
    for _ in range(args.trials):
        g = fixed if fixed is not None else random_graph(rng, max_edges=8)
        A = hol.random_connection(rng, g, hol.SU2_TAG)
        a, b = random_loop(rng, g), random_loop(rng, g)
        worst_m = max(worst_m, hol.mandelstam_check(A, a, b))
        worst_c = max(worst_c, hol.conjugation_invariance_check(A, hol.random_su2(rng), a))
    checks = [
        Check.at_most("mandelstam_max_residual", worst_m, _tol(args, 1e-10)),
        Check.at_most("conjugation_invariance_max_residual", worst_c, _tol(args, 1e-10)),
    ]
    return checks, None


def cmd_transform(args):
    psi = _cylinder(args)
    basis = None
    if args.graph_json is not None:
        basis = spanning_tree_generators(_graph(args))
    state = transform.loop_transform(psi, basis)
    gap = abs(state.norm() - psi.norm())
    return [Check.at_most("norm_residual", gap, _tol(args, 1e-12))], ser.state_to_json(state)


def cmd_inverse_transform(args):
    state = ser.state_from_json(_need(args, "state"))
    psi = transform.inverse_transform(state)
    ok = transform.loop_transform(psi) == state
    return [Check.holds("forward_after_inverse_exact", ok)], ser.cylinder_to_json(psi)


def cmd_verify_diagram(args):
    if args.poly_json is None:
        return _suite(args, "inclusion"), None
    psi = _cylinder(args)
    if "level" not in args.poly_json or args.level_json is None:
        raise UsageError("verify-diagram needs a cylinder --poly and a finer --level")
    fine = ser.level_from_json(args.level_json)
    up = transform.include_function(psi, fine)
    checks = [
        Check.at_most("diagram_residual", transform.verify_diagram(psi, fine), _tol(args, 1e-12)),
        Check.at_most("isometry_residual", abs(up.norm() - psi.norm()), _tol(args, 1e-12)),
    ]
    out = {"included": ser.cylinder_to_json(up), "refinement": [list(r) for r in lattice.refinement_matrix(psi.level, fine)]}
    return checks, out


def cmd_verify_unitarity(args):
    return _suite(args, "unitarity"), None


def cmd_bochner_check(args):
    if args.poly_json is None:
        return _suite(args, "bochner"), None
    p = positivity.MeasureDensity(_poly(args))
    ell = positivity.functional_from_density(p)
    back = positivity.density_from_functional(ell).density == p.density
    if args.window_json is not None:
        window = [tuple(int(x) for x in k) for k in args.window_json]
    else:
        window = positivity.box_window(p.dim, max(p.density.bandwidth(), 1))
    grid = positivity.default_grid(p.density, args.grid)
    tol = _tol(args, positivity.POSITIVITY_TOL)
    eig = positivity.psd_test(ell, window)
    low = positivity.grid_positivity_test(p, grid)
    checks = [
        Check.holds("roundtrip_exact", back),
        Check.at_least("psd_min_eigenvalue", eig, -tol),
        Check.at_least("grid_minimum", low, -tol),
    ]
    if low >= -tol:
        checks.append(Check.holds("l2_continuity", positivity.l2_continuity_check(p, p.density, grid, tol)))
    _write_table(args.out, [f"theta{i}" for i in range(p.dim)] + ["re", "im"], _sample_rows(p.density, grid))
    return checks, {"functional": ser.functional_to_json(ell), "window_size": len(window), "grid": grid}


def cmd_fft_crosscheck(args):
    if args.poly_json is None:
        return _suite(args, "fourier"), None
    p = _poly(args)
    grid = args.grid
    exact = torus.fourier(p)
    approx = torus.fft_oracle(p, grid)
    mean_gap = abs(torus.grid_average(p, grid) - torus.haar_integral(p))
    # the sampled transform is linear: F(p + 2i p) = (1 + 2i) F(p)
    mixed = torus.fft_oracle(torus.add(p, torus.scale(p, 2j)), grid)
    linear_gap = mixed.max_difference(torus.CoeffFunction(p.dim, {k: (1 + 2j) * c for k, c in exact.coeffs.items()}))
    theta = rng_from(args.seed).uniform(0.0, 2.0 * math.pi, size=p.dim)
    point_gap = abs(torus.eval_at(p, theta) - torus.eval_at(torus.inverse_fourier(approx), theta))
    tol = _tol(args, 1e-9)
    checks = [
        Check.at_most("fft_max_error", approx.max_difference(exact), tol),
        Check.at_most("grid_mean_error", mean_gap, tol),
        Check.at_most("linearity_residual", linear_gap, tol),
        Check.at_most("point_evaluation_residual", point_gap, tol),
    ]
    _write_table(args.out, [f"theta{i}" for i in range(p.dim)] + ["re", "im"], _sample_rows(p, grid))
    return checks, ser.poly_to_json(exact)


def cmd_path_transform(args):
    if args.poly_json is None:
        return _suite(args, "paths"), None
    psi = _cylinder(args)
    g = None if args.graph_json is None else _graph(args)
    state = transform.path_transform(psi, g)
    checks = [Check.at_most("norm_residual", abs(state.norm() - psi.norm()), _tol(args, 1e-12))]
    out = ser.state_to_json(state)
    if g is not None and args.word_json is not None:
        w = ser.word_from_json(args.word_json, g)
        edges = hoop_core.path_abelianize(w)
        out = {"state": out, "edge_exponents": list(edges)}
        if w.is_closed and w.source == g.base:
            basis = spanning_tree_generators(g)
            via_hoop = _apply(basis.edge_matrix(), abelianize(w, basis))
            checks.append(Check.holds("edge_exponents_factor_through_hoop", edges == via_hoop))
    return checks, out


def _apply(M, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def _suite(args, name: str) -> list[Check]:
    runner, _ = suites.CRITERIA[name]
    checks = runner(rng_from(args.seed), args.trials)
    if args.tol is not None:
        checks = [c.with_tol(args.tol) for c in checks]
    return checks


def _coverage() -> Check:
    missing = []
    for op, sub in COVERAGE.items():
        mod, _, fn = op.partition(".")
        if not callable(getattr(_MODULES[mod], fn, None)) or sub not in COMMANDS:
            missing.append(op)
    return Check.holds("coverage_manifest", not missing, missing or len(COVERAGE))


def _theta_checks() -> list[Check]:
    g = hoop_core.Graph.from_edges([("e1", "a", "b"), ("e2", "a", "b"), ("e3", "a", "b")], base="a")
    basis = spanning_tree_generators(g)
    b1, b2 = basis.generators
    comm = hoop_core.product([b1, b2, hoop_core.invert(b1), hoop_core.invert(b2)])
    return [
        Check.holds("theta.rank", basis.rank == 2, basis.rank),
        Check.holds("theta.commutator_in_kernel", kernel_test(comm, basis), list(abelianize(comm, basis))),
    ]


def cmd_selftest(args):
    checks = [_coverage(), *_theta_checks()]
    for name in suites.CRITERIA:
        checks.extend(_suite(args, name))
    return checks, {"criteria": list(suites.CRITERIA)}


COMMANDS: dict[str, Callable] = {
    "generators": cmd_generators,
    "decompose": cmd_decompose,
    "abelianize": cmd_abelianize,
    "kernel-test": cmd_kernel_test,
    "interpolate": cmd_interpolate,
    "holonomy": cmd_holonomy,
    "mandelstam-sweep": cmd_mandelstam_sweep,
    "transform": cmd_transform,
    "inverse-transform": cmd_inverse_transform,
    "verify-diagram": cmd_verify_diagram,
    "verify-unitarity": cmd_verify_unitarity,
    "bochner-check": cmd_bochner_check,
    "fft-crosscheck": cmd_fft_crosscheck,
    "path-transform": cmd_path_transform,
    "selftest": cmd_selftest,
}

HELP = {
    "generators": "spanning-tree generator loops of --graph",
    "decompose": "write --word in the generator symbols",
    "abelianize": "net chord exponents of --word",
    "kernel-test": "is --word in the commutator subgroup",
    "interpolate": "connection with prescribed generator holonomies (--targets, --group)",
    "holonomy": "holonomy and Wilson value of --word under --connection",
    "mandelstam-sweep": "SU(2) trace identity and gauge invariance on random loops",
    "transform": "loop transform of a cylinder function",
    "inverse-transform": "cylinder function of a finitely supported --state",
    "verify-diagram": "inclusion commutes with the torus transforms",
    "verify-unitarity": "random sweep of the isometry property",
    "bochner-check": "positivity of a density via its character functional",
    "fft-crosscheck": "closed-form coefficients against a sampled FFT",
    "path-transform": "transform over the edge lattice",
    "selftest": "every verification suite plus the coverage manifest",
}

_JSON_FLAGS = ("graph", "word", "poly", "level", "connection", "state", "targets", "window")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    for flag in _JSON_FLAGS:
        common.add_argument(f"--{flag}", help="JSON text or path to a JSON file")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--tol", type=float, default=None, help="override residual tolerances")
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--grid", type=int, default=65, help="samples per axis")
    common.add_argument("--group", choices=(hol.U1_TAG, hol.SU2_TAG), default=hol.U1_TAG)
    common.add_argument("--out", help="write a CSV data table here")

    parser = _Parser(prog="looptransform", description="Abelian loop transform toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name])
    return parser


def _inputs(args) -> dict:
    d = {flag: getattr(args, f"{flag}_json") for flag in _JSON_FLAGS}
    d.update(seed=args.seed, tol=args.tol, trials=args.trials, grid=args.grid, group=args.group)
    return d


def run(argv: list[str] | None = None) -> tuple[int, dict | None]:
    """Parse ``argv``, run the subcommand and return ``(exit status, report)``."""
    start = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if args.trials < 1:
            raise UsageError("--trials must be positive")
        for flag in _JSON_FLAGS:
            setattr(args, f"{flag}_json", _load(getattr(args, flag), f"--{flag}"))
        checks, output = COMMANDS[args.command](args)
    except (UsageError, LoopTransformError) as exc:
        print(f"looptransform: error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None

    passed = all(c.passed for c in checks)
    report: dict[str, Any] = {
        "command": args.command,
        "inputs_digest": ser.digest(_inputs(args)),
        "seed": args.seed,
        "results": [c.to_json() for c in checks],
        "pass": passed,
        "runtime_ms": round((time.perf_counter() - start) * 1000.0, 3),
    }
    if output is not None:
        report["output"] = output
    return (EXIT_OK if passed else EXIT_FAIL), report


def main(argv: list[str] | None = None) -> int:
    status, report = run(argv)
    if report is not None:
        print(ser.canonical_json(report))
    return status


if __name__ == "__main__":
    sys.exit(main())
