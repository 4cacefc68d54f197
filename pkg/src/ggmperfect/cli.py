"""Command-line interface.

Exit codes: 0 clean verification, 3 substantive negative finding, 2 usage
or input error.  Every output embeds a run manifest; outputs are
byte-identical across runs with the same inputs and seed.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .graph import DiGraph, Graph
from .linalg import (
    DEFAULT_TOL,
    as_exact,
    matrix_from_json,
    matrix_to_json,
    parse_fraction,
)
from .parametrization import DeltaAssignment, eps_max
from .perfectness import d_membership, find_bad_eps, is_perfect, montecarlo_perfectness
from .poly import cycle_lemma_check
from .sampler import RNG_NAME, SamplerConfig, proposal_stream

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NEGATIVE = 3


class InputError(Exception):
    pass


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _load_json(path: str):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg})") from exc


def _load_graph(path: str) -> Graph:
    try:
        return Graph.from_json(_load_json(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_delta(path: str, G: Graph) -> DeltaAssignment:
    try:
        delta = DeltaAssignment.from_json(G, _load_json(path))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return delta


def _load_matrix(path: str, backend: str):
    text = _read(path).decode()
    try:
        if path.endswith(".csv"):
            rows = [r for r in csv.reader(io.StringIO(text)) if r]
            M = as_exact([[parse_fraction(v) for v in r] for r in rows])
            if M.ndim != 2 or M.shape[0] != M.shape[1]:
                raise ValueError("matrix must be square")
        else:
            M = matrix_from_json(json.loads(text))
    except (ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    return M if backend == "exact" else M.astype(float)


def _manifest(args, files: list[str]) -> dict:
    h = hashlib.sha256()
    for f in files:
        h.update(_read(f))
    # Timestamp only from SOURCE_DATE_EPOCH so outputs stay reproducible.
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    return {
        "command": args.command,
        "inputs_sha256": h.hexdigest() if files else None,
        "seed": getattr(args, "seed", None),
        "backend": getattr(args, "backend", None),
        "tol": getattr(args, "tol", None),
        "rng": RNG_NAME,
        "version": __version__,
        "timestamp": int(epoch) if epoch and epoch.isdigit() else None,
    }


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def cmd_sample(args) -> int:
    G = _load_graph(args.graph)
    config = SamplerConfig(seed=args.seed, backend=args.backend)
    manifest = _manifest(args, [args.graph])
    out = io.StringIO()
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        out.write("# manifest " + json.dumps(manifest, sort_keys=True) + "\n")
        w.writerow(["seed_index"] + [f"delta_{a}_{b}" for a, b in G.sorted_edges()] + ["eps", "eps_max"])
    else:
        out.write(_dump({"manifest": manifest}))
    if G.g > 0:
        stream = proposal_stream(G, config)
        for k in range(args.trials):
            point, cov = next(stream)
            emax = eps_max(G, point.delta)
            if args.format == "csv":
                w.writerow(
                    [k]
                    + [f"{float(v):.12g}" for v in point.delta.sequence()]
                    + [f"{float(point.eps):.12g}", f"{emax:.12g}"]
                )
                continue
            rec = dict(point.to_json(args.decimal), seed_index=k, eps_max=emax)
            rec["matrix_ref"] = f"{args.seed}:{k}"
            if cov.exact:
                rec["covariance"] = matrix_to_json(cov.matrix, args.decimal)
            else:
                rec["covariance"] = {"n": G.d, "entries": np.asarray(cov.matrix, float).tolist()}
            out.write(_dump(rec))
    _emit(args, out.getvalue())
    return EXIT_OK


def cmd_perfect(args) -> int:
    G = _load_graph(args.graph)
    A = _load_matrix(args.matrix, args.backend)
    if A.shape != (G.d, G.d):
        raise InputError(f"matrix is {A.shape[0]}x{A.shape[1]} but the graph has {G.d} nodes")
    try:
        verdict = is_perfect(A, G, args.tol)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(args, _dump(dict(verdict.to_json(), manifest=_manifest(args, [args.graph, args.matrix]))))
    return EXIT_OK if verdict.perfect else EXIT_NEGATIVE


def cmd_check_d(args) -> int:
    G = _load_graph(args.graph)
    delta = _load_delta(args.delta, G)
    if not delta.exact:
        raise InputError("delta values must be exact rational strings for the path-sum test")
    report = d_membership(G, delta, restricted=args.restricted)
    _emit(args, _dump(dict(report.to_json(args.decimal), manifest=_manifest(args, [args.graph, args.delta]))))
    return EXIT_OK if report.in_D else EXIT_NEGATIVE


def cmd_bad_eps(args) -> int:
    G = _load_graph(args.graph)
    delta = _load_delta(args.delta, G)
    if not delta.exact:
        raise InputError("delta values must be exact rational strings")
    result = find_bad_eps(G, delta)
    _emit(args, _dump(dict(result.to_json(args.decimal), manifest=_manifest(args, [args.graph, args.delta]))))
    return EXIT_OK if result.finite else EXIT_NEGATIVE


def cmd_montecarlo(args) -> int:
    G = _load_graph(args.graph)
    args.backend = "exact"
    config = SamplerConfig(seed=args.seed, backend="exact")
    report = montecarlo_perfectness(G, args.trials, config, workers=args.workers)
    out = io.StringIO()
    out.write("# manifest " + json.dumps(_manifest(args, [args.graph]), sort_keys=True) + "\n")
    row = report.csv_row()
    w = csv.DictWriter(out, fieldnames=list(row), lineterminator="\n")
    w.writeheader()
    w.writerow(row)
    _emit(args, out.getvalue())
    for f in report.failures:
        print(f"imperfect sample at seed {f['seed']}: {json.dumps(f, sort_keys=True)}", file=sys.stderr)
    return EXIT_OK if report.perfect_count == report.trials else EXIT_NEGATIVE


def _load_weights(path: str, H: DiGraph) -> dict:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: weights must map 'i-j' to a value")
    weights = {}
    try:
        for key, v in obj.items():
            a, b = (int(s) for s in key.split("-"))
            weights[(a, b)] = parse_fraction(v)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    missing = [a for a in H.arcs if a not in weights]
    if missing:
        raise InputError(f"{path}: no weight for arcs {sorted(missing)}")
    if any(weights[a] == 0 for a in H.arcs):
        raise InputError(f"{path}: arc weights must be nonzero")
    return weights


def cmd_cycle_lemma(args) -> int:
    try:
        H = DiGraph.from_json(_load_json(args.digraph))
    except ValueError as exc:
        raise InputError(f"{args.digraph}: {exc}") from exc
    weights = _load_weights(args.weights, H)
    try:
        verdict = cycle_lemma_check(H, weights)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(args, _dump(dict(verdict.to_json(args.decimal), manifest=_manifest(args, [args.digraph, args.weights]))))
    return EXIT_OK if verdict.consistent else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ggmperfect", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, backend=True):
        sp.add_argument("--out", help="write output here instead of stdout")
        sp.add_argument("--decimal", action="store_true", help="print rationals as 12-digit decimals")
        if backend:
            sp.add_argument("--backend", choices=["exact", "float"], default="exact")
            sp.add_argument("--tol", type=float, default=DEFAULT_TOL, help="float zero-test threshold")

    sp = sub.add_parser("sample", help="draw points and covariances from the uniform measure")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    common(sp)
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("perfect", help="decide perfectness of a precision matrix")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--matrix", required=True, help="precision matrix (.json exact or .csv)")
    common(sp)
    sp.set_defaults(func=cmd_perfect)

    sp = sub.add_parser("check-d", help="path-sum test for edge weights")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--delta", required=True)
    sp.add_argument("--restricted", action="store_true", help="also check paths confined to each K")
    common(sp, backend=False)
    sp.set_defaults(func=cmd_check_d)

    sp = sub.add_parser("bad-eps", help="exceptional scales for fixed edge weights")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--delta", required=True)
    common(sp, backend=False)
    sp.set_defaults(func=cmd_bad_eps)

    sp = sub.add_parser("montecarlo", help="fraction of perfect samples")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    common(sp, backend=False)
    sp.set_defaults(func=cmd_montecarlo)

    sp = sub.add_parser("cycle-lemma", help="determinant vs 1-cycle enumeration on a digraph")
    sp.add_argument("--digraph", required=True)
    sp.add_argument("--weights", required=True, help="JSON map 'i-j' -> weight for every arc")
    common(sp, backend=False)
    sp.set_defaults(func=cmd_cycle_lemma)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "trials", 1) < 1:
        parser.error("--trials must be at least 1")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
