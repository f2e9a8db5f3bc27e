"""Command-line entry point: ``qic <subcommand> [options]``.

Exit codes: 0 success, 1 validation error, 2 parse error.
Half-integer spins are passed doubled (``--two-l 3`` means l = 3/2).
Set ``QIC_LOG`` to error, warn, info or debug for diagnostics on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import channel as ch
from . import paraqubit as pq
from .core import ValidationError, degeneracy_classes
from .info import information_content, shannon_entropy, spectral_entropy
from .representation import coupled_basis, fmt_half, ladder_ops, ladder_residuals, schmidt_rank
from .sim import SimulationConfig, run_simulation
from .statespec import SpecParseError, complex_pair, dump_coupled, dump_state, load_spec

log = logging.getLogger("qic")

EXIT_OK, EXIT_INVALID, EXIT_PARSE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _setup_logging() -> None:
    level = os.environ.get("QIC_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING, "warning": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


# --- formatting -------------------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_pair(complex(obj))
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    return obj


def _emit_json(doc) -> None:
    sys.stdout.write(json.dumps(_jsonable(doc), indent=2, allow_nan=False) + "\n")


def _matrix_pairs(m: np.ndarray) -> list:
    return [[complex_pair(z) for z in row] for row in np.asarray(m, dtype=complex)]


def _fmt(z, digits: int = 6) -> str:
    z = complex(z)
    re = 0.0 if abs(z.real) < 10 ** -(digits + 2) else z.real
    im = 0.0 if abs(z.imag) < 10 ** -(digits + 2) else z.imag
    if im == 0:
        return f"{re:.{digits}g}"
    if re == 0:
        return f"{im:.{digits}g}j"
    return f"{re:.{digits}g}{im:+.{digits}g}j"


def _table(rows: list[list[str]], header: list[str] | None = None) -> str:
    rows = [list(map(str, r)) for r in rows]
    if header:
        rows = [header] + rows
    if not rows:
        return ""
    widths = [max(len(r[i]) for r in rows if i < len(r)) for i in range(max(map(len, rows)))]
    out = [" ".join(c.rjust(w) for c, w in zip(r, widths)) for r in rows]
    if header:
        out.insert(1, " ".join("-" * w for w in widths))
    return "\n".join(out)


def _matrix_text(m: np.ndarray) -> str:
    return _table([[_fmt(z) for z in row] for row in np.asarray(m)])


# --- helpers ----------------------------------------------------------------


def _bipartite(spec) -> ch.BipartiteState:
    return ch.coupled_mixture(spec) if isinstance(spec, ch.CoupledWeights) else spec


def _state_summary(state: ch.BipartiteState, tol: float) -> dict:
    verdict = ch.classify(state, tol)
    spec = state.rho.spectrum
    ra, rb = ch.partial_trace_b(state), ch.partial_trace_a(state)
    return {
        "dims": [state.dims.na, state.dims.nb],
        "classification": verdict.as_dict(),
        "spectrum": {
            "eigenvalues": spec.eigenvalues,
            "eigenvectors": [[complex_pair(z) for z in v.amplitudes] for v in spec.eigenvectors],
        },
        "degeneracy_classes": degeneracy_classes(spec, tol),
        "partial_trace_a": {"matrix": _matrix_pairs(ra.matrix), "diagonal": np.real(np.diag(ra.matrix))},
        "partial_trace_b": {"matrix": _matrix_pairs(rb.matrix), "diagonal": np.real(np.diag(rb.matrix))},
        "spectral_entropy_bits": spectral_entropy(state.rho),
    }


def _print_state_summary(summary: dict, state: ch.BipartiteState) -> None:
    c = summary["classification"]
    print(f"classification:      {c['label']}")
    print(f"product residual:    {c['product_residual']:.3e}")
    print(f"PPT min eigenvalue:  {c['ppt_min_eigenvalue']:.6g}" + ("" if c["ppt_conclusive"] else "  (PPT not conclusive for these dims)"))
    print(f"spectral entropy:    {summary['spectral_entropy_bits']:.6g} bits")
    print("spectrum:            " + "  ".join(_fmt(x) for x in summary["spectrum"]["eigenvalues"]))
    print("degeneracy classes:  " + "  ".join("{" + ",".join(map(str, g)) + "}" for g in summary["degeneracy_classes"]))
    print("reduced state A (trace over B):")
    print(_matrix_text(ch.partial_trace_b(state).matrix))
    print("reduced state B (trace over A):")
    print(_matrix_text(ch.partial_trace_a(state).matrix))


def _write_spec(path: str | None, doc: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
        log.info("wrote state spec to %s", path)


# --- subcommands ------------------------------------------------------------


def cmd_classify(args) -> int:
    spec = load_spec(args.input)
    state = _bipartite(spec)
    summary = _state_summary(state, args.tol)
    summary["state"] = dump_state(state)
    _write_spec(args.emit_spec, summary["state"])
    if args.json:
        _emit_json(summary)
    else:
        _print_state_summary(summary, state)
    return EXIT_OK


def cmd_paraqubit(args) -> int:
    w = pq.ParaqubitWeights(args.ps, args.p0, args.pd, args.pu)
    state = pq.paraqubit_density(w)
    summary = _state_summary(state, args.tol)
    summary.update(
        weights={"p_s": w.p_s, "p_0": w.p_0, "p_d": w.p_d, "p_u": w.p_u},
        matrix=_matrix_pairs(state.matrix),
        paper_disentangled=pq.degeneracy_criterion(w, args.tol),
        concurrence=pq.concurrence(state),
        closed_form_concurrence=pq.closed_form_concurrence(w),
        state=dump_coupled(w.to_coupled()),
    )
    _write_spec(args.emit_spec, summary["state"])
    if args.json:
        _emit_json(summary)
    else:
        print("induced-basis density matrix (|-->, |-+>, |+->, |++>):")
        print(_matrix_text(state.matrix))
        print(f"paper-disentangled (p_s = p_0): {summary['paper_disentangled']}")
        print(f"concurrence:         {summary['concurrence']:.6g}")
        _print_state_summary(summary, state)
    return EXIT_OK


def cmd_couple(args) -> int:
    if args.two_s > args.two_l:
        raise ValidationError("two_s must not exceed two_l")
    table = coupled_basis(args.two_l, args.two_s)
    nl, ns = table.dims
    stretch = set(table.stretch_rows())
    rows = []
    for r, (two_j, two_m) in enumerate(table.labels):
        rank, _ = schmidt_rank(table.unitary[r], (nl, ns))
        terms = [
            {"two_ml": 2 * (i // ns) - table.l.two_j, "two_ms": 2 * (i % ns) - table.s.two_j, "c": float(c.real)}
            for i, c in enumerate(table.unitary[r])
            if c != 0
        ]
        rows.append({"two_j": two_j, "two_m": two_m, "terms": terms, "schmidt_rank": rank,
                     "product": rank == 1, "stretch": r in stretch})
    doc = {"two_l": table.l.two_j, "two_s": table.s.two_j, "rows": rows,
           "unitary": table.unitary.real}
    if args.json:
        _emit_json(doc)
        return EXIT_OK
    print(f"coupled basis of l={table.l} x s={table.s} (induced index (m_l+l)*(2s+1)+(m_s+s))")
    out = []
    for row in rows:
        expansion = " ".join(
            f"{t['c']:+.6f}|{fmt_half(t['two_ml'])},{fmt_half(t['two_ms'])}>" for t in row["terms"]
        )
        flag = "product (stretch)" if row["stretch"] and row["product"] else ("product" if row["product"] else "entangled")
        out.append([fmt_half(row["two_j"]), fmt_half(row["two_m"]), row["schmidt_rank"], flag, expansion])
    print(_table(out, ["j", "m", "rank", "type", "expansion in |m_l,m_s>"]))
    return EXIT_OK


def cmd_ladder(args) -> int:
    ops = ladder_ops(args.dim)
    doc = {"dim": ops.dim, "j_plus": ops.j_plus.real, "j_minus": ops.j_minus.real, "j3": np.diag(ops.j3).real}
    if args.verify:
        doc["residuals"] = ladder_residuals(ops)
        doc["casimir_value"] = (ops.dim - 1) / 2 * ((ops.dim - 1) / 2 + 1)
    if args.json:
        _emit_json(doc)
        return EXIT_OK
    for name, m in (("J+", ops.j_plus), ("J-", ops.j_minus), ("J3", ops.j3)):
        print(f"{name}:")
        print(_matrix_text(m))
    if args.verify:
        print(f"Casimir j(j+1) = {doc['casimir_value']:g}")
        print(_table([[k, f"{v:.3e}"] for k, v in doc["residuals"].items()], ["check", "max residual"]))
    return EXIT_OK


def cmd_simulate(args) -> int:
    spec = load_spec(args.input)
    report = run_simulation(SimulationConfig(spec, args.shots, args.seed))
    doc = report.as_dict()
    if args.json:
        _emit_json(doc)
        return EXIT_OK
    print(f"generator {doc['generator']}, seed {report.seed}, shots {report.shots}")
    na, nb = report.counts.shape
    rows = [[k, n, report.counts[k, n], _fmt(report.empirical[k, n]), _fmt(report.analytic.table[k, n]),
             f"{report.deviation[k, n]:+.2e}"] for k in range(na) for n in range(nb)]
    print(_table(rows, ["k", "n", "count", "empirical", "analytic", "deviation"]))
    print("marginal A empirical: " + " ".join(_fmt(x) for x in report.marginal_a))
    print("marginal A analytic:  " + " ".join(_fmt(x) for x in report.analytic.row_sums))
    print("marginal B empirical: " + " ".join(_fmt(x) for x in report.marginal_b))
    print("marginal B analytic:  " + " ".join(_fmt(x) for x in report.analytic.col_sums))
    print(f"empirical entropy: {doc['empirical_entropy_bits']:.6f} bits")
    print(f"deviation statistic: {doc['deviation_statistic']:.6g}")
    return EXIT_OK


def cmd_scan_paraqubit(args) -> int:
    report = pq.phase_diagram_scan(args.resolution, args.tol)
    text = json.dumps(_jsonable(report), indent=1) + "\n"
    try:
        Path(args.out).write_text(text, encoding="utf-8")
    except OSError as exc:
        log.error("cannot write %s: %s", args.out, exc)
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    summary = {k: v for k, v in report.items() if k != "points"}
    summary["out"] = str(args.out)
    separable_gap = [i for i in report["disagreement_indices"]
                     if report["points"][i]["oracle_separable"]]
    summary["separable_with_ps_ne_p0"] = len(separable_gap)
    if args.json:
        _emit_json(summary)
        return EXIT_OK
    c = report["counts"]
    print(f"scanned {report['n_points']} points at step {report['step']:g}; wrote {args.out}")
    print(_table([
        ["paper-disentangled", c["criterion_true_separable"], c["criterion_true_entangled"]],
        ["not paper-disentangled", c["criterion_false_separable"], c["criterion_false_entangled"]],
    ], ["", "oracle separable", "oracle entangled"]))
    print(f"agree {report['agree']}, disagree {report['disagree']}")
    print(f"separable points with p_s != p_0: {len(separable_gap)}")
    print(f"entangled points with p_d = p_u: {len(report['other_pair_coincidence_entangled'])}")
    return EXIT_OK


def cmd_counting(args) -> int:
    doc = ch.parameter_counting(ch.BipartiteDims(args.na, args.nb))
    if args.json:
        _emit_json({"na": args.na, "nb": args.nb, **doc})
    else:
        print(_table([[k, v] for k, v in doc.items()], ["quantity", "value"]))
    return EXIT_OK


def cmd_entropy(args) -> int:
    if (args.input is None) == (args.probs is None):
        raise SpecParseError("entropy needs exactly one of --input or --probs")
    if args.probs is not None:
        h = shannon_entropy(args.probs)
        doc = {"probs": args.probs, "shannon_entropy_bits": h,
               "information_content_bits": [information_content(p) if p > 0 else None for p in args.probs]}
    else:
        state = _bipartite(load_spec(args.input))
        detect = ch.detection_distribution(state)
        doc = {
            "spectral_entropy_bits": spectral_entropy(state.rho),
            "subchannel_a_entropy_bits": spectral_entropy(ch.partial_trace_b(state)),
            "subchannel_b_entropy_bits": spectral_entropy(ch.partial_trace_a(state)),
            "detection_entropy_bits": shannon_entropy(detect.table.ravel()),
        }
    if args.json:
        _emit_json(doc)
    else:
        print(_table([[k, "-" if v is None else (v if isinstance(v, list) else f"{v:.6f}")] for k, v in doc.items()]))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document on stdout")
    common.add_argument("--tol", type=float, default=1e-9, help="classification tolerance (default 1e-9)")

    p = _Parser(prog="qic", description="Paired quantum channel analysis.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("classify", parents=[common], help="classify a bipartite state")
    s.add_argument("--input", required=True, help="state spec JSON file")
    s.add_argument("--emit-spec", metavar="PATH", help="also write the state as a mixture-form spec")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("paraqubit", parents=[common], help="analyse the four-weight two-qubit state")
    for name, dest in (("--ps", "ps"), ("--p0", "p0"), ("--pd", "pd"), ("--pu", "pu")):
        s.add_argument(name, dest=dest, type=float, required=True)
    s.add_argument("--emit-spec", metavar="PATH", help="also write the state as a coupled-form spec")
    s.set_defaults(func=cmd_paraqubit)

    s = sub.add_parser("couple", parents=[common], help="Clebsch-Gordan table (doubled spins)")
    s.add_argument("--two-l", type=int, required=True, help="2l")
    s.add_argument("--two-s", type=int, required=True, help="2s, at most 2l")
    s.set_defaults(func=cmd_couple)

    s = sub.add_parser("ladder", parents=[common], help="ladder operators of a dimension")
    s.add_argument("--dim", type=int, required=True)
    s.add_argument("--verify", action="store_true", help="report commutator and Casimir residuals")
    s.set_defaults(func=cmd_ladder)

    s = sub.add_parser("simulate", parents=[common], help="Monte-Carlo detection statistics")
    s.add_argument("--input", required=True)
    s.add_argument("--shots", type=int, default=100_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("scan-paraqubit", parents=[common], help="scan the paraqubit weight simplex")
    s.add_argument("--resolution", type=float, default=0.05)
    s.add_argument("--out", default="paraqubit_scan.json")
    s.set_defaults(func=cmd_scan_paraqubit)

    s = sub.add_parser("counting", parents=[common], help="parameter counting for na x nb")
    s.add_argument("--na", type=int, required=True)
    s.add_argument("--nb", type=int, required=True)
    s.set_defaults(func=cmd_counting)

    s = sub.add_parser("entropy", parents=[common], help="Shannon / spectral entropies")
    s.add_argument("--input")
    s.add_argument("--probs", type=float, nargs="+")
    s.set_defaults(func=cmd_entropy)
    return p


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecParseError, FileNotFoundError, IsADirectoryError, UnicodeDecodeError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValidationError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
