"""Command-line front end.

Commands:
    estimate          bounds from a measurement JSON file
    simulate          write a simulated measurement file plus the exact truth
    reproduce-tables  closed-form summary table for dephased path graphs
    oracle-check      cross-check closed forms against the numeric solvers

Exit codes: 0 success, 1 malformed input or invalid graph, 2 infeasible
record, 3 tolerance breach in a check command.

All file I/O is UTF-8 JSON with sorted keys, so identical arguments and
inputs produce byte-identical outputs.  Measurement schema:

    {"n": int, "a": [...], "delta_a": [...], "shots": [...],
     "graph": {"n": int, "edges": [[u, v], ...]}, "meta": {...}}

with delta_a, shots, graph, and meta optional (the estimator needs only n and
a; the graph, when present, scopes the pairwise-sum warning to its edges).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import __version__
from .errors import CertificateInvalid, InfeasibleRecord
from .estimator import (
    MeasurementRecord,
    closed_form_is_optimal,
    entropy_max,
    estimate_entropy,
    kkt_certificate,
    min_purity,
    normalize_signs,
)
from .oracle import master_equation_evolve, max_entropy_numeric, qp_min_purity
from .simulator import (
    RNG_ALGORITHM,
    NoiseParams,
    ShotPlan,
    dephased_coefficients,
    exact_entropy_dephased,
    exact_purity_dephased,
    exact_record,
    sample_measurements,
)
from .stabilizer import DENSE_CAP, GraphSpec
from .diagonal import twirl

QP_TOLERANCE = 1e-6
ENTROPY_TOLERANCE = 1e-6
INTEGRATOR_TOLERANCE = 1e-8

#: Reference values for the dephased-path summary at gamma*t = 0.1, keyed by n:
#: (exact, estimated, relative deviation), all rounded to 4 decimals.  The
#: deviation column is (exact - estimated)/exact evaluated on the rounded
#: values, which is the convention the reference table uses.
PURITY_REFERENCE = {2: (0.8269, 0.8233, 0.0044), 3: (0.7520, 0.7417, 0.0137), 4: (0.6838, 0.6646, 0.0281)}
ENTROPY_REFERENCE = {2: (0.3827, 0.3803, 0.0063), 3: (0.5740, 0.5667, 0.0127), 4: (0.7653, 0.7505, 0.0193)}
TABLES_GAMMA_T = 0.1


class MalformedInput(Exception):
    def __init__(self, fieldname: str, problem: str):
        self.fieldname = fieldname
        super().__init__(f"field '{fieldname}': {problem}")


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_json(obj, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_json_text(obj))


def _load_json(path: str):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise MalformedInput("<file>", f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(raw.decode("utf-8")), hashlib.sha256(raw).hexdigest()
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedInput("<file>", f"{path} is not valid UTF-8 JSON: {exc}") from exc


def _number_list(doc: dict, key: str, n: int, lo: float, hi: float) -> list[float]:
    vals = doc[key]
    if not isinstance(vals, list) or len(vals) != n:
        raise MalformedInput(key, f"expected a list of {n} numbers")
    out = []
    for v in vals:
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise MalformedInput(key, f"non-numeric entry {v!r}")
        if not (lo <= v <= hi):
            raise MalformedInput(key, f"entry {v!r} outside [{lo}, {hi}]")
        out.append(float(v))
    return out


def load_measurement(path: str):
    """Parse a measurement file; returns (record, graph or None, meta, digest)."""
    doc, digest = _load_json(path)
    if not isinstance(doc, dict):
        raise MalformedInput("<file>", "top-level value must be an object")
    if "n" not in doc:
        raise MalformedInput("n", "missing")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MalformedInput("n", f"expected a positive integer, got {n!r}")
    if "a" not in doc:
        raise MalformedInput("a", "missing")
    a = _number_list(doc, "a", n, -1.0, 1.0)
    delta = _number_list(doc, "delta_a", n, 0.0, 2.0) if "delta_a" in doc else [0.0] * n
    shots = None
    if doc.get("shots") is not None:
        raw = doc["shots"]
        if not isinstance(raw, list) or len(raw) != n or any(
            not isinstance(s, int) or isinstance(s, bool) or s < 1 for s in raw
        ):
            raise MalformedInput("shots", f"expected a list of {n} positive integers")
        shots = raw
    graph = None
    if doc.get("graph") is not None:
        try:
            graph = GraphSpec.from_dict(doc["graph"])
        except (ValueError, TypeError, KeyError) as exc:
            raise MalformedInput("graph", str(exc)) from exc
        if graph.n != n:
            raise MalformedInput("graph", f"graph has {graph.n} vertices but n = {n}")
    meta = doc.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise MalformedInput("meta", "expected an object")
    record = MeasurementRecord(n, np.array(a), np.array(delta), shots)
    return record, graph, meta or {}, digest


@dataclass(frozen=True)
class EstimateReport:
    """Everything the estimate command derives from one measurement file."""

    version: str
    input_digest: str
    n: int
    a: tuple
    delta_a: tuple
    signs_flipped: str
    feasible: bool
    p_min: float
    p_lower: Optional[float]
    p_upper: Optional[float]
    lambda0: float
    spectrum: dict
    s_lower: Optional[float]
    s_max: float
    warnings: tuple
    certificate: Optional[dict]
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["a"] = list(self.a)
        d["delta_a"] = list(self.delta_a)
        d["warnings"] = list(self.warnings)
        d["spectrum"] = dict(self.spectrum, singles=list(self.spectrum["singles"]))
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "EstimateReport":
        spectrum = dict(d["spectrum"], singles=tuple(d["spectrum"]["singles"]))
        return cls(
            version=d["version"],
            input_digest=d["input_digest"],
            n=d["n"],
            a=tuple(d["a"]),
            delta_a=tuple(d["delta_a"]),
            signs_flipped=d["signs_flipped"],
            feasible=d["feasible"],
            p_min=d["p_min"],
            p_lower=d["p_lower"],
            p_upper=d["p_upper"],
            lambda0=d["lambda0"],
            spectrum=spectrum,
            s_lower=d["s_lower"],
            s_max=d["s_max"],
            warnings=tuple(d["warnings"]),
            certificate=d["certificate"],
            meta=d["meta"],
        )


def build_report(record, graph, meta, digest, with_certificate: bool = True) -> EstimateReport:
    """Run the full estimation pipeline on an already-parsed record."""
    normalized, signs = normalize_signs(record)
    pur = min_purity(normalized, graph)
    ent = estimate_entropy(normalized)

    certificate = None
    if with_certificate:
        if normalized.n <= DENSE_CAP:
            try:
                cert = kkt_certificate(normalized)
            except CertificateInvalid as exc:
                cert = exc.certificate
            certificate = {
                "valid": cert.valid,
                "min_mu": cert.min_mu,
                "stationarity_residual": cert.stationarity_residual,
                "complementarity_residual": cert.complementarity_residual,
            }
        else:
            certificate = {"valid": None, "skipped": f"n > dense cap {DENSE_CAP}"}

    return EstimateReport(
        version=__version__,
        input_digest=digest,
        n=normalized.n,
        a=tuple(float(x) for x in normalized.a),
        delta_a=tuple(float(x) for x in normalized.delta_a),
        signs_flipped=signs,
        feasible=True,
        p_min=pur.p_min,
        p_lower=pur.p_lower,
        p_upper=pur.p_upper,
        lambda0=pur.lambda0,
        spectrum={
            "lambda0": pur.spectrum_summary.lambda0,
            "singles": pur.spectrum_summary.singles,
            "zero_multiplicity": pur.spectrum_summary.zero_multiplicity,
        },
        s_lower=ent.s_lower,
        s_max=ent.s_max,
        warnings=pur.warnings,
        certificate=certificate,
        meta=meta,
    )


def _print_report(report: EstimateReport, out) -> None:
    def fmt(x):
        return "n/a" if x is None else f"{x:.12g}"

    print(f"n                = {report.n}", file=out)
    print(f"a (normalized)   = {[round(x, 6) for x in report.a]}", file=out)
    print(f"signs flipped    = {report.signs_flipped}", file=out)
    print(f"p_min            = {fmt(report.p_min)}", file=out)
    print(f"p_lower, p_upper = {fmt(report.p_lower)}, {fmt(report.p_upper)}", file=out)
    print(f"lambda0          = {fmt(report.lambda0)}", file=out)
    print(f"s_lower          = {fmt(report.s_lower)}", file=out)
    print(f"s_max            = {fmt(report.s_max)}", file=out)
    if report.certificate is not None:
        print(f"certificate      = {report.certificate}", file=out)
    for w in report.warnings:
        print(f"warning: {w}", file=out)


def cmd_estimate(args) -> int:
    record, graph, meta, digest = load_measurement(args.input)
    try:
        report = build_report(record, graph, meta, digest, not args.no_certificate)
    except InfeasibleRecord as exc:
        error = {
            "error": "infeasible",
            "message": str(exc),
            "n": exc.n,
            "lambda0": exc.lambda0,
            "sum_a": float(np.abs(record.a).sum()),
        }
        sys.stdout.write(_json_text(error))
        if args.output:
            _write_json(error, args.output)
        return 2
    if args.output:
        _write_json(report.to_dict(), args.output)
    if args.json:
        sys.stdout.write(_json_text(report.to_dict()))
    else:
        _print_report(report, sys.stdout)
    return 0


def _truth_path(output: str) -> str:
    return output[: -len(".json")] + ".truth.json" if output.endswith(".json") else output + ".truth.json"


def cmd_simulate(args) -> int:
    try:
        graph = _resolve_graph(args.graph)
    except (ValueError, MalformedInput) as exc:
        print(f"error: invalid graph: {exc}", file=sys.stderr)
        return 1
    if args.gamma_t < 0:
        print("error: --gamma-t must be nonnegative", file=sys.stderr)
        return 1
    noise = NoiseParams.from_gamma_t(args.gamma_t)

    meta = {
        "generator": "stabpurity simulate",
        "version": __version__,
        "graph": args.graph,
        "gamma_t": args.gamma_t,
    }
    a_true = [math.exp(-noise.gamma_t)] * graph.n
    if args.shots == "exact":
        record = exact_record(graph, noise)
        meta["shots"] = "exact"
    else:
        try:
            shots = int(args.shots)
        except ValueError:
            print(f"error: --shots must be an integer or 'exact', got {args.shots!r}", file=sys.stderr)
            return 1
        if shots < 1:
            print("error: --shots must be positive", file=sys.stderr)
            return 1
        record = sample_measurements(np.array(a_true), ShotPlan(shots, args.seed))
        meta.update({"shots": shots, "seed": args.seed, "rng": RNG_ALGORITHM})

    measurement = {
        "n": graph.n,
        "graph": graph.to_dict(),
        "a": [float(x) for x in record.a],
        "delta_a": [float(x) for x in record.delta_a],
        "meta": meta,
    }
    if record.shots is not None:
        measurement["shots"] = [int(s) for s in record.shots]
    truth = {
        "n": graph.n,
        "graph": graph.to_dict(),
        "gamma_t": args.gamma_t,
        "a_exact": a_true,
        "purity_exact": exact_purity_dephased(graph, noise),
        "entropy_exact": exact_entropy_dephased(graph, noise),
    }
    _write_json(measurement, args.output)
    _write_json(truth, _truth_path(args.output))
    print(f"wrote {args.output} and {_truth_path(args.output)}")
    return 0


def _resolve_graph(spec: str) -> GraphSpec:
    if spec.endswith(".json"):
        doc, _ = _load_json(spec)
        return GraphSpec.from_dict(doc)
    return GraphSpec.preset(spec)


def _round4(x: float) -> float:
    return round(x, 4)


def reference_table_rows() -> list[dict]:
    """Exact and estimated purity/entropy for dephased path graphs, n = 2..4.

    Full-precision values plus the 4-decimal roundings; the deviation column
    is computed from the rounded values (the convention of the reference
    numbers this command is checked against).
    """
    rows = []
    noise = NoiseParams.from_gamma_t(TABLES_GAMMA_T)
    for n in (2, 3, 4):
        graph = GraphSpec.preset(f"path-{n}")
        record = exact_record(graph, noise)
        exact_p = exact_purity_dephased(graph, noise)
        est_p = min_purity(record).p_min
        exact_s = exact_entropy_dephased(graph, noise)
        est_s = estimate_entropy(record).s_lower
        row = {"n": n, "gamma_t": TABLES_GAMMA_T}
        for name, exact, est, ref in (
            ("purity", exact_p, est_p, PURITY_REFERENCE[n]),
            ("entropy", exact_s, est_s, ENTROPY_REFERENCE[n]),
        ):
            rounded_exact, rounded_est = _round4(exact), _round4(est)
            deviation = _round4((rounded_exact - rounded_est) / rounded_exact)
            row[name] = {
                "exact": exact,
                "estimated": est,
                "exact_4dp": rounded_exact,
                "estimated_4dp": rounded_est,
                "deviation_4dp": deviation,
                "reference": list(ref),
                "matches": (rounded_exact, rounded_est, deviation) == ref,
            }
        rows.append(row)
    return rows


def cmd_reproduce_tables(args) -> int:
    rows = reference_table_rows()
    all_match = all(r["purity"]["matches"] and r["entropy"]["matches"] for r in rows)
    if args.json:
        sys.stdout.write(_json_text({"gamma_t": TABLES_GAMMA_T, "rows": rows, "all_match": all_match}))
    else:
        print(f"dephased path graphs at gamma*t = {TABLES_GAMMA_T}")
        header = f"{'n':>2} {'exact P':>9} {'est P':>9} {'dev':>7} {'exact S':>9} {'est S':>9} {'dev':>7} match"
        print(header)
        for r in rows:
            p, s = r["purity"], r["entropy"]
            ok = "yes" if (p["matches"] and s["matches"]) else "NO"
            print(
                f"{r['n']:>2} {p['exact_4dp']:>9.4f} {p['estimated_4dp']:>9.4f} "
                f"{p['deviation_4dp']:>7.4f} {s['exact_4dp']:>9.4f} "
                f"{s['estimated_4dp']:>9.4f} {s['deviation_4dp']:>7.4f} {ok}"
            )
    if args.output:
        _write_json({"gamma_t": TABLES_GAMMA_T, "rows": rows, "all_match": all_match}, args.output)
    return 0 if all_match else 3


def _optimality_floor(n: int) -> float:
    # closed form is the true optimum when every a_k >= n/(n+2) (see estimator)
    return max(0.7, n / (n + 2))


def run_oracle_trials(trials: int, n_min: int, n_max: int, seed: int) -> dict:
    """Randomized closed-form vs numeric comparisons; returns the summary."""
    rng = np.random.default_rng(seed)
    qp_max = 0.0
    ent_max = 0.0
    qp_failure = None
    ent_failure = None
    band = {"count": 0, "max_closed_minus_qp": 0.0, "qp_above_closed": 0}
    for trial in range(trials):
        n = n_min + trial % (n_max - n_min + 1)
        a = rng.uniform(_optimality_floor(n), 1.0, size=n)
        record = MeasurementRecord(n, a)
        gap = abs(min_purity(record).p_min - qp_min_purity(record).objective)
        if gap > qp_max:
            qp_max = gap
            if gap > QP_TOLERANCE and qp_failure is None:
                qp_failure = {"kind": "qp", "n": n, "a": a.tolist(), "gap": gap}
        _, s_numeric = max_entropy_numeric(record)
        sgap = abs(entropy_max(record) - s_numeric)
        if sgap > ent_max:
            ent_max = sgap
            if sgap > ENTROPY_TOLERANCE and ent_failure is None:
                ent_failure = {"kind": "entropy", "n": n, "a": a.tolist(), "gap": sgap}

        # informational probe: feasible records outside the optimality domain
        lo = rng.uniform(0.0, 0.45, size=n)
        probe = 1.0 - lo * (2.0 / max(1.0, lo.sum()))  # keeps sum(a) >= n - 2
        probe = np.clip(probe, 0.0, 1.0)
        probe_record = MeasurementRecord(n, probe)
        if not closed_form_is_optimal(probe_record):
            band["count"] += 1
            diff = min_purity(probe_record).p_min - qp_min_purity(probe_record).objective
            band["max_closed_minus_qp"] = max(band["max_closed_minus_qp"], float(diff))
            if diff < -1e-9:
                band["qp_above_closed"] += 1

    integ_max = 0.0
    integ_failure = None
    integ_ns = [n for n in range(n_min, n_max + 1) if n <= 4]
    gamma_ts = [0.05, 0.1, 0.5] if trials > 0 else []
    for n in integ_ns:
        graph = GraphSpec.preset(f"path-{n}")
        for gt in gamma_ts:
            noise = NoiseParams.from_gamma_t(gt)
            rho = master_equation_evolve(graph, gamma=1.0, t=gt)
            dev = float(
                np.abs(twirl(rho, graph).values - dephased_coefficients(graph, noise).values).max()
            )
            if dev > integ_max:
                integ_max = dev
                if dev > INTEGRATOR_TOLERANCE and integ_failure is None:
                    integ_failure = {"kind": "integrator", "n": n, "gamma_t": gt, "gap": dev}

    summary = {
        "trials": trials,
        "n_min": n_min,
        "n_max": n_max,
        "seed": seed,
        "qp": {"max_abs_gap": qp_max, "tolerance": QP_TOLERANCE, "ok": qp_max <= QP_TOLERANCE},
        "entropy": {"max_abs_gap": ent_max, "tolerance": ENTROPY_TOLERANCE, "ok": ent_max <= ENTROPY_TOLERANCE},
        "integrator": {
            "max_abs_dev": integ_max,
            "tolerance": INTEGRATOR_TOLERANCE,
            "ok": integ_max <= INTEGRATOR_TOLERANCE,
            "path_sizes": integ_ns,
            "gamma_t_values": gamma_ts,
        },
        "suboptimal_band": band,
    }
    summary["ok"] = summary["qp"]["ok"] and summary["entropy"]["ok"] and summary["integrator"]["ok"]
    summary["failure"] = qp_failure or ent_failure or integ_failure
    return summary


def replay_instance(doc: dict) -> dict:
    """Recompute the deviation of a serialized failing instance."""
    kind = doc.get("kind")
    if kind == "qp":
        record = MeasurementRecord(doc["n"], np.array(doc["a"]))
        gap = abs(min_purity(record).p_min - qp_min_purity(record).objective)
        tolerance = QP_TOLERANCE
    elif kind == "entropy":
        record = MeasurementRecord(doc["n"], np.array(doc["a"]))
        gap = abs(entropy_max(record) - max_entropy_numeric(record)[1])
        tolerance = ENTROPY_TOLERANCE
    elif kind == "integrator":
        graph = GraphSpec.preset(f"path-{doc['n']}")
        noise = NoiseParams.from_gamma_t(doc["gamma_t"])
        rho = master_equation_evolve(graph, gamma=1.0, t=doc["gamma_t"])
        gap = float(
            np.abs(twirl(rho, graph).values - dephased_coefficients(graph, noise).values).max()
        )
        tolerance = INTEGRATOR_TOLERANCE
    else:
        raise MalformedInput("kind", f"unknown instance kind {kind!r}")
    return {"kind": kind, "gap": gap, "tolerance": tolerance, "ok": gap <= tolerance}


def cmd_oracle_check(args) -> int:
    if args.input:
        doc, _ = _load_json(args.input)
        result = replay_instance(doc)
        sys.stdout.write(_json_text(result))
        return 0 if result["ok"] else 3
    if not (1 <= args.n_min <= args.n_max <= 8):
        print("error: need 1 <= --n-min <= --n-max <= 8", file=sys.stderr)
        return 1
    summary = run_oracle_trials(args.trials, args.n_min, args.n_max, args.seed)
    failure = summary.pop("failure")
    if args.json:
        sys.stdout.write(_json_text(summary))
    else:
        print(f"trials = {summary['trials']}, n in [{args.n_min}, {args.n_max}], seed = {args.seed}")
        print(f"qp         max |closed - numeric| = {summary['qp']['max_abs_gap']:.3e} (tol {QP_TOLERANCE:.0e})")
        print(f"entropy    max |closed - numeric| = {summary['entropy']['max_abs_gap']:.3e} (tol {ENTROPY_TOLERANCE:.0e})")
        print(f"integrator max coefficient dev    = {summary['integrator']['max_abs_dev']:.3e} (tol {INTEGRATOR_TOLERANCE:.0e})")
        b = summary["suboptimal_band"]
        if b["count"]:
            print(
                f"suboptimal band: {b['count']} records where the closed form is a "
                f"strict upper bound; max excess over the numeric optimum "
                f"{b['max_closed_minus_qp']:.3e} (informational)"
            )
        print("ok" if summary["ok"] else "TOLERANCE BREACH")
    if not summary["ok"] and failure is not None:
        _write_json(failure, args.failure_output)
        print(f"failing instance written to {args.failure_output}", file=sys.stderr)
    return 0 if summary["ok"] else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stabpurity",
        description="Purity and entropy bounds for graph states from stabilizer-generator measurements.",
    )
    parser.add_argument("--version", action="version", version=f"stabpurity {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate bounds from a measurement JSON file")
    p.add_argument("--input", required=True, help="measurement JSON file")
    p.add_argument("--output", help="write the report JSON here")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--no-certificate", action="store_true", help="skip the optimality certificate")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="simulate a dephased graph-state experiment")
    p.add_argument("--graph", required=True, help="preset (path-n, ring-n, star-n) or JSON path")
    p.add_argument("--gamma-t", type=float, required=True, help="dimensionless dephasing strength")
    p.add_argument("--shots", default="exact", help="shots per generator, or 'exact'")
    p.add_argument("--seed", type=int, default=0, help="sampling seed")
    p.add_argument("--output", required=True, help="measurement file; truth goes to *.truth.json")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("reproduce-tables", help="summary table for dephased paths, n = 2..4")
    p.add_argument("--json", action="store_true")
    p.add_argument("--output", help="also write the JSON form here")
    p.set_defaults(func=cmd_reproduce_tables)

    p = sub.add_parser("oracle-check", help="randomized closed-form vs numeric cross-checks")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-min", type=int, default=2)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--input", help="replay a serialized failing instance instead")
    p.add_argument(
        "--failure-output",
        default="oracle-failure.json",
        help="where to dump the first failing instance",
    )
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
