"""End-to-end runs: load a dataset, run one algorithm, write machine-readable reports."""

from __future__ import annotations

import contextlib
import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import appendix_example, brute_force_opt, deflate_greedy
from .errors import InvalidInput, SpcaError
from .io import PSD, Dataset, load_dense_csv, load_uci_bow, synthetic_counts
from .linalg import column_variances, sym_eig_truncated
from .sketch import GAUSSIAN_SAMPLER, SketchSpec, apply_sketch, sketch_error_term, sketch_factor
from .solver import SolverConfig, default_workers, solve_multi_spca

JOINT = "Joint"
DEFLATE_TPOWER = "DeflateTPower"
DEFLATE_EXACT = "DeflateExact"
ORACLE = "Oracle"
ALGORITHMS = (JOINT, DEFLATE_TPOWER, DEFLATE_EXACT, ORACLE)


@dataclass
class RunSpec:
    """One experiment. ``time_budget`` is in seconds; ``sketch=None`` keeps the full spectrum."""

    dataset: Dataset
    algorithm: str = JOINT
    k: int = 2
    s: int = 2
    eps: float = 0.5
    sketch: SketchSpec | None = field(default_factory=lambda: SketchSpec("svd", 4))
    time_budget: float | None = None
    seed: int = 0
    output: str | None = None
    polish: bool = True
    antipodal_reduce: bool = True
    workers: int = field(default_factory=default_workers)
    center: bool | None = None
    tpower_iters: int = 200
    tpower_restarts: int = 20

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidInput(f"unknown algorithm {self.algorithm!r}; expected one of {', '.join(ALGORITHMS)}")
        if self.k < 1 or self.s < 1:
            raise InvalidInput("k and s must be positive")
        if not 0.0 < self.eps < 1.0:
            raise InvalidInput("eps must lie in (0, 1)")
        if self.s * self.k > self.dataset.dim:
            raise InvalidInput(f"s*k = {self.s * self.k} exceeds d = {self.dataset.dim}")
        if self.workers < 1:
            raise InvalidInput("workers must be >= 1")
        if self.time_budget is not None and self.time_budget < 0:
            raise InvalidInput("time budget must be nonnegative")

    def echo(self) -> dict:
        """Settings that determine the result (worker count and output path excluded)."""
        out = {
            "dataset": self.dataset.name,
            "algorithm": self.algorithm,
            "k": self.k,
            "s": self.s,
            "eps": self.eps,
            "seed": self.seed,
            "time_budget_ms": None if self.time_budget is None else round(self.time_budget * 1000.0, 3),
            "polish": self.polish,
            "antipodal_reduce": self.antipodal_reduce,
            "center": self.center if self.center is not None else (
                None if self.dataset.kind == PSD else self.dataset.center_default),
            "covariance_scaling": "given" if self.dataset.kind == PSD else "1/n",
        }
        if self.algorithm == DEFLATE_TPOWER:
            out["tpower"] = {"iters": self.tpower_iters, "restarts": self.tpower_restarts}
        return out


def resolve_dataset(ref: str, has_header: bool = False, vocab: str | None = None) -> Dataset:
    """Turn a dataset reference into a Dataset.

    Accepted forms: ``appendix:EPS,DELTA``, ``synthetic[:N,D,SEED]``,
    ``psd:PATH`` (CSV read as the covariance itself), ``bow:DOCWORD``
    (``vocab`` names the word list) or a plain CSV path of samples.
    """
    if ref.startswith("appendix:"):
        try:
            eps, delta = (float(v) for v in ref.split(":", 1)[1].split(","))
        except ValueError:
            raise InvalidInput(f"bad appendix reference {ref!r}, expected appendix:EPS,DELTA") from None
        A = appendix_example(eps, delta)
        return Dataset(f"appendix-{eps:g}-{delta:g}", A, PSD, None, {"format": "appendix", "eps": eps, "delta": delta})
    if ref == "synthetic" or ref.startswith("synthetic:"):
        args = ref.split(":", 1)[1].split(",") if ":" in ref else []
        try:
            vals = [int(v) for v in args]
        except ValueError:
            raise InvalidInput(f"bad synthetic reference {ref!r}, expected synthetic:N,D,SEED") from None
        keys = ["n", "d", "seed"][: len(vals)]
        return synthetic_counts(**dict(zip(keys, vals)))
    if ref.startswith("psd:"):
        return load_dense_csv(ref[4:], has_header, kind=PSD)
    if ref.startswith("bow:"):
        return load_uci_bow(ref[4:], vocab)
    ds = load_dense_csv(ref, has_header)
    if vocab is not None:
        with open(vocab) as fh:
            ds.vocabulary = [w.strip() for w in fh if w.strip()]
        ds.__post_init__()
    return ds


@contextlib.contextmanager
def stage(name: str):
    """Prefix errors raised inside the block with the pipeline stage."""
    try:
        yield
    except SpcaError as e:
        if not getattr(e, "stage", None):
            e.stage = name
            e.args = (f"[{name}] {e.args[0] if e.args else ''}",) + tuple(e.args[1:])
        raise


def _execute(spec: RunSpec, A):
    k, s = spec.k, spec.s
    extra = {"net_points_total": None, "net_points_examined": None, "guarantee_factor": None,
             "termination": "Complete", "sketch": None}
    if spec.algorithm == JOINT:
        with stage("sketch"):
            if spec.sketch is None:
                F = sym_eig_truncated(A)
                sk = None
            else:
                sk = apply_sketch(A, spec.sketch)
                F = sketch_factor(sk)
        cfg = SolverConfig(eps=spec.eps, k=k, s=s, time_budget=spec.time_budget, polish=spec.polish,
                           antipodal_reduce=spec.antipodal_reduce, seed=spec.seed, workers=spec.workers)
        with stage("solve"):
            rep = solve_multi_spca(F, A, cfg)
        X = rep.best
        extra.update(net_points_total=rep.net_points_total, net_points_examined=rep.net_points_examined,
                     guarantee_factor=rep.guarantee_factor, termination=rep.termination)
        if sk is not None:
            extra["sketch"] = {
                "method": sk.method,
                "r": sk.rank,
                "seed": sk.seed,
                "error_lambda1_bound": sk.error_lambda1,
                "error_term": sketch_error_term(sk, k),
            }
            if sk.method == "gauss":
                extra["sketch"]["sampler"] = GAUSSIAN_SAMPLER
    elif spec.algorithm == ORACLE:
        with stage("oracle"):
            res = brute_force_opt(A, k, s)
            X = res.components(A)
        extra["guarantee_factor"] = 1.0
        extra["instances_enumerated"] = res.instances_enumerated
    else:
        single = "exact" if spec.algorithm == DEFLATE_EXACT else "tpower"
        kw = {} if single == "exact" else {"iters": spec.tpower_iters, "restarts": spec.tpower_restarts,
                                           "seed": spec.seed}
        with stage("deflate"):
            X = deflate_greedy(A, k, s, single, **kw)
    return X, extra


def execute(spec: RunSpec) -> dict:
    """Run ``spec`` and return the report dictionary (nothing is written)."""
    t0 = time.perf_counter()
    with stage("load"):
        A = spec.dataset.covariance(spec.center)
    X, extra = _execute(spec, A)
    with stage("validate"):
        X.validate()
        per = column_variances(A, X)
    report = {
        "spec": spec.echo(),
        "objective": float(np.sum(per)),
        "per_component": [float(v) for v in per],
        "supports": [list(I) for I in X.supports],
        "values": [[float(v) for v in row] for row in X.values],
    }
    report.update(extra)
    report["elapsed_ms"] = (time.perf_counter() - t0) * 1000.0
    report["library_version"] = __version__
    order = ["spec", "objective", "per_component", "supports", "values", "net_points_total",
             "net_points_examined", "guarantee_factor", "elapsed_ms", "termination", "sketch",
             "library_version"]
    return {key: report[key] for key in order + [k for k in report if k not in order]}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def cumulative_variance(report: dict) -> list:
    """``[(j, sum of the first j per-component variances)]`` for j = 1..k."""
    return [(j + 1, float(c)) for j, c in enumerate(np.cumsum(report["per_component"]))]


def cumulative_csv(report: dict) -> str:
    return "".join(f"{j},{c!r}\n" for j, c in cumulative_variance(report))


def topics(report: dict, vocabulary) -> list:
    """Per component, ``(word, value)`` pairs by decreasing ``|value|`` (ties by variable index)."""
    out = []
    for sup, vals in zip(report["supports"], report["values"]):
        order = np.argsort(-np.abs(np.asarray(vals)), kind="stable")
        out.append([(vocabulary[sup[i]], float(vals[i])) for i in order])
    return out


def topics_text(topic_list) -> str:
    lines = []
    for j, words in enumerate(topic_list, start=1):
        lines.append(f"Topic {j}: " + ", ".join(w for w, _ in words))
    return "\n".join(lines) + "\n"


def run(spec: RunSpec) -> dict:
    """Execute and, if ``spec.output`` is set, write the report files.

    Next to ``<output>`` (JSON) go ``<stem>.cumvar.csv`` and, for datasets
    with a vocabulary, ``<stem>.topics.txt``.
    """
    report = execute(spec)
    if spec.output:
        with stage("write"):
            out = Path(spec.output)
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(report_json(report))
            out.with_suffix(".cumvar.csv").write_text(cumulative_csv(report))
            if spec.dataset.vocabulary is not None:
                out.with_suffix(".topics.txt").write_text(topics_text(topics(report, spec.dataset.vocabulary)))
    return report


COMPARE_FIELDS = ["algorithm", "objective", "per_component", "elapsed_ms", "guarantee_factor", "termination",
                  "eps", "sketch", "seed"]


def compare(specs, csv_path=None, json_path=None) -> list:
    """Run several algorithms on one dataset and tabulate them, one row per spec."""
    specs = list(specs)
    if not specs:
        raise InvalidInput("compare needs at least one spec")
    first = specs[0]
    for sp in specs[1:]:
        if sp.dataset is not first.dataset and sp.dataset.name != first.dataset.name:
            raise InvalidInput("compared specs must share the dataset")
        if (sp.k, sp.s) != (first.k, first.s):
            raise InvalidInput("compared specs must share k and s")
    rows = []
    for sp in specs:
        rep = execute(sp)
        sk = rep.get("sketch")
        rows.append({
            "algorithm": sp.algorithm,
            "objective": rep["objective"],
            "per_component": rep["per_component"],
            "elapsed_ms": rep["elapsed_ms"],
            "guarantee_factor": rep["guarantee_factor"],
            "termination": rep["termination"],
            "eps": sp.eps,
            "sketch": None if sk is None else f"{sk['method']}:{sk['r']}",
            "seed": sp.seed,
            "supports": rep["supports"],
        })
    if csv_path is not None:
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(COMPARE_FIELDS)
            for r in rows:
                w.writerow([";".join(repr(v) for v in r[f]) if f == "per_component" else
                            ("" if r[f] is None else r[f]) for f in COMPARE_FIELDS])
    if json_path is not None:
        Path(json_path).write_text(json.dumps(rows, indent=2) + "\n")
    return rows
