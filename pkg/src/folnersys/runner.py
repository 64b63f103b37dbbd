"""Task execution binding the library modules to config files."""
from __future__ import annotations

import time
from fractions import Fraction
from typing import Optional

from . import __version__
from .cache import ResultCache, digest
from .config import ExperimentConfig, Workspace
from .cylinders import CylinderSpec, additivity_check, furstenberg_report, invariance_defect
from .density import (
    density_at, extract_subsequence, intersection_count,
    pair_correlation_fft, upper_density,
)
from .errors import ConfigError, NoConvergentSubsequenceError
from .moments import accordance_check, exponential_oracle, scheme_normalization, weighted_moment
from .oracles import verify_correspondence
from .spectrum import compare_pairs, correlation_spectrum


def frac(x) -> dict:
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator, "dec": f"{float(x):.12g}"}
    return {"dec": f"{float(x):.12g}"}


def _element(group, node):
    return tuple(node) if isinstance(node, list) else int(node)


def _query(group, node):
    return tuple(_element(group, g) for g in node)


def _schedule(task, cfg):
    from .config import _build_schedule
    return _build_schedule(task["schedule"]) if "schedule" in task else cfg.schedule


def run_task(ws: Workspace, task: dict, cfg: ExperimentConfig) -> dict:
    kind = task["task"]
    group = cfg.group
    f = cfg.folner

    if kind == "density":
        E = ws.set_spec(task["set"])
        q = _query(group, task.get("shifts", [group.identity()]))
        N = int(task["N"])
        count = intersection_count(E, q, f, N)
        return {"count": count, "size": f.size(N), "density": frac(Fraction(count, f.size(N)))}

    if kind == "upper_density":
        E = ws.set_spec(task["set"])
        tau = Fraction(str(task.get("tau", cfg.tolerances["tau"])))
        est, attaining = upper_density(E, f, _schedule(task, cfg), tol=tau)
        return {"estimate": frac(est), "attaining": attaining}

    if kind == "subsequence":
        E = ws.set_spec(task["set"])
        queries = [_query(group, q) for q in task["queries"]]
        try:
            sub = extract_subsequence(E, queries, f, _schedule(task, cfg), float(task["eps"]))
            return {"subsequence": sub, "passed": True}
        except NoConvergentSubsequenceError as e:
            return {"subsequence": None, "error": str(e), "passed": False}

    if kind == "pair_correlation":
        E = ws.set_spec(task["set"])
        counts = pair_correlation_fft(E, f, int(task["N"]), int(task["H"]))
        return {"counts": {str(h): c for h, c in sorted(counts.items())}}

    if kind == "cylinders":
        E = ws.set_spec(task["set"])
        table = furstenberg_report(
            E, f, int(task["radius"]), int(task["depth"]), _schedule(task, cfg),
            cylinder_cap=cfg.caps["cylinders"],
            subsequence_eps=float(task.get("eps", 0.05)),
            collect_patterns=bool(task.get("patterns", False)),
        )
        return table.to_dict()

    if kind == "additivity":
        E = ws.set_spec(task["set"])
        C = CylinderSpec.make(group, {
            _element(group, h): int(e) for h, e in task.get("cylinder", [])})
        ok, residual = additivity_check(
            E, C, _element(group, task["element"]), f, int(task["N"]))
        return {"ok": ok, "residual": frac(residual), "passed": ok}

    if kind == "invariance":
        E = ws.set_spec(task["set"])
        C = CylinderSpec.make(group, {
            _element(group, h): int(e) for h, e in task.get("cylinder", [])})
        g = _element(group, task["shift"])
        N = int(task["N"])
        value = invariance_defect(E, C, g, f, N)
        return {"defect": frac(value), "folner_defect": frac(f.defect(N, g))}

    if kind == "verify":
        sysname = task["system"]
        system = ws.system(sysname)
        queries = [_query(group, q) for q in task["queries"]]
        report = verify_correspondence(
            system, queries, f, _schedule(task, cfg),
            x0=task.get("x0", 0), seed=int(task.get("seed", cfg.seed or 0)),
        )
        out = report.to_dict()
        out["passed"] = report.passed
        return out

    if kind == "spectrum":
        E = ws.set_spec(task["set"])
        spec = correlation_spectrum(
            E, f, int(task["depth"]), int(task["radius"]), _schedule(task, cfg))
        return {"rows": spec.to_rows(), "final_N": spec.final_N}

    if kind == "compare":
        p1 = (ws.set_spec(task["set1"]), f)
        p2 = (ws.set_spec(task["set2"]), f)
        verdict = compare_pairs(
            p1, p2, int(task["depth"]), int(task["radius"]),
            _schedule(task, cfg), float(task["eps"]))
        out = verdict.to_dict()
        if "expect" in task:
            out["passed"] = verdict.verdict == task["expect"]
        return out

    if kind == "moments":
        family = [ws.function(n) for n in task["family"]]
        scheme = ws.scheme(task.get("scheme", next(iter(cfg.schemes), None)) or "")
        N = int(task["N"])
        rows = []
        for qnode in task["queries"]:
            q = [(int(i), bool(c), _element(group, g)) for i, c, g in qnode]
            value = weighted_moment(family, q, scheme, N)
            row = {"query": qnode, "re": value.real, "im": value.imag}
            if "oracle_thetas" in task:
                o = exponential_oracle([float(t) for t in task["oracle_thetas"]], q, scheme)
                row["oracle"] = {"re": o.real, "im": o.imag}
                row["deviation"] = abs(value - o)
            rows.append(row)
        return {"rows": rows}

    if kind == "accordance":
        family = [ws.function(n) for n in task["family"]]
        scheme = ws.scheme(task["scheme"])
        queries = [
            [(int(i), bool(c), _element(group, g)) for i, c, g in qnode]
            for qnode in task["queries"]
        ]
        rows = accordance_check(
            family, queries, scheme, _schedule(task, cfg), float(task["eps"]),
            conj_depth=int(task.get("conj_depth", 3)))
        return {
            "rows": [
                {
                    "query": [[i, c, list(g) if isinstance(g, tuple) else g]
                              for i, c, g in r.query],
                    "accordant": r.accordant,
                    "oscillations": {
                        "".join("c" if b else "." for b in pat): osc
                        for pat, osc in r.oscillations.items()
                    },
                }
                for r in rows
            ],
            "passed": all(r.accordant for r in rows) if task.get("expect", True) else
                      not all(r.accordant for r in rows),
        }

    if kind == "normcheck":
        scheme = ws.scheme(task["scheme"])
        N = int(task["N"])
        value = scheme_normalization(scheme, N)
        out = {"value": frac(value)}
        if "tol" in task:
            out["passed"] = abs(float(value) - 1.0) <= float(task["tol"])
        return out

    raise ConfigError(f"unknown task {kind!r}")


def run(cfg: ExperimentConfig, out_dir: Optional[str] = None, use_cache: bool = True,
        threads: int = 1) -> dict:
    """Execute every task; returns the full report dict, assembled in task
    order regardless of completion order.

    The report's exit_code is 0 when all verdict-bearing tasks passed,
    1 otherwise (config and cap errors raise instead).
    """
    ws = Workspace(cfg)
    shared = {
        "group": {"kind": cfg.group.kind, "d": cfg.group.d},
        "folner": {"shape": cfg.folner.shape, "start": cfg.folner.start,
                   "anchor": list(cfg.folner.anchor)},
        "schedule": cfg.schedule,
        "seed": cfg.seed,
        "sets": cfg.sets, "systems": cfg.systems,
        "schemes": cfg.schemes, "functions": cfg.functions,
        "version": __version__,
    }
    cache = ResultCache(f"{out_dir}/.cache") if (out_dir and use_cache) else None
    config_digest = digest(shared)

    def execute(item):
        i, task = item
        # each worker resolves names in its own workspace; specs are
        # immutable so duplicated construction is only a time cost
        local_ws = ws if threads <= 1 else Workspace(cfg)
        key = digest({"config": shared, "task": task})
        t0 = time.perf_counter()
        cached = cache.get(key) if cache else None
        if cached is not None:
            value, hit = cached, True
        else:
            value, hit = run_task(local_ws, task, cfg), False
            if cache:
                cache.put(key, value)
        return {
            "index": i, "task": task, "key": key,
            "cache_hit": hit, "seconds": round(time.perf_counter() - t0, 6),
            "result": value,
        }

    items = list(enumerate(cfg.tasks))
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(execute, items))
    else:
        results = [execute(it) for it in items]
    all_passed = all(r["result"].get("passed") is not False for r in results)
    return {
        "version": __version__,
        "config_digest": config_digest,
        "tasks": results,
        "exit_code": 0 if all_passed else 1,
    }
