"""
File outputs: CSV tables, the markdown summary, and JSON reports.

CSV values are written with 12 significant digits so every table round-trips
through :func:`read_csv_table`.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .schemes import DescentTrace, SharedScheme
from .simulation import SimResult
from .study import ScenarioResult

CSV_DIGITS = 12


def fmt(x: float) -> str:
    return f"{x:.{CSV_DIGITS}g}"


def _write_csv(path: Path, header: list[str], rows: list[list]):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def read_csv_table(path) -> tuple[list[str], list[dict[str, str]]]:
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        return list(reader.fieldnames or []), list(reader)


def relativity_rows(result: ScenarioResult) -> tuple[list[str], list[list]]:
    z = result.config.rule.levels
    labels = result.config.portfolio.labels
    header = ["scheme", "class"] + [f"level_{l}" for l in range(1, z + 1)]
    rows = []
    for name, scheme in result.schemes.items():
        if isinstance(scheme, SharedScheme):
            rows.append([name, ""] + list(map(float, scheme.gamma)))
        else:
            for label, row in zip(labels, scheme.gamma):
                rows.append([name, label] + list(map(float, row)))
    rows.append(["P(L=l)", ""] + list(map(float, result.levels.marginal)))
    for label, row in zip(labels, result.levels.conditional):
        rows.append(["P(L=l|class)", label] + list(map(float, row)))
    return header, rows


def read_relativities(path) -> dict[tuple[str, str], np.ndarray]:
    header, rows = read_csv_table(path)
    cols = [h for h in header if h.startswith("level_")]
    return {(r["scheme"], r["class"]): np.array([float(r[c]) for c in cols]) for r in rows}


def priori_rows(result: ScenarioResult) -> tuple[list[str], list[list]]:
    labels = result.config.portfolio.labels
    header = ["scheme"] + [f"class_{lab}" for lab in labels]
    rows = [["lambda"] + list(map(float, result.config.portfolio.rates))]
    for name, scheme in result.schemes.items():
        rows.append([name] + list(map(float, scheme.xi)))
    return header, rows


def _md(x, digits=3):
    if x is None:
        return "-"
    if isinstance(x, float) and np.isnan(x):
        return "-"
    return f"{x:.{digits}f}"


def metrics_markdown(result: ScenarioResult) -> str:
    labels = result.config.portfolio.labels
    deltas = result.deltas()
    head = (["Method"] + [f"E[γ(L) \\| {lab}]" for lab in labels]
            + ["FIX", "ΔFIX (% of max)", "ΔFIX (raw)", "HMSE", "ΔHMSE (% of max)", "ΔHMSE (raw)"])
    lines = [f"# {result.config.name}", ""]
    if result.config.weights_approximated:
        lines += ["_Class weights approximated; FIX and HMSE are indicative only._", ""]
    lines += ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
    footnote = False
    for name, m in result.metrics.items():
        d = deltas.get(name, {})
        fix_cell = _md(m.fix_or_zero, 4)
        if not m.fix_defined:
            fix_cell += "†"
            footnote = True
        cells = ([name.upper()] + [_md(float(v)) for v in m.relativity_means]
                 + [fix_cell,
                    _md(d.get("fix_pct"), 1), _md(d.get("fix_raw"), 4),
                    _md(m.hmse, 4),
                    _md(d.get("hmse_pct"), 1), _md(d.get("hmse_raw"), 4)])
        lines.append("| " + " | ".join(cells) + " |")
    lines.append("")
    if footnote:
        lines += ["† pure relativity has zero variance; FIX is undefined and shown as 0.", ""]
    if result.alt_fairness is not None:
        lines += [f"Var(E[Λ|L]) / Var(Λ) = {result.alt_fairness:.4f} (independent of the relativity table)", ""]
    return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return None if not np.isfinite(x) else x
    if isinstance(x, np.integer):
        return int(x)
    return x


def dump_json(obj, path: Path):
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")


def scenario_report(result: ScenarioResult) -> dict:
    schemes = {}
    for name, scheme in result.schemes.items():
        entry = {"xi": scheme.xi, "gamma": scheme.gamma}
        entry.update(result.metrics[name].to_dict())
        schemes[name] = entry
    report = {
        "scenario": result.config.to_dict(),
        "level_law": {"marginal": result.levels.marginal, "conditional": result.levels.conditional},
        "schemes": schemes,
        "deltas": result.deltas(),
        "alt_fairness": result.alt_fairness,
    }
    if result.trace is not None:
        report["pfos_trace"] = {"converged": result.trace.converged, "cycles": result.trace.cycles,
                                "steps": len(result.trace)}
    if result.config.weights_approximated:
        report["note"] = "weights approximated"
    return report


def write_scenario(result: ScenarioResult, out: Path) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    header, rows = relativity_rows(result)
    _write_csv(out / "relativities.csv", header, rows)
    header, rows = priori_rows(result)
    _write_csv(out / "priori.csv", header, rows)
    (out / "metrics.md").write_text(metrics_markdown(result))
    dump_json(scenario_report(result), out / "report.json")
    written += [out / n for n in ("relativities.csv", "priori.csv", "metrics.md", "report.json")]
    return written


def trace_rows(trace: DescentTrace) -> tuple[list[str], list[list]]:
    K = len(trace.steps[0].xi)
    z = len(trace.steps[0].gamma)
    header = (["step", "pair", "fix", "fix_defined", "hmse"]
              + [f"xi_{k}" for k in range(1, K + 1)] + [f"gamma_{l}" for l in range(1, z + 1)])
    rows = []
    for i, s in enumerate(trace.steps, start=1):
        rows.append([i, s.label, 0.0 if s.fix is None else float(s.fix), int(s.fix is not None),
                     float(s.hmse)] + list(map(float, s.xi)) + list(map(float, s.gamma)))
    return header, rows


def write_trace(trace: DescentTrace, out: Path) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    header, rows = trace_rows(trace)
    _write_csv(out / "trace.csv", header, rows)
    return out / "trace.csv"


def _z(est_value, se, ref):
    if se is None or not np.isfinite(se) or se == 0:
        return None
    return (est_value - ref) / se


def simulation_report(result: ScenarioResult, sim: SimResult) -> dict:
    """Analytic-versus-empirical comparison with z-scores."""
    law = result.levels
    report = {
        "scenario": result.config.name,
        "simulation": sim.config.to_dict(),
        "class_counts": sim.class_counts,
        "level_law": {
            "marginal": {
                "analytic": law.marginal, "empirical": sim.marginal_law, "se": sim.marginal_law_se,
                "z": [_z(e, s, a) for e, s, a in zip(sim.marginal_law, sim.marginal_law_se, law.marginal)],
            },
            "conditional": {
                "analytic": law.conditional, "empirical": sim.level_law, "se": sim.level_law_se,
                "z": [[_z(e, s, a) for e, s, a in zip(er, sr, ar)]
                      for er, sr, ar in zip(sim.level_law, sim.level_law_se, law.conditional)],
            },
        },
    }
    if result.alt_fairness is not None:
        report["alt_fairness"] = {"analytic": result.alt_fairness, "empirical": sim.alt_fairness.value,
                                  "se": sim.alt_fairness.se,
                                  "z": _z(sim.alt_fairness.value, sim.alt_fairness.se, result.alt_fairness)}
    schemes = {}
    for name, est in sim.schemes.items():
        m = result.metrics[name]
        fix_ref = m.fix_or_zero
        schemes[name] = {
            "relativity_means": [
                {"analytic": float(a), "empirical": e.value, "se": e.se, "z": _z(e.value, e.se, a)}
                for a, e in zip(m.relativity_means, est.relativity_means)
            ],
            "fix": {"analytic": fix_ref, "empirical": est.fix.value, "se": est.fix.se,
                    "z": _z(est.fix.value, est.fix.se, fix_ref)},
            "hmse": {"analytic": m.hmse, "empirical": est.hmse.value, "se": est.hmse.se,
                     "z": _z(est.hmse.value, est.hmse.se, m.hmse)},
        }
    report["schemes"] = schemes
    return report
