"""Render a run directory into JSON, CSV tables and figures.

Everything here reads the per-file JSON written by the pipeline, so a
report can be rebuilt at any time with ``gauntlet report <run-dir>``.
"""

from __future__ import annotations

import csv
import statistics
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .diehard import DiehardTestId, intel_pass  # noqa: E402
from .evaluation import FAIL, PASS, UNIFORMITY_THRESHOLD, uniformity  # noqa: E402
from .nist import ALL_TESTS as NIST_TESTS  # noqa: E402
from .pipeline import SCHEMA_VERSION, load_run, write_json  # noqa: E402

HIST_RANGES = [f"{i / 10:.1f} -- {(i + 1) / 10:.1f}" for i in range(10)]


def fmt(value, digits: int = 6) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float):
        return f"{value:.{digits}f}"
    return str(value)


def pvalues_summary(pvalues: list[float]) -> dict | None:
    if not pvalues:
        return None
    return {"count": len(pvalues), "min": min(pvalues), "max": max(pvalues),
            "mean": statistics.fmean(pvalues), "median": statistics.median(pvalues)}


def nist_objects(record: dict) -> list[dict]:
    nist = record.get("nist")
    if not nist:
        return []
    out = []
    for name, entry in nist["tests"].items():
        v = entry["verdict"]
        pooled = [p for ps in entry["pvalues"] if ps for p in ps]
        out.append({
            "test": name,
            "pvalues_summary": pvalues_summary(pooled),
            "proportion": v["proportion"],
            "min_pass_rate": v["min_pass_rate"],
            "uniformity_chi2": v["uniformity_chi2"],
            "uniformity_p": v["uniformity_p"],
            "verdict": v["verdict"],
        })
    return out


def diehard_objects(record: dict) -> list[dict]:
    die = record.get("diehard")
    if not die:
        return []
    out = []
    for name, entry in die["tests"].items():
        pooled = [p for ps in entry["pieces"] for p in ps]
        u = uniformity(pooled) if pooled else None
        worst = entry["worst_case"]
        out.append({
            "test": name,
            "pvalues_summary": pvalues_summary(pooled),
            "proportion": sum(intel_pass(p) for p in pooled) / len(pooled) if pooled else None,
            "min_pass_rate": None,
            "uniformity_chi2": u.chi2 if u else None,
            "uniformity_p": u.pvalue if u else None,
            "verdict": (PASS if intel_pass(worst) else FAIL) if worst is not None else None,
            "worst_case": worst,
            "score": entry["score"],
            "max_score": entry["max_score"],
        })
    return out


def build_report(results: dict[str, dict]) -> dict:
    files = {}
    for label, rec in results.items():
        files[label] = {
            "status": rec["status"],
            "error": rec["error"],
            "source": rec.get("source"),
            "build": {k: v for k, v in (rec.get("build") or {}).items() if k != "files"} or None,
            "nist": nist_objects(rec),
            "diehard": diehard_objects(rec),
            "diehard_uniformity": None if not rec.get("diehard") else {
                "histogram": rec["diehard"]["histogram"],
                "chi2": rec["diehard"]["uniformity_chi2"],
                "p": rec["diehard"]["uniformity_p"],
            },
        }
    return {"schema": SCHEMA_VERSION, "files": files}


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(c) for c in row])


def write_tables(results: dict[str, dict], out: Path) -> list[Path]:
    labels = list(results)
    built = {k: r["build"] for k, r in results.items() if r.get("build")}
    nist = {k: r["nist"] for k, r in results.items() if r.get("nist")}
    die = {k: r["diehard"] for k, r in results.items() if r.get("diehard")}
    written = []

    path = out / "table2.csv"
    rows = []
    for k in labels:
        b = built.get(k) or {}
        rows.append([k, results[k]["status"], b.get("test_bytes"), b.get("sequences"),
                     b.get("pieces"), b.get("compression_ratio")])
    _write_csv(path, ["File Name", "Status", "Size (Bytes)", "Number of Sequences",
                      "Number of Pieces", "Compression Ratio"], rows)
    written.append(path)

    path = out / "table3.csv"
    rows = []
    for k, n in nist.items():
        entry = n["tests"].get("Frequency")
        if not entry:
            continue
        v = entry["verdict"]
        hist = v["histogram"] or [None] * 10
        rows.append([k, *hist, v["uniformity_p"], v["proportion"], v["verdict"],
                     v["pvalue_count"], v["min_pass_rate"]])
    _write_csv(path, ["File", *[f"C{i}" for i in range(1, 11)], "P-VALUE", "PROPORTION",
                      "Result", "Sample Size", "Minimum Pass Rate"], rows)
    written.append(path)

    path = out / "table4.csv"
    header = ["Test Name"]
    for k in nist:
        header += [f"{k} P-VALUE", f"{k} PROPORTION", f"{k} Result"]
    rows = []
    for t in NIST_TESTS:
        row = [t.value]
        for n in nist.values():
            entry = n["tests"].get(t.value)
            v = entry["verdict"] if entry else {}
            row += [v.get("uniformity_p"), v.get("proportion"), v.get("verdict")]
        rows.append(row)
    _write_csv(path, header, rows)
    written.append(path)

    die_tests = [t.value for t in DiehardTestId
                 if any(t.value in d["tests"] for d in die.values())]

    path = out / "table6.csv"
    rows = [[t, *[d["tests"].get(t, {}).get("worst_case") for d in die.values()]]
            for t in die_tests]
    _write_csv(path, ["Test Name", *die], rows)
    written.append(path)

    path = out / "table7.csv"
    rows = []
    for i, rng in enumerate(HIST_RANGES):
        row = [rng]
        for d in die.values():
            h = d["histogram"]
            row.append(round(100.0 * h[i] / sum(h), 6) if h else None)
        rows.append(row + [10.0])
    _write_csv(path, ["P-value range", *die, "Expected Percent"], rows)
    written.append(path)

    path = out / "table8.csv"
    rows = []
    for k, d in die.items():
        p = d["uniformity_p"]
        result = None if p is None else ("Success" if p >= UNIFORMITY_THRESHOLD else "Fail")
        rows.append([k, d["uniformity_chi2"], p, result])
    _write_csv(path, ["Test File", "Chi-Square", "P-VALUE", "Result"], rows)
    written.append(path)

    path = out / "table9.csv"
    rows = []
    totals = [0] * len(die)
    max_total = 0
    for t in die_tests:
        entries = [d["tests"].get(t) for d in die.values()]
        mx = next(e["max_score"] for e in entries if e)
        max_total += mx
        scores = [e["score"] if e else None for e in entries]
        totals = [a + (s or 0) for a, s in zip(totals, scores)]
        rows.append([t, mx, *scores])
    rows.append(["Total", max_total, *totals])
    _write_csv(path, ["Test Name", "Max Score", *die], rows)
    written.append(path)
    return written


def write_figures(results: dict[str, dict], out: Path) -> list[Path]:
    written = []
    built = {k: r["build"] for k, r in results.items() if r.get("build")}

    fig, ax = plt.subplots(figsize=(8, 4.5))
    for k, b in built.items():
        files = sorted((f for f in b["files"] if f["proportion_difference"] is not None),
                       key=lambda f: -f["input_bytes"])
        ax.plot(range(1, len(files) + 1), [f["proportion_difference"] for f in files],
                marker="o", markersize=3, label=k)
    ax.axhline(0.0, color="grey", linewidth=0.8)
    ax.set_xlabel("file (largest first)")
    ax.set_ylabel("1 - ones/zeros")
    ax.set_title("Proportion difference per compressed file")
    if built:
        ax.legend()
    path = out / "fig1_proportion_difference.png"
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    names = [k for k, b in built.items() if b["proportion_difference_stddev"] is not None]
    ax.bar(names, [built[k]["proportion_difference_stddev"] for k in names])
    ax.set_ylabel("sample standard deviation")
    ax.set_title("Spread of proportion differences")
    path = out / "fig2_stddev.png"
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(8, 4.5))
    die = {k: r["diehard"] for k, r in results.items()
           if r.get("diehard") and r["diehard"]["histogram"]}
    width = 0.8 / max(1, len(die))
    for j, (k, d) in enumerate(die.items()):
        h = d["histogram"]
        ax.bar([i + j * width for i in range(10)], [100.0 * c / sum(h) for c in h],
               width=width, label=k, align="edge")
    ax.axhline(10.0, color="grey", linestyle="--", linewidth=0.8)
    ax.set_xticks([i + 0.4 for i in range(10)])
    ax.set_xticklabels([f"{i / 10:.1f}" for i in range(10)])
    ax.set_xlabel("P-value bin (lower edge)")
    ax.set_ylabel("percent of Diehard P-values")
    if die:
        ax.legend()
    path = out / "fig_pvalue_histogram.png"
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    written.append(path)
    return written


def write_report(run_dir) -> dict:
    run_dir = Path(run_dir)
    results = load_run(run_dir)
    report = build_report(results)
    write_json(run_dir / "report.json", report)
    write_tables(results, run_dir)
    write_figures(results, run_dir)
    return report
