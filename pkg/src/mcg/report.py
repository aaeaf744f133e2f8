"""Report rendering: human text, stable JSON, delimited rows, figures.

The JSON schema is stable across runs: identical inputs produce byte
identical output except for the two clock fields (``timestamp`` and
``wall_time_s``). Figures are rendered with matplotlib when a report
directory is requested; the library degrades to text/JSON-only when
matplotlib is unavailable.
"""

from __future__ import annotations

import csv
import io
import json
import time
from pathlib import Path

from .replay import ReplayReport
from .script import CONVENTIONS_TEXT

_VERDICT_COLORS = {
    "ProvedEqual": "#2a7e43",
    "Yes": "#2a7e43",
    "bound": "#7a7a7a",
    "Unknown": "#c98a00",
    "ProvedDistinct": "#b3262a",
    "No": "#b3262a",
    "error": "#b3262a",
    "NotAnInvolution": "#b3262a",
}


def render_text(reports: list[ReplayReport]) -> str:
    out = io.StringIO()
    print(f"conventions: {CONVENTIONS_TEXT}", file=out)
    for rep in reports:
        print(file=out)
        print(
            f"== {rep.script}  model {rep.model}  n={rep.n}  "
            f"budget={rep.budget}  window={rep.window}",
            file=out,
        )
        for st in rep.statements:
            mark = "ok  " if st.ok else "FAIL"
            oracle = f"  oracle={st.oracle}" if st.oracle else ""
            budget = f"  budget={st.budget_used}" if st.budget_used else ""
            print(f"  [{st.line:4}] {mark} {st.verdict:<14} {st.statement}{oracle}{budget}", file=out)
            if st.witness and not st.ok:
                print(f"         witness: {st.witness}", file=out)
        if rep.unknowns:
            lines = ", ".join(str(s.line) for s in rep.unknowns)
            print(f"  unknown verdicts at lines: {lines} (not assumed; see oracle column)", file=out)
        verdictline = "PASS" if rep.passed else f"FAIL ({len(rep.failures)} failing statements)"
        print(f"  RESULT {verdictline}  ({len(rep.statements)} statements, {rep.wall_s:.2f} s)", file=out)
    overall = all(r.passed for r in reports)
    print(file=out)
    print(f"OVERALL {'PASS' if overall else 'FAIL'}", file=out)
    return out.getvalue()


def report_json(reports: list[ReplayReport]) -> dict:
    return {
        "conventions": CONVENTIONS_TEXT,
        "result": "PASS" if all(r.passed for r in reports) else "FAIL",
        "scripts": [
            {
                "script": rep.script,
                "model": rep.model,
                "n": rep.n,
                "budget": rep.budget,
                "window": rep.window,
                "result": "PASS" if rep.passed else "FAIL",
                "statements": [st.json_fields() for st in rep.statements],
            }
            for rep in reports
        ],
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "wall_time_s": round(sum(r.wall_s for r in reports), 3),
    }


def render_json(reports: list[ReplayReport]) -> str:
    return json.dumps(report_json(reports), indent=2, sort_keys=True) + "\n"


def write_csv(reports: list[ReplayReport], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["script", "n", "index", "line", "kind", "verdict", "ok", "budget_used", "oracle", "statement"]
        )
        for rep in reports:
            for st in rep.statements:
                writer.writerow(
                    [
                        rep.script,
                        rep.n,
                        st.index,
                        st.line,
                        st.kind,
                        st.verdict,
                        int(st.ok),
                        st.budget_used,
                        st.oracle,
                        st.statement,
                    ]
                )


def write_figures(reports: list[ReplayReport], outdir: Path) -> list[Path]:
    """Per-script budget/verdict charts plus an overall verdict summary."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:  # figures are an optional nicety
        return []

    written: list[Path] = []
    for rep in reports:
        stem = Path(rep.script).stem + (f"-n{rep.n}" if rep.n > 2 else "")
        asserts = [st for st in rep.statements if st.kind != "Let"]
        if not asserts:
            continue
        fig, ax = plt.subplots(figsize=(8, max(2.5, 0.22 * len(asserts))))
        ys = range(len(asserts))
        vals = [max(st.budget_used, 1) for st in asserts]
        colors = [_VERDICT_COLORS.get(st.verdict, "#555555") for st in asserts]
        ax.barh(list(ys), vals, color=colors)
        ax.set_yticks(list(ys))
        ax.set_yticklabels([f"{st.line}: {st.kind}" for st in asserts], fontsize=6)
        ax.invert_yaxis()
        ax.set_xscale("log")
        ax.set_xlabel("rewrite applications (log)")
        ax.set_title(f"{rep.script} on {rep.model}: per-statement budget and verdict")
        fig.tight_layout()
        path = outdir / f"{stem}-budget.png"
        fig.savefig(path, dpi=140)
        plt.close(fig)
        written.append(path)

    counts: dict[str, int] = {}
    for rep in reports:
        for st in rep.statements:
            counts[st.verdict] = counts.get(st.verdict, 0) + 1
    fig, ax = plt.subplots(figsize=(5, 3))
    names = sorted(counts)
    ax.bar(names, [counts[k] for k in names], color=[_VERDICT_COLORS.get(k, "#555") for k in names])
    ax.set_ylabel("statements")
    ax.set_title("verdicts across all replays")
    fig.tight_layout()
    path = outdir / "verdict-summary.png"
    fig.savefig(path, dpi=140)
    plt.close(fig)
    written.append(path)
    return written


def write_report_dir(reports: list[ReplayReport], outdir: str | Path) -> list[Path]:
    """JSON + CSV + figures, side by side."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    files = [out / "report.json", out / "statements.csv"]
    (out / "report.json").write_text(render_json(reports), encoding="utf-8")
    write_csv(reports, out / "statements.csv")
    files.extend(write_figures(reports, out))
    return files
