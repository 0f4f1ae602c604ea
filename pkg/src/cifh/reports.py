"""Report rendering: canonical JSON documents, sweep CSV, and curve figures.

Everything here is deterministic for a fixed (instance, options) pair: no
timestamps, no environment probes, floats rendered by their shortest
round-trip repr.  PNG output pins its metadata so reruns on the same
matplotlib build are byte-identical.
"""

from __future__ import annotations

import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from . import __version__
from .gaussian import purity
from .model import CifhInstance, instance_digest, serialize_instance
from .pipeline import CertifiedSolution, SweepResult

CSV_HEADER = "p_class,energy_class,energy_quad,energy_total,ratio"


def _dump(document: dict) -> str:
    return json.dumps(document, ensure_ascii=False, separators=(", ", ": "), indent=1)


def solve_report(
    inst: CifhInstance, solution: CertifiedSolution, options: dict | None = None
) -> dict:
    """Assemble the solve report document (stable key order)."""
    classical = None
    if solution.classical is not None:
        classical = {
            "assignment": list(solution.classical.assignment),
            "value": solution.classical.value,
            "method": solution.classical.method,
            "exact": solution.classical.exactness.exact,
            "expected_ratio": solution.classical.exactness.expected_ratio,
        }
    return {
        "version": 1,
        "kind": "solve",
        "generator": f"cifh {__version__}",
        "instance_digest": instance_digest(inst),
        "instance": json.loads(serialize_instance(inst)),
        "options": dict(options or {}),
        "result": {
            "method": solution.method,
            "p_class": solution.p_class,
            "energy_class": solution.energy_class,
            "energy_quad": solution.energy_quad,
            "energy_total": solution.energy_total,
            "ratio_bound": solution.ratio_bound,
            "exact_ratio": solution.exact_ratio,
            "occupations": list(solution.gamma.occupations()),
            "purity_defect": purity(solution.gamma).defect,
            "quad_value": solution.quad.value if solution.quad is not None else None,
            "classical": classical,
        },
        "certificate": dict(solution.ratio_derivation),
    }


def render_report(report: dict) -> str:
    return _dump(report) + "\n"


def sweep_csv(result: SweepResult) -> str:
    """Render sweep rows under the stable header (repr-precision floats)."""
    lines = [CSV_HEADER]
    for row in result.rows:
        lines.append(
            ",".join(
                repr(v)
                for v in (
                    row.p_class,
                    row.energy_class,
                    row.energy_quad,
                    row.energy_total,
                    row.ratio,
                )
            )
        )
    return "\n".join(lines) + "\n"


def sweep_figure(result: SweepResult, path: str, title: str = "") -> None:
    """Render the sweep curve: energies on the left axis, certified ratio on
    the right, saved as a PNG with pinned metadata."""
    p = [row.p_class for row in result.rows]
    fig, ax = plt.subplots(figsize=(7.0, 4.6))
    ax.plot(p, [r.energy_total for r in result.rows], "o-", color="C0",
            label="energy_total")
    ax.plot(p, [r.energy_class for r in result.rows], "s--", color="C1",
            markersize=4, label="energy_class")
    ax.plot(p, [r.energy_quad for r in result.rows], "^--", color="C2",
            markersize=4, label="energy_quad")
    ax.set_xlabel("classical blend weight p")
    ax.set_ylabel("energy")
    ax.grid(alpha=0.3)
    ax2 = ax.twinx()
    ax2.plot(p, [r.ratio for r in result.rows], ":", color="C3", label="certified ratio")
    ax2.set_ylabel("certified ratio")
    handles1, labels1 = ax.get_legend_handles_labels()
    handles2, labels2 = ax2.get_legend_handles_labels()
    ax.legend(handles1 + handles2, labels1 + labels2, loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150, metadata={"Software": f"cifh {__version__}"})
    plt.close(fig)


def oracle_report(inst: CifhInstance, spectrum, extra: dict | None = None) -> str:
    """Plain-text oracle summary: extremal eigenvalues, the gap below the
    maximum, per-sector maxima, and any extra labeled values."""
    lines = [
        f"n = {inst.n}",
        f"convention = {inst.convention.value}",
        f"lambda_max = {spectrum.lambda_max!r}",
        f"lambda_min = {spectrum.lambda_min!r}",
        f"gap_below_max = {spectrum.gap_below_max!r}",
    ]
    for n_particles, value in enumerate(spectrum.per_sector_max):
        lines.append(f"sector_max[N={n_particles}] = {float(value)!r}")
    if inst.particle_target is not None:
        value = spectrum.avg_q_max(inst.particle_target)
        lines.append(f"avg_q_max[q={inst.particle_target}] = {float(value)!r}")
    for key, value in (extra or {}).items():
        lines.append(f"{key} = {float(value)!r}")
    return "\n".join(lines) + "\n"
