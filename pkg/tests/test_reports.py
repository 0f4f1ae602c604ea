"""Report serialization: JSON structure, CSV format, determinism."""

import json

from cifh import model, pipeline, reports
from cifh.oracle import exact_spectrum


def _solved():
    inst = model.heisenberg_line4()
    return inst, pipeline.solve(inst)


def test_solve_report_structure():
    inst, sol = _solved()
    rep = reports.solve_report(inst, sol, options={"oracle": "auto"})
    assert rep["kind"] == "solve"
    assert rep["version"] == 1
    assert rep["generator"].startswith("cifh ")
    assert rep["instance_digest"] == model.instance_digest(inst)
    # instance round-trips through the embedded serialization
    again = model.parse_instance(json.dumps(rep["instance"]))
    assert model.instance_digest(again) == rep["instance_digest"]
    res = rep["result"]
    assert res["energy_total"] == sol.energy_total
    assert res["ratio_bound"] == sol.ratio_bound
    assert len(res["occupations"]) == inst.n
    cert = rep["certificate"]
    assert cert["achieved"] == sol.energy_total
    assert cert["denominator"] >= cert["achieved"] - 1e-9
    assert rep["options"] == {"oracle": "auto"}


def test_render_report_is_json_and_deterministic():
    inst, sol = _solved()
    rep = reports.solve_report(inst, sol)
    txt = reports.render_report(rep)
    assert json.loads(txt) == rep
    assert reports.render_report(reports.solve_report(inst, pipeline.solve(inst))) == txt
    # numbers must survive the round trip exactly
    assert json.loads(txt)["result"]["energy_total"] == sol.energy_total
    assert txt.endswith("\n")


def test_sweep_csv_format():
    inst = model.heisenberg_line4()
    sw = pipeline.sweep_p_class(inst, [0.0, 0.5, 1.0])
    csv = reports.sweep_csv(sw)
    lines = csv.strip().split("\n")
    assert lines[0] == reports.CSV_HEADER
    assert reports.CSV_HEADER == "p_class,energy_class,energy_quad,energy_total,ratio"
    assert len(lines) == 1 + 3
    for line, row in zip(lines[1:], sw.rows):
        fields = line.split(",")
        assert len(fields) == 5
        # repr-format floats parse back to the exact values
        assert float(fields[0]) == row.p_class
        assert float(fields[3]) == row.energy_total
        assert float(fields[4]) == row.ratio
    # byte determinism
    assert reports.sweep_csv(pipeline.sweep_p_class(inst, [0.0, 0.5, 1.0])) == csv


def test_oracle_report_lines():
    inst = model.heisenberg_line4()
    spec = exact_spectrum(inst)
    txt = reports.oracle_report(inst, spec)
    lines = txt.strip().split("\n")
    assert "n = 4" in lines
    assert "convention = traceless" in lines
    assert any(ln.startswith("lambda_max = ") for ln in lines)
    assert sum(1 for ln in lines if ln.startswith("sector_max[N=")) == inst.n + 1
    # values parse as plain floats (no numpy repr leakage)
    for ln in lines:
        if " = " in ln:
            _, val = ln.split(" = ", 1)
            if val not in ("traceless", "psd", "fmc"):
                float(val)
    extra = reports.oracle_report(inst, spec, extra={"avg_q_max[q=1]": 0.9571})
    assert "avg_q_max[q=1] = 0.9571" in extra


def test_fixed_particle_report_carries_floor_detail():
    import dataclasses

    base = model.random_instance(
        n=4, seed=61040, convention="traceless",
        bipartite=True, zero_potentials=True,
    )
    inst = dataclasses.replace(base, particle_target=1)
    sol = pipeline.solve(inst)
    rep = reports.solve_report(inst, sol)
    cert = rep["certificate"]
    assert "nu" in cert and "headline_provable" in cert
    assert rep["instance"]["particle_target"] == 1
