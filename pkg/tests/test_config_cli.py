from __future__ import annotations

import json

import pytest

from liftobs import cli
from liftobs.abelian import FgAbGroup
from liftobs.config import ConfigError, parse_scenario, scenario_from_dict
from liftobs.obstruction import InvariantBreach, Verdict, compute_report, sign_ledger_text
from liftobs.report import REPORT_KEYS, dumps_report, report_from_json, report_to_json, report_to_text

SCENARIOS = ["pu_over_s3_m1", "pu_over_s3_m2", "pu_over_s3_m5", "so3_over_s2", "so3_over_s2_trivial",
             "pu3_over_s2", "pu3_over_s3", "pu3_over_moore3", "trivial_extension", "so3_over_rp2"]


def run(capsys, *argv):
    rc = cli.main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def minimal_doc():
    return {
        "extension": {"pi1K": "0", "pi2K": "Z", "gamma_rank": 1, "d2": [[1]]},
        "bundle": {"pi2X": "0", "pi3X": "Z", "d3P": [[2]]},
    }


# ---------------------------------------------------------------- scenario parsing


def test_minimal_scenario_defaults():
    cfg = scenario_from_dict(minimal_doc(), name="m")
    assert cfg.name == "m" and not cfg.sign_ledger and cfg.verbosity == 0
    assert cfg.extension.D.is_trivial() and cfg.bundle.h2.is_zero()
    assert compute_report(cfg.extension, cfg.bundle).verdict == Verdict.NONZERO_ON_PI3


def test_missing_and_unknown_sections():
    with pytest.raises(ConfigError) as exc:
        scenario_from_dict({"bundle": {}, "extras": 1})
    assert exc.value.errors == ["extension: missing section", "extras: unknown section"]
    with pytest.raises(ConfigError, match="expected a JSON object"):
        scenario_from_dict([1, 2])


def test_all_field_errors_are_collected():
    doc = minimal_doc()
    doc["extension"]["pi2K"] = "Z/"
    doc["bundle"]["pi3X"] = "W"
    with pytest.raises(ConfigError) as exc:
        scenario_from_dict(doc)
    assert exc.value.errors == ["extension.pi2K: cannot parse group 'Z/'", "bundle.pi3X: cannot parse group 'W'"]


def test_matrix_shape_error_names_the_field():
    doc = minimal_doc()
    doc["bundle"]["d3P"] = [[1, 2]]
    with pytest.raises(ConfigError) as exc:
        scenario_from_dict(doc)
    assert any(e.startswith("bundle.d3P: expected a 1x1 matrix") for e in exc.value.errors)


def test_fund_ext_needs_flat_extension():
    doc = {"extension": {"pi1K": "Z/2", "pi2K": "Z", "gamma_rank": 1, "d2": [[1]], "fund_ext": [[1]]},
           "bundle": {"pi2X": "0", "pi3X": "0"}}
    with pytest.raises(ConfigError) as exc:
        scenario_from_dict(doc)
    assert exc.value.errors[0].startswith("extension.fund_ext: the fundamental-group class is only part")


def test_h2_required_when_homology_differs():
    doc = minimal_doc()
    doc["bundle"]["H2X"] = "Z"
    with pytest.raises(ConfigError, match=r"bundle\.h2: required"):
        scenario_from_dict(doc)


def test_pi1P_class_needs_pi1X_and_right_coordinates():
    doc = minimal_doc()
    doc["bundle"]["pi1P_class"] = {"values": [[1, 1, []]]}
    with pytest.raises(ConfigError, match="requires pi1X"):
        scenario_from_dict(doc)
    doc = {"extension": {"pi1K": "Z/2", "pi2K": "0", "D": "Z/2", "d1": [[1]]},
           "bundle": {"pi2X": "0", "pi3X": "0", "pi1X": "Z/2", "pi1P_class": {"values": [[1, 1, [1, 0]]]}}}
    with pytest.raises(ConfigError, match="needs 1 coordinates"):
        scenario_from_dict(doc)


def test_options_are_type_checked():
    doc = minimal_doc()
    doc["options"] = {"sign_ledger": "yes", "verbosity": 1.5}
    with pytest.raises(ConfigError) as exc:
        scenario_from_dict(doc)
    assert exc.value.errors == ["options.sign_ledger: expected true or false", "options.verbosity: expected an integer"]


def test_invalid_json_reports_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "extension": {\n  ,\n}\n', encoding="utf-8")
    with pytest.raises(ConfigError) as exc:
        parse_scenario(p)
    assert exc.value.errors[0].startswith(f"{p}:3: invalid JSON")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="No such file"):
        parse_scenario(tmp_path / "nope.json")


def test_inline_nerve_and_cocycle(scenario_dir):
    doc = json.loads((scenario_dir / "so3_over_rp2.json").read_text(encoding="utf-8"))
    cfg_files = scenario_from_dict(doc, scenario_dir)
    nerve = cfg_files.bundle.covering.nerve
    doc["bundle"]["nerve"] = {"vertices": nerve.vertex_count, "facets": [list(f) for f in nerve.facets]}
    doc["bundle"]["cocycle"] = [[i, j, x] for (i, j), x in cfg_files.bundle.covering.cocycle.items()]
    cfg_inline = scenario_from_dict(doc)
    assert cfg_inline.bundle == cfg_files.bundle


def test_bad_covering_cocycle_is_rejected(scenario_dir):
    doc = json.loads((scenario_dir / "so3_over_rp2.json").read_text(encoding="utf-8"))
    doc["bundle"]["cocycle"] = [[0, 1, 1]]
    with pytest.raises(ConfigError, match="cocycle condition"):
        scenario_from_dict(doc, scenario_dir)


# ---------------------------------------------------------------- reports


@pytest.mark.parametrize("name", SCENARIOS)
def test_golden_machine_output(name, scenario_dir, capsys):
    rc, out, _ = run(capsys, "compute", str(scenario_dir / f"{name}.json"), "--format", "machine")
    assert rc == 0
    assert out == (scenario_dir / "golden" / f"{name}.json").read_text(encoding="utf-8")
    assert list(json.loads(out)) == list(REPORT_KEYS)


@pytest.mark.parametrize("name", SCENARIOS)
def test_report_round_trip_and_determinism(name, scenario_dir):
    cfg = parse_scenario(scenario_dir / f"{name}.json")
    r1 = compute_report(cfg.extension, cfg.bundle)
    r2 = compute_report(cfg.extension, cfg.bundle)
    assert dumps_report(r1) == dumps_report(r2)
    assert report_from_json(json.loads(dumps_report(r1))) == r1
    assert report_to_json(report_from_json(report_to_json(r1))) == report_to_json(r1)


def test_report_from_json_rejects_missing_keys():
    with pytest.raises(ValueError, match="missing"):
        report_from_json({"verdict": "Zero"})


def test_text_report_contents(scenario_dir):
    cfg = parse_scenario(scenario_dir / "pu3_over_moore3.json")
    text = report_to_text(compute_report(cfg.extension, cfg.bundle))
    assert text.splitlines()[0] == "AsphericalNonzero"
    assert "flat Ext class: Ext(Z/3, Z) class [Z/3: [2]]" in text
    cfg = parse_scenario(scenario_dir / "pu3_over_s3.json")
    text = report_to_text(compute_report(cfg.extension, cfg.bundle), sign_ledger=True)
    assert text.splitlines()[0] == "Zero"
    assert text.endswith(sign_ledger_text())


def test_verbose_text_lists_cech_values(scenario_dir, capsys):
    rc, out, _ = run(capsys, "compute", str(scenario_dir / "so3_over_rp2.json"), "-v")
    assert rc == 0
    assert "Čech class: 1 nonzero values on 10 triangles" in out
    assert "provenance:" in out


# ---------------------------------------------------------------- CLI


def test_cli_exit_code_for_bad_input(tmp_path, capsys):
    p = tmp_path / "s.json"
    p.write_text(json.dumps({"extension": {}}), encoding="utf-8")
    rc, out, err = run(capsys, "compute", str(p))
    assert rc == cli.EXIT_INPUT and out == ""
    assert f"error: {p}: bundle: missing section" in err
    rc, _, err = run(capsys, "snf", str(tmp_path / "missing.txt"))
    assert rc == cli.EXIT_INPUT and "No such file" in err
    rc, _, err = run(capsys, "ext", "Z/2", "Z/x")
    assert rc == cli.EXIT_INPUT


def test_cli_exit_code_for_internal_failure(monkeypatch, scenario_dir, capsys):
    def boom(ext, b):
        raise InvariantBreach("Γ part: group route says zero, Čech route says nonzero")
    monkeypatch.setattr(cli, "compute_report", boom)
    rc, _, err = run(capsys, "compute", str(scenario_dir / "so3_over_rp2.json"))
    assert rc == cli.EXIT_INTERNAL and "internal check failed" in err


def test_cli_verify_fault_injection(capsys):
    rc, out, _ = run(capsys, "verify", "lemma-4.1", "--n", "1", "--gamma", "Z/3")
    assert rc == cli.EXIT_OK and out.startswith("lemma-4.1: PASS")
    rc, out, _ = run(capsys, "verify", "lemma-4.1", "--n", "1", "--gamma", "Z/3", "--inject-fault")
    assert rc == cli.EXIT_COUNTEREXAMPLE and out.startswith("lemma-4.1: FAIL")


def test_cli_verify_jobs_do_not_change_output(capsys):
    outs = []
    for jobs in ("1", "2"):
        rc, out, _ = run(capsys, "verify", "grpcoh-known", "--gamma", "Z/2", "--jobs", jobs, "--format", "machine")
        assert rc == 0
        outs.append(out)
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["passed"] is True


def test_cli_snf_ext_grpcoh(tmp_path, capsys):
    p = tmp_path / "m.txt"
    p.write_text("2 2\n2 4\n4 6\n", encoding="utf-8")
    rc, out, _ = run(capsys, "snf", str(p), "--format", "machine")
    assert rc == 0 and json.loads(out)["invariant_factors"] == [2, 2]
    rc, out, _ = run(capsys, "ext", "Z/4", "Z/6")
    assert rc == 0 and out == "Hom(Z/4, Z/6) = Z/2\nExt(Z/4, Z/6) = Z/2\n"
    rc, out, _ = run(capsys, "grpcoh", "Z/2 x Z/2", "Q/Z", "2")
    assert rc == 0 and out.endswith("= Z/2\n")
    rc, out, _ = run(capsys, "grpcoh", "Z/3", "Z", "2")
    assert rc == 0 and out.endswith("= Z/3\n")


def test_cli_sign_ledger_placement(scenario_dir, capsys):
    path = str(scenario_dir / "pu_over_s3_m1.json")
    rc, out, err = run(capsys, "compute", path, "--sign-ledger")
    assert rc == 0 and out.endswith(sign_ledger_text()) and err == ""
    rc, out, err = run(capsys, "compute", path, "--sign-ledger", "--format", "machine")
    assert rc == 0 and err == sign_ledger_text()
    json.loads(out)


def test_cli_argument_errors_name_the_argument(capsys):
    rc, _, err = run(capsys, "ext", "Z/2", "Z/x")
    assert rc == cli.EXIT_INPUT and err == "error: argument B: cannot parse group 'Z/x'\n"
    rc, _, err = run(capsys, "grpcoh", "S3x", "Z", "2")
    assert rc == cli.EXIT_INPUT and err.startswith("error: argument G: ")
    rc, _, err = run(capsys, "grpcoh", "Z/9", "Z", "2")
    assert rc == cli.EXIT_INPUT and "argument G: group order 9 exceeds the bound 8" in err
    rc, _, err = run(capsys, "grpcoh", "D8", "Z", "5")
    assert rc == cli.EXIT_INPUT and err.startswith("error: argument degree: ")


def test_cli_verify_examples(capsys):
    rc, out, _ = run(capsys, "verify", "lemma-4.1", "--n", "2", "--gamma", "Z/3")
    assert rc == 0 and out.startswith("lemma-4.1: PASS (81 checked)")
    rc, out, _ = run(capsys, "verify", "triangle", "--n", "1", "--gamma", "Z/2")
    assert rc == 0 and out.startswith("triangle: PASS")
    rc, out, _ = run(capsys, "verify", "lemma-4.1", "--n", "1", "--gamma", "Z/3", "--inject-fault")
    assert rc == 1
    # counterexamples are dumped in the cochain file format and parse back
    from liftobs.cech import cochain_from_text, sphere_nerve
    block = out.split("counterexample:\n")[1].split("    counterexample")[0]
    text = "\n".join(ln.strip() for ln in block.splitlines() if ln.strip())
    c = cochain_from_text(text, sphere_nerve(1), 1, FgAbGroup.cyclic(3))
    assert len(c.values) == 3
