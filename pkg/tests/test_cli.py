import json

import pytest

from cli import EXIT_CONFIG, EXIT_DIFFERENT, EXIT_IO, EXIT_OK, main

TABLE2_FLAGS = ["--minsprt", "0.3", "--minconf", "0.52", "--mininterest", "0.05"]
TABLE1_FLAGS = ["--minsprt", "0.2", "--minconf", "0.52", "--mininterest", "0.02"]


def run(argv, capsys):
    code = main([str(arg) for arg in argv])
    out, err = capsys.readouterr()
    return code, out, err


def mine_to(path, basket, flags, capsys, *extra):
    code, _, _ = run(["mine", basket, *flags, *extra, "-o", path], capsys)
    assert code == EXIT_OK
    return path.read_bytes()


def test_mine_table2_negative_rule(table2_basket, capsys):
    code, out, _ = run(["mine", table2_basket, *TABLE2_FLAGS, "--forms", "neg"], capsys)
    assert code == EXIT_OK

    report = json.loads(out)
    assert list(report)[:4] == ["version", "source", "config", "stats"]
    assert report["stats"] == {"transactions": 100, "items": 3}

    rule = next(r for r in report["rules"]
                if r["form"] == "a_not_b" and r["antecedent"] == ["soy"] and r["consequent"] == ["salt"])
    assert rule["support"] == {"value": "0.35", "num": 7, "den": 20}
    assert rule["confidence"]["value"] == "0.875"
    assert rule["leverage"]["value"] == "0.19"
    assert all(r["form"] != "pos" for r in report["rules"])


def test_mine_csv(table2_basket, capsys):
    code, out, _ = run(["mine", table2_basket, *TABLE2_FLAGS, "--format", "csv"], capsys)
    assert code == EXIT_OK
    lines = out.splitlines()
    assert lines[0] == "form,antecedent,consequent,support,confidence,leverage,interest_ratio"
    assert "a_not_b,soy,salt,0.35,0.875,0.19,2.1875" in lines


def test_mine_rejects_zero_minsprt(table2_basket, capsys):
    code, _, err = run(["mine", table2_basket, "--minsprt", "0"], capsys)
    assert code == EXIT_CONFIG
    assert "InvalidThreshold" in err


def test_mine_rejects_unknown_form(table2_basket, capsys):
    code, _, err = run(["mine", table2_basket, "--forms", "sideways"], capsys)
    assert code == EXIT_CONFIG
    assert "InvalidParameter" in err


def test_mine_missing_file(tmp_path, capsys):
    code, _, _ = run(["mine", tmp_path / "missing.basket"], capsys)
    assert code == EXIT_IO


def test_mine_empty_file(tmp_path, capsys):
    path = tmp_path / "empty.basket"
    path.write_text("# nothing here\n", encoding="utf-8")
    code, _, err = run(["mine", path], capsys)
    assert code == EXIT_CONFIG
    assert "EmptyDatabase" in err


def test_mine_warns_about_bound(table2_basket, capsys):
    code, out, err = run(["mine", table2_basket, "--minsprt", "0.2", "--mininterest", "0.2"], capsys)
    assert code == EXIT_OK
    assert any("exceeds bound 0.16" in w for w in json.loads(out)["warnings"])
    assert "exceeds bound 0.16" in err


def test_mine_timings_are_opt_in(table2_basket, capsys):
    _, out, _ = run(["mine", table2_basket, *TABLE2_FLAGS], capsys)
    assert "timings" not in json.loads(out)

    _, out, _ = run(["mine", table2_basket, *TABLE2_FLAGS, "--timings"], capsys)
    assert set(json.loads(out)["timings"]) == {"mine_frequent", "negative_candidates", "extract_rules"}


def test_mine_reports_degenerate_antecedent(tmp_path, capsys):
    path = tmp_path / "universal.basket"
    path.write_text("a b\na b\na b\na\n", encoding="utf-8")
    code, out, _ = run(["mine", path, "--minsprt", "0.25", "--minconf", "0.1", "--forms", "neg"], capsys)
    assert code == EXIT_OK

    diagnostics = json.loads(out)["diagnostics"]
    assert len(diagnostics) == 2
    assert all(d.startswith("DegenerateAntecedent") for d in diagnostics)


def test_classify_table1_positive(table1_basket, capsys):
    code, out, _ = run(["classify", table1_basket, "soy", "salt", *TABLE1_FLAGS], capsys)
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["verdict"] == "positive-of-interest"
    assert payload["contingency"] == {"a_b": 20, "a_not_b": 5, "not_a_b": 70, "not_a_not_b": 5}


def test_classify_table2_negative(table2_basket, capsys):
    code, out, _ = run(["classify", table2_basket, "soy", "salt", *TABLE2_FLAGS, "--format", "text"], capsys)
    assert code == EXIT_OK
    assert out.startswith("soy salt: negative-of-interest")
    assert "soy -> ~salt" in out


def test_classify_singleton(table1_basket, capsys):
    code, out, _ = run(["classify", table1_basket, "soy", *TABLE1_FLAGS], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["verdict"] == "uninteresting"


def test_classify_unknown_item(table1_basket, capsys):
    code, _, err = run(["classify", table1_basket, "pepper"], capsys)
    assert code == EXIT_CONFIG
    assert "UnknownItem" in err


def test_gen_is_deterministic(capsys):
    args = ["gen", "--seed", "7", "--items", "10", "--transactions", "200", "--density", "0.3"]
    _, first, _ = run(args, capsys)
    _, second, _ = run(args, capsys)
    assert first == second
    assert len([line for line in first.splitlines() if not line.startswith("#")]) == 200


def test_gen_rejects_zero_density(capsys):
    code, _, err = run(["gen", "--density", "0"], capsys)
    assert code == EXIT_CONFIG
    assert "InvalidParameter" in err


def test_report_identical(table2_basket, tmp_path, capsys):
    left = tmp_path / "left.json"
    mine_to(left, table2_basket, TABLE2_FLAGS, capsys)

    code, out, _ = run(["report", left, left], capsys)
    assert code == EXIT_OK
    diff = json.loads(out)
    assert diff["identical_rules"] is True
    assert diff["added"] == [] and diff["removed"] == []
    assert diff["stage_deltas"] == {} and diff["config_deltas"] == {}


def test_report_miner_against_oracle(table1_basket, tmp_path, capsys):
    miner = tmp_path / "miner.json"
    oracle = tmp_path / "oracle.json"
    mine_to(miner, table1_basket, TABLE1_FLAGS, capsys)
    mine_to(oracle, table1_basket, TABLE1_FLAGS, capsys, "--oracle")

    code, out, _ = run(["report", miner, oracle], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["stage_deltas"] == {}


def test_report_different_minsprt(table2_basket, tmp_path, capsys):
    low = tmp_path / "low.json"
    high = tmp_path / "high.json"
    mine_to(low, table2_basket, TABLE2_FLAGS, capsys)
    mine_to(high, table2_basket, ["--minsprt", "0.5", "--minconf", "0.52", "--mininterest", "0.05"], capsys)

    code, out, _ = run(["report", low, high], capsys)
    assert code == EXIT_DIFFERENT
    diff = json.loads(out)
    assert diff["config_deltas"]["minsprt"] == {"left": "0.3", "right": "0.5"}
    assert diff["removed"]
    assert diff["stage_deltas"]


def test_report_malformed(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"rules": []}', encoding="utf-8")
    code, _, err = run(["report", bad, bad], capsys)
    assert code == EXIT_CONFIG
    assert "MalformedReport" in err


@pytest.mark.parametrize("key, value", [
    ("config", []),
    ("stats", "100 transactions"),
    ("stage_counts", {"rules_emitted": "many"}),
    ("stage_counts", {"rules_emitted": 1.5}),
    ("stage_counts", {"rules_emitted": True}),
])
def test_report_rejects_mistyped_sections(key, value, table2_basket, tmp_path, capsys):
    good = tmp_path / "good.json"
    report = json.loads(mine_to(good, table2_basket, TABLE2_FLAGS, capsys))
    report[key] = value
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(report), encoding="utf-8")

    for argv in (["report", good, bad], ["report", bad, good]):
        code, _, err = run(argv, capsys)
        assert code == EXIT_CONFIG
        assert "MalformedReport" in err


def test_report_missing_file(tmp_path, capsys):
    code, _, _ = run(["report", tmp_path / "a.json", tmp_path / "b.json"], capsys)
    assert code == EXIT_IO


@pytest.fixture
def generated_basket(tmp_path, capsys):
    path = tmp_path / "seed7.basket"
    code, _, _ = run(["gen", "--seed", "7", "--items", "10", "--transactions", "200",
                      "--density", "0.3", "-o", path], capsys)
    assert code == EXIT_OK
    return path


def test_mine_is_byte_identical(generated_basket, tmp_path, capsys):
    flags = ["--minsprt", "0.15", "--minconf", "0.5", "--mininterest", "0.01"]
    outputs = [mine_to(tmp_path / f"run{i}.json", generated_basket, flags, capsys) for i in range(3)]
    threaded = mine_to(tmp_path / "threads4.json", generated_basket, flags, capsys, "--threads", "4")
    single = mine_to(tmp_path / "threads1.json", generated_basket, flags, capsys, "--threads", "1")

    assert outputs[0] == outputs[1] == outputs[2]
    assert threaded == single == outputs[0]


def test_round_trip_through_report(generated_basket, tmp_path, capsys):
    report = tmp_path / "report.json"
    mine_to(report, generated_basket, ["--minsprt", "0.15"], capsys)

    code, _, _ = run(["report", report, report], capsys)
    assert code == EXIT_OK


def test_generated_data_miner_against_oracle(generated_basket, tmp_path, capsys):
    flags = ["--minsprt", "0.15", "--max-len", "3"]
    miner = tmp_path / "miner.json"
    oracle = tmp_path / "oracle.json"
    mine_to(miner, generated_basket, flags, capsys)
    mine_to(oracle, generated_basket, flags, capsys, "--oracle")

    code, out, _ = run(["report", miner, oracle], capsys)
    assert code == EXIT_OK
    assert json.loads(out)["stage_deltas"] == {}
