import json

from autopt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_aut(capsys):
    code, out, _ = run(capsys, "aut", "--code", "4_2_2")
    doc = json.loads(out)
    assert code == 0 and doc["order"] == 144 and doc["complete"]
    assert doc["generators"]


def test_classes(capsys):
    code, out, _ = run(capsys, "classes", "--code", "4_2_2")
    doc = json.loads(out)
    assert doc["distinct_L"] == 36
    assert [r["class"] for r in doc["classes"]] == [1, 2, 4, 5, 6, 9]
    assert all(r["automorphisms"] == 4 * r["distinct_L"] for r in doc["classes"])


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "--code", "4_2_2")
    doc = json.loads(out)
    assert code == 0
    assert doc["orbit_size"] == 216 and doc["identity_holds"]
    assert doc["orbit_size"] * doc["aut_order"] == doc["hamming_order"] == 31104


def test_orbit_budget(capsys):
    code, _, err = run(capsys, "orbit", "--code", "4_2_2", "--entry-limit", "5")
    assert code == 2 and "truncated" in err


def test_table_json_and_verify(capsys, tmp_path):
    code, out, _ = run(capsys, "table", "--code", "4_2_2", "--metric", "1")
    assert code == 0
    doc = json.loads(out)
    assert {r["class"]: r["cost"] for r in doc["rows"]} == {2: 4, 4: 4, 5: 15, 6: 9, 9: 10}
    assert set(doc) == {"code", "n", "k", "metric", "rows"}
    assert set(doc["rows"][0]) >= {"class", "cost", "circuit", "tau", "A", "generator_basis",
                                   "L", "exhaustive"}
    path = tmp_path / "t.json"
    path.write_text(out)
    code, out2, _ = run(capsys, "verify", str(path))
    assert code == 0 and "0 problems" in out2

    doc["rows"][0]["cost"] += 1
    path.write_text(json.dumps(doc))
    code, out3, _ = run(capsys, "verify", str(path))
    assert code == 1 and "cost" in out3


def test_table_byte_identical(capsys):
    _, a, _ = run(capsys, "table", "--code", "4_1_2", "--metric", "2")
    _, b, _ = run(capsys, "table", "--code", "4_1_2", "--metric", "2", "--workers", "2")
    assert a == b


def test_table_md_and_csv(capsys):
    code, md, _ = run(capsys, "table", "--code", "4_1_2", "--format", "md")
    assert code == 0 and md.startswith("| Code |") and "[[4,1]]" in md
    code, csv, _ = run(capsys, "table", "--code", "4_1_2", "--format", "csv")
    assert code == 0 and csv.splitlines()[0].startswith("Code,")


def test_optimize_levels(capsys):
    _, out, _ = run(capsys, "optimize", "--code", "4_2_2", "--class", "6")
    assert json.loads(out)["rows"][0]["cost"] == 9
    _, out, _ = run(capsys, "optimize", "--code", "4_2_2", "--class", "6", "--level", "fixed",
                    "--target", "1100,0100,0110,1111")
    assert json.loads(out)["rows"][0]["cost"] == 11


def test_input_errors(capsys):
    assert run(capsys, "aut", "--code", "9_9_9")[0] == 1
    assert run(capsys, "optimize", "--code", "4_2_2", "--class", "3")[0] == 1
    assert run(capsys, "optimize", "--code", "4_2_2", "--class", "6", "--target", "11,01")[0] == 1


def test_budget_exit(capsys):
    assert run(capsys, "aut", "--code", "7_1_3", "--node-limit", "20")[0] == 2


def test_code_file(capsys, tmp_path):
    from autopt.codes import builtin, serialize_code
    path = tmp_path / "c.txt"
    path.write_text(serialize_code(builtin("4_2_2")))
    code, out, _ = run(capsys, "aut", "--code", str(path))
    assert code == 0 and json.loads(out)["order"] == 144


def test_report(capsys, tmp_path):
    code, out, _ = run(capsys, "report", "--code", "4_2_2")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "index,circuit,class,L" and len(lines) == 145
    code, dot, _ = run(capsys, "report", "--code", "4_2_2", "--format", "dot")
    assert dot.startswith("graph") and dot.count("shape=box") == 36
    out_file = tmp_path / "o.csv"
    code, _, _ = run(capsys, "report", "--code", "4_1_2", "--orbit", "-o", str(out_file))
    assert code == 0 and out_file.read_text().startswith("index,tau")


def test_list(capsys):
    code, out, _ = run(capsys, "list")
    assert code == 0 and "4_2_2" in out
