import json

import pytest

from groupeq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def files(tmp_path):
    def write(name, content):
        path = tmp_path / name
        path.write_text(content)
        return str(path)

    return write


def test_classify_unimodular_matrix(files, capsys):
    path = files("m.txt", "1 -8\n0 1\n")
    code, out, _ = run(capsys, "classify", "--matrix", path)
    assert code == 0
    assert "unimodular: True" in out


def test_classify_prime_verdicts(files, capsys):
    path = files("m.txt", "2\n")
    code, out, _ = run(capsys, "classify", "--matrix", path, "--primes", "2")
    assert code == 0
    assert "nonsingular: True" in out
    assert "2-nonsingular: False" in out


def test_classify_bad_family_truncation(files, capsys):
    from groupeq.counterexamples import gen_bad
    from groupeq.systems import abelian_system_to_json

    _, system = gen_bad([2, 3, 5], 3)
    path = files("bad.json", json.dumps(abelian_system_to_json(system)))
    code, out, _ = run(capsys, "--format", "json", "classify", "--system", path)
    assert code == 0
    report = json.loads(out)
    assert report["unimodular"] is True


def test_classify_parse_error_exit_2(files, capsys):
    path = files("bad.txt", "1 2\n3 oops\n")
    code, _, err = run(capsys, "classify", "--matrix", path)
    assert code == 2
    assert "line 2" in err


def test_solve_over_z8(files, capsys):
    group = files("g.json", '{"summands":[{"kind":"cyclic","p":2,"e":3}]}')
    system = files("s.json", '{"vars":["x"],"equations":[{"coeffs":{"x":3},"rhs":["1"]}]}')
    code, out, _ = run(capsys, "solve", "--group", group, "--system", system)
    assert code == 0
    assert json.loads(out) == {"solution": {"x": ["3"]}}


def test_solve_integer_line_exit_3(files, capsys):
    group = files("g.json", '{"summands":[{"kind":"z"}]}')
    system = files("s.json", '{"vars":["x"],"equations":[{"coeffs":{"x":1},"rhs":["1"]}]}')
    code, _, err = run(capsys, "solve", "--group", group, "--system", system)
    assert code == 3
    assert "UnsupportedGroup" in err


def test_solve_singular_exit_3(files, capsys):
    group = files("g.json", '{"summands":[{"kind":"q"}]}')
    system = files(
        "s.json",
        '{"vars":["x","y"],"equations":['
        '{"coeffs":{"x":1,"y":1},"rhs":["1/1"]},'
        '{"coeffs":{"x":2,"y":2},"rhs":["0/1"]}]}',
    )
    code, _, err = run(capsys, "solve", "--group", group, "--system", system)
    assert code == 3
    assert "Singular" in err


def test_solve_heisenberg_q_square_root(files, capsys):
    group = files("g.json", '{"kind":"heisenberg","ring":{"kind":"q"}}')
    system = files(
        "s.json",
        '{"vars":["x"],"equations":[{"word":['
        '{"var":"x","exp":2},{"const":["-1/1","-1/1","0/1"]}]}]}',
    )
    code, out, _ = run(capsys, "solve", "--group", group, "--system", system)
    assert code == 0
    solution = json.loads(out)["solution"]
    assert solution["x"] == ["1/2", "1/2", "3/8"]


def test_solve_bad_json_exit_2(files, capsys):
    group = files("g.json", "{not json")
    system = files("s.json", "{}")
    code, _, err = run(capsys, "solve", "--group", group, "--system", system)
    assert code == 2
    assert "ParseError" in err


def test_solve_missing_keys_exit_2(files, capsys):
    group = files("g.json", '{"summands":[{"kind":"cyclic","p":2,"e":1}]}')
    system = files("s.json", '{"equations":[{"word":[{"var":"x","exp":1}]}]}')
    code, _, err = run(capsys, "solve", "--group", group, "--system", system)
    assert code == 2


def test_solve_abelian_handle_group(files, capsys):
    group = files("g.json", '{"kind":"abelian","group":{"summands":[{"kind":"cyclic","p":2,"e":2}]}}')
    system = files(
        "s.json",
        '{"vars":["x"],"equations":[{"word":[{"var":"x","exp":1},{"const":["3"]}]}]}',
    )
    code, out, _ = run(capsys, "solve", "--group", group, "--system", system)
    assert code == 0
    assert json.loads(out)["solution"]["x"] == ["1"]  # inverse of 3 in Z/4


def test_solve_table_group(files, capsys):
    import json as _json

    from groupeq.nilpotent import TableGroup, heisenberg_mod

    table = TableGroup.from_handle(heisenberg_mod(2))
    g = table.index_of((1, 1, 0))
    group = files("g.json", _json.dumps(table.to_json()))
    system = files(
        "s.json",
        _json.dumps({"vars": ["x"], "equations": [{"word": [{"var": "x", "exp": 1}, {"const": g}]}]}),
    )
    code, out, _ = run(capsys, "solve", "--group", group, "--system", system)
    assert code == 0
    assert _json.loads(out)["solution"]["x"] == table.invert(g)


def test_demo_pbad_table(capsys):
    code, out, _ = run(capsys, "demo", "pbad", "--p", "2", "--depth", "5")
    assert code == 0
    rows = [line for line in out.splitlines() if "order_of_x1" in line]
    assert len(rows) == 4  # depths 2..5


def test_demo_bad_supports(capsys):
    code, out, _ = run(capsys, "--format", "json", "demo", "bad", "--primes", "2,3,5,7", "--depth", "4")
    assert code == 0
    reports = json.loads(out)
    assert [int(r["observed"]) for r in reports] == [1, 2, 3, 4]


def test_demo_zbad_bounds(capsys):
    code, out, _ = run(capsys, "--format", "json", "demo", "zbad", "--depth", "3", "--scan", "5000")
    assert code == 0
    reports = json.loads(out)
    assert [int(r["observed"]) for r in reports] == [3, 27, 135]


def test_stream_passes(files, capsys):
    group = files("g.json", '{"summands":[{"kind":"cyclic","p":2,"e":2},{"kind":"cyclic","p":3,"e":2}]}')
    code, out, _ = run(capsys, "stream", "--group", group, "--seed", "5", "--depths", "10,50")
    assert code == 0
    assert out.splitlines() == ["depth 10: PASS", "depth 50: PASS"]


def test_stream_trivial_group(files, capsys):
    group = files("g.json", '{"summands":[]}')
    code, out, _ = run(capsys, "stream", "--group", group, "--seed", "1", "--depths", "5")
    assert code == 0
    assert "PASS" in out


def test_stream_json_deterministic(files, capsys):
    group = files("g.json", '{"summands":[{"kind":"cyclic","p":2,"e":2}]}')
    args = ("--format", "json", "stream", "--group", group, "--seed", "9", "--depths", "10,25")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2


def test_demo_json_deterministic(capsys):
    args = ("--format", "json", "demo", "pbad", "--depth", "6")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
