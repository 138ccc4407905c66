import io
import json

import pytest

from hsbar.cli import run_command
from hsbar.corpus import example, example_corpus, example_document, example_names
from hsbar.errors import NotCubic, ParseError, ValidationError
from hsbar.forms import RokhlinMap
from hsbar.problem import ResultDocument, parse_problem
from hsbar.solver import solve


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, doc, name="p.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(path)


def test_kq():
    assert run("kq", "--n", "3") == (0, "Z/2^6 + Z^1\n", "")
    code, out, _ = run("kq", "--n", "3", "--format", "machine")
    assert json.loads(out) == {"n": 3, "z": 1, "z2": 6}


def test_solve_trefoil():
    code, out, _ = run("solve", "--example", "trefoil0")
    assert code == 0
    assert out.splitlines()[-1] == "final: 2 x F[Q]/Q^2 tops {0,2}; unique: yes"


def test_classify():
    code, out, _ = run("classify", "--n", "3", "--cubic", "123")
    assert code == 0
    assert out.splitlines()[0] == "2 orbits"
    assert "weights 1/7" in out and "weights 3/5" in out
    code, out, _ = run("classify", "--n", "3", "--cubic", "123", "--format", "machine")
    assert sorted(o["size"] for o in json.loads(out)) == [16, 112]


def test_classify_bad_monomial():
    assert run("classify", "--n", "3", "--cubic", "12")[0] == 2
    assert run("classify", "--n", "3", "--cubic", "19")[0] == 2


def test_t3_file_parses(tmp_path):
    path = write(tmp_path, example_document("t3"))
    problem = parse_problem(path)
    assert problem.b1 == 3
    assert problem.cup.value((1, 2, 3)) == 1
    assert problem.mu == RokhlinMap.from_function(3, lambda x: int(x == 0))


def test_degree_four_anf_rejected(tmp_path):
    path = write(tmp_path, {"b1": 4, "cup": [], "rokhlin": {"anf": {"1234": 1}}})
    with pytest.raises(NotCubic):
        parse_problem(path)
    code, _, err = run("validate", path)
    assert code == 2 and "not cubic" in err


def test_short_table_rejected(tmp_path):
    values = {k: 0 for k in ["", "1", "2", "3", "12", "13", "23"]}
    path = write(tmp_path, {"b1": 3, "cup": [], "rokhlin": {"values": values}})
    with pytest.raises(ValidationError) as info:
        parse_problem(path)
    assert info.value.field == "rokhlin.values"
    assert run("validate", path)[0] == 2


@pytest.mark.parametrize(
    "doc,field",
    [
        ({"cup": [], "rokhlin": {"anf": {}}}, "b1"),
        ({"b1": 3, "cup": [{"indices": [1, 3, 2], "value": 1}], "rokhlin": {"anf": {}}}, "cup[0].indices"),
        ({"b1": 3, "cup": [{"indices": [1, 2], "value": 1}], "rokhlin": {"anf": {}}}, "cup[0].indices"),
        ({"b1": 2, "cup": [], "rokhlin": {"anf": {"3": 1}}}, "rokhlin.anf['3']"),
        ({"b1": 2, "cup": [], "rokhlin": {"anf": {"1": 2}}}, "rokhlin.anf['1']"),
        ({"b1": 2, "cup": [], "rokhlin": {}}, "rokhlin"),
        ({"b1": 1, "cup": [], "rokhlin": {"values": {"": 0, "2": 1}}}, "rokhlin.values['2']"),
    ],
)
def test_parse_errors_name_the_field(doc, field):
    with pytest.raises(ParseError) as info:
        parse_problem(json.dumps(doc))
    assert info.value.field == field


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_problem('{\n  "b1": 1,\n  "cup": [\n}')
    assert info.value.line == 4


def test_missing_file():
    code, _, err = run("validate", "/nonexistent/problem.json")
    assert code == 2 and "cannot read" in err


def test_cubic_mismatch_exit_code(tmp_path):
    path = write(tmp_path, {"b1": 3, "cup": [{"indices": [1, 2, 3], "value": 1}], "rokhlin": {"anf": {}}})
    assert run("solve", path)[0] == 2


def test_corpus():
    names = example_names()
    assert len(names) >= 7
    for required in ("s3", "s2xs1", "trefoil0", "split2", "t3", "borromean-arf", "borromean-m"):
        assert required in names
    for name, problem in example_corpus().items():
        assert problem.name == name
        assert run("validate", "--example", name)[0] == 0


def test_borromean_m_needs_even_coefficient():
    assert example("borromean-m", 4).cup.value((1, 2, 3)) == 4
    with pytest.raises(ValidationError):
        example("borromean-m", 3)
    assert run("solve", "--example", "borromean-m", "--m", "3")[0] == 2


def test_unknown_example():
    assert run("solve", "--example", "nope")[0] == 2
    assert run("example", "nope")[0] == 2


def test_example_command_round_trips(tmp_path):
    code, out, _ = run("example", "t3")
    assert code == 0
    problem = parse_problem(write(tmp_path, out))
    assert problem.name == "t3"
    assert parse_problem(problem.dumps()) == problem


@pytest.mark.parametrize("name", ["trefoil0", "t3", "borromean-m", "split2"])
def test_machine_output_round_trips(name):
    code, out, _ = run("solve", "--example", name, "--format", "machine")
    assert code == 0
    doc = ResultDocument.loads(out)
    assert doc.dumps() == out
    data = json.loads(out)
    for key in ("input", "shift", "quota", "pages", "final", "unique"):
        assert key in data


def test_machine_output_for_t3():
    data = json.loads(run("solve", "--example", "t3", "--format", "machine")[1])
    assert data["unique"] is True
    assert data["shift"] == 2
    assert data["quota"] == 6
    assert sorted((s["length"], s["top"]) for s in data["final"]) == [(3, 0)] * 3 + [(3, 3)] * 3
    assert data["pages"]["E1"][0] == [1, 0, 0, 0]


def test_no_normalize_shifts_by_twice_base_value():
    for name in example_names():
        problem = example(name)
        a = solve(problem.cup, problem.mu, raise_on_empty=False)
        b = solve(problem.cup, problem.mu, normalize=False, raise_on_empty=False)
        shift = 2 * problem.mu(0) % 4
        assert [m.shift(shift) for m in a.final] == b.final
    code, out, _ = run("solve", "--example", "t3", "--no-normalize")
    assert out.splitlines()[-1] == "final: 6 x F[Q]/Q^3 tops {1,1,1,2,2,2}; unique: yes"


def test_budget_exit_code():
    assert run("solve", "--example", "t3", "--budget", "2")[0] == 3


def test_no_answer_exit_code(monkeypatch):
    from hsbar import solver

    monkeypatch.setattr(solver, "gysin_quota", lambda cup: 99)
    code, out, err = run("solve", "--example", "trefoil0", "--format", "machine")
    assert code == 4
    assert json.loads(out)["candidates"] == []


def test_other_commands():
    code, out, _ = run("hm", "--example", "t3")
    assert code == 0 and "even 3, odd 3" in out
    code, out, _ = run("e1", "--example", "t3", "--format", "machine")
    assert json.loads(out)["E1"][0] == [1, 0, 0, 0]
    code, out, _ = run("pages", "--example", "t3")
    assert code == 0 and out.count("E-infinity") == 4
    code, out, _ = run("list-examples")
    assert code == 0 and "borromean-arf" in out
    code, out, _ = run("validate", "--example", "borromean-arf", "--format", "machine")
    assert json.loads(out)["weight"] == 3


def test_problem_source_is_required(tmp_path):
    assert run("solve")[0] == 2
    path = write(tmp_path, example_document("s3"))
    assert run("solve", path, "--example", "s3")[0] == 2
