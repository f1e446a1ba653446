import json
import random

import pytest

from ceinv.cli import main
from ceinv.group_l1 import parse_l1
from ceinv.series_kernel import parse_series, project_degree, zeta_order
from ceinv.symbols import CEType, DecoratedSymbol, SymbolTuple


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_expand_exact_output(capsys):
    code, out, _ = run(capsys, "expand", "H2[2]")
    assert code == 0
    assert out.strip() == "H2[0] + T3[1] - T2[1] + T3[2] - T2[2]"


def test_g1_output(capsys):
    code, out, _ = run(capsys, "g1", "E2[1]")
    assert code == 0
    assert parse_l1(out.strip()) == parse_l1("h2 + t3[1] - t2[1]")


def test_gn_output(capsys):
    code, out, _ = run(capsys, "gn", "[H1[0], H1[0], Q2[0]]")
    assert code == 0
    assert out.strip() == "2*Z{b*c^2}"


def test_fprime_degree_two_part(capsys):
    code, out, _ = run(capsys, "fprime", "--base", "0", "--deltas", "b;b", "--N", "3")
    assert code == 0
    series = parse_series(out.strip(), 3)
    assert project_degree(series, 2).text() == "2*Z{b^2}"


def test_fprime_default_truncation(capsys):
    code, out, _ = run(capsys, "fprime", "--deltas", "b;b")
    assert code == 0
    assert parse_series(out.strip(), 3) == parse_series("2*Z{b^2} + 6*Z{b^3}", 3)


def test_series_f_requires_truncation(capsys, monkeypatch):
    monkeypatch.delenv("INVARIANT_DEFAULT_N", raising=False)
    code, _, err = run(capsys, "series-f", "--l", "b")
    assert code == 2
    assert "truncation" in err
    monkeypatch.setenv("INVARIANT_DEFAULT_N", "2")
    code, out, _ = run(capsys, "series-f", "--l", "b")
    assert code == 0
    assert out.strip() == "1 + b + Z{b^2}"


def test_fun_eval(capsys):
    code, out, _ = run(capsys, "fun-eval", "--base", "t2[0]",
                       "--tuple", "[T3[1], T2[0]]", "--n", "2")
    assert code == 0
    assert parse_series(out.strip(), 3) == parse_series("t2[0]*t3[1]", 3)


def test_check_delta_ok(capsys):
    code, out, _ = run(capsys, "check-delta", "--n", "1", "--m-span", "2")
    assert code == 0
    assert out.strip() == "OK"


def test_check_en_ok(capsys):
    code, out, _ = run(capsys, "check-en", "--n", "3", "--provider", "gun")
    assert code == 0
    assert out.strip() == "OK"


def test_check_en_table_violation(capsys, tmp_path):
    table = tmp_path / "bad.tbl"
    table.write_text(
        "group: 4\n"
        "n: 3\n"
        "[H1[0], H1[0], H1[0]] = (2)\n")
    code, out, _ = run(capsys, "check-en", "--provider", "table",
                       "--table", str(table), "--levels", "1")
    assert code == 1
    assert "restriction (2)" in out
    assert "[H1[0], H1[0], H1[0]]" in out


def test_check_prop_small(capsys):
    code, out, _ = run(capsys, "check-prop", "--max-n", "2")
    assert code == 0
    assert out.strip() == "OK"


def test_extend_command(capsys, tmp_path):
    table = tmp_path / "seed.tbl"
    table.write_text(
        "group: 0, 0, 0\n"
        "n: 1\n"
        "[H2[0]] = (1, 0, 0)\n"
        "[T3[1]] = (0, 1, 0)\n"
        "[T2[1]] = (0, 0, 1)\n")
    code, out, _ = run(capsys, "extend", "--table", str(table), "--query", "[H2[1]]")
    assert code == 0
    assert out.strip() == "(1, 1, -1)"


def test_collapse_command(capsys):
    code, out, _ = run(capsys, "collapse", "--base", "0",
                       "--tuple", "[H1[0], H1[0], T3[0]]")
    assert code == 0
    assert "OK" in out
    assert "factor 2^1" in out


def test_parse_error_statuses(capsys):
    code, _, err = run(capsys, "expand", "Z9[0]")
    assert code == 2 and "Z9" in err
    code, _, err = run(capsys, "gn", "[T3[1]")
    assert code == 2
    code, _, err = run(capsys, "fprime", "--deltas", "b;;q")
    assert code == 2


def test_usage_error_exits_two(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_subset_guard(capsys):
    big = "[" + ", ".join(["H1[0]"] * 21) + "]"
    code, _, err = run(capsys, "fun-eval", "--tuple", big, "--n", "20")
    assert code == 2
    assert "--force" in err
    # force is accepted on small inputs
    code, _, _ = run(capsys, "fprime", "--deltas", "b", "--force")
    assert code == 0


def test_json_matches_text_for_series(capsys):
    code, text_out, _ = run(capsys, "gn", "[H1[0], H1[0], Q2[0]]")
    code, json_out, _ = run(capsys, "gn", "--format", "json", "[H1[0], H1[0], Q2[0]]")
    doc = json.loads(json_out)
    assert doc["text"] == text_out.strip()
    assert doc["truncation"] == 3
    assert doc["terms"] == [
        {"coeff": 2, "monomial": "b*c^2", "zeta": True, "degree": 3, "order": 4}]


def _series_fields_from_text(text, truncation):
    parsed = parse_series(text, truncation)
    return {
        (z.text(),): (coeff, z.degree, zeta_order(z))
        for z, coeff in parsed.terms.items()
    }


def test_json_and_text_agree_randomized(capsys):
    rng = random.Random(99)
    tags = list(CEType)
    checked = 0
    for _ in range(100):
        mode = rng.randrange(3)
        if mode == 0:
            sym = DecoratedSymbol(rng.choice(tags), rng.randint(-2, 2)).text()
            code, text_out, _ = run(capsys, "g1", sym)
            code, json_out, _ = run(capsys, "g1", "--format", "json", sym)
            doc = json.loads(json_out)
            assert parse_l1(doc["text"]) == parse_l1(text_out.strip())
            rebuilt = parse_l1("0")
            for t in doc["a_terms"]:
                rebuilt = rebuilt + t["coeff"] * parse_l1(t["var"])
            if doc["b"]:
                rebuilt = rebuilt + parse_l1("b")
            if doc["c"]:
                rebuilt = rebuilt + parse_l1("c")
            assert rebuilt == parse_l1(text_out.strip())
        elif mode == 1:
            sym = DecoratedSymbol(rng.choice(tags), rng.randint(-2, 2)).text()
            code, text_out, _ = run(capsys, "expand", sym)
            code, json_out, _ = run(capsys, "expand", "--format", "json", sym)
            doc = json.loads(json_out)
            assert doc["text"] == text_out.strip()
        else:
            z = SymbolTuple([DecoratedSymbol(rng.choice(tags), rng.randint(-1, 1))
                             for _ in range(rng.randint(0, 2))])
            code, text_out, _ = run(capsys, "gn", z.text())
            code, json_out, _ = run(capsys, "gn", "--format", "json", z.text())
            doc = json.loads(json_out)
            assert doc["text"] == text_out.strip()
            got = {(("Z{" + t["monomial"] + "}") if t["zeta"] else t["monomial"],):
                   (t["coeff"], t["degree"], t["order"]) for t in doc["terms"]}
            want = _series_fields_from_text(text_out.strip(), doc["truncation"])
            assert got == want
        checked += 1
    assert checked == 100


def test_printed_series_reparse(capsys):
    for args, n in [(("gn", "[T3[1], T2[0]]"), 2),
                    (("fprime", "--deltas", "b;c", "--N", "3"), 3),
                    (("series-f", "--l", "t2[0] + b", "--N", "2"), 2)]:
        code, out, _ = run(capsys, *args)
        assert code == 0
        reparsed = parse_series(out.strip(), n)
        assert reparsed.text() == out.strip()


def test_printed_values_reparse(capsys, tmp_path):
    from ceinv.classification import CoefficientGroup, parse_group_vector
    from ceinv.group_l1 import expand_to_y, parse_ycombination
    from ceinv.symbols import parse_symbol

    code, out, _ = run(capsys, "expand", "Q4[-2]")
    assert parse_ycombination(out.strip()) == expand_to_y(parse_symbol("Q4[-2]"))

    code, out, _ = run(capsys, "g1", "E0[2]")
    assert parse_l1(out.strip()).text() == out.strip()

    table = tmp_path / "seed.tbl"
    table.write_text("group: 0, 2\nn: 1\n[T2[0]] = (3, 1)\n")
    code, out, _ = run(capsys, "extend", "--table", str(table), "--query", "[T1[0]]")
    assert code == 0
    vec = parse_group_vector(out.strip(), CoefficientGroup((0, 2)))
    assert vec.coords == (3, 1)
