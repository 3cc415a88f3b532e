import json

from levelzero.cli import eval_ring_expr, main
from levelzero.glnfq import ZElem, all_labels


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_zelevinsky_derivative_formula(capsys):
    code, out = run(capsys, "zelevinsky", "D( ind(chi0,chi1) )", "--q", "3")
    assert code == 0
    chi0, chi1 = all_labels(1, 3)
    expect = (ZElem.of(chi0) + ZElem.unit(3)) * (ZElem.of(chi1) + ZElem.unit(3))
    assert out.strip() == repr(expect)


def test_expression_grammar():
    q = 2
    chi = all_labels(1, q)[0]
    assert eval_ring_expr("chi0", q) == ZElem.of(chi)
    assert eval_ring_expr("2 * chi0 + 1_R", q) \
        == 2 * ZElem.of(chi) + ZElem.unit(q)
    assert eval_ring_expr("ind(chi0, chi0)", q) \
        == ZElem.of(chi) * ZElem.of(chi)
    assert eval_ring_expr("(chi0 + 1_R) * (chi0 + 1_R)", q) \
        == eval_ring_expr("D(ind(chi0, chi0))", q)


def test_usage_errors(capsys):
    code, _ = run(capsys, "zelevinsky", "nonsense_name", "--q", "2")
    assert code == 2
    code, _ = run(capsys, "verify", "main", "--p", "2", "--M", "2")
    assert code == 2  # missing --I and --m
    code, _ = run(capsys, "decompose", "--I", "1,x", "--p", "2",
                  "--M", "2", "--m", "1")
    assert code == 2


def test_budget_exit_code(capsys):
    code, _ = run(capsys, "chartab", "--n", "3", "--p", "3", "--m", "2",
                  "--budget", "10")
    assert code == 3


def test_chartab_output(capsys):
    code, out = run(capsys, "chartab", "--n", "2", "--p", "3", "--m", "1")
    assert code == 0
    assert out.startswith("levelzero-chartable 1\n")
    assert "order 48" in out


def test_verify_main_pass(capsys):
    code, out = run(capsys, "verify", "main", "--I", "1,1", "--p", "2",
                    "--M", "2", "--m", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["verdict"] == "PASS"
    assert payload["schema"] == 1


def test_decompose_deterministic(capsys):
    args = ("decompose", "--I", "1,1", "--p", "2", "--M", "2", "--m", "2")
    code1, out1 = run(capsys, *args)
    code2, out2 = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    dims = {d["character"]: d["dim"] for d in payload["decompositions"]}
    assert dims == {"ind_level_2": 6, "u_2": 3}


def test_verify_lemma_targets(capsys):
    for target, m in (("clifford", "1"), ("orbits", "1"),
                      ("iwahori", "2"), ("lattice", "2")):
        code, out = run(capsys, "verify", target, "--I", "1,1",
                        "--p", "2", "--M", "2", "--m", m)
        assert code == 0, target
        assert json.loads(out)["verdict"] == "PASS"
