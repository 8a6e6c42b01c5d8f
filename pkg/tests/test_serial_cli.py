import io
import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import chains_inside, jopens, jpoints, ncof_opens, posets, rlopens, smyth_inside
from valsep import serial as S
from valsep.cli import COMMANDS, run

F = Fraction


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def _report(*argv):
    code, out, err = _run(*argv)
    assert code == 0, err
    return json.loads(out)


def test_lenient_rationals():
    assert S.loads("[[0,1],[2,5/2]]") == [[0, 1], [2, "5/2"]]
    assert S.read_scalar("inf") is not None and S.read_rational("-3/4") == F(-3, 4)
    with pytest.raises(S.ParseError):
        S.loads("[[0,1")


@given(rlopens())
def test_rlopen_round_trip(U):
    assert S.rlopen_from_json(S.loads(S.dumps(S.rlopen_to_json(U)))) == U


@given(jopens())
def test_jopen_round_trip(U):
    assert S.jopen_from_json(S.loads(S.dumps(S.jopen_to_json(U)))) == U


@given(jpoints())
def test_jpoint_round_trip(p):
    assert S.jpoint_from_json(S.loads(S.dumps(S.jpoint_to_json(p)))) == p


@given(ncof_opens())
def test_ncof_round_trip(U):
    assert S.ncof_from_json(S.loads(S.dumps(S.ncof_to_json(U)))) == U


@given(posets())
def test_poset_round_trip(P):
    Q = S.poset_from_json(S.loads(S.dumps(S.poset_to_json(P))))
    assert sorted(map(str, P.elements)) == sorted(Q.elements)
    assert {(str(a), str(b)) for a, b in P.relation()} == Q.relation()


@given(smyth_inside())
def test_candidate_round_trip(Q):
    assert S.candidate_from_json(S.loads(S.dumps(S.candidate_to_json(Q.rep)))) == Q.rep


@given(chains_inside())
def test_chain_round_trip(ch):
    assert S.chain_from_json(S.loads(S.dumps(S.chain_to_json(ch)))) == ch


def test_every_subcommand_is_registered():
    assert set(COMMANDS) == {"tix-decompose", "decompose-johnstone", "decompose-ncof",
                             "escape-falsify", "rl-measure", "ring-normalize", "compactness",
                             "refute-pc", "consonance", "lambda-bar", "fubini-check",
                             "demo-separation"}


def test_rl_measure():
    rep = _report("rl-measure", "[[0,1],[2,5/2]]")
    assert rep["command"] == "rl-measure" and rep["result"]["lambda"] == "3/2"
    assert set(rep) == {"command", "inputs", "result", "checks", "version"}
    assert S.rlopen_from_json(rep["inputs"]) == S.rlopen_from_json([[0, 1], [2, "5/2"]])


def test_compactness_ascending_reports_cover():
    code, out, _ = _run("compactness",
                        '{"blocks": [{"chain": {"limit": 1, "c": 1/2, "q": 1/2, "dir": "ascending"}}]}')
    rep = json.loads(out)
    assert code == 0 and rep["result"]["status"] == "NotCompact"
    assert "cover" in json.dumps(rep["result"])


def test_tix_cli():
    rep = _report("tix-decompose", '{"poset": {"points": ["a", "b"], "leq": [["a", "b"]]}, '
                                   '"values": [[[], 0], [["b"], 1], [["a", "b"], 3]]}')
    assert [t["coefficient"] for t in rep["result"]["terms"]] == ["1", "2"]
    rep = _report("tix-decompose", '{"poset": {"points": ["a", "b"], "leq": [["a", "b"]]}, '
                                   '"values": [[[], 0], [["b"], 1], [["a", "b"], "inf"]]}')
    assert rep["result"]["s"] == "1" and rep["result"]["u_s"] == ["b"]


def test_johnstone_cli_round_trip():
    rep = _report("decompose-johnstone", '{"theta": [[[0, 0], 1], [[2, "w"], 1/3]], "r": 1/2}')
    assert rep["result"]["theta"] == rep["inputs"]["theta"] and rep["result"]["r"] == "1/2"
    theta = S.discrete_j_from_json(rep["inputs"]["theta"])
    assert theta.as_dict() == S.discrete_j_from_json(rep["result"]["theta"]).as_dict()


def test_ncof_and_escape_cli():
    rep = _report("decompose-ncof", '{"alpha": [[3, 2]], "r": 1/3}')
    assert rep["result"]["r"] == "1/3"
    rep = _report("escape-falsify", '{"theta": [], "r": 1, "family": [[[[0, "w"], 1/2]]]}')
    assert rep["result"]["k"] == 1 and rep["result"]["gap"] == "1"


def test_ring_cli():
    rep = _report("ring-normalize", '{"space": "Rl", "expr": {"op": "diff", "args": [[[0,2]], [[1,3]]]}}')
    assert rep["result"]["crescents"] == [{"outer": [["0", "2"]], "inner": [["1", "2"]]}]


def test_refute_and_consonance_cli():
    rep = _report("refute-pc", '{"U": [[0,1]], "r": 1/2, "A": [[0, 1/2]]}')
    assert rep["result"]["bound"] == "3/8"
    rep = _report("consonance", '{"Q": [0, 1], "r": 1/2}')
    assert rep["result"]["bound"] == "3/8"


def test_lambda_bar_and_fubini_cli():
    rep = _report("lambda-bar", "[[[0,1]], [[0,2]]]")
    assert rep["result"]["lambda_bar"] == "2"
    rep = _report("fubini-check", '{"P": {"points": ["0","1"], "leq": [["0","1"]]}, '
                                  '"Q": {"points": ["a"]}, "h": [["0","a",1], ["1","a",3]], '
                                  '"nu": [["0",1], ["1",1]], "xi": [["a",1]]}')
    assert rep["result"]["equal"] and rep["result"]["lhs"] == "4"


def test_demo_separation():
    rep = _report("demo-separation", "--seed", "3")
    assert "johnstone" in rep["result"] and "sorgenfrey" in rep["result"]
    assert rep["result"]["sorgenfrey"]["certificates"]
    assert all(c["pass"] for c in rep["checks"])


def test_pretty_output():
    code, out, _ = _run("rl-measure", "--pretty", "[[0,1],[2,5/2]]")
    assert code == 0 and "lambda" in out and "pass" in out


@pytest.mark.parametrize("argv", [
    ("rl-measure", "[[0,1"),
    ("rl-measure", "[[1,0]]"),
    ("refute-pc", '{"U": [[0,1]], "r": 2, "A": [[0]]}'),
    ("consonance", '{"Q": {"blocks": [{"chain": {"limit": 0, "c": 1, "q": 1/2, "include_limit": false}}]}, "r": 1}'),
    ("compactness",),
    ("tix-decompose", '{"poset": {"points": ["a","b"], "leq": [["a","b"]]}, "values": [[["b"], 2], [["a","b"], 1]]}'),
])
def test_errors_exit_with_two(argv):
    code, out, err = _run(*argv)
    assert code == 2 and not out and err


def test_reports_are_deterministic():
    for argv in (("demo-separation", "--seed", "5"), ("refute-pc", "--seed", "9"),
                 ("escape-falsify", "--seed", "2")):
        assert _run(*argv)[1] == _run(*argv)[1]


def test_file_input(tmp_path):
    p = tmp_path / "u.json"
    p.write_text("[[0, 1/2]]")
    assert _report("rl-measure", "--file", str(p))["result"]["lambda"] == "1/2"


@given(st.integers(0, 50))
def test_echoed_inputs_reparse(seed):
    rep = _report("refute-pc", "--seed", str(seed))
    A = [S.smyth_from_json(a) for a in rep["inputs"]["A"]]
    again = _report("refute-pc", S.dumps({"U": rep["inputs"]["U"], "r": rep["inputs"]["r"],
                                         "A": [S.candidate_to_json(Q.rep) for Q in A]}))
    assert again["result"] == rep["result"]
