import json
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import size_plus_one_region
from srrdesign import formats as fmt
from srrdesign.cli import main
from srrdesign.construct import construct_k2, construct_simplex_t_fold
from srrdesign.gf2geom import PointMultiset, num_points
from srrdesign.region import RegionSpec
from srrdesign.service import in_service_region

PLUS_ONE = json.dumps(fmt.region_to_json(size_plus_one_region()))
K2_223 = json.dumps(fmt.region_to_json(RegionSpec.k2(2, 2, 3)))
SIMPL12 = json.dumps({"k": 2, "n": {"1": 1, "2": 1, "3": 1}})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda k: st.lists(st.integers(0, 9), min_size=num_points(k), max_size=num_points(k))
    .map(lambda v: RegionSpec(k, tuple(v)))))
def test_region_round_trip(T):
    assert fmt.region_from_json(json.loads(json.dumps(fmt.region_to_json(T)))) == T


def test_region_json_layout():
    obj = fmt.region_to_json(RegionSpec.k2(2, 2, 3))
    assert obj == {"k": 2, "T": [{"subset": [1], "value": 2}, {"subset": [2], "value": 2},
                                 {"subset": [1, 2], "value": 3}]}


@pytest.mark.parametrize("bad", [
    {"k": 2}, {"k": 0, "T": []}, {"k": 2, "T": [{"subset": [1], "value": 1}]},
    {"k": 2, "T": [{"subset": [1], "value": 1}, {"subset": [1], "value": 1}]},
    {"k": 1, "T": [{"subset": [1], "value": 1.5}]}, {"k": 1, "T": [{"subset": ["a"], "value": 1}]},
    [1, 2],
])
def test_region_rejects(bad):
    with pytest.raises(fmt.FormatError):
        fmt.region_from_json(bad)


def test_demand_round_trip_and_rationals():
    lam = (F(3, 2), F(0), F(7))
    obj = fmt.demand_to_json(lam)
    assert obj == {"lambda": ["3/2", 0, 7]}
    assert fmt.demand_from_json(obj) == lam
    for bad in ({"lambda": [0.5]}, {"lambda": [True]}, {"lambda": ["-1"]}, {"lambda": ["1/0"]}, {"lambda": []}):
        with pytest.raises(fmt.FormatError):
            fmt.demand_from_json(bad)


def test_multiset_and_allocation_round_trip():
    G = PointMultiset.from_counts(3, {1: 2, 4: 2, 7: 1})
    assert fmt.multiset_from_json(fmt.multiset_to_json(G)) == G
    with pytest.raises(fmt.FormatError):
        fmt.multiset_from_json({"k": 2, "n": {"9": 1}})
    alloc = in_service_region(G, (1, F(1, 2), 1))
    assert alloc is not None
    back = fmt.allocation_from_json(fmt.allocation_to_json(alloc), 3)
    assert back.nonzero() == alloc.nonzero()
    assert all(isinstance(e["rate"], str) for e in fmt.allocation_to_json(alloc))


def test_recipe_round_trip():
    for r in (construct_k2(2, 2, 3), construct_simplex_t_fold(3, 2)):
        back = fmt.recipe_from_json(json.loads(json.dumps(fmt.recipe_to_json(r))))
        assert back.multiset == r.multiset and back.claimed_size == r.claimed_size


def test_cli_construct_k2(capsys):
    code, out, _ = run(capsys, "construct", "k2", "2", "2", "3")
    assert code == 0
    data = json.loads(out)
    assert data["verification"]["verdict"] == "certified optimal"
    assert data["recipe"]["multiset"] == {"k": 2, "n": {"1": 2, "2": 2}}
    code, out, _ = run(capsys, "--format", "markdown", "construct", "k2", "2", "2", "3")
    assert "size 4: certified optimal" in out


def test_cli_rejects_bad_triple(capsys):
    code, _, err = run(capsys, "construct", "k2", "3", "3", "2")
    assert code == 2 and "Sigma < max(X,Y)" in err


def test_cli_member_negative(capsys):
    code, out, _ = run(capsys, "check", "member", SIMPL12, '{"lambda": ["3/2", "3/2"]}')
    assert code == 1 and json.loads(out) == {"member": False, "allocation": None}
    code, out, _ = run(capsys, "check", "member", SIMPL12, '{"lambda": [2, 0]}')
    assert code == 0 and json.loads(out)["member"]


def test_cli_covers(capsys):
    code, out, _ = run(capsys, "check", "covers", SIMPL12, K2_223)
    assert code == 1 and json.loads(out)["violated"] == [1, 2]
    code, _, err = run(capsys, "check", "covers", SIMPL12, PLUS_ONE)
    assert code == 2 and "does not match" in err


def test_cli_node_cap(capsys, monkeypatch):
    monkeypatch.setenv("SRR_NODE_LIMIT", "1")
    code, _, err = run(capsys, "nmin", PLUS_ONE)
    assert code == 3 and "node limit" in err
    monkeypatch.delenv("SRR_NODE_LIMIT")
    code, _, _ = run(capsys, "--node-limit", "1", "bounds", PLUS_ONE)
    assert code == 3


def test_cli_input_errors(capsys, tmp_path):
    assert run(capsys, "bounds", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "bounds", "{not json")[0] == 2
    assert run(capsys, "region", "contains", PLUS_ONE)[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_cli_nmin_size_plus_one(capsys, tmp_path):
    path = tmp_path / "plus_one.json"
    path.write_text(PLUS_ONE)
    code, out, _ = run(capsys, "nmin", str(path))
    data = json.loads(out)
    assert code == 0
    assert data["exact"]["n"] == 6
    b = data["bounds"]
    assert (b["thm8"], b["cor7LpValue"], b["cor7Ilp"], b["best"]) == (5, "19/4", 6, 6)


def test_cli_nmin_skips_exact_above_limit(capsys):
    T = json.dumps(fmt.region_to_json(RegionSpec.uniform(5, 1)))
    code, out, _ = run(capsys, "nmin", T, "--lp-only")
    data = json.loads(out)
    assert code == 0 and data["exact"] is None and "skipped" in data["notice"]


def test_cli_region_commands(capsys):
    raw = json.dumps(fmt.region_to_json(RegionSpec.k2(5, 1, 3)))
    code, out, _ = run(capsys, "region", "canonicalize", raw)
    data = json.loads(out)
    assert data["changed"] and data["canonical"]["T"][0] == {"subset": [1], "value": 3}
    _, out, _ = run(capsys, "region", "vertices", K2_223)
    assert json.loads(out) == [[0, 0], [0, 2], [1, 2], [2, 0], [2, 1]]
    _, out, _ = run(capsys, "region", "gen-set", raw)
    assert json.loads(out) == [[2, 1], [3, 0]]
    code, out, _ = run(capsys, "region", "contains", K2_223, '{"lambda": ["3/2", "3/2"]}')
    assert code == 0 and json.loads(out) == {"contains": True}


def test_cli_csv_and_markdown(capsys):
    _, out, _ = run(capsys, "bounds", PLUS_ONE, "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "bound,value,applicable,notes"
    assert "best,6,True,max of applicable bounds" in lines
    _, out, _ = run(capsys, "--format", "markdown", "bounds", PLUS_ONE)
    assert "| x1 + x2 = 0 | e1, e2 | n2 + n3 + n4 + n5 >= 3 |" in out


def test_cli_output_is_deterministic(capsys):
    first = run(capsys, "nmin", PLUS_ONE)[1]
    assert run(capsys, "nmin", PLUS_ONE)[1] == first


def test_cli_sweep_small(capsys):
    code, out, _ = run(capsys, "sweep-k2", "--max", "2")
    data = json.loads(out)
    assert code == 0 and data["allAgree"] and len(data["instances"]) == 14


def test_module_entry_point_and_stdin():
    res = subprocess.run([sys.executable, "-m", "srrdesign", "region", "vertices", "-"],
                         input=K2_223, capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)[-1] == [2, 1]
