import csv
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from symdisc import io
from symdisc.cli import RunConfig, main, parse_grid
from symdisc.errors import ParseError, UsageError
from symdisc.gamma_ops import generate_pure
from symdisc.joint_spectrum import JointSpectrum
from symdisc.polydisc_geometry import SymPoint

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)
NIL = np.array([[0, 1], [0, 0]], dtype=complex)


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def point_file(tmp_path, s, p):
    n = len(s) + 1
    return write(tmp_path, "pt.json", io.point_to_json(SymPoint(n, np.array(s, dtype=complex), p)))


# --- schemas -------------------------------------------------------------


@given(st.integers(0, 4), st.integers(0, 4), st.data())
def test_matrix_round_trip_is_lossless(r, c, data):
    vals = data.draw(st.lists(st.tuples(finite, finite), min_size=r * c, max_size=r * c))
    m = np.array([complex(a, b) for a, b in vals], dtype=complex).reshape(r, c)
    back = io.matrix_from_json(io.loads(io.dumps(io.matrix_to_json(m))))
    assert back.shape == m.shape
    assert np.array_equal(back.view(float), m.view(float))


def test_matrix_schema_layout():
    obj = io.matrix_to_json(np.array([[1, 2j], [3, 4]]))
    assert obj == {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 2.0], [3.0, 0.0], [4.0, 0.0]]}


@pytest.mark.parametrize(
    "bad",
    [
        {"rows": 2, "cols": 2, "data": [[1, 0]]},
        {"rows": 1, "cols": 1, "data": [[1, 0, 0]]},
        {"rows": 1, "cols": 1},
        {"rows": -1, "cols": 1, "data": []},
        [1, 2],
    ],
)
def test_matrix_schema_errors(bad):
    with pytest.raises(ParseError):
        io.matrix_from_json(bad)


def test_point_round_trip():
    x = SymPoint(3, np.array([0.1 + 0.2j, 1 / 3]), 0.5 - 1e-17j)
    y = io.point_from_json(io.loads(io.dumps(io.point_to_json(x))))
    assert y.n == 3 and np.array_equal(y.s, x.s) and y.p == x.p


def test_point_schema_errors():
    with pytest.raises(ParseError):
        io.point_from_json({"n": 3, "s": [[1, 0]], "p": [0, 0]})
    with pytest.raises(ParseError):
        io.point_from_json({"n": 2, "s": [[1, 0]]})


def test_spectrum_and_tuple_round_trip():
    js = JointSpectrum(points=np.array([[1 + 1j, 2], [3, 4j]]))
    back = io.spectrum_from_json(io.loads(io.dumps(io.spectrum_to_json(js))))
    assert np.array_equal(back.points, js.points)
    t = generate_pure([np.diag([0.3, 0.1j])], 2)
    u = io.tuple_from_json(io.loads(io.dumps(io.tuple_to_json(t))))
    assert np.array_equal(u.p_op, t.p_op) and np.array_equal(u.s_ops[0], t.s_ops[0])


def test_matrix_array_forms():
    m = io.matrix_to_json(NIL)
    assert len(io.matrices_from_json([m, m])) == 2
    assert len(io.matrices_from_json({"matrices": [m]})) == 1
    with pytest.raises(ParseError):
        io.matrices_from_json({"S": []})


def test_malformed_json_is_parse_error():
    with pytest.raises(ParseError):
        io.loads('{"rows": 1,')


def test_trace_csv_round_trip():
    from symdisc.variety import build_variety, trace

    v = build_variety([NIL, NIL])
    text = io.trace_csv(3, trace(v, 2, 3))
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["p_re", "p_im", "s1_re", "s1_im", "s2_re", "s2_im", "region"]
    pts, tags = io.read_trace_csv(text)
    assert pts.shape == (12, 3) and len(tags) == 12


# --- config ----------------------------------------------------------------


def test_run_config_validation():
    RunConfig()
    with pytest.raises(UsageError):
        RunConfig(tol=0)
    with pytest.raises(UsageError):
        RunConfig(grid=(0, 4))
    assert parse_grid("4x8") == (4, 8)


# --- commands --------------------------------------------------------------


def test_member_distinguished(tmp_path, capsys):
    assert main(["member", point_file(tmp_path, [3, 3], 1)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "DistinguishedBoundary"


def test_member_outside(tmp_path, capsys):
    assert main(["member", point_file(tmp_path, [2, 2.5], 0.5)]) == 1
    assert capsys.readouterr().out.splitlines()[0] == "Outside"


def test_member_interior_prints_chain(tmp_path, capsys):
    assert main(["member", point_file(tmp_path, [1, 1], 0.25)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "OpenInterior" and out[1].startswith("c[1] = [[0.8")


def test_member_truncated_file(tmp_path, capsys):
    assert main(["member", write(tmp_path, "bad.json", '{"n": 3, "s": [[2, 0')]) == 2
    assert "malformed JSON" in capsys.readouterr().err


def test_member_missing_file(tmp_path):
    assert main(["member", str(tmp_path / "nope.json")]) == 2


def test_variety_trace_csv(tmp_path, capsys):
    path = write(tmp_path, "f.json", [io.matrix_to_json(NIL)])
    assert main(["variety", "trace", path]) == 0
    rows = list(csv.reader(capsys.readouterr().out.splitlines()))
    assert rows[0] == ["p_re", "p_im", "s1_re", "s1_im", "region"]
    assert len(rows) - 1 == 64
    assert len({(r[0], r[1]) for r in rows[1:]}) == 25  # 8 angles at r = 0 share p = 0


def test_variety_invalid_and_empty(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", [io.matrix_to_json(np.diag([2.0, 0.0])), io.matrix_to_json(np.zeros((2, 2)))])
    assert main(["variety", "check", bad]) == 1
    assert json.loads(capsys.readouterr().out)["valid"] is False
    assert main(["variety", "trace", bad]) == 1
    assert main(["variety", "trace", write(tmp_path, "e.json", [])]) == 2


def test_spectrum_command(tmp_path, capsys):
    path = write(tmp_path, "m.json", [io.matrix_to_json(np.diag([1.0, 2.0])), io.matrix_to_json(np.diag([3.0, 4.0]))])
    assert main(["spectrum", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["order"] == 2 and out["points"] == [[[1.0, 0.0], [3.0, 0.0]], [[2.0, 0.0], [4.0, 0.0]]]


def test_fot_command(tmp_path, capsys):
    t = generate_pure([np.diag([0.5, -0.3j])], 3)
    path = write(tmp_path, "t.json", io.tuple_to_json(t))
    assert main(["fot", path]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] and len(out["A"]) == 1 and len(out["B"]) == 1
    statuses = {r["identity"]: r["status"] for r in out["identities"]}
    assert statuses["defect_intertwine"] == "Pass" and statuses["self_commutator.1"] == "Skipped"


def test_dilate_command(tmp_path, capsys):
    t = generate_pure([np.diag([0.5, -0.3j])], 3)
    path = write(tmp_path, "t.json", io.tuple_to_json(t))
    blocks = tmp_path / "blocks.json"
    assert main(["--degree", "6", "dilate", path, "--dump-blocks", str(blocks)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["degree"] == 6 and max(out["intertwining"].values()) <= 1e-12
    dumped = json.loads(blocks.read_text())
    assert dumped["V"]["rows"] == 14 and dumped["W"]["cols"] == 8


def test_vncheck_command(tmp_path, capsys):
    t = generate_pure([np.diag([0.5, -0.3j])], 3)
    path = write(tmp_path, "t.json", io.tuple_to_json(t))
    assert main(["vncheck", path, "--polys", "10"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["polynomials"] == 10 and out["worst_slack"] >= -1e-6
    wrong = write(tmp_path, "f.json", [io.matrix_to_json(np.diag([0.1, 0.1]))])
    assert main(["vncheck", path, "--variety", wrong, "--polys", "2"]) == 1


def test_outputs_are_byte_identical(tmp_path):
    t = generate_pure([np.diag([0.5, -0.3j]), np.diag([0.1, 0.2])], 2)
    tp = write(tmp_path, "t.json", io.tuple_to_json(t))
    fp = write(tmp_path, "f.json", [io.matrix_to_json(NIL), io.matrix_to_json(NIL)])
    for argv in (["variety", "trace", fp], ["fot", tp], ["dilate", tp], ["vncheck", tp, "--polys", "5"]):
        outs = []
        for k in range(2):
            out = tmp_path / f"out{k}"
            assert main(["--seed", "7", "--out", str(out)] + argv) == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]


def test_selftest_subset(capsys):
    assert main(["selftest", "--only", "1", "3", "11"]) == 0
    out = capsys.readouterr().out
    assert out.count("[PASS]") == 3 and "3/3 criteria passed" in out


def test_selftest_tiny_tolerance_fails(capsys):
    assert main(["--tol", "1e-15", "selftest", "--only", "6", "7"]) == 1
    out = capsys.readouterr().out
    assert "failed: 6, 7" in out
