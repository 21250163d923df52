import json
import random

import pytest

from conftest import FIELDS, field_id, mat, rand_matrix
from idemdecomp.cli import run
from idemdecomp.errors import PreconditionError, ShapeError
from idemdecomp.fields import QQ, PrimeField
from idemdecomp.matrix import Matrix
from idemdecomp.serialize import (
    cert_from_json,
    cert_to_json,
    decomposition_from_json,
    decomposition_to_json,
    matrix_from_json,
    matrix_to_json,
)
from idemdecomp.synthesis import decompose3, verify_decomposition

F2 = PrimeField(2)


@pytest.mark.parametrize("field", FIELDS, ids=field_id)
def test_matrix_round_trip(field):
    rng = random.Random(1)
    for _ in range(20):
        a = rand_matrix(field, rng.randint(1, 4), rng)
        if field is QQ:
            a = a.scale(QQ.parse("-3/7"))
        assert matrix_from_json(json.loads(json.dumps(matrix_to_json(a)))) == a


def test_matrix_json_validation():
    assert matrix_to_json(mat(QQ, [[1, "1/2"]])) == {"field": "Q", "entries": [["1", "1/2"]]}
    assert matrix_from_json({"entries": [["1"]]}, "Fp:3") == mat(PrimeField(3), [[1]])
    with pytest.raises(PreconditionError):
        matrix_from_json({"field": "Q", "entries": [["1"]]}, "Fp:3")
    with pytest.raises(ShapeError):
        matrix_from_json({"field": "Q", "entries": [["1", "2"], ["3"]]})
    with pytest.raises(PreconditionError):
        matrix_from_json({"entries": [["1"]]})
    with pytest.raises(PreconditionError):
        matrix_from_json({"field": "Q", "entries": [[1.5]]})


def test_decomposition_and_cert_round_trip():
    a = mat(QQ, [[1, 2, 0], [0, 3, 1], [4, 0, 0]])
    d = decompose3(a)
    back = decomposition_from_json(json.loads(json.dumps(decomposition_to_json(d))))
    assert back.target == a and back.terms == d.terms and verify_decomposition(back)
    s = mat(QQ, [[1, 1], [0, 1]])
    from idemdecomp.matrix import SimilarityCert

    c = SimilarityCert.from_matrix(s)
    assert cert_from_json(cert_to_json(c)) == c


# -- CLI ---------------------------------------------------------------------------

def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def call(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(out[-1]) if out else None


def test_cli_decompose_then_verify(tmp_path, capsys):
    m = write(tmp_path, "w.json", {"field": {"Fp": 2}, "entries": [["0", "1"], ["1", "1"]]})
    code, out = call(capsys, ["decompose3", m])
    assert code == 0 and out["verified"] and len(out["terms"]) == 3
    d = write(tmp_path, "d.json", out)
    code, out = call(capsys, ["verify", d])
    assert code == 0 and out == {"verified": True, "terms": 3}
    code, out = call(capsys, ["verify", d, "--matrix", m, "--field", "Fp:2"])
    assert code == 0


def test_cli_verify_rejects_tampered(tmp_path, capsys):
    m = write(tmp_path, "a.json", {"field": "Q", "entries": [["1", "2"], ["3", "4"]]})
    _, out = call(capsys, ["decompose3", m])
    out["terms"][0]["idempotent"]["entries"][0][0] = "7"
    code, res = call(capsys, ["verify", write(tmp_path, "d.json", out)])
    assert code == 1 and res["verified"] is False


def test_cli_zero_matrix(tmp_path, capsys):
    m = write(tmp_path, "z.json", {"field": "Q", "entries": [["0", "0"], ["0", "0"]]})
    code, out = call(capsys, ["decompose3", m])
    assert code == 0 and out["terms"] == [] and out["verified"] is True


def test_cli_check2(tmp_path, capsys):
    m = write(tmp_path, "w.json", {"field": {"Fp": 2}, "entries": [["0", "1"], ["1", "1"]]})
    code, out = call(capsys, ["check2", "--alpha", "1", "--beta", "1", m])
    assert code == 0 and out["composite"] is False and out["reason"]
    n = write(tmp_path, "n.json", {"field": "Q", "entries": [["0", "1"], ["0", "0"]]})
    code, out = call(capsys, ["check2", "--alpha", "1", "--beta", "-1", n])
    assert out == {"composite": True, "reason": None}


def test_cli_canonical(tmp_path, capsys):
    m = write(tmp_path, "m.json", {"field": "Q", "entries": [["2", "0"], ["0", "2"]]})
    code, out = call(capsys, ["canonical", "--form", "invariant-factors", m])
    assert code == 0 and out["invariant_factors"] == [["-2", "1"], ["-2", "1"]]
    code, out = call(capsys, ["canonical", m])
    assert code == 0 and out["matrix"]["entries"] == [["2", "0"], ["0", "2"]]
    code, out = call(capsys, ["canonical", "--form", "primary", m])
    assert code == 0 and len(out["blocks"]) == 2


def test_cli_ell_witness_oracle(capsys):
    assert call(capsys, ["ell", "--n", "3", "--field", "Q"]) == (0, {"ell": 3})
    assert call(capsys, ["ell", "--n", "2", "--field", "Fp:2"]) == (0, {"ell": 3})
    code, out = call(capsys, ["witness", "--n", "2", "--field", "Fp:2"])
    assert out["matrix"]["entries"] == [["0", "1"], ["1", "1"]]
    code, out = call(capsys, ["witness", "--n", "2", "--field", "Q"])
    assert code == 1 and out["error"] == "input"
    code, out = call(capsys, ["oracle", "--n", "2", "--q", "2", "--mode", "min-terms"])
    assert code == 0 and out["mismatches"] == 0 and out["checked"] == 16
    code, out = call(capsys, ["oracle", "--n", "2", "--q", "3"])
    assert code == 0 and out["mismatches"] == 0


def test_cli_usage_errors(tmp_path, capsys):
    assert call(capsys, ["frobnicate"])[0] == 1
    assert call(capsys, ["ell", "--n", "2", "--field", "Fp:4"])[0] == 1
    assert call(capsys, ["decompose3", str(tmp_path / "missing.json")])[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call(capsys, ["decompose3", str(bad)])[0] == 1
    rect = write(tmp_path, "r.json", {"field": "Q", "entries": [["1", "2"]]})
    assert call(capsys, ["decompose3", rect])[0] == 1
    m = write(tmp_path, "m.json", {"field": "Q", "entries": [["1"]]})
    assert call(capsys, ["decompose3", "--field", "Fp:3", m])[0] == 1
    assert call(capsys, ["oracle", "--n", "5", "--q", "2"])[0] == 1


def test_cli_stdin(monkeypatch, capsys):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps({"field": "Q", "entries": [["1", "1"], ["0", "1"]]})))
    code, out = call(capsys, ["decompose3", "-"])
    assert code == 0 and out["verified"]


def test_cli_verification_failure_exit_code(tmp_path, capsys, monkeypatch):
    from idemdecomp import synthesis
    from idemdecomp.errors import VerificationError

    def boom(a, seed=0):
        raise VerificationError("forced", {"a": a})

    monkeypatch.setattr(synthesis, "decompose3", boom)
    m = write(tmp_path, "m.json", {"field": "Q", "entries": [["1"]]})
    code, out = call(capsys, ["decompose3", m])
    assert code == 2 and out["error"] == "verification" and out["payload"]["a"]["entries"] == [["1"]]
