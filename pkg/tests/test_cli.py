import json

import pytest

from testvariety.cli import main
from testvariety.config import CurveCache, certificate_to_record
from testvariety.pointless import find_pointless


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_field_make(capsys):
    code, out, _ = run(capsys, "field", "make", "3", "2")
    assert code == 0
    assert "[1, 0, 1]" in out


def test_field_make_json_stable(capsys):
    code, out1, _ = run(capsys, "--json", "field", "make", "2", "4")
    code2, out2, _ = run(capsys, "--json", "field", "make", "2", "4")
    assert code == code2 == 0
    assert out1 == out2
    assert json.loads(out1)["modulus"] == [1, 1, 0, 0, 1]


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc_info:
        main(["field", "make", "3"])
    assert exc_info.value.code == 2


def test_nonprime_is_usage_error(capsys):
    code, _, err = run(capsys, "field", "make", "6", "1")
    assert code == 2
    assert "not prime" in err


def test_curve_count(capsys, tmp_path):
    path = tmp_path / "curve.json"
    path.write_text(json.dumps({
        "p": 2, "k": 1, "modulus": [0, 1], "g": 1,
        "h": [[1]], "f": [[1], [1], [0], [1]],
    }))
    code, out, _ = run(capsys, "--json", "curve", "count", str(path), "2")
    assert code == 0
    assert json.loads(out)["count"] == 5


def test_zeta_commands(capsys):
    code, out, _ = run(capsys, "--json", "zeta", "from-counts", "2", "1", "1")
    assert code == 0
    assert json.loads(out)["coeffs"] == [1, -2, 2]
    code, out, _ = run(capsys, "--json", "zeta", "extrapolate", "2", "1", "12", "--l", "1,-2,2")
    assert code == 0
    assert json.loads(out)["count"] == 2**12 + 1 - ((1 + 1j) ** 12 + (1 - 1j) ** 12).real
    code, _, _ = run(capsys, "zeta", "extrapolate", "2", "1", "3", "--l", "1,-2,3")
    assert code == 1  # functional equation violated


def test_search_pointless_cli(capsys, tmp_path):
    cache = str(tmp_path / "cache.json")
    code, out, _ = run(capsys, "--json", "--cache", cache, "search-pointless", "3", "2", "--exhaustive")
    assert code == 0
    rec = json.loads(out)
    assert rec["l_poly"] == [1, -4, 9, -12, 9]
    code, _, err = run(capsys, "--cache", cache, "search-pointless", "2", "1", "--exhaustive")
    assert code == 3
    assert "space exhausted" in err


def test_search_pointless_json_deterministic(capsys, tmp_path):
    c1, out1, _ = run(capsys, "--json", "--cache", str(tmp_path / "a.json"),
                      "search-pointless", "3", "2", "--exhaustive")
    c2, out2, _ = run(capsys, "--json", "--cache", str(tmp_path / "b.json"),
                      "search-pointless", "3", "2", "--exhaustive")
    a, b = json.loads(out1), json.loads(out2)
    a.pop("elapsed_seconds"), b.pop("elapsed_seconds")
    assert a == b


def test_testvar_check_cli(capsys, tmp_path):
    cache = str(tmp_path / "cache.json")
    code, out, _ = run(capsys, "--cache", cache, "testvar", "check", "2", "1", "--mmax", "8")
    assert code == 0
    assert "PASS" in out


def test_weilres_cli(capsys, tmp_path):
    from testvariety import MPoly, PolySystem, make_field
    from testvariety.weilres import system_to_sexpr

    F4 = make_field(2, 2)
    eq = MPoly(F4, 1, [(F4.one, (2,)), (F4.one, (1,))])
    path = tmp_path / "sys.sx"
    path.write_text(system_to_sexpr(PolySystem(F4, 1, (eq,))))
    code, out, _ = run(capsys, "weilres", "compile", str(path), "2")
    assert code == 0
    assert out.startswith("(system (field 2 1")
    code, out, _ = run(capsys, "weilres", "verify", str(path), "2", "--m", "2")
    assert code == 0
    assert "true" in out


def test_logic_cli(capsys, tmp_path):
    sentence = tmp_path / "s.sx"
    sentence.write_text("p: 3\n(exists (x) (!= x 0))\n")
    code, out, _ = run(capsys, "logic", "normalize", str(sentence))
    assert code == 0
    assert "(system (field 3 1" in out
    cache = str(tmp_path / "cache.json")
    code, out, _ = run(capsys, "--cache", cache, "logic", "reduce", "--set", "mod4eq1", "--l", "13")
    assert code == 0
    assert out.strip() == "true"
    code, out, _ = run(capsys, "--cache", cache, "logic", "reduce", "--set", "mod4eq1", "--l", "7")
    assert code == 0
    assert out.strip() == "false"


def test_report_cli(capsys, tmp_path):
    cache = str(tmp_path / "cache.json")
    code, out, _ = run(capsys, "--cache", cache, "report", "prop21", "2", "1")
    assert code == 0
    assert "bullet 2" in out


def test_cache_roundtrip(tmp_path):
    cache = CurveCache(str(tmp_path / "cache.json"))
    cert = find_pointless(3, 2, exhaustive=True)
    cache.store(cert, seed=1)
    loaded = cache.lookup(cert.curve.base, [2])
    assert loaded is not None
    assert loaded.curve == cert.curve
    assert loaded.l_poly == cert.l_poly
    assert loaded.verified_horizon == cert.verified_horizon


def test_cache_rejects_tampered_entry(tmp_path, capsys):
    path = tmp_path / "cache.json"
    cache = CurveCache(str(path))
    cert = find_pointless(3, 2, exhaustive=True)
    cache.store(cert, seed=1)
    data = json.loads(path.read_text())
    key = next(iter(data))
    data[key]["f"][0] = [1]  # corrupt a coefficient
    path.write_text(json.dumps(data))
    assert cache.lookup(cert.curve.base, [2]) is None


def test_cache_env_var(tmp_path, monkeypatch, capsys):
    from testvariety.config import Config

    monkeypatch.setenv("POINTLESS_CACHE", str(tmp_path / "env_cache.json"))
    cfg = Config()
    assert cfg.cache_path == str(tmp_path / "env_cache.json")
