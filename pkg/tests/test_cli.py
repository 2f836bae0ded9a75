import json

import pytest

from nablalg.cli import main
from nablalg.serialize import algebra_to_json, dumps, frame_to_json, lattice_to_json

from conftest import chain


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out.strip()
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out) if out else None


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(dumps(obj))
    return str(p)


def test_gen_and_validate_roundtrip(tmp_path, capsys):
    code, out = run(capsys, "gen", "xn", "1")
    assert code == 0
    path = write(tmp_path, "x1.json", json.loads(out))
    code, obj = run_json(capsys, "validate", path)
    assert code == 0 and obj["ok"]


def test_validate_rejects_broken_algebra(tmp_path, capsys, x1):
    obj = algebra_to_json(x1)
    obj["nabla"] = [2, 0, 2]
    path = write(tmp_path, "bad.json", obj)
    code, rep = run_json(capsys, "validate", path)
    assert code == 1
    assert not rep["ok"] and rep["error"]["error"] == "adjunction-failure"


def test_validate_malformed_input_is_exit_two(tmp_path, capsys):
    p = tmp_path / "garbage.json"
    p.write_text("{not json")
    code, _ = run_json(capsys, "validate", str(p))
    assert code == 2


def test_validate_unknown_kind_is_exit_two(tmp_path, capsys):
    path = write(tmp_path, "odd.json", {"kind": "mystery"})
    code, _ = run_json(capsys, "validate", path)
    assert code == 2


def test_validate_lattice_and_frame(tmp_path, capsys, x1):
    lpath = write(tmp_path, "lat.json", lattice_to_json(chain(3)))
    assert run_json(capsys, "validate", lpath)[0] == 0
    from nablalg.kripke import prime_frame

    fpath = write(tmp_path, "frame.json", frame_to_json(prime_frame(x1)))
    assert run_json(capsys, "validate", fpath)[0] == 0
    bad = lattice_to_json(chain(3))
    bad["leq"][0][1] = False  # breaks the bottom, leaves a meetless pair
    bpath = write(tmp_path, "bad.json", bad)
    code, rep = run_json(capsys, "validate", bpath)
    assert code == 1 and not rep["ok"]


def test_validate_morphism_kind(tmp_path, capsys, b2, h3):
    from nablalg.algebra import AlgebraMorphism
    from nablalg.serialize import morphism_to_json

    m = AlgebraMorphism(b2, h3, (0, 2), preserves_heyting=True)
    path = write(tmp_path, "m.json", morphism_to_json(m))
    code, rep = run_json(capsys, "validate", path)
    assert code == 0 and rep["ok"]


def test_classify_flags(tmp_path, capsys, x1):
    path = write(tmp_path, "x1.json", algebra_to_json(x1))
    code, obj = run_json(capsys, "classify", path)
    assert code == 0
    assert obj["flags"] == {"D": True, "H": True, "N": True, "R": False,
                            "L": True, "Fa": False, "Fu": False}


def test_modal_filters_and_congruences(tmp_path, capsys, x1):
    path = write(tmp_path, "x1.json", algebra_to_json(x1))
    code, obj = run_json(capsys, "modal-filters", path)
    assert code == 0 and obj["filters"] == [[2], [0, 1, 2]]
    code, obj = run_json(capsys, "congruences", path)
    assert code == 0 and obj["congruences"] == [[0, 1, 2], [0, 0, 0]]


def test_si_and_simple_exit_codes(tmp_path, capsys, x1, h3):
    px1 = write(tmp_path, "x1.json", algebra_to_json(x1))
    ph3 = write(tmp_path, "h3.json", algebra_to_json(h3))
    assert run_json(capsys, "simple", px1)[0] == 0
    code, verdict = run_json(capsys, "simple", ph3)
    assert code == 1 and verdict["ok"] is False
    assert run_json(capsys, "si", ph3)[0] == 0


def test_operation_precondition_is_exit_one(tmp_path, capsys):
    from nablalg.gallery import gen_trivial

    alg = gen_trivial(chain(3))  # not normal
    path = write(tmp_path, "triv.json", algebra_to_json(alg))
    code, obj = run_json(capsys, "modal-filters", path)
    assert code == 1 and obj["error"]["error"] == "not-normal"


def test_dm_complete_output(tmp_path, capsys, x1):
    path = write(tmp_path, "x1.json", algebra_to_json(x1))
    code, obj = run_json(capsys, "dm-complete", path)
    assert code == 0
    assert obj["kind"] == "nabla-algebra" and len(obj["embedding"]) == 3


def test_prime_frame_and_upset_algebra(tmp_path, capsys, x1):
    path = write(tmp_path, "x1.json", algebra_to_json(x1))
    code, frame = run_json(capsys, "prime-frame", path)
    assert code == 0 and frame["kind"] == "kripke-frame" and frame["n"] == 2
    fpath = write(tmp_path, "frame.json", frame)
    code, alg = run_json(capsys, "upset-algebra", fpath)
    assert code == 0 and alg["kind"] == "nabla-algebra"
    assert len(alg["nabla"]) == 3


def test_check_morphism(tmp_path, capsys, b2, h3):
    obj = {
        "kind": "morphism",
        "map": [0, 2],
        "source": algebra_to_json(b2),
        "target": algebra_to_json(h3),
        "heyting": True,
    }
    path = write(tmp_path, "m.json", obj)
    code, rep = run_json(capsys, "check-morphism", path)
    assert code == 0 and rep["ok"] and rep["injective"]
    obj["map"] = [0, 0]
    path = write(tmp_path, "m2.json", obj)
    code, rep = run_json(capsys, "check-morphism", path)
    assert code == 1 and not rep["ok"]


def test_amalgamate_span(tmp_path, capsys, b2, h3):
    span = {
        "kind": "span",
        "a0": algebra_to_json(b2),
        "a1": algebra_to_json(h3),
        "a2": algebra_to_json(h3),
        "f1": [0, 2],
        "f2": [0, 2],
        "heyting": True,
    }
    path = write(tmp_path, "span.json", span)
    code, out = run_json(capsys, "amalgamate", path)
    assert code == 0
    assert len(out["b"]["nabla"]) == 6
    assert set(out["intermediate"]["frames"]) == {"k0", "k1", "k2", "pullback"}


def test_gen_trivial_and_heyting(tmp_path, capsys):
    path = write(tmp_path, "lat.json", lattice_to_json(chain(3)))
    code, obj = run_json(capsys, "gen", "trivial", path)
    assert code == 0 and obj["kind"] == "nabla-algebra"
    code, obj = run_json(capsys, "gen", "heyting", path)
    assert code == 0 and obj["nabla"] == [0, 1, 2]


def test_gen_cex3(capsys):
    code, obj = run_json(capsys, "gen", "cex3")
    assert code == 0 and obj["kind"] == "strong-candidate"
    assert obj["arrow"] == [[2, 2, 2], [2, 2, 2], [0, 0, 2]]


def test_gen_xn_out_of_range(capsys):
    code, obj = run_json(capsys, "gen", "xn", "9")
    assert code == 2 and obj["error"]["error"] == "out-of-range"


def test_enumerate_byte_identical(capsys):
    code, first = run(capsys, "enumerate", "--max-n", "2")
    assert code == 0
    code, second = run(capsys, "enumerate", "--max-n", "2")
    assert first == second
    lines = first.splitlines()
    assert len(lines) == 3  # one on the point, two dynamics on the two-chain
    for line in lines:
        assert json.loads(line)["kind"] == "nabla-algebra"


def test_enumerate_flag_filter(capsys):
    code, out = run(capsys, "enumerate", "--max-n", "2", "--flags", "N,D")
    assert code == 0
    assert len(out.splitlines()) == 2


def test_validate_from_stdin(capsys, monkeypatch, x1):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(dumps(algebra_to_json(x1))))
    code, obj = run_json(capsys, "validate", "-")
    assert code == 0 and obj["ok"]
