import json
import subprocess
import sys

import pytest

from zeroprod import cli
from zeroprod.errors import VerificationError
from zeroprod.exact_linalg import QQ, PrimeField
from zeroprod.fixtures import example_band_nilpotent, example_symmetric_killer
from zeroprod.jordan import DzpCertificate, reconstruct_dzp
from zeroprod.linmap import LinMap
from zeroprod.nilspace import generate_pattern_subspace
from zeroprod.structure import StructureCertificate, reconstruct


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="in.json"):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)
    return _write


def run(argv, capsys):
    code = cli.run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_check_identity(write, capsys):
    code, doc = run(["check", "--property", "zpp", "--in", write(LinMap.identity(QQ, 2).to_json())], capsys)
    assert code == 0 and doc["holds"] is True


def test_check_transpose_gives_witness(write, capsys):
    code, doc = run(["check", "--in", write(LinMap.transpose_map(QQ, 2).to_json())], capsys)
    assert code == 1 and doc["holds"] is False
    w = doc["witness"]
    assert w["type"] == "pair" and w["A"]["entries"] == [[0, 1], [0, 0]] and w["B"]["entries"] == [[1, 0], [0, 0]]


@pytest.mark.parametrize("prop", ["jordan", "ring", "idem", "trivial", "dzp"])
def test_check_properties(prop, write, capsys):
    code, doc = run(["check", "--property", prop, "--trials", "50", "--in", write(LinMap.identity(QQ, 2).to_json())],
                    capsys)
    assert doc["property"] == prop
    assert code == (1 if prop == "trivial" else 0)


def test_decompose_band_round_trip(write, capsys):
    band = example_band_nilpotent(2, 3, QQ)
    code, doc = run(["decompose", "--in", write(band.to_json())], capsys)
    assert code == 0 and doc["k"] == 0 and doc["nu"] == 3 and doc["verified"] is True
    assert reconstruct(StructureCertificate.from_json(doc)) == band


def test_decompose_dzp_round_trip(write, capsys):
    phi = LinMap.transpose_map(PrimeField(7), 2).scale(3)
    code, doc = run(["decompose", "--property", "dzp", "--in", write(phi.to_json())], capsys)
    assert code == 0 and (doc["k1"], doc["k2"]) == (0, 1)
    assert reconstruct_dzp(DzpCertificate.from_json(doc)) == phi


def test_decompose_scalar_domain(write, capsys):
    phi = LinMap(QQ, 1, 2, [example_band_nilpotent(1, 2, QQ).images[0]])
    code, doc = run(["decompose", "--in", write(phi.to_json())], capsys)
    assert code == 0 and doc["k"] == 0 and doc["nu"] == 2


def test_decompose_not_preserver(write, capsys):
    code, doc = run(["decompose", "--in", write(LinMap.transpose_map(QQ, 2).to_json())], capsys)
    assert code == 1 and doc["verdict"]["witness"] is not None


def test_char_two_jordan_exit_code(write, capsys):
    path = write(LinMap.identity(PrimeField(2), 2).to_json())
    for argv in (["check", "--property", "jordan"], ["split-jordan"], ["decompose", "--property", "jordan"],
                 ["decompose", "--property", "dzp"]):
        code, _ = run(argv + ["--in", path], capsys)
        assert code == 2


def test_malformed_inputs(tmp_path, write, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert cli.run(["check", "--in", str(bad)]) == 2
    doc = LinMap.identity(QQ, 2).to_json()
    del doc["images"]["1,2"]
    assert cli.run(["check", "--in", write(doc)]) == 2
    assert cli.run(["check", "--in", str(tmp_path / "missing.json")]) == 2
    assert cli.run(["check", "--trials", "0", "--in", write(LinMap.identity(QQ, 2).to_json())]) == 2
    capsys.readouterr()


def test_undocumented_options_rejected(write, capsys):
    path = write(LinMap.identity(QQ, 2).to_json())
    assert cli.run(["split-jordan", "--trials", "5", "--in", path]) == 2
    assert cli.run(["canon-hom", "--property", "zpp", "--in", path]) == 2
    assert cli.run(["bogus"]) == 2
    capsys.readouterr()


def test_internal_failure_exit_code(monkeypatch, write, capsys):
    def boom(phi):
        raise VerificationError("forced")
    monkeypatch.setattr(cli, "decompose_zpp", boom)
    code, doc = run(["decompose", "--in", write(LinMap.identity(QQ, 2).to_json())], capsys)
    assert code == 3 and doc["kind"] == "VerificationError"


def test_split_and_canon_hom(write, capsys):
    code, doc = run(["split-jordan", "--in", write(LinMap.transpose_map(QQ, 2).to_json())], capsys)
    assert code == 0 and doc["verified"] is True
    code, doc = run(["canon-hom", "--in", write(LinMap.identity(QQ, 3).to_json())], capsys)
    assert code == 0 and doc["k"] == 1


def test_canon_nilspace(write, capsys):
    f = PrimeField(11)
    basis = generate_pattern_subspace(5, 2, 1, 1, 1, 3, f, 0, full_support=True)
    sub = {"field": f.name, "l": 5, "basis": [m.to_json() for m in basis]}
    code, doc = run(["canon-nilspace", "--in", write(sub)], capsys)
    assert code == 0 and (doc["p"], doc["q"], doc["u"], doc["v"]) == (2, 1, 1, 1)
    sub = {"l": 2, "basis": [{"rows": 2, "cols": 2, "entries": [[0, "1/2"], [0, 0]]}]}
    code, doc = run(["canon-nilspace", "--in", write(sub)], capsys)
    assert code == 0 and doc["p"] == 1
    small = {"field": "GF(3)", "l": 4, "basis": [m.to_json() for m in
                                                   generate_pattern_subspace(4, 2, 0, 0, 0, 1, PrimeField(3), 0)]}
    code, _ = run(["canon-nilspace", "--in", write(small)], capsys)
    assert code == 2


def test_classify_small(write, capsys):
    code, doc = run(["classify-small", "--in", write(example_symmetric_killer(QQ).to_json())], capsys)
    assert code == 0 and doc["variant"] == "trivial_range"
    code, doc = run(["classify-small", "--in", write(LinMap.identity(QQ, 2).to_json())], capsys)
    assert code == 0 and doc["variant"] == "scalar_inner" and doc["alpha"] == 1


def test_gen_then_decompose(write, capsys):
    spec = {"n": 2, "r": 7, "k": 2, "field": "GF(101)", "seed": 5, "phi0_mode": "trivial_mult"}
    code, doc = run(["gen", "--in", write(spec)], capsys)
    assert code == 0 and doc["truth"]["k"] == 2
    phi = LinMap.from_json(doc["map"])
    code, cert = run(["decompose", "--in", write(doc["map"], "map.json")], capsys)
    assert code == 0 and cert["k"] == 2
    assert reconstruct(StructureCertificate.from_json(cert)) == phi
    code, _ = run(["gen", "--in", write({"n": 2, "r": 3, "k": 2, "field": "Q", "seed": 0})], capsys)
    assert code == 2


def test_fuzz(write, capsys):
    code, doc = run(["fuzz", "--trials", "200", "--seed", "1", "--in",
                     write(LinMap.transpose_map(PrimeField(3), 2).to_json())], capsys)
    assert code == 1 and doc["mode"] == "randomized"
    code, doc = run(["fuzz", "--property", "dzp", "--trials", "100", "--in",
                     write(LinMap.identity(QQ, 2).to_json())], capsys)
    assert code == 0 and doc["trials"] == 100


def test_examples_and_out(tmp_path, write, capsys):
    out = tmp_path / "ex.json"
    assert cli.run(["examples", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    doc = json.loads(out.read_text())
    assert LinMap.from_json(doc["band_nilpotent_2_3"]) == example_band_nilpotent(2, 3, QQ)
    code, doc = run(["examples", "--in", write({"field": "GF(5)"})], capsys)
    assert doc["identity_2"]["field"] == "GF(5)"


def test_byte_identical_output(write, capsys):
    path = write(example_band_nilpotent(2, 3, QQ).to_json())
    outs = []
    for _ in range(2):
        cli.run(["decompose", "--seed", "4", "--in", path])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_module_entry_point(write):
    path = write(LinMap.identity(QQ, 2).to_json())
    proc = subprocess.run([sys.executable, "-m", "zeroprod", "check", "--in", path],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["holds"] is True
