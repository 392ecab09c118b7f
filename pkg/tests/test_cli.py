import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from groupoid_logic.cli import main

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", "pair:3")
    assert code == 0 and "axioms OK" in out


def test_validate_broken_associativity(capsys):
    code, out, _ = run(capsys, "validate", FIX / "loop5.json")
    assert code == 2
    assert "[associativity] (a∘a)∘b != a∘(a∘b)" in out
    code, data = run_json(capsys, "validate", FIX / "loop5.json")
    assert data["axioms"]["counts"] == {"associativity": 36}


def test_validate_bad_haar(capsys):
    code, _, err = run(capsys, "validate", "pair:3", "--haar", FIX / "bad_haar.json")
    assert code == 3
    assert "witness=['(1, 2)', '(2, 1)']" in err
    code, out, _ = run(capsys, "validate", "pair:3", "--haar", FIX / "source_weights.json")
    assert code == 0 and "left invariance OK" in out


def test_validate_bad_phase(capsys):
    code, _, err = run(capsys, "validate", "pair:2", "--phase", FIX / "bad_phase.json")
    assert code == 3 and "[antisymmetric]" in err


def test_decohere_units(capsys):
    code, data = run_json(capsys, "decohere", "units:3", "--lambda", ".2,.3,.5")
    assert code == 0
    D = np.array(data["D"])
    assert np.array_equal(D, np.diag([0.2, 0.3, 0.5]))
    assert data["family"] == ["{1}", "{2}", "{3}"]


def test_decohere_pair(capsys):
    code, data = run_json(capsys, "decohere", "pair:2", "--lambda", "uniform", "--haar", "normalized")
    assert code == 0 and data["D"] == [[0.25, 0.25], [0.25, 0.25]]
    assert data["interference"][0][1] == 0.5
    code, text, _ = run(capsys, "decohere", "pair:2")
    assert "0.25" in text and "max |I3|" in text


def test_decohere_phase_hermitian(capsys):
    code, data = run_json(capsys, "decohere", "pair:2", "--phase", "potential:0,1.5708")
    D = np.array([[complex(*z) for z in row] for row in data["D"]])
    assert code == 0
    assert np.max(np.abs(D - D.conj().T)) <= 1e-15
    assert abs(D[1, 0].imag) > 0.2


def test_decohere_subset_family(capsys):
    code, data = run_json(capsys, "decohere", "pair:3", "--subsets", "1,2;3;1")
    assert code == 0 and len(data["D"]) == 3
    assert data["interference"][0][2] is None


def test_sorkin(capsys):
    code, out, _ = run(capsys, "sorkin-audit", "pair:3")
    assert code == 0 and "PASS" in out
    code, data = run_json(capsys, "sorkin-audit", "pair:2+units:2", "--phase", "potential:0,1,2,3", "--jobs", "3")
    assert code == 0 and data["max_residual"] <= 1e-12 and data["n_triples"] == 256


def test_sorkin_zero_tolerance_documented(capsys):
    code, data = run_json(capsys, "sorkin-audit", "pair:3", "--tolerance", "0")
    # float rounding may leave a residual of order 1e-16
    assert code == (0 if data["max_residual"] == 0 else 1)


def test_gns_report(capsys):
    code, data = run_json(capsys, "gns-report", "pair:4", "--lambda", "uniform", "--haar", "normalized")
    assert code == 0 and data["dimension"] == 4
    code, data = run_json(capsys, "gns-report", "units:3", "--lambda", ".5,.5,0")
    assert data["dimension"] == 2 and data["null_atoms"] == ["3"]
    code, out, _ = run(capsys, "gns-report", "pair:1")
    assert "GNS dimension 1" in out


def test_gns_non_unimodular_is_a_precondition_error(capsys):
    code, _, err = run(capsys, "gns-report", "pair:2", "--lambda", ".25,.75", "--haar", "counting")
    assert code == 2 and "hermitian" in err


def test_relation(capsys):
    code, data = run_json(capsys, "relation", "units:3")
    assert data["counterexamples"]["transitive"] == [["1"], ["1", "2"], ["2"]]
    code, data = run_json(capsys, "relation", "pair:3", "--a", "1", "--b", "3")
    assert data["conditioned"] and data["transition_set"] == ["(3, 1)"]
    code, data = run_json(capsys, "relation", "units:14", "--sample", "50")
    assert data["status"] == "sampled"


def test_resource_cap(capsys):
    code, _, err = run(capsys, "relation", "units:14")
    assert code == 4 and "cap" in err


def test_bridge(capsys):
    code, data = run_json(capsys, "bridge", "pair:3", "--lambda", ".2,.3,.5", "--a", "1,2", "--b", "2,3")
    assert code == 0 and data["certified"] and data["difference"] <= 1e-15
    code, data = run_json(
        capsys, "bridge", "pair:3", "--lambda", ".2,.3,.5", "--a", "1,2", "--b", "2,3", "--convolution", "literal"
    )
    assert code == 0 and not data["certified"]


def test_lattice(capsys):
    code, data = run_json(capsys, "lattice", "powerset:3")
    assert code == 0 and data["distributive_violations"] == [] and data["modular_violations"] == []
    code, data = run_json(capsys, "lattice", str(FIX / "n5.json"))
    assert data["modular_violations"]
    code, data = run_json(capsys, "lattice", str(FIX / "m3.json"))
    assert not data["modular_violations"] and data["irreducible"]


@pytest.mark.parametrize(
    "argv",
    [
        ["decohere", "nosuch:3"],
        ["decohere", "pair:3", "--lambda", "1,2"],
        ["decohere", "pair:3", "--subsets", "9"],
        ["decohere", "pair:3", "--phase", "potential:1"],
        ["decohere"],
    ],
)
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_measure_errors(capsys):
    code, _, err = run(capsys, "decohere", "pair:2", "--lambda", "0,0")
    assert code == 3


def test_json_output_is_canonical(capsys):
    _, a, _ = run(capsys, "decohere", "pair:3", "--format", "json")
    _, b, _ = run(capsys, "decohere", "pair:3", "--format", "json")
    assert a == b and a.endswith("\n")
    assert list(json.loads(a)) == sorted(json.loads(a))


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "groupoid_logic", "validate", "units:2"], capture_output=True, text=True
    )
    assert out.returncode == 0 and "axioms OK" in out.stdout
