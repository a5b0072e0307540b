import json

import numpy as np
import pytest

from qrel import CPMap, ClassicalRelation, Projection, span
from qrel.cli import main
from qrel.documents import (
    canonical_json,
    channel_document,
    classical_relation_document,
    emit,
    matrix_document,
    operator_space_document,
    projection_document,
)
from util import basis_state, bit_flip_channel, projector_onto, rand_cptp


def unit(i, j, m=2):
    out = np.zeros((m, m), complex)
    out[i, j] = 1.0
    return out


def write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_bytes(emit(doc))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


@pytest.fixture
def v1_file(tmp_path):
    space = span([np.eye(2), unit(0, 1), unit(1, 0)])
    return write(tmp_path, "v1.json", operator_space_document(space))


class TestSubcommands:
    def test_confusability_of_unitary(self, tmp_path, capsys):
        chan = CPMap(
            kraus=np.array([[[0, 1], [1, 0]]], dtype=complex), trace_preserving=True
        )
        path = write(tmp_path, "unitary.json", channel_document(chan))
        code, out = run(capsys, ["confusability", "--channel", path])
        assert code == 0 and out["ok"]
        assert len(out["result"]["payload"]["basis"]) == 1

    def test_props_v1(self, v1_file, capsys):
        code, out = run(capsys, ["props", "--space", v1_file])
        assert code == 0
        assert out["result"] == {
            "reflexive": True,
            "symmetric": True,
            "antisymmetric": False,
            "transitive": False,
        }

    def test_kl_check_bit_flip(self, tmp_path, capsys):
        chan = bit_flip_channel()
        chan_path = write(tmp_path, "bitflip3.json", channel_document(chan))
        code_proj = projector_onto([basis_state(8, 0), basis_state(8, 7)])
        code_path = write(tmp_path, "code.json", projection_document(code_proj))
        code, out = run(capsys, ["kl-check", "--channel", chan_path, "--proj", code_path])
        assert code == 0
        assert out["result"]["is_code"] is True
        assert out["result"]["lambda"]["rows"] == 4
        bad = projector_onto([basis_state(8, 0), basis_state(8, 4)])
        bad_path = write(tmp_path, "bad.json", projection_document(bad))
        code, out = run(capsys, ["kl-check", "--channel", chan_path, "--proj", bad_path])
        assert out["result"] == {"is_code": False, "lambda": None}

    def test_commutant_and_diagonal(self, tmp_path, capsys, rng):
        from qrel.documents import algebra_document
        from util import rand_subalgebra

        alg = rand_subalgebra(rng, 3, kind="diagonal")
        path = write(tmp_path, "alg.json", algebra_document(alg))
        code, out = run(capsys, ["commutant", "--algebra", path])
        assert code == 0
        assert len(out["result"]["payload"]["basis"]) == 3
        code, out = run(capsys, ["diagonal", "--algebra", path])
        assert code == 0
        assert len(out["result"]["payload"]["basis"]) == 3

    def test_push_pull_round(self, tmp_path, capsys, rng):
        chan = rand_cptp(rng, 2, 3, 2)
        chan_path = write(tmp_path, "chan.json", channel_document(chan))
        space = span([np.eye(2)])
        space_path = write(tmp_path, "v.json", operator_space_document(space))
        code, pushed = run(capsys, ["push", "--space", space_path, "--channel", chan_path])
        assert code == 0 and pushed["ok"]
        wspace = span([np.eye(3)])
        w_path = write(tmp_path, "w.json", operator_space_document(wspace))
        code, pulled = run(capsys, ["pull", "--space", w_path, "--channel", chan_path])
        assert code == 0 and pulled["ok"]

    def test_connects(self, tmp_path, capsys, v1_file):
        p = projector_onto([np.array([1.0, 0.0])])
        q = projector_onto([np.array([0.0, 1.0])])
        p_path = write(tmp_path, "p.json", projection_document(p))
        q_path = write(tmp_path, "q.json", projection_document(q))
        code, out = run(
            capsys,
            ["connects", "--space", v1_file, "--p", p_path, "--q", q_path, "--k", "1"],
        )
        assert code == 0 and out["result"] is True

    def test_witness_and_recover(self, tmp_path, capsys, v1_file):
        target = write(tmp_path, "b.json", matrix_document(np.diag([1.0, -1.0])))
        code, out = run(capsys, ["witness", "--space", v1_file, "--matrix", target])
        assert code == 0
        assert out["result"]["k"] == 2
        assert out["result"]["P"]["payload"]["rank"] >= 1
        code, out = run(
            capsys, ["witness", "--space", v1_file, "--matrix", target, "--kind", "vectors"]
        )
        assert code == 0 and len(out["result"]["alpha"]) == 4
        code, out = run(capsys, ["recover", "--space", v1_file])
        assert code == 0
        assert len(out["result"]["payload"]["basis"]) == 3

    def test_classical_bridge(self, tmp_path, capsys):
        rel = ClassicalRelation(3, frozenset({(0, 0), (0, 1)}))
        rel_path = write(tmp_path, "r.json", classical_relation_document(rel))
        code, out = run(capsys, ["classical-embed", "--relation", rel_path])
        assert code == 0
        space_doc = out["result"]
        space_path = tmp_path / "vr.json"
        space_path.write_text(canonical_json(space_doc))
        code, out = run(capsys, ["classical-extract", "--space", str(space_path)])
        assert code == 0
        assert out["result"]["payload"]["pairs"] == [[0, 0], [0, 1]]

    def test_restrict_and_independent(self, tmp_path, capsys):
        rel = ClassicalRelation(3, frozenset({(0, 0), (1, 1), (2, 2), (0, 1), (1, 0)}))
        from qrel import classical_to_quantum
        from qrel.documents import algebra_document

        quantum = classical_to_quantum(rel)
        space_path = write(tmp_path, "vr.json", operator_space_document(quantum.space))
        alg_path = write(tmp_path, "d3.json", algebra_document(quantum.algebra))
        proj = Projection.from_matrix(np.diag([1.0, 0.0, 1.0]))
        proj_path = write(tmp_path, "e.json", projection_document(proj))
        code, out = run(
            capsys,
            [
                "independent",
                "--space",
                space_path,
                "--proj",
                proj_path,
                "--algebra",
                alg_path,
            ],
        )
        assert code == 0 and out["result"] is True
        code, out = run(
            capsys,
            ["restrict", "--space", space_path, "--proj", proj_path, "--algebra", alg_path],
        )
        assert code == 0
        assert len(out["result"]["space"]["payload"]["basis"]) == 2

    def test_morphism(self, tmp_path, capsys, rng):
        chan = rand_cptp(rng, 2, 2, 2)
        chan_path = write(tmp_path, "chan.json", channel_document(chan))
        v_path = write(tmp_path, "v.json", operator_space_document(span([np.eye(2)])))
        full = span([unit(i, j) for i in range(2) for j in range(2)])
        w_path = write(tmp_path, "w.json", operator_space_document(full))
        code, out = run(
            capsys,
            ["morphism", "--channel", chan_path, "--source", v_path, "--target", w_path],
        )
        assert code == 0
        assert out["result"]["strong"] is True and out["result"]["weak"] is True
        assert out["result"]["witness_generator"] is None

    def test_compose(self, tmp_path, capsys, rng):
        first = rand_cptp(rng, 2, 3, 1)
        second = rand_cptp(rng, 3, 2, 1)
        f_path = write(tmp_path, "f.json", channel_document(first))
        s_path = write(tmp_path, "s.json", channel_document(second))
        code, out = run(capsys, ["compose", "--first", f_path, "--second", s_path])
        assert code == 0
        assert out["result"]["payload"]["in_dim"] == 2
        assert out["result"]["payload"]["out_dim"] == 2

    def test_bipartite(self, tmp_path, capsys, rng):
        chan = rand_cptp(rng, 2, 3, 2)
        path = write(tmp_path, "chan.json", channel_document(chan))
        code, out = run(capsys, ["bipartite", "--channel", path])
        assert code == 0
        basis = out["result"]["payload"]["basis"]
        assert basis and basis[0]["rows"] == 3 and basis[0]["cols"] == 2


class TestExitCodes:
    def test_unknown_subcommand(self, capsys):
        assert main(["bogus"]) == 1
        assert "usage" in capsys.readouterr().err

    def test_no_arguments(self, capsys):
        assert main([]) == 1

    def test_validation_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text('{"kind":"matrix","payload":{"rows":2,"cols":1,"entries":[[{"re":1,"im":0}]]}}')
        code, out = run(capsys, ["props", "--space", str(bad)])
        assert code == 2 and out["ok"] is False

    def test_missing_file(self, capsys):
        code, out = run(capsys, ["props", "--space", "/nonexistent.json"])
        assert code == 2

    def test_missing_flag(self, capsys):
        code, out = run(capsys, ["props"])
        assert code == 2

    def test_precondition_failure(self, tmp_path, capsys, v1_file):
        inside = write(tmp_path, "inside.json", matrix_document(np.eye(2)))
        code, out = run(capsys, ["witness", "--space", v1_file, "--matrix", inside])
        assert code == 3 and out["ok"] is False


class TestDeterminismAndTolerance:
    def test_byte_identical_reruns(self, tmp_path, capsys, v1_file):
        main(["props", "--space", v1_file, "--seed", "7"])
        first = capsys.readouterr().out
        main(["props", "--space", v1_file, "--seed", "7"])
        second = capsys.readouterr().out
        assert first == second

    def test_output_matches_in_process_result(self, tmp_path, capsys, rng):
        chan = rand_cptp(rng, 2, 3, 2)
        path = write(tmp_path, "chan.json", channel_document(chan))
        code, out = run(capsys, ["bipartite", "--channel", path])
        from qrel import bipartite_graph
        from qrel.documents import document_body, operator_space_document

        expected = document_body(operator_space_document(bipartite_graph(chan)))
        assert out["result"] == json.loads(canonical_json(expected))

    def test_tol_flag_beats_env(self, tmp_path, capsys, monkeypatch, v1_file):
        monkeypatch.setenv("QREL_TOL", "not-a-number")
        code, out = run(capsys, ["props", "--space", v1_file])
        assert code == 2  # env var is consulted and rejected
        code, out = run(capsys, ["props", "--space", v1_file, "--tol", "1e-9"])
        assert code == 0  # flag wins: the broken env value is never parsed

    def test_env_tolerance_applies(self, tmp_path, capsys, monkeypatch, v1_file):
        monkeypatch.setenv("QREL_TOL", "1e-10")
        code, out = run(capsys, ["props", "--space", v1_file])
        assert code == 0
        from qrel import get_tolerance

        assert get_tolerance().rel_eps == 1e-9  # restored afterwards
