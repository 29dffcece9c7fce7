"""File formats: round trips, schema errors, tolerance gates."""

import json

import numpy as np
import pytest

from qiclab import (
    ALICE,
    BOB,
    ProtocolValidationError,
    and_pair,
    classical_state,
    load,
    load_protocol,
    load_state,
    qic,
    save,
    validate,
)
from qiclab.fileio import FileFormatError, protocol_to_obj
from qiclab.fuzz import (
    random_classical_protocol,
    random_input_density,
    random_protocol,
    random_state_vector,
)


class TestStateRoundTrip:
    def test_vector(self, tmp_path):
        st = random_state_vector([("a", 2, ALICE), ("b", 3, BOB)], 0)
        path = tmp_path / "vec.json"
        save(st, path)
        back = load_state(path)
        assert back.system.names == st.system.names
        assert back.system.holders == st.system.holders
        assert np.max(np.abs(back.amplitudes - st.amplitudes)) < 1e-15

    def test_density_with_classical_flag(self, tmp_path):
        rho = classical_state(np.array([[0.25, 0.25], [0.5, 0.0]]), [("x", 2, ALICE), ("y", 2, BOB)])
        path = tmp_path / "rho.json"
        save(rho, path)
        back = load_state(path)
        assert back.classical
        assert np.max(np.abs(back.matrix - rho.matrix)) < 1e-15

    def test_trace_tolerance_gate(self, tmp_path):
        rho = classical_state(np.array([0.5, 0.5]), [("x", 2, ALICE)])
        obj = {
            "type": "state",
            "kind": "density",
            "registers": [{"name": "x", "dim": 2, "holder": "alice"}],
            "matrix": [[[0.5 + 5e-7, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5 + 5e-7, 0.0]]],
        }
        path = tmp_path / "drift.json"
        path.write_text(json.dumps(obj))
        with pytest.raises(FileFormatError, match="trace"):
            load_state(path)
        back = load_state(path, tol=1e-5)
        assert abs(np.trace(back.matrix).real - 1.0) < 1e-12  # renormalized

    def test_norm_tolerance_gate(self, tmp_path):
        obj = {
            "type": "state",
            "kind": "vector",
            "registers": [{"name": "x", "dim": 2, "holder": "alice"}],
            "amplitudes": [[1.0 + 1e-6, 0.0], [0.0, 0.0]],
        }
        path = tmp_path / "vecdrift.json"
        path.write_text(json.dumps(obj))
        with pytest.raises(FileFormatError, match="norm"):
            load_state(path)
        assert abs(load_state(path, tol=1e-5).norm - 1.0) < 1e-12

    def test_complex_entries_must_be_pairs(self, tmp_path):
        obj = {
            "type": "state",
            "kind": "vector",
            "registers": [{"name": "x", "dim": 2, "holder": "alice"}],
            "amplitudes": [1.0, 0.0],
        }
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(obj))
        with pytest.raises(FileFormatError, match="re, im"):
            load_state(path)

    def test_parse_error_carries_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        with pytest.raises(FileFormatError, match=str(path)):
            load(path)


class TestProtocolRoundTrip:
    def test_random_protocol(self, tmp_path):
        p = random_protocol(1, 4)
        path = tmp_path / "p.json"
        save(p, path)
        back = load_protocol(path)
        assert validate(back) == []
        assert back.num_messages == p.num_messages
        assert back.messages == p.messages
        rho = random_input_density(p, 2)
        assert abs(qic(back, rho) - qic(p, rho)) < 1e-12

    def test_staged_construction_round_trip(self, tmp_path):
        from qiclab import convex_mix

        mix = convex_mix(random_protocol(3, 2), random_protocol(4, 2), 0.4)
        path = tmp_path / "mix.json"
        save(mix, path)
        back = load_protocol(path)
        assert validate(back) == []
        rho = random_input_density(back, 5)
        assert abs(qic(back, rho) - qic(mix, rho)) < 1e-12

    def test_padded_protocol_round_trip(self, tmp_path):
        # padding rounds create and drop dimension-1 registers via stages
        from qiclab import pad_rounds

        p = pad_rounds(random_protocol(8, 2))
        path = tmp_path / "pad.json"
        save(p, path)
        back = load_protocol(path)
        assert validate(back) == []
        assert back.num_messages == p.num_messages

    def test_schedule_violation_reported_by_name(self, tmp_path):
        p = random_protocol(6, 2)
        obj = protocol_to_obj(p)
        # corrupt the second unitary's declared input block
        obj["unitaries"][1]["in"][0]["dim"] = 7
        path = tmp_path / "badp.json"
        path.write_text(json.dumps(obj))
        with pytest.raises((ProtocolValidationError, FileFormatError), match="U_2|stage"):
            load_protocol(path)

    def test_dense_matrix_form_accepted(self, tmp_path):
        obj = {
            "type": "protocol",
            "num_messages": 2,
            "alice_in": [{"name": "A_in", "dim": 2}],
            "bob_in": [{"name": "B_in", "dim": 1}],
            "preshared": {
                "type": "state",
                "kind": "vector",
                "registers": [],
                "amplitudes": [[1.0, 0.0]],
            },
            "unitaries": [
                {
                    "in": [{"name": "A_in", "dim": 2}],
                    "out": [{"name": "C_1", "dim": 2}],
                    "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                },
                {
                    "in": [{"name": "B_in", "dim": 1}, {"name": "C_1", "dim": 2}],
                    "out": [
                        {"name": "B_out", "dim": 2},
                        {"name": "C_2", "dim": 1},
                    ],
                    "matrix": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                },
                {
                    "in": [{"name": "C_2", "dim": 1}],
                    "out": [{"name": "A_out", "dim": 1}],
                    "matrix": [[[1, 0]]],
                },
            ],
            "messages": [["C_1"], ["C_2"]],
            "alice_out": ["A_out"],
            "bob_out": ["B_out"],
            "alice_scratch": [],
            "bob_scratch": [],
        }
        path = tmp_path / "dense.json"
        path.write_text(json.dumps(obj))
        p = load_protocol(path)
        assert validate(p) == []


class TestClassicalObjects:
    def test_function_pair_round_trip(self, tmp_path):
        fp = and_pair()
        path = tmp_path / "fp.json"
        save(fp, path)
        back = load(path, expect="function_pair")
        assert np.array_equal(back.f_a, fp.f_a)
        assert back.a_size == 2

    def test_classical_protocol_round_trip(self, tmp_path):
        cp = random_classical_protocol(7, 3)
        path = tmp_path / "cp.json"
        save(cp, path)
        back = load(path, expect="classical_protocol")
        assert back.num_messages == cp.num_messages
        from qiclab import classical_ic
        from qiclab.fuzz import random_distribution

        mu = random_distribution((2, 2), 8)
        assert abs(classical_ic(back, mu) - classical_ic(cp, mu)) < 1e-14

    def test_type_dispatch(self, tmp_path):
        fp = and_pair()
        path = tmp_path / "fp.json"
        save(fp, path)
        with pytest.raises(FileFormatError, match="expected"):
            load(path, expect="protocol")
