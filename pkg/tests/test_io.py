import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sharpbias import io as sio
from sharpbias.effect_core import EffectError, NotHermitian
from sharpbias.qubit import QubitEffect


class TestFormatting:
    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_float_round_trip(self, x):
        assert float(sio.fmt(x)) == x
        assert json.loads(sio.dumps({"x": x}))["x"] == x

    def test_dumps_structure(self):
        text = sio.dumps({"schema": 1, "v": [0.1, 2], "s": "a", "n": None, "b": True, "e": [], "d": {}})
        assert json.loads(text) == {"schema": 1, "v": [0.1, 2], "s": "a", "n": None, "b": True, "e": [], "d": {}}

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            sio.dumps({"x": float("nan")})

    def test_csv(self):
        assert sio.csv_text(("a", "b"), [("S0", 0.1), ("x,y", 1)]) == 'a,b\nS0,0.10000000000000001\n"x,y",1\n'


class TestOperators:
    def test_round_trip(self, tmp_path):
        M = np.array([[0.3, 0.1 + 0.2j], [0.1 - 0.2j, 0.6]])
        path = tmp_path / "op.json"
        sio.save_operator(M, path)
        H = sio.load_operator(path)
        np.testing.assert_array_equal(H.entries, M)

    def test_malformed(self):
        with pytest.raises(EffectError):
            sio.operator_from_dict({"dim": 2, "entries": [[[1, 0]]]})
        with pytest.raises(EffectError):
            sio.operator_from_dict({"entries": []})
        with pytest.raises(NotHermitian):
            sio.operator_from_dict({"dim": 2, "entries": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]})

    def test_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(EffectError):
            sio.load_operator(path)


class TestPairs:
    def test_round_trip(self, tmp_path):
        A, B = QubitEffect(0.5, (0.1, 0.0, 0.2)), QubitEffect(0.3, (0.0, -0.1, 0.0))
        path = tmp_path / "pair.json"
        path.write_text(sio.dumps(sio.pair_to_dict(A, B)))
        assert sio.load_pair(path) == (A, B)

    def test_missing_key(self):
        with pytest.raises(EffectError):
            sio.pair_from_dict({"A": {"a0": 0.5, "a": [0, 0, 0]}})
        with pytest.raises(EffectError):
            sio.pair_from_dict({"A": {"a0": 0.5}, "B": {"a0": 0.5, "a": [0, 0, 0]}})
