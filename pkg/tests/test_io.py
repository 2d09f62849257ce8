import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qel import io, sampling
from qel.channels import random_channel, random_ensemble, random_povm
from qel.entropy import INFINITE
from qel.errors import NonHermitian, NotDensity, ShapeMismatch
from qel.tensor import MultipartiteState

seeds = st.integers(0, 2**32 - 1)


def roundtrip(doc):
    return json.loads(io.dumps(doc))


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_matrix_roundtrip_exact(seed, r, c):
    M = sampling.ginibre(r, c, sampling.rng(seed))
    back = io.matrix_from_json(roundtrip(io.matrix_to_json(M)))
    assert back.shape == (r, c)
    assert np.array_equal(back, M)


@given(seeds)
def test_state_roundtrip_keeps_dims(seed):
    s = MultipartiteState(sampling.random_density(12, seed), (2, 3, 2))
    back = io.state_from_json(roundtrip(io.state_to_json(s)))
    assert back.dims == (2, 3, 2)
    assert np.array_equal(back.rho, s.rho)


def test_channel_povm_ensemble_roundtrip():
    phi = random_channel(2, 3, 2, 0)
    back = io.channel_from_json(roundtrip(io.channel_to_json(phi)))
    assert (back.in_dim, back.out_dim) == (2, 3)
    assert all(np.array_equal(a, b) for a, b in zip(back.kraus, phi.kraus))
    M = random_povm(3, 4, 1)
    assert all(np.array_equal(a, b) for a, b in
               zip(io.povm_from_json(roundtrip(io.povm_to_json(M))).elements, M.elements))
    E = random_ensemble(2, 3, 2)
    E2 = io.ensemble_from_json(roundtrip(io.ensemble_to_json(E)))
    assert E2.weights == E.weights
    assert all(np.array_equal(a, b) for a, b in zip(E2.states, E.states))


def test_dumps_is_deterministic_strict_json():
    doc = {"x": np.float64(0.1), "z": 1 + 2j, "inf": INFINITE, "nan": float("nan"), "b": np.bool_(True)}
    text = io.dumps(doc)
    assert text == io.dumps(doc)
    assert text.endswith("\n")
    parsed = json.loads(text)
    assert parsed == {"x": 0.1, "z": [1.0, 2.0], "inf": "Infinite", "nan": "NaN", "b": True}


def test_load_malformed(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(io.FormatError):
        io.load(p)


@pytest.mark.parametrize("doc, exc", [
    ({"dims": [2]}, io.FormatError),
    ([1, 2], io.FormatError),
    ({"dims": [2], "entries": [[1, 0], [0, 0], [0, 0]]}, ShapeMismatch),
    ({"dims": [2], "entries": [1, 2, 3, 4]}, io.FormatError),
])
def test_matrix_format_errors(doc, exc):
    with pytest.raises(exc):
        io.matrix_from_json(doc)


def test_state_validation_on_load():
    not_hermitian = io.matrix_to_json(np.array([[0.5, 0.3], [0.0, 0.5]]))
    with pytest.raises(NonHermitian):
        io.hermitian_from_json(not_hermitian)
    with pytest.raises(NotDensity):
        io.state_from_json(io.matrix_to_json(np.diag([0.7, 0.7])))
