import json
import math

import numpy as np
import pytest

import urigid

SQUARE = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
C4 = [(0, 1), (1, 2), (2, 3), (0, 3)]
K4 = C4 + [(0, 2), (1, 3)]


def test_certify_square_k4():
    fw = urigid.Framework(SQUARE, K4)
    cert = urigid.certify(fw)
    assert cert.verdict == "UniversallyRigid"
    w = cert.omega / cert.omega[0]
    # edges sorted: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3)
    np.testing.assert_allclose(w, [1, -1, 1, 1, -1, 1], atol=1e-8)
    assert urigid.verify(fw, cert) == []


def test_square_c4_flex():
    fw = urigid.Framework(SQUARE, C4)
    cert = urigid.certify(fw)
    assert cert.verdict == "AffineFlexExists"
    assert cert.not_universally_rigid
    phi = urigid.detect_quadric(fw)
    flex = urigid.affine_flex(fw, phi)
    q = flex["points"]
    for i, j in C4:
        assert abs(np.linalg.norm(q[i] - q[j]) - 1.0) < 1e-10
    assert abs(np.linalg.norm(q[0] - q[2]) - math.sqrt(3)) < 1e-10
    found = urigid.refute(fw, [2], restarts=20)
    assert found is not None and found["residual"] <= 1e-12


def test_stress_and_gale():
    line = urigid.Framework(np.array([[0.0], [1.0], [2.0]]), [(0, 1), (0, 2), (1, 2)])
    basis = urigid.stress_space_basis(line)
    assert basis.shape == (3, 1)
    w = basis[:, 0] / basis[0, 0]
    np.testing.assert_allclose(w, [1, -0.5, 1], atol=1e-12)
    z = urigid.gale_basis(line)[:, 0]
    np.testing.assert_allclose(z / z[0], [1, -2, 1], atol=1e-12)
    S = urigid.stress_matrix(line, np.array([2.0, -1.0, 2.0]))
    np.testing.assert_array_equal(S, np.outer([1, -2, 1], [1, -2, 1]))


def test_generate_and_json_round_trip():
    fw = urigid.generate("lateration:n=7,r=2,seed=3")
    assert fw.num_nodes == 7 and fw.dimension == 2
    back = urigid.Framework.from_json(fw.to_json())
    assert back == fw
    res = urigid.find_max_rank_psd_stress(fw)
    assert res is not None and res["objective"] > 0
    cert = urigid.certify(fw, seed=1)
    text = cert.to_json()
    again = urigid.Certificate.from_json(text)
    assert again.to_json() == text
    assert json.loads(text)["verdict"] == "UniversallyRigid"
    assert urigid.verify(fw, again) == []
    assert "square-k4" in urigid.named_examples()


def test_tampering_and_errors():
    fw = urigid.generate("named:square-k4")
    d = urigid.certify(fw).to_dict()
    for entry in d["omega"]:
        entry["value"] = -entry["value"]
    assert urigid.verify(fw, urigid.Certificate.from_json(json.dumps(d)))
    assert not urigid.is_general_position(np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]))
    with pytest.raises(urigid.Error, match="loop"):
        urigid.Framework(SQUARE, [(0, 0), (0, 1), (1, 2), (2, 3)])
    with pytest.raises(ValueError):
        urigid.generate("wheel:n=5")
