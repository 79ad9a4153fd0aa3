import pytest
from fastapi.testclient import TestClient

from chordalsdp.service import app

MINIMAL = "1\n1\n2\n1.0\n0 1 1 1 1.0\n1 1 1 1 1.0\n"


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


class TestHealth:
    def test_health(self, client):
        resp = client.get("/health")
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "ok"
        assert "version" in body


class TestSolveEndpoint:
    def test_solve_minimal_problem(self, client):
        resp = client.post("/solve", json={"sdpa": MINIMAL})
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "Optimal"
        # max tr(F0 Y) s.t. Y11 = 1, Y PSD with F0 = e1 e1': optimum 1
        assert body["objective_primal"] == pytest.approx(1.0, abs=1e-3)
        assert body["residuals"]["primal"] <= 1e-4
        assert body["problem"]["n"] == 2
        assert body["solution"] is not None

    def test_solve_with_settings_override(self, client):
        resp = client.post(
            "/solve",
            json={"sdpa": MINIMAL, "settings": {"max_iters": 1, "check_interval": 1}},
        )
        assert resp.status_code == 200
        assert resp.json()["status"] == "MaxItersReached"
        assert resp.json()["iterations"] == 1

    def test_solve_theta1(self, client, theta1_path):
        resp = client.post("/solve", json={"sdpa": theta1_path.read_text()})
        assert resp.status_code == 200
        body = resp.json()
        assert body["status"] == "Optimal"
        assert abs(body["objective_primal"] - 23.0) <= 0.12
        assert body["problem"]["clique_max"] == 50

    def test_parse_error_becomes_400(self, client):
        resp = client.post("/solve", json={"sdpa": "1\nnot-a-number\n"})
        assert resp.status_code == 400
        assert "line 2" in resp.json()["detail"]

    def test_invalid_settings_rejected(self, client):
        resp = client.post(
            "/solve", json={"sdpa": MINIMAL, "settings": {"alpha": 2.5}}
        )
        assert resp.status_code == 422


class TestAnalyzeEndpoint:
    def test_analyze_theta1(self, client, theta1_path):
        resp = client.post("/analyze", json={"sdpa": theta1_path.read_text()})
        assert resp.status_code == 200
        body = resp.json()
        assert body["n"] == 50
        assert body["m"] == 104
        assert body["p"] == 1
        assert body["clique_max"] == body["clique_min"] == 50
        assert body["n_d"] == 2500

    def test_analyze_without_decomposition(self, client):
        resp = client.post("/analyze", json={"sdpa": MINIMAL, "decompose": False})
        assert resp.status_code == 200
        assert resp.json()["p"] == 1

    def test_analyze_parse_error(self, client):
        resp = client.post("/analyze", json={"sdpa": "junk"})
        assert resp.status_code == 400
