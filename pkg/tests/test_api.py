"""Review API over a live campaign directory."""

from __future__ import annotations

import numpy as np
import pytest
from fastapi.testclient import TestClient

from stratabayes.api import create_app
from stratabayes.campaign import Campaign
from stratabayes.density import Grid, uniform_prior

FAST = dict(grid_step=1e-3, mc_draws=20_000, mc_seed=31337)


@pytest.fixture
def study(tmp_path, fixture_corpus, fixture_rules):
    campaign = Campaign.create(
        tmp_path / "study",
        question="is this a substantive document?",
        corpus=fixture_corpus,
        ruleset=fixture_rules,
        **FAST,
    )
    return campaign


@pytest.fixture
def client(study):
    return TestClient(create_app(study.directory))


def judge_all_via_api(client):
    while True:
        r = client.get("/next-draw")
        if r.status_code == 404:
            break
        draw = r.json()
        verdict = "no_match" if draw["stratum"] == "apparent_pseudo" else "match"
        r = client.post("/judgment", json={"draw_id": draw["draw_id"], "verdict": verdict})
        assert r.status_code == 200


class TestCampaignSummary:
    def test_summary_fields(self, client):
        data = client.get("/campaign").json()
        assert data["schema_version"] == 1
        assert data["state"] == "awaiting priors/presample"
        labels = {s["label"] for s in data["strata"]}
        assert labels == {"apparent_pseudo", "apparent_real"}
        assert data["corpus_total"] == 100
        assert data["allocation"] is None
        assert data["results"] == []


class TestNextDrawAndJudgment:
    def test_no_pending_is_404(self, client):
        assert client.get("/next-draw").status_code == 404

    def test_stable_until_judged(self, study, client):
        study.run_phase("presample", {"apparent_pseudo": 3, "apparent_real": 3}, seed=1)
        first = client.get("/next-draw").json()
        second = client.get("/next-draw").json()
        assert first["draw_id"] == second["draw_id"]
        client.post(
            "/judgment", json={"draw_id": first["draw_id"], "verdict": "no_match"}
        )
        third = client.get("/next-draw").json()
        assert third["draw_id"] != first["draw_id"]

    def test_first_lines_and_full_text(self, study, client):
        study.run_phase("presample", {"apparent_real": 1}, seed=2)
        small = client.get("/next-draw").json()
        assert "first_lines" in small and "text" not in small
        assert len(small["first_lines"].splitlines()) <= 50
        full = client.get("/next-draw", params={"full": "true"}).json()
        assert full["text"].startswith(full["first_lines"].splitlines()[0])

    def test_double_judgment_is_409(self, study, client):
        study.run_phase("presample", {"apparent_real": 2}, seed=3)
        draw = client.get("/next-draw").json()
        body = {"draw_id": draw["draw_id"], "verdict": "match"}
        assert client.post("/judgment", json=body).status_code == 200
        assert client.post("/judgment", json=body).status_code == 409

    def test_unknown_draw_is_404(self, client):
        r = client.post("/judgment", json={"draw_id": 999, "verdict": "match"})
        assert r.status_code == 404

    def test_bad_verdict_is_422(self, study, client):
        study.run_phase("presample", {"apparent_real": 1}, seed=4)
        draw = client.get("/next-draw").json()
        r = client.post("/judgment", json={"draw_id": draw["draw_id"], "verdict": "dunno"})
        assert r.status_code == 422

    def test_reviewer_header_recorded(self, study, client):
        study.run_phase("presample", {"apparent_real": 1}, seed=5)
        draw = client.get("/next-draw").json()
        client.post(
            "/judgment",
            json={"draw_id": draw["draw_id"], "verdict": "match"},
            headers={"X-Reviewer": "alice"},
        )
        reopened = Campaign.open(study.directory)
        assert reopened.judgments()[-1].reviewer == "alice"


class TestPriorRoundTrip:
    def test_equal_points_give_uniform(self, study, client):
        points = [[i / 10, 1.0] for i in range(11)]
        r = client.put("/prior/apparent_real", json={"points": points})
        assert r.status_code == 200
        data = r.json()
        assert data["points"] == points
        # downsampled preview: sums to 1 and is flat within tolerance
        mass = np.array(data["density"]["mass"])
        assert mass.sum() == pytest.approx(1.0, abs=1e-6)
        uniform = uniform_prior(Grid(FAST["grid_step"]))
        reopened = Campaign.open(study.directory)
        np.testing.assert_allclose(
            reopened.prior_density("apparent_real").mass, uniform.mass, atol=1e-6
        )

    def test_get_echoes_put(self, client):
        points = [[i / 10, float(v)] for i, v in enumerate([0, 1, 2, 5, 7, 9, 7, 5, 2, 1, 0])]
        client.put("/prior/apparent_real", json={"points": points})
        data = client.get("/prior/apparent_real").json()
        assert data["points"] == points

    def test_default_prior_is_uniform(self, client):
        data = client.get("/prior/apparent_real").json()
        assert data["points"] is None
        mass = np.array(data["density"]["mass"])
        assert mass.std() < 1e-12

    def test_invalid_points_are_422(self, client):
        r = client.put(
            "/prior/apparent_real",
            json={"points": [[0, 1], [0.6, 1], [0.4, 1], [1, 1]]},
        )
        assert r.status_code == 422

    def test_unknown_stratum_is_404(self, client):
        assert client.get("/prior/ghost").status_code == 404

    def test_prior_after_plan_is_409(self, study, client):
        study.run_phase("presample", {"apparent_pseudo": 3, "apparent_real": 3}, seed=6)
        judge_all_via_api(client)
        assert client.post("/plan", json={"budget": 20}).status_code == 200
        r = client.put(
            "/prior/apparent_real", json={"points": [[i / 10, 1.0] for i in range(11)]}
        )
        assert r.status_code == 409


class TestPlanAndFinalize:
    def test_plan_before_presample_is_409(self, client):
        assert client.post("/plan", json={"budget": 10}).status_code == 409

    def test_finalize_pending_is_409_with_ids(self, study, client):
        study.run_phase("presample", {"apparent_real": 2}, seed=7)
        r = client.post("/finalize", json={})
        assert r.status_code == 409
        assert "pending" in str(r.json())

    def test_whole_flow(self, study, client):
        study.run_phase("presample", {"apparent_pseudo": 4, "apparent_real": 4}, seed=8)
        judge_all_via_api(client)
        plan = client.post("/plan", json={"budget": 24}).json()
        assert sum(plan["counts"].values()) == 24
        study = Campaign.open(study.directory)
        study.run_phase("full", seed=9)
        judge_all_via_api(client)
        result = client.post("/finalize", json={"mass": 0.95})
        assert result.status_code == 200
        data = result.json()
        assert data["doc_interval"][0] <= data["doc_interval"][1]
        assert 0.0 <= data["mean"] <= 1.0
        summary = client.get("/campaign").json()
        assert summary["results"]
        assert summary["state"].startswith("finalized")


class TestDensityEndpoint:
    def test_downsampled_prior_renormalizes(self, client):
        data = client.get("/density/prior", params={"stratum": "apparent_real"}).json()
        mass = np.array(data["mass"])
        assert len(mass) <= 2000
        assert mass.sum() == pytest.approx(1.0, abs=1e-6)

    def test_unknown_kind_404(self, client):
        assert client.get("/density/mystery").status_code == 404

    def test_stratum_required_for_stratum_densities(self, client):
        assert client.get("/density/prior").status_code == 422

    def test_combined_requires_finalize(self, client):
        assert client.get("/density/combined").status_code == 404

    def test_posterior_matches_campaign(self, study, client):
        study.run_phase("presample", {"apparent_pseudo": 3, "apparent_real": 3}, seed=10)
        judge_all_via_api(client)
        data = client.get(
            "/density/presample-posterior", params={"stratum": "apparent_real"}
        ).json()
        reopened = Campaign.open(study.directory)
        states = {s.label: s for s in reopened.stratum_states()}
        assert data["mean"] == pytest.approx(
            states["apparent_real"].posterior.mean(), abs=1e-12
        )
