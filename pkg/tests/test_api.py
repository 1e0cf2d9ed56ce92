import json

import pytest
from fastapi.testclient import TestClient

from ladderforge.api import create_app, reveal_ladder
from ladderforge.study import StudyEngine

from conftest import drive_annotator_to_done


@pytest.fixture()
def client(store_copy):
    app = create_app(store_copy)
    with TestClient(app) as test_client:
        test_client.store = store_copy
        yield test_client


def register(client, name="Annotator One", role="student") -> dict:
    response = client.post("/api/annotators", json={"displayName": name, "role": role})
    assert response.status_code == 201
    return response.json()


def auth(token: str) -> dict:
    return {"X-Annotator-Token": token}


def expected_eligibility(store) -> list[str]:
    return store.load_study()["eligibility"]["expectedOutputs"]


def correct_calibration(store) -> list[int]:
    return [entry["correctIndex"] for entry in store.load_study()["calibration"]]


class TestAnnotatorsAndAuth:
    def test_create_returns_id_and_token(self, client):
        created = register(client)
        assert created["annotatorId"]
        assert len(created["token"]) == 32

    def test_unknown_role_rejected(self, client):
        response = client.post(
            "/api/annotators", json={"displayName": "X", "role": "wizard"}
        )
        assert response.status_code == 422

    def test_study_routes_require_token(self, client):
        assert client.get("/api/study/state").status_code == 401
        assert client.get(
            "/api/study/state", headers=auth("0" * 32)
        ).status_code == 401


class TestStudyFlow:
    def test_state_carries_phase_payloads(self, client):
        token = register(client)["token"]
        state = client.get("/api/study/state", headers=auth(token)).json()
        assert state["phase"] == "eligibility"
        assert "code" in state["eligibility"]
        assert len(state["eligibility"]["inputs"]) == 3
        # the expected outputs must never ride along
        assert "expectedOutputs" not in json.dumps(state)

    def test_eligibility_failure_disqualifies(self, client):
        token = register(client)["token"]
        response = client.post(
            "/api/study/eligibility",
            json={"predictedOutputs": ["1", "2", "3"]},
            headers=auth(token),
        )
        assert response.json()["phase"] == "disqualified"
        again = client.post(
            "/api/study/eligibility",
            json={"predictedOutputs": ["1", "2", "3"]},
            headers=auth(token),
        )
        assert again.status_code == 409

    def test_calibration_reports_wrong_indices_but_never_answers(self, client):
        token = register(client)["token"]
        client.post(
            "/api/study/eligibility",
            json={"predictedOutputs": expected_eligibility(client.store)},
            headers=auth(token),
        )
        state = client.get("/api/study/state", headers=auth(token)).json()
        assert state["phase"] == "calibration"
        assert "correctIndex" not in json.dumps(state)
        answers = correct_calibration(client.store)
        answers[0] = (answers[0] + 1) % 2
        response = client.post(
            "/api/study/calibration", json={"answers": answers}, headers=auth(token)
        )
        body = response.json()
        assert body["phase"] == "calibration"
        assert body["wrongIndices"] == [0]
        assert "correctIndex" not in json.dumps(body)

    def test_full_item_flow_and_rating_gate(self, client):
        token = register(client)["token"]
        client.post(
            "/api/study/eligibility",
            json={"predictedOutputs": expected_eligibility(client.store)},
            headers=auth(token),
        )
        client.post(
            "/api/study/calibration",
            json={"answers": correct_calibration(client.store)},
            headers=auth(token),
        )
        first = client.get("/api/study/next", headers=auth(token)).json()
        assert not first["done"]
        item = first["item"]
        assert item["problemId"] == "sortasum"
        assert item["index"] == 0 and item["total"] == 15
        assert set(item["ladder"]) == {"0", "1", "2", "3", "4"}

        # rating outside the current item is a conflict
        bad = client.post(
            "/api/study/ratings",
            json={
                "submissionId": "sum13-s10",
                "level": 0,
                "metric": "relevance",
                "score": 3,
            },
            headers=auth(token),
        )
        assert bad.status_code == 409

        for level in range(5):
            for metric in ("relevance", "effectiveness"):
                ok = client.post(
                    "/api/study/ratings",
                    json={
                        "submissionId": item["submissionId"],
                        "level": level,
                        "metric": metric,
                        "score": 4,
                    },
                    headers=auth(token),
                )
                assert ok.status_code == 200
        second = client.get("/api/study/next", headers=auth(token)).json()
        assert second["item"]["index"] == 1
        assert second["item"]["submissionId"] == "sortasum-s02"

    def test_score_out_of_range_rejected(self, client):
        token = register(client)["token"]
        client.post(
            "/api/study/eligibility",
            json={"predictedOutputs": expected_eligibility(client.store)},
            headers=auth(token),
        )
        client.post(
            "/api/study/calibration",
            json={"answers": correct_calibration(client.store)},
            headers=auth(token),
        )
        item = client.get("/api/study/next", headers=auth(token)).json()["item"]
        response = client.post(
            "/api/study/ratings",
            json={
                "submissionId": item["submissionId"],
                "level": 0,
                "metric": "relevance",
                "score": 6,
            },
            headers=auth(token),
        )
        assert response.status_code == 422


class TestLadderReveal:
    def test_payload_is_monotone_prefix_chain(self, client):
        previous: dict[str, str] = {}
        for max_level in range(5):
            payload = client.get(
                f"/api/ladders/sortasum-s02?maxLevel={max_level}"
            ).json()
            levels = payload["levels"]
            assert set(levels) == {str(k) for k in range(max_level + 1)}
            for key, text in previous.items():
                assert levels[key] == text
            previous = levels

    def test_max_level_two_has_no_higher_level_text(self, client):
        payload = client.get("/api/ladders/sortasum-s02?maxLevel=2").json()
        raw = json.dumps(payload)
        full = client.store.load_ladder("sortasum-s02")["levels"]
        assert full["3"] not in raw
        assert full["4"] not in raw

    def test_unknown_submission_404(self, client):
        assert client.get("/api/ladders/ghost?maxLevel=1").status_code == 404

    def test_flags_filtered_by_revealed_level(self, client):
        # iseverywhere-s06 carries a level-1 mismatch flag
        verdict_only = client.get("/api/ladders/iseverywhere-s06?maxLevel=0").json()
        assert verdict_only["flags"] == []
        with_case = client.get("/api/ladders/iseverywhere-s06?maxLevel=1").json()
        assert [f["code"] for f in with_case["flags"]] == ["CLAIMED_OUTPUT_MISMATCH"]

    def test_reveal_helper_validates_level(self, client):
        with pytest.raises(ValueError):
            reveal_ladder(client.store, "sortasum-s02", 9)


class TestAnalyticsEndpoints:
    def test_agreement_needs_two_annotators(self, client):
        assert client.get("/api/analytics/agreement").status_code == 404

    def test_agreement_and_figures(self, client):
        engine = StudyEngine(client.store)
        drive_annotator_to_done(engine, "First")
        drive_annotator_to_done(engine, "Second")
        agreement = client.get("/api/analytics/agreement").json()
        assert len(agreement["annotatorIds"]) == 2
        assert agreement["values"][0][0] == pytest.approx(1.0)
        assert agreement["values"][0][1] == pytest.approx(agreement["values"][1][0])

        fig1 = client.get("/api/analytics/fig1?metric=relevance").json()
        assert {c["problemId"] for c in fig1["cells"]} == {
            "sortasum", "iseverywhere", "counthi", "sum13", "frontback",
        }
        assert {c["level"] for c in fig1["cells"]} == {0, 1, 2, 3, 4}

        fig2 = client.get("/api/analytics/fig2?metric=effectiveness").json()
        assert {c["bucket"] for c in fig2["cells"]} == {"low", "mid", "high"}
        for cell in fig2["cells"]:
            assert cell["n"] == 2 * 5  # two annotators x five problems
