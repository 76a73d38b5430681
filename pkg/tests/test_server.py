import pytest
from fastapi.testclient import TestClient

from techatlas import atlas, explorer
from techatlas.artifact import load_artifact
from techatlas.ideation import IdeaLedger
from techatlas.server import (
    create_app,
    default_ledger_path,
    nearby_payload,
    panel_payload,
    position_payload,
)


@pytest.fixture()
def client(fixture_artifact, tmp_path):
    artifact, out_dir = fixture_artifact
    loaded = load_artifact(out_dir)
    ledger = IdeaLedger(tmp_path / "ledger.jsonl")
    app = create_app(loaded, ledger)
    with TestClient(app) as tc:
        tc.artifact = loaded
        tc.ledger = ledger
        yield tc


class TestMapEndpoint:
    def test_map_levels(self, client):
        for level in (3, 4):
            body = client.get(f"/map?level={level}").json()
            expected = atlas.map_payload(
                client.artifact.graphs[level], client.artifact.layouts[level]
            )
            assert body == expected

    def test_bad_level(self, client):
        assert client.get("/map?level=5").status_code == 400
        assert client.get("/map").status_code == 422


class TestPositionEndpoint:
    def test_position_payload(self, client):
        body = client.get("/position", params={"q": "rolling toy", "level": 3}).json()
        expected = position_payload(
            explorer.position_domain(client.artifact.index, "rolling toy", 3)
        )
        assert body == expected
        assert body["red_fields"] == ["A63", "B60", "G09"]
        assert body["match_count"] == 3

    def test_unmatched_query_is_valid_and_flagged(self, client):
        body = client.get("/position", params={"q": "quantum sponge", "level": 3}).json()
        assert body["unpositioned"] is True
        assert body["red_fields"] == []

    def test_empty_query_rejected(self, client):
        assert client.get("/position", params={"q": "  ", "level": 3}).status_code == 400


class TestNearbyEndpoint:
    def test_matches_library_call(self, client):
        body = client.get("/nearby", params={"q": "rolling toy", "level": 3, "k": 5}).json()
        position = explorer.position_domain(client.artifact.index, "rolling toy", 3)
        entries = explorer.rank_nearby(position, client.artifact.matrices[3], 5)
        assert body == nearby_payload("rolling toy", 3, entries)
        assert len(body["entries"]) == 5

    def test_unpositioned_rejected(self, client):
        resp = client.get("/nearby", params={"q": "quantum sponge", "level": 3, "k": 5})
        assert resp.status_code == 400
        assert "matched no patents" in resp.json()["detail"]


class TestFieldEndpoint:
    def test_white_field_panel(self, client):
        body = client.get("/field/F41", params={"level": 3}).json()
        expected = panel_payload(explorer.field_panel(client.artifact.index, "F41"))
        assert body == expected
        assert body["stimulus_scope"] == "all-field-patents"

    def test_red_field_panel_filtered(self, client):
        body = client.get("/field/B32", params={"q": "water seepage"}).json()
        assert body["stimulus_scope"] == "query-filtered"
        assert body["scope_ids"] == ["fx0010", "fx0011", "fx0012", "fx0013"]

    def test_level_code_mismatch(self, client):
        resp = client.get("/field/B32B", params={"level": 3})
        assert resp.status_code == 400

    def test_malformed_code_404(self, client):
        assert client.get("/field/b3").status_code == 404

    def test_absent_field_empty_panel(self, client):
        body = client.get("/field/H99").json()
        assert body["scope_ids"] == []

    def test_negative_list_sizes_rejected(self, client):
        assert client.get("/field/B32", params={"k_terms": -1}).status_code == 400
        assert client.get("/field/B32", params={"k_patents": -1}).status_code == 400


class TestPatentEndpoint:
    def test_known_patent(self, client):
        body = client.get("/patent/fx0010").json()
        assert body["title"] == "Water barrier panel"
        assert body["grant_date"] == "1977-03-15"
        assert "citation_count" in body

    def test_unknown_patent(self, client):
        assert client.get("/patent/nope").status_code == 404


class TestIdeasEndpoints:
    DRAFT = {
        "heuristic": "combination",
        "stimulus_text": "authentication",
        "stimulus_kind": "term",
        "source_field": "G07",
        "target_query": "rolling toy",
        "idea_text": "rolling toy as an access badge",
    }

    def test_post_then_get_round_trip(self, client):
        posted = client.post("/ideas", json=self.DRAFT)
        assert posted.status_code == 200
        record = posted.json()
        position = explorer.position_domain(client.artifact.index, "rolling toy", 3)
        from techatlas.proximity import domain_proximity

        expected_omega = domain_proximity(client.artifact.matrices[3], position.x, "G07")
        assert record["omega"] == pytest.approx(expected_omega, abs=0)
        assert record["artifact_hash"] == client.artifact.manifest_hash

        listing = client.get("/ideas", params={"order": "proximity_desc"}).json()
        assert [r["idea_id"] for r in listing] == [record["idea_id"]]

    def test_ordering_across_posts(self, client):
        client.post("/ideas", json=self.DRAFT)
        far = dict(self.DRAFT, source_field="A01", idea_text="farm rover")
        client.post("/ideas", json=far)
        desc = client.get("/ideas", params={"order": "proximity_desc"}).json()
        asc = client.get("/ideas", params={"order": "proximity_asc"}).json()
        omegas = [r["omega"] for r in desc]
        assert omegas == sorted(omegas, reverse=True)
        assert [r["idea_id"] for r in asc] == [r["idea_id"] for r in desc][::-1]

    def test_unknown_source_field_rejected(self, client):
        bad = dict(self.DRAFT, source_field="Z99")
        assert client.post("/ideas", json=bad).status_code == 400

    def test_unpositioned_target_rejected(self, client):
        bad = dict(self.DRAFT, target_query="quantum sponge")
        resp = client.post("/ideas", json=bad)
        assert resp.status_code == 400

    def test_4digit_source_field_uses_level4(self, client):
        body = dict(self.DRAFT, source_field="G07C")
        record = client.post("/ideas", json=body).json()
        position = explorer.position_domain(client.artifact.index, "rolling toy", 4)
        from techatlas.proximity import domain_proximity

        assert record["omega"] == pytest.approx(
            domain_proximity(client.artifact.matrices[4], position.x, "G07C"), abs=0
        )

    def test_render_endpoint(self, client):
        body = client.get(
            "/ideas/render",
            params={"heuristic": "combination", "stimulus": "data collection",
                    "target": "rolling toy"},
        ).json()
        assert body["sentence"] == "Combine data collection with rolling toy"

    def test_render_bad_heuristic(self, client):
        resp = client.get(
            "/ideas/render", params={"heuristic": "mashup", "stimulus": "x", "target": "y"}
        )
        assert resp.status_code == 400


class TestLedgerPlacement:
    def test_default_ledger_is_sibling_of_artifact(self, tmp_path):
        path = default_ledger_path(tmp_path / "artifacts" / "prod")
        assert path == tmp_path / "artifacts" / "prod.ledger.jsonl"
