"""Exact figures for the partial London slice in tests/fixtures/stratford."""

import pytest

from transit_access.analysis.metrics import betweenness_all, closeness_all, top_k
from transit_access.analysis.socio import borough_summaries, unmatched_boroughs
from transit_access.ingest.parsers import load_dataset
from transit_access.network.construct import (
    accessible_station_ids,
    build_accessible_network,
    build_full_network,
    line_accessibility_share,
    mixed_access_stations,
)
from transit_access.network.graph_core import diameter
from tests.utils import stratford_paths

STEP_FREE = {
    "abbey_road",
    "canning_town",
    "forest_gate",
    "manor_park",
    "maryland",
    "north_greenwich",
    "star_lane",
    "stratford",
    "stratford_high_street",
    "west_ham",
    "whitechapel",
}


@pytest.fixture(scope="module")
def stratford():
    paths = stratford_paths()
    dataset = load_dataset(paths["stations"], paths["branches"], paths["access"], paths["boroughs"])
    full = build_full_network(dataset.stations, dataset.branches)
    accessible = build_accessible_network(
        dataset.stations, dataset.branches, dataset.access_records
    )
    return dataset, full, accessible


class TestNetworks:
    def test_sizes(self, stratford):
        _, full, accessible = stratford
        assert (full.number_of_nodes(), full.number_of_edges()) == (16, 17)
        assert (accessible.number_of_nodes(), accessible.number_of_edges()) == (11, 12)
        assert set(accessible.nodes) == STEP_FREE

    def test_diameters(self, stratford):
        _, full, accessible = stratford
        assert diameter(full).value == 7
        assert diameter(accessible).value == 6
        assert diameter(accessible).connected

    def test_interchange_degrees(self, stratford):
        _, full, accessible = stratford
        assert full.degree("stratford") == 6
        assert full.degree("west_ham") == 5
        assert accessible.degree("stratford") == 4
        assert accessible.degree("west_ham") == 4

    def test_district_and_central_leave_no_accessible_edges(self, stratford):
        _, _, accessible = stratford
        lines = set()
        for u, v in accessible.edges:
            lines |= accessible.edge_lines(u, v)
        assert lines == {"dlr", "elizabeth", "jubilee"}

    def test_line_shares(self, stratford):
        dataset, _, _ = stratford
        shares = line_accessibility_share(dataset.branches, dataset.access_records)
        assert {line: (s.accessible, s.total) for line, s in shares.items()} == {
            "central": (1, 3),
            "dlr": (6, 6),
            "district": (1, 4),
            "elizabeth": (5, 5),
            "jubilee": (4, 4),
        }
        assert mixed_access_stations(dataset.stations, dataset.access_records) == []


class TestCentrality:
    def test_stratford_leads_accessible_betweenness(self, stratford):
        _, _, accessible = stratford
        (first, score), (second, runner_up) = top_k(betweenness_all(accessible), 2)
        assert (first, second) == ("stratford", "west_ham")
        assert score == pytest.approx(58 / 90, abs=1e-12)
        assert runner_up == pytest.approx(47 / 90, abs=1e-12)

    def test_stratford_leads_full_betweenness(self, stratford):
        _, full, _ = stratford
        (first, score), (second, runner_up) = top_k(betweenness_all(full), 2)
        assert (first, second) == ("stratford", "west_ham")
        assert score == pytest.approx(139 / 210, abs=1e-12)
        assert runner_up == pytest.approx(133 / 210, abs=1e-12)

    def test_accessible_closeness(self, stratford):
        _, _, accessible = stratford
        closeness = closeness_all(accessible)
        assert top_k(closeness, 1)[0][0] == "stratford"
        assert closeness.scores["stratford"] == pytest.approx(10 / 18, abs=1e-12)
        assert closeness.scores["west_ham"] == pytest.approx(10 / 19, abs=1e-12)

    def test_full_closeness_tie_breaks_by_id(self, stratford):
        _, full, _ = stratford
        ranked = top_k(closeness_all(full), 2)
        assert [s for s, _ in ranked] == ["stratford", "west_ham"]
        assert ranked[0][1] == ranked[1][1] == pytest.approx(15 / 29, abs=1e-12)


class TestNewham:
    def test_borough_join(self, stratford, caplog):
        dataset, _, _ = stratford
        ids = accessible_station_ids(dataset.branches, dataset.access_records)
        (newham,) = borough_summaries(dataset.stations, ids, dataset.boroughs)
        assert newham.borough == "Newham"
        assert (newham.accessible_count, newham.total_count) == (9, 12)
        assert newham.median_income_k == 28.9
        assert (newham.daytime_total, newham.daytime_workers) == (306102, 274935)
        assert "UnmatchedBorough" in caplog.text

    def test_unmatched_boroughs(self, stratford):
        dataset, _, _ = stratford
        assert unmatched_boroughs(dataset.stations, dataset.boroughs) == [
            "Greenwich",
            "Tower Hamlets",
            "Waltham Forest",
        ]
