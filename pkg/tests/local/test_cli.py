import csv
import json
import os

import pytest

from transit_access.cli import transit_access as cli
from transit_access.common import constants
from transit_access.common.constants import EXIT_INPUT_ERROR, EXIT_INVARIANT, EXIT_OK
from transit_access.common.errors import InvariantViolation
from tests.utils import cli_args, mini_city_paths, stratford_paths

MINI_ACCESSIBLE = {"alder", "cedar", "elm", "fern", "grove", "heath", "iris", "juniper"}


@pytest.fixture(autouse=True)
def log_dir(tmp_path, monkeypatch):
    path = tmp_path / "logs"
    monkeypatch.setattr(constants, "TRANSIT_ACCESS_LOG_DIR", str(path))
    monkeypatch.delenv("TRANSIT_ACCESS_CONFIG", raising=False)
    monkeypatch.setattr(constants, "TRANSIT_ACCESS_CONFIG", str(tmp_path / "no-config.yaml"))
    return path


@pytest.fixture
def out_dir(tmp_path):
    return str(tmp_path / "out")


def _rows(path):
    with open(path, encoding="utf-8", newline="") as f:
        return list(csv.reader(f))


def _json(path):
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _snapshot(root):
    files = {}
    for dirpath, _, names in os.walk(root):
        for name in names:
            path = os.path.join(dirpath, name)
            with open(path, "rb") as f:
                files[os.path.relpath(path, root)] = f.read()
    return files


def _write_city(tmp_path, stations, branches, access):
    paths = {}
    for name, text in (("stations", stations), ("branches", branches), ("access", access)):
        path = tmp_path / f"{name}.csv"
        path.write_text(text, encoding="utf-8")
        paths[name] = str(path)
    return paths


class TestBuild:
    def test_stats(self, out_dir):
        assert cli.run(cli_args("build", out_dir)) == EXIT_OK
        accessible = _json(os.path.join(out_dir, "accessible", "stats.json"))
        assert (accessible["nodes"], accessible["edges"], accessible["diameter"]) == (8, 7, 6)
        assert accessible["connected"] is True
        full = _json(os.path.join(out_dir, "full", "stats.json"))
        assert (full["nodes"], full["edges"], full["diameter"]) == (11, 11, 5)
        assert full["average_degree"] == 2.0

    def test_edge_list(self, out_dir):
        cli.run(cli_args("build", out_dir))
        rows = _rows(os.path.join(out_dir, "full", "edges.csv"))
        assert rows[0] == ["u", "v", "lines"]
        assert ["cedar", "grove", "BLUE"] in rows
        assert len(rows) == 12

    def test_access_tables(self, out_dir):
        cli.run(cli_args("build", out_dir))
        mixed = _rows(os.path.join(out_dir, "access", "mixed_access.csv"))
        assert mixed[1] == ["cedar", "RED", "", "BLUE"]
        shares = _rows(os.path.join(out_dir, "access", "line_shares.csv"))
        assert shares[1:] == [
            ["BLUE", "4", "5", "0.800"],
            ["GREEN", "3", "4", "0.750"],
            ["RED", "3", "5", "0.600"],
        ]

    def test_exclude_lines(self, out_dir):
        assert cli.run(cli_args("build", out_dir, True, "--exclude-lines", "GREEN")) == EXIT_OK
        full = _json(os.path.join(out_dir, "full", "stats.json"))
        assert full["edges"] == 8

    def test_manifest(self, out_dir):
        cli.run(cli_args("build", out_dir))
        manifest = _json(os.path.join(out_dir, "manifest.json"))
        assert manifest["network_kinds"] == ["accessible", "full"]
        assert manifest["closeness_convention"] == "n-1"
        assert manifest["inputs"] == mini_city_paths()
        assert set(manifest["checksums"]) == {"stations", "branches", "access", "boroughs"}
        assert all(v.startswith("sha256:") for v in manifest["checksums"].values())
        assert "threads" not in json.dumps(manifest)
        assert manifest["dataset_notes"] == ""

    def test_dataset_notes_recorded_in_manifest(self, out_dir):
        notes = "partial slice: Stratford area only, 16 of 272 stations"
        argv = ["build", "--out", out_dir, "--dataset-notes", notes]
        for flag, path in stratford_paths().items():
            argv += [f"--{flag}", path]
        assert cli.run(argv) == EXIT_OK
        assert _json(os.path.join(out_dir, "manifest.json"))["dataset_notes"] == notes
        full = _json(os.path.join(out_dir, "full", "stats.json"))
        assert (full["nodes"], full["edges"], full["diameter"]) == (16, 17, 7)

    def test_empty_stations_file(self, tmp_path, out_dir, caplog):
        paths = _write_city(tmp_path, "", "line_id,branch_id,seq,station_id\n", "a,b,c\n")
        argv = ["build", "--out", out_dir]
        for flag, path in paths.items():
            argv += [f"--{flag}", path]
        assert cli.run(argv) == EXIT_INPUT_ERROR
        assert "MissingColumn" in caplog.text

    def test_nothing_accessible(self, tmp_path, out_dir):
        paths = _write_city(
            tmp_path,
            "id,name,borough,region,lines\na,A,X,1,L\nb,B,X,1,L\n",
            "line_id,branch_id,seq,station_id\nL,m,1,a\nL,m,2,b\n",
            "station_id,line_id,mode\na,L,none\n",
        )
        argv = ["build", "--out", out_dir]
        for flag, path in paths.items():
            argv += [f"--{flag}", path]
        assert cli.run(argv) == EXIT_INPUT_ERROR


class TestCentrality:
    def test_accessible_top_table(self, out_dir):
        assert cli.run(cli_args("centrality", out_dir)) == EXIT_OK
        rows = _rows(os.path.join(out_dir, "accessible", "top_betweenness.csv"))
        assert rows[0] == ["rank", "station_id", "name", "score"]
        assert rows[1:4] == [
            ["1", "heath", "Heath Cross", "0.571"],
            ["2", "juniper", "Juniper Hill", "0.571"],
            ["3", "grove", "Grove Interchange", "0.524"],
        ]
        assert len(rows) == 9  # only 8 stations

    def test_full_table_flags_accessibility(self, out_dir):
        cli.run(cli_args("centrality", out_dir))
        rows = _rows(os.path.join(out_dir, "full", "top_closeness.csv"))
        assert rows[0][-1] == "accessible"
        for row in rows[1:]:
            assert row[-1] == ("Y" if row[1] in MINI_ACCESSIBLE else "N")

    def test_full_precision_scores(self, out_dir):
        cli.run(cli_args("centrality", out_dir))
        rows = _rows(os.path.join(out_dir, "accessible", "scores_betweenness.csv"))
        scores = {row[0]: float(row[2]) for row in rows[1:]}
        assert scores["heath"] == pytest.approx(12 / 21, rel=1e-12)
        assert scores["elm"] == 0.0

    def test_top_k_from_config_file_and_flag(self, tmp_path, out_dir):
        config = tmp_path / "config.yaml"
        config.write_text("top_k: 2\nnetwork: accessible\n", encoding="utf-8")
        assert cli.run(cli_args("centrality", out_dir, True, "--config-file", str(config))) == 0
        assert len(_rows(os.path.join(out_dir, "accessible", "top_closeness.csv"))) == 3
        assert not os.path.exists(os.path.join(out_dir, "full"))

        argv = cli_args("centrality", out_dir, True, "--config-file", str(config), "--top-k", "4")
        assert cli.run(argv) == EXIT_OK
        assert len(_rows(os.path.join(out_dir, "accessible", "top_closeness.csv"))) == 5

    def test_unknown_config_key(self, tmp_path, out_dir):
        config = tmp_path / "config.yaml"
        config.write_text("colour: blue\n", encoding="utf-8")
        argv = cli_args("centrality", out_dir, True, "--config-file", str(config))
        assert cli.run(argv) == EXIT_INPUT_ERROR

    @pytest.mark.parametrize(
        "text",
        ["- top_k\n- 5\n", "top_k: '5'\n", "exclude_lines: overground\n", "top_k: [1\n"],
    )
    def test_malformed_config_file(self, tmp_path, out_dir, text):
        config = tmp_path / "config.yaml"
        config.write_text(text, encoding="utf-8")
        argv = cli_args("centrality", out_dir, True, "--config-file", str(config))
        assert cli.run(argv) == EXIT_INPUT_ERROR

    def test_single_edge_graph(self, tmp_path, out_dir):
        paths = _write_city(
            tmp_path,
            "id,name,borough,region,lines\na,A,X,1,L\nb,B,X,1,L\n",
            "line_id,branch_id,seq,station_id\nL,m,1,a\nL,m,2,b\n",
            "station_id,line_id,mode\na,L,full\nb,L,full\n",
        )
        argv = ["centrality", "--out", out_dir]
        for flag, path in paths.items():
            argv += [f"--{flag}", path]
        assert cli.run(argv) == EXIT_OK
        for kind in ("accessible", "full"):
            rows = _rows(os.path.join(out_dir, kind, "scores_betweenness.csv"))
            assert [row[2] for row in rows[1:]] == ["0.0", "0.0"]

    def test_literal_closeness_convention(self, out_dir):
        argv = cli_args("centrality", out_dir, True, "--closeness-convention", "n")
        assert cli.run(argv) == EXIT_OK
        assert _json(os.path.join(out_dir, "manifest.json"))["closeness_convention"] == "n"


class TestFigures:
    def test_outputs(self, out_dir):
        assert cli.run(cli_args("figures", out_dir)) == EXIT_OK
        figures = os.path.join(out_dir, "figures")
        curve = _rows(os.path.join(figures, "sorted_betweenness.csv"))
        assert curve[0] == ["network", "rank", "value"]
        assert len(curve) == 1 + 8 + 11
        values = [float(r[2]) for r in curve[1:] if r[0] == "accessible"]
        assert values == sorted(values, reverse=True)

        fits = _json(os.path.join(figures, "power_law.json"))
        assert set(fits) == {"accessible", "full"}
        assert fits["accessible"]["k_support"] == [1, 2, 3]
        assert fits["full"]["k_support"] == [1, 2, 3, 4]

        distribution = _rows(os.path.join(figures, "degree_distribution.csv"))
        assert ["accessible", "2", "4", "0.5", "0.625"] in distribution

        bars = _rows(os.path.join(figures, "borough_bars.csv"))
        assert bars[0] == [
            "borough",
            "accessible_count",
            "total_count",
            "top_betweenness",
            "top_closeness",
        ]
        trends = _json(os.path.join(figures, "trendlines.json"))
        assert set(trends["full"]) == {"betweenness", "closeness"}

    def test_subgraph_carries_lines_and_accessible_degree(self, out_dir):
        cli.run(cli_args("figures", out_dir))
        nodes = _rows(
            os.path.join(out_dir, "figures", "subgraph_full_betweenness_nodes.csv")
        )
        by_id = {row[0]: row for row in nodes[1:]}
        assert nodes[0] == ["station_id", "name", "accessible_degree", "lines"]
        assert by_id["cedar"][2:] == ["2", "BLUE|RED"]

    def test_subgraph_lines_follow_excluded_lines(self, out_dir):
        argv = cli_args("figures", out_dir, True, "--network", "full", "--exclude-lines", "GREEN")
        assert cli.run(argv) == EXIT_OK
        nodes = _rows(
            os.path.join(out_dir, "figures", "subgraph_full_betweenness_nodes.csv")
        )
        by_id = {row[0]: row for row in nodes[1:]}
        assert by_id["heath"][3] == "BLUE"
        assert by_id["alder"][3] == "RED"
        assert all("GREEN" not in row[3] for row in nodes[1:])

    def test_top_zero_gives_header_only_files(self, out_dir):
        assert cli.run(cli_args("figures", out_dir, True, "--top-k", "0")) == EXIT_OK
        for kind in ("accessible", "full"):
            for part in ("nodes", "edges"):
                path = os.path.join(out_dir, "figures", f"subgraph_{kind}_closeness_{part}.csv")
                assert len(_rows(path)) == 1

    def test_too_few_degrees_gets_null_fit(self, tmp_path, out_dir):
        stations = "id,name,borough,region,lines\n" + "".join(
            f"s{i},S{i},X,1,C\n" for i in range(5)
        )
        branch = "line_id,branch_id,seq,station_id\n" + "".join(
            f"C,m,{i + 1},s{i}\n" for i in range(5)
        )
        access = "station_id,line_id,mode\n" + "".join(f"s{i},C,full\n" for i in range(5))
        paths = _write_city(tmp_path, stations, branch, access)
        argv = ["figures", "--out", out_dir, "--network", "full"]
        for flag, path in paths.items():
            argv += [f"--{flag}", path]
        assert cli.run(argv) == EXIT_OK
        fits = _json(os.path.join(out_dir, "figures", "power_law.json"))
        assert fits["full"]["gamma"] is None
        assert "error" in fits["full"]


class TestSocio:
    def test_outputs(self, out_dir):
        assert cli.run(cli_args("socio", out_dir)) == EXIT_OK
        summary = _rows(os.path.join(out_dir, "socio", "borough_summary.csv"))
        south = next(row for row in summary if row[0] == "South")
        assert south[1:6] == ["1", "2", "28.9", "306102", "274935"]

        correlations = _json(os.path.join(out_dir, "socio", "correlations.json"))
        pairs = {(c["x"], c["y"]): c for c in correlations}
        assert pairs[("accessible_count", "weekday_ridership")]["n"] == 5
        assert "error" in pairs[("accessible_count", "weekend_ridership")]

        overview = _json(os.path.join(out_dir, "socio", "overview.json"))
        assert overview["stations"] == 11
        assert overview["accessible_stations"] == 8
        assert set(overview["top_k_overlap"]) == {"betweenness", "closeness"}

        regions = _rows(os.path.join(out_dir, "socio", "region_summary.csv"))
        assert regions[-1] == ["", "0", "1", "0.000"]

    def test_needs_borough_table(self, out_dir):
        assert cli.run(cli_args("socio", out_dir, False)) == EXIT_INPUT_ERROR


class TestAll:
    def test_repeated_runs_are_byte_identical(self, out_dir, monkeypatch):
        monkeypatch.setenv("TRANSIT_ACCESS_THREADS", "1")
        assert cli.run(cli_args("all", out_dir)) == EXIT_OK
        first = _snapshot(out_dir)
        monkeypatch.setenv("TRANSIT_ACCESS_THREADS", "4")
        assert cli.run(cli_args("all", out_dir)) == EXIT_OK
        assert _snapshot(out_dir) == first
        assert "socio/correlations.json" in {k.replace(os.sep, "/") for k in first}

    def test_without_boroughs_skips_socio(self, out_dir):
        assert cli.run(cli_args("all", out_dir, False)) == EXIT_OK
        assert not os.path.exists(os.path.join(out_dir, "socio"))
        assert not os.path.exists(os.path.join(out_dir, "figures", "borough_bars.csv"))

    def test_run_log(self, out_dir, log_dir):
        cli.run(cli_args("all", out_dir))
        with open(log_dir / "run.log", encoding="utf-8") as f:
            assert "Built accessible network" in f.read()
        assert not os.path.exists(os.path.join(out_dir, "run.log"))

    def test_invariant_violation_exit_code(self, out_dir, monkeypatch):
        def broken(g):
            raise InvariantViolation("degree sum mismatch")

        monkeypatch.setattr("transit_access.report.pipeline.check_graph", broken)
        assert cli.run(cli_args("all", out_dir)) == EXIT_INVARIANT
