"""Command-line interface, end to end over a synthetic study."""

from __future__ import annotations

import json
import re

import pytest
from click.testing import CliRunner

from stratabayes.cli import main

from conftest import pseudo_body, real_body, write_corpus_file


@pytest.fixture
def workdir(tmp_path):
    """Corpus files, rules config, and an ingested index on disk."""
    files = []
    counter = 0
    for f in range(4):
        bodies = []
        for d in range(10):
            if counter % 5 == 0:
                bodies.append(pseudo_body(counter))
            else:
                bodies.append(real_body(counter))
            counter += 1
        files.append(str(write_corpus_file(tmp_path / f"c{f}.sgm", bodies)))
    rules = {
        "default_stratum": "apparent_real",
        "rules": [
            {
                "rule_id": "part-divider",
                "pattern": ">Part [IVXM]",
                "target_stratum": "apparent_pseudo",
                "priority": 1,
            }
        ],
    }
    rules_path = tmp_path / "rules.json"
    rules_path.write_text(json.dumps(rules))
    return {"dir": tmp_path, "files": files, "rules": str(rules_path)}


def invoke(args, **kw):
    runner = CliRunner()
    result = runner.invoke(main, args, catch_exceptions=False, **kw)
    return result


def build_campaign(workdir, grid_step="0.001", mc_draws="20000", seed="99"):
    corpus_index = str(workdir["dir"] / "corpus.json")
    campaign_dir = str(workdir["dir"] / "study")
    r = invoke(["ingest", *sum([["--corpus", f] for f in workdir["files"]], []),
                "--out", corpus_index])
    assert r.exit_code == 0, r.output
    r = invoke([
        "stratify", "--corpus", corpus_index, "--rules", workdir["rules"],
        "--campaign-dir", campaign_dir, "--grid-step", grid_step,
        "--mc-draws", mc_draws, "--seed", seed,
    ])
    assert r.exit_code == 0, r.output
    return campaign_dir


class TestIngest:
    def test_ingest_reports_count(self, workdir):
        out = str(workdir["dir"] / "corpus.json")
        r = invoke(["ingest", *sum([["--corpus", f] for f in workdir["files"]], []),
                    "--out", out])
        assert r.exit_code == 0
        assert "ingested 40 documents" in r.output
        assert json.loads((workdir["dir"] / "corpus.json").read_text())["total_count"] == 40

    def test_missing_file_fails(self, tmp_path):
        r = CliRunner().invoke(
            main, ["ingest", "--corpus", str(tmp_path / "nope.sgm"), "--out", "x.json"]
        )
        assert r.exit_code != 0


class TestStratify:
    def test_prints_counts_and_creates_campaign(self, workdir):
        campaign_dir = build_campaign(workdir)
        assert (workdir["dir"] / "study" / "campaign.json").exists()
        header = json.loads((workdir["dir"] / "study" / "campaign.json").read_text())
        assert header["partition"]["counts"] == {"apparent_pseudo": 8, "apparent_real": 32}
        assert campaign_dir

    def test_partition_only(self, workdir):
        corpus_index = str(workdir["dir"] / "corpus.json")
        invoke(["ingest", *sum([["--corpus", f] for f in workdir["files"]], []),
                "--out", corpus_index])
        out = str(workdir["dir"] / "partition.json")
        r = invoke(["stratify", "--corpus", corpus_index, "--rules", workdir["rules"],
                    "--out", out])
        assert r.exit_code == 0
        data = json.loads((workdir["dir"] / "partition.json").read_text())
        assert data["counts"] == {"apparent_pseudo": 8, "apparent_real": 32}


class TestLifecycle:
    def judge_pending(self, campaign_dir):
        from stratabayes.campaign import Campaign

        campaign = Campaign.open(campaign_dir)
        while campaign.pending_draws():
            d = campaign.pending_draws()[0]
            verdict = "no_match" if d.stratum == "apparent_pseudo" else "match"
            r = invoke(["judge", "--campaign-dir", campaign_dir,
                        "--draw-id", str(d.draw_id), "--verdict", verdict])
            assert r.exit_code == 0, r.output
            campaign = Campaign.open(campaign_dir)

    def test_full_study_via_cli(self, workdir):
        campaign_dir = build_campaign(workdir)

        r = invoke(["draw", "--campaign-dir", campaign_dir, "--phase", "presample",
                    "--counts", "apparent_pseudo=4,apparent_real=4", "--seed", "5"])
        assert r.exit_code == 0, r.output
        self.judge_pending(campaign_dir)

        r = invoke(["plan", "--campaign-dir", campaign_dir, "--budget", "20"])
        assert r.exit_code == 0, r.output
        assert re.search(r"apparent_real\s+\d+\.\d+\s+\d+", r.output)

        r = invoke(["draw", "--campaign-dir", campaign_dir, "--phase", "full",
                    "--seed", "6"])
        assert r.exit_code == 0, r.output
        self.judge_pending(campaign_dir)

        r = invoke(["estimate", "--campaign-dir", campaign_dir])
        assert r.exit_code == 0, r.output
        assert "interval (documents)" in r.output

        r = invoke(["report", "--campaign-dir", campaign_dir])
        assert r.exit_code == 0
        assert "result 0" in r.output

        r = invoke(["report", "--campaign-dir", campaign_dir, "--format", "json"])
        assert r.exit_code == 0
        data = json.loads(r.output)
        assert data["results"][0]["doc_width"] >= 0
        assert data["campaign_id"]

    def test_estimate_lists_pending(self, workdir):
        campaign_dir = build_campaign(workdir)
        invoke(["draw", "--campaign-dir", campaign_dir, "--phase", "presample",
                "--counts", "apparent_real=3", "--seed", "5"])
        r = CliRunner().invoke(main, ["estimate", "--campaign-dir", campaign_dir])
        assert r.exit_code != 0
        assert "pending judgments for draw_ids" in r.output
        assert re.search(r"draw_ids: \d+(,\d+)*", r.output)

    def test_interactive_judge(self, workdir):
        campaign_dir = build_campaign(workdir)
        invoke(["draw", "--campaign-dir", campaign_dir, "--phase", "presample",
                "--counts", "apparent_real=2", "--seed", "5"])
        r = invoke(["judge", "--campaign-dir", campaign_dir], input="y\nn\n")
        assert r.exit_code == 0, r.output
        assert "0 draw(s) still pending" in r.output
        from stratabayes.campaign import Campaign

        tallies = Campaign.open(campaign_dir).judged_tallies()
        assert tallies["apparent_real"] == (1, 2)

    def test_interactive_judge_quit_and_skip(self, workdir):
        campaign_dir = build_campaign(workdir)
        invoke(["draw", "--campaign-dir", campaign_dir, "--phase", "presample",
                "--counts", "apparent_real=3", "--seed", "5"])
        r = invoke(["judge", "--campaign-dir", campaign_dir], input="s\ny\nq\n")
        assert r.exit_code == 0
        assert "2 draw(s) still pending" in r.output

    def test_generated_seed_is_printed(self, workdir):
        campaign_dir = build_campaign(workdir)
        r = invoke(["draw", "--campaign-dir", campaign_dir, "--phase", "presample",
                    "--counts", "apparent_real=2"])
        assert r.exit_code == 0
        assert re.search(r"seed: \d+ \(generated", r.output)

    def test_replayed_command_sequence_is_identical(self, workdir, tmp_path):
        # identical commands with identical seeds must yield identical
        # campaign files (timestamps aside, all derived artifacts match)
        def run(name):
            campaign_dir = str(workdir["dir"] / name)
            corpus_index = str(workdir["dir"] / "corpus.json")
            invoke(["ingest", *sum([["--corpus", f] for f in workdir["files"]], []),
                    "--out", corpus_index])
            invoke(["stratify", "--corpus", corpus_index, "--rules", workdir["rules"],
                    "--campaign-dir", campaign_dir, "--grid-step", "0.001",
                    "--mc-draws", "20000", "--seed", "123"])
            invoke(["draw", "--campaign-dir", campaign_dir, "--phase", "presample",
                    "--counts", "apparent_pseudo=3,apparent_real=3", "--seed", "9"])
            self.judge_pending(campaign_dir)
            invoke(["plan", "--campaign-dir", campaign_dir, "--budget", "12"])
            invoke(["draw", "--campaign-dir", campaign_dir, "--phase", "full",
                    "--seed", "10"])
            self.judge_pending(campaign_dir)
            r = invoke(["estimate", "--campaign-dir", campaign_dir])
            return r.output

        assert run("study_a") == run("study_b")


class TestErrors:
    def test_plan_without_campaign(self, tmp_path):
        r = CliRunner().invoke(
            main, ["plan", "--campaign-dir", str(tmp_path), "--budget", "10"]
        )
        assert r.exit_code != 0
        assert "no campaign" in r.output

    def test_bad_counts_spec(self, workdir):
        campaign_dir = build_campaign(workdir)
        r = CliRunner().invoke(
            main,
            ["draw", "--campaign-dir", campaign_dir, "--phase", "presample",
             "--counts", "whatisthis", "--seed", "1"],
        )
        assert r.exit_code != 0
        assert "bad counts spec" in r.output
