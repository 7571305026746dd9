"""Command-line front door for every pipeline stage.

Commands mirror the study lifecycle: ingest, stratify (which also creates
a campaign when given a campaign directory), plan, draw, judge, estimate,
report, serve.  Every mutating command is append-only; all randomness
flows from an explicit seed, and a generated seed is printed so any run
can be replayed.  Options can also be set via STRATABAYES_<COMMAND>_<OPTION>
environment variables.
"""

from __future__ import annotations

import json
import secrets
import sys
from pathlib import Path

import click

from .campaign import Campaign, CampaignStateError
from .corpus import Corpus, ingest_corpus
from .density import Grid
from .sampling import PendingJudgmentsError
from .stratify import RuleSet, stratify_corpus

CONTEXT_SETTINGS = {"auto_envvar_prefix": "STRATABAYES"}


class CliError(click.ClickException):
    """One-line machine-parseable failure; exits nonzero."""

    def format_message(self):
        return self.message


def _fail(exc: Exception) -> CliError:
    return CliError(str(exc))


def _open_campaign(campaign_dir) -> Campaign:
    try:
        return Campaign.open(campaign_dir)
    except FileNotFoundError as exc:
        raise _fail(exc)


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbits(63)
        click.echo(f"seed: {seed} (generated; pass --seed {seed} to replay)")
    return seed


def _parse_counts(spec: str) -> dict[str, int]:
    """Parse "label=10,label2=5" into a dict."""
    counts = {}
    for part in spec.split(","):
        label, _, value = part.partition("=")
        if not label or not value:
            raise CliError(f"bad counts spec {spec!r}; use label=N,label=N")
        try:
            counts[label.strip()] = int(value)
        except ValueError:
            raise CliError(f"bad count {value!r} for stratum {label!r}")
    return counts


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option()
def main():
    """Bayesian stratified sampling for corpus statistics."""


@main.command()
@click.option("--corpus", "corpus_files", multiple=True, required=True,
              type=click.Path(exists=True), help="Corpus text file (repeatable).")
@click.option("--out", "out_path", required=True, type=click.Path(),
              help="Where to write the corpus index JSON.")
@click.option("--encoding", default="latin-1", show_default=True)
def ingest(corpus_files, out_path, encoding):
    """Split corpus files into documents and write an index."""
    try:
        corpus = ingest_corpus(list(corpus_files), encoding=encoding)
    except (OSError, ValueError) as exc:
        raise _fail(exc)
    corpus.save_index(out_path)
    click.echo(
        f"ingested {corpus.total_count} documents from "
        f"{len(corpus.files)} file(s) -> {out_path}"
    )


@main.command()
@click.option("--corpus", "corpus_index", required=True, type=click.Path(exists=True),
              help="Corpus index JSON from `ingest`.")
@click.option("--rules", "rules_path", required=True, type=click.Path(exists=True),
              help="Stratification rule-set JSON.")
@click.option("--out", "out_path", type=click.Path(),
              help="Write the partition JSON here.")
@click.option("--campaign-dir", type=click.Path(),
              help="Also create a campaign rooted at this directory.")
@click.option("--question", default="does this document match the query?",
              show_default=True, help="The subjective question under study.")
@click.option("--grid-step", default=1e-5, show_default=True)
@click.option("--mc-draws", default=1_000_000, show_default=True)
@click.option("--seed", type=int, default=None,
              help="Master seed for the campaign's Monte Carlo combination.")
def stratify(corpus_index, rules_path, out_path, campaign_dir, question,
             grid_step, mc_draws, seed):
    """Partition the corpus; optionally create a campaign around it."""
    try:
        corpus = Corpus.load_index(corpus_index)
        ruleset = RuleSet.load(rules_path)
        partition = stratify_corpus(corpus, ruleset)
    except (OSError, ValueError, KeyError) as exc:
        raise _fail(exc)
    for label in partition.strata:
        click.echo(
            f"{label}: {partition.counts[label]} documents "
            f"(fraction {partition.fractions[label]:.5f})"
        )
    if out_path:
        partition.save(out_path)
        click.echo(f"partition -> {out_path}")
    if campaign_dir:
        seed = _resolve_seed(seed)
        try:
            campaign = Campaign.create(
                campaign_dir,
                question=question,
                corpus=corpus,
                ruleset=ruleset,
                grid_step=grid_step,
                mc_draws=mc_draws,
                mc_seed=seed,
            )
        except (CampaignStateError, ValueError) as exc:
            raise _fail(exc)
        click.echo(f"campaign {campaign.campaign_id!r} created in {campaign_dir}")


@main.command()
@click.option("--campaign-dir", required=True, type=click.Path(exists=True))
@click.option("--budget", required=True, type=int, help="Total documents to read.")
def plan(campaign_dir, budget):
    """Allocate the reading budget across strata from the presample."""
    campaign = _open_campaign(campaign_dir)
    try:
        result = campaign.plan(budget)
    except (CampaignStateError, PendingJudgmentsError, ValueError) as exc:
        raise _fail(exc)
    click.echo(f"{'stratum':<20} {'q':>10} {'count':>7}")
    for s in result.per_stratum:
        click.echo(f"{s.label:<20} {s.q:>10.5f} {s.count:>7}")
    click.echo(f"{'total':<20} {'':>10} {result.total_budget:>7}")


@main.command()
@click.option("--campaign-dir", required=True, type=click.Path(exists=True))
@click.option("--phase", required=True,
              type=click.Choice(["presample", "full", "extension"]))
@click.option("--counts", default=None,
              help="Per-stratum counts, e.g. pseudo=10,real=10 "
                   "(full phase takes them from the plan).")
@click.option("--seed", type=int, default=None)
def draw(campaign_dir, phase, counts, seed):
    """Draw documents for a phase; they then await judgments."""
    campaign = _open_campaign(campaign_dir)
    seed = _resolve_seed(seed)
    parsed = _parse_counts(counts) if counts else None
    try:
        draws = campaign.run_phase(phase, counts=parsed, seed=seed)
    except (CampaignStateError, PendingJudgmentsError, ValueError, KeyError) as exc:
        raise _fail(exc)
    click.echo(f"{len(draws)} draw(s) pending judgment in phase {phase!r}")


@main.command()
@click.option("--campaign-dir", required=True, type=click.Path(exists=True))
@click.option("--reviewer", default="cli", show_default=True)
@click.option("--draw-id", type=int, default=None,
              help="Judge one specific draw non-interactively.")
@click.option("--verdict", type=click.Choice(["match", "no_match"]), default=None)
@click.option("--note", default=None)
@click.option("--lines", default=50, show_default=True,
              help="Document lines to show before prompting.")
def judge(campaign_dir, reviewer, draw_id, verdict, note, lines):
    """Record judgments: one-shot with --draw-id/--verdict, else a loop.

    The interactive loop shows each pending document (first 50 lines by
    default) and accepts y (match), n (no match), s (skip), or q (quit).
    """
    campaign = _open_campaign(campaign_dir)
    if (draw_id is None) != (verdict is None):
        raise CliError("--draw-id and --verdict go together")
    if draw_id is not None:
        try:
            campaign.record_judgment(draw_id, verdict, reviewer, note)
        except (CampaignStateError, KeyError, ValueError) as exc:
            raise _fail(exc)
        click.echo(f"draw {draw_id}: {verdict}")
        return
    pending = campaign.pending_draws()
    if not pending:
        click.echo("no pending draws")
        return
    corpus = campaign.corpus
    for sample in pending:
        doc = corpus.get(sample.doc_id)
        total_lines = doc.line_count
        click.echo("=" * 70)
        click.echo(
            f"draw {sample.draw_id}  stratum={sample.stratum}  "
            f"phase={sample.phase}  doc={sample.doc_id}  ({total_lines} lines)"
        )
        click.echo("-" * 70)
        click.echo(doc.first_lines(lines))
        if total_lines > lines:
            click.echo(f"... ({total_lines - lines} more lines)")
        answer = click.prompt(
            "match? [y]es / [n]o / [s]kip / [q]uit",
            type=click.Choice(["y", "n", "s", "q"]),
            show_choices=False,
        )
        if answer == "q":
            break
        if answer == "s":
            continue
        campaign.record_judgment(
            sample.draw_id, "match" if answer == "y" else "no_match", reviewer
        )
    remaining = len(campaign.pending_draws())
    click.echo(f"{remaining} draw(s) still pending")


@main.command()
@click.option("--campaign-dir", required=True, type=click.Path(exists=True))
@click.option("--mass", default=0.95, show_default=True)
def estimate(campaign_dir, mass):
    """Finalize: combine posteriors and print the credibility interval."""
    campaign = _open_campaign(campaign_dir)
    try:
        result = campaign.finalize(mass=mass)
    except PendingJudgmentsError as exc:
        ids = ",".join(str(i) for i in exc.pending)
        raise CliError(f"pending judgments for draw_ids: {ids}")
    except (CampaignStateError, ValueError) as exc:
        raise _fail(exc)
    click.echo(f"mean fraction: {result.mean:.5f}")
    click.echo(f"interval (fraction): {result.interval.lo:.5f} .. {result.interval.hi:.5f}")
    click.echo(
        f"interval (documents): {result.doc_interval[0]} .. {result.doc_interval[1]}"
        f"  (width {result.doc_width})"
    )
    if result.weighted_mean_check is not None:
        click.echo(f"weighted-mean check: {result.weighted_mean_check:.5f}")


@main.command()
@click.option("--campaign-dir", required=True, type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["text", "json"]),
              default="text", show_default=True)
def report(campaign_dir, fmt):
    """Render all results with provenance (tallies, seeds, priors)."""
    campaign = _open_campaign(campaign_dir)
    try:
        if fmt == "json":
            click.echo(json.dumps(campaign.report_dict(), indent=1))
        else:
            click.echo(campaign.report_text(), nl=False)
    except CampaignStateError as exc:
        raise _fail(exc)


@main.command()
@click.option("--campaign-dir", required=True, type=click.Path(exists=True))
@click.option("--addr", default="127.0.0.1:8011", show_default=True,
              help="host:port to bind.")
def serve(campaign_dir, addr):
    """Serve the review API (and UI, when built) over this campaign."""
    import uvicorn

    from .api import create_app

    host, _, port = addr.partition(":")
    app = create_app(campaign_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8011))


if __name__ == "__main__":
    main()
