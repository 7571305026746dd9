"""Persistent study state: corpus, strata, priors, samples, results.

A campaign lives in a directory: an immutable header (campaign.json), the
corpus index (corpus.json), an append-only event log (events.jsonl), and
one density file per finalize.  Every derived quantity -- tallies,
posteriors, allocations, combined estimates -- is recomputed from the log,
so replaying the log with the stored seeds reproduces every stored number
bit for bit.
"""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import combine as combine_mod
from .allocation import (
    AllocationPlan,
    StratumAllocation,
    StratumState,
    newbold_allocate,
)
from .corpus import Corpus
from .density import (
    ElicitedPrior,
    Grid,
    GridDensity,
    binomial_likelihood,
    posterior,
    spline_prior,
    uniform_prior,
)
from .sampling import (
    Judgment,
    PendingJudgmentsError,
    SampleDraw,
    draw_with_replacement,
    tally,
)
from .stratify import RuleSet, StratumPartition, stratify_corpus

SCHEMA_VERSION = 1

HEADER_FILE = "campaign.json"
CORPUS_FILE = "corpus.json"
EVENTS_FILE = "events.jsonl"

PHASES = ("presample", "full", "extension")


class CampaignStateError(RuntimeError):
    """Operation not allowed in the campaign's current state."""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class ResultRecord:
    """One finalize outcome as recorded in the event log."""

    index: int
    mass: float
    mean: float
    interval: tuple[float, float]
    mass_captured: float
    doc_interval: tuple[int, int]
    doc_width: int
    weighted_mean: float | None
    mc_draws: int
    seed_entropy: list[int] | None
    tallies: dict[str, tuple[int, int]]
    density_file: str

    @classmethod
    def from_event(cls, e: dict) -> "ResultRecord":
        return cls(
            index=e["index"],
            mass=e["mass"],
            mean=e["mean"],
            interval=tuple(e["interval"]),
            mass_captured=e["mass_captured"],
            doc_interval=tuple(e["doc_interval"]),
            doc_width=e["doc_width"],
            weighted_mean=e.get("weighted_mean"),
            mc_draws=e["mc_draws"],
            seed_entropy=e.get("seed_entropy"),
            tallies={k: tuple(v) for k, v in e["tallies"].items()},
            density_file=e["density_file"],
        )


class Campaign:
    """One study rooted at a directory; all mutation is event append.

    Readers tail the event file: another writer's appends (CLI next to a
    running server, say) become visible on the next access.  Within one
    process, writes are serialized by a lock.
    """

    def __init__(self, directory, header: dict, events: list[dict], offset: int = 0):
        self.directory = Path(directory)
        self.header = header
        self._events = events
        self._events_offset = offset
        self._corpus: Corpus | None = None
        self._write_lock = threading.Lock()

    @property
    def events(self) -> list[dict]:
        self._refresh()
        return self._events

    def _refresh(self) -> None:
        path = self.directory / EVENTS_FILE
        try:
            size = path.stat().st_size
        except FileNotFoundError:
            return
        if size <= self._events_offset:
            return
        with open(path, "rb") as fh:
            fh.seek(self._events_offset)
            chunk = fh.read()
        for line in chunk.decode("utf-8").splitlines():
            if line.strip():
                self._events.append(json.loads(line))
        self._events_offset = size

    # -- construction ----------------------------------------------------

    @classmethod
    def create(
        cls,
        directory,
        question: str,
        corpus: Corpus,
        ruleset: RuleSet,
        grid_step: float = 1e-5,
        mc_draws: int = combine_mod.DEFAULT_MC_DRAWS,
        mc_seed: int | None = None,
        prng: str = "philox",
        campaign_id: str | None = None,
    ) -> "Campaign":
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        if (directory / HEADER_FILE).exists():
            raise CampaignStateError(f"campaign already exists in {directory}")
        Grid(grid_step)  # validate early
        partition = stratify_corpus(corpus, ruleset)
        if mc_seed is None:
            mc_seed = secrets.randbits(63)
        header = {
            "schema_version": SCHEMA_VERSION,
            "campaign_id": campaign_id or directory.name,
            "question": question,
            "created_at": _now(),
            "corpus_id": corpus.corpus_id,
            "corpus_total": corpus.total_count,
            "grid_step": grid_step,
            "mc_draws": mc_draws,
            "mc_seed": mc_seed,
            "prng": prng,
            "rules": ruleset.to_json_dict(),
            "partition": partition.to_json_dict(),
        }
        corpus.save_index(directory / CORPUS_FILE)
        (directory / HEADER_FILE).write_text(json.dumps(header, indent=1))
        (directory / EVENTS_FILE).write_text("")
        return cls(directory, header, [])

    @classmethod
    def open(cls, directory) -> "Campaign":
        directory = Path(directory)
        header_path = directory / HEADER_FILE
        if not header_path.exists():
            raise FileNotFoundError(f"no campaign at {directory}")
        header = json.loads(header_path.read_text())
        campaign = cls(directory, header, [])
        campaign._refresh()
        return campaign

    # -- core accessors ----------------------------------------------------

    @property
    def campaign_id(self) -> str:
        return self.header["campaign_id"]

    @property
    def question(self) -> str:
        return self.header["question"]

    @property
    def corpus_total(self) -> int:
        return self.header["corpus_total"]

    @property
    def grid(self) -> Grid:
        return Grid(self.header["grid_step"])

    @property
    def partition(self) -> StratumPartition:
        return StratumPartition.from_json_dict(self.header["partition"])

    @property
    def stratum_labels(self) -> list[str]:
        return list(self.header["partition"]["strata"].keys())

    @property
    def corpus(self) -> Corpus:
        if self._corpus is None:
            self._corpus = Corpus.load_index(self.directory / CORPUS_FILE)
        return self._corpus

    def _append(self, event: dict) -> dict:
        with self._write_lock:
            self._refresh()
            event = {"seq": len(self._events), "ts": _now(), **event}
            line = json.dumps(event) + "\n"
            with open(self.directory / EVENTS_FILE, "a", encoding="utf-8") as fh:
                fh.write(line)
            self._events.append(event)
            self._events_offset += len(line.encode("utf-8"))
        return event

    # -- event-log projections ---------------------------------------------

    def draws(self, before_seq: int | None = None) -> list[SampleDraw]:
        return [
            SampleDraw(e["draw_id"], e["stratum"], e["doc_id"], e["phase"])
            for e in self.events
            if e["type"] == "draw" and (before_seq is None or e["seq"] < before_seq)
        ]

    def judgments(self, before_seq: int | None = None) -> list[Judgment]:
        return [
            Judgment(
                draw_id=e["draw_id"],
                verdict=e["verdict"],
                reviewer=e["reviewer"],
                timestamp=e["ts"],
                note=e.get("note"),
                auto=e.get("auto", False),
            )
            for e in self.events
            if e["type"] == "judgment" and (before_seq is None or e["seq"] < before_seq)
        ]

    def phase_events(self) -> list[dict]:
        return [e for e in self.events if e["type"] == "phase"]

    def plan_event(self, before_seq: int | None = None) -> dict | None:
        plans = [
            e
            for e in self.events
            if e["type"] == "plan" and (before_seq is None or e["seq"] < before_seq)
        ]
        return plans[-1] if plans else None

    def prior_points(self, stratum: str, before_seq: int | None = None):
        """Latest elicited points for a stratum, or None for uniform."""
        points = None
        for e in self.events:
            if before_seq is not None and e["seq"] >= before_seq:
                break
            if e["type"] == "prior" and e["stratum"] == stratum:
                points = None if e["points"] == "uniform" else e["points"]
        return points

    def results(self) -> list[ResultRecord]:
        return [
            ResultRecord.from_event(e) for e in self.events if e["type"] == "result"
        ]

    def pending_draws(self) -> list[SampleDraw]:
        judged = {j.draw_id for j in self.judgments()}
        return [d for d in self.draws() if d.draw_id not in judged]

    def tallies(
        self, phases: set[str] | None = None, before_seq: int | None = None
    ) -> dict[str, tuple[int, int]]:
        """Cumulative (matches, trials) per stratum over the given phases."""
        draws = self.draws(before_seq)
        judgments = self.judgments(before_seq)
        out = {}
        for label in self.stratum_labels:
            out[label] = tally(judgments, draws, label, phases)
        return out

    def judged_tallies(self) -> dict[str, tuple[int, int]]:
        """Like tallies(), but silently ignores still-pending draws."""
        latest = {}
        for j in self.judgments():
            latest[j.draw_id] = j.verdict
        out = {label: (0, 0) for label in self.stratum_labels}
        for d in self.draws():
            if d.draw_id in latest:
                b, n = out[d.stratum]
                out[d.stratum] = (b + (latest[d.draw_id] == "match"), n + 1)
        return out

    def state(self) -> str:
        pending = self.pending_draws()
        if pending:
            return f"awaiting judgments ({len(pending)} pending)"
        phases = {e["phase"] for e in self.phase_events()}
        results = self.results()
        if not phases:
            return "awaiting priors/presample"
        if "full" not in phases:
            if self.plan_event() is None:
                return "presample complete, awaiting plan"
            return "planned, awaiting full sample"
        if not results:
            return "full sample complete, awaiting finalize"
        return f"finalized ({len(results)} result(s))"

    # -- priors --------------------------------------------------------------

    def set_prior(self, stratum: str, elicited, reviewer: str = "") -> dict:
        """Record a prior: an ElicitedPrior, a list of points, or "uniform".

        Priors may change freely until an allocation plan exists; after
        that the plan would be invalidated, so the change is refused.
        """
        if stratum not in self.stratum_labels:
            raise KeyError(f"unknown stratum {stratum!r}")
        if self.plan_event() is not None:
            raise CampaignStateError("cannot change a prior after allocation")
        if elicited == "uniform":
            points = "uniform"
        else:
            if not isinstance(elicited, ElicitedPrior):
                elicited = ElicitedPrior(tuple(elicited), reviewer=reviewer)
            points = [list(p) for p in elicited.points]
        return self._append(
            {"type": "prior", "stratum": stratum, "reviewer": reviewer, "points": points}
        )

    def prior_density(self, stratum: str, before_seq: int | None = None) -> GridDensity:
        points = self.prior_points(stratum, before_seq)
        if points is None:
            return uniform_prior(self.grid)
        return spline_prior(ElicitedPrior(tuple(tuple(p) for p in points)), self.grid)

    # -- sampling phases -------------------------------------------------------

    def run_phase(
        self,
        phase: str,
        counts: dict[str, int] | None = None,
        seed: int | None = None,
    ) -> list[SampleDraw]:
        """Draw documents for a phase; returns the new draws to judge."""
        if phase not in PHASES:
            raise ValueError(f"phase must be one of {PHASES}, got {phase!r}")
        pending = self.pending_draws()
        if pending:
            raise PendingJudgmentsError([d.draw_id for d in pending])
        existing = {e["phase"] for e in self.phase_events()}
        if phase == "presample":
            if "presample" in existing:
                raise CampaignStateError("presample phase already ran")
            if not counts:
                raise ValueError("presample needs per-stratum counts")
        elif phase == "full":
            if "full" in existing:
                raise CampaignStateError(
                    "full phase already ran; use an extension phase"
                )
            plan = self.plan_event()
            if plan is None:
                raise CampaignStateError("full phase needs an allocation plan first")
            if counts is not None:
                raise ValueError("full-phase counts come from the allocation plan")
            presample = self.tallies(phases={"presample"})
            counts = {}
            for label, planned in plan["counts"].items():
                taken = presample[label][1]
                if planned < taken:
                    raise CampaignStateError(
                        f"stratum {label!r}: plan allocates {planned} but the "
                        f"presample already took {taken}"
                    )
                counts[label] = planned - taken
        else:  # extension
            if not self.results():
                raise CampaignStateError("extension phases come after a finalize")
            if not counts:
                raise ValueError("extension needs per-stratum counts")
        for label in counts:
            if label not in self.stratum_labels:
                raise KeyError(f"unknown stratum {label!r}")
        if seed is None:
            seed = secrets.randbits(63)
        ordinal = len(self.phase_events())
        self._append(
            {
                "type": "phase",
                "phase": phase,
                "ordinal": ordinal,
                "seed": seed,
                "counts": {k: int(v) for k, v in counts.items()},
            }
        )
        new_draws = self._generate_draws(phase, counts, seed, ordinal)
        for draw in new_draws:
            self._append(
                {
                    "type": "draw",
                    "draw_id": draw.draw_id,
                    "stratum": draw.stratum,
                    "doc_id": draw.doc_id,
                    "phase": draw.phase,
                }
            )
        self._autofill_duplicates(new_draws)
        judged = {j.draw_id for j in self.judgments()}
        return [d for d in new_draws if d.draw_id not in judged]

    def _generate_draws(
        self, phase: str, counts: dict[str, int], seed: int, ordinal: int
    ) -> list[SampleDraw]:
        """Deterministic draws: one substream per (seed, phase, stratum)."""
        partition = self.partition
        labels = self.stratum_labels
        next_id = len(self.draws())
        draws: list[SampleDraw] = []
        for label in labels:  # fixed order, independent of counts dict order
            count = counts.get(label, 0)
            if count == 0:
                continue
            stratum_docs = partition.strata[label]
            stream = draw_with_replacement(
                stratum_docs,
                count,
                seed=[seed, ordinal, labels.index(label)],
                stratum=label,
                phase=phase,
                start_draw_id=next_id,
                algorithm=self.header["prng"],
            )
            draws.extend(stream)
            next_id += count
        return draws

    def _autofill_duplicates(self, new_draws: list[SampleDraw]) -> None:
        """Re-drawing an already-judged document asks the reviewer nothing
        new: copy the standing verdict, mark the judgment auto."""
        verdicts = self._doc_verdicts()
        for draw in new_draws:
            key = (draw.stratum, draw.doc_id)
            if key in verdicts:
                verdict, reviewer, source = verdicts[key]
                self._append(
                    {
                        "type": "judgment",
                        "draw_id": draw.draw_id,
                        "verdict": verdict,
                        "reviewer": reviewer,
                        "note": f"auto-filled from draw {source}",
                        "auto": True,
                    }
                )

    def _doc_verdicts(self) -> dict[tuple[str, str], tuple[str, str, int]]:
        by_id = {d.draw_id: d for d in self.draws()}
        out = {}
        for j in self.judgments():
            draw = by_id.get(j.draw_id)
            if draw is not None:
                out[(draw.stratum, draw.doc_id)] = (j.verdict, j.reviewer, j.draw_id)
        return out

    def record_judgment(
        self, draw_id: int, verdict: str, reviewer: str, note: str | None = None
    ) -> dict:
        by_id = {d.draw_id: d for d in self.draws()}
        if draw_id not in by_id:
            raise KeyError(f"unknown draw_id {draw_id}")
        if any(j.draw_id == draw_id for j in self.judgments()):
            raise CampaignStateError(f"draw {draw_id} is already judged")
        Judgment(draw_id=draw_id, verdict=verdict, reviewer=reviewer)  # validate
        event = self._append(
            {
                "type": "judgment",
                "draw_id": draw_id,
                "verdict": verdict,
                "reviewer": reviewer,
                "note": note,
                "auto": False,
            }
        )
        draw = by_id[draw_id]
        judged = {j.draw_id for j in self.judgments()}
        for other in self.draws():
            if (
                other.draw_id not in judged
                and other.stratum == draw.stratum
                and other.doc_id == draw.doc_id
            ):
                self._append(
                    {
                        "type": "judgment",
                        "draw_id": other.draw_id,
                        "verdict": verdict,
                        "reviewer": reviewer,
                        "note": f"auto-filled from draw {draw_id}",
                        "auto": True,
                    }
                )
                judged.add(other.draw_id)
        return event

    # -- allocation ---------------------------------------------------------

    def stratum_states(self, before_seq: int | None = None) -> list[StratumState]:
        """Presample posteriors and fractions, as allocation inputs."""
        fractions = self.partition.fractions
        presample = self.tallies(phases={"presample"}, before_seq=before_seq)
        states = []
        for label in self.stratum_labels:
            b, n = presample[label]
            prior = self.prior_density(label, before_seq)
            if n >= 1:
                post = posterior(binomial_likelihood(n, b, self.grid), prior)
            else:
                post = prior
            states.append(
                StratumState(
                    label=label,
                    fraction=fractions[label],
                    posterior=post,
                    presample_n=n,
                    presample_b=b,
                )
            )
        return states

    def plan(self, budget: int) -> AllocationPlan:
        if "presample" not in {e["phase"] for e in self.phase_events()}:
            raise CampaignStateError("plan needs a completed presample")
        pending = self.pending_draws()
        if pending:
            raise PendingJudgmentsError([d.draw_id for d in pending])
        if "full" in {e["phase"] for e in self.phase_events()}:
            raise CampaignStateError("cannot re-plan after the full sample")
        plan = newbold_allocate(self.stratum_states(), budget)
        self._append(
            {
                "type": "plan",
                "budget": budget,
                "q": plan.fractions,
                "counts": plan.counts,
                "residual_note": plan.residual_note,
            }
        )
        return plan

    def allocation_plan(self) -> AllocationPlan | None:
        e = self.plan_event()
        if e is None:
            return None
        return AllocationPlan(
            total_budget=e["budget"],
            per_stratum=tuple(
                StratumAllocation(label, e["q"][label], e["counts"][label])
                for label in e["counts"]
            ),
            residual_note=e.get("residual_note", ""),
        )

    # -- finalize -------------------------------------------------------------

    def stratum_posterior(self, label: str, before_seq: int | None = None) -> GridDensity:
        """Posterior from the cumulative tallies against the original prior.

        Updating in stages (presample, then the rest) multiplies the same
        likelihood factors together, so the one-shot cumulative update is
        pointwise identical.
        """
        b, n = self.tallies(before_seq=before_seq)[label]
        prior = self.prior_density(label, before_seq)
        if n < 1:
            return prior
        return posterior(binomial_likelihood(n, b, self.grid), prior)

    def finalize(self, mass: float = 0.95) -> combine_mod.CombinedEstimate:
        pending = self.pending_draws()
        if pending:
            raise PendingJudgmentsError([d.draw_id for d in pending])
        if not self.draws():
            raise CampaignStateError("nothing sampled yet")
        index = len(self.results())
        seed_entropy = [self.header["mc_seed"], index]
        estimate = self._compute_estimate(mass, seed_entropy)
        tallies = self.tallies()
        density_file = f"result_{index:03d}_density.json"
        (self.directory / density_file).write_text(estimate.density.to_json(rle=True))
        self._append(
            {
                "type": "result",
                "index": index,
                "mass": mass,
                "mean": estimate.mean,
                "interval": [estimate.interval.lo, estimate.interval.hi],
                "mass_captured": estimate.interval.mass_captured,
                "doc_interval": list(estimate.doc_interval),
                "doc_width": estimate.doc_width,
                "weighted_mean": estimate.weighted_mean_check,
                "mc_draws": estimate.mc_draws,
                "seed_entropy": seed_entropy,
                "tallies": {k: list(v) for k, v in tallies.items()},
                "density_file": density_file,
            }
        )
        return estimate

    def _compute_estimate(
        self, mass: float, seed_entropy: list[int], before_seq: int | None = None
    ) -> combine_mod.CombinedEstimate:
        fractions = self.partition.fractions
        tallies = self.tallies(before_seq=before_seq)
        active = [label for label in self.stratum_labels if fractions[label] > 0]
        posteriors = [self.stratum_posterior(label, before_seq) for label in active]
        weights = [fractions[label] for label in active]
        if len(active) == 1:
            # Weighted sum of one stratum is that stratum: no simulation.
            combined = posteriors[0]
            mc_draws = 0
        else:
            mc_draws = self.header["mc_draws"]
            combined = combine_mod.monte_carlo_combine(
                posteriors, weights, mc_draws, seed=seed_entropy
            )
        if all(tallies[label][1] >= 1 for label in active):
            check = combine_mod.weighted_mean(
                [tallies[label] for label in active], weights
            )
        else:
            check = None
        return combine_mod.finalize(
            combined,
            self.corpus_total,
            mass=mass,
            mc_draws=mc_draws,
            seed=seed_entropy,
            weighted_mean_check=check,
        )

    # -- reporting ---------------------------------------------------------

    def report_dict(self) -> dict:
        results = self.results()
        if not results:
            raise CampaignStateError("no results to report; run finalize first")
        return {
            "schema_version": SCHEMA_VERSION,
            "campaign_id": self.campaign_id,
            "question": self.question,
            "corpus_total": self.corpus_total,
            "strata": [
                {
                    "label": label,
                    "fraction": self.partition.fractions[label],
                    "count": self.partition.counts[label],
                }
                for label in self.stratum_labels
            ],
            "results": [
                {
                    "index": r.index,
                    "mass": r.mass,
                    "mean": r.mean,
                    "interval": list(r.interval),
                    "doc_interval": list(r.doc_interval),
                    "doc_width": r.doc_width,
                    "weighted_mean": r.weighted_mean,
                    "mc_draws": r.mc_draws,
                    "seed_entropy": r.seed_entropy,
                    "tallies": {k: list(v) for k, v in r.tallies.items()},
                }
                for r in results
            ],
        }

    def report_text(self) -> str:
        data = self.report_dict()
        lines = [
            f"campaign: {data['campaign_id']}",
            f"question: {data['question']}",
            f"corpus: {data['corpus_total']} documents",
            "strata:",
        ]
        for s in data["strata"]:
            lines.append(
                f"  {s['label']}: {s['count']} documents (fraction {s['fraction']:.5f})"
            )
        for r in data["results"]:
            lo, hi = r["interval"]
            dlo, dhi = r["doc_interval"]
            lines.append(f"result {r['index']} (mass {r['mass']}):")
            lines.append(f"  mean fraction: {r['mean']:.5f}")
            lines.append(f"  interval (fraction): {lo:.5f} .. {hi:.5f}")
            lines.append(
                f"  interval (documents): {dlo} .. {dhi}  (width {r['doc_width']})"
            )
            tallies = ", ".join(
                f"{label} {b}/{n}" for label, (b, n) in r["tallies"].items()
            )
            lines.append(f"  tallies: {tallies}")
            lines.append(
                f"  mc draws: {r['mc_draws']}, seed entropy: {r['seed_entropy']}"
            )
        return "\n".join(lines) + "\n"

    # -- replay verification --------------------------------------------------

    def replay(self) -> list[str]:
        """Recompute every derived artifact from the log; list mismatches."""
        problems: list[str] = []
        problems.extend(self._replay_draws())
        problems.extend(self._replay_plans())
        problems.extend(self._replay_results())
        return problems

    def _replay_draws(self) -> list[str]:
        problems = []
        logged = self.draws()
        cursor = 0
        for phase_event in self.phase_events():
            counts = phase_event["counts"]
            expected = self._generate_draws_at(
                phase_event["phase"],
                counts,
                phase_event["seed"],
                phase_event["ordinal"],
                start_id=cursor,
            )
            actual = logged[cursor : cursor + len(expected)]
            if [d.__dict__ for d in expected] != [d.__dict__ for d in actual]:
                problems.append(
                    f"phase {phase_event['phase']} (ordinal {phase_event['ordinal']}): "
                    f"replayed draws differ from the log"
                )
            cursor += len(expected)
        return problems

    def _generate_draws_at(self, phase, counts, seed, ordinal, start_id):
        partition = self.partition
        labels = self.stratum_labels
        draws = []
        next_id = start_id
        for label in labels:
            count = counts.get(label, 0)
            if count == 0:
                continue
            draws.extend(
                draw_with_replacement(
                    partition.strata[label],
                    count,
                    seed=[seed, ordinal, labels.index(label)],
                    stratum=label,
                    phase=phase,
                    start_draw_id=next_id,
                    algorithm=self.header["prng"],
                )
            )
            next_id += count
        return draws

    def _replay_plans(self) -> list[str]:
        problems = []
        for e in self.events:
            if e["type"] != "plan":
                continue
            plan = newbold_allocate(self.stratum_states(before_seq=e["seq"]), e["budget"])
            if plan.counts != e["counts"]:
                problems.append(f"plan (seq {e['seq']}): replayed counts differ")
            if plan.fractions != e["q"]:
                problems.append(f"plan (seq {e['seq']}): replayed q fractions differ")
        return problems

    def _replay_results(self) -> list[str]:
        problems = []
        for e in self.events:
            if e["type"] != "result":
                continue
            estimate = self._compute_estimate(
                e["mass"], e["seed_entropy"], before_seq=e["seq"]
            )
            stored = GridDensity.from_json(
                (self.directory / e["density_file"]).read_text()
            )
            tag = f"result {e['index']}"
            if not np.array_equal(estimate.density.mass, stored.mass):
                problems.append(f"{tag}: replayed density differs from {e['density_file']}")
            if [estimate.interval.lo, estimate.interval.hi] != e["interval"]:
                problems.append(f"{tag}: replayed interval differs")
            if list(estimate.doc_interval) != e["doc_interval"]:
                problems.append(f"{tag}: replayed document interval differs")
            if estimate.mean != e["mean"]:
                problems.append(f"{tag}: replayed mean differs")
        return problems
