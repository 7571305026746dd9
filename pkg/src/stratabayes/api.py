"""HTTP/JSON service over one campaign directory.

The review UI (or any client) drives the human-in-the-loop steps through
these endpoints: fetch documents to judge, submit judgments, elicit
priors, request allocation and finalize, and pull downsampled densities
for charting.  All mutations append to the campaign event log through a
single writer; GETs are side-effect free.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Header, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .campaign import Campaign, CampaignStateError
from .density import ElicitedPrior, GridDensity, downsample_mass
from .sampling import PendingJudgmentsError

SCHEMA_VERSION = 1

MAX_CHART_POINTS = 2000

DENSITY_KINDS = ("prior", "presample-posterior", "posterior", "combined")


class JudgmentIn(BaseModel):
    draw_id: int
    verdict: str = Field(pattern="^(match|no_match)$")
    note: str | None = None


class PriorIn(BaseModel):
    points: list[tuple[float, float]]


class PlanIn(BaseModel):
    budget: int = Field(gt=0)


class FinalizeIn(BaseModel):
    mass: float = Field(default=0.95, gt=0.0, lt=1.0)


def _density_payload(density: GridDensity, which: str, stratum: str | None = None) -> dict:
    x, mass = downsample_mass(density, MAX_CHART_POINTS)
    return {
        "schema_version": SCHEMA_VERSION,
        "which": which,
        "stratum": stratum,
        "step": density.grid.step,
        "x": x.tolist(),
        "mass": mass.tolist(),
        "mean": density.mean(),
    }


def create_app(campaign_dir, frontend_dist=None) -> FastAPI:
    campaign = Campaign.open(campaign_dir)
    app = FastAPI(title="stratabayes review API")

    def _check_stratum(stratum: str) -> None:
        if stratum not in campaign.stratum_labels:
            raise HTTPException(404, f"unknown stratum {stratum!r}")

    @app.get("/campaign")
    def campaign_summary():
        plan = campaign.plan_event()
        tallies = campaign.judged_tallies()
        return {
            "schema_version": SCHEMA_VERSION,
            "campaign_id": campaign.campaign_id,
            "question": campaign.question,
            "state": campaign.state(),
            "corpus_total": campaign.corpus_total,
            "grid_step": campaign.header["grid_step"],
            "strata": [
                {
                    "label": label,
                    "fraction": campaign.partition.fractions[label],
                    "count": campaign.partition.counts[label],
                    "tally": list(tallies[label]),
                    "prior": "elicited" if campaign.prior_points(label) else "uniform",
                }
                for label in campaign.stratum_labels
            ],
            "allocation": None
            if plan is None
            else {"budget": plan["budget"], "counts": plan["counts"], "q": plan["q"]},
            "pending": len(campaign.pending_draws()),
            "results": [
                {
                    "index": r.index,
                    "mass": r.mass,
                    "mean": r.mean,
                    "interval": list(r.interval),
                    "doc_interval": list(r.doc_interval),
                    "doc_width": r.doc_width,
                }
                for r in campaign.results()
            ],
        }

    @app.get("/next-draw")
    def next_draw(full: bool = False, x_reviewer: str = Header(default="anonymous")):
        pending = campaign.pending_draws()
        if not pending:
            raise HTTPException(404, "no pending draws")
        draw = pending[0]  # stable until judged
        doc = campaign.corpus.get(draw.doc_id)
        payload = {
            "schema_version": SCHEMA_VERSION,
            "draw_id": draw.draw_id,
            "stratum": draw.stratum,
            "phase": draw.phase,
            "doc_id": doc.doc_id,
            "line_count": doc.line_count,
            "first_lines": doc.first_lines(50),
            "pending": len(pending),
        }
        if full:
            payload["text"] = doc.text
        return payload

    @app.post("/judgment")
    def post_judgment(body: JudgmentIn, x_reviewer: str = Header(default="anonymous")):
        try:
            campaign.record_judgment(
                body.draw_id, body.verdict, reviewer=x_reviewer, note=body.note
            )
        except KeyError as exc:
            raise HTTPException(404, str(exc))
        except CampaignStateError as exc:
            raise HTTPException(409, str(exc))
        return {
            "schema_version": SCHEMA_VERSION,
            "draw_id": body.draw_id,
            "verdict": body.verdict,
            "pending": len(campaign.pending_draws()),
        }

    @app.get("/prior/{stratum}")
    def get_prior(stratum: str):
        _check_stratum(stratum)
        points = campaign.prior_points(stratum)
        density = campaign.prior_density(stratum)
        return {
            "schema_version": SCHEMA_VERSION,
            "stratum": stratum,
            "points": points,  # null means uniform
            "density": _density_payload(density, "prior", stratum),
        }

    @app.put("/prior/{stratum}")
    def put_prior(stratum: str, body: PriorIn, x_reviewer: str = Header(default="anonymous")):
        _check_stratum(stratum)
        try:
            elicited = ElicitedPrior(tuple(body.points), reviewer=x_reviewer)
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        try:
            campaign.set_prior(stratum, elicited, reviewer=x_reviewer)
        except CampaignStateError as exc:
            raise HTTPException(409, str(exc))
        density = campaign.prior_density(stratum)
        return {
            "schema_version": SCHEMA_VERSION,
            "stratum": stratum,
            "points": [list(p) for p in elicited.points],
            "density": _density_payload(density, "prior", stratum),
        }

    @app.post("/plan")
    def post_plan(body: PlanIn):
        try:
            plan = campaign.plan(body.budget)
        except (CampaignStateError, PendingJudgmentsError) as exc:
            raise HTTPException(409, str(exc))
        except ValueError as exc:
            raise HTTPException(422, str(exc))
        return {
            "schema_version": SCHEMA_VERSION,
            "budget": plan.total_budget,
            "counts": plan.counts,
            "q": plan.fractions,
        }

    @app.post("/finalize")
    def post_finalize(body: FinalizeIn):
        try:
            estimate = campaign.finalize(mass=body.mass)
        except PendingJudgmentsError as exc:
            raise HTTPException(
                409, {"message": "pending judgments", "pending": exc.pending}
            )
        except CampaignStateError as exc:
            raise HTTPException(409, str(exc))
        return {
            "schema_version": SCHEMA_VERSION,
            "mass": body.mass,
            "mean": estimate.mean,
            "interval": [estimate.interval.lo, estimate.interval.hi],
            "mass_captured": estimate.interval.mass_captured,
            "doc_interval": list(estimate.doc_interval),
            "doc_width": estimate.doc_width,
            "weighted_mean": estimate.weighted_mean_check,
        }

    @app.get("/density/{which}")
    def get_density(which: str, stratum: str | None = None):
        if which not in DENSITY_KINDS:
            raise HTTPException(404, f"unknown density kind {which!r}; use {DENSITY_KINDS}")
        if which == "combined":
            results = campaign.results()
            if not results:
                raise HTTPException(404, "no combined density yet; finalize first")
            record = results[-1]
            density = GridDensity.from_json(
                (campaign.directory / record.density_file).read_text()
            )
            return _density_payload(density, which)
        if stratum is None:
            raise HTTPException(422, f"density kind {which!r} needs ?stratum=")
        _check_stratum(stratum)
        if which == "prior":
            density = campaign.prior_density(stratum)
        elif which == "presample-posterior":
            states = {s.label: s for s in campaign.stratum_states()}
            density = states[stratum].posterior
        else:  # posterior
            density = campaign.stratum_posterior(stratum)
        return _density_payload(density, which, stratum)

    if frontend_dist is None:
        # Editable-install layout: built UI assets live next to the package.
        frontend_dist = Path(__file__).resolve().parents[3] / "frontend" / "dist"
    frontend_dist = Path(frontend_dist)
    if frontend_dist.is_dir():
        app.mount("/", StaticFiles(directory=frontend_dist, html=True), name="ui")

    return app
