"""HTTP interface to the collection workflow.

Thin layer: routes validate ids, translate domain errors to status
codes, and delegate everything else to the ExperimentStore and the
analysis module. Responses are plain JSON except the CSV/PGM exports.

Run directly (python3 -m gazechart.service) to serve with uvicorn;
GAZECHART_DATA_DIR selects the event-log directory, GAZECHART_HOST and
GAZECHART_PORT the listen address.
"""

from __future__ import annotations

import io
import os
from pathlib import Path

from fastapi import Body, FastAPI, Query, UploadFile
from fastapi.responses import JSONResponse, Response

from . import defaults
from .analysis import (
    DensityGrid,
    SampleSet,
    compare,
    estimate_density,
    ingest_reference,
    render_heatmap,
)
from .errors import (
    ConfigurationError,
    DataError,
    EmptyDataError,
    GazechartError,
    ParameterError,
    ParseError,
    ProtocolError,
    StateError,
)
from .events import LOG_FILENAME
from .store import ExperimentStore

_ENV_PARAM_KEYS = {
    "GAZECHART_CLIP_SECONDS": ("clip_seconds", float),
    "GAZECHART_TUTORIAL_SECONDS": ("tutorial_seconds", float),
    "GAZECHART_CHART_SECONDS": ("chart_seconds", float),
    "GAZECHART_FONT_SIZE": ("font_size", int),
    "GAZECHART_DENSITY": ("density", float),
    "GAZECHART_JITTER_FRACTION": ("jitter_fraction", float),
    "GAZECHART_APPROVAL_RADIUS": ("approval_radius", float),
}


def _env_default_params(environ=os.environ):
    params = {}
    for env_key, (name, cast) in _ENV_PARAM_KEYS.items():
        raw = environ.get(env_key)
        if raw is not None:
            params[name] = cast(raw)
    return params


def _error_response(exc: GazechartError):
    if isinstance(exc, ConfigurationError):
        return JSONResponse(status_code=422, content={"detail": {"issues": list(exc.issues)}})
    if isinstance(exc, ParseError):
        return JSONResponse(status_code=422, content={
            "detail": {"message": str(exc), "line_numbers": list(exc.line_numbers)},
        })
    if isinstance(exc, ParameterError):
        return JSONResponse(status_code=422, content={"detail": str(exc)})
    if isinstance(exc, (EmptyDataError, DataError)):
        return JSONResponse(status_code=409, content={"detail": str(exc)})
    if isinstance(exc, (ProtocolError, StateError)):
        return JSONResponse(status_code=409, content={"detail": str(exc)})
    return JSONResponse(status_code=500, content={"detail": str(exc)})


def create_app(store: ExperimentStore | None = None) -> FastAPI:
    """Build the app; passing a store makes it fully deterministic/testable."""
    if store is None:
        data_dir = os.environ.get("GAZECHART_DATA_DIR")
        abandon = os.environ.get("GAZECHART_ABANDON_AFTER")
        abandon_after = float(abandon) if abandon else None
        if data_dir:
            path = Path(data_dir)
            if (path / LOG_FILENAME).exists():
                store = ExperimentStore.open(path, abandon_after=abandon_after)
            else:
                store = ExperimentStore(data_dir=path, abandon_after=abandon_after)
        else:
            store = ExperimentStore(abandon_after=abandon_after)

    app = FastAPI(title="gazechart", version="0.1.0")
    app.state.store = store
    env_params = _env_default_params()

    @app.exception_handler(GazechartError)
    async def _domain_error(request, exc):  # noqa: ARG001
        return _error_response(exc)

    def _campaign(campaign_id):
        try:
            return store.campaigns[campaign_id]
        except KeyError:
            return None

    def _frame(campaign, fid):
        if not 0 <= fid < len(campaign.frames_of_interest):
            return None, None
        foi = campaign.frames_of_interest[fid]
        return foi, campaign.video(foi.video_id)

    @app.post("/campaigns", status_code=201)
    def create_campaign(definition: dict = Body(...)):
        data = dict(definition)
        if env_params:
            data["params"] = {**env_params, **data.get("params", {})}
        campaign = store.create_campaign(data)
        return campaign.to_dict()

    @app.post("/participants", status_code=201)
    def admit_participant(body: dict = Body(...)):
        try:
            width = int(body["screen_width"])
            height = int(body["screen_height"])
        except (KeyError, TypeError, ValueError):
            return JSONResponse(status_code=422, content={
                "detail": "body must carry integer screen_width and screen_height",
            })
        record = store.admit(width, height)
        if record is None:
            return JSONResponse(status_code=403, content={
                "detail": f"screen {width}x{height} is below the minimum "
                          f"{defaults.MIN_SCREEN_WIDTH}x{defaults.MIN_SCREEN_HEIGHT}",
            })
        return {
            "participant_id": record.participant_id,
            "screening": record.screening.to_dict(),
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: dict = Body(...)):
        campaign_id = body.get("campaign_id")
        participant_id = body.get("participant_id")
        if campaign_id not in store.campaigns:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown campaign {campaign_id!r}"})
        if participant_id not in store.participants:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown participant {participant_id!r}"})
        seed = body.get("seed")
        record = store.create_session(campaign_id, participant_id,
                                      seed=None if seed is None else int(seed))
        return {
            "session_id": record.session.session_id,
            "campaign_id": campaign_id,
            "participant_id": participant_id,
            "status": record.session.status.value,
            "trial_count": len(record.session.trials),
        }

    @app.get("/sessions/{session_id}/next")
    def next_step(session_id: str):
        if session_id not in store.sessions:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown session {session_id!r}"})
        return store.next_step(session_id)

    @app.post("/sessions/{session_id}/steps/{step_id}/response")
    def submit_step(session_id: str, step_id: str, body: dict = Body(...)):
        if session_id not in store.sessions:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown session {session_id!r}"})
        text = body.get("text")
        if not isinstance(text, str):
            return JSONResponse(status_code=422,
                                content={"detail": "body must carry a string field 'text'"})
        return store.submit_step(session_id, step_id, text)

    def _frame_or_404(campaign_id, fid):
        campaign = _campaign(campaign_id)
        if campaign is None:
            return None, None, JSONResponse(
                status_code=404, content={"detail": f"unknown campaign {campaign_id!r}"})
        foi, video = _frame(campaign, fid)
        if foi is None:
            return None, None, JSONResponse(
                status_code=404,
                content={"detail": f"campaign {campaign_id!r} has no frame index {fid}"})
        return foi, video, None

    @app.get("/campaigns/{campaign_id}/frames/{fid}/samples.csv")
    def frame_samples(campaign_id: str, fid: int):
        from .session import write_samples_csv

        foi, _video, err = _frame_or_404(campaign_id, fid)
        if err is not None:
            return err
        samples = store.samples_for(campaign_id, foi.video_id, foi.frame_time_ms)
        return Response(content=write_samples_csv(samples), media_type="text/csv")

    def _frame_sample_set(campaign_id, foi, video):
        samples = store.samples_for(campaign_id, foi.video_id, foi.frame_time_ms)
        valid = [s for s in samples if s.valid]
        if not valid:
            raise EmptyDataError(
                f"no valid samples yet for frame {foi.video_id}@{foi.frame_time_ms}ms"
            )
        return SampleSet.from_gaze_samples(video.frame_width, video.frame_height, valid)

    @app.get("/campaigns/{campaign_id}/frames/{fid}/density.json")
    def frame_density(campaign_id: str, fid: int,
                      downsample: int = Query(1, ge=1),
                      bandwidth: float | None = Query(None, gt=0)):
        foi, video, err = _frame_or_404(campaign_id, fid)
        if err is not None:
            return err
        sample_set = _frame_sample_set(campaign_id, foi, video)
        grid = estimate_density(sample_set, downsample=downsample, bandwidth=bandwidth)
        return {"n_samples": sample_set.n, **grid.to_dict()}

    @app.get("/campaigns/{campaign_id}/frames/{fid}/heatmap.pgm")
    def frame_heatmap(campaign_id: str, fid: int,
                      downsample: int = Query(1, ge=1),
                      bandwidth: float | None = Query(None, gt=0)):
        foi, video, err = _frame_or_404(campaign_id, fid)
        if err is not None:
            return err
        sample_set = _frame_sample_set(campaign_id, foi, video)
        grid = estimate_density(sample_set, downsample=downsample, bandwidth=bandwidth)
        return Response(content=render_heatmap(grid), media_type="image/x-portable-graymap")

    @app.post("/campaigns/{campaign_id}/frames/{fid}/compare")
    def frame_compare(campaign_id: str, fid: int, file: UploadFile,
                      downsample: int = Query(1, ge=1)):
        foi, video, err = _frame_or_404(campaign_id, fid)
        if err is not None:
            return err
        text = file.file.read().decode("utf-8", errors="replace")
        reference = ingest_reference(io.StringIO(text))
        ours = _frame_sample_set(campaign_id, foi, video)
        if (reference.width, reference.height) != (video.frame_width, video.frame_height):
            raise DataError(
                f"reference frame {reference.width}x{reference.height} does not match "
                f"video frame {video.frame_width}x{video.frame_height}"
            )
        if reference.n == 0:
            raise EmptyDataError("reference file holds no usable points")
        report = compare(ours, reference, downsample=downsample)
        return report.to_dict()

    return app


def main():
    import uvicorn

    host = os.environ.get("GAZECHART_HOST", "127.0.0.1")
    port = int(os.environ.get("GAZECHART_PORT", "8000"))
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
