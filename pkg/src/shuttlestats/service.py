"""HTTP JSON service: zone prediction, model summaries, tagging, refits.

Endpoints
---------
POST /predict/rla    side+sla+foot+grip -> nine zone probabilities
GET  /model/summary  coefficient and Wald reports for the served models
POST /rounds         validated round record appended to the session store
GET  /stats          running summaries over the session store
POST /refit          refit on base + session data, atomically swap models

The served models live in one immutable bundle object; handlers grab a
single reference per request, so a concurrent refit is invisible until its
atomic swap and no request ever mixes old and new sides.  Invalid enum
values come back as 400 with one message per offending field; before any
models are loaded every model-dependent endpoint answers 503; a second
concurrent refit answers 409.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from shuttlestats.geometry import FootFirst, GripType, Handedness, ServiceSide, SlaArea
from shuttlestats.glm.design import DesignSpec
from shuttlestats.glm.persist import LoadedModel, read_fit, write_fit
from shuttlestats.glm.stats import wald
from shuttlestats.interception import INTERCEPT_RESPONSE, RIGHT_DESIGN, fit_intercept_models
from shuttlestats.records import (
    Dataset,
    InterceptOutcome,
    RoundRecord,
    canonicalize,
    load_csv,
)
from shuttlestats.rla import RLA_DESIGN, fit_rla_models
from shuttlestats.store import SessionStore
from shuttlestats.summaries import interception_rates, summarize_rla, summarize_sla

RLA_MODEL_FILES = {ServiceSide.LEFT: "rla_left.json", ServiceSide.RIGHT: "rla_right.json"}
INTERCEPT_MODEL_FILES = {
    ServiceSide.LEFT: "intercept_left.json",
    ServiceSide.RIGHT: "intercept_right.json",
}


@dataclass(frozen=True)
class ServiceConfig:
    model_dir: Path
    store_path: Path
    base_data: Path | None = None
    refit_min_rounds: int = 50  # per-side session rounds needed before refits use them
    static_dir: Path | None = None


@dataclass(frozen=True)
class ModelBundle:
    """One consistent generation of served models."""

    rla: dict[ServiceSide, LoadedModel]
    intercept: dict[ServiceSide, LoadedModel]
    version: str


def load_bundle(model_dir: Path) -> ModelBundle | None:
    """Load served models; the two zone models are required, interception optional."""
    rla: dict[ServiceSide, LoadedModel] = {}
    for side, filename in RLA_MODEL_FILES.items():
        path = model_dir / filename
        if not path.exists():
            return None
        rla[side] = read_fit(path)
    intercept: dict[ServiceSide, LoadedModel] = {}
    for side, filename in INTERCEPT_MODEL_FILES.items():
        path = model_dir / filename
        if path.exists():
            intercept[side] = read_fit(path)
    version = "+".join(
        [rla[s].version for s in ServiceSide]
        + [intercept[s].version for s in ServiceSide if s in intercept]
    )
    return ModelBundle(rla=rla, intercept=intercept, version=version)


_ENUM_FIELDS = {
    "side": ServiceSide,
    "service_from": ServiceSide,
    "sla": SlaArea,
    "rdh": Handedness,
    "foot": FootFirst,
    "grip": GripType,
    "intercept": InterceptOutcome,
}


def _parse_fields(payload: dict, fields: tuple[str, ...]) -> tuple[dict, list[dict]]:
    """Validate enum/zone fields of a JSON payload; exact display strings only."""
    values: dict = {}
    errors: list[dict] = []
    if not isinstance(payload, dict):
        return {}, [{"field": "<body>", "message": "expected a JSON object"}]
    for name in fields:
        if name not in payload:
            errors.append({"field": name, "message": "missing field"})
            continue
        raw = payload[name]
        if name in ("server", "receiver"):
            if not isinstance(raw, str) or not raw.strip():
                errors.append({"field": name, "message": "player name must be a non-empty string"})
            else:
                values[name] = raw
        elif name == "rla":
            if not isinstance(raw, int) or isinstance(raw, bool) or not 1 <= raw <= 9:
                errors.append({"field": name, "message": f"value {raw!r} outside 1..9"})
            else:
                values[name] = raw
        else:
            cls = _ENUM_FIELDS[name]
            try:
                values[name] = cls(raw)
            except ValueError:
                allowed = "/".join(m.value for m in cls)
                errors.append({"field": name, "message": f"unknown value {raw!r}, expected one of {allowed}"})
    return values, errors


def _session_stats(store: SessionStore) -> dict:
    ds = canonicalize(store.rounds())
    return {
        "rounds": len(ds),
        "sla": summarize_sla(ds).to_json(),
        "rla": summarize_rla(ds).to_json(),
        "interception": interception_rates(ds).to_json(),
    }


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="shuttlestats", docs_url=None, redoc_url=None)
    store = SessionStore(config.store_path)
    state = {"bundle": load_bundle(config.model_dir)}
    refit_lock = threading.Lock()

    def bundle_or_none() -> ModelBundle | None:
        return state["bundle"]

    @app.get("/healthz")
    def healthz():
        bundle = bundle_or_none()
        return {"status": "ok", "models_loaded": bundle is not None}

    @app.post("/predict/rla")
    def predict_rla(payload: dict):
        values, errors = _parse_fields(payload, ("side", "sla", "foot", "grip"))
        if errors:
            return JSONResponse(status_code=400, content={"errors": errors})
        bundle = bundle_or_none()
        if bundle is None:
            return JSONResponse(status_code=503, content={"detail": "models not loaded yet"})
        model = bundle.rla[values["side"]]
        probs = model.predict_proba_at(
            {"sla": values["sla"].value, "foot": values["foot"].value, "grip": values["grip"].value}
        )
        return {
            "probabilities": {str(z): float(p) for z, p in zip(range(1, 10), probs)},
            "model_version": bundle.version,
            "separation_suspected": model.fit.diagnostics.separation_suspected,
        }

    @app.get("/model/summary")
    def model_summary():
        bundle = bundle_or_none()
        if bundle is None:
            return JSONResponse(status_code=503, content={"detail": "models not loaded yet"})
        def describe(model: LoadedModel, kind: str) -> dict:
            return {
                "version": model.version,
                "kind": kind,
                "log_likelihood": model.fit.log_likelihood,
                "bic": model.fit.bic,
                "n_obs": model.fit.n_obs,
                "diagnostics": model.fit.diagnostics.to_json(),
                "wald": wald(model.fit).to_json(),
            }

        summary = {
            "rla": {s.value: describe(m, "multinomial") for s, m in bundle.rla.items()},
            "interception": {s.value: describe(m, "binary") for s, m in bundle.intercept.items()},
        }
        return {"model_version": bundle.version, "models": summary}

    @app.post("/rounds")
    def post_round(payload: dict):
        fields = ("server", "service_from", "sla", "receiver", "rdh", "foot", "grip", "rla", "intercept")
        values, errors = _parse_fields(payload, fields)
        if errors:
            return JSONResponse(status_code=400, content={"errors": errors})
        record = RoundRecord(**values)
        session_id = payload.get("session_id", "default")
        if not isinstance(session_id, str) or not session_id:
            return JSONResponse(
                status_code=400,
                content={"errors": [{"field": "session_id", "message": "must be a non-empty string"}]},
            )
        entry = store.append(record, session_id)
        return {"accepted": True, "timestamp": entry.timestamp, "stats": _session_stats(store)}

    @app.get("/stats")
    def stats():
        return _session_stats(store)

    @app.post("/refit")
    def refit():
        if not refit_lock.acquire(blocking=False):
            return JSONResponse(status_code=409, content={"detail": "a refit is already running"})
        try:
            base = (
                load_csv(config.base_data)
                if config.base_data is not None and Path(config.base_data).exists()
                else Dataset((), canonicalized=False)
            )
            session = store.rounds()
            per_side = {
                side: sum(1 for r in session if r.service_from is side) for side in ServiceSide
            }
            use_session = len(session) > 0 and all(
                n >= config.refit_min_rounds for n in per_side.values()
            )
            rounds = base.rounds + (session.rounds if use_session else ())
            if not rounds:
                return JSONResponse(
                    status_code=409,
                    content={"detail": "no data to refit on (no base data, empty session store)"},
                )
            ds = canonicalize(Dataset(rounds))
            pair = fit_rla_models(ds)
            if pair.left is None or pair.right is None:
                return JSONResponse(
                    status_code=409,
                    content={"detail": "refit failed", "errors": pair.failures},
                )
            config.model_dir.mkdir(parents=True, exist_ok=True)
            for side, fit in ((ServiceSide.LEFT, pair.left), (ServiceSide.RIGHT, pair.right)):
                write_fit(config.model_dir / RLA_MODEL_FILES[side], fit, RLA_DESIGN)
            intercept_pair = fit_intercept_models(ds)
            if intercept_pair.left_selection is not None:
                left_spec = DesignSpec(intercept_pair.left_selection.factors, INTERCEPT_RESPONSE)
                write_fit(
                    config.model_dir / INTERCEPT_MODEL_FILES[ServiceSide.LEFT],
                    intercept_pair.left_selection.fit, left_spec,
                )
            if intercept_pair.right_fit is not None:
                write_fit(
                    config.model_dir / INTERCEPT_MODEL_FILES[ServiceSide.RIGHT],
                    intercept_pair.right_fit, RIGHT_DESIGN,
                )
            intercept_note = (
                "interception models refitted"
                if not intercept_pair.failures
                else f"interception fits skipped: {intercept_pair.failures}"
            )
            new_bundle = load_bundle(config.model_dir)
            state["bundle"] = new_bundle  # atomic swap
            note = (
                f"refit on base + session data ({len(session)} session rounds); "
                if use_session
                else (
                    "refit on base data only "
                    f"(session rounds per side {dict((s.value, n) for s, n in per_side.items())} "
                    f"below the minimum of {config.refit_min_rounds}); "
                )
            ) + intercept_note
            return {
                "refit": "completed",
                "session_rounds_used": use_session,
                "note": note,
                "model_version": new_bundle.version,
            }
        finally:
            refit_lock.release()

    if config.static_dir is not None and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
