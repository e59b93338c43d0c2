"""Command-line interface.

Machine-readable output goes to stdout, diagnostics to stderr.  Exit codes:
0 on success, 1 on data/model errors, 2 on usage errors.  Every option can
also be set through the environment with the SHUTTLE_ prefix, e.g.
``SHUTTLE_SERVE_PORT=9000 shuttlestats serve ...``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from shuttlestats.geometry import FootFirst, GripType, ServiceSide, SlaArea
from shuttlestats.glm.design import DesignError, DesignSpec
from shuttlestats.glm.newton import FitError
from shuttlestats.glm.persist import read_fit, write_fit
from shuttlestats.glm.stats import wald
from shuttlestats.glm.stepwise import SelectionError
from shuttlestats.interception import (
    INTERCEPT_RESPONSE,
    RIGHT_DESIGN,
    fit_intercept_models,
    intercept_odds_report,
    wald_reports,
)
from shuttlestats.records import DataError, Dataset, canonicalize, dump_csv, load_csv
from shuttlestats.rla import RLA_DESIGN, fit_rla_models, interpret, probability_table
from shuttlestats.service import (
    INTERCEPT_MODEL_FILES,
    RLA_MODEL_FILES,
    ServiceConfig,
    create_app,
)
from shuttlestats.summaries import interception_rates, summarize_rla, summarize_sla
from shuttlestats.synth import ConfigError, default_config, generate_synthetic
from shuttlestats.validation import (
    RuleMode,
    foot_contingency,
    foot_rule,
    grip_contingency,
    grip_rule,
    rule_accuracy,
)

_DATA_ERRORS = (DataError, DesignError, FitError, SelectionError, ConfigError, ValueError, OSError)


def _fail(exc: Exception) -> "click.ClickException":
    return click.ClickException(str(exc))


def _load_canonical(path: str, drop_long: bool = False) -> Dataset:
    return canonicalize(load_csv(path, drop_long=drop_long))


def _enum_choice(cls):
    return click.Choice([m.value for m in cls], case_sensitive=False)


def _enum_value(cls, raw: str):
    for member in cls:
        if member.value.lower() == raw.lower():
            return member
    raise click.UsageError(f"invalid value {raw!r}")


@click.group(context_settings={"auto_envvar_prefix": "SHUTTLE"})
def main() -> None:
    """Rally analytics for badminton men's doubles serve/return play."""


@main.command()
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text tables.")
@click.option("--drop-long", is_flag=True, help="Skip rows marked as long services.")
def summarize(data: str, as_json: bool, drop_long: bool) -> None:
    """Landing-area distributions and interception rates for a dataset."""
    try:
        ds = _load_canonical(data, drop_long)
        sla = summarize_sla(ds)
        rla = summarize_rla(ds)
        rates = interception_rates(ds)
    except _DATA_ERRORS as exc:
        raise _fail(exc)
    if as_json:
        click.echo(json.dumps({
            "rounds": len(ds),
            "sla": sla.to_json(),
            "rla": rla.to_json(),
            "interception": rates.to_json(),
        }, indent=2))
    else:
        click.echo(sla.as_text())
        click.echo("")
        click.echo(rla.as_text())
        click.echo("")
        click.echo(rates.as_text())


@main.command("fit-rla")
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", "-o", type=click.Path(file_okay=False), required=True,
              help="Directory for the fitted model documents.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text tables.")
def fit_rla(data: str, out_dir: str, as_json: bool) -> None:
    """Fit the per-side return-landing-area models and write model documents."""
    try:
        ds = _load_canonical(data)
        pair = fit_rla_models(ds)
    except _DATA_ERRORS as exc:
        raise _fail(exc)
    for message in pair.failures.values():
        click.echo(f"warning: {message}", err=True)
    if pair.left is None and pair.right is None:
        raise click.ClickException("no side could be fitted")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload: dict = {}
    for side, fit in ((ServiceSide.LEFT, pair.left), (ServiceSide.RIGHT, pair.right)):
        if fit is None:
            continue
        version = write_fit(out / RLA_MODEL_FILES[side], fit, RLA_DESIGN)
        report = wald(fit)
        table = probability_table(fit)
        if as_json:
            payload[side.value] = {
                "model_file": str(out / RLA_MODEL_FILES[side]),
                "model_version": version,
                "bic": fit.bic,
                "log_likelihood": fit.log_likelihood,
                "separation_suspected": fit.diagnostics.separation_suspected,
                "coefficients": report.to_json(),
                "probability_table": table.to_json(),
                "interpretations": [i.to_json() for i in interpret(fit, report)],
            }
        else:
            click.echo(f"== Serving from the {side.value.lower()} "
                       f"(n={fit.n_obs}, BIC={fit.bic:.1f}, model {version})")
            if fit.diagnostics.separation_suspected:
                click.echo("   note: separation suspected; capped parameters present", err=True)
            click.echo(report.as_text(p_max=0.2))
            click.echo("")
            click.echo(table.as_text())
            click.echo("")
    if as_json:
        click.echo(json.dumps(payload, indent=2))


@main.command("fit-intercept")
@click.argument("data", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-dir", "-o", type=click.Path(file_okay=False), required=True)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of text tables.")
def fit_intercept(data: str, out_dir: str, as_json: bool) -> None:
    """Fit the per-side interception models and write model documents."""
    try:
        ds = _load_canonical(data)
        pair = fit_intercept_models(ds)
    except _DATA_ERRORS as exc:
        raise _fail(exc)
    for message in pair.failures.values():
        click.echo(f"warning: {message}", err=True)
    if pair.left_fit is None and pair.right_fit is None:
        raise click.ClickException("no side could be fitted")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reports = wald_reports(pair)
    odds = intercept_odds_report(pair)
    payload: dict = {}
    if pair.left_selection is not None:
        left_spec = DesignSpec(pair.left_selection.factors, INTERCEPT_RESPONSE)
        version = write_fit(out / INTERCEPT_MODEL_FILES[ServiceSide.LEFT],
                            pair.left_selection.fit, left_spec)
        payload["Left"] = {
            "model_version": version,
            "selected_factors": list(pair.left_selection.selected),
            "selection": [
                {"added": s.added, "bic": s.bic, "candidates": s.candidate_bics}
                for s in pair.left_selection.trace
            ],
            "algorithm": pair.left_selection.algorithm,
            "coefficients": reports["Left"].to_json(),
        }
    if pair.right_fit is not None:
        version = write_fit(out / INTERCEPT_MODEL_FILES[ServiceSide.RIGHT],
                            pair.right_fit, RIGHT_DESIGN)
        payload["Right"] = {
            "model_version": version,
            "coefficients": reports["Right"].to_json(),
        }
    if as_json:
        payload["odds"] = [o.to_json() for o in odds]
        click.echo(json.dumps(payload, indent=2))
    else:
        if pair.left_selection is not None:
            click.echo(f"== Serving from the left (forward BIC selection: "
                       f"{', '.join(pair.left_selection.selected) or 'intercept only'})")
            click.echo(reports["Left"].as_text(p_max=0.2))
            click.echo("")
        if pair.right_fit is not None:
            click.echo("== Serving from the right (zone indicators, reference zone 5)")
            click.echo(reports["Right"].as_text(p_max=0.2))
            click.echo("")
        for o in odds:
            click.echo(o.text)


@main.command()
@click.option("--side", required=True, type=_enum_choice(ServiceSide))
@click.option("--sla", required=True, type=_enum_choice(SlaArea))
@click.option("--foot", required=True, type=_enum_choice(FootFirst))
@click.option("--grip", required=True, type=_enum_choice(GripType))
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False),
              help="A single model document to use regardless of --side.")
@click.option("--model-dir", type=click.Path(exists=True, file_okay=False),
              help="Directory holding rla_left.json / rla_right.json.")
def predict(side: str, sla: str, foot: str, grip: str,
            model_path: str | None, model_dir: str | None) -> None:
    """Predict the nine zone probabilities for one predictor combination."""
    if (model_path is None) == (model_dir is None):
        raise click.UsageError("give exactly one of --model or --model-dir")
    side_value = _enum_value(ServiceSide, side)
    try:
        if model_path is not None:
            model = read_fit(model_path)
        else:
            model = read_fit(Path(model_dir) / RLA_MODEL_FILES[side_value])
        probs = model.predict_proba_at({
            "sla": _enum_value(SlaArea, sla).value,
            "foot": _enum_value(FootFirst, foot).value,
            "grip": _enum_value(GripType, grip).value,
        })
    except _DATA_ERRORS as exc:
        raise _fail(exc)
    click.echo(json.dumps({
        "side": side_value.value,
        "probabilities": {str(z): float(p) for z, p in enumerate(probs, start=1)},
        "model_version": model.version,
        "separation_suspected": model.fit.diagnostics.separation_suspected,
    }, indent=2))


@main.command()
@click.argument("holdout", type=click.Path(exists=True, dir_okay=False))
@click.option("--model-dir", type=click.Path(exists=True, file_okay=False),
              help="Also score the zone models' predictions on the holdout.")
@click.option("--json", "as_json", is_flag=True)
def validate(holdout: str, model_dir: str | None, as_json: bool) -> None:
    """Contingency tables and rule-classifier accuracies on a holdout dataset."""
    try:
        ds = _load_canonical(holdout)
        foot_table = foot_contingency(ds)
        grip_table = grip_contingency(ds)
        accuracies = {
            "foot_strict": rule_accuracy(foot_table, foot_rule(RuleMode.STRICT)),
            "foot_relaxed": rule_accuracy(foot_table, foot_rule(RuleMode.RELAXED)),
            "grip_strict": rule_accuracy(grip_table, grip_rule(RuleMode.STRICT)),
            "grip_relaxed": rule_accuracy(grip_table, grip_rule(RuleMode.RELAXED)),
        }
    except _DATA_ERRORS as exc:
        raise _fail(exc)

    model_scores: dict = {}
    if model_dir is not None:
        try:
            model_scores = _score_models(ds, Path(model_dir))
        except _DATA_ERRORS as exc:
            raise _fail(exc)

    if as_json:
        out = {
            "rounds": len(ds),
            "foot": foot_table.to_json(),
            "grip": grip_table.to_json(),
            "accuracy": accuracies,
        }
        if model_scores:
            out["model_scores"] = model_scores
        click.echo(json.dumps(out, indent=2))
        return

    click.echo("Foot vs return depth")
    click.echo(foot_table.as_text())
    click.echo(f"strict accuracy (left->rear, right->front): {100 * accuracies['foot_strict']:.1f}%")
    click.echo(f"relaxed accuracy (middle court accepted):    {100 * accuracies['foot_relaxed']:.1f}%")
    click.echo("")
    click.echo("Grip vs return path")
    click.echo(grip_table.as_text())
    click.echo(f"strict accuracy (non-paper rule):            {100 * accuracies['grip_strict']:.1f}%")
    click.echo(f"relaxed accuracy (center path accepted):     {100 * accuracies['grip_relaxed']:.1f}%")
    for side, scores in model_scores.items():
        click.echo("")
        click.echo(f"Zone model, serving from the {side.lower()}: "
                   f"top-1 accuracy {100 * scores['top1_accuracy']:.1f}% "
                   f"over {scores['rounds']} rounds "
                   f"(mean log-loss {scores['mean_log_loss']:.3f})")


def _score_models(ds: Dataset, model_dir: Path) -> dict:
    """Holdout top-1 accuracy and log-loss of the stored zone models."""
    import math

    from shuttlestats.glm.design import build_design

    scores: dict = {}
    for side, filename in RLA_MODEL_FILES.items():
        path = model_dir / filename
        if not path.exists():
            continue
        model = read_fit(path)
        subset = ds.for_side(side)
        if len(subset) == 0:
            continue
        design, y = build_design(subset, model.spec)
        hits = 0
        log_loss = 0.0
        for x, code in zip(design.values, y):
            probs = model.fit.predict_proba(x)
            hits += int(probs.argmax() == code)
            log_loss -= math.log(max(probs[code], 1e-300))
        scores[side.value] = {
            "rounds": int(len(y)),
            "top1_accuracy": hits / len(y),
            "mean_log_loss": log_loss / len(y),
        }
    return scores


@main.command()
@click.option("--n", "n_rounds", type=int, required=True, help="Number of rounds to draw.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="Output CSV (default: stdout).")
def simulate(n_rounds: int, seed: int, out: str | None) -> None:
    """Draw a synthetic dataset shaped like the published distributions."""
    if n_rounds < 0:
        raise click.UsageError("--n must be non-negative")
    try:
        ds = generate_synthetic(default_config(), seed=seed, n=n_rounds)
    except ConfigError as exc:
        raise _fail(exc)
    if out is None:
        click.echo(dump_csv(ds), nl=False)
    else:
        dump_csv(ds, out)
        click.echo(f"wrote {len(ds)} rounds to {out}", err=True)


@main.command()
@click.option("--addr", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--model-dir", type=click.Path(file_okay=False), required=True)
@click.option("--store", "store_path", type=click.Path(dir_okay=False), required=True,
              help="Append-only session log (line-delimited JSON).")
@click.option("--base-data", type=click.Path(exists=True, dir_okay=False),
              help="Base dataset CSV used by /refit.")
@click.option("--refit-min-rounds", type=int, default=50, show_default=True,
              help="Per-side session rounds required before refits include session data.")
@click.option("--static-dir", type=click.Path(file_okay=False),
              help="Optional directory with the built web UI to serve at /.")
def serve(addr: str, port: int, model_dir: str, store_path: str,
          base_data: str | None, refit_min_rounds: int, static_dir: str | None) -> None:
    """Run the HTTP JSON prediction service."""
    import uvicorn

    config = ServiceConfig(
        model_dir=Path(model_dir),
        store_path=Path(store_path),
        base_data=Path(base_data) if base_data else None,
        refit_min_rounds=refit_min_rounds,
        static_dir=Path(static_dir) if static_dir else None,
    )
    app = create_app(config)
    click.echo(f"serving on http://{addr}:{port} (models: {model_dir})", err=True)
    uvicorn.run(app, host=addr, port=port, log_level="info")


if __name__ == "__main__":
    main()
