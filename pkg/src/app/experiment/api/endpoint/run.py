import math
import re
from pathlib import Path
from typing import Annotated, Any

import typer

from src.app.experiment.api.dependencies import exit_on_error, experiment_service
from src.app.forward.schema.forward import SolverMode
from src.core.exceptions import ConfigurationError

DEGREES = re.compile(r"^(-?\d+(?:\.\d+)?)deg$")


def parse_scheme(text: str) -> dict[str, Any]:
    """`incident`, `normal`, an angle in radians, or an angle like `60deg`."""
    text = text.strip().lower()
    if text in ("incident", "normal"):
        return {"kind": text}
    if match := DEGREES.match(text):
        return {"kind": "fixed", "angle": math.radians(float(match.group(1)))}
    try:
        return {"kind": "fixed", "angle": float(text)}
    except ValueError:
        raise ConfigurationError(f"Cannot parse test-vector scheme '{text}'")


def collect_overrides(
    n: int | None = None,
    wavelength: float | None = None,
    snr_db: float | None = None,
    seed: int | None = None,
    schemes: list[str] | None = None,
    mode: SolverMode | None = None,
    out: Path | None = None,
    verify: bool | None = None,
) -> dict[str, Any]:
    overrides = {
        "N": n,
        "lambda": wavelength,
        "snr_db": snr_db,
        "seed": seed,
        "mode": mode,
        "output_dir": out,
        "verify_identities": verify,
        "schemes": [parse_scheme(s) for s in schemes] if schemes else None,
    }
    return {key: value for key, value in overrides.items() if value is not None}


def run(
    config: Annotated[Path | None, typer.Option("--config", help="Experiment config (JSON)")] = None,
    preset: Annotated[str | None, typer.Option(help="example1 or example2")] = None,
    n: Annotated[int | None, typer.Option("--n", help="Number of directions N")] = None,
    wavelength: Annotated[float | None, typer.Option("--lambda", help="Wavelength")] = None,
    snr_db: Annotated[float | None, typer.Option("--snr-db", help="SNR in dB, inf for noiseless")] = None,
    seed: Annotated[int | None, typer.Option(help="Root seed")] = None,
    scheme: Annotated[list[str] | None, typer.Option(help="incident, normal, radians or e.g. 60deg")] = None,
    mode: Annotated[SolverMode | None, typer.Option(help="Forward data mode")] = None,
    out: Annotated[Path | None, typer.Option("--out", help="Output directory")] = None,
    verify_identities: Annotated[bool, typer.Option("--verify-identities", help="Also run the identity sweep")] = False,
):
    """Forward data, MSR matrix, noise, SVD and imaging maps."""
    with exit_on_error():
        overrides = collect_overrides(n, wavelength, snr_db, seed, scheme, mode, out, verify_identities or None)
        experiment = experiment_service.load_config(config, preset, overrides)
        summary = experiment_service.run(experiment)

    for result in summary.schemes:
        typer.echo(f"{result.scheme:>10}  contrast={result.contrast.ratio:.4g}")
    typer.echo(f"M={summary.signal_rank}, {len(summary.artifacts)} artifacts in {experiment.output_dir}")

    if not summary.passed:
        raise typer.Exit(code=1)
