from pathlib import Path
from typing import Annotated

import typer
from pydantic import ValidationError

from src.app.analytic.schema.analytic import SweepSpec
from src.app.experiment.api.dependencies import exit_on_error, experiment_service
from src.core.config import settings
from src.core.exceptions import ConfigurationError


def verify_identities(
    tuples: Annotated[int, typer.Option(help="Random (xi, zeta, x) tuples")] = 200,
    n: Annotated[list[int] | None, typer.Option("--n", help="Direction counts")] = None,
    max_kx: Annotated[float, typer.Option("--max-kx", help="Largest k|x|")] = 20.0,
    wavelength: Annotated[float, typer.Option("--lambda")] = 0.4,
    seed: Annotated[int, typer.Option()] = 0,
    out: Annotated[Path | None, typer.Option("--out")] = None,
):
    """Direction-sum identities against the quadrature and Jacobi-Anger oracles."""
    with exit_on_error():
        try:
            spec = SweepSpec(
                tuples=tuples,
                n_values=n or SweepSpec().n_values,
                max_kx=max_kx,
                wavelength=wavelength,
                seed=seed,
            )
        except ValidationError as e:
            details = "; ".join(f"{'.'.join(map(str, d['loc']))}: {d['msg']}" for d in e.errors())
            raise ConfigurationError(f"command line: {details}")
        summary, appendix = experiment_service.run_verification(spec, out or settings.output_dir)

    typer.echo(f"max |sum - quadrature| at N={summary.n_max}: {summary.max_lhs_vs_quadrature:.3e}")
    typer.echo(f"max |quadrature - series|: {summary.max_quadrature_vs_series:.3e}")
    typer.echo(f"max |quadrature - printed identity1|: {summary.max_quadrature_vs_identity1:.3e}")
    typer.echo(f"max |quadrature - printed identity2|: {summary.max_quadrature_vs_identity2:.3e}")
    for check in appendix.checks:
        typer.echo(f"{check.name:>22}  residual={check.residual:.3e}  {'ok' if check.passed else 'MISMATCH'}")

    if not (summary.passed and appendix.passed):
        raise typer.Exit(code=1)
