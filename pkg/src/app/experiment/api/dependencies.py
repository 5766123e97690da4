import logging
from collections.abc import Iterator
from contextlib import contextmanager

import typer

from src.app.analytic.repository.analytic import AnalyticRepository
from src.app.experiment.service.experiment import ExperimentService
from src.app.imaging.repository.imaging import ImageRepository
from src.app.msr.repository.msr import MsrRepository
from src.app.spectral.repository.spectral import SpectrumRepository
from src.core.exceptions import ArcImagingError, ConfigurationError

logger = logging.getLogger(__name__)

msr_repository = MsrRepository()
spectrum_repository = SpectrumRepository()
image_repository = ImageRepository()
analytic_repository = AnalyticRepository()

experiment_service = ExperimentService(msr_repository, spectrum_repository, image_repository, analytic_repository)


@contextmanager
def exit_on_error() -> Iterator[None]:
    """Configuration errors exit with 2, every other library error with 1."""
    try:
        yield
    except ConfigurationError as e:
        typer.echo(f"configuration error: {e.message}", err=True)
        raise typer.Exit(code=2)
    except ArcImagingError as e:
        typer.echo(f"error: {e.message}", err=True)
        raise typer.Exit(code=1)
