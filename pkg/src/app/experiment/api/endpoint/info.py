import orjson
import typer

from src import __version__
from src.app.experiment.schema.experiment import PRESETS
from src.app.forward.schema.forward import SolverMode
from src.core.config import settings


def info():
    """Version, settings, presets and solver modes."""
    payload = {
        "version": __version__,
        "settings": settings.model_dump(mode="json", exclude={"base_dir"}),
        "presets": PRESETS,
        "modes": [mode.value for mode in SolverMode],
    }
    typer.echo(orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS).decode())
