from typing import Annotated

import typer

from src.app.router import include_router
from src.core.config import settings
from src.core.lifespan import lifespan


def create_application() -> typer.Typer:
    application = typer.Typer(
        name=settings.project_name,
        help="Subspace migration imaging of sound-hard arcs.",
        no_args_is_help=True,
        add_completion=False,
        pretty_exceptions_enable=settings.debug,
    )

    @application.callback()
    def main(
        ctx: typer.Context,
        log_level: Annotated[str | None, typer.Option("--log-level", help="Overrides ARCIMAGING_LOG_LEVEL")] = None,
    ):
        ctx.with_resource(lifespan(log_level))

    return include_router(application)


app = create_application()


if __name__ == "__main__":
    app()
