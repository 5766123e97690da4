import typer

from .experiment.api.endpoint.export import export_msr
from .experiment.api.endpoint.info import info
from .experiment.api.endpoint.run import run
from .experiment.api.endpoint.verify import verify_identities

COMMANDS = {
    "run": run,
    "verify-identities": verify_identities,
    "export-msr": export_msr,
    "info": info,
}


def include_router(application: typer.Typer) -> typer.Typer:
    for name, command in COMMANDS.items():
        application.command(name)(command)
    return application
