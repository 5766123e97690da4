import json
import os
from pathlib import Path
from typing import Annotated

from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src import __version__


class NumericsConfig(BaseModel):
    bie_nodes: Annotated[int, Field(default=64, ge=16)]
    node_doubling_kl: Annotated[float, Field(default=40.0, gt=0)]
    condition_limit: Annotated[float, Field(default=1e12, gt=1)]

    oracle_nodes: Annotated[int, Field(default=2048, ge=64)]
    oracle_check_nodes: Annotated[int, Field(default=4096, ge=64)]
    oracle_tolerance: Annotated[float, Field(default=1e-10, gt=0)]

    arc_length_tolerance: Annotated[float, Field(default=1e-10, gt=0)]
    injectivity_samples: Annotated[int, Field(default=2001, ge=16)]
    distance_samples: Annotated[int, Field(default=4001, ge=16)]

    @field_validator("bie_nodes")
    def even_nodes(cls, v):
        if v % 2:
            raise ValueError("bie_nodes must be even")
        return v


class ImagingConfig(BaseModel):
    step_fraction: Annotated[float, Field(default=1 / 20, gt=0)]
    max_step_fraction: Annotated[float, Field(default=1 / 10, gt=0)]
    on_arc_fraction: Annotated[float, Field(default=1 / 8, gt=0)]
    off_arc_fraction: Annotated[float, Field(default=1 / 2, gt=0)]
    extent: tuple[float, float] = Field(default=(-1.0, 1.0))
    strict: Annotated[bool, Field(default=False)]


class Settings(BaseSettings):
    base_dir: Path = Path(__file__).resolve().parent.parent.parent

    debug: Annotated[bool, Field(default=False)]
    log_level: Annotated[str, Field(default="INFO")]
    project_name: Annotated[str, Field(default="arc-imaging")]
    version: Annotated[str, Field(default=__version__)]

    output_dir: Annotated[Path, Field(default=Path("artifacts"))]
    workers: Annotated[int, Field(default=4, ge=1)]
    rank_threshold: Annotated[float, Field(default=0.05, gt=0, le=1)]

    numerics: Annotated[NumericsConfig, Field(default_factory=NumericsConfig)]
    imaging: Annotated[ImagingConfig, Field(default_factory=ImagingConfig)]

    model_config = SettingsConfigDict(
        env_prefix="ARCIMAGING_",
        env_file=str(base_dir / ".env"),
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
        env_nested_delimiter="__",
    )


env_json = os.environ.get("ARCIMAGING_ENV")

if env_json:
    try:
        payload = json.loads(env_json)
    except Exception as e:
        raise RuntimeError(f"ARCIMAGING_ENV is not valid JSON: {e}")
    settings = Settings(**payload)
else:
    settings = Settings()
