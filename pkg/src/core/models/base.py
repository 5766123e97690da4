import hashlib
from typing import Any

import orjson
from pydantic import BaseModel, ConfigDict, Field


class Base(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)


class ArtifactMetadata(Base):
    config_hash: str
    seed: int | None = Field(default=None)
    version: str

    def header_lines(self) -> list[str]:
        return [f"config_hash={self.config_hash}", f"seed={self.seed}", f"version={self.version}"]


def config_hash(payload: dict[str, Any]) -> str:
    data = orjson.dumps(payload, option=orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY)
    return hashlib.sha256(data).hexdigest()[:16]
