import csv
import io
import logging
import os
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any, Self

import orjson
from pydantic import BaseModel

from src.core.exceptions import ArtifactError
from src.core.models.base import ArtifactMetadata

logger = logging.getLogger(__name__)

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_SORT_KEYS


def format_float(value: float) -> str:
    return repr(float(value))


class BaseArtifactRepository[T]:
    """Writes artifacts of one kind below an output directory.

    Every path written since the last `commit` is remembered so a failed run can
    `rollback` and leave no partial output behind. Files a run replaces are kept
    aside until `commit` and put back by `rollback`.
    """

    def __init__(self, root: Path | None = None):
        self.root = root
        self.written: list[Path] = []
        self.replaced: dict[Path, Path] = {}

    def bind(self, root: Path) -> Self:
        self.root = Path(root)
        self.written = []
        self.replaced = {}
        return self

    def path(self, name: str) -> Path:
        if self.root is None:
            raise ArtifactError(f"{type(self).__name__} is not bound to an output directory")
        return self.root / name

    def _write(self, name: str, data: bytes) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_name(f".{target.name}.tmp")

        try:
            tmp.write_bytes(data)
            if target.exists() and target not in self.replaced and target not in self.written:
                backup = target.with_name(f".{target.name}.bak")
                os.replace(target, backup)
                self.replaced[target] = backup
            os.replace(tmp, target)
        except OSError as e:
            tmp.unlink(missing_ok=True)
            raise ArtifactError(f"Cannot write {target}: {e}")

        self.written.append(target)
        logger.debug("Wrote %s (%d bytes)", target, len(data))
        return target

    def write_bytes(self, name: str, data: bytes) -> Path:
        return self._write(name, data)

    def write_json(self, name: str, payload: BaseModel | dict[str, Any]) -> Path:
        if isinstance(payload, BaseModel):
            payload = payload.model_dump(mode="json", by_alias=True)
        return self._write(name, orjson.dumps(payload, option=JSON_OPTIONS) + b"\n")

    def write_csv(
        self,
        name: str,
        header: Sequence[str],
        rows: Iterable[Sequence[Any]],
        metadata: ArtifactMetadata | None = None,
    ) -> Path:
        buffer = io.StringIO()
        if metadata is not None:
            for line in metadata.header_lines():
                buffer.write(f"# {line}\n")

        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_float(v) if isinstance(v, float) else v for v in row])

        return self._write(name, buffer.getvalue().encode("utf-8"))

    def read_bytes(self, path: Path) -> bytes:
        try:
            return Path(path).read_bytes()
        except OSError as e:
            raise ArtifactError(f"Cannot read {path}: {e}")

    def commit(self) -> list[Path]:
        for backup in self.replaced.values():
            backup.unlink(missing_ok=True)
        written, self.written, self.replaced = self.written, [], {}
        return list(dict.fromkeys(written))

    def rollback(self) -> None:
        for path in reversed(self.written):
            path.unlink(missing_ok=True)
            logger.info("Removed partial artifact %s", path)
        for target, backup in self.replaced.items():
            os.replace(backup, target)
            logger.info("Restored %s", target)
        self.written, self.replaced = [], {}

    def save(self, name: str, item: T, metadata: ArtifactMetadata) -> Path:
        raise NotImplementedError
