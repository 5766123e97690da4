import logging
import math
from pathlib import Path
from typing import Any

import orjson
from pydantic import ValidationError

from src import __version__
from src.app.analytic.repository.analytic import AnalyticRepository
from src.app.analytic.schema.analytic import AppendixReport, IdentitySummary, SweepSpec
from src.app.analytic.service.structure import compare_structure
from src.app.analytic.service.verification import appendix_checks, run_sweep
from src.app.experiment.schema.experiment import (
    PRESETS,
    ExperimentConfig,
    PartialExperimentConfig,
    RunSummary,
    SchemeResult,
)
from src.app.forward.schema.forward import SolverMode, WaveContext
from src.app.geometry.service.geometry import arc_from_spec, sample_arc
from src.app.imaging.repository.imaging import ImageRepository
from src.app.imaging.schema.imaging import NormalSchemeSpec
from src.app.imaging.service.imaging import contrast, imaging_map, resolve_scheme
from src.app.msr.repository.msr import MsrRepository
from src.app.msr.schema.msr import MsrMatrix
from src.app.msr.service.msr import add_awgn, assemble, make_directions
from src.app.spectral.repository.spectral import SpectrumRepository
from src.app.spectral.service.spectral import decompose, select_rank
from src.core.exceptions import ConfigurationError
from src.core.models.base import ArtifactMetadata, config_hash
from src.core.models.repository import BaseArtifactRepository
from src.core.utils.pydantichelper import merge_partial
from src.core.utils.rng import derive_seed

logger = logging.getLogger(__name__)


def _line_of(text: str, loc: tuple[Any, ...]) -> int | None:
    """1-based line of the deepest key of `loc` that appears in `text`."""
    for key in reversed(loc):
        if isinstance(key, str):
            index = text.find(f'"{key}"')
            if index >= 0:
                return text.count("\n", 0, index) + 1
    return None


def _describe(error: ValidationError, source: str, text: str | None) -> str:
    lines = []
    for detail in error.errors():
        loc = tuple(detail["loc"])
        line = _line_of(text, loc) if text else None
        where = f"{source}:{line}" if line else source
        lines.append(f"{where}: {'.'.join(map(str, loc)) or '<root>'}: {detail['msg']}")
    return "\n".join(lines)


class ExperimentService:
    def __init__(
        self,
        msr_repo: MsrRepository,
        spectrum_repo: SpectrumRepository,
        image_repo: ImageRepository,
        analytic_repo: AnalyticRepository,
    ):
        self.msr_repo = msr_repo
        self.spectrum_repo = spectrum_repo
        self.image_repo = image_repo
        self.analytic_repo = analytic_repo

    @property
    def repositories(self) -> list[BaseArtifactRepository]:
        return [self.msr_repo, self.spectrum_repo, self.image_repo, self.analytic_repo]

    def load_config(
        self,
        path: Path | None = None,
        preset: str | None = None,
        overrides: dict[str, Any] | None = None,
    ) -> ExperimentConfig:
        """Preset, then config file, then CLI overrides; every layer is validated."""
        payload: dict[str, Any] = {}
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigurationError(f"Unknown preset '{preset}', expected one of {sorted(PRESETS)}")
            payload = dict(PRESETS[preset])

        text = None
        source = "<preset>" if preset else "<defaults>"
        if path is not None:
            source = str(path)
            try:
                text = Path(path).read_text(encoding="utf-8")
                loaded = orjson.loads(text)
            except OSError as e:
                raise ConfigurationError(f"Cannot read config {path}: {e}")
            except orjson.JSONDecodeError as e:
                raise ConfigurationError(f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}")
            if not isinstance(loaded, dict):
                raise ConfigurationError(f"{path}:1: config must be a JSON object")
            payload |= loaded

        try:
            config = ExperimentConfig.model_validate(payload)
        except ValidationError as e:
            raise ConfigurationError(_describe(e, source, text))

        if overrides:
            try:
                config = merge_partial(config, PartialExperimentConfig.model_validate(overrides))
            except ValidationError as e:
                raise ConfigurationError(_describe(e, "<command line>", None))

        logger.debug("Loaded experiment config from %s: %s", source, config.model_dump(mode="json", by_alias=True))
        return config

    def metadata(self, config: ExperimentConfig) -> ArtifactMetadata:
        return ArtifactMetadata(
            config_hash=config_hash(config.model_dump(mode="json", by_alias=True, exclude={"output_dir"})),
            seed=config.seed,
            version=__version__,
        )

    def _bind(self, root: Path) -> None:
        for repo in self.repositories:
            repo.bind(root)

    def _rollback(self) -> None:
        for repo in self.repositories:
            repo.rollback()

    def _commit(self) -> list[str]:
        return sorted(str(p) for repo in self.repositories for p in repo.commit())

    def build_msr(self, config: ExperimentConfig) -> MsrMatrix:
        arc = arc_from_spec(config.arc)
        ctx = WaveContext.from_wavelength(config.wavelength)
        dirs = make_directions(config.n)

        matrix = assemble(arc, dirs, ctx, config.mode, config.nodes)
        if config.snr_db is not None:
            matrix = add_awgn(matrix, config.snr_db, derive_seed(config.seed, "awgn"))
        return matrix

    def export_msr(self, config: ExperimentConfig, name: str = "msr.json") -> Path:
        self._bind(config.output_dir)
        try:
            path = self.msr_repo.save(name, self.build_msr(config), self.metadata(config))
        except Exception:
            self._rollback()
            raise
        self._commit()
        return path

    def run(self, config: ExperimentConfig) -> RunSummary:
        """Forward data, noise, SVD and one image per scheme, written below `config.output_dir`.

        A failure at any stage removes every file this run wrote.
        """
        self._bind(config.output_dir)
        try:
            summary = self._run(config)
        except Exception:
            logger.error("Experiment failed, removing partial artifacts", exc_info=True)
            self._rollback()
            raise

        artifacts = self._commit()
        return summary.model_copy(update={"artifacts": artifacts})

    def _run(self, config: ExperimentConfig) -> RunSummary:
        meta = self.metadata(config)
        arc = arc_from_spec(config.arc)
        ctx = WaveContext.from_wavelength(config.wavelength)
        logger.info(
            "Running %s arc: N=%d, lambda=%g, mode=%s, snr=%s dB, seed=%d",
            arc.label,
            config.n,
            config.wavelength,
            config.mode.value,
            config.snr_db,
            config.seed,
        )

        matrix = self.build_msr(config)
        dirs = matrix.directions
        self.msr_repo.save("msr.json", matrix, meta)
        logger.info("MSR matrix assembled (%dx%d)", dirs.count, dirs.count)

        basis = select_rank(decompose(matrix), config.rank)
        self.spectrum_repo.save("spectrum.csv", basis, meta)
        logger.info("Signal rank M=%d (sigma_1=%.4e)", basis.signal_rank, basis.singular_values[0])

        synthetic = config.mode in (SolverMode.KIRCHHOFF, SolverMode.ASYMPTOTIC) and config.snr_db in (None, math.inf)
        compare = config.compare_structure and synthetic
        needs_sample = compare or any(isinstance(s, NormalSchemeSpec) for s in config.schemes)
        sample = sample_arc(arc, ctx.wavelength) if needs_sample else None

        results = []
        for spec in config.schemes:
            image = imaging_map(basis, dirs, ctx, resolve_scheme(spec, sample), config.grid, label=spec.name)
            stats = contrast(image, arc, ctx)
            name = f"image_{spec.name}"
            self.image_repo.save(name, image, meta, stats)
            artifacts = [f"{name}.csv", f"{name}.pgm", f"{name}.json"]

            if compare:
                report = compare_structure(image, sample, ctx, spec)
                self.analytic_repo.save_report(f"structure_{spec.name}.json", report, meta)
                artifacts.append(f"structure_{spec.name}.json")

            logger.info("Scheme %s: contrast %.4g, argmax %.3g from the arc", spec.name, stats.ratio, stats.argmax_distance)
            results.append(SchemeResult(scheme=spec.name, contrast=stats, artifacts=artifacts))

        self.image_repo.write_json(
            "contrast.json",
            {"metadata": meta.model_dump(), "schemes": {r.scheme: r.contrast.model_dump(mode="json") for r in results}},
        )

        identities = appendix = None
        if config.verify_identities:
            identities, appendix = self.verify_identities(SweepSpec(seed=config.seed, wavelength=config.wavelength), meta)

        summary = RunSummary(
            metadata=meta,
            n=config.n,
            wavelength=config.wavelength,
            mode=config.mode,
            snr_db=config.snr_db,
            noise_seed=matrix.seed,
            signal_rank=basis.signal_rank,
            singular_values=basis.singular_values.tolist(),
            schemes=results,
            identities=identities,
            appendix=appendix,
            artifacts=[],
        )
        self.analytic_repo.write_json("summary.json", summary)
        return summary

    def verify_identities(
        self, spec: SweepSpec, meta: ArtifactMetadata | None = None
    ) -> tuple[IdentitySummary, AppendixReport]:
        """Identity sweep and appendix integrals; the caller binds the repositories."""
        meta = meta or ArtifactMetadata(
            config_hash=config_hash(spec.model_dump(mode="json")), seed=spec.seed, version=__version__
        )

        reports, summary = run_sweep(spec)
        appendix = appendix_checks(seed=spec.seed)
        self.analytic_repo.save("identities.csv", reports, meta)
        self.analytic_repo.save_report("identities.json", summary, meta)
        self.analytic_repo.save_report("appendix.json", appendix, meta)

        logger.info(
            "Identity sweep: %d rows, max |sum - quad| at N=%d: %.3e, passed=%s",
            summary.rows,
            summary.n_max,
            summary.max_lhs_vs_quadrature,
            summary.passed and appendix.passed,
        )
        return summary, appendix

    def run_verification(self, spec: SweepSpec, output_dir: Path) -> tuple[IdentitySummary, AppendixReport]:
        self._bind(output_dir)
        try:
            result = self.verify_identities(spec)
        except Exception:
            self._rollback()
            raise
        self._commit()
        return result
