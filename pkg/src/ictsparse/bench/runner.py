"""Sweep every (dataset, algorithm, lambda) cell and collect metrics."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..dictionary import build_overcomplete_dct
from ..metrics import MetricsRecord, mse, psnr_from_mse
from ..patches import extract_patches, reconstruct_from_patches
from ..solver import Cauchy, DivergenceError, Hard, SolverConfig, Soft, sparse_code
from .config import ExperimentConfig

log = logging.getLogger(__name__)


@dataclass
class SweepResult:
    records: list[MetricsRecord] = field(default_factory=list)
    config: ExperimentConfig | None = None

    def groups(self) -> dict[tuple[str, str], list[MetricsRecord]]:
        out: dict[tuple[str, str], list[MetricsRecord]] = {}
        for r in self.records:
            out.setdefault((r.dataset, r.algorithm), []).append(r)
        return out

    def best_psnr(self) -> list[MetricsRecord]:
        """Highest-PSNR cell per (dataset, algorithm); first in grid order on ties."""
        rows = []
        for recs in self.groups().values():
            ok = [r for r in recs if not r.failed]
            if ok:
                rows.append(max(ok, key=lambda r: r.psnr_db))
        return rows

    def sparsest(self) -> list[MetricsRecord]:
        """Fewest non-zeros per (dataset, algorithm), ignoring all-zero codings.

        Ties go to the higher PSNR. A group whose every cell codes to zero
        reports its first such cell.
        """
        rows = []
        for recs in self.groups().values():
            ok = [r for r in recs if not r.failed]
            if not ok:
                continue
            live = [r for r in ok if r.percent_nonzero > 0] or ok
            rows.append(min(live, key=lambda r: (r.percent_nonzero, -r.psnr_db)))
        return rows


def make_penalty(algorithm: str, lam: float, config: ExperimentConfig):
    # Hard and soft thresholds are swept directly as lambda.
    if algorithm == "IHT":
        return Hard(lam)
    if algorithm == "IST":
        return Soft(lam)
    return Cauchy(lam, config.gamma, config.root_policy)


def _code_chunks(patches, dictionary, penalty, solver_cfg, chunk_size, pool):
    # Fixed chunk boundaries keep results independent of the thread count.
    bounds = [(s, min(s + chunk_size, patches.shape[1]))
              for s in range(0, patches.shape[1], chunk_size)]

    def work(b):
        return sparse_code(patches[:, b[0]:b[1]], dictionary, penalty, solver_cfg)

    results = list(pool.map(work, bounds)) if pool else [work(b) for b in bounds]
    coeffs = np.concatenate([r.coefficients for r in results], axis=1)
    return coeffs, max(r.iterations_run for r in results)


def run_dataset(name, images, config: ExperimentConfig, dictionary, pool=None):
    patchsets = [extract_patches(img, config.patch_edge, config.stride) for img in images]
    sizes = [len(ps) for ps in patchsets]
    splits = np.cumsum(sizes)[:-1]
    all_patches = np.concatenate([ps.patches for ps in patchsets], axis=1)
    solver_cfg = SolverConfig(step_size=config.eta, max_iterations=config.iterations,
                              shrink_scaling=config.shrink_scaling,
                              epsilon_zero=config.epsilon_zero)
    records = []
    for algorithm in config.algorithms:
        for lam in config.lambda_grid:
            penalty = make_penalty(algorithm, lam, config)
            try:
                coeffs, iters = _code_chunks(all_patches, dictionary, penalty, solver_cfg,
                                             config.chunk_size, pool)
            except DivergenceError as exc:
                log.warning("%s %s lambda=%g failed: %s", name, algorithm, lam, exc)
                records.append(MetricsRecord(name, algorithm, lam, float("nan"), float("nan"),
                                             float("nan"), exc.iteration, failed=True,
                                             note=f"diverged at iteration {exc.iteration}"))
                continue
            psnrs, mses, nzs = [], [], []
            for img, ps, block in zip(images, patchsets, np.split(coeffs, splits, axis=1)):
                rec = reconstruct_from_patches(ps, dictionary.apply(block), peak=img.peak)
                err = mse(img, rec)
                mses.append(err)
                psnrs.append(psnr_from_mse(err, img.peak))
                nzs.append(100.0 * np.count_nonzero(np.abs(block) > config.epsilon_zero) / block.size)
            records.append(MetricsRecord(name, algorithm, lam, float(np.mean(psnrs)),
                                         float(np.mean(mses)), float(np.mean(nzs)), iters))
            log.info("%s %s lambda=%.3g psnr=%.2f nz=%.2f%%", name, algorithm, lam,
                     records[-1].psnr_db, records[-1].percent_nonzero)
    return records


def run_experiment(config: ExperimentConfig) -> SweepResult:
    """Run the full sweep; deterministic for a given config."""
    config.validate()
    dictionary = build_overcomplete_dct(config.patch_edge, config.atoms_per_axis)
    result = SweepResult(config=config)
    pool = ThreadPoolExecutor(config.threads) if config.threads > 1 else None
    try:
        for spec in config.datasets:
            images = spec.load()
            if not images:
                log.warning("dataset %s is empty; skipped", spec.name)
                continue
            result.records.extend(run_dataset(spec.name, images, config, dictionary, pool))
    finally:
        if pool:
            pool.shutdown()
    return result
