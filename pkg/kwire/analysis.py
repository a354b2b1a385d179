"""Shape analysis of sweep results: sign structure, crossings, monotonicity, mirror symmetry."""

import math
from typing import Optional

import numpy as np

DEFAULT_NOISE_FACTOR = 10.0


def _significant(values: np.ndarray, errors: Optional[np.ndarray], noise_factor: float) -> np.ndarray:
    """Mask of finite values whose magnitude exceeds noise_factor * est_error."""
    finite = np.isfinite(values)
    if errors is None:
        return finite & (values != 0)
    errors = np.asarray(errors, dtype=float)
    return finite & np.isfinite(errors) & (np.abs(values) > noise_factor * errors)


def sign_changes(values, errors=None, noise_factor: float = DEFAULT_NOISE_FACTOR) -> int:
    """Number of sign flips between consecutive significant values."""
    values = np.asarray(values, dtype=float)
    kept = values[_significant(values, errors, noise_factor)]
    if kept.size < 2:
        return 0
    signs = np.sign(kept)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def first_zero_crossing(xs, values, errors=None,
                        noise_factor: float = DEFAULT_NOISE_FACTOR) -> Optional[float]:
    """Linearly interpolated location of the first sign change, or None.

    Only significant values take part, so roundoff around an exact zero
    (an equilibrium correlation at eV=0, say) is not a crossing.
    """
    xs = np.asarray(xs, dtype=float)
    values = np.asarray(values, dtype=float)
    kept = np.flatnonzero(_significant(values, errors, noise_factor))
    for a, b in zip(kept, kept[1:]):
        v0, v1 = values[a], values[b]
        if (v0 > 0) != (v1 > 0):
            return float(xs[a] - v0 * (xs[b] - xs[a]) / (v1 - v0))
    return None


def is_nondecreasing(values, errors=None) -> bool:
    """True when no step drops by more than the summed est_error of its ends."""
    values = np.asarray(values, dtype=float)
    slack = np.zeros(len(values)) if errors is None else np.nan_to_num(np.asarray(errors, dtype=float))
    drops = values[:-1] - values[1:]
    return bool(np.all(drops <= slack[:-1] + slack[1:]))


def is_monotonic(values) -> bool:
    diffs = np.diff(np.asarray(values, dtype=float))
    return bool(np.all(diffs >= 0) or np.all(diffs <= 0))


def mirror_correlation(values) -> float:
    """Pearson coefficient between a profile and its spatial mirror."""
    values = np.asarray(values, dtype=float)
    if values.size < 2 or np.allclose(values, values[0]):
        return math.nan
    return float(np.corrcoef(values, values[::-1])[0, 1])


def net_enhancement(profile, baseline) -> dict:
    """Mirrored-pair sums of C(eV) - C(0) over a position profile.

    pair_sums[k] pairs row k with its mirror row n-1-k; `total` is the
    enhancement summed over the whole wire and `ratio` compares it with the
    largest single-row enhancement.
    """
    enhancement = np.asarray(profile, dtype=float) - np.asarray(baseline, dtype=float)
    n = enhancement.size
    pair_sums = enhancement[: (n + 1) // 2] + enhancement[::-1][: (n + 1) // 2]
    amplitude = float(np.max(np.abs(enhancement))) if n else 0.0
    total = float(np.sum(enhancement))
    return {
        "pair_sums": pair_sums.tolist(),
        "total": total,
        "amplitude": amplitude,
        "ratio": abs(total) / (n * amplitude) if amplitude > 0 else 0.0,
    }


def summarize_sweep(result) -> dict:
    """Summary block for a SweepResult, shaped by its kind."""
    values = result.values
    errors = result.errors
    finite = values[np.isfinite(values)]
    summary = {
        "kind": result.kind,
        "rows": len(result.rows),
        "failed": len(result.failed),
        "max_abs": float(np.max(np.abs(finite))) if finite.size else math.nan,
        "max_est_error": float(np.nanmax(errors)) if np.isfinite(errors).any() else math.nan,
    }
    if result.kind in ("bias", "distance", "position"):
        summary["sign_changes"] = sign_changes(values, errors)
        summary["monotonic"] = is_monotonic(finite)
    if result.kind == "bias":
        summary["first_zero_crossing"] = first_zero_crossing(result.xs, values, errors)
    if result.kind == "position":
        summary["mirror_correlation"] = mirror_correlation(values)
    if result.kind == "iv":
        summary["nondecreasing"] = is_nondecreasing(values, errors)
    return summary
