"""
Nodal-domain counting on rectangles of the upper half plane and the
inert-domain lower bound from sign changes on the reflection locus
"""

import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from maasslab.core.config import settings
from maasslab.core.errors import DomainError, SpacingTooCoarseError
from maasslab.models.form import MaassForm
from maasslab.models.nodal import BS_TARGET, NodalLocus, NodalReport, SignGrid
from maasslab.services.maass_form import phi_row
from maasslab.services.oscillation import count_sign_changes
from maasslab.services.segments import SegmentFunction, unit_arc, vertical
from maasslab.tasks.pool import parallel_map

logger = logging.getLogger(__name__)

Rect = Tuple[float, float, float, float]

ROW_TOL = 1e-12
REFINEMENT_TOLERANCE = 0.02


def _row_signs(values: np.ndarray) -> np.ndarray:
    rms = float(np.sqrt(np.mean(values * values))) if values.size else 0.0
    signs = np.sign(values)
    signs[np.abs(values) < settings.NODAL_ZERO_FRACTION * rms] = 0
    return signs.astype(np.int8)


def _cell_centres(lo: float, hi: float, count: int) -> np.ndarray:
    return lo + (np.arange(count) + 0.5) * (hi - lo) / count


def _check_rect(rect: Rect, half_plane: bool = True) -> None:
    x0, x1, y0, y1 = rect
    if not (x1 > x0 and y1 > y0):
        raise DomainError(f"rectangle must satisfy x0 < x1 and y0 < y1, got {rect}")
    if half_plane and not y0 > 0:
        raise DomainError(f"rectangle must lie in the upper half plane, got {rect}")


def oscillation_scale(form: MaassForm, rect: Rect) -> float:
    """Finest local wavelength 2 pi y0 / t on the rectangle"""
    return 2.0 * math.pi * rect[2] / form.t


def sample_function_grid(
    fn: Callable[[np.ndarray, float], np.ndarray],
    rect: Rect,
    nx: int,
    ny: int,
    scale: Optional[float] = None,
    workers: Optional[int] = None,
) -> SignGrid:
    """
    Sign grid of a field fn(xs, y) evaluated row by row

    Raises:
        SpacingTooCoarseError: spacing above scale / 10 when a scale is given
    """
    _check_rect(rect, half_plane=False)
    x0, x1, y0, y1 = rect
    if scale is not None:
        step = max((x1 - x0) / nx, (y1 - y0) / ny)
        if step > scale / 10.0:
            raise SpacingTooCoarseError(
                f"grid spacing {step:.4g} exceeds a tenth of the oscillation scale {scale:.4g}"
            )
    xs = _cell_centres(x0, x1, nx)
    rows = parallel_map(lambda y: _row_signs(np.asarray(fn(xs, float(y)), dtype=float)),
                        _cell_centres(y0, y1, ny), workers)
    return SignGrid(rect=tuple(rect), nx=nx, ny=ny, signs=np.stack(rows, axis=1))


def sample_grid(form: MaassForm, rect: Rect, nx: int, ny: int, workers: Optional[int] = None) -> SignGrid:
    """Sign grid of phi on rect; one worker item per horizontal row"""
    _check_rect(rect)
    return sample_function_grid(
        lambda xs, y: phi_row(form, xs, y, ROW_TOL), rect, nx, ny,
        scale=oscillation_scale(form, rect), workers=workers,
    )


def count_components(grid: SignGrid) -> int:
    """4-connected components of equal nonzero sign; zero cells belong to none"""
    signs = grid.signs
    index = np.arange(signs.size).reshape(signs.shape)
    rows, cols = [], []
    for a, b, sa, sb in (
        (index[:-1, :], index[1:, :], signs[:-1, :], signs[1:, :]),
        (index[:, :-1], index[:, 1:], signs[:, :-1], signs[:, 1:]),
    ):
        joined = (sa == sb) & (sa != 0)
        rows.append(a[joined])
        cols.append(b[joined])
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols)), shape=(signs.size, signs.size))
    _, labels = connected_components(graph, directed=False)
    return int(np.unique(labels[signs.ravel() != 0]).size)


def inert_bound(segment: SegmentFunction) -> int:
    """1 + ceil(K / 2) for K sign changes on a piece of the reflection locus"""
    return 1 + int(math.ceil(count_sign_changes(segment) / 2.0))


def locus_segment(form: MaassForm, locus: NodalLocus, interval: Tuple[float, float]) -> SegmentFunction:
    """
    The form restricted to a piece of the reflection locus

    delta1 and delta2 take a height interval; delta3 takes an angle interval
    inside [pi/2, 2 pi/3].
    """
    lo, hi = interval
    if not hi > lo:
        raise DomainError(f"locus interval must be increasing, got {interval}")
    if locus == NodalLocus.DELTA1:
        return vertical(form, 0.0, lo, hi - lo)
    if locus == NodalLocus.DELTA2:
        return vertical(form, 0.5, lo, hi - lo)
    return unit_arc(form, lo, hi)


def inert_lower_bound(form: MaassForm, locus: NodalLocus, interval: Tuple[float, float]) -> int:
    return inert_bound(locus_segment(form, NodalLocus(locus), interval))


def _rect_inert_bound(form: MaassForm, rect: Rect) -> int:
    x0, x1, y0, y1 = rect
    bounds = [0]
    if x0 <= 0.0 <= x1:
        bounds.append(inert_lower_bound(form, NodalLocus.DELTA1, (y0, y1)))
    if x0 <= 0.5 <= x1:
        bounds.append(inert_lower_bound(form, NodalLocus.DELTA2, (y0, y1)))
    return max(bounds)


def grid_shape(form: MaassForm, rect: Rect, resolution: int) -> Tuple[int, int]:
    """Cells per axis at resolution points per unit length, raised to the spacing floor"""
    x0, x1, y0, y1 = rect
    floor = 10.0 / oscillation_scale(form, rect)
    density = max(float(resolution), floor)
    return int(math.ceil(density * (x1 - x0))), int(math.ceil(density * (y1 - y0)))


def nodal_report(
    form: MaassForm,
    rect: Rect,
    resolution: int,
    refine: bool = True,
    workers: Optional[int] = None,
) -> NodalReport:
    """
    Component count on rect with the Courant and Bogomolny-Schmit comparisons

    With refine set, the count is repeated at twice the resolution; a
    relative change above two percent is logged, not raised.
    """
    _check_rect(rect)
    if resolution < 1:
        raise DomainError(f"resolution must be positive, got {resolution}")
    nx, ny = grid_shape(form, rect, resolution)
    count = count_components(sample_grid(form, rect, nx, ny, workers))

    refined, stable = None, None
    if refine:
        refined = count_components(sample_grid(form, rect, 2 * nx, 2 * ny, workers))
        stable = abs(refined - count) <= REFINEMENT_TOLERANCE * max(count, 1)
        if not stable:
            logger.warning(f"nodal count moved from {count} to {refined} under refinement of {rect}")

    budget = form.weyl_index
    courant_ok = count <= budget * (1.0 + settings.NODAL_COURANT_SLACK)
    if not courant_ok:
        logger.warning(f"{count} components exceed the Courant budget {budget:.3f} on {rect}")

    report = NodalReport(
        rect=tuple(rect), nx=nx, ny=ny, component_count=count, refined_count=refined,
        refinement_stable=stable, inert_lower_bound=_rect_inert_bound(form, rect),
        courant_budget=budget, courant_ok=courant_ok, bs_ratio=count / budget, bs_target=BS_TARGET,
    )
    logger.info(f"nodal report for t={form.t} on {rect}: {count} components, bs_ratio={report.bs_ratio:.4f}")
    return report


def sign_grid_frame(grid: SignGrid) -> pd.DataFrame:
    """Long-format frame with columns x, y, sign for plotting"""
    X, Y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
    return pd.DataFrame({"x": X.ravel(), "y": Y.ravel(), "sign": grid.signs.ravel().astype(int)})
