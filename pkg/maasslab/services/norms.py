"""
Norms of Maass forms: horocycle Parseval identities, Lp norms over the
fundamental domain, the geodesic L2 integral and the range decomposition
behind the L4 bound
"""

import logging
import math
from typing import Dict, List, Tuple

import numpy as np

from maasslab.core.config import settings
from maasslab.core.errors import DomainError, HeightOutOfRangeError
from maasslab.core.quadrature import adaptive_integral, adaptive_vector_integral, periodic_nodes
from maasslab.models.form import HeckeTable, MaassForm
from maasslab.models.norms import HorocycleParseval, NormResult, RangeLabel, RangePiece
from maasslab.services.bessel import phase_H_array, scaled_K_array
from maasslab.services.domain import FundamentalDomainQuadrature
from maasslab.services.maass_form import (
    Phi_row,
    fourier_row,
    phi_row,
    sup_bound,
    truncation_length,
    turning_heights,
)

logger = logging.getLogger(__name__)

ROW_TOL = 1e-13


def horocycle_l2_direct(form: MaassForm, y: float, grid_size: int = None) -> float:
    """
    int_{-1/2}^{1/2} Phi(x + iy)^2 dx by the periodic trapezoid rule

    The rule is exact once grid_size exceeds twice the truncation length;
    grids at or below four times the truncation length are logged as under-resolved.
    """
    count = truncation_length(form, y, ROW_TOL)
    grid_size = grid_size or max(64, 8 * count)
    if grid_size <= 4 * count:
        logger.warning(f"horocycle grid {grid_size} under-resolves {count} Fourier modes at y={y}")
    values = Phi_row(form, periodic_nodes(grid_size), y, ROW_TOL)
    return float(np.mean(values * values))


def horocycle_l2_parseval(form: MaassForm, y: float) -> float:
    """2 sum lambda(n)^2 (e^{pi t/2} K_{it}(2 pi n y))^2"""
    coefficients, _ = fourier_row(form, y, ROW_TOL)
    return 2.0 * math.fsum(coefficients * coefficients)


def horocycle_l2_mainterm(form: MaassForm, y: float) -> HorocycleParseval:
    """
    Main term 2 pi sum_{0 < |n| <= (t - Delta)/(2 pi y)} lambda(n)^2 sin^2(pi/4 + t H) / sqrt(t^2 - (2 pi n y)^2)

    Raises:
        HeightOutOfRangeError: y <= 1/2
    """
    t = form.t
    if not y > 0.5:
        raise HeightOutOfRangeError(f"horocycle height must exceed 1/2, got {y}")
    in_range = y <= t / (2.0 * math.pi)
    if not in_range:
        logger.info(f"height {y} is above t/(2 pi); the main term window is empty")

    delta = t ** (1.0 / 3.0) * math.log(t)
    top = int(math.floor((t - delta) / (2.0 * math.pi * y)))
    main = 0.0
    if top >= 1:
        n = np.arange(1, top + 1)
        u = 2.0 * math.pi * n * y
        lam = form.hecke.head(top)
        phase = 0.25 * math.pi + t * phase_H_array(u / t)
        terms = lam ** 2 * np.sin(phase) ** 2 / np.sqrt((t - u) * (t + u))
        main = 4.0 * math.pi * math.fsum(terms)

    exponent = 2.0 * settings.HECKE_THETA - 2.0 / 3.0 + settings.PARSEVAL_EPS
    budget = settings.PARSEVAL_CONSTANT * t ** exponent * (delta / y + 1.0)
    return HorocycleParseval(y=y, main_term=main, error_budget=budget, delta=delta, in_claimed_range=in_range)


def coefficient_tail_bound(form: MaassForm, y_max: float, p: float, step: float = 0.25) -> float:
    """
    Bound for int_{y > y_max} sup_x |phi|^p dy / y^2

    Uses the kernel majorant, which is decreasing in y once 2 pi y_max exceeds
    the transition zone; the sqrt(y) growth inside each step is absorbed by
    the step endpoint factor.
    """
    t = form.t
    if 2.0 * math.pi * y_max <= t + settings.BESSEL_CUTOFF * t ** (1.0 / 3.0):
        logger.warning(f"y_max={y_max} is below the exponential regime of t={t}; tail bound is heuristic")
    total = []
    y = y_max
    while True:
        bound = sup_bound(form, y) * math.sqrt((y + step) / y)
        piece = bound ** p * step / (y * y)
        total.append(piece)
        if piece < 1e-30 or len(total) > 10_000:
            break
        y += step
    return math.fsum(total)


def _lp_integral(form: MaassForm, p: float, y_max: float, quad_order: int) -> Tuple[float, float, float]:
    lowest = math.sqrt(3.0) / 2.0
    modes = truncation_length(form, lowest, ROW_TOL)
    x_count = max(quad_order, int(math.ceil(p * modes)) + 8)

    def integrand(xs: np.ndarray, y: float) -> np.ndarray:
        return np.abs(phi_row(form, xs, y, ROW_TOL)) ** p

    quadrature = FundamentalDomainQuadrature(
        x_count=x_count,
        cap_order=max(quad_order, 2 * int(math.ceil(p * modes))),
        breakpoints=turning_heights(form.t, 1.0, y_max),
    )
    result = quadrature.integrate(integrand, y_max=y_max)
    tail = coefficient_tail_bound(form, y_max, p)
    return result.value, tail, result.error_estimate


def lp_norm(form: MaassForm, p: float, y_max: float = None, quad_order: int = None) -> NormResult:
    """(int_F |phi|^p dmu)^{1/p}, with the certified y > y_max tail added"""
    if not p >= 1:
        raise DomainError(f"p must be at least 1, got {p}")
    y_max = y_max or settings.DEFAULT_Y_MAX
    quad_order = quad_order or settings.QUAD_ORDER
    integral, tail, error = _lp_integral(form, p, y_max, quad_order)
    logger.info(f"L{p} integral for t={form.t}: {integral:.10g} (tail {tail:.2e})")
    return NormResult(
        p=p, value=(integral + tail) ** (1.0 / p), integral=integral, tail_bound=tail,
        y_max=y_max, quad_order=quad_order, error_estimate=error,
    )


def l4_norm(form: MaassForm, y_max: float = None, quad_order: int = None) -> NormResult:
    """int_F phi^4 dmu; value is the fourth power of lp_norm(form, 4)"""
    result = lp_norm(form, 4.0, y_max, quad_order)
    return result.model_copy(update={"value": result.integral + result.tail_bound})


def normalization_constant(t: float, hecke: HeckeTable, y_max: float = None) -> float:
    """rho_one with int_F phi^2 dmu = 1"""
    provisional = MaassForm(t=t, hecke=hecke, rho_one=1.0)
    integral, tail, _ = _lp_integral(provisional, 2.0, y_max or settings.DEFAULT_Y_MAX, settings.QUAD_ORDER)
    return (integral + tail) ** -0.5


def normalize_form(t: float, hecke: HeckeTable) -> MaassForm:
    return MaassForm(t=t, hecke=hecke, rho_one=normalization_constant(t, hecke))


def geodesic_l2(form: MaassForm, a: float, b: float) -> float:
    """int_a^b phi(iy)^2 dy / y along the imaginary axis"""
    if not 0 < a < b:
        raise DomainError(f"geodesic segment needs 0 < a < b, got a={a}, b={b}")

    def integrand(y: float) -> float:
        value = phi_row(form, [0.0], y, ROW_TOL)[0]
        return value * value / y

    value, _ = adaptive_integral(integrand, a, b, breakpoints=turning_heights(form.t, a, b), epsabs=1e-12)
    return value


def l_epsilon(eps: float) -> int:
    """Integer l with 1 - eps(l + 1) >= eps + 1/3 > 1 - eps(l + 2)"""
    if not 0 < eps < 1.0 / 3.0:
        raise DomainError(f"range decomposition needs 0 < eps < 1/3, got {eps}")
    level = int(math.floor((2.0 / 3.0 - eps) / eps + 1e-12)) - 1
    return max(level, 0)


def _range_cuts(t: float, eps: float) -> Tuple[np.ndarray, List[Tuple[RangeLabel, int]]]:
    """Ascending cuts in u = 2 pi n y and the label of each segment between them"""
    levels = l_epsilon(eps)
    third = t ** (1.0 / 3.0)
    wide = t ** (eps + 1.0 / 3.0)
    cuts = [t - t ** (1.0 - eps)]
    cuts += [t - t ** (1.0 - (level + 1) * eps) for level in range(1, levels + 1)]
    cuts += [t - wide, t - third, t + third, t + wide]
    labels = [(RangeLabel.PSI_0, None)]
    labels += [(RangeLabel.PSI_1L, level) for level in range(1, levels + 1)]
    labels += [
        (RangeLabel.PSI_1EPS, None),
        (RangeLabel.PSI_22, None),
        (RangeLabel.PSI_21, None),
        (RangeLabel.PSI_22, None),
        (RangeLabel.PSI_3, None),
    ]
    return np.array(cuts), labels


def _piece_names(labels) -> List[str]:
    names = []
    for label, level in labels:
        name = f"{label.value}_{level}" if level is not None else label.value
        if name not in names:
            names.append(name)
    return names


def range_windows(t: float, eps: float, y: float) -> Dict[str, List[Tuple[int, int]]]:
    """
    n-windows of every piece at height y, as inclusive integer ranges

    The windows partition 1 <= n < t.
    """
    cuts, labels = _range_cuts(t, eps)
    names = [f"{lab.value}_{lev}" if lev is not None else lab.value for lab, lev in labels]
    windows: Dict[str, List[Tuple[int, int]]] = {name: [] for name in _piece_names(labels)}
    n = np.arange(1, int(math.ceil(t)))
    segment = np.searchsorted(cuts, 2.0 * math.pi * n * y, side="right")
    for index in np.unique(segment):
        members = n[segment == index]
        windows[names[index]].append((int(members.min()), int(members.max())))
    return windows


def _autocorrelation_l4(coefficients: np.ndarray) -> float:
    """int_0^1 |sum a_n e(nx)|^4 dx for real a_n"""
    if coefficients.size == 0:
        return 0.0
    correlation = np.correlate(coefficients, coefficients, mode="full")
    return float(correlation @ correlation)


def range_decomposition(form: MaassForm, eps: float, y_max: float = None) -> List[RangePiece]:
    """
    Split each horocycle row into the psi pieces and integrate |psi|^4 over
    [-1/2, 1/2] x [1/2, y_max]
    """
    t = form.t
    y_max = y_max or settings.DEFAULT_Y_MAX
    cuts, labels = _range_cuts(t, eps)
    names = [f"{lab.value}_{lev}" if lev is not None else lab.value for lab, lev in labels]
    order = _piece_names(labels)
    n = np.arange(1, int(math.ceil(t)))
    lam = form.hecke.head(n.size) if n.size else np.zeros(0)

    def integrand(y: float) -> np.ndarray:
        u = 2.0 * math.pi * n * y
        values, _ = scaled_K_array(t, u)
        coefficients = lam * values
        segment = np.searchsorted(cuts, u, side="right")
        out = np.zeros(len(order))
        for slot, name in enumerate(order):
            mask = np.isin(segment, [i for i, label in enumerate(names) if label == name])
            out[slot] = _autocorrelation_l4(np.where(mask, coefficients, 0.0))
        return out

    breaks = [c / (2.0 * math.pi * k) for c in cuts if c > 0 for k in n]
    breaks = [y for y in breaks if 0.5 < y < y_max]
    contributions, _ = adaptive_vector_integral(integrand, 0.5, y_max, breakpoints=breaks, epsabs=1e-8)

    windows = range_windows(t, eps, 0.5)
    pieces = []
    for slot, name in enumerate(order):
        label, _, level = name.partition("_")
        pieces.append(RangePiece(
            label=RangeLabel(label),
            level=int(level) if level else None,
            n_ranges=windows[name],
            reference_height=0.5,
            contribution_l4=max(0.0, float(contributions[slot])),
        ))
    logger.info(f"range decomposition at eps={eps}: {len(pieces)} pieces")
    return pieces
