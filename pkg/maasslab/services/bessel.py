"""
Rescaled MacDonald-Bessel kernel e^{pi r/2} K_{ir}(u)

Away from the turning point u = r the kernel is evaluated from its uniform
(Debye) expansion; inside the transition zone |u - r| <= C r^{1/3} it is
evaluated by a contour-rotated integral that also serves as the oracle.
"""

import logging
import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial import Polynomial

from maasslab.core.config import settings
from maasslab.core.errors import AccuracyNotAttainedError, DomainError, TransitionZoneError
from maasslab.models.bessel import BesselEvaluation, BesselRegime, RegimeTag

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT_HALF_PI = math.sqrt(0.5 * math.pi)

# alpha - tanh(alpha) and tan(beta) - beta, odd powers from alpha^3 onward
_TANH_TAIL = (1.0 / 3.0, -2.0 / 15.0, 17.0 / 315.0, -62.0 / 2835.0, 1382.0 / 155925.0)
_TAN_TAIL = (1.0 / 3.0, 2.0 / 15.0, 17.0 / 315.0, 62.0 / 2835.0, 1382.0 / 155925.0)
_SERIES_SWITCH = 0.1


def _odd_series(angle: np.ndarray, coefficients) -> np.ndarray:
    square = angle * angle
    total = np.zeros_like(angle)
    for coefficient in reversed(coefficients):
        total = total * square + coefficient
    return total * angle * square


def phase_H_array(xi) -> np.ndarray:
    """
    Vectorised phase function H(xi)

    H(xi) = arccosh(1/xi) - sqrt(1 - xi^2) for 0 < xi <= 1 and
    sqrt(xi^2 - 1) - arcsec(xi) beyond. Near xi = 1 both branches are
    evaluated as series in the hyperbolic resp. circular angle.
    """
    xi = np.asarray(xi, dtype=float)
    if np.any(~(xi > 0)):
        raise DomainError("phase function requires xi > 0")

    out = np.empty_like(xi)
    inner = xi <= 1.0
    with np.errstate(divide="ignore", invalid="ignore"):
        # xi = sech(alpha)
        xi_in = xi[inner]
        delta = (1.0 - xi_in) / xi_in
        alpha = np.log1p(delta + np.sqrt(delta * (2.0 + delta)))
        out[inner] = np.where(
            alpha < _SERIES_SWITCH,
            _odd_series(alpha, _TANH_TAIL),
            alpha - np.tanh(alpha),
        )
        # xi = sec(beta)
        xi_out = xi[~inner]
        w = np.sqrt((xi_out - 1.0) * (xi_out + 1.0))
        beta = np.arctan(w)
        out[~inner] = np.where(
            beta < _SERIES_SWITCH,
            _odd_series(beta, _TAN_TAIL),
            w - beta,
        )
    return out


def phase_H(xi: float) -> float:
    """Phase function H at a single point; DomainError for xi <= 0"""
    if not xi > 0:
        raise DomainError(f"phase function requires xi > 0, got {xi}")
    return float(phase_H_array(np.array([xi]))[0])


def classify_regime(r: float, u: float, cutoff: float = None) -> BesselRegime:
    """Regime of (r, u) relative to the zone |u - r| <= C r^{1/3}"""
    cutoff = settings.BESSEL_CUTOFF if cutoff is None else cutoff
    if r < 0 or not u > 0:
        raise DomainError(f"kernel requires r >= 0 and u > 0, got r={r}, u={u}")
    width = cutoff * r ** (1.0 / 3.0)
    if u < r - width:
        tag = RegimeTag.OSCILLATORY
    elif u > r + width:
        tag = RegimeTag.EXPONENTIAL
    else:
        tag = RegimeTag.TRANSITION
    return BesselRegime(tag=tag, cutoff=cutoff)


def _regime_codes(r: float, u: np.ndarray, cutoff: float) -> np.ndarray:
    """-1 oscillatory, 0 transition, +1 exponential"""
    width = cutoff * r ** (1.0 / 3.0)
    return np.where(u < r - width, -1, np.where(u > r + width, 1, 0))


def transition_bound(r: float) -> float:
    """Uniform bound A r^{-1/3} for the kernel inside the transition zone"""
    return settings.TRANSITION_BOUND_CONSTANT * max(r, 1.0) ** (-1.0 / 3.0)


@lru_cache(maxsize=8)
def debye_polynomials(order: int) -> Tuple[Polynomial, ...]:
    """
    Debye polynomials U_0 .. U_order

    U_{k+1}(p) = p^2 (1 - p^2) U_k'(p) / 2 + (1/8) int_0^p (1 - 5 s^2) U_k(s) ds
    """
    polys = [Polynomial([1.0])]
    lead = Polynomial([0.0, 0.0, 0.5, 0.0, -0.5])
    weight = Polynomial([1.0, 0.0, -5.0]) / 8.0
    for _ in range(order):
        current = polys[-1]
        polys.append(lead * current.deriv() + (weight * current).integ())
    return tuple(polys)


def _debye_terms(r: float, p: np.ndarray, count: int) -> np.ndarray:
    """Terms i^k U_k(p) / r^k for k < count, shape (count, len(p))"""
    polys = debye_polynomials(count - 1)
    terms = np.empty((count, p.size), dtype=complex)
    factor = 1.0 + 0.0j
    for k in range(count):
        terms[k] = factor * polys[k](p)
        factor *= 1j / r
    return terms


def _asymptotic_array(
    r: float, u: np.ndarray, codes: np.ndarray, max_terms: int
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Uniform expansion for non-transition entries with optimal truncation

    Returns values, error estimates and the number of terms used per entry.
    """
    values = np.zeros(u.size)
    errors = np.zeros(u.size)
    used = np.zeros(u.size, dtype=int)

    osc = codes < 0
    if np.any(osc):
        uo = u[osc]
        gap = (r - uo) * (r + uo)
        amp = SQRT_2PI / gap ** 0.25
        p = r / np.sqrt(gap)
        theta = r * phase_H_array(uo / r) - 0.25 * math.pi
        terms = _debye_terms(r, p.astype(complex), max_terms + 1) * np.exp(1j * theta)
        v, e, k = _truncate(terms, amp)
        values[osc], errors[osc], used[osc] = v, e + amp * 4e-16 * (np.abs(theta) + 1.0), k

    expo = codes > 0
    if np.any(expo):
        ue = u[expo]
        gap = (ue - r) * (ue + r)
        amp = SQRT_HALF_PI / gap ** 0.25 * np.exp(-r * phase_H_array(ue / r))
        p = 1j * r / np.sqrt(gap)
        terms = _debye_terms(r, p, max_terms + 1)
        v, e, k = _truncate(terms, amp)
        values[expo], errors[expo], used[expo] = v, e + amp * 4e-16, k

    return values, errors, used


def _truncate(terms: np.ndarray, amp: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sum each column up to its smallest term; that term bounds the remainder"""
    sizes = np.abs(terms)
    sizes[0] = np.inf
    stop = np.argmin(sizes, axis=0)
    stop = np.maximum(stop, 1)
    rows = np.arange(terms.shape[0])[:, None]
    partial = np.where(rows < stop[None, :], terms, 0.0).sum(axis=0)
    omitted = sizes[stop, np.arange(terms.shape[1])]
    return amp * partial.real, 2.0 * amp * omitted, stop


def scaled_K_asymptotic(r: float, u: float, K: int) -> BesselEvaluation:
    """
    K-term uniform expansion outside the transition zone

    Args:
        r: order, r > 0
        u: argument, outside |u - r| <= C r^{1/3}
        K: number of terms, K >= 1

    Returns:
        BesselEvaluation whose error estimate is twice the first omitted term
    """
    regime = classify_regime(r, u)
    if regime.tag == RegimeTag.TRANSITION:
        raise TransitionZoneError(f"u={u} lies in the transition zone of r={r}")
    if K < 1:
        raise DomainError("at least one term is required")
    if r * phase_H(u / r) <= 1.0:
        raise DomainError(f"r H(u/r) <= 1 at r={r}, u={u}; expansion not applicable")

    if regime.tag == RegimeTag.OSCILLATORY:
        gap = (r - u) * (r + u)
        amp = SQRT_2PI / gap ** 0.25
        p = np.array([r / math.sqrt(gap)], dtype=complex)
        theta = r * phase_H(u / r) - 0.25 * math.pi
        terms = _debye_terms(r, p, K + 1)[:, 0] * complex(math.cos(theta), math.sin(theta))
    else:
        gap = (u - r) * (u + r)
        amp = SQRT_HALF_PI / gap ** 0.25 * math.exp(-r * phase_H(u / r))
        p = np.array([1j * r / math.sqrt(gap)])
        terms = _debye_terms(r, p, K + 1)[:, 0]
    value = amp * terms[:K].sum().real
    error = 2.0 * amp * abs(terms[K]) + amp * 4e-16
    return BesselEvaluation(value=float(value), regime=regime, error_estimate=float(error), terms_used=K)


def _rotation_angle(r: float, u: np.ndarray) -> np.ndarray:
    """Steepest-descent angle arccos(r/u), floored at c/r and capped at pi/2"""
    base = np.arccos(np.minimum(r / u, 1.0))
    floor = math.pi / 2 if r == 0 else min(math.pi / 2, settings.ORACLE_ANGLE_CONSTANT / r)
    return np.minimum(np.maximum(base, floor), math.pi / 2)


def _oracle_chunk(r: float, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Trapezoid sums of e^{r a} int_0^inf e^{-u sin(a) cosh s} cos(r s - u cos(a) sinh s) ds

    The step is halved until successive sums agree to the relative tolerance
    or reach the roundoff floor of the absolute sum.
    """
    alpha = _rotation_angle(r, u)
    sin_a, cos_a = np.sin(alpha), np.cos(alpha)
    damping = u * sin_a
    target = settings.ORACLE_DECAY_TARGET
    cosh_max = np.maximum(1.0 + target / damping, (r * alpha + target) / damping)
    s_max = np.arccosh(cosh_max)
    prefactor = np.exp(r * alpha)

    def integrand(s: np.ndarray) -> np.ndarray:
        s = s[:, None]
        f = np.exp(-damping * np.cosh(s)) * np.cos(r * s - u * cos_a * np.sinh(s))
        return np.where(s <= s_max[None, :], f, 0.0)

    h = float(alpha.min()) / 2.0
    nodes = np.arange(0.0, float(s_max.max()) + h, h)
    f = integrand(nodes)
    f[0] *= 0.5
    total = h * f.sum(axis=0)
    absolute = h * np.abs(f).sum(axis=0)

    while True:
        h *= 0.5
        mids = np.arange(h, float(s_max.max()) + h, 2.0 * h)
        if 2 * mids.size > settings.ORACLE_MAX_NODES:
            raise AccuracyNotAttainedError(
                f"oracle refinement stalled at r={r}, u in [{u.min():.6g}, {u.max():.6g}]"
            )
        g = integrand(mids)
        refined = 0.5 * total + h * g.sum(axis=0)
        absolute = 0.5 * absolute + h * np.abs(g).sum(axis=0)
        change = np.abs(refined - total)
        total = refined
        floor = 64.0 * np.finfo(float).eps * absolute
        if np.all(change <= settings.ORACLE_REL_TOLERANCE * np.abs(total) + floor):
            break

    values = prefactor * total
    errors = prefactor * (change + floor)
    return values, errors


def scaled_K_oracle_array(r: float, u, chunk: int = 128) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature oracle over an array of arguments

    Returns:
        (values, absolute error estimates)
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if r < 0 or np.any(~(u > 0)):
        raise DomainError("oracle requires r >= 0 and u > 0")
    if r > settings.ORACLE_MAX_ORDER:
        raise DomainError(f"oracle order {r} exceeds {settings.ORACLE_MAX_ORDER}")

    values = np.empty(u.size)
    errors = np.empty(u.size)
    order = np.argsort(u, kind="stable")
    for start in range(0, u.size, chunk):
        idx = order[start:start + chunk]
        values[idx], errors[idx] = _oracle_chunk(r, u[idx])
    return values, errors


def scaled_K_oracle(r: float, u: float) -> float:
    """Independent quadrature evaluation of e^{pi r/2} K_{ir}(u)"""
    values, _ = scaled_K_oracle_array(r, np.array([u]), chunk=1)
    return float(values[0])


def scaled_K_array(r: float, u, method: str = "auto") -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorised kernel evaluation

    Args:
        r: order
        u: arguments, all > 0
        method: "auto" dispatches by regime, "quadrature" forces the oracle

    Returns:
        (values, absolute error estimates)
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    if method == "quadrature":
        return scaled_K_oracle_array(r, u)
    if method != "auto":
        raise DomainError(f"unknown kernel method {method!r}")

    codes = _regime_codes(r, u, settings.BESSEL_CUTOFF)
    values = np.zeros(u.size)
    errors = np.zeros(u.size)

    outside = codes != 0
    if np.any(outside) and r > 0:
        uo = u[outside]
        applicable = r * phase_H_array(uo / r) > 1.0
        v, e, _ = _asymptotic_array(r, uo, codes[outside], settings.BESSEL_MAX_TERMS)
        idx = np.flatnonzero(outside)
        values[idx[applicable]] = v[applicable]
        errors[idx[applicable]] = e[applicable]
        codes = codes.copy()
        codes[idx[~applicable]] = 0
    elif r == 0:
        codes = np.zeros_like(codes)

    inside = codes == 0
    if np.any(inside):
        values[inside], errors[inside] = scaled_K_oracle_array(r, u[inside])
    return values, errors


def scaled_K(r: float, u: float) -> BesselEvaluation:
    """Dispatching evaluation of e^{pi r/2} K_{ir}(u) with regime and error estimate"""
    regime = classify_regime(r, u)
    if regime.tag != RegimeTag.TRANSITION and r > 0 and r * phase_H(u / r) > 1.0:
        codes = np.array([-1 if regime.tag == RegimeTag.OSCILLATORY else 1])
        v, e, k = _asymptotic_array(r, np.array([float(u)]), codes, settings.BESSEL_MAX_TERMS)
        return BesselEvaluation(value=float(v[0]), regime=regime, error_estimate=float(e[0]), terms_used=int(k[0]))

    if r > settings.ORACLE_MAX_ORDER:
        raise DomainError(f"transition-zone evaluation needs r <= {settings.ORACLE_MAX_ORDER}, got {r}")
    values, errors = scaled_K_oracle_array(r, np.array([float(u)]), chunk=1)
    return BesselEvaluation(value=float(values[0]), regime=regime, error_estimate=float(errors[0]), terms_used=0)
