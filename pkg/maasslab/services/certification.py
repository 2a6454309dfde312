"""
Certified sign-change pipeline: good-window selection followed by the
Littlewood certificate with the parameter ladder of each segment mode
"""

import logging
import math
from typing import Dict, Optional

import numpy as np

from maasslab.core.errors import AssumptionRequiredError, CertificateSoundnessError, DomainError
from maasslab.core.quadrature import composite_gauss
from maasslab.models.form import MaassForm
from maasslab.models.oscillation import (
    CertificationReport,
    ConstantsProfile,
    SegmentKind,
    SelectedWindow,
    WindowSelection,
)
from maasslab.services.dirichlet import J1_J2
from maasslab.services.maass_form import fourier_row
from maasslab.services.oscillation import certificate_from_quantities, count_sign_changes, littlewood_certify
from maasslab.services.segments import SegmentFunction, vertical
from maasslab.tasks.pool import parallel_map

logger = logging.getLogger(__name__)

ROW_TOL = 1e-13


def parameter_ladder(t: float, eps1: float, mode: SegmentKind) -> Dict[str, float]:
    """
    Derived exponents and certificate parameters for a segment mode

    horocycle: omega = t^{4 eps1}; vertical: omega = t^{8 eps1}, delta = 5 eps1;
    axis: omega = t^{11 eps1}, delta = 8 eps1, c = t^{-delta1} with delta1 = delta / 10.
    """
    ladder = {"eps1": eps1, "eps2": eps1 / 10.0, "eps3": eps1 / 100.0, "N": t, "c": t ** (-eps1 / 2.0)}
    if mode == SegmentKind.AXIS:
        delta = 8.0 * eps1
        ladder.update(delta=delta, delta1=delta / 10.0, omega=t ** (11.0 * eps1), c=t ** (-delta / 10.0))
    elif mode in (SegmentKind.VERTICAL, SegmentKind.ARC):
        delta = 5.0 * eps1
        ladder.update(delta=delta, delta1=delta / 10.0, omega=t ** (8.0 * eps1))
    else:
        ladder.update(delta=None, delta1=None, omega=t ** (4.0 * eps1))
    return ladder


def _check_exponents(eps: float, eps1: float) -> None:
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps}")
    if not 0 < eps1 < eps / 10.0:
        raise DomainError(f"eps1 must lie in (0, eps/10), got {eps1}")


def _row_moments(form: MaassForm, y: float) -> tuple:
    """(int psi_y^2 dx, int psi_y^4 dx) from the Fourier coefficients"""
    coefficients, _ = fourier_row(form, y, ROW_TOL)
    full = np.concatenate([coefficients[::-1], [0.0], coefficients])
    correlation = np.correlate(full, full, mode="full")
    return float(full @ full), float(correlation @ correlation)


def _window_count(t: float, eps: float) -> int:
    return max(1, int(math.ceil(t ** (1.0 - eps))))


def select_good_heights(
    form: MaassForm,
    a: float,
    eps: float,
    eps1: float,
    M: float,
    candidates: int = 17,
    workers: Optional[int] = None,
) -> WindowSelection:
    """
    Search each window v_k of [a, a + 1) for Y_k with
    t^{eps2} + int psi_Y^4 dx <= M (int psi_Y^2 dx)^2

    Args:
        form: even Maass form
        a: lower end, a > 1/2 keeps every row inside the table
        eps: window exponent, ceil(t^{1 - eps}) windows
        eps1: certificate exponent, eps2 = eps1 / 10
        M: acceptance constant
        candidates: heights tried per window

    Returns:
        WindowSelection with the best candidate of every window
    """
    _check_exponents(eps, eps1)
    if M < 0:
        raise DomainError(f"M must be nonnegative, got {M}")
    t = form.t
    count = _window_count(t, eps)
    width = 1.0 / count
    floor_term = t ** (eps1 / 10.0)

    def scan(k: int) -> SelectedWindow:
        lower = a + (k - 1) * width
        heights = lower + (np.arange(candidates) + 0.5) * width / candidates
        best_y, best_ratio = None, math.inf
        for y in heights:
            l2, l4 = _row_moments(form, float(y))
            ratio = (floor_term + l4) / (l2 * l2) if l2 > 0 else math.inf
            if ratio < best_ratio:
                best_y, best_ratio = float(y), ratio
        return SelectedWindow(
            index=k, lower=lower, upper=lower + width, position=best_y,
            ratio=best_ratio, accepted=best_ratio <= M,
        )

    windows = parallel_map(scan, range(1, count + 1), workers)
    selection = WindowSelection(M=M, windows=windows)
    failures = sum(not w.accepted for w in windows)
    logger.info(f"good heights for t={t}: {count - failures}/{count} windows accepted at M={M:.4g}")
    return selection


def _vertical_moments(form: MaassForm, x: float, a: float, h: float) -> tuple:
    segment = vertical(form, x, a, h)
    panels = max(4, int(math.ceil(4.0 * h / segment.oscillation_scale)))
    points, weights = composite_gauss(np.linspace(a, a + h, panels + 1), 16)
    values = segment(points)
    return float(weights @ values ** 2), float(weights @ values ** 4)


def select_good_abscissae(
    form: MaassForm,
    a: float,
    h: float,
    eps: float,
    eps1: float,
    M: float,
    candidates: int = 5,
    workers: Optional[int] = None,
) -> WindowSelection:
    """
    Search each window h_k of [-1/2, 1/2) for X_k with
    t^{eps2} + int_a^{a+h} phi_X^4 dy + J(X, delta) <= M (int_a^{a+h} phi_X^2 dy)^2,
    where J(X, delta) = J1 + t^delta J2 and delta = 5 eps1
    """
    _check_exponents(eps, eps1)
    t = form.t
    count = _window_count(t, eps)
    width = 1.0 / count
    floor_term = t ** (eps1 / 10.0)
    delta = 5.0 * eps1

    def scan(k: int) -> SelectedWindow:
        lower = -0.5 + (k - 1) * width
        best_x, best_ratio = None, math.inf
        for x in lower + (np.arange(candidates) + 0.5) * width / candidates:
            l2, l4 = _vertical_moments(form, float(x), a, h)
            j1, j2 = J1_J2(form, float(x), delta)
            ratio = (floor_term + l4 + j1 + t ** delta * j2) / (l2 * l2) if l2 > 0 else math.inf
            if ratio < best_ratio:
                best_x, best_ratio = float(x), ratio
        return SelectedWindow(
            index=k, lower=lower, upper=lower + width, position=best_x,
            ratio=best_ratio, accepted=best_ratio <= M,
        )

    windows = parallel_map(scan, range(1, count + 1), workers)
    logger.info(f"good abscissae for t={t}: {sum(w.accepted for w in windows)}/{count} accepted")
    return WindowSelection(M=M, windows=windows)


def certify_sign_changes(
    form: MaassForm,
    seg: SegmentFunction,
    eps: float,
    eps1: float,
    omega: Optional[float] = None,
    N: Optional[float] = None,
    assume_lindelof: bool = False,
) -> CertificationReport:
    """
    Littlewood certificate with g = 0 for a segment of the form, plus the direct count

    Axis segments need assume_lindelof: the bound L_0(1/2 + it) << t^eps is
    taken as an input, not proven.

    Raises:
        AssumptionRequiredError: axis mode without assume_lindelof
        CertificateSoundnessError: certified lower bound above the direct count
    """
    _check_exponents(eps, eps1)
    if seg.kind == SegmentKind.AXIS and not assume_lindelof:
        raise AssumptionRequiredError("axis certificates require assume_lindelof")

    ladder = parameter_ladder(form.t, eps1, seg.kind)
    if omega is not None:
        ladder["omega"] = omega
    if N is not None:
        ladder["N"] = N
    ladder["assume_lindelof"] = assume_lindelof

    zero = SegmentFunction(lambda s: np.zeros_like(s), seg.a, seg.b, seg.kind, seg.oscillation_scale)
    exact = littlewood_certify(seg, zero, ladder["c"], ladder["omega"], ladder["N"])
    relaxed = certificate_from_quantities(
        exact.a, exact.b, exact.M1, exact.M2, exact.J, exact.g_bound, exact.c, exact.omega, exact.N,
        ConstantsProfile.RELAXED, exact.large_value_measure,
    )
    direct = count_sign_changes(seg)

    if exact.premises_hold and exact.lower_bound > direct:
        raise CertificateSoundnessError(
            f"certified {exact.lower_bound} sign changes but counted {direct} on {seg!r}"
        )
    logger.info(
        f"certificate for {seg!r}: premises={exact.premises_hold} lower_bound={exact.lower_bound} "
        f"relaxed={relaxed.lower_bound} direct={direct}"
    )
    return CertificationReport(
        mode=seg.kind, t=form.t, eps1=eps1, parameters={"eps": eps, **ladder},
        certificate=exact, relaxed=relaxed, direct_count=direct,
    )
