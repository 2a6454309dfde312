"""
Seeded desk-scale acceptance suite

Every check draws from one numpy Generator seeded by the caller, so two runs
with the same seed produce identical reports.
"""

import logging
import math
from typing import Any, Callable, Dict, Optional

import numpy as np

from maasslab.core.errors import NoRootInIntervalError
from maasslab.models.form import MaassForm
from maasslab.models.nodal import BS_TARGET
from maasslab.models.oscillation import ConstantsProfile
from maasslab.models.solver import SolverConfig
from maasslab.services.bessel import SQRT_2PI, classify_regime, scaled_K, scaled_K_oracle, transition_bound
from maasslab.services.certification import select_good_heights
from maasslab.services.domain import FundamentalDomainQuadrature
from maasslab.services.eigensolver import annulus_points, solve_even_form
from maasslab.services.hecke import hecke_extend
from maasslab.services.maass_form import automorphy_residual
from maasslab.services.nodal import count_components, sample_function_grid
from maasslab.services.norms import horocycle_l2_direct, horocycle_l2_mainterm, horocycle_l2_parseval, l4_norm
from maasslab.services.oscillation import count_sign_changes, littlewood_certify
from maasslab.services.phases import d_lower_bound, phase_d, phase_dprime, sample_admissible_quadruples
from maasslab.services.segments import SegmentFunction, horocycle

logger = logging.getLogger(__name__)

Check = Dict[str, Any]


FIRST_FORM_SEARCH = SolverConfig(t_min=13.77, t_max=13.79, truncation=28, sample_height=0.8)


def check_bessel_oracle(rng: np.random.Generator, samples: int = 500) -> Check:
    worst = 0.0
    failures = 0
    regimes = {"oscillatory": 0, "transition": 0, "exponential": 0}
    for _ in range(samples):
        r = float(rng.uniform(5.0, 250.0))
        u = float(r * rng.uniform(0.2, 2.5))
        evaluation = scaled_K(r, u)
        oracle = scaled_K_oracle(r, u)
        gap = abs(evaluation.value - oracle)
        allowed = max(evaluation.error_estimate, 1e-6 * abs(oracle), 1e-14)
        worst = max(worst, gap / allowed)
        failures += gap > allowed
        regimes[classify_regime(r, u).tag.value] += 1
    return {
        "passed": failures == 0 and all(regimes.values()),
        "samples": samples, "failures": failures, "worst_ratio": worst, "regimes": regimes,
    }


def check_bessel_bounds(rng: np.random.Generator, samples: int = 200) -> Check:
    failures = 0
    for _ in range(samples):
        r = float(rng.uniform(5.0, 250.0))
        u = float(r * rng.uniform(0.05, 1.0 - 1e-3))
        regime = classify_regime(r, u).tag.value
        if regime == "exponential":
            continue
        value = abs(scaled_K(r, u).value)
        if regime == "oscillatory":
            bound = 1.1 * SQRT_2PI / ((r - u) * (r + u)) ** 0.25
        else:
            bound = transition_bound(r)
        failures += value > bound
    return {"passed": failures == 0, "samples": samples, "failures": failures}


def check_domain_area() -> Check:
    result = FundamentalDomainQuadrature().integrate(lambda xs, y: np.ones_like(xs), tail=lambda y: 1.0 / y)
    error = abs(result.value - math.pi / 3.0)
    return {"passed": error <= 1e-6, "value": result.value, "error": error}


def check_hecke() -> Check:
    a, b = 1.5493, 0.2469
    table = hecke_extend({2: a, 3: b, 5: 0.3, 7: -0.7}, 8)
    ok = math.isclose(table[6], a * b) and math.isclose(table[8], a ** 3 - 2.0 * a)
    return {"passed": ok}


def _trig_polynomial(rng: np.random.Generator) -> SegmentFunction:
    degree = int(rng.integers(1, 12))
    amplitudes = rng.normal(size=degree)
    phases = rng.uniform(0.0, 2.0 * math.pi, size=degree)
    k = np.arange(1, degree + 1)

    def fn(x: np.ndarray) -> np.ndarray:
        return np.cos(2.0 * math.pi * np.outer(x, k) + phases) @ amplitudes

    return SegmentFunction.from_callable(fn, 0.0, 1.0, oscillation_scale=1.0 / degree)


def check_littlewood(rng: np.random.Generator, samples: int = 200) -> Check:
    cases = [_trig_polynomial(rng) for _ in range(samples)]
    for frequency in (500, 2000):
        cases.append(SegmentFunction.from_callable(
            lambda x, m=frequency: np.sin(2.0 * math.pi * m * x + 0.3), 0.0, 1.0, oscillation_scale=1.0 / frequency,
        ))
    violations = 0
    certified = 0
    for f in cases:
        zero = SegmentFunction.from_callable(np.zeros_like, f.a, f.b, f.oscillation_scale)
        certificate = littlewood_certify(f, zero, 0.5, 1.0, 1000.0, ConstantsProfile.RELAXED)
        if certificate.premises_hold:
            certified += 1
            violations += certificate.lower_bound > count_sign_changes(f)
    return {"passed": violations == 0, "samples": len(cases), "premises_held": certified, "violations": violations}


def check_phases(rng: np.random.Generator, samples: int = 1000) -> Check:
    violations = 0
    for t in (50.0, 100.0, 200.0):
        for q, y in sample_admissible_quadruples(t, 0.2, samples, rng):
            d = phase_d(q, y)
            sign_ok = math.copysign(1.0, d) == -math.copysign(1.0, q.product_gap)
            bound_ok = abs(d) >= d_lower_bound(q, y) * (1.0 - 1e-12)
            convex_ok = phase_dprime(q, y) * d > 0
            violations += not (sign_ok and bound_ok and convex_ok)
    return {"passed": violations == 0, "samples": 3 * samples, "violations": violations}


def check_nodal(max_order: int = 8, size: int = 128) -> Check:
    failures = 0
    for m in range(1, max_order + 1):
        for n in range(1, max_order + 1):
            grid = sample_function_grid(
                lambda xs, y, m=m, n=n: np.sin(2.0 * math.pi * m * xs) * np.sin(2.0 * math.pi * n * y),
                (0.0, 1.0, 0.0, 1.0), size, size, workers=1,
            )
            failures += count_components(grid) != 4 * m * n
    constant_ok = abs(BS_TARGET - (2.0 / math.pi) * (3.0 * math.sqrt(3.0) - 5.0)) < 1e-15
    return {
        "passed": failures == 0 and constant_ok,
        "max_order": max_order, "failures": failures, "bs_target": BS_TARGET,
    }


def _alternate_config(t: float) -> SolverConfig:
    """A second truncation and sample height around a solved t"""
    t_max = t + 0.01
    return SolverConfig(t_min=t - 0.01, t_max=t_max, truncation=int(math.ceil(2.0 * t_max)) + 6, sample_height=0.75)


def check_solver_stability(form: MaassForm) -> Check:
    try:
        other = solve_even_form(_alternate_config(form.t)).t
    except NoRootInIntervalError:
        logger.error(f"second solve lost the form at t={form.t}")
        other = math.nan
    gap = abs(other - form.t)
    residual = automorphy_residual(form, annulus_points(), tol=1e-9)
    return {
        "passed": gap <= 1e-6 and residual <= 1e-5,
        "t": form.t, "t_alternate": other, "gap": gap, "automorphy_residual": residual,
    }


def check_main_terms(form: MaassForm) -> Check:
    heights = []
    for y in (1.0, 2.0, 5.0):
        main = horocycle_l2_mainterm(form, y)
        direct = horocycle_l2_direct(form, y)
        heights.append({
            "y": y, "direct": direct, "main_term": main.main_term, "error_budget": main.error_budget,
            "within_budget": abs(direct - main.main_term) <= main.error_budget,
        })
    return {"passed": all(h["within_budget"] for h in heights), "heights": heights}


def check_fourth_moment(form: MaassForm) -> Check:
    value = l4_norm(form).value
    low, high = 9.0 / (3.0 * math.pi), 27.0 / math.pi
    return {"passed": low <= value <= high, "value": value, "window": [low, high]}


def check_form(form: MaassForm) -> Check:
    """Horocycle Parseval identity and sign changes; the good-height fraction is reported only"""
    direct = horocycle_l2_direct(form, 1.0)
    parseval = horocycle_l2_parseval(form, 1.0)
    count = count_sign_changes(horocycle(form, 1.0))
    heights = select_good_heights(form, 1.0, 0.5, 0.001, form.t ** 0.3, workers=1)
    ok = abs(direct - parseval) <= 1e-9 * max(1.0, parseval) and count > 0
    return {
        "passed": ok, "t": form.t, "parseval_gap": abs(direct - parseval),
        "horocycle_sign_changes": count, "good_height_fraction": heights.success_fraction,
    }


def run_selftest(seed: int, form: Optional[MaassForm] = None, solve: bool = True) -> Dict[str, Any]:
    """
    Run every check and collect a deterministic report

    Args:
        seed: seed of the shared generator
        form: form for the form checks; without one the first even form is solved
        solve: False skips the solve and every form check when no form is given

    Returns:
        {"seed", "checks": {name: {...}}, "passed"}
    """
    rng = np.random.default_rng(seed)
    suite: Dict[str, Callable[[], Check]] = {
        "bessel_oracle": lambda: check_bessel_oracle(rng),
        "bessel_bounds": lambda: check_bessel_bounds(rng),
        "domain_area": check_domain_area,
        "hecke": check_hecke,
        "littlewood": lambda: check_littlewood(rng),
        "phases": lambda: check_phases(rng),
        "nodal": check_nodal,
    }
    if form is None and solve:
        logger.info(f"solving the first even form in [{FIRST_FORM_SEARCH.t_min}, {FIRST_FORM_SEARCH.t_max}]")
        form = solve_even_form(FIRST_FORM_SEARCH)
    if form is not None:
        suite["solver_stability"] = lambda: check_solver_stability(form)
        suite["main_terms"] = lambda: check_main_terms(form)
        suite["fourth_moment"] = lambda: check_fourth_moment(form)
        suite["form"] = lambda: check_form(form)

    checks = {}
    for name, check in suite.items():
        checks[name] = check()
        level = logging.INFO if checks[name]["passed"] else logging.ERROR
        logger.log(level, f"selftest {name}: {'passed' if checks[name]['passed'] else 'FAILED'}")
    return {"seed": seed, "checks": checks, "passed": all(c["passed"] for c in checks.values())}
