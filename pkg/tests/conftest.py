"""
Shared fixtures

synthetic_form carries the spectral parameter of the first even form with
fixed bounded prime eigenvalues; it is not an eigenfunction but satisfies
every identity that holds for arbitrary Hecke-multiplicative coefficients.
first_form and first_three_forms run the eigensolver and are used only by slow tests.
"""

import numpy as np
import pytest

from maasslab.core.logging import configure_logging
from maasslab.models.form import MaassForm
from maasslab.models.solver import SolverConfig
from maasslab.services.eigensolver import solve_all_even_forms, solve_even_form
from maasslab.services.hecke import hecke_extend, next_prime, primes_up_to

FIRST_EVEN_T = 13.779751351890

SYNTHETIC_PRIMES = [
    1.549304477941, 0.246899772453, 0.737060385348, -0.261328138663, -0.953960683011,
    0.407143620891, -0.880549017441, 0.540745402236, -0.182094271653, 1.183287412811,
    -1.315740541006,
]


def synthetic_table():
    """Primes 2..31 with table extent 36"""
    return hecke_extend(dict(zip(primes_up_to(31), SYNTHETIC_PRIMES)), next_prime(31) - 1)


@pytest.fixture(scope="session", autouse=True)
def _plain_logging():
    configure_logging(level="WARNING", json_lines=False)


@pytest.fixture(scope="session")
def synthetic_form() -> MaassForm:
    return MaassForm(t=FIRST_EVEN_T, hecke=synthetic_table(), rho_one=1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def solver_config() -> SolverConfig:
    return SolverConfig(t_min=13.77, t_max=13.79, truncation=28, sample_height=0.8)


@pytest.fixture(scope="session")
def first_form(solver_config) -> MaassForm:
    return solve_even_form(solver_config)


@pytest.fixture(scope="session")
def first_three_forms():
    cfg = SolverConfig(t_min=13.7, t_max=19.5, truncation=40, sample_height=0.8)
    results = solve_all_even_forms(cfg)
    return [r.form for r in results[:3]]
