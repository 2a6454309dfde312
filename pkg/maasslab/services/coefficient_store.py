"""
Flat-file coefficient store

Format (UTF-8, LF):

    t <decimal>
    parity even
    rho1 <decimal>
    <p> <decimal lambda(p)>      one line per prime, increasing

Decimals are written with 17 significant digits so a load reproduces every
stored double exactly.
"""

import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Dict, List, Union

from maasslab.core.errors import (
    CoefficientParseError,
    InvariantViolationError,
    MissingPrimeError,
    OddFormError,
)
from maasslab.models.form import MaassForm
from maasslab.services.hecke import hecke_extend, next_prime, smallest_prime_factors

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def _decimal(value: float) -> str:
    return format(float(value), ".17g")


def _creation_mode() -> int:
    """Mode a plain open() would give a new file under the current umask"""
    umask = os.umask(0)
    os.umask(umask)
    return 0o666 & ~umask


def write_atomic(path: PathLike, text: str) -> None:
    """
    Write text to path through a temporary sibling and an atomic rename

    mkstemp creates the sibling as 0600; it is widened to the umask mode before the rename.
    """
    target = Path(path)
    handle, temporary = tempfile.mkstemp(prefix=f".{target.name}.", dir=target.parent or ".")
    try:
        with os.fdopen(handle, "w", encoding="utf-8", newline="\n") as stream:
            stream.write(text)
        os.chmod(temporary, _creation_mode())
        os.replace(temporary, target)
    except BaseException:
        if os.path.exists(temporary):
            os.unlink(temporary)
        raise


def format_form(form: MaassForm) -> str:
    lines = [f"t {_decimal(form.t)}", f"parity {form.parity}", f"rho1 {_decimal(form.rho_one)}"]
    for p in sorted(form.hecke.prime_eigenvalues):
        lines.append(f"{p} {_decimal(form.hecke.prime_eigenvalues[p])}")
    return "\n".join(lines) + "\n"


def store_form(form: MaassForm, path: PathLike) -> None:
    write_atomic(path, format_form(form))
    logger.info(f"stored form t={form.t} with {len(form.hecke.prime_eigenvalues)} primes to {path}")


def _number(token: str, line: int, what: str) -> float:
    try:
        value = float(token)
    except ValueError:
        raise CoefficientParseError(f"{what} {token!r} is not a decimal", line)
    if not math.isfinite(value):
        raise CoefficientParseError(f"{what} must be finite, got {token!r}", line)
    return value


def _keyword_line(lines: List[str], index: int, keyword: str) -> str:
    if index >= len(lines):
        raise CoefficientParseError(f"unexpected end of file, expected '{keyword}'", index + 1)
    parts = lines[index].split()
    if len(parts) != 2 or parts[0] != keyword:
        raise CoefficientParseError(f"expected '{keyword} <value>', got {lines[index]!r}", index + 1)
    return parts[1]


def parse_form(text: str) -> MaassForm:
    """
    Parse the coefficient format

    The table extent is one less than the prime following the last stored
    prime, the largest extent the stored primes determine.

    Raises:
        CoefficientParseError: malformed line, duplicate or out-of-order prime, gap in the primes
        OddFormError: parity other than even
        InvariantViolationError: non-positive t or rho1
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    t = _number(_keyword_line(lines, 0, "t"), 1, "t")
    parity = _keyword_line(lines, 1, "parity")
    if parity != "even":
        raise OddFormError(f"line 2: parity {parity!r} is not supported")
    rho_one = _number(_keyword_line(lines, 2, "rho1"), 3, "rho1")
    if not t > 0 or not rho_one > 0:
        raise InvariantViolationError(f"t and rho1 must be positive, got t={t}, rho1={rho_one}")

    primes: Dict[int, float] = {}
    line_of: Dict[int, int] = {}
    last = 1
    for index in range(3, len(lines)):
        number = index + 1
        parts = lines[index].split()
        if len(parts) != 2:
            raise CoefficientParseError(f"expected '<prime> <value>', got {lines[index]!r}", number)
        try:
            p = int(parts[0])
        except ValueError:
            raise CoefficientParseError(f"prime {parts[0]!r} is not an integer", number)
        if p in primes:
            raise CoefficientParseError(f"duplicate prime {p}", number)
        if p < last:
            raise CoefficientParseError(f"prime {p} follows {last}; primes must increase", number)
        primes[p] = _number(parts[1], number, f"lambda({p})")
        line_of[p] = number
        last = p

    spf = smallest_prime_factors(max(last, 2))
    for p, number in line_of.items():
        if p < 2 or int(spf[p]) != p:
            raise CoefficientParseError(f"{p} is not prime", number)

    extent = next_prime(last) - 1
    try:
        hecke = hecke_extend(primes, extent)
    except MissingPrimeError as error:
        raise CoefficientParseError(f"no eigenvalue for prime {error.prime}")
    return MaassForm(t=t, hecke=hecke, rho_one=rho_one)


def load_form(path: PathLike) -> MaassForm:
    return parse_form(Path(path).read_text(encoding="utf-8"))


def ingest_form(path: PathLike) -> MaassForm:
    """
    Load a coefficient file and check the soft invariants

    Soft-bound violations stay on the table as bound_violations; rho1
    outside [t^-1/2, t^1/2] is logged.
    """
    form = load_form(path)
    if form.hecke.bound_violations:
        logger.warning(f"{path}: {len(form.hecke.bound_violations)} coefficients violate the soft bound")
    if not form.t ** -0.5 <= form.rho_one <= form.t ** 0.5:
        logger.warning(f"{path}: rho1={form.rho_one:.6g} outside [t^-1/2, t^1/2]")
    return form
