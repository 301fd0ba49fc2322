"""
Dimension counts for solution varieties of XA - AX = X^2 - X^3 with A = diag(I_p, 0_q).

Solutions are stratified by Jordan data: k nilpotent 2-blocks, t zero 1-blocks and an identity
block of size tau = n - 2k - t. Every maximum below is an exhaustive search over the integer grid,
so the floor effects that the continuous optimum hides are certified exactly.
"""

from __future__ import annotations

import csv
import functools
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Any, NamedTuple

import numpy as np

from .exceptions import CommutatorError, InputValidationError
from .rational import format_rational

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from numpy.typing import NDArray

logger: logging.Logger = logging.getLogger(__name__)

DEFAULT_RATIO_BOUND = Fraction(5)
DEFAULT_SCAN_WINDOW = 160
# Largest block size accepted by the grid searches below.
MAX_BLOCK_SIZE = 2000

# Residues mod 16 of (p, q) where the maximal stratum dimension falls one short of rho.
# Rows keyed by a in 1..7 also cover (-a, -b) mod 16; rows 0 and 8 are closed under negation.
EXCEPTION_TABLE: dict[int, tuple[int, ...]] = {
    0: (4, 5, 8, 11, 12),
    1: (11, 12, 14, 15),
    2: (2, 5, 6, 14, 15),
    3: (5, 6, 8, 9),
    4: (0, 8, 9, 12, 15),
    5: (0, 2, 3, 15),
    6: (2, 3, 6, 9, 10),
    7: (9, 10, 12, 13),
    8: (0, 3, 4, 12, 13),
}


@dataclass(frozen=True)
class JordanProfile:
    """Jordan data of a solution of Y^2 = Y^3: k blocks J_2(0), t zero 1-blocks, identity block tau."""

    n: int
    k: int
    t: int

    def __post_init__(self) -> None:
        if self.n < 0 or self.k < 0 or self.t < 0 or 2 * self.k + self.t > self.n:
            msg = f"Infeasible Jordan profile n={self.n}, k={self.k}, t={self.t}"
            raise InputValidationError(msg)

    @classmethod
    def from_tau(cls, n: int, k: int, tau: int) -> JordanProfile:
        return cls(n=n, k=k, t=n - 2 * k - tau)

    @property
    def tau(self) -> int:
        return self.n - 2 * self.k - self.t


def class_dim_r(n: int, k: int, t: int) -> int:
    """Dimension r_n(k, t) = 2n(t + 2k) - 6k^2 - 6kt - 2t^2 of the similarity class."""
    JordanProfile(n=n, k=k, t=t)
    return 2 * n * (t + 2 * k) - 6 * k * k - 6 * k * t - 2 * t * t


def stratum_dim(n: int, k: int, tau: int) -> int:
    """r_n(k, t) with the identity block size tau in place of t."""
    profile = JordanProfile.from_tau(n, k, tau)
    return class_dim_r(n, profile.k, profile.t)


def _check_block_size(**sizes: int) -> None:
    for name, value in sizes.items():
        if value > MAX_BLOCK_SIZE:
            msg = f"{name} must be at most {MAX_BLOCK_SIZE}, got {value}"
            raise InputValidationError(msg)


def nilpotent_variety_dim(n: int) -> int:
    """max_k 2k(n - k) over the square-zero classes; equals floor(n^2 / 2)."""
    if n < 0:
        msg = f"n must be non-negative, got {n}"
        raise InputValidationError(msg)
    _check_block_size(n=n)
    ks = np.arange(n // 2 + 1, dtype=np.int64)
    best = int((2 * ks * (n - ks)).max())
    if best != n * n // 2:
        msg = f"Square-zero maximum {best} differs from floor(n^2/2) for n={n}"
        raise CommutatorError(msg)
    return best


def _class_dim_grid(n: int) -> NDArray[np.int64]:
    """r_n(k, t) on the (k, t) grid, -1 where infeasible."""
    k = np.arange(n // 2 + 1, dtype=np.int64)[:, None]
    t = np.arange(n + 1, dtype=np.int64)[None, :]
    values = 2 * n * (t + 2 * k) - 6 * k * k - 6 * k * t - 2 * t * t
    return np.where(2 * k + t <= n, values, -1)


class CubeDim(NamedTuple):
    dim: int
    k: int
    t: int


def cube_variety_dim(n: int) -> CubeDim:
    """Dimension of {X : X^2 = X^3} in M_n, with the first maximizing (k, t) in k-major order."""
    if n < 0:
        msg = f"n must be non-negative, got {n}"
        raise InputValidationError(msg)
    _check_block_size(n=n)
    grid = _class_dim_grid(n)
    k, t = np.unravel_index(int(grid.argmax()), grid.shape)
    best = int(grid[k, t])
    if best != 2 * n * n // 3:
        msg = f"Cube-variety maximum {best} differs from floor(2n^2/3) for n={n}"
        raise CommutatorError(msg)
    return CubeDim(dim=best, k=int(k), t=int(t))


@functools.lru_cache(maxsize=1024)
def _best_by_tau(n: int) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    """For each tau in 0..n: max_k stratum_dim(n, k, tau) and the first k achieving it."""
    tau = np.arange(n + 1, dtype=np.int64)[:, None]
    k = np.arange(n // 2 + 1, dtype=np.int64)[None, :]
    m = n - tau
    values = 2 * n * m - 2 * m * m + 2 * k * (m - k)
    values = np.where(2 * k <= m, values, -1)
    return values.max(axis=1), values.argmax(axis=1)


def rho(p: int, q: int) -> int:
    """floor((11p^2 + 11q^2 + 2pq) / 16)."""
    if p < 1 or q < 1:
        msg = f"p and q must be positive, got p={p}, q={q}"
        raise InputValidationError(msg)
    return (11 * p * p + 11 * q * q + 2 * p * q) // 16


def delta(p: int, q: int, k1: int, k2: int, tau1: int, tau2: int) -> int:
    """Dimension of the stratum of triples (P, Q, S) with the given Jordan data."""
    return stratum_dim(p, k1, tau1) + stratum_dim(q, k2, tau2) + tau1 * tau2


class ContinuousOptimum(NamedTuple):
    k1: Fraction
    k2: Fraction
    tau1: Fraction
    tau2: Fraction
    value: Fraction


def continuous_optimum(p: int, q: int) -> ContinuousOptimum:
    """Stationary point of delta over the reals and its value (11p^2 + 11q^2 + 2pq) / 16."""
    return ContinuousOptimum(
        k1=Fraction(5 * p - q, 16),
        k2=Fraction(5 * q - p, 16),
        tau1=Fraction(q + 3 * p, 8),
        tau2=Fraction(3 * q + p, 8),
        value=Fraction(11 * p * p + 11 * q * q + 2 * p * q, 16),
    )


def _integral_feasible(p: int, q: int, point: ContinuousOptimum) -> tuple[int, int, int, int] | None:
    coords = (point.k1, point.k2, point.tau1, point.tau2)
    if any(c.denominator != 1 for c in coords):
        return None
    k1, k2, tau1, tau2 = (int(c) for c in coords)
    if min(k1, k2) < 0 or min(tau1, tau2) < 1 or 2 * k1 + tau1 > p or 2 * k2 + tau2 > q:
        return None
    return k1, k2, tau1, tau2


def exception_table_member(p: int, q: int) -> bool:
    """Whether (p, q) mod 16 appears in the exception table (with the +-1 symmetry)."""
    pm, qm = p % 16, q % 16
    for a, residues in EXCEPTION_TABLE.items():
        for sign in (1, -1):
            if (sign * a) % 16 == pm and any((sign * b) % 16 == qm for b in residues):
                return True
    return False


def in_ratio(p: int, q: int, ratio_bound: Fraction = DEFAULT_RATIO_BOUND) -> bool:
    """Whether 1/ratio_bound <= p/q <= ratio_bound."""
    return q <= ratio_bound * p and p <= ratio_bound * q


@dataclass(frozen=True)
class DimReport:
    p: int
    q: int
    rho: int
    nu: int
    case1_dim: int
    case2_dim: int
    argmax: tuple[int, int, int, int]
    """(k1, k2, tau1, tau2) of the first maximizing case-2 stratum."""
    in_exception_table: bool
    continuous_point: tuple[int, int, int, int] | None
    """The continuous optimum when it is integral and feasible."""

    @property
    def gap(self) -> int:
        return self.nu - self.rho

    def to_dict(self) -> dict[str, Any]:
        opt = continuous_optimum(self.p, self.q)
        return {
            "p": self.p,
            "q": self.q,
            "rho": self.rho,
            "nu": self.nu,
            "gap": self.gap,
            "case1_dim": self.case1_dim,
            "case2_dim": self.case2_dim,
            "argmax": dict(zip(("k1", "k2", "tau1", "tau2"), self.argmax, strict=True)),
            "in_exception_table": self.in_exception_table,
            "in_ratio": in_ratio(self.p, self.q),
            "continuous_optimum": {
                "k1": format_rational(opt.k1),
                "k2": format_rational(opt.k2),
                "tau1": format_rational(opt.tau1),
                "tau2": format_rational(opt.tau2),
                "value": format_rational(opt.value),
                "integral_feasible": self.continuous_point is not None,
                "delta": delta(self.p, self.q, *self.continuous_point) if self.continuous_point else None,
            },
        }


def nu(p: int, q: int) -> DimReport:
    """Maximal stratum dimension of the solution variety for A = diag(I_p, 0_q).

    Case 1 (X commutes with A) contributes the two cube varieties; case 2 maximizes delta over all
    Jordan data with eigenvalue 1 present in both P and S (tau1, tau2 >= 1). Blocks larger than
    MAX_BLOCK_SIZE are rejected.
    """
    rho_value = rho(p, q)
    _check_block_size(p=p, q=q)
    case1 = cube_variety_dim(p).dim + cube_variety_dim(q).dim
    best_p, arg_p = _best_by_tau(p)
    best_q, arg_q = _best_by_tau(q)
    tau1 = np.arange(1, p + 1, dtype=np.int64)
    tau2 = np.arange(1, q + 1, dtype=np.int64)
    grid = best_p[1:, None] + best_q[None, 1:] + np.multiply.outer(tau1, tau2)
    i, j = np.unravel_index(int(grid.argmax()), grid.shape)
    case2 = int(grid[i, j])
    argmax = (int(arg_p[i + 1]), int(arg_q[j + 1]), int(i) + 1, int(j) + 1)
    report = DimReport(
        p=p,
        q=q,
        rho=rho_value,
        nu=max(case1, case2),
        case1_dim=case1,
        case2_dim=case2,
        argmax=argmax,
        in_exception_table=exception_table_member(p, q),
        continuous_point=_integral_feasible(p, q, continuous_optimum(p, q)),
    )
    logger.debug(f"nu({p},{q}) = {report.nu}, rho = {rho_value}, argmax = {argmax}")
    return report


@dataclass(frozen=True)
class ScanRow:
    p: int
    q: int
    rho: int
    nu: int
    in_table: bool
    in_ratio: bool
    case1_dim: int

    @property
    def gap(self) -> int:
        return self.nu - self.rho

    @property
    def mismatch(self) -> bool:
        """In-ratio couple whose gap is not 0 or -1, or disagrees with the exception table."""
        if not self.in_ratio:
            return False
        return self.gap not in {0, -1} or (self.gap == -1) != self.in_table


@dataclass(frozen=True)
class ScanReport:
    rows: tuple[ScanRow, ...]
    ratio_bound: Fraction

    @property
    def in_ratio_rows(self) -> list[ScanRow]:
        return [r for r in self.rows if r.in_ratio]

    @property
    def exception_count(self) -> int:
        return sum(1 for r in self.in_ratio_rows if r.gap == -1)

    @property
    def exception_fraction(self) -> Fraction:
        total = len(self.in_ratio_rows)
        return Fraction(self.exception_count, total) if total else Fraction(0)

    @property
    def mismatches(self) -> list[ScanRow]:
        return [r for r in self.rows if r.mismatch]

    @property
    def outside_ratio(self) -> list[ScanRow]:
        return [r for r in self.rows if not r.in_ratio]

    def summary(self) -> dict[str, Any]:
        return {
            "couples": len(self.in_ratio_rows),
            "exceptions": self.exception_count,
            "exception_fraction": format_rational(self.exception_fraction),
            "exception_fraction_decimal": f"{float(self.exception_fraction):.6f}",
            "mismatches": len(self.mismatches),
            "ratio_bound": format_rational(self.ratio_bound),
        }

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["p", "q", "rho", "nu", "gap", "in_table", "in_ratio"])
        for r in self.rows:
            writer.writerow([r.p, r.q, r.rho, r.nu, r.gap, int(r.in_table), int(r.in_ratio)])
        s = self.summary()
        buffer.write(
            f"# exception_fraction={s['exception_fraction_decimal']} ({s['exception_fraction']}), "
            f"couples={s['couples']}, exceptions={s['exceptions']}, mismatches={s['mismatches']}\n"
        )
        return buffer.getvalue()


def _scan_row(p: int, q: int, ratio_bound: Fraction) -> ScanRow:
    report = nu(p, q)
    return ScanRow(
        p=p,
        q=q,
        rho=report.rho,
        nu=report.nu,
        in_table=report.in_exception_table,
        in_ratio=in_ratio(p, q, ratio_bound),
        case1_dim=report.case1_dim,
    )


def _scan_p(p: int, q_max: int, ratio_bound: Fraction) -> list[ScanRow]:
    return [_scan_row(p, q, ratio_bound) for q in range(1, q_max + 1) if in_ratio(p, q, ratio_bound)]


def scan(
    p_max: int = DEFAULT_SCAN_WINDOW,
    q_max: int = DEFAULT_SCAN_WINDOW,
    ratio_bound: Fraction = DEFAULT_RATIO_BOUND,
    *,
    workers: int | None = None,
    extra_couples: Iterable[tuple[int, int]] = (),
) -> ScanReport:
    """Compare nu with rho on every in-ratio couple of [1, p_max] x [1, q_max].

    Rows for one p at a time are distributed over a process pool (``workers=1`` runs inline) and
    merged in (p, q) order. ``extra_couples`` are evaluated as well and kept with their ratio flag.
    """
    if p_max < 1 or q_max < 1:
        msg = f"Scan window must be positive, got {p_max}x{q_max}"
        raise InputValidationError(msg)
    _check_block_size(p_max=p_max, q_max=q_max)
    if workers is not None and workers < 1:
        msg = f"workers must be at least 1, got {workers}"
        raise InputValidationError(msg)
    if ratio_bound < 1:
        msg = f"Ratio bound must be at least 1, got {format_rational(ratio_bound)}"
        raise InputValidationError(msg)
    ps = list(range(1, p_max + 1))
    rows: list[ScanRow] = []
    if workers == 1:
        for p in ps:
            rows.extend(_scan_p(p, q_max, ratio_bound))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for chunk in pool.map(_scan_p, ps, [q_max] * len(ps), [ratio_bound] * len(ps)):
                rows.extend(chunk)
    seen = {(r.p, r.q) for r in rows}
    extras: Sequence[tuple[int, int]] = [c for c in extra_couples if c not in seen]
    rows.extend(_scan_row(p, q, ratio_bound) for p, q in extras)
    rows.sort(key=lambda r: (r.p, r.q))
    report = ScanReport(rows=tuple(rows), ratio_bound=ratio_bound)
    logger.info(
        f"Scanned {len(report.in_ratio_rows)} couples: exception fraction "
        f"{float(report.exception_fraction):.4f}, {len(report.mismatches)} mismatches"
    )
    return report
