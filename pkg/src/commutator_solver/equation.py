"""
Residuals of XA - AX = f(X), the linear operator governing off-diagonal blocks, and checkers for
the structural identities every solution satisfies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import TYPE_CHECKING, Any

from . import linalg
from .exceptions import DimensionMismatchError, InputValidationError, PreconditionError
from .matrix import RatMatrix
from .polynomial import CUBIC, DensePoly, FactoredPoly, as_dense, divided_difference, poly_eval_matrix
from .rational import format_rational, to_rational
from .serialization import matrix_to_json

if TYPE_CHECKING:
    from .rational import RationalLike

logger: logging.Logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EquationInstance:
    """The data (A, f) of XA - AX = f(X), with an optional diagonalizer of A."""

    a: RatMatrix
    f: FactoredPoly | DensePoly
    diagonalizer: RatMatrix | None = None
    _dense_f: DensePoly = field(init=False, repr=False, compare=False)
    _diagonal: RatMatrix | None = field(init=False, repr=False, compare=False)
    _diagonalizer_inverse: RatMatrix | None = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.a.is_square:
            msg = f"A must be square, got {self.a.rows}x{self.a.cols}"
            raise InputValidationError(msg)
        object.__setattr__(self, "_dense_f", as_dense(self.f))
        if self.diagonalizer is None:
            diag = self.a if self.a.is_diagonal() else None
            object.__setattr__(self, "_diagonal", diag)
            object.__setattr__(self, "_diagonalizer_inverse", None)
            return
        if self.diagonalizer.shape != self.a.shape:
            msg = f"Diagonalizer is {self.diagonalizer.rows}x{self.diagonalizer.cols}, A is {self.a.rows}x{self.a.cols}"
            raise DimensionMismatchError(msg)
        inv = linalg.inverse(self.diagonalizer)
        diag = inv @ self.a @ self.diagonalizer
        if not diag.is_diagonal():
            msg = "Supplied diagonalizer does not diagonalize A"
            raise InputValidationError(msg)
        object.__setattr__(self, "_diagonal", diag)
        object.__setattr__(self, "_diagonalizer_inverse", inv)

    @property
    def n(self) -> int:
        return self.a.rows

    @property
    def dense_f(self) -> DensePoly:
        return self._dense_f

    @property
    def diagonal_form(self) -> RatMatrix | None:
        """D with A = P D P^-1 when A is diagonal or a diagonalizer was supplied, else None."""
        return self._diagonal

    def to_eigen_coordinates(self, v: RatMatrix) -> RatMatrix:
        """Coordinates of v in the eigenbasis given by the diagonalizer (identity when A is diagonal)."""
        if self._diagonalizer_inverse is None:
            return v
        return self._diagonalizer_inverse @ v


def cubic_instance(a: RatMatrix) -> EquationInstance:
    """Instance of XA - AX = X^2 - X^3."""
    return EquationInstance(a=a, f=CUBIC)


@dataclass(frozen=True)
class ResidualReport:
    """Outcome of substituting X into the equation."""

    residual: RatMatrix
    is_solution: bool
    f_of_x_nilpotent: bool
    nilpotency_index: int | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "residual": matrix_to_json(self.residual),
            "is_solution": self.is_solution,
            "f_of_X_nilpotent": self.f_of_x_nilpotent,
            "nilpotency_index": self.nilpotency_index,
        }


def _check_conformable(inst: EquationInstance, x: RatMatrix) -> None:
    if x.shape != inst.a.shape:
        msg = f"X is {x.rows}x{x.cols} but A is {inst.a.rows}x{inst.a.cols}"
        raise DimensionMismatchError(msg)


def nilpotency_index(m: RatMatrix) -> int | None:
    """Smallest k <= n with m^k = 0, or None when m is not nilpotent."""
    power = RatMatrix.identity(m.rows)
    for k in range(1, m.rows + 1):
        power = power @ m
        if power.is_zero():
            return k
    return 0 if m.rows == 0 else None


def commutator(x: RatMatrix, a: RatMatrix) -> RatMatrix:
    """XA - AX."""
    return x @ a - a @ x


def residual(inst: EquationInstance, x: RatMatrix) -> ResidualReport:
    """Compute XA - AX - f(X) exactly, and whether f(X) is nilpotent."""
    _check_conformable(inst, x)
    f_x = poly_eval_matrix(inst.dense_f, x)
    res = commutator(x, inst.a) - f_x
    index = nilpotency_index(f_x)
    report = ResidualReport(
        residual=res,
        is_solution=res.is_zero(),
        f_of_x_nilpotent=index is not None,
        nilpotency_index=index,
    )
    logger.debug(f"Residual of {x.rows}x{x.cols} candidate: solution={report.is_solution}, nilpotency={index}")
    return report


def is_solution(inst: EquationInstance, x: RatMatrix) -> bool:
    _check_conformable(inst, x)
    return (commutator(x, inst.a) - poly_eval_matrix(inst.dense_f, x)).is_zero()


def require_solution(inst: EquationInstance, x: RatMatrix) -> None:
    if not is_solution(inst, x):
        msg = "X does not solve XA - AX = f(X) for the given A and f"
        raise PreconditionError(msg)


def block_poly_operator(f: FactoredPoly | DensePoly, p: RatMatrix, s: RatMatrix) -> RatMatrix:
    """Matrix of Q -> sum_k a_k sum_{i+j=k-1} P^i Q S^j in the column-stacking convention.

    This is the (1,2) block of f([[P, Q], [0, S]]) as a function of Q, so the returned matrix is
    sum_k a_k sum_{i+j=k-1} (S^T)^j kron P^i, of size pq x pq.
    """
    if not p.is_square or not s.is_square:
        msg = f"Diagonal blocks must be square, got {p.rows}x{p.cols} and {s.rows}x{s.cols}"
        raise DimensionMismatchError(msg)
    coeffs = as_dense(f).coeffs
    size = p.rows * s.rows
    total = RatMatrix.zeros(size, size)
    if len(coeffs) < 2:
        return total
    top = len(coeffs) - 1
    p_powers = [RatMatrix.identity(p.rows)]
    st_powers = [RatMatrix.identity(s.rows)]
    st = s.T
    for _ in range(top - 1):
        p_powers.append(p_powers[-1] @ p)
        st_powers.append(st_powers[-1] @ st)
    for k in range(1, top + 1):
        a_k = coeffs[k]
        if a_k == 0:
            continue
        for i in range(k):
            total += linalg.kron(st_powers[k - 1 - i], p_powers[i]).scale(a_k)
    return total


def off_diagonal_block(f: FactoredPoly | DensePoly, p: RatMatrix, q: RatMatrix, s: RatMatrix) -> RatMatrix:
    """The (1,2) block of f([[P, Q], [0, S]]) computed by direct evaluation."""
    x = RatMatrix.block([[p, q], [RatMatrix.zeros(s.rows, p.cols), s]])
    return poly_eval_matrix(f, x).submatrix(0, p.rows, p.cols, p.cols + s.cols)


def diagonal_operator_spectrum(f: FactoredPoly | DensePoly, p: RatMatrix, s: RatMatrix) -> list[Fraction]:
    """Eigenvalues f[alpha_i, beta_j] of the block operator for diagonal P, S, in vec order."""
    if not p.is_diagonal() or not s.is_diagonal():
        msg = "Operator spectrum is only read off for diagonal P and S"
        raise InputValidationError(msg)
    alphas, betas = p.diagonal_entries(), s.diagonal_entries()
    return [divided_difference(f, alpha, beta) for beta in betas for alpha in alphas]


def check_lemma_inva_i(
    inst: EquationInstance,
    x: RatMatrix,
    poly: DensePoly,
    p_exp: int,
    g: DensePoly,
) -> bool:
    """Whether P(X)A - A P(X) = P'(X) X^p g(X) for a solution of XA - AX = X^p g(X).

    Raises PreconditionError when X does not solve that equation or p < 2.
    """
    _check_conformable(inst, x)
    if p_exp < 2:
        msg = f"Exponent p must be at least 2, got {p_exp}"
        raise PreconditionError(msg)
    rhs_poly = DensePoly.monomial(p_exp) * g
    rhs = poly_eval_matrix(rhs_poly, x)
    if not (commutator(x, inst.a) - rhs).is_zero():
        msg = f"X does not solve XA - AX = X^{p_exp} g(X)"
        raise PreconditionError(msg)
    px = poly_eval_matrix(poly, x)
    return commutator(px, inst.a) == poly_eval_matrix(poly.derivative(), x) @ rhs


def kernel_basis(m: RatMatrix) -> list[RatMatrix]:
    return linalg.nullspace(m)


def check_kernel_invariance(inst: EquationInstance, x: RatMatrix, k: int) -> bool:
    """Whether ker(X^k) is A-invariant."""
    _check_conformable(inst, x)
    basis = kernel_basis(x.power(k))
    if not basis:
        return True
    images = [inst.a @ b for b in basis]
    return linalg.in_column_span(basis, images, inst.n)


def check_cube_annihilator(x: RatMatrix) -> bool:
    """Whether X^2 (I - X)^n = 0 with n the size of X."""
    n = x.rows
    return (x.power(2) @ (RatMatrix.identity(n) - x).power(n)).is_zero()


@dataclass(frozen=True)
class DecompCheck:
    """Eigenspace support of X u against the stabilization bound."""

    passes: bool
    support: tuple[Fraction, ...]
    stop: int
    """Smallest s >= 0 with lambda + s not an eigenvalue of A."""

    def to_dict(self) -> dict[str, Any]:
        return {
            "passes": self.passes,
            "support": [format_rational(v) for v in self.support],
            "stop": self.stop,
        }


def check_prop_decomp(inst: EquationInstance, x: RatMatrix, lam: RationalLike, u: RatMatrix) -> DecompCheck:
    """Decompose X u over the eigenspaces of A and check that it stays on lambda, ..., lambda + s - 1.

    s is the first step at which lambda + s leaves the spectrum. A must be diagonal or come with a
    diagonalizer, and X must solve the instance's equation.
    """
    _check_conformable(inst, x)
    diag = inst.diagonal_form
    if diag is None:
        msg = "Eigenspace decomposition needs A diagonal or a diagonalizer"
        raise InputValidationError(msg)
    if u.shape != (inst.n, 1):
        msg = f"u must be a {inst.n}x1 column, got {u.rows}x{u.cols}"
        raise DimensionMismatchError(msg)
    lam_value = to_rational(lam)
    if u.is_zero() or not (inst.a @ u - u.scale(lam_value)).is_zero():
        msg = f"u is not an eigenvector of A for {format_rational(lam_value)}"
        raise PreconditionError(msg)
    require_solution(inst, x)

    eigenvalues = diag.diagonal_entries()
    spectrum = set(eigenvalues)
    stop = 0
    while lam_value + stop in spectrum:
        stop += 1
    allowed = {lam_value + i for i in range(stop)}

    coords = inst.to_eigen_coordinates(x @ u)
    support = tuple(sorted({eigenvalues[i] for i in range(inst.n) if coords[i, 0] != 0}))
    passes = all(v in allowed for v in support)
    logger.debug(f"Decomposition at {format_rational(lam_value)}: support={support}, stop={stop}, passes={passes}")
    return DecompCheck(passes=passes, support=support, stop=stop)
