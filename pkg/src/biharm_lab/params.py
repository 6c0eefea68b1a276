"""Coefficient formulas and admissibility conditions for the pointwise bounds.

The admissible region for the Laplacian lower bound

    lap u >= alpha u^(-1)|grad u|^2 + beta u^(-(q-1)/2)

is cut out by three inequalities: alpha <= 1/2, beta <= beta_max(alpha, q, n)
and q >= q_min(alpha, n).  The derived coefficients of the auxiliary-function
differential inequality (I1, I2, I3, K1, K2, and the gamma-weighted J1, J2,
L1, L2) are all elementary algebra in (n, q, alpha, beta, gamma); on the
admissible set the I's are nonnegative and the K's positive, and for gamma
inside the feasible interval L1, L2 are strictly positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, PreconditionError

#: comparison slack for region boundaries (boundaries are algebraic numbers)
BOUNDARY_TOL = 1e-12


def _leq(a: float, b: float) -> bool:
    return a <= b + BOUNDARY_TOL * max(1.0, abs(a), abs(b))


def _lt(a: float, b: float) -> bool:
    return a < b - BOUNDARY_TOL * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class ParamSet:
    """The tuple (n, q, alpha, beta, gamma) the verifiers are parameterized by."""

    n: int
    q: float
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float | None = None

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"dimension must satisfy n >= 3, got {self.n}")
        if not self.q > 1:
            raise DomainError(f"singular exponent must satisfy q > 1, got {self.q}")
        if self.alpha < 0 or self.beta < 0:
            raise DomainError("alpha and beta must be nonnegative")
        if self.gamma is not None and not (0 <= self.gamma < 1):
            raise DomainError(f"gamma must lie in [0, 1), got {self.gamma}")

    @property
    def p_half(self) -> float:
        return (self.q - 1.0) / 2.0

    def to_dict(self) -> dict:
        return {"n": self.n, "q": self.q, "alpha": self.alpha,
                "beta": self.beta, "gamma": self.gamma}


@dataclass(frozen=True)
class Coefficients:
    """Derived coefficients of the auxiliary differential inequality."""

    I1: float
    I2: float
    I3: float
    K1: float
    K2: float
    J1: float
    J2: float
    L1: float
    L2: float
    p_half: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in
                ("I1", "I2", "I3", "K1", "K2", "J1", "J2", "L1", "L2", "p_half")}


def coefficients(params: ParamSet) -> Coefficients:
    """All nine derived coefficients; gamma defaults to 0 when unset."""
    n, q, a, b = params.n, params.q, params.alpha, params.beta
    g = params.gamma if params.gamma is not None else 0.0
    p = params.p_half
    K1 = 1.0 + 4.0 * (1.0 - 2.0 * a) / n
    K2 = p - 4.0 * a / n
    return Coefficients(
        I1=(2.0 / n) * (1.0 - 2.0 * a) ** 2 - 2.0 * a * a + a,
        I2=1.0 + (2.0 / n) * a * b * b - p * b * b,
        I3=p * ((q + 1.0) / 2.0 - a) - a * (q - 8.0 * a / n + 4.0 / n),
        K1=K1,
        K2=K2,
        J1=2.0 * a / n + g,
        J2=a + g,
        L1=K1 * a - 3.0 * g * a - g * g + g,
        L2=(K2 - g) * b,
        p_half=p,
    )


def _q_floor(alpha: float, n: int) -> float:
    return 3.0 * alpha + math.sqrt(9.0 * alpha * alpha
                                   + (1.0 - 2.0 * alpha) * (1.0 + 16.0 * alpha / n))


def q_min(alpha: float, n: int) -> float:
    """Smallest admissible q for a given gradient coefficient alpha in (0, 1/2]."""
    if not (0.0 < alpha <= 0.5):
        raise DomainError(f"alpha must lie in (0, 1/2], got {alpha}")
    if n < 3:
        raise DomainError(f"dimension must satisfy n >= 3, got {n}")
    return _q_floor(alpha, n)


def beta_max(alpha: float, q: float, n: int) -> float:
    """Largest admissible singular-term coefficient beta."""
    den = q - 1.0 - 4.0 * alpha / n
    if den <= 0:
        raise DomainError(
            f"beta_max undefined: q - 1 - 4*alpha/n = {den} must be positive")
    return math.sqrt(2.0 / den)


def weak_coefficient(q: float) -> float:
    """Baseline coefficient sqrt(2/(q-1)) of the gradient-free bound."""
    if not q > 1:
        raise DomainError(f"requires q > 1, got {q}")
    return math.sqrt(2.0 / (q - 1.0))


@dataclass(frozen=True)
class AdmissibilityResult:
    admissible: bool
    reasons: list[str]
    coefficient_signs: dict[str, int]
    coefficients: Coefficients

    def to_dict(self) -> dict:
        return {"admissible": self.admissible, "reasons": list(self.reasons),
                "coefficient_signs": dict(self.coefficient_signs),
                "coefficients": self.coefficients.to_dict()}


def check_admissible(params: ParamSet) -> AdmissibilityResult:
    """Evaluate the three region inequalities and report coefficient signs.

    The verdict mirrors the non-strict boundary convention of the region
    (<= / >=); the sign report lets callers confirm that admissibility forces
    I1, I2, I3 >= 0 and K1, K2 > 0.
    """
    n, q, a, b = params.n, params.q, params.alpha, params.beta
    reasons = []
    alpha_ok = _leq(a, 0.5)
    if not alpha_ok:
        reasons.append(f"alpha <= 1/2 violated (alpha = {a})")
    den = q - 1.0 - 4.0 * a / n
    if den <= 0:
        reasons.append(
            f"beta <= beta_max violated (beta_max undefined: q <= 1 + 4*alpha/n, q = {q})")
    elif not _leq(b, math.sqrt(2.0 / den)):
        reasons.append(
            f"beta <= beta_max violated (beta = {b}, beta_max = {math.sqrt(2.0 / den):.12g})")
    if alpha_ok:
        qf = _q_floor(min(a, 0.5), n)
        if not _leq(qf, q):
            reasons.append(f"q >= q_min violated (q = {q}, q_min = {qf:.12g})")

    coefs = coefficients(params)

    def sign(x: float) -> int:
        if abs(x) <= BOUNDARY_TOL:
            return 0
        return 1 if x > 0 else -1

    signs = {k: sign(getattr(coefs, k)) for k in ("I1", "I2", "I3", "K1", "K2")}
    return AdmissibilityResult(admissible=not reasons, reasons=reasons,
                               coefficient_signs=signs, coefficients=coefs)


@dataclass(frozen=True)
class GammaInterval:
    """Feasible growth weights [0, gamma_star); empty when gamma_star <= 0."""

    gamma_star: float

    @property
    def is_empty(self) -> bool:
        return self.gamma_star <= 0

    def contains(self, gamma: float) -> bool:
        return 0.0 <= gamma < self.gamma_star


def gamma_interval(alpha: float, q: float, n: int) -> GammaInterval:
    """Feasible interval for the weight gamma of the u^(-gamma)-scaled check.

    gamma_star is the least of: the positive root of
    g^2 + (3 alpha - 1) g - alpha - 4 alpha (1 - 2 alpha)/n = 0, the bound
    (q - 1 - 8 alpha/n)/2, and 1.
    """
    res = check_admissible(ParamSet(n=n, q=q, alpha=alpha, beta=0.0))
    if not res.admissible:
        raise PreconditionError("; ".join(res.reasons))
    b_lin = 3.0 * alpha - 1.0
    c_const = -(alpha + 4.0 * alpha * (1.0 - 2.0 * alpha) / n)
    root = (-b_lin + math.sqrt(b_lin * b_lin - 4.0 * c_const)) / 2.0
    cap = (q - 1.0 - 8.0 * alpha / n) / 2.0
    return GammaInterval(gamma_star=min(root, cap, 1.0))


def growth_exponent(gamma: float) -> float:
    """Admissible growth power 2/(1-gamma) for the weight gamma."""
    if not (0.0 <= gamma < 1.0):
        raise DomainError(f"gamma must lie in [0, 1), got {gamma}")
    return 2.0 / (1.0 - gamma)


def tau(q: float, n: int) -> float:
    """Growth power min{4, 4/(-q + 3 + 4/n)_+} of the alpha = 1/2 bound."""
    if q < 3 or n < 3:
        raise DomainError(f"requires q >= 3 and n >= 3, got q = {q}, n = {n}")
    pos = max(0.0, -q + 3.0 + 4.0 / n)
    second = math.inf if pos == 0.0 else 4.0 / pos
    return min(4.0, second)
