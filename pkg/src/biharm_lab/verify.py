"""Pointwise verification of the Laplacian lower bounds on solution profiles.

Margin conventions: every check produces a margin field whose nonnegativity
(up to -tol * scale on the trimmed interior) is the claim being verified.
First-order margins use tol = 1e-8; margins that difference a derived field
twice (the auxiliary-function checks) use tol = 1e-6 because the composition
amplifies truncation error by two derivative orders.

The Laplacian entering the auxiliary function w = -lap u + alpha A + beta B
is the profile's stored field z; the derived quantities (w', lap w, lap B)
are evaluated with the finite-difference stencils.  Growth hypotheses cannot
be certified from a finite window, so reports carry a heuristic caveat flag
instead of a growth precondition.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .biharmonic import SolutionProfile
from .errors import DomainError, PreconditionError
from .grids import Field, derivative_values, laplacian_values
from .params import (ParamSet, beta_max, check_admissible, coefficients,
                     gamma_interval, weak_coefficient)
from .reports import (TOL_FIRST_ORDER, TOL_SECOND_ORDER, VerificationReport,
                      report_from_margin)

GROWTH_CAVEAT = "growth: heuristic (finite-window tail test only)"


@dataclass
class AuxFields:
    """Derived fields of a profile for fixed (alpha, beta, gamma)."""

    A: Field          # u^(-1) |grad u|^2
    B: Field          # u^(-(q-1)/2)
    w: Field          # -lap u + alpha A + beta B
    w_gamma: Field    # u^(-gamma) w


def aux_fields(profile: SolutionProfile, alpha: float, beta: float,
               gamma: float = 0.0) -> AuxFields:
    """A, B, w and the u^(-gamma)-weighted w for a positive profile."""
    profile.require_positive()
    if not (0.0 <= gamma < 1.0):
        raise DomainError(f"gamma must lie in [0, 1), got {gamma}")
    g = profile.grid
    u = profile.u.values
    if np.any(u <= 0):
        raise DomainError("profile has non-positive u values")
    du = profile.du.values
    A = du * du / u
    B = u ** (-(profile.q - 1.0) / 2.0)
    w = -profile.z.values + alpha * A + beta * B
    w_gamma = u ** (-gamma) * w
    return AuxFields(A=Field(g, A), B=Field(g, B, positive=True),
                     w=Field(g, w), w_gamma=Field(g, w_gamma))


def _growth_guard_ok(profile: SolutionProfile, exponent: float = 2.0) -> bool:
    """Tail test: u / r^exponent non-increasing past its last interior rise."""
    r = profile.grid.r
    if r[-1] < 5.0:
        return True  # window too short to say anything; caveat stays on
    tail = r >= 0.5 * r[-1]
    ratio = profile.u.values[tail] / r[tail] ** exponent
    d = np.diff(ratio)
    return bool(np.all(d[len(d) // 2:] <= 1e-12))


def verify_pointwise_bound(profile: SolutionProfile, alpha: float, beta: float,
                           check_region: bool = True) -> VerificationReport:
    """Margin lap u - alpha u^(-1)|grad u|^2 - beta u^(-(q-1)/2) >= 0."""
    profile.require_positive()
    params = ParamSet(n=profile.n, q=profile.q, alpha=alpha, beta=beta)
    caveats = [GROWTH_CAVEAT]
    if check_region:
        res = check_admissible(params)
        if not res.admissible:
            raise PreconditionError("; ".join(res.reasons))
        if not _growth_guard_ok(profile):
            caveats.append("growth guard: tail ratio still rising at window end")
    aux = aux_fields(profile, alpha, beta)
    margin = profile.z.values - alpha * aux.A.values - beta * aux.B.values
    scale = max(1.0, float(profile.z.values.max()))
    return report_from_margin("laplacian-lower-bound", Field(profile.grid, margin),
                              TOL_FIRST_ORDER, scale, params.to_dict(), caveats)


def verify_sharp_bound(profile: SolutionProfile) -> VerificationReport:
    """The alpha = 1/2 bound with coefficient sqrt(2/(q-1-2/n)); needs q >= 3."""
    if profile.q < 3:
        raise PreconditionError(f"the alpha = 1/2 bound needs q >= 3, got q = {profile.q}")
    beta = beta_max(0.5, profile.q, profile.n)
    rep = verify_pointwise_bound(profile, 0.5, beta)
    rep.inequality = "laplacian-lower-bound-max-alpha"
    return rep


def verify_weak_bound(profile: SolutionProfile) -> VerificationReport:
    """Baseline gradient-free bound lap u >= sqrt(2/(q-1)) u^(-(q-1)/2)."""
    rep = verify_pointwise_bound(profile, 0.0, weak_coefficient(profile.q),
                                 check_region=False)
    rep.inequality = "laplacian-lower-bound-weak"
    rep.caveats = []  # holds for every positive solution, no growth hypothesis
    return rep


def verify_gradient_bound(profile: SolutionProfile) -> VerificationReport:
    """Gradient-only bound lap u >= |grad u|^2 / (2u), valid for every q > 1."""
    profile.require_positive()
    aux = aux_fields(profile, 0.5, 0.0)
    margin = profile.z.values - 0.5 * aux.A.values
    scale = max(1.0, float(profile.z.values.max()))
    return report_from_margin(
        "laplacian-gradient-bound", Field(profile.grid, margin),
        TOL_FIRST_ORDER, scale,
        {"n": profile.n, "q": profile.q, "alpha": 0.5, "beta": 0.0},
        [GROWTH_CAVEAT])


def _aux_rhs(profile, aux, coefs, alpha, beta):
    g = profile.grid
    dw = derivative_values(aux.w.values, g.h)
    A, B, w = aux.A.values, aux.B.values, aux.w.values
    rhs = (-2.0 * alpha * profile.du.values * dw
           + (2.0 * alpha / g.n) * w * w
           + coefs.K1 * alpha * A * w + coefs.K2 * beta * B * w
           + coefs.I1 * alpha * A * A + coefs.I2 * B * B + coefs.I3 * beta * A * B)
    return rhs


def verify_aux_inequality(profile: SolutionProfile, alpha: float,
                          beta: float) -> VerificationReport:
    """Differential inequality for the auxiliary function w.

    Checks u lap w >= -2 alpha u' w' + (2 alpha/n) w^2 + K1 alpha A w
    + K2 beta B w + I1 alpha A^2 + I2 B^2 + I3 beta A B, which holds for all
    positive alpha, beta on any positive solution (no region restriction).
    """
    profile.require_positive()
    params = ParamSet(n=profile.n, q=profile.q, alpha=alpha, beta=beta)
    coefs = coefficients(params)
    aux = aux_fields(profile, alpha, beta)
    g = profile.grid
    lhs = profile.u.values * laplacian_values(aux.w.values, g.h, g.n)
    margin = lhs - _aux_rhs(profile, aux, coefs, alpha, beta)
    scale = max(1.0, float(np.abs(lhs[g.trim_slice()]).max()))
    return report_from_margin("aux-differential-inequality", Field(g, margin),
                              TOL_SECOND_ORDER, scale, params.to_dict())


def laplacian_identity_defect(profile: SolutionProfile, alpha: float,
                              beta: float) -> VerificationReport:
    """Identity u lap B = p B w + p (p+1-alpha) A B - p beta B^2, p = (q-1)/2.

    This is an equality; the report checks |defect| <= tol * scale two-sided.
    """
    profile.require_positive()
    p = (profile.q - 1.0) / 2.0
    aux = aux_fields(profile, alpha, beta)
    g = profile.grid
    A, B, w = aux.A.values, aux.B.values, aux.w.values
    lhs = profile.u.values * laplacian_values(B, g.h, g.n)
    rhs = p * B * w + p * (p + 1.0 - alpha) * A * B - p * beta * B * B
    scale = max(1.0, float(np.abs(lhs[g.trim_slice()]).max()))
    return report_from_margin(
        "power-field-laplacian-identity", Field(g, lhs - rhs),
        TOL_SECOND_ORDER, scale,
        {"n": profile.n, "q": profile.q, "alpha": alpha, "beta": beta},
        two_sided=True)


def verify_weighted_aux_inequality(profile: SolutionProfile, alpha: float,
                                   beta: float, gamma: float) -> VerificationReport:
    """The u^(-gamma)-weighted form of the auxiliary differential inequality.

    Checks u^(1-gamma) lap w_g >= J1 w_g^2 + u^(-gamma) (-2 J2 u' w_g'
    + L1 A w_g + L2 B w_g) for gamma in the feasible interval.
    """
    profile.require_positive()
    interval = gamma_interval(alpha, profile.q, profile.n)
    if not interval.contains(gamma):
        raise PreconditionError(
            f"gamma = {gamma} outside the feasible interval [0, {interval.gamma_star:.6g})")
    params = ParamSet(n=profile.n, q=profile.q, alpha=alpha, beta=beta, gamma=gamma)
    coefs = coefficients(params)
    aux = aux_fields(profile, alpha, beta, gamma)
    g = profile.grid
    u = profile.u.values
    wg = aux.w_gamma.values
    dwg = derivative_values(wg, g.h)
    lhs = u ** (1.0 - gamma) * laplacian_values(wg, g.h, g.n)
    rhs = (coefs.J1 * wg * wg
           + u ** (-gamma) * (-2.0 * coefs.J2 * profile.du.values * dwg
                              + coefs.L1 * aux.A.values * wg
                              + coefs.L2 * aux.B.values * wg))
    scale = max(1.0, float(np.abs(lhs[g.trim_slice()]).max()))
    return report_from_margin("weighted-aux-differential-inequality",
                              Field(g, lhs - rhs), TOL_SECOND_ORDER, scale,
                              params.to_dict())


def scalar_curvature(profile: SolutionProfile) -> tuple[Field, VerificationReport]:
    """Scalar curvature of the conformal metric u^(2/(n-2)) g_flat.

    scal = -(2(n-1)/(n-2)) (lap u - |grad u|^2/(2u)) u^(-n/(n-2)); the report
    asserts it is negative (up to tolerance) on the trimmed interior.
    """
    profile.require_positive()
    n = profile.n
    u = profile.u.values
    du = profile.du.values
    expr = profile.z.values - du * du / (2.0 * u)
    scal = -(2.0 * (n - 1.0) / (n - 2.0)) * expr * u ** (-n / (n - 2.0))
    g = profile.grid
    fld = Field(g, scal)
    sl = g.trim_slice()
    scale = max(1.0, float(np.abs(scal[sl]).max()))
    idx = int(np.argmax(scal[sl]))
    worst = float(scal[sl][idx])
    rep = VerificationReport(
        inequality="conformal-scalar-curvature-negative",
        params={"n": n, "q": profile.q}, passed=bool(worst <= TOL_FIRST_ORDER * scale),
        min_margin=-worst, argmin_r=float(g.r[sl][idx]),
        tol=TOL_FIRST_ORDER, scale=scale, margin=fld, caveats=[GROWTH_CAVEAT])
    return fld, rep


def margin_refinement_order(margins: list[np.ndarray], stride: int = 2) -> float:
    """Observed order from margin fields on three nested grids (h, h/2, h/4)."""
    from .grids import self_convergence_order
    return self_convergence_order(margins, stride=stride)
