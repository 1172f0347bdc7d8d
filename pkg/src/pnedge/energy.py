"""Energies of the dislocation: misfit, reduced, perturbed and boxed.

The elastic energy of the core is infinite (stresses decay like 1/r),
so all comparisons are made in the perturbed sense: for a decaying
perturbation trace ``phi1`` on the slip plane, the slip-plane route

    ``E_gamma_hat = (c0/2) |phi1|_{H^1/2}^2
                    + c0 int phi1 (-d_xx)^{1/2} u1 dx
                    + int W(u1 + phi1) - W(u1) dx``

must agree with the half-plane route, where the first two terms are
replaced by 2-d quadrature of the strain-energy densities
``(1/2) sigma_phi : eps_phi`` and ``eps_phi : sigma_u`` of the elastic
extension.  The coefficient ``c0 = 2G/(1-nu)`` is carried explicitly so
the identity holds for physical constants.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DivergenceError
from .extension import (
    _analytic_stress,
    extend_trace_strains,
    strains_to_stresses,
)
from .grid import Grid1D
from .operators import hs_seminorm_grid, inner_h
from .params import PhysParams
from .potential import PotentialSpec, eval_potential
from .profile import Profile
from .static import half_laplacian_profile


# ---------------------------------------------------------------------------
# quadrature geometry for the half-plane integrals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxQuadrature:
    """Tensor quadrature for y-integrals over the half-planes.

    Trapezoid weights on a node set {0} + geometric(y_min, y_max, n);
    x-integration rides on the periodic grid (h * sum), which is exact
    for the spectral fields.
    """

    y_min: float
    y_max: float
    n_levels: int = 160

    @classmethod
    def for_params(cls, params: PhysParams, y_max_factor: float = 400.0,
                   n_levels: int = 160) -> "BoxQuadrature":
        z = params.zeta
        return cls(y_min=z / 50.0, y_max=y_max_factor * z, n_levels=n_levels)

    def nodes_weights(self) -> tuple[np.ndarray, np.ndarray]:
        ys = np.concatenate([[0.0], np.geomspace(self.y_min, self.y_max, self.n_levels)])
        w = np.zeros_like(ys)
        dy = np.diff(ys)
        w[:-1] += 0.5 * dy
        w[1:] += 0.5 * dy
        return ys, w


# ---------------------------------------------------------------------------
# perturbations of the static configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Perturbation:
    """Decaying slip-plane perturbation trace; extension built on demand.

    Only the upper trace is stored; the lower one follows from the
    boundary symmetry ``phi1+ = -phi1-``, ``phi2+ = phi2-``.
    """

    grid: Grid1D
    phi1: np.ndarray = field(repr=False)
    kind: str = "elastic_extension"

    def __post_init__(self):
        phi = np.asarray(self.phi1, dtype=float)
        if phi.shape != (self.grid.N,):
            raise ValueError(f"trace has shape {phi.shape}, expected ({self.grid.N},)")
        object.__setattr__(self, "phi1", phi)

    def check_decay(self, b: float, tol: float = 1e-8) -> bool:
        """|phi1| below tol*b outside the central half of the grid."""
        outside = np.abs(self.grid.x) > self.grid.L / 2.0
        return bool(np.all(np.abs(self.phi1[outside]) <= tol * b))


def seeded_perturbations(
    grid: Grid1D,
    params: PhysParams,
    n: int,
    seed: int,
    out_of_range: int = 0,
) -> list[Perturbation]:
    """Reproducible family of localized perturbation traces.

    Gaussian bumps with random center, width, amplitude and modulation;
    the last ``out_of_range`` entries get amplitudes large enough to push
    ``u1 + phi1`` outside [-b/4, b/4].
    """
    rng = np.random.default_rng(seed)
    z, b = params.zeta, params.b
    perts = []
    for i in range(n):
        big = i >= n - out_of_range
        amp = rng.uniform(0.3, 0.6) if big else rng.uniform(0.02, 0.08)
        center = rng.uniform(-3.0, 3.0) * z
        width = rng.uniform(1.0, 4.0) * z
        k = rng.uniform(0.0, 2.0) / z
        odd_mix = rng.uniform(0.2, 1.0)
        u = (grid.x - center) / width
        phi = amp * b * np.exp(-0.5 * u * u) * (np.cos(k * (grid.x - center)) + odd_mix * u)
        perts.append(Perturbation(grid=grid, phi1=phi))
    return perts


# ---------------------------------------------------------------------------
# slip-plane (Gamma) route
# ---------------------------------------------------------------------------

def misfit_energy(p: Profile, spec: PotentialSpec) -> float:
    """Misfit energy ``int W(u1) dx`` with analytic tail correction.

    The grid sum covers [-L, L); beyond the box the integrand is
    expanded about the nearest lattice well, ``W ~ (1/2) W''(m) (u1-m)^2``
    with the 1/x tail amplitude read off the boundary values, giving
    ``W''(m) c^2 / (2L)`` per side.  Raises if the integrand does not
    decay (nonzero well offset at the ends).
    """
    prm = p.params
    u1 = p.u1
    w = eval_potential(spec, u1, 0)
    left, right = p.boundary_values()
    period = spec.period
    scale = prm.G * prm.b**2 / prm.d

    tail = 0.0
    for uend, xend in ((right, p.grid.L), (left, -p.grid.L)):
        m = prm.b / 4.0 + period * np.round((uend - prm.b / 4.0) / period)
        dev = uend - m
        if eval_potential(spec, uend, 0) > 1e-3 * scale:
            raise DivergenceError(
                "misfit integrand does not decay: u1 at the domain end is "
                f"{uend:.4g}, not at a lattice well"
            )
        c = dev * xend  # 1/x tail amplitude
        tail += eval_potential(spec, m, 2) * c * c / (2.0 * abs(xend))
    return float(p.grid.h * np.sum(w) + tail)


def cross_term_gamma(p: Profile, phi: Perturbation) -> float:
    """Slip-plane cross term ``c0 int phi1 (-d_xx)^{1/2} u1 dx``."""
    lam_u1 = half_laplacian_profile(p)
    return p.params.c0 * inner_h(p.grid, phi.phi1, lam_u1)


def reduced_perturbed_energy(phi: Perturbation, p: Profile, spec: PotentialSpec) -> float:
    """Perturbed energy of the reduced slip-plane system.

    ``(c0/2)|phi1|^2_{H^1/2} + c0 int phi1 (-d_xx)^{1/2} u1
    + int [W(u1+phi1) - W(u1)]``.
    """
    quad = 0.5 * p.params.c0 * hs_seminorm_grid(p.grid, phi.phi1, 0.5)
    cross = cross_term_gamma(p, phi)
    u1 = p.u1
    mis = float(p.grid.h * np.sum(
        eval_potential(spec, u1 + phi.phi1, 0) - eval_potential(spec, u1, 0)
    ))
    return quad + cross + mis


# ---------------------------------------------------------------------------
# half-plane (2-d quadrature) route
# ---------------------------------------------------------------------------

def _phi_strains(grid: Grid1D, phi1: np.ndarray, nu: float, y: float):
    return extend_trace_strains(grid, phi1, nu, y)


def elastic_energy_of_trace(
    grid: Grid1D, phi1: np.ndarray, params: PhysParams,
    quad: Optional[BoxQuadrature] = None,
) -> float:
    """``E_els(phi) = (1/2) int sigma_phi : eps_phi`` of the elastic
    extension of a decaying trace, by level-wise quadrature over both
    half-planes."""
    quad = quad or BoxQuadrature.for_params(params)
    ys, wy = quad.nodes_weights()
    G, nu = params.G, params.nu
    lame = 2.0 * nu * G / (1.0 - 2.0 * nu)
    total = 0.0
    for y, wt in zip(ys, wy):
        e11, e22, e12 = _phi_strains(grid, phi1, nu, y)
        dens = G * (e11**2 + e22**2 + 2.0 * e12**2) + 0.5 * lame * (e11 + e22) ** 2
        total += wt * grid.h * float(np.sum(dens))
    return 2.0 * total  # mirror half-plane contributes equally


def cross_term_elastic(
    p: Profile, phi: Perturbation, quad: Optional[BoxQuadrature] = None
) -> float:
    """``C_els(u, phi) = int eps_phi : sigma_u`` over both half-planes.

    Background stress of u in closed form, correction spectrally; the
    integrand is even under the mirror map, so twice the upper integral.
    """
    quad = quad or BoxQuadrature.for_params(p.params)
    ys, wy = quad.nodes_weights()
    grid, prm = p.grid, p.params
    xs = grid.x - p.x0
    has_v = bool(np.any(p.v))
    total = 0.0
    for y, wt in zip(ys, wy):
        e11, e22, e12 = _phi_strains(grid, phi.phi1, prm.nu, y)
        s11, s12, s22, _ = _analytic_stress(xs, y, prm.G, prm.b, prm.nu, p.zeta_bg, +1.0)
        if has_v:
            ev = extend_trace_strains(grid, p.v, prm.nu, y)
            c11, c12, c22, _ = strains_to_stresses(*ev, prm.G, prm.nu)
            s11, s12, s22 = s11 + c11, s12 + c12, s22 + c22
        dens = e11 * s11 + e22 * s22 + 2.0 * e12 * s12
        total += wt * grid.h * float(np.sum(dens))
    return 2.0 * total


def cross_terms(
    p: Profile, phi: Perturbation, quad: Optional[BoxQuadrature] = None
) -> tuple[float, float]:
    """Both routes to the cross term: (C_els by 2-d quadrature,
    C_Gamma by slip-plane quadrature).  Equality is the key identity."""
    return cross_term_elastic(p, phi, quad), cross_term_gamma(p, phi)


def perturbed_total_energy(
    phi: Perturbation, p: Profile, spec: PotentialSpec,
    quad: Optional[BoxQuadrature] = None,
) -> float:
    """Perturbed total energy through the half-plane route.

    ``E_els(phi) + C_els(u, phi)`` by 2-d quadrature plus the misfit
    difference on the slip plane.  Warns when the perturbation's field
    has not decayed at the quadrature boundary.
    """
    quad = quad or BoxQuadrature.for_params(p.params)
    if not phi.check_decay(p.params.b):
        warnings.warn("perturbation trace above decay threshold outside the "
                      "central half of the grid", stacklevel=2)
    e_els = elastic_energy_of_trace(p.grid, phi.phi1, p.params, quad)
    c_els = cross_term_elastic(p, phi, quad)
    u1 = p.u1
    mis = float(p.grid.h * np.sum(
        eval_potential(spec, u1 + phi.phi1, 0) - eval_potential(spec, u1, 0)
    ))
    return e_els + c_els + mis


# ---------------------------------------------------------------------------
# boxed elastic energy (log divergence study)
# ---------------------------------------------------------------------------

def elastic_energy_box(
    p: Profile, R: float, n_x: int = 1024, n_levels: int = 192
) -> float:
    """Elastic energy ``(1/2) int sigma : eps`` over the box
    ``|x| <= R, |y| <= R`` minus the slip plane.

    Background stresses on a dedicated uniform x-window (decoupled from
    the profile grid), correction stresses spectrally on the profile
    grid restricted to the window.  Grows like ``slope * ln R`` for
    ``R >> zeta``.
    """
    if R > p.grid.L / 2.0:
        raise ValueError(f"box radius {R} exceeds L/2 = {p.grid.L / 2.0}")
    prm = p.params
    G, nu = prm.G, prm.nu

    def density(s11, s12, s22):
        return (s11**2 + s22**2 - nu * (s11 + s22) ** 2 + 2.0 * s12**2) / (4.0 * G)

    ys = np.concatenate([[0.0], np.geomspace(prm.zeta / 50.0, R, n_levels)])
    wy = np.zeros_like(ys)
    dy = np.diff(ys)
    wy[:-1] += 0.5 * dy
    wy[1:] += 0.5 * dy

    xw = np.linspace(-R, R, n_x)
    wx = np.full(n_x, xw[1] - xw[0])
    wx[0] *= 0.5
    wx[-1] *= 0.5

    has_v = bool(np.any(p.v))
    if has_v:
        # correction stresses live on the periodic grid; restrict to the window
        mask = np.abs(p.grid.x) <= R
        xg = p.grid.x[mask]
        wxg = np.full(xg.shape, p.grid.h)

    total = 0.0
    for y, wt in zip(ys, wy):
        s11, s12, s22, _ = _analytic_stress(xw - p.x0, y, G, prm.b, nu, p.zeta_bg, +1.0)
        total += wt * float(np.sum(wx * density(s11, s12, s22)))
        if has_v:
            ev = extend_trace_strains(p.grid, p.v, nu, y)
            c11, c12, c22, _ = strains_to_stresses(*ev, G, nu)
            b11, b12, b22, _ = _analytic_stress(
                p.grid.x - p.x0, y, G, prm.b, nu, p.zeta_bg, +1.0)
            corr = (density(b11 + c11, b12 + c12, b22 + c22)
                    - density(b11, b12, b22))
            total += wt * float(np.sum(wxg * corr[mask]))
    return 2.0 * total


def log_divergence_fit(p: Profile, radii) -> tuple[float, float, float]:
    """Affine fit ``E(R) ~ slope ln R + intercept``; returns
    (slope, intercept, R^2 of the regression)."""
    radii = np.asarray(radii, dtype=float)
    E = np.array([elastic_energy_box(p, R) for R in radii])
    A = np.vstack([np.log(radii), np.ones_like(radii)]).T
    coef, *_ = np.linalg.lstsq(A, E, rcond=None)
    resid = E - A @ coef
    r2 = 1.0 - float(np.sum(resid**2) / np.sum((E - E.mean()) ** 2))
    return float(coef[0]), float(coef[1]), r2


# ---------------------------------------------------------------------------
# breakdown container
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyBreakdown:
    """All perturbed-energy pieces for one (profile, perturbation) pair."""

    E_mis: float
    E_gamma_e_pert: float      # (c0/2) |phi1|^2_{H^1/2}
    cross_gamma: float         # c0 int phi1 (-dxx)^{1/2} u1
    misfit_difference: float
    E_hat_gamma: float         # slip-plane route total
    E_els_pert: float          # (1/2) int sigma_phi : eps_phi
    cross_els: float           # int eps_phi : sigma_u
    E_hat_total: float         # half-plane route total
    E_els_box: float
    box_radius: float

    def consistency_defect(self) -> float:
        """Internal identity: E_hat_gamma recomposes from its parts."""
        return abs(self.E_hat_gamma
                   - (self.E_gamma_e_pert + self.cross_gamma + self.misfit_difference))


def energy_breakdown(
    phi: Perturbation, p: Profile, spec: PotentialSpec,
    quad: Optional[BoxQuadrature] = None, box_radius: Optional[float] = None,
) -> EnergyBreakdown:
    """Compute every energy piece for one perturbation of a profile."""
    quad = quad or BoxQuadrature.for_params(p.params)
    box_radius = box_radius if box_radius is not None else 20.0 * p.params.zeta
    u1 = p.u1
    quad_part = 0.5 * p.params.c0 * hs_seminorm_grid(p.grid, phi.phi1, 0.5)
    cross_g = cross_term_gamma(p, phi)
    mis_diff = float(p.grid.h * np.sum(
        eval_potential(spec, u1 + phi.phi1, 0) - eval_potential(spec, u1, 0)
    ))
    e_els = elastic_energy_of_trace(p.grid, phi.phi1, p.params, quad)
    c_els = cross_term_elastic(p, phi, quad)
    return EnergyBreakdown(
        E_mis=misfit_energy(p, spec),
        E_gamma_e_pert=quad_part,
        cross_gamma=cross_g,
        misfit_difference=mis_diff,
        E_hat_gamma=quad_part + cross_g + mis_diff,
        E_els_pert=e_els,
        cross_els=c_els,
        E_hat_total=e_els + c_els + mis_diff,
        E_els_box=elastic_energy_box(p, box_radius),
        box_radius=box_radius,
    )


# ---------------------------------------------------------------------------
# competitor fields for the extension-optimality check
# ---------------------------------------------------------------------------

def competitor_energy(
    grid: Grid1D, phi1: np.ndarray, params: PhysParams,
    f_pair, g_pair, quad: Optional[BoxQuadrature] = None,
) -> float:
    """Elastic energy of a same-trace competitor field.

    The competitor is prescribed per mode as ``uhat1 = phihat1 f(q y)``
    and ``uhat2 = i sgn(xi) phihat1 g(q y)`` with ``f(0) = 1``;
    ``f_pair = (f, f')`` and ``g_pair = (g, g')`` supply the profiles
    and their derivatives.  Strains are assembled analytically per mode,
    then integrated like the elastic-extension energy.
    """
    quad = quad or BoxQuadrature.for_params(params)
    ys, wy = quad.nodes_weights()
    G, nu = params.G, params.nu
    lame = 2.0 * nu * G / (1.0 - 2.0 * nu)
    f, fp = f_pair
    g, gp = g_pair
    th = np.fft.fft(np.asarray(phi1, float))
    xi, q = grid.xi, grid.q
    nyq = grid.nyquist_index
    total = 0.0
    for y, wt in zip(ys, wy):
        t = q * y
        m11 = 1j * xi * f(t)
        m22 = 1j * np.sign(xi) * q * gp(t)
        m12 = 0.5 * (q * fp(t) - q * g(t))
        m11[nyq] = 0.0
        m22[nyq] = 0.0
        e11 = np.fft.ifft(m11 * th).real
        e22 = np.fft.ifft(m22 * th).real
        e12 = np.fft.ifft(m12 * th).real
        dens = G * (e11**2 + e22**2 + 2.0 * e12**2) + 0.5 * lame * (e11 + e22) ** 2
        total += wt * grid.h * float(np.sum(dens))
    return 2.0 * total
