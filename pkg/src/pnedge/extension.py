"""Elastic extension of slip-plane data into the two half-planes.

Given the trace ``u1(x, 0+)``, the equilibrium displacement in each
half-plane is determined mode by mode.  Writing ``q = |xi|``,
``beta = 1/(2 - 2 nu)`` and ``A = uhat1(xi, 0+)``, the upper half-plane
fields are

    ``uhat1(xi, y) = A (1 - beta q y) e^{-q y}``
    ``uhat2(xi, y) = -A beta ((1 - 2 nu) i sgn(xi) + i xi y) e^{-q y}``

and the lower half-plane follows from the mirror symmetry
``u1(x, -y) = -u1(x, y)``, ``u2(x, -y) = u2(x, y)``.  Strains are
assembled with the analytic y-derivatives of the factors, so the
plane-strain identities (``sigma33 = nu (sigma11 + sigma22)``,
``sigma22 = 0`` on the slip plane) hold per mode to roundoff.

Profiles are split as background plus correction: the background fields
and stresses use the closed forms of the arctan core, the correction
passes through the spectral formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DivergenceError
from .grid import Grid1D, SpectralField
from .operators import apply_half_laplacian, hs_seminorm_grid
from .params import PhysParams
from .profile import Profile


# ---------------------------------------------------------------------------
# sampling geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class YLevels:
    """Positive sampling heights, geometric by default; optionally mirrored."""

    values: np.ndarray
    mirrored: bool = True

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or len(vals) == 0:
            raise ValueError("y levels must be a nonempty 1-d array")
        if vals[0] <= 0:
            raise ValueError("y levels must be strictly positive")
        if np.any(np.diff(vals) <= 0):
            raise ValueError("y levels must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def geometric(cls, y_min: float, y_max: float, n: int, mirrored: bool = True) -> "YLevels":
        return cls(values=np.geomspace(y_min, y_max, n), mirrored=mirrored)


# ---------------------------------------------------------------------------
# closed forms for the arctan core
# ---------------------------------------------------------------------------

def _analytic_displacement(x, y, b, nu, zeta, sign):
    """Displacement of the arctan core at (x, y); sign = +-1 picks the branch.

    The branch offset never vanishes (|y + sign*zeta| >= zeta on the
    matching half-plane), so the principal arctan is safe and the mirror
    symmetry holds exactly.
    """
    x = np.asarray(x, float)
    p = y + sign * zeta
    r2 = x * x + p * p
    u1 = (b / (2.0 * np.pi)) * (
        -np.arctan(x / p) + x * y / (2.0 * (1.0 - nu) * r2)
    )
    u2 = -(b / (2.0 * np.pi)) * (
        (1.0 - 2.0 * nu) / (4.0 * (1.0 - nu)) * np.log(r2)
        + (x * x - y * y + zeta * zeta) / (4.0 * (1.0 - nu) * r2)
    )
    return u1, u2


def _analytic_stress(x, y, G, b, nu, zeta, sign):
    """Stress of the arctan core at (x, y); sign = +-1 picks the branch."""
    x = np.asarray(x, float)
    p = y + sign * zeta
    r2 = x * x + p * p
    pref = G * b / (2.0 * np.pi * (1.0 - nu))
    s11 = pref * (-(3.0 * y + sign * 2.0 * zeta) / r2 + 2.0 * y * p * p / r2**2)
    s12 = pref * (x / r2 - 2.0 * x * y * p / r2**2)
    s22 = pref * (-y / r2 + 2.0 * x * x * y / r2**2)
    s33 = pref * (-2.0 * nu * p / r2)
    return s11, s12, s22, s33


def analytic_fields(params: PhysParams, points, side: int | None = None):
    """Closed-form displacement and stress of the arctan core at (x, y) points.

    Oracle for the spectral extension.  Points on the slip plane
    (``y == 0``) need ``side`` (+1 or -1) to pick the one-sided limit.
    Returns a dict with arrays ``u1, u2, s11, s12, s22, s33``.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    x, y = pts[:, 0], pts[:, 1]
    sign = np.sign(y)
    if np.any(sign == 0):
        if side not in (+1, -1):
            raise ValueError("points with y = 0 require side=+1 or side=-1")
        sign = np.where(sign == 0, side, sign)
    b, nu, G, zeta = params.b, params.nu, params.G, params.zeta
    u1 = np.empty(len(pts))
    u2 = np.empty(len(pts))
    s = np.empty((4, len(pts)))
    for sgn in (+1.0, -1.0):
        m = sign == sgn
        if not np.any(m):
            continue
        u1[m], u2[m] = _analytic_displacement(x[m], y[m], b, nu, zeta, sgn)
        s[0, m], s[1, m], s[2, m], s[3, m] = _analytic_stress(x[m], y[m], G, b, nu, zeta, sgn)
    return {"u1": u1, "u2": u2, "s11": s[0], "s12": s[1], "s22": s[2], "s33": s[3]}


# ---------------------------------------------------------------------------
# spectral extension of a decaying trace
# ---------------------------------------------------------------------------

def _u1_factor(q, beta, y):
    return (1.0 - beta * q * y) * np.exp(-q * y)


def _u2_multiplier(xi, q, nu, beta, y, nyquist_index):
    mult = -beta * ((1.0 - 2.0 * nu) * 1j * np.sign(xi) + 1j * xi * y) * np.exp(-q * y)
    mult[nyquist_index] = 0.0  # unpaired odd mode; keeps the field real
    return mult


def _strain_multipliers(xi, q, nu, beta, y, nyquist_index):
    """Fourier multipliers taking uhat1(xi,0+) to the upper-half strains."""
    decay = np.exp(-q * y)
    e11 = 1j * xi * (1.0 - beta * q * y) * decay
    e22 = -1j * xi * beta * (2.0 * nu - q * y) * decay
    e12 = q * beta * (q * y - 1.0) * decay
    e11[nyquist_index] = 0.0
    e22[nyquist_index] = 0.0
    return e11, e22, e12


def extend_trace_displacement(grid: Grid1D, trace: np.ndarray, nu: float, y: float):
    """Upper-half displacement (u1, u2) at height y >= 0 of a decaying trace."""
    beta = 1.0 / (2.0 - 2.0 * nu)
    th = np.fft.fft(np.asarray(trace, float))
    q = grid.q
    u1 = np.fft.ifft(_u1_factor(q, beta, y) * th).real
    u2 = np.fft.ifft(_u2_multiplier(grid.xi, q, nu, beta, y, grid.nyquist_index) * th).real
    return u1, u2


def extend_trace_strains(grid: Grid1D, trace: np.ndarray, nu: float, y: float):
    """Upper-half strains (e11, e22, e12) at height y >= 0 of a decaying trace."""
    beta = 1.0 / (2.0 - 2.0 * nu)
    th = np.fft.fft(np.asarray(trace, float))
    m11, m22, m12 = _strain_multipliers(grid.xi, grid.q, nu, beta, y, grid.nyquist_index)
    return (
        np.fft.ifft(m11 * th).real,
        np.fft.ifft(m22 * th).real,
        np.fft.ifft(m12 * th).real,
    )


def strains_to_stresses(e11, e22, e12, G: float, nu: float):
    """Plane-strain isotropic constitutive map (e33 = 0)."""
    lame = 2.0 * nu * G / (1.0 - 2.0 * nu)
    tr = e11 + e22
    s11 = 2.0 * G * e11 + lame * tr
    s22 = 2.0 * G * e22 + lame * tr
    s12 = 2.0 * G * e12
    s33 = lame * tr
    return s11, s12, s22, s33


# ---------------------------------------------------------------------------
# field containers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HalfPlaneField:
    """Displacement samples on y-levels above and below the slip plane.

    Arrays are (level, x).  Lower-half arrays are stored at heights
    ``-values[i]`` and satisfy the mirror symmetry
    ``u1_minus(x, -y) = -u1_plus(x, y)``, ``u2_minus(x, -y) = u2_plus(x, y)``
    exactly by construction.
    """

    grid: Grid1D
    ylevels: YLevels
    u1_plus: np.ndarray = field(repr=False)
    u2_plus: np.ndarray = field(repr=False)
    u1_minus: np.ndarray = field(repr=False)
    u2_minus: np.ndarray = field(repr=False)

    def mirror_defect(self) -> float:
        d1 = np.max(np.abs(self.u1_plus + self.u1_minus))
        d2 = np.max(np.abs(self.u2_plus - self.u2_minus))
        scale = max(np.max(np.abs(self.u1_plus)), np.max(np.abs(self.u2_plus)), 1e-300)
        return float(max(d1, d2) / scale)


@dataclass(frozen=True)
class StressField:
    """Stress samples on y-levels above and below the slip plane."""

    grid: Grid1D
    ylevels: YLevels
    params: PhysParams
    s11_plus: np.ndarray = field(repr=False)
    s12_plus: np.ndarray = field(repr=False)
    s22_plus: np.ndarray = field(repr=False)
    s33_plus: np.ndarray = field(repr=False)
    s11_minus: np.ndarray = field(repr=False)
    s12_minus: np.ndarray = field(repr=False)
    s22_minus: np.ndarray = field(repr=False)
    s33_minus: np.ndarray = field(repr=False)

    def strains(self, side: str = "plus"):
        """Strains recovered through the inverse plane-strain relation."""
        G, nu = self.params.G, self.params.nu
        s11 = getattr(self, f"s11_{side}")
        s22 = getattr(self, f"s22_{side}")
        s12 = getattr(self, f"s12_{side}")
        e11 = (s11 - nu * (s11 + s22)) / (2.0 * G)
        e22 = (s22 - nu * (s11 + s22)) / (2.0 * G)
        e12 = s12 / (2.0 * G)
        return e11, e22, e12


def extend_to_half_planes(p: Profile, yl: YLevels) -> HalfPlaneField:
    """Displacement fields of a profile on the requested y-levels.

    Background by the closed forms (upper branch with +zeta, lower with
    -zeta), correction through the spectral factors; the zero mode of
    the u2 correction is 0, so u2 carries the additive-constant gauge of
    the closed form only.
    """
    grid, prm = p.grid, p.params
    xs = grid.x - p.x0
    n_lev = len(yl.values)
    u1p = np.empty((n_lev, grid.N))
    u2p = np.empty((n_lev, grid.N))
    has_v = bool(np.any(p.v))
    for i, y in enumerate(yl.values):
        b1, b2 = _analytic_displacement(xs, y, prm.b, prm.nu, p.zeta_bg, +1.0)
        if has_v:
            c1, c2 = extend_trace_displacement(grid, p.v, prm.nu, y)
            b1 = b1 + c1
            b2 = b2 + c2
        u1p[i] = b1
        u2p[i] = b2
    return HalfPlaneField(
        grid=grid, ylevels=yl,
        u1_plus=u1p, u2_plus=u2p,
        u1_minus=-u1p, u2_minus=u2p.copy(),
    )


def trace_of_extension(p: Profile) -> np.ndarray:
    """u1 at y = 0+: the spectral extension evaluated back on the slip plane.

    The extension factor is identically 1 at y = 0, so this reproduces
    the input trace up to FFT roundoff (inverse trace round trip).
    """
    u1, _ = extend_trace_displacement(p.grid, p.v, p.params.nu, 0.0)
    return p.background_on_grid() + u1


def stress_field(p: Profile, yl: YLevels) -> StressField:
    """Stress fields of a profile on the requested y-levels.

    Correction strains come from the analytic y-derivatives of the
    spectral factors (no differencing across levels); background stress
    from the closed form.  Mirror relations give the lower half:
    s12 is even under (y -> -y), the normal components are odd.
    """
    grid, prm = p.grid, p.params
    xs = grid.x - p.x0
    n_lev = len(yl.values)
    comps = {k: np.empty((n_lev, grid.N)) for k in ("s11", "s12", "s22", "s33")}
    has_v = bool(np.any(p.v))
    for i, y in enumerate(yl.values):
        s11, s12, s22, s33 = _analytic_stress(xs, y, prm.G, prm.b, prm.nu, p.zeta_bg, +1.0)
        if has_v:
            e11, e22, e12 = extend_trace_strains(grid, p.v, prm.nu, y)
            c11, c12, c22, c33 = strains_to_stresses(e11, e22, e12, prm.G, prm.nu)
            s11, s12, s22, s33 = s11 + c11, s12 + c12, s22 + c22, s33 + c33
        comps["s11"][i], comps["s12"][i] = s11, s12
        comps["s22"][i], comps["s33"][i] = s22, s33
    return StressField(
        grid=grid, ylevels=yl, params=prm,
        s11_plus=comps["s11"], s12_plus=comps["s12"],
        s22_plus=comps["s22"], s33_plus=comps["s33"],
        s11_minus=-comps["s11"], s12_minus=comps["s12"].copy(),
        s22_minus=-comps["s22"], s33_minus=-comps["s33"],
    )


def dtn_traction(p: Profile) -> tuple[np.ndarray, np.ndarray]:
    """Traction on the slip plane induced by the displacement trace.

    The map is diagonal in Fourier space:
    ``sigma12 = -(G/(1-nu)) (-d_xx)^{1/2} u1`` and ``sigma22 = 0``
    identically.  At a static profile the force balance gives
    ``2 sigma12 = W'(u1)``.
    """
    prm = p.params
    lam = p.half_laplacian_background()
    if np.any(p.v):
        lam = lam + apply_half_laplacian(p.grid, p.v)
    sigma12 = -(prm.G / (1.0 - prm.nu)) * lam
    return sigma12, np.zeros_like(sigma12)


# ---------------------------------------------------------------------------
# Lambda seminorms of the extension
# ---------------------------------------------------------------------------

def _y_integral_factors(m: int, nu: float) -> tuple[float, float]:
    """Closed per-mode y-integrals of the squared extension factors.

    For the upper half-plane and one trace unit, the m-th y-derivative
    of the u1 factor integrates to ``K1 / q`` and of the u2 factor to
    ``K2 / q`` (times ``q^{2m}`` from differentiation), using
    ``int_0^inf t^k e^{-2t} dt = k!/2^{k+1}``.
    """
    beta = 1.0 / (2.0 - 2.0 * nu)
    c1 = 1.0 + beta * m
    k1 = c1 * c1 / 2.0 - c1 * beta / 2.0 + beta * beta / 4.0
    c2 = m - (1.0 - 2.0 * nu)
    k2 = beta * beta * (c2 * c2 / 2.0 - c2 / 2.0 + 0.25)
    return k1, k2


@dataclass(frozen=True)
class LambdaSeminorm:
    """One (s, m) block of the half-plane seminorm and its trace ratio."""

    value: float
    trace_sq: float

    @property
    def ratio_sq(self) -> float:
        return self.value / self.trace_sq


def _trace_seminorm_sq_profile(p: Profile, s_trace: float) -> float:
    """Squared H^{s_trace} seminorm of u1 = background + correction.

    Background in closed form (Gamma function), correction and cross
    term on the discrete wavenumber grid.
    """
    from .operators import background_transform, hs_seminorm_analytic

    b, zbg = p.params.b, p.zeta_bg
    if s_trace <= 0.5:
        raise DivergenceError(
            f"trace seminorm diverges for exponent {s_trace} <= 1/2"
        )
    total = hs_seminorm_analytic(b, zbg, s_trace)
    if np.any(p.v):
        grid = p.grid
        coeffs = SpectralField.from_samples(grid, p.v).coeffs
        # shift the background transform to the profile center
        bg = background_transform(b, zbg, grid.xi) * np.exp(-1j * grid.xi * p.x0)
        q = grid.q
        w = np.where(q > 0, q ** (2.0 * s_trace), 0.0)
        corr = w * (np.abs(coeffs) ** 2 + 2.0 * np.real(bg * np.conj(coeffs)))
        total += float(np.sum(corr) / (2.0 * grid.L))
    return total


def lambda_seminorm(p: Profile, s: float, m: int) -> LambdaSeminorm:
    """Squared seminorm ``|| (-d_xx)^{(s-m)/2} d_y^m u ||^2`` over both
    half-planes, u1 and u2 components summed.

    The y-integral of the squared extension factors is carried out in
    closed form per mode, which reduces the block to
    ``2 (K1(m) + K2(m))`` times the squared H^{s - 1/2} seminorm of the
    trace.  Requires ``s >= 1``, ``0 <= m <= floor(s)``; diverges for
    ``s <= 1`` when the profile carries the arctan background.
    """
    if m < 0 or m > int(np.floor(s)):
        raise ValueError(f"derivative order m={m} outside 0..floor(s)={int(np.floor(s))}")
    if s < 1.0:
        raise ValueError(f"half-plane seminorm requires s >= 1, got {s}")
    k1, k2 = _y_integral_factors(m, p.params.nu)
    trace_sq = _trace_seminorm_sq_profile(p, s - 0.5)
    return LambdaSeminorm(value=2.0 * (k1 + k2) * trace_sq, trace_sq=trace_sq)


def lambda_seminorm_samples(
    grid: Grid1D, trace: np.ndarray, nu: float, s: float, m: int
) -> LambdaSeminorm:
    """Same (s, m) block for a decaying trace given as samples (no background)."""
    if m < 0 or m > int(np.floor(s)):
        raise ValueError(f"derivative order m={m} outside 0..floor(s)={int(np.floor(s))}")
    k1, k2 = _y_integral_factors(m, nu)
    trace_sq = hs_seminorm_grid(grid, trace, s - 0.5)
    return LambdaSeminorm(value=2.0 * (k1 + k2) * trace_sq, trace_sq=trace_sq)


def lambda_seminorm_total(p: Profile, s: float) -> LambdaSeminorm:
    """Sum of the (s, m) blocks for m = 0..floor(s), with the trace ratio."""
    trace_sq = _trace_seminorm_sq_profile(p, s - 0.5)
    total = 0.0
    for m in range(int(np.floor(s)) + 1):
        k1, k2 = _y_integral_factors(m, p.params.nu)
        total += 2.0 * (k1 + k2) * trace_sq
    return LambdaSeminorm(value=total, trace_sq=trace_sq)
