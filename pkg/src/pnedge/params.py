"""Physical parameters of the edge-dislocation model.

The model is parameterized by the shear modulus ``G``, Poisson ratio
``nu``, Burgers vector magnitude ``b`` and interplanar distance ``d``.
Two derived constants appear throughout:

* ``zeta = d / (2 (1 - nu))`` - the core half-width of the arctan
  solution (``2 zeta`` is the dislocation core width),
* ``c0 = 2 G / (1 - nu)`` - the coefficient multiplying the
  half-Laplacian in the slip-plane equation.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PhysParams:
    """Material constants; immutable so they can be shared freely."""

    G: float = 1.0
    nu: float = 0.25
    b: float = 1.0
    d: float = 1.0

    def __post_init__(self):
        if self.G <= 0:
            raise ValueError(f"shear modulus G must be positive, got {self.G}")
        if not 0.0 < self.nu < 0.5:
            raise ValueError(f"Poisson ratio nu must lie in (0, 1/2), got {self.nu}")
        if self.b <= 0:
            raise ValueError(f"Burgers vector magnitude b must be positive, got {self.b}")
        if self.d <= 0:
            raise ValueError(f"interplanar distance d must be positive, got {self.d}")

    @property
    def zeta(self) -> float:
        """Core half-width, d / (2 (1 - nu))."""
        return self.d / (2.0 * (1.0 - self.nu))

    @property
    def c0(self) -> float:
        """Half-Laplacian coefficient, 2 G / (1 - nu)."""
        return 2.0 * self.G / (1.0 - self.nu)


#: Dimensionless desk-scale preset: G = b = d = 1, nu = 1/4, so zeta = 2/3
#: and c0 = 8/3.
DEFAULT_PARAMS = PhysParams()

#: Normalized preset with G/(1 - nu) = 1, under which c0 = 2 and the
#: energy functionals take their textbook coefficient-free form.
NORMALIZED_PARAMS = PhysParams(G=0.75, nu=0.25)
