"""Equation tags shared across the package.

The library deals with three second-order equations on R^m:

    harmonic        lap u           = 0
    metaharmonic    lap u + lam^2 u = 0     (Helmholtz,           lam != 0)
    panharmonic     lap u - mu^2 u  = 0     (modified Helmholtz,  mu != 0)

plus the two averaging geometries (solid ball vs. bounding sphere) that the
mean-value machinery distinguishes everywhere.
"""

from dataclasses import dataclass

HARMONIC = "harmonic"
METAHARMONIC = "metaharmonic"
PANHARMONIC = "panharmonic"
FAMILIES = (HARMONIC, METAHARMONIC, PANHARMONIC)

BALL = "ball"
SPHERE = "sphere"
GEOMETRIES = (BALL, SPHERE)


@dataclass(frozen=True)
class EquationKind:
    """Tagged equation family with its frequency parameter (lam or mu).

    ``parameter`` is 0 for harmonic and nonzero otherwise; only its square
    enters the equations, so the sign is irrelevant and kept as given.
    """

    family: str
    parameter: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown equation family {self.family!r}")
        if self.family == HARMONIC:
            if self.parameter != 0.0:
                raise ValueError("harmonic kind takes no parameter")
        elif self.parameter == 0.0:
            raise ValueError(f"{self.family} requires a nonzero parameter")

    @classmethod
    def harmonic(cls) -> "EquationKind":
        return cls(HARMONIC, 0.0)

    @classmethod
    def metaharmonic(cls, lam: float) -> "EquationKind":
        return cls(METAHARMONIC, float(lam))

    @classmethod
    def panharmonic(cls, mu: float) -> "EquationKind":
        return cls(PANHARMONIC, float(mu))

    @property
    def zeroth_order_coefficient(self) -> float:
        """c in ``lap u + c u = 0``: +lam^2, -mu^2, or 0."""
        p = self.parameter
        if self.family == METAHARMONIC:
            return p * p
        if self.family == PANHARMONIC:
            return -p * p
        return 0.0

    @property
    def defect_sign(self) -> int:
        """Sign of the small-radius mean-value defect: +1 pan, -1 meta, 0 harmonic."""
        if self.family == PANHARMONIC:
            return 1
        if self.family == METAHARMONIC:
            return -1
        return 0


def validate_geometry(geometry: str) -> str:
    if geometry not in GEOMETRIES:
        raise ValueError(f"geometry must be one of {GEOMETRIES}, got {geometry!r}")
    return geometry
