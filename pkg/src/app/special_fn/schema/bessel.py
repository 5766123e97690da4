from dataclasses import dataclass


@dataclass(frozen=True, slots=True)
class BesselTriple:
    """J0, J1, J2 at one argument z = k * distance."""

    z: float
    j0: float
    j1: float
    j2: float

    @property
    def recurrence_residual(self) -> float:
        """|J0 + J2 - (2/z) J1|; zero for exact values."""
        if self.z == 0:
            return abs(self.j0 + self.j2 - 1.0)
        return abs(self.j0 + self.j2 - 2.0 / self.z * self.j1)
