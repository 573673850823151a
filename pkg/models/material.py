"""Linear elastic material model"""

from dataclasses import dataclass
from enum import Enum

from utils.errors import ConfigError


class StressState(str, Enum):
    PLANE_STRESS = "plane_stress"
    PLANE_STRAIN = "plane_strain"


@dataclass(frozen=True)
class Material:
    """Isotropic material, unit thickness"""
    E: float = 70e9  # Pa, aluminium
    nu: float = 0.3
    state: StressState = StressState.PLANE_STRESS

    def __post_init__(self):
        object.__setattr__(self, 'state', StressState(self.state))
        if not self.E > 0.0:
            raise ConfigError(f"Young's modulus must be positive, got {self.E}")
        if not -1.0 < self.nu < 0.5:
            raise ConfigError(f"Poisson's ratio must lie in (-1, 0.5), got {self.nu}")

    @property
    def shear_modulus(self) -> float:
        return self.E / (2.0 * (1.0 + self.nu))

    @property
    def kolosov(self) -> float:
        """Kolosov's constant"""
        if self.state == StressState.PLANE_STRESS:
            return (3.0 - self.nu) / (1.0 + self.nu)
        return 3.0 - 4.0 * self.nu

    def scaled(self, factor: float) -> 'Material':
        return Material(self.E * factor, self.nu, self.state)

    def to_dict(self) -> dict:
        return {
            'E': self.E,
            'nu': self.nu,
            'state': self.state.value
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'Material':
        return cls(
            E=float(data.get('E', 70e9)),
            nu=float(data.get('nu', 0.3)),
            state=StressState(data.get('state', StressState.PLANE_STRESS.value))
        )
