"""Study, patch-test and result model classes"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from basis.polybasis import BasisFamily, NodeDistribution
from models.material import Material
from models.mesh import Mesh, RefineParams
from utils.errors import ConfigError

CSV_HEADER = ('n_dof', 'error', 'p_x', 'p_y', 'level')
PATCH_FIELDS = ('poly', 'beam-quadratic', 'beam-cubic', 'hole')
GRID_MODES = ('config', 'stratified')
ORDER_MODES = ('product', 'diagonal')


class Pairing(str, Enum):
    """Family pairing: first code is the x-region family, second the y-region"""
    LALA = "LaLa"
    LALE = "LaLe"
    LELA = "LeLa"
    LELE = "LeLe"

    def x_family(self, distribution: NodeDistribution = NodeDistribution.GLL) -> BasisFamily:
        return BasisFamily.from_code(self.value[:2], distribution)

    def y_family(self, distribution: NodeDistribution = NodeDistribution.GLL) -> BasisFamily:
        return BasisFamily.from_code(self.value[2:], distribution)


class TestVersion(str, Enum):
    """Patch-test variant

    A: every DOF prescribed, residual only; B: displacements prescribed on the
    whole boundary; C: minimal supports with traction loads.
    """
    __test__ = False

    A = "A"
    B = "B"
    C = "C"


class StudyKind(str, Enum):
    PATCH_LINEAR = "patch-linear"
    PATCH_QUADRATIC = "patch-quadratic"
    PATCH_CUBIC = "patch-cubic"
    PATCH_HIGHORDER = "patch-highorder"
    CONV_POLY = "conv-poly"
    CONV_HOLE = "conv-hole"
    SINGULAR_CANTILEVER = "singular-cantilever"
    SINGULAR_L = "singular-L"
    BASIS_DUMP = "basis-dump"

    @property
    def is_patch(self) -> bool:
        return self.value.startswith('patch-')


@dataclass
class SolverSettings:
    """Linear solver tuning

    dense_limit: reduced system size below which dense Cholesky is used
    residual_tol: relative residual the solve must reach
    """
    dense_limit: int = 4000
    residual_tol: float = 1e-10

    def __post_init__(self):
        if int(self.dense_limit) < 0:
            raise ConfigError("solver.dense_limit must be non-negative")
        if not 0.0 < float(self.residual_tol) < 1.0:
            raise ConfigError("solver.residual_tol must be in (0, 1)")
        self.dense_limit = int(self.dense_limit)
        self.residual_tol = float(self.residual_tol)

    def to_dict(self) -> dict:
        return {
            'dense_limit': self.dense_limit,
            'residual_tol': self.residual_tol
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'SolverSettings':
        return cls(
            dense_limit=data.get('dense_limit', 4000),
            residual_tol=data.get('residual_tol', 1e-10)
        )


@dataclass
class PatchConfig:
    """One patch-test run

    exact names the exact solution: 'poly' (admissible polynomial field of
    field_order), 'beam-quadratic', 'beam-cubic' or 'hole' (plate with a
    hole of radius hole_radius under remote stress sigma0).
    """
    geometry: str = 'bathe-patch'
    p_x: int = 2
    p_y: int = 2
    pairing: Pairing = Pairing.LALA
    distribution: NodeDistribution = NodeDistribution.GLL
    refine: RefineParams = field(default_factory=RefineParams)
    version: TestVersion = TestVersion.B
    exact: str = 'poly'
    field_order: int = 1
    uniform_levels: int = 0
    material: Material = field(default_factory=Material)
    solver: SolverSettings = field(default_factory=SolverSettings)
    hole_radius: float = 1.0
    sigma0: float = 100e6
    mesh: Optional[Mesh] = None

    def __post_init__(self):
        self.pairing = Pairing(self.pairing)
        self.distribution = NodeDistribution(self.distribution)
        self.version = TestVersion(self.version)
        if self.exact not in PATCH_FIELDS:
            raise ConfigError(f"unknown patch field '{self.exact}'")
        if self.version == TestVersion.C and not self.exact.startswith('beam-'):
            raise ConfigError("Version C needs printed tractions: beam fields only")

    @property
    def p_min(self) -> int:
        return min(self.p_x, self.p_y)

    def label(self) -> str:
        return (f"{self.pairing.value}-{self.distribution.value}-ny{self.refine.n_y}"
                f"-ns{self.refine.n_s}-px{self.p_x}-py{self.p_y}")


@dataclass
class StudyRow:
    n_dof: int
    error: float
    p_x: int
    p_y: int
    level: int

    def as_tuple(self) -> Tuple:
        return (self.n_dof, self.error, self.p_x, self.p_y, self.level)


@dataclass
class StudyResult:
    """Error series of one study

    rates holds the two-point rates between consecutive rows; slope the
    least-squares fit over the usable rows.
    """
    rows: List[StudyRow] = field(default_factory=list)
    slope: Optional[float] = None
    rates: List[float] = field(default_factory=list)
    label: str = ''

    def add_row(self, row: StudyRow):
        self.rows.append(row)

    def to_dict(self) -> dict:
        return {
            'label': self.label,
            'rows': [list(r.as_tuple()) for r in self.rows],
            'slope': self.slope,
            'rates': list(self.rates)
        }


KIND_DEFAULTS = {
    StudyKind.PATCH_LINEAR: {'geometry': 'bathe-patch', 'exact': 'poly', 'field_order': 1},
    StudyKind.PATCH_QUADRATIC: {'geometry': 'beam', 'exact': 'beam-quadratic'},
    StudyKind.PATCH_CUBIC: {'geometry': 'beam', 'exact': 'beam-cubic'},
    StudyKind.PATCH_HIGHORDER: {
        'geometry': 'highorder-patch', 'exact': 'poly', 'field_order': 7,
        'orders': 'diagonal', 'p_x': [1, 2, 3, 4, 5, 6, 7], 'p_y': [1, 2, 3, 4, 5, 6, 7],
        'refine': {'n_y': 2, 'n_s': 2}
    },
    StudyKind.CONV_POLY: {
        'geometry': 'highorder-patch', 'exact': 'poly', 'field_order': 8,
        'pairing': ['LaLe'], 'p_x': [8], 'p_y': [1, 2, 3], 'levels': 5
    },
    StudyKind.CONV_HOLE: {
        'geometry': 'hole-quadrant', 'exact': 'hole',
        'pairing': ['LaLe'], 'p_x': [8], 'p_y': [1, 2, 3, 4], 'levels': 5
    },
    StudyKind.SINGULAR_CANTILEVER: {
        'geometry': 'cantilever', 'p_x': [1, 2, 3], 'refine': {'n_y': 2, 'n_s': 4}
    },
    StudyKind.SINGULAR_L: {
        'geometry': 'l-domain', 'p_x': [2, 3, 4], 'refine': {'n_y': 2, 'n_s': 4}
    },
    StudyKind.BASIS_DUMP: {'geometry': 'two-quad', 'p_x': [3], 'p_y': [3]},
}


@dataclass
class ReferenceSettings:
    """Overkill solution of the singular benchmarks

    uniform: uniform refinements of the base mesh
    n_s: focused refinement passes on top (n_y = 2)
    p: polynomial degree in both regions
    """
    uniform: int = 3
    n_s: int = 6
    p: int = 6

    def __post_init__(self):
        if int(self.uniform) < 0 or int(self.p) < 1:
            raise ConfigError("reference.uniform must be >= 0 and reference.p >= 1")
        self.uniform = int(self.uniform)
        self.n_s = RefineParams(n_s=self.n_s).n_s
        self.p = int(self.p)

    def to_dict(self) -> dict:
        return {
            'uniform': self.uniform,
            'n_s': self.n_s,
            'p': self.p
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'ReferenceSettings':
        return cls(
            uniform=data.get('uniform', 3),
            n_s=data.get('n_s', 6),
            p=data.get('p', 6)
        )


@dataclass
class StudyConfig:
    """Resolved configuration of one CLI run

    grid selects the patch combinations: 'config' runs the configured lists,
    'stratified' the fixed 64-combination sample; exhaustive overrides both.
    orders pairs p_x with p_y as a product or element-wise ('diagonal').
    """
    kind: StudyKind
    geometry: Optional[str] = None
    mesh_file: Optional[str] = None
    p_x: List[int] = field(default_factory=lambda: [2])
    p_y: List[int] = field(default_factory=lambda: [2])
    pairings: List[Pairing] = field(default_factory=lambda: [Pairing.LALA])
    distributions: List[NodeDistribution] = field(default_factory=lambda: [NodeDistribution.GLL])
    refine: RefineParams = field(default_factory=RefineParams)
    levels: int = 1
    version: TestVersion = TestVersion.B
    field_order: int = 1
    exact: str = 'poly'
    grid: str = 'config'
    orders: str = 'product'
    reference: ReferenceSettings = field(default_factory=ReferenceSettings)
    material: Material = field(default_factory=Material)
    hole_radius: float = 1.0
    sigma0: float = 100e6
    load: float = 1.0
    solver: SolverSettings = field(default_factory=SolverSettings)
    out_dir: str = 'results'
    exhaustive: bool = False
    dump_matrix: bool = False
    dump_shapes: int = 0
    jobs: int = 1
    mesh: Optional[Mesh] = None

    def __post_init__(self):
        self.kind = StudyKind(self.kind)
        if self.grid not in GRID_MODES:
            raise ConfigError(f"grid must be one of {GRID_MODES}, got '{self.grid}'")
        if self.orders not in ORDER_MODES:
            raise ConfigError(f"orders must be one of {ORDER_MODES}, got '{self.orders}'")
        if self.orders == 'diagonal' and len(self.p_x) != len(self.p_y):
            raise ConfigError("diagonal orders need p_x and p_y lists of equal length")

    def order_pairs(self) -> List[Tuple[int, int]]:
        if self.orders == 'diagonal':
            return list(zip(self.p_x, self.p_y))
        return [(px, py) for px in self.p_x for py in self.p_y]

    def to_dict(self) -> dict:
        """Resolved configuration as echoed into meta.json"""
        return {
            'schema': 1,
            'kind': self.kind.value,
            'geometry': self.geometry,
            'mesh_file': self.mesh_file,
            'p_x': list(self.p_x),
            'p_y': list(self.p_y),
            'pairing': [p.value for p in self.pairings],
            'distribution': [d.value for d in self.distributions],
            'refine': self.refine.to_dict(),
            'levels': self.levels,
            'version': self.version.value,
            'exact': self.exact,
            'field_order': self.field_order,
            'grid': self.grid,
            'orders': self.orders,
            'reference': self.reference.to_dict(),
            'material': self.material.to_dict(),
            'hole': {'a': self.hole_radius, 'sigma0': self.sigma0},
            'load': self.load,
            'solver': self.solver.to_dict(),
            'output': {
                'dir': self.out_dir,
                'dump_matrix': self.dump_matrix,
                'dump_shapes': self.dump_shapes
            },
            'exhaustive': self.exhaustive,
            'jobs': self.jobs
        }
