# Models module

from models.material import Material, StressState
from models.mesh import ElementClass, Mesh, RefineParams, Region
from models.study import (
    KIND_DEFAULTS, Pairing, PatchConfig, ReferenceSettings, SolverSettings, StudyConfig,
    StudyKind, StudyResult, StudyRow, TestVersion
)
from models.boundary import BoundaryLine, BoundarySpec, PointSupport, Support, TractionLoad

__all__ = [
    'Material', 'StressState',
    'ElementClass', 'Mesh', 'RefineParams', 'Region',
    'KIND_DEFAULTS', 'Pairing', 'PatchConfig', 'ReferenceSettings', 'SolverSettings',
    'StudyConfig', 'StudyKind', 'StudyResult', 'StudyRow', 'TestVersion',
    'BoundaryLine', 'BoundarySpec', 'PointSupport', 'Support', 'TractionLoad'
]
