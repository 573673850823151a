"""Validation of study configurations"""

from typing import Any, List, Optional, Tuple

from basis.polybasis import MAX_ORDER, MIN_ORDER, NodeDistribution
from meshing.geometries import builtin_names
from models.material import Material
from models.mesh import RefineParams
from models.study import (
    PATCH_FIELDS, Pairing, ReferenceSettings, SolverSettings, StudyConfig, StudyKind, TestVersion
)
from analytic.polyfield import MAX_FIELD_ORDER
from utils.errors import ConfigError

SCHEMA_VERSION = 1


def validate_positive_number(value: Any) -> Tuple[bool, float]:
    """Validate that a value is a positive number

    Returns:
        (is_valid, numeric_value)
    """
    try:
        num = float(value)
        if num <= 0:
            return False, 0.0
        return True, num
    except (ValueError, TypeError):
        return False, 0.0


def validate_int(value: Any, name: str, lo: int, hi: Optional[int] = None) -> Tuple[bool, int, str]:
    """Validate an integer within [lo, hi]

    Returns:
        (is_valid, integer_value, error_message)
    """
    if isinstance(value, bool) or not isinstance(value, int):
        if not (isinstance(value, float) and value.is_integer()):
            return False, 0, f"{name} must be an integer, got {value!r}"
    value = int(value)
    if value < lo or (hi is not None and value > hi):
        bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        return False, 0, f"{name} must be {bound}, got {value}"
    return True, value, ""


def validate_order_list(value: Any, name: str) -> Tuple[bool, List[int], str]:
    """Validate a polynomial degree or a non-empty list of degrees

    Returns:
        (is_valid, degrees, error_message)
    """
    items = value if isinstance(value, list) else [value]
    if not items:
        return False, [], f"{name} must not be empty"
    orders = []
    for item in items:
        ok, p, msg = validate_int(item, name, MIN_ORDER, MAX_ORDER)
        if not ok:
            return False, [], msg
        orders.append(p)
    return True, orders, ""


def _as_list(value: Any) -> list:
    return value if isinstance(value, list) else [value]


def _require(ok_value_msg: Tuple):
    ok, value, msg = ok_value_msg
    if not ok:
        raise ConfigError(msg)
    return value


def _build(data: dict) -> StudyConfig:
    if data.get('schema') != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema {data.get('schema')!r}, expected {SCHEMA_VERSION}")
    try:
        kind = StudyKind(data.get('kind'))
    except ValueError:
        choices = ', '.join(k.value for k in StudyKind)
        raise ConfigError(f"unknown study kind {data.get('kind')!r} (expected one of {choices})")

    geometry = data.get('geometry')
    mesh_file = data.get('mesh_file')
    if geometry is not None and geometry not in builtin_names():
        raise ConfigError(f"unknown geometry '{geometry}', expected one of {builtin_names()}")
    if geometry is None and not mesh_file:
        raise ConfigError("either geometry or mesh_file is required")

    try:
        pairings = [Pairing(p) for p in _as_list(data.get('pairing'))]
        distributions = [NodeDistribution(d) for d in _as_list(data.get('distribution'))]
        version = TestVersion(data.get('version'))
    except ValueError as e:
        raise ConfigError(str(e)) from e
    if not pairings or not distributions:
        raise ConfigError("pairing and distribution must not be empty")

    exact = data.get('exact')
    if exact not in PATCH_FIELDS:
        raise ConfigError(f"exact must be one of {PATCH_FIELDS}, got {exact!r}")
    if kind.is_patch and version == TestVersion.C and not exact.startswith('beam-'):
        raise ConfigError("Version C needs printed tractions: beam fields only")

    hole = data.get('hole') or {}
    ok, radius = validate_positive_number(hole.get('a'))
    if not ok:
        raise ConfigError(f"hole.a must be positive, got {hole.get('a')!r}")
    output = data.get('output') or {}
    dump_shapes = _require(validate_int(output.get('dump_shapes', 0), 'output.dump_shapes', 0))
    if dump_shapes == 1:
        raise ConfigError("output.dump_shapes needs at least 2 points per direction")

    return StudyConfig(
        kind=kind,
        geometry=geometry,
        mesh_file=mesh_file,
        p_x=_require(validate_order_list(data.get('p_x'), 'p_x')),
        p_y=_require(validate_order_list(data.get('p_y'), 'p_y')),
        pairings=pairings,
        distributions=distributions,
        refine=RefineParams.from_dict(data.get('refine') or {}),
        levels=_require(validate_int(data.get('levels'), 'levels', 1)),
        version=version,
        exact=exact,
        field_order=_require(validate_int(data.get('field_order'), 'field_order', 1, MAX_FIELD_ORDER)),
        grid=data.get('grid'),
        orders=data.get('orders'),
        reference=ReferenceSettings.from_dict(data.get('reference') or {}),
        material=Material.from_dict(data.get('material') or {}),
        hole_radius=radius,
        sigma0=float(hole.get('sigma0', 100e6)),
        load=float(data.get('load')),
        solver=SolverSettings.from_dict(data.get('solver') or {}),
        out_dir=str(output.get('dir', 'results')),
        exhaustive=bool(data.get('exhaustive', False)),
        dump_matrix=bool(output.get('dump_matrix', False)),
        dump_shapes=dump_shapes,
        jobs=_require(validate_int(data.get('jobs', 1), 'jobs', 1))
    )


def validate_study_config(data: dict) -> Tuple[bool, Optional[StudyConfig], str]:
    """Validate a merged configuration dictionary

    Args:
        data: Configuration with defaults already merged in

    Returns:
        (is_valid, study_config, error_message)
    """
    try:
        return True, _build(data), ""
    except ConfigError as e:
        return False, None, str(e)
    except (TypeError, ValueError, AttributeError) as e:
        return False, None, f"invalid configuration: {e}"
