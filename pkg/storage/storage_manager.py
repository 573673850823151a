"""Storage manager for study configurations, mesh files and result artifacts"""

import copy
import csv
import io
import json
import logging
import os
import sys
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
import scipy.io

from meshing.io import load_mesh, save_mesh
from models.mesh import Mesh
from models.study import CSV_HEADER, KIND_DEFAULTS, StudyConfig, StudyKind
from utils.errors import ConfigError, MeshError

logger = logging.getLogger(__name__)

APP_VERSION = "1.0.0"
SCHEMA_VERSION = 1
FLOAT_FORMAT = '.17g'


def get_base_dir() -> Path:
    """Base directory for relative paths

    For a frozen single-file build this is the directory holding the
    executable, otherwise the current working directory.
    """
    if getattr(sys, 'frozen', False):
        exe_path = Path(sys.executable)
        if exe_path.is_file():
            return exe_path.parent
    return Path.cwd()


def deep_merge(defaults: Dict, overrides: Dict) -> Dict:
    """Overrides on top of defaults; nested dicts are merged key-wise and
    keys unknown to the defaults are kept"""
    merged = copy.deepcopy(defaults)
    for key, value in overrides.items():
        if isinstance(merged.get(key), dict) and isinstance(value, dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def format_value(value: Any) -> str:
    """CSV cell text: 17 significant digits for floats"""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), FLOAT_FORMAT)
    return str(value)


def _json_default(value: Any):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def atomic_write(path: Path, text: str):
    """Write a file through a temporary sibling and rename it into place"""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class StorageManager:
    """Reads study inputs and writes study outputs

    Every output file is written atomically so a reader never sees a
    half-written result.
    """

    def __init__(self, base_dir: str = None):
        """Initialize storage manager

        Args:
            base_dir: Directory that relative config and mesh paths resolve
                against. If None, uses the executable or current directory.
        """
        self.base_dir = Path(base_dir) if base_dir is not None else get_base_dir()

    def _resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p

    # Configuration

    def get_default_config(self, kind: Optional[str] = None) -> Dict:
        """Full default configuration, with the per-kind defaults when kind is known"""
        defaults = {
            'schema': SCHEMA_VERSION,
            'kind': kind,
            'geometry': None,
            'mesh_file': None,
            'p_x': [2],
            'p_y': [2],
            'pairing': ['LaLa'],
            'distribution': ['GLL'],
            'refine': {'n_y': 2, 'n_s': 1, 'focus': []},
            'levels': 1,
            'version': 'B',
            'exact': 'poly',
            'field_order': 1,
            'grid': 'config',
            'orders': 'product',
            'reference': {'uniform': 3, 'n_s': 6, 'p': 6},
            'material': {'E': 70e9, 'nu': 0.3, 'state': 'plane_stress'},
            'hole': {'a': 1.0, 'sigma0': 100e6},
            'load': 1.0,
            'solver': {'dense_limit': 4000, 'residual_tol': 1e-10},
            'output': {'dir': 'results', 'dump_matrix': False, 'dump_shapes': 0},
            'exhaustive': False,
            'jobs': 1
        }
        try:
            study_kind = StudyKind(kind) if kind is not None else None
        except ValueError:
            study_kind = None
        if study_kind is not None:
            defaults = deep_merge(defaults, KIND_DEFAULTS[study_kind])
        return defaults

    def load_study_config(self, path: str) -> Dict:
        """Read a JSON config and merge it over the defaults of its kind

        Raises:
            ConfigError: missing or unreadable file, invalid JSON, not an object
        """
        file_path = self._resolve(path)
        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                raw = json.load(f)
        except FileNotFoundError as e:
            raise ConfigError(f"config file not found: {file_path}") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"{file_path}: line {e.lineno}: {e.msg}") from e
        except OSError as e:
            logger.error("could not read config %s: %s", file_path, e)
            raise ConfigError(f"could not read config {file_path}: {e}") from e
        if not isinstance(raw, dict):
            raise ConfigError(f"{file_path}: top level must be a JSON object")
        merged = deep_merge(self.get_default_config(raw.get('kind')), raw)
        logger.debug("loaded config %s (%d keys)", file_path, len(raw))
        return merged

    def save_study_config(self, cfg: StudyConfig, filepath: str) -> bool:
        """Save a resolved configuration as JSON

        Returns:
            True if successful, False otherwise
        """
        try:
            text = json.dumps(cfg.to_dict(), indent=2, ensure_ascii=False, default=_json_default)
            atomic_write(self._resolve(filepath), text + "\n")
            return True
        except OSError as e:
            logger.error("error saving config to %s: %s", filepath, e)
            return False

    # Mesh files

    def load_mesh_file(self, path: str) -> Mesh:
        """Parse and validate a mesh file

        Raises:
            ConfigError: file missing or unreadable
            MeshError: malformed or invalid mesh
        """
        file_path = self._resolve(path)
        try:
            text = file_path.read_text(encoding='utf-8')
        except FileNotFoundError as e:
            raise ConfigError(f"mesh file not found: {file_path}") from e
        except OSError as e:
            raise ConfigError(f"could not read mesh file {file_path}: {e}") from e
        try:
            mesh = load_mesh(text)
        except MeshError as e:
            logger.error("mesh file %s rejected: %s", file_path, e)
            raise
        logger.info("loaded mesh %s: %d vertices, %d quads", file_path, mesh.n_vertices, mesh.n_quads)
        return mesh

    def save_mesh_file(self, mesh: Mesh, filepath: str) -> bool:
        """Save a mesh in the mesh file format

        Returns:
            True if successful, False otherwise
        """
        try:
            atomic_write(self._resolve(filepath), save_mesh(mesh))
            return True
        except OSError as e:
            logger.error("error saving mesh to %s: %s", filepath, e)
            return False

    # Results

    def write_csv(self, path: Path, header: Sequence[str], rows: Iterable[Sequence]):
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
        atomic_write(path, buffer.getvalue())

    def write_json(self, path: Path, data: Dict):
        atomic_write(path, json.dumps(data, indent=2, ensure_ascii=False, default=_json_default) + "\n")

    def write_matrix(self, path: Path, matrix):
        """Matrix Market dump of a sparse matrix"""
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{path.stem}.", suffix='.mtx', dir=path.parent)
        os.close(fd)
        try:
            scipy.io.mmwrite(tmp, matrix, symmetry='symmetric')
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def write_outcome(self, out_dir: str, cfg: StudyConfig, outcome, timing: Dict[str, float]) -> List[Path]:
        """Write result.csv, config.json, meta.json and the optional dumps of one study

        config.json is the resolved configuration, runnable as is; mesh.json
        copies the mesh the study read from a mesh file.

        Returns:
            Paths of the written files
        """
        target = self._resolve(out_dir)
        written = []

        result_path = target / 'result.csv'
        self.write_csv(result_path, CSV_HEADER, (row.as_tuple() for row in outcome.rows()))
        written.append(result_path)

        for stem in sorted(outcome.tables):
            header, rows = outcome.tables[stem]
            path = target / f"{stem}.csv"
            self.write_csv(path, header, rows)
            written.append(path)

        for stem in sorted(outcome.matrices):
            path = target / f"{stem}.mtx"
            self.write_matrix(path, outcome.matrices[stem])
            written.append(path)

        config_path = target / 'config.json'
        if not self.save_study_config(cfg, str(config_path)):
            raise OSError(f"could not write {config_path}")
        written.append(config_path)
        if cfg.mesh is not None:
            mesh_path = target / 'mesh.json'
            if not self.save_mesh_file(cfg.mesh, str(mesh_path)):
                raise OSError(f"could not write {mesh_path}")
            written.append(mesh_path)

        meta_path = target / 'meta.json'
        meta = {
            'config': cfg.to_dict(),
            'version': APP_VERSION,
            'timing': timing,
            'study': outcome.meta,
            'series': [result.to_dict() for result in outcome.results],
            'files': [p.name for p in written]
        }
        self.write_json(meta_path, meta)
        written.append(meta_path)
        logger.info("wrote %d files to %s", len(written), target)
        return written
