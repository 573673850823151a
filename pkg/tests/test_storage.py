"""Tests for configuration handling, validation and result writing"""

import json

import numpy as np
import pytest
import scipy.io
import scipy.sparse as sp

from models.study import StudyKind, StudyResult, StudyRow
from storage.storage_manager import StorageManager, atomic_write, deep_merge, format_value
from utils.errors import ConfigError, MeshParseError
from utils.validators import validate_int, validate_order_list, validate_study_config
from verify.studies import StudyOutcome


@pytest.fixture
def storage(tmp_path):
    return StorageManager(str(tmp_path))


def write_config(path, data):
    path.write_text(json.dumps(data), encoding='utf-8')
    return path


def resolved(storage, **overrides):
    data = deep_merge(storage.get_default_config(overrides.get('kind', 'patch-linear')), overrides)
    return data


# =============================================================================
# Defaults and merging
# =============================================================================


class TestConfigFiles:
    def test_deep_merge(self):
        defaults = {'a': 1, 'nested': {'x': 1, 'y': 2}}
        merged = deep_merge(defaults, {'nested': {'y': 5}, 'extra': [1]})
        assert merged == {'a': 1, 'nested': {'x': 1, 'y': 5}, 'extra': [1]}
        merged['nested']['x'] = 99
        assert defaults['nested']['x'] == 1

    def test_kind_defaults(self, storage):
        data = storage.get_default_config('conv-hole')
        assert data['geometry'] == 'hole-quadrant'
        assert data['p_y'] == [1, 2, 3, 4]
        assert data['material'] == {'E': 70e9, 'nu': 0.3, 'state': 'plane_stress'}

    def test_unknown_kind_keeps_base_defaults(self, storage):
        assert storage.get_default_config('nonsense')['geometry'] is None

    def test_load_merges_defaults(self, storage, tmp_path):
        write_config(tmp_path / 'cfg.json', {'schema': 1, 'kind': 'singular-L', 'refine': {'n_s': 2}})
        data = storage.load_study_config('cfg.json')
        assert data['geometry'] == 'l-domain'
        assert data['refine'] == {'n_y': 2, 'n_s': 2, 'focus': []}

    def test_missing_file(self, storage):
        with pytest.raises(ConfigError, match="not found"):
            storage.load_study_config('absent.json')

    def test_invalid_json_reports_line(self, storage, tmp_path):
        (tmp_path / 'bad.json').write_text('{\n  "schema": 1,\n  "kind": \n}', encoding='utf-8')
        with pytest.raises(ConfigError, match="line 4"):
            storage.load_study_config('bad.json')

    def test_top_level_array(self, storage, tmp_path):
        write_config(tmp_path / 'list.json', [1, 2])
        with pytest.raises(ConfigError, match="object"):
            storage.load_study_config('list.json')

    def test_save_and_reload(self, storage):
        ok, cfg, _ = validate_study_config(resolved(storage, p_x=[1, 3], jobs=2))
        assert ok
        assert storage.save_study_config(cfg, 'saved/cfg.json')
        again = validate_study_config(storage.load_study_config('saved/cfg.json'))[1]
        assert again.to_dict() == cfg.to_dict()


# =============================================================================
# Validation
# =============================================================================


class TestValidation:
    def test_validate_int(self):
        assert validate_int(3, 'n', 1, 4) == (True, 3, "")
        assert validate_int(2.0, 'n', 1)[:2] == (True, 2)
        assert not validate_int(True, 'n', 0)[0]
        assert not validate_int('3', 'n', 0)[0]
        ok, _, msg = validate_int(9, 'n', 1, 4)
        assert not ok and "[1, 4]" in msg

    def test_order_list(self):
        assert validate_order_list(3, 'p_x') == (True, [3], "")
        assert validate_order_list([1, 12], 'p_x')[1] == [1, 12]
        assert not validate_order_list([], 'p_x')[0]
        assert not validate_order_list([0], 'p_x')[0]
        assert not validate_order_list([13], 'p_x')[0]

    def test_valid_default(self, storage):
        ok, cfg, msg = validate_study_config(resolved(storage))
        assert ok, msg
        assert cfg.kind == StudyKind.PATCH_LINEAR
        assert cfg.geometry == 'bathe-patch'

    @pytest.mark.parametrize("overrides,fragment", [
        ({'schema': 2}, "schema"),
        ({'kind': 'patch-quartic'}, "study kind"),
        ({'geometry': 'torus'}, "geometry"),
        ({'geometry': None}, "mesh_file"),
        ({'pairing': ['LaLx']}, "LaLx"),
        ({'distribution': 'GLX'}, "GLX"),
        ({'exact': 'sine'}, "exact"),
        ({'version': 'C'}, "Version C"),
        ({'hole': {'a': -1.0}}, "hole.a"),
        ({'output': {'dump_shapes': 1}}, "dump_shapes"),
        ({'levels': 0}, "levels"),
        ({'field_order': 9}, "field_order"),
        ({'jobs': 0}, "jobs"),
        ({'p_y': [2, 'x']}, "p_y"),
        ({'refine': {'n_y': 7}}, "n_y"),
        ({'material': {'nu': 0.5}}, "Poisson"),
        ({'grid': 'random'}, "grid"),
        ({'solver': {'residual_tol': 2.0}}, "residual_tol"),
    ])
    def test_rejected(self, storage, overrides, fragment):
        ok, cfg, msg = validate_study_config(resolved(storage, **overrides))
        assert not ok and cfg is None
        assert fragment in msg

    def test_mesh_file_instead_of_geometry(self, storage):
        ok, cfg, _ = validate_study_config(resolved(storage, geometry=None, mesh_file='m.json'))
        assert ok
        assert cfg.mesh_file == 'm.json'


# =============================================================================
# Writers
# =============================================================================


class TestWriters:
    def test_format_value(self):
        assert format_value(0.1) == '0.10000000000000001'
        assert format_value(1.0 / 3.0) == '0.33333333333333331'
        assert format_value(np.float64(2.5)) == '2.5'
        assert format_value(np.int64(7)) == '7'
        assert format_value(True) == 'true'
        assert format_value('LaLe') == 'LaLe'

    def test_atomic_write_leaves_no_temporaries(self, tmp_path):
        target = tmp_path / 'deep' / 'file.txt'
        atomic_write(target, 'hello\n')
        atomic_write(target, 'again\n')
        assert target.read_text() == 'again\n'
        assert [p.name for p in target.parent.iterdir()] == ['file.txt']

    def test_write_matrix(self, storage, tmp_path):
        K = sp.csr_matrix(np.array([[2.0, -1.0], [-1.0, 2.0]]))
        storage.write_matrix(tmp_path / 'K.mtx', K)
        back = scipy.io.mmread(str(tmp_path / 'K.mtx'))
        assert np.allclose(back.toarray(), K.toarray())

    def test_write_outcome(self, storage, tmp_path):
        ok, cfg, _ = validate_study_config(resolved(storage))
        result = StudyResult([StudyRow(30, 0.1, 2, 3, 1), StudyRow(90, 1e-3, 2, 3, 2)],
                             label='series')
        outcome = StudyOutcome([result], {'note': np.float64(1.5)},
                               {'extra': (('a', 'b'), [(1, 0.5)])},
                               {'K_one': sp.identity(3, format='csr')})
        written = storage.write_outcome('out', cfg, outcome, {'study_seconds': 0.5})
        names = [p.name for p in written]
        assert names == ['result.csv', 'extra.csv', 'K_one.mtx', 'config.json', 'meta.json']
        lines = (tmp_path / 'out' / 'result.csv').read_text().splitlines()
        assert lines == ['n_dof,error,p_x,p_y,level',
                         '30,0.10000000000000001,2,3,1',
                         '90,0.001,2,3,2']
        meta = json.loads((tmp_path / 'out' / 'meta.json').read_text())
        assert meta['study'] == {'note': 1.5}
        assert meta['config']['kind'] == 'patch-linear'
        assert meta['files'] == names[:-1]
        assert meta['series'][0]['rows'][1] == [90, 0.001, 2, 3, 2]
        saved = validate_study_config(storage.load_study_config('out/config.json'))[1]
        assert saved.to_dict() == cfg.to_dict()


# =============================================================================
# Mesh files
# =============================================================================


class TestMeshFiles:
    def test_round_trip(self, storage):
        from meshing.geometries import builtin_geometry
        mesh, _ = builtin_geometry('bathe-patch')
        assert storage.save_mesh_file(mesh, 'bathe.json')
        loaded = storage.load_mesh_file('bathe.json')
        assert loaded.census() == mesh.census()

    def test_missing(self, storage):
        with pytest.raises(ConfigError):
            storage.load_mesh_file('nothing.json')

    def test_malformed(self, storage, tmp_path):
        (tmp_path / 'broken.json').write_text('{"vertices": [[0, 0]], "quads": [[0, 1]], '
                                              '"region": ["x"]}', encoding='utf-8')
        with pytest.raises(MeshParseError, match="quad 0"):
            storage.load_mesh_file('broken.json')
