"""Tests for the xnyfem command line"""

import csv
import json
import logging

import numpy as np
import pytest

from main import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, build_parser, main
from utils.logger import HANDLER_MARK, setup_logging


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    root = logging.getLogger()
    level = root.level
    yield tmp_path
    for handler in list(root.handlers):
        if getattr(handler, HANDLER_MARK, False):
            root.removeHandler(handler)
    root.setLevel(level)


def write_config(path, **data):
    payload = {'schema': 1, 'kind': 'patch-linear', 'geometry': 'bathe-patch',
               'p_x': [1], 'p_y': [2]}
    payload.update(data)
    path.write_text(json.dumps(payload), encoding='utf-8')
    return str(path)


def read_rows(path):
    with open(path, newline='') as f:
        return list(csv.reader(f))


# =============================================================================
# Parser
# =============================================================================


class TestParser:
    def test_flags(self):
        args = build_parser().parse_args(['run', 'cfg.json', '--jobs', '3', '--out', 'o',
                                          '--exhaustive', '--dump-matrix', '--dump-shapes', '7'])
        assert args.config == 'cfg.json'
        assert args.jobs == 3 and args.out == 'o'
        assert args.exhaustive and args.dump_matrix
        assert args.dump_shapes == 7

    def test_defaults_leave_config_alone(self):
        args = build_parser().parse_args(['run', 'cfg.json'])
        assert args.jobs is None and args.out is None and args.dump_shapes is None
        assert not args.exhaustive and not args.dump_matrix

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(['--version'])
        assert exc.value.code == 0
        assert capsys.readouterr().out.startswith('xnyfem ')

    def test_missing_command(self):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2


# =============================================================================
# Runs
# =============================================================================


class TestRun:
    def test_patch_linear(self, workdir):
        cfg = write_config(workdir / 'cfg.json')
        assert main(['run', cfg, '--out', 'out']) == EXIT_OK
        rows = read_rows(workdir / 'out' / 'result.csv')
        assert rows[0] == ['n_dof', 'error', 'p_x', 'p_y', 'level']
        assert len(rows) == 2
        assert float(rows[1][1]) < 1e-10
        meta = json.loads((workdir / 'out' / 'meta.json').read_text())
        assert set(meta) == {'config', 'version', 'timing', 'study', 'series', 'files'}
        assert meta['config']['output']['dir'] == 'out'
        assert not (workdir / 'out' / 'mesh.json').exists()

    def test_saved_config_reruns(self, workdir):
        cfg = write_config(workdir / 'cfg.json', p_x=[2])
        assert main(['run', cfg, '--out', 'first']) == EXIT_OK
        assert main(['run', str(workdir / 'first' / 'config.json'), '--out', 'second']) == EXIT_OK
        first = (workdir / 'first' / 'result.csv').read_bytes()
        assert first == (workdir / 'second' / 'result.csv').read_bytes()

    def test_output_is_deterministic(self, workdir):
        cfg = write_config(workdir / 'cfg.json', p_x=[1, 2], pairing=['LaLa', 'LeLe'])
        assert main(['run', cfg, '--out', 'a']) == EXIT_OK
        assert main(['run', cfg, '--out', 'b', '--jobs', '2']) == EXIT_OK
        first = (workdir / 'a' / 'result.csv').read_bytes()
        assert first == (workdir / 'b' / 'result.csv').read_bytes()
        assert len(first.splitlines()) == 5

    def test_config_output_dir(self, workdir):
        cfg = write_config(workdir / 'cfg.json', output={'dir': 'from-config'})
        assert main(['run', cfg]) == EXIT_OK
        assert (workdir / 'from-config' / 'result.csv').exists()

    def test_dump_matrix_flag(self, workdir):
        cfg = write_config(workdir / 'cfg.json')
        assert main(['run', cfg, '--out', 'out', '--dump-matrix']) == EXIT_OK
        assert sorted(p.suffix for p in (workdir / 'out').iterdir()
                      if p.name.startswith('K_')) == ['.mtx']

    def test_basis_dump(self, workdir):
        cfg = write_config(workdir / 'cfg.json', kind='basis-dump', geometry='two-quad',
                           pairing=['LaLe'], p_x=[2], p_y=[2])
        assert main(['run', cfg, '--out', 'out', '--dump-shapes', '4']) == EXIT_OK
        tables = [p.name for p in (workdir / 'out').iterdir() if p.name.startswith('shapes_')]
        assert tables

    def test_mesh_file(self, workdir):
        from meshing.geometries import builtin_geometry
        from meshing.io import save_mesh
        mesh, _ = builtin_geometry('bathe-patch')
        (workdir / 'patch.json').write_text(save_mesh(mesh), encoding='utf-8')
        cfg = write_config(workdir / 'cfg.json', geometry=None, mesh_file='patch.json')
        assert main(['run', cfg, '--out', 'out']) == EXIT_OK
        copied = json.loads((workdir / 'out' / 'mesh.json').read_text())
        assert len(copied['quads']) == mesh.n_quads


# =============================================================================
# Exit codes
# =============================================================================


class TestExitCodes:
    def test_missing_config(self, capsys):
        assert main(['run', 'nowhere.json']) == EXIT_CONFIG
        assert 'not found' in capsys.readouterr().err

    def test_invalid_json(self, workdir):
        (workdir / 'bad.json').write_text('{"schema": 1,', encoding='utf-8')
        assert main(['run', 'bad.json']) == EXIT_CONFIG

    @pytest.mark.parametrize("override", [
        {'schema': 3},
        {'kind': 'unknown'},
        {'p_x': [0]},
        {'geometry': None},
        {'version': 'C'},
    ])
    def test_invalid_config(self, workdir, override):
        cfg = write_config(workdir / 'cfg.json', **override)
        assert main(['run', cfg]) == EXIT_CONFIG
        assert not (workdir / 'results').exists()

    def test_bad_dump_shapes_flag(self, workdir):
        cfg = write_config(workdir / 'cfg.json')
        assert main(['run', cfg, '--dump-shapes', '1']) == EXIT_CONFIG

    def test_missing_mesh_file(self, workdir):
        cfg = write_config(workdir / 'cfg.json', geometry=None, mesh_file='absent.json')
        assert main(['run', cfg]) == EXIT_CONFIG

    def test_malformed_mesh_file(self, workdir):
        (workdir / 'mesh.json').write_text('{"vertices": [[0, 0]]}', encoding='utf-8')
        cfg = write_config(workdir / 'cfg.json', geometry=None, mesh_file='mesh.json')
        assert main(['run', cfg]) == EXIT_CONFIG

    def test_numerical_failure(self, workdir, capsys):
        cfg = write_config(workdir / 'cfg.json', kind='patch-highorder', geometry='highorder-patch',
                           field_order=4, p_x=[1], p_y=[1], material={'nu': 0.0})
        assert main(['run', cfg]) == EXIT_NUMERICAL
        assert 'ClosureError' in capsys.readouterr().err

    def test_linear_algebra_failure(self, workdir, capsys, monkeypatch):
        import main as cli

        def broken(cfg):
            raise np.linalg.LinAlgError("Singular matrix")

        monkeypatch.setattr(cli, 'run_study', broken)
        assert main(['run', write_config(workdir / 'cfg.json')]) == EXIT_NUMERICAL
        assert 'LinAlgError' in capsys.readouterr().err


# =============================================================================
# Logging
# =============================================================================


class TestLogging:
    @pytest.mark.parametrize("verbosity,level", [(0, logging.WARNING), (1, logging.INFO),
                                                 (2, logging.DEBUG), (5, logging.DEBUG)])
    def test_levels(self, verbosity, level):
        assert setup_logging(verbosity).level == level

    def test_single_handler(self):
        root = setup_logging(0)
        setup_logging(1)
        ours = [h for h in root.handlers if getattr(h, HANDLER_MARK, False)]
        assert len(ours) == 1
