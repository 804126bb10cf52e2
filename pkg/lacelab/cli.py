# Copyright 2026 The lacelab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Command-line front end.

Subcommands ``seq``, ``verify-clt``, ``lace {enumerate,check,oracle}`` and
``saw {cn,pi,density,crosscheck}``. Parameters come from an optional JSON file given with
``--config``; explicit flags override file values. Every output file starts with a manifest that
records the full parameter set, so identical configurations produce byte-identical files.

Exit codes: 0 success, 2 invalid configuration, 3 non-convergence, 4 statistical failure.
"""

import argparse
import csv
import io
import json
import logging
import os
import sys

import numpy as np

from lacelab import __about__
from lacelab import _encoder
from lacelab import _utils
from lacelab import exceptions
from lacelab import gamma_family
from lacelab import lace_engine
from lacelab import saw_mc
from lacelab import sequence_core
from lacelab import solver
from lacelab import spectral


_logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json')
LACE_ACTIONS = ('enumerate', 'check', 'oracle')
SAW_ACTIONS = ('cn', 'pi', 'density', 'crosscheck', 'majorant')
MC_COLUMNS = ('observable', 'index', 'node', 'mean', 'stderr', 'n_samples', 'seed')

_FAMILY_DEFAULTS = {
    'preset': 'power-law',
    'a': 2.5,
    'K': 1.0,
    'beta': -0.5,
    's': 0.5,
}

_SEQ_DEFAULTS = dict(_FAMILY_DEFAULTS, dim=5, lam=0.1, n_max=256)

_CLT_DEFAULTS = dict(_SEQ_DEFAULTS, n_max=32, epsilon=solver.DEFAULT_EPSILON,
                     k_max=None, nodes=spectral.DEFAULT_NODES,
                     n_list=[4, 8, 16, 32])

_LACE_DEFAULTS = {
    'edges': 2,
    'n': 5,
    'dim': 5,
    'lam': 0.5,
    'rho': 1.0,
    'paths': 100,
    'seed': 0,
}

_SAW_DEFAULTS = {
    'dim': 5,
    'lam': 0.2,
    'rho': 1.0,
    'n': 4,
    'm': 2,
    'seed': 0,
    'samples': 100000,
    'k_max': saw_mc.CROSSCHECK_K_MAX,
    'nodes': 25,
    'r_max': 6.0,
    'points': 60,
    'bandwidth': None,
}


def load_config(path, valid_keys):
    """Loads a JSON configuration object and rejects unknown keys.

    Args:
        path: Path to a JSON file, or ``None``.
        valid_keys: Keys accepted by the subcommand.

    Returns:
        dict: The configuration (empty when ``path`` is ``None``).

    Raises:
        InvalidArgumentError: If the file cannot be read or parsed, or has unknown keys.
    """
    if not path:
        return {}
    try:
        with open(path, 'r') as json_file:
            json_str = json_file.read()
    except OSError as err:
        raise exceptions.InvalidArgumentError(
            'Unable to read file {0}. {1}'.format(path, err), cause=err)
    try:
        json_data = json.loads(json_str)
    except ValueError as err:
        raise exceptions.InvalidArgumentError(
            'File {0} is not valid json. {1}'.format(path, err), cause=err)
    try:
        return _encoder._Validators.check_keys('config', json_data, valid_keys)
    except ValueError as error:
        raise _utils.handle_value_error(error, 'cli')


def resolve_options(args, defaults):
    """Merges defaults, the ``--config`` file and explicit flags; flags win."""
    options = dict(defaults)
    options.update(load_config(args.config, defaults.keys()))
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    return options


def _family(options):
    return gamma_family.family_from_preset(
        options['preset'], options['dim'], a=options['a'], K=options['K'],
        beta=options['beta'], s=options['s'])


def _format_cell(value):
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _encoder.format_float(value)
    return str(value)


def render_csv(manifest, columns, rows):
    """CSV text: a ``# manifest`` comment line, a header row and full-precision rows."""
    buffer = io.StringIO()
    buffer.write('# manifest: {0}\n'.format(json.dumps(manifest, sort_keys=True,
                                                       cls=_encoder.ResultEncoder)))
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format_cell(value) for value in row])
    return buffer.getvalue()


def render_json(manifest, result):
    return _encoder.dumps({'manifest': manifest, 'result': result}) + '\n'


class Output:
    """Writes a command's table and summary into the output directory."""

    def __init__(self, out_dir, fmt, manifest):
        self._out_dir = out_dir
        self._fmt = fmt
        self._manifest = manifest
        self._written = []

    @property
    def written(self):
        return list(self._written)

    def _write(self, name, text):
        os.makedirs(self._out_dir, exist_ok=True)
        path = os.path.join(self._out_dir, name)
        with open(path, 'w', newline='') as out_file:
            out_file.write(text)
        self._written.append(path)
        _logger.info('Wrote %s.', path)

    def emit(self, stem, columns, rows, summary):
        """Writes ``<stem>.csv`` with the table and ``<stem>.json`` with the summary.

        With ``--format json`` the table rows are folded into the JSON file instead.
        """
        if self._fmt == 'csv':
            self._write(stem + '.csv', render_csv(self._manifest, columns, rows))
            self._write(stem + '.json', render_json(self._manifest, summary))
        else:
            table = [dict(zip(columns, row)) for row in rows]
            self._write(stem + '.json', render_json(self._manifest, dict(summary, rows=table)))


def _manifest(command, options):
    return {'command': command, 'version': __about__.__version__, 'options': options}


def cmd_seq(args):
    """Solves the scalar recursion and writes ``(n, c_n, a_n)`` and the scalar summary."""
    options = resolve_options(args, _SEQ_DEFAULTS)
    family = _family(options)
    scalars = sequence_core.BScalars.from_family(family, options['lam'], options['n_max'])
    if args.dry_run:
        return None
    sol = sequence_core.solve(scalars)
    rows = [(n, float(c), float(a)) for n, (c, a) in enumerate(zip(sol.c, sol.a))]
    summary = sol.to_dict()
    summary['max_recursion_residual'] = float(np.max(
        sequence_core.recursion_residual(sol.c, scalars)))
    summary['max_a_residual'] = float(np.max(sequence_core.a_equation_residual(sol, scalars)))
    output = Output(args.out, args.format, _manifest('seq', options))
    output.emit('seq', ('n', 'c_n', 'a_n'), rows, summary)
    return output


def cmd_verify_clt(args):
    """Runs the frequency-space solver and writes profiles and the ratio summary."""
    options = resolve_options(args, _CLT_DEFAULTS)
    family = _family(options)
    k_max = options['k_max']
    if k_max is None:
        k_max = spectral.decay_k_max(family.min_variance(options['n_max']))
    grid = spectral.RadialGrid.uniform(k_max, options['nodes'])
    cfg = solver.SolverConfig(options['dim'], options['lam'], options['n_max'], family,
                              epsilon=options['epsilon'], grid=grid)
    n_list = [n for n in options['n_list'] if n <= cfg.n_max]
    if args.dry_run:
        return None
    run = solver.run_recursion(cfg)
    rows = []
    for n in n_list:
        rows.extend(solver.profile_rows(run, n))
    output = Output(args.out, args.format, _manifest('verify-clt', options))
    output.emit('verify_clt', solver.PROFILE_COLUMNS, rows, solver.summary(run, n_list))
    return output


def _lace_paths(options):
    params = saw_mc.SawParams(options['dim'], options['lam'], options['rho'], options['n'],
                              seed=options['seed'], n_samples=max(2, options['paths']))
    for _, paths in saw_mc.sample_paths(params):
        for path in paths[:options['paths']]:
            yield path


def cmd_lace(args):
    """Enumerates laces or checks the lace identities on sampled paths."""
    options = resolve_options(args, _LACE_DEFAULTS)
    n = _encoder._Validators.check_int('n', options['n'], minimum=1)
    if args.dry_run:
        return None
    output = Output(args.out, args.format, _manifest('lace ' + args.action, options))
    if args.action == 'enumerate':
        laces = lace_engine.enumerate_laces(options['edges'], n)
        rows = [(len(lace), n, ' '.join(str(m) for m in lace.m)) for lace in laces]
        summary = {'count': len(laces), 'census': lace_engine.connected_graph_census(n)
                   if n <= lace_engine.MAX_BRUTEFORCE_J else None}
        output.emit('lace_enumerate', ('N', 'n', 'm'), rows, summary)
        return output
    residuals = []
    for path in _lace_paths(options):
        if args.action == 'check':
            residuals.append(lace_engine.check_recursion_identity(
                path, n, options['lam'], options['rho']))
        else:
            lace_value = lace_engine.j_weight_lace(path, n, options['lam'], options['rho'])
            brute = lace_engine.j_weight_bruteforce(path, n, options['lam'], options['rho'])
            residuals.append(abs(lace_value - brute))
    worst = max(residuals) if residuals else 0.0
    rows = [(n, options['lam'], options['rho'], options['seed'], worst)]
    output.emit('lace_' + args.action, ('n', 'lam', 'rho', 'seed', 'max_residual'), rows,
                {'paths': len(residuals), 'max_residual': worst})
    return output


def _mc_rows(observable, params, nodes, estimates, index):
    return [(observable, index, float(node), estimate.mean, estimate.stderr,
             estimate.n_samples, params.seed) for node, estimate in zip(nodes, estimates)]


def cmd_saw(args):
    """Monte Carlo estimates for the weakly self-avoiding walk."""
    options = resolve_options(args, _SAW_DEFAULTS)
    params = saw_mc.SawParams(options['dim'], options['lam'], options['rho'], options['n'],
                              seed=options['seed'], n_samples=options['samples'],
                              threads=args.threads)
    grid = spectral.RadialGrid.uniform(options['k_max'], options['nodes'])
    if args.dry_run:
        return None
    output = Output(args.out, args.format, _manifest('saw ' + args.action, options))
    summary = {'params': params.to_dict()}
    report = None
    if args.action == 'cn':
        estimates = saw_mc.estimate_cn_sequence(params)
        rows = [('c', n, 0.0, est.mean, est.stderr, est.n_samples, params.seed)
                for n, est in enumerate(estimates)]
    elif args.action == 'pi':
        m = options['m']
        first, second = saw_mc.estimate_pi_moments(params, m)
        rows = _mc_rows('pi', params, [0.0], [first], m)
        rows += _mc_rows('pi_second_moment', params, [0.0], [second], m)
        hat = saw_mc.estimate_pi_hat(params, m, grid.k_nodes)
        rows += _mc_rows('pi_hat', params, hat.nodes, hat, m)
        if m == 1:
            summary['pi1_closed_form'] = saw_mc.pi1_closed_form(params)
    elif args.action == 'density':
        radii = np.linspace(options['r_max'] / options['points'], options['r_max'],
                            options['points'])
        profile = saw_mc.estimate_endpoint_density(params, radii, options['bandwidth'])
        rows = _mc_rows('density', params, profile.nodes, profile, params.n)
        hat = saw_mc.estimate_endpoint_hat(params, grid.k_nodes)
        rows += _mc_rows('endpoint_hat', params, hat.nodes, hat, params.n)
        summary['bandwidth'] = profile.bandwidth
    elif args.action == 'majorant':
        report = saw_mc.check_majorant_domination(
            params, min(params.n, saw_mc.MAX_PI_INDEX), grid.k_nodes)
        rows = [('b_hat', m, float(node), float(mean), float(err), params.n_samples,
                 report.holdout_seed)
                for m, (means, errs) in enumerate(zip(report.b_hat, report.stderr), start=1)
                for node, mean, err in zip(report.k_nodes, means, errs)]
        summary['majorant'] = report.to_dict()
    else:
        report = saw_mc.cross_check_recursion(params, min(params.n, saw_mc.MAX_PI_INDEX), grid)
        rows = [('c', n, 0.0, est.mean, est.stderr, est.n_samples, params.seed)
                for n, est in enumerate(report.c_mc, start=1)]
        summary['crosscheck'] = report.to_dict()
    output.emit('saw_' + args.action, MC_COLUMNS, rows, summary)
    if report is not None:
        report.raise_for_failure()
    return output


def _common_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON file with parameters.')
    common.add_argument('--out', default='.', help='Output directory.')
    common.add_argument('--seed', type=int, help='Stream seed (unsigned 64-bit).')
    common.add_argument('--threads', type=int, default=1, help='Worker thread cap.')
    common.add_argument('--format', choices=FORMATS, default='csv')
    common.add_argument('--dry-run', action='store_true',
                        help='Validate the configuration and write nothing.')
    common.add_argument('-v', '--verbose', action='store_true')
    return common


def _add_family_flags(parser):
    parser.add_argument('--preset', choices=gamma_family.PRESETS)
    parser.add_argument('--dim', type=int)
    parser.add_argument('--lam', type=float)
    parser.add_argument('--n-max', dest='n_max', type=int)
    parser.add_argument('--a', type=float)
    parser.add_argument('--K', type=float)
    parser.add_argument('--beta', type=float)
    parser.add_argument('--s', type=float)


def build_parser():
    """Builds the argument parser with all subcommands."""
    common = _common_parser()
    parser = argparse.ArgumentParser(prog='lacelab', description=__about__.__title__)
    parser.add_argument('--version', action='version', version=__about__.__version__)
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    seq = subparsers.add_parser('seq', parents=[common], help='Scalar recursion.')
    _add_family_flags(seq)
    seq.set_defaults(handler=cmd_seq)

    clt = subparsers.add_parser('verify-clt', parents=[common], help='Convolution solver.')
    _add_family_flags(clt)
    clt.add_argument('--epsilon', type=float)
    clt.add_argument('--k-max', dest='k_max', type=float)
    clt.add_argument('--nodes', type=int)
    clt.add_argument('--n-list', dest='n_list', type=int, nargs='+')
    clt.set_defaults(handler=cmd_verify_clt)

    lace = subparsers.add_parser('lace', parents=[common], help='Lace combinatorics.')
    lace.add_argument('action', choices=LACE_ACTIONS)
    lace.add_argument('--edges', type=int, help='Number of lace edges N.')
    lace.add_argument('--n', type=int)
    lace.add_argument('--dim', type=int)
    lace.add_argument('--lam', type=float)
    lace.add_argument('--rho', type=float)
    lace.add_argument('--paths', type=int)
    lace.set_defaults(handler=cmd_lace)

    saw = subparsers.add_parser('saw', parents=[common], help='Walk Monte Carlo.')
    saw.add_argument('action', choices=SAW_ACTIONS)
    saw.add_argument('--dim', type=int)
    saw.add_argument('--lam', type=float)
    saw.add_argument('--rho', type=float)
    saw.add_argument('--n', type=int)
    saw.add_argument('--m', type=int)
    saw.add_argument('--samples', type=int)
    saw.add_argument('--k-max', dest='k_max', type=float)
    saw.add_argument('--nodes', type=int)
    saw.add_argument('--r-max', dest='r_max', type=float)
    saw.add_argument('--points', type=int)
    saw.add_argument('--bandwidth', type=float)
    saw.set_defaults(handler=cmd_saw)
    return parser


def main(argv=None):
    """Runs the command line and returns the process exit status."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.DEBUG if args.verbose else logging.INFO,
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        args.handler(args)
    except exceptions.LabError as error:
        _logger.error('%s: %s', error.code, error)
        return _utils.exit_code_for(error)
    except ValueError as error:
        _logger.error('%s', error)
        return _utils.exit_code_for(_utils.handle_value_error(error, args.command))
    return _utils.EXIT_OK
