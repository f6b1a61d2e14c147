"""Command line interface for conemetric.

This is meant to be used as an application. Like every click application it
keeps some global state (cmctx) that is shared between the group and the
sub-commands, so it is not safe to call from multiple threads."""

import logging
import sys
import traceback
from pathlib import Path

import click

import conemetric.cones as cones
import conemetric.constants as constants
import conemetric.embeddings as embeddings
import conemetric.geodesics as geodesics
import conemetric.isometries as isometries
import conemetric.uniqueness as uniqueness
import conemetric.utils as utils
from conemetric.table import Table
from conemetric.utils import DomainError, InputError, NumericError


class RunConfig:
    """Settings shared by all commands: the config file values overridden by
    command line flags."""
    DEFAULT_CONFIG = '~/.cmrc'

    def _return_config(self, cmrc):
        """Internal function to read and return config file."""
        if cmrc is None:
            return {}
        cmrcfile = Path(cmrc).expanduser()

        # If default file doesn't exist, assume no config.
        if not cmrcfile.exists() and cmrc == RunConfig.DEFAULT_CONFIG:
            return {}

        # Explicitly specified file should exist.
        if not cmrcfile.exists():
            raise InputError(f'Config file not found: {cmrc}')

        config = utils.load_yaml(cmrcfile.read_text())
        if config is None:
            return {}
        if not isinstance(config, dict):
            raise InputError('Config file must contain a mapping')
        return config

    def __init__(self, cmrc):
        config = self._return_config(cmrc)

        self.default_precision = config.pop(
            'precision', constants.DEFAULT_PRECISION)
        if (isinstance(self.default_precision, bool)
                or not isinstance(self.default_precision, int)
                or not 6 <= self.default_precision <= 17):
            raise InputError('precision in config file must be an integer in '
                             f'[6, 17], got {self.default_precision!r}')
        self.default_seed = config.pop('seed', constants.DEFAULT_SEED)
        self.samples = config.pop('samples', constants.DEFAULT_SAMPLES)
        for key in ('default_seed', 'samples'):
            value = getattr(self, key)
            if isinstance(value, bool) or not isinstance(value, int) or (
                    value < 0):
                raise InputError(f'{key.replace("default_", "")} in config '
                                 f'file must be a nonnegative integer')

        if len(config):
            raise click.ClickException('Extra entries found in config file')

        self.precision = self.default_precision
        self.seed = self.default_seed
        self.debug = False

    def set_flags(self, precision, seed, debug):
        """Applies the command line flags of one invocation."""
        self.precision = (self.default_precision if precision is None
                          else precision)
        self.seed = self.default_seed if seed is None else seed
        self.debug = debug

    def number(self, x):
        return utils.format_float(x, self.precision)

    def vector(self, v):
        return utils.format_vector(v, self.precision)


# Global variable to save and pass context between click commands.
cmctx = None


# --- Begin private helper functions. ---

def _read_yaml(filename, what):
    try:
        text = Path(filename).expanduser().read_text()
    except OSError as e:
        raise InputError(f'Cannot read {what} file {filename}: '
                         f'{e.strerror}') from None
    d = utils.load_yaml(text)
    if not isinstance(d, dict):
        raise InputError(f'{what.capitalize()} file {filename} must contain '
                         'a mapping')
    return d


def _load_cone(filename):
    return cones.from_dict(_read_yaml(filename, 'cone'))


def _load_point(cone, filename):
    d = _read_yaml(filename, 'point')
    if 'Coords' not in d:
        raise InputError(f'Point file {filename} needs a Coords entry')
    coords = d.pop('Coords')
    if len(d):
        raise InputError(f'Extra attributes found in {filename}: '
                         f'{list(d.keys())}')
    return cone.point(coords, Path(filename).name)


def _load_interior(cone, filename):
    return cones.require_interior(cone, _load_point(cone, filename),
                                  Path(filename).name)


def _load_map(cone, filename):
    return isometries.from_dict(cone, _read_yaml(filename, 'map'))


_TEMPLATES = {
    'orthant': 'Orthant.yaml',
    'polyhedral': 'PolyhedralCone.yaml',
    'lorentz': 'LorentzCone.yaml',
    'psd': 'PSDCone.yaml',
    'point': 'Point.yaml',
    'linear': 'LinearMap.yaml',
    'congruence': 'CongruenceMap.yaml',
    'inversion': 'InversionMap.yaml',
    'partial_inversion': 'PartialInversionMap.yaml',
    'composite': 'CompositeMap.yaml',
}

_TABLE_FORMATS = ['plain', 'simple', 'github', 'grid', 'fancy_grid', 'pipe',
                  'orgtbl', 'rst', 'mediawiki', 'html', 'latex', 'tsv']

# --- End private helper functions. ---


@click.group()
@click.version_option(version=constants.VERSION, prog_name=constants.NAME)
@click.option('--config', '-c', type=click.Path(file_okay=True),
              default=RunConfig.DEFAULT_CONFIG, show_default=True,
              envvar='CM_CONFIG', show_envvar=True,
              help='The configuration file.')
@click.option('--precision', '-p', type=click.IntRange(6, 17),
              help='Digits after the decimal point in printed numbers '
              '[default: 12, or the config file value].')
@click.option('--seed', '-s', type=click.IntRange(min=0),
              help='Seed for sampling [default: 0, or the config file '
              'value].')
@click.option('--debug', is_flag=True,
              help='If set, logs debug messages and prints the stack trace '
              'when an exception is raised.')
def cm(config, precision, seed, debug):
    """cm computes Thompson and Hilbert metric geometry on cones: distances,
    geodesics, uniqueness of geodesics, log-embeddings, Gromov products and
    isometry checks. Inputs are YAML files; see "cm template" for examples.
    """
    logging.getLogger('conemetric').setLevel(
        logging.DEBUG if debug else logging.WARNING)
    global cmctx
    if not cmctx:
        # Setup a new context object for child commands.
        cmctx = RunConfig(config)
    cmctx.set_flags(precision, seed, debug)


@cm.command()
@click.argument('cone_file', metavar='CONE')
@click.argument('x_file', metavar='X')
@click.argument('y_file', metavar='Y')
def dist(cone_file, x_file, y_file):
    """Prints the Thompson and the Hilbert distance between X and Y."""
    cone = _load_cone(cone_file)
    x = _load_interior(cone, x_file)
    y = _load_interior(cone, y_file)
    thompson = cones.thompson_distance(cone, x, y)
    hilbert = cones.hilbert_distance(cone, x, y)
    click.echo(cmctx.number(thompson))
    click.echo(cmctx.number(hilbert))


@cm.command()
@click.argument('cone_file', metavar='CONE')
@click.argument('x_file', metavar='X')
def classify(cone_file, x_file):
    """Prints whether X is an interior, boundary or outside point, and its
    margin."""
    cone = _load_cone(cone_file)
    membership = cones.classify(cone, _load_point(cone, x_file))
    click.echo(f'{membership.status} {cmctx.number(membership.margin)}')


@cm.command()
@click.argument('cone_file', metavar='CONE')
@click.argument('x_file', metavar='X')
@click.argument('y_file', metavar='Y')
@click.option('--samples', '-n', type=click.IntRange(min=1), default=10,
              show_default=True,
              help='Number of intervals; N+1 points are printed.')
@click.option('--ray-first', is_flag=True,
              help='For unbalanced pairs, move along the ray first.')
@click.option('--format', '-f', 'tablefmt',
              type=click.Choice(_TABLE_FORMATS, case_sensitive=False),
              default='plain', show_default=True,
              help='Set output table format. For more information on table '
              'formats, please see "Table format" section on: '
              'https://pypi.org/project/tabulate/')
def geodesic(cone_file, x_file, y_file, samples, ray_first, tablefmt):
    """Prints equally spaced points of a geodesic from X to Y, one per line:
    the arclength followed by the coordinates (row by row for matrices)."""
    cone = _load_cone(cone_file)
    x = _load_interior(cone, x_file)
    y = _load_interior(cone, y_file)
    path = geodesics.geodesic(cone, x, y, ray_first=ray_first)
    table = Table(2, coltypes=['float', 'vector'], precision=cmctx.precision)
    for s, point in path.sample(samples):
        table.add_row([s, point])
    click.echo(table.string(tablefmt))


@cm.command()
@click.argument('cone_file', metavar='CONE')
@click.argument('x_file', metavar='X')
@click.argument('y_file', metavar='Y')
@click.option('--hilbert', is_flag=True,
              help='Decide uniqueness for the Hilbert metric instead.')
@click.option('--oracle', is_flag=True,
              help='Also run the randomized midpoint search (it can only '
              'find non-uniqueness witnesses).')
def unique(cone_file, x_file, y_file, hilbert, oracle):
    """Decides whether the geodesic from X to Y is unique. Prints the
    verdict, the deciding method and the relative spectrum (if any),
    followed by a witness midpoint for non-unique verdicts."""
    cone = _load_cone(cone_file)
    x = _load_interior(cone, x_file)
    y = _load_interior(cone, y_file)
    if hilbert:
        verdict = uniqueness.hilbert_unique(cone, x, y)
    else:
        verdict = uniqueness.is_unique(cone, x, y)
    found = None
    if oracle:
        found = uniqueness.midpoint_oracle(cone, x, y, samples=cmctx.samples,
                                           seed=cmctx.seed)

    line = f'{verdict.status} {verdict.method}'
    if verdict.spectrum is not None:
        line += ' ' + utils.format_set(verdict.spectrum)
    click.echo(line)
    if verdict.witness is not None:
        click.echo(f'witness: {cmctx.vector(verdict.witness)}')
        click.echo('check: d(x,w)+d(w,y)-d(x,y) = '
                   f'{cmctx.number(verdict.check)}')
    if oracle:
        if found is None:
            click.echo('oracle: none')
        else:
            click.echo(f'oracle: {cmctx.vector(found)}')


@cm.command()
@click.argument('cone_file', metavar='CONE')
@click.argument('x_file', metavar='X')
def embed(cone_file, x_file):
    """Prints the log-embedding log psi_i(X) of a point of a polyhedral
    cone, one coordinate per line."""
    cone = _load_cone(cone_file)
    x = _load_interior(cone, x_file)
    for value in embeddings.LogEmbedding(cone, seed=cmctx.seed).embed(x):
        click.echo(cmctx.number(value))


@cm.command()
@click.argument('cone_file', metavar='CONE')
@click.argument('p_file', metavar='P')
@click.argument('w1_file', metavar='W1')
@click.argument('w2_file', metavar='W2')
@click.option('--eta', '-e', type=float, default=2.0, show_default=True,
              help='The eta of the generalized Gromov product.')
@click.option('--kmax', '-k', type=click.IntRange(min=1), default=30,
              show_default=True, help='Number of terms.')
@click.option('--format', '-f', 'tablefmt',
              type=click.Choice(_TABLE_FORMATS, case_sensitive=False),
              default='plain', show_default=True,
              help='Set output table format.')
def gromov(cone_file, p_file, w1_file, w2_file, eta, kmax, tablefmt):
    """Prints k and (x_k|y_k)_{P,eta} for k = 1..KMAX, where x_k and y_k are
    the points at distance k from P on the segments from P towards the
    boundary points W1 and W2."""
    cone = _load_cone(cone_file)
    p = _load_interior(cone, p_file)
    directions = [_load_point(cone, w1_file), _load_point(cone, w2_file)]
    series = embeddings.gromov_series(cone, p, directions, kmax, eta)
    table = Table(2, coltypes=['int', 'float'], precision=cmctx.precision)
    table.set_rows([list(row) for row in series.rows()])
    click.echo(table.string(tablefmt))


@cm.command()
@click.argument('cone_file', metavar='CONE')
@click.option('--map', '-m', 'map_file', required=True, metavar='FILE',
              help='The map file.')
@click.option('--samples', '-n', type=click.IntRange(min=1),
              default=constants.VALIDATION_SAMPLES, show_default=True,
              help='Number of sampled pairs.')
def isometry(cone_file, map_file, samples):
    """Prints the maximal distance distortion of the map over sampled pairs
    and whether it is projectively linear (true, false or
    inconclusive)."""
    cone = _load_cone(cone_file)
    cone_map = _load_map(cone, map_file)
    deviation = isometries.check_isometry(cone_map, cone, samples=samples,
                                          seed=cmctx.seed)
    report = isometries.is_projectively_linear(
        cone_map, cone, samples=max(50, cone.ambient_dim() + 2),
        seed=cmctx.seed)
    click.echo(cmctx.number(deviation))
    click.echo(report.verdict_string())


@cm.command()
@click.argument('kind', type=click.Choice(sorted(_TEMPLATES)))
def template(kind):
    """Prints an annotated example input file."""
    filepath = Path(__file__).resolve().parent / 'data' / _TEMPLATES[kind]
    click.echo(filepath.read_text(), nl=False)


def run(argv):
    """Runs cm with the arguments argv and returns the exit code.

    Exit codes: 0 success, 1 usage error, 2 invalid input, 3 numeric
    failure. Error messages are printed on stderr.
    """
    try:
        ret = cm.main(args=list(argv), prog_name='cm', standalone_mode=False)
        return ret if isinstance(ret, int) else 0
    except (click.UsageError, click.Abort) as e:
        if isinstance(e, click.UsageError):
            e.show()
        return 1
    except click.ClickException as e:
        e.show()
        return 2
    except (InputError, DomainError) as e:
        _report(e)
        return 2
    except NumericError as e:
        _report(e)
        return 3


def _report(e):
    if cmctx is not None and cmctx.debug:
        traceback.print_exc(file=sys.stderr)
    click.echo(f'Error: {e}', err=True)


def main():
    logging.basicConfig(format='%(levelname)s: %(name)s: %(message)s',
                        stream=sys.stderr)
    sys.exit(run(sys.argv[1:]))
