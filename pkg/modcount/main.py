import cmath
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
from click.core import ParameterSource

from modcount import VERSION
from modcount.charsum import conditional_study, disjoint_block_polynomial, disjoint_block_system, exact_char_sum, \
    verify_lemma_conditions, xor_tv_bound
from modcount.config import default_map, read_config_file
from modcount.distributions import histogram_rows, tv_to_uniform
from modcount.errors import ModCountError, ParameterError
from modcount.gensample import PSpec, sampler_metadata
from modcount.graphcore import parse_family, read_host_file, read_pattern
from modcount.invariants import family_profile, is_above_threshold, phi
from modcount.montecarlo import EXPOSURES, ExperimentConfig, corollary_experiment, decay_study, \
    exact_xi_distribution, run_metadata, run_trials
from modcount.packing import DEFAULT_CAP, packing_report, packing_study
from modcount.reporting import emit, result_document
from modcount.subcount import count_copies, count_copies_mod
from modcount.utils import OUTPUT_FORMATS, error_out, global_options, verbose_out

_host_path = click.Path(exists=True, dir_okay=False, file_okay=True, resolve_path=True, path_type=Path)


def _family_option(function):
    return click.option('--family', required=True, metavar='<G1,G2,...>',
                        help='The family: a comma-separated list of catalog names (K3, C5, P4, S3, ...) and/or '
                             'graph file paths.')(function)


def _p_spec_options(function):
    function = click.option('--p-scale', type=float, help='Scale factor c for p = c*n^e.  Requires --p-exp.')(function)
    function = click.option('--p-exp', metavar='<rational>', help='Exponent e for p = n^e, like -2/3.')(function)
    function = click.option('--p', 'p', type=float, help='A constant edge probability.')(function)
    return function


def _sampling_options(function):
    function = click.option('--seed', type=click.IntRange(min=0, max=(1 << 64) - 1), default=0, show_default=True,
                            help='The master seed.')(function)
    function = click.option('--trials', type=click.IntRange(min=1), required=True,
                            help='The number of trials.')(function)
    return function


def _parse_n_grid(text: str) -> List[int]:
    try:
        grid = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ParameterError(f'"{text}" is not a comma-separated list of integers.', 'BAD_N_GRID')
    if not grid or any(n < 1 for n in grid):
        raise ParameterError(f'"{text}" must list at least one positive n.', 'BAD_N_GRID')
    return grid


def _pspec(p, p_exp, p_scale) -> PSpec:
    """
    A function that builds the p-specification for the current command.  A form given on
    the command line replaces the other form when that one came from a configuration
    file, so a file's ``p`` never clashes with a command line ``--p-exp`` or the reverse.

    :param p: the constant probability, if any.
    :param p_exp: the exponent text, if any.
    :param p_scale: the scale factor, if any.
    :return: the p-specification.
    """
    ctx = click.get_current_context()
    from_command_line = {name for name in ('p', 'p_exp', 'p_scale')
                         if ctx.get_parameter_source(name) is ParameterSource.COMMANDLINE}

    if 'p' in from_command_line:
        p_exp = p_exp if 'p_exp' in from_command_line else None
        p_scale = p_scale if 'p_scale' in from_command_line else None
    elif from_command_line:
        p = None

    return PSpec.from_options(p, p_exp, p_scale)


def _optional_pspec(p, p_exp, p_scale) -> Optional[PSpec]:
    if p is None and p_exp is None and p_scale is None:
        return None
    return _pspec(p, p_exp, p_scale)


@click.group()
@click.option('--quiet', '-q', is_flag=True, help='Suppress normal diagnostic output.')
@click.option('--verbose', '-v', count=True, help='Produce verbose output.  Repeat for more verbosity.')
@click.option('--threads', '-t', type=click.IntRange(min=1),
              help='The number of worker processes.  Defaults to $MODCOUNT_THREADS, else 1.  Results do not '
                   'depend on it.')
@click.option('--format', '-f', 'output_format', type=click.Choice(OUTPUT_FORMATS), default='json',
              show_default=True, help='The format of results.')
@click.option('--out', '-o', 'out_path', type=click.Path(dir_okay=False, path_type=Path),
              help='Write results to this file instead of standard output.')
@click.option('--no-meta', is_flag=True, help='Leave the timestamp and tool version out of results.')
@click.option('--config', '-c', 'config_path', type=click.Path(exists=True, dir_okay=False, path_type=Path),
              help='A YAML file of option values; options given on the command line win.')
@click.version_option(version=VERSION, help='Show the version of modcount and exit.')
@click.pass_context
def cli(ctx, quiet, verbose, threads, output_format, out_path, no_meta, config_path):
    """
    Use this tool to study subgraph counts modulo q in random graphs.

    Each subcommand computes one thing: exact invariants of a family, copy counts in a
    given graph, sampled or exact laws of the count vector, decay and corollary
    experiments, packings of disjoint copies and character sums.
    """
    # First, we need to store our global options.
    global_options.\
        set_quiet(quiet).\
        set_verbose(verbose).\
        set_threads(threads).\
        set_output_format(output_format).\
        set_out_path(out_path).\
        set_no_meta(no_meta)

    if config_path is not None:
        ctx.default_map = default_map(read_config_file(config_path), list(cli.commands))
        verbose_out(f'Read option defaults from {config_path}.')


@cli.command()
@_family_option
@click.option('--n', 'n', type=click.IntRange(min=2), required=True, help='The number of vertices.')
@_p_spec_options
def invariants(family, n, p, p_exp, p_scale):
    """
    Report densities, the family threshold and, given p, log Phi.
    """
    graphs = parse_family(family)
    pspec = _optional_pspec(p, p_exp, p_scale)
    profile = family_profile(graphs, n, None if pspec is None else pspec.evaluate(n))

    if pspec is not None:
        profile['p_spec'] = pspec.describe()
        profile['above_threshold'] = is_above_threshold(pspec, graphs)

    emit(result_document('invariants', profile))


@cli.command()
@click.option('--host-file', type=_host_path, required=True, help='The host graph file.')
@click.option('--pattern', required=True, help='The pattern: a catalog name or a graph file path.')
@click.option('--q', 'q', type=int, help='Also report the count modulo q.')
def count(host_file, pattern, q):
    """
    Count the copies of a pattern in a host graph.
    """
    host = read_host_file(host_file)
    graph = read_pattern(pattern)
    counts = count_copies(host, graph)
    payload: Dict[str, Any] = {
        'pattern': graph.name,
        'host_vertices': host.n,
        'host_edges': host.edge_count,
        'automorphisms': graph.automorphism_count,
        'embeddings': str(counts.embeddings),
        'copies': str(counts.copies)
    }

    if q is not None:
        payload['q'] = q
        payload['copies_mod_q'] = count_copies_mod(host, graph, q)

    emit(result_document('count', payload))


@cli.command()
@_family_option
@click.option('--n', 'n', type=click.IntRange(min=1), required=True, help='The number of vertices.')
@_p_spec_options
@click.option('--q', 'q', type=int, default=2, show_default=True, help='The modulus.')
@_sampling_options
@click.option('--exposure', type=click.Choice(EXPOSURES), default='direct', show_default=True,
              help='Sample G(n, p) directly or through the two-step exposure.')
def simulate(family, n, p, p_exp, p_scale, q, trials, seed, exposure):
    """
    Sample the count vector modulo q and measure its distance to uniform.
    """
    graphs = parse_family(family)
    pspec = _pspec(p, p_exp, p_scale)
    cfg = ExperimentConfig(graphs, n, pspec, q, trials, seed, exposure)
    dist = run_trials(cfg)
    distance = tv_to_uniform(dist)
    histogram = histogram_rows(dist)

    emit(result_document('simulate', {
        'tv': distance.tv,
        'bias_scale': distance.bias_scale,
        'log_phi': phi(graphs, n, cfg.p).log_phi,
        'above_threshold': is_above_threshold(pspec, graphs),
        'histogram': histogram
    }, **run_metadata(cfg)), histogram)


@cli.command()
@_family_option
@click.option('--n', 'n', type=click.IntRange(min=1, max=7), required=True, help='The number of vertices.')
@click.option('--p', 'p', type=click.FloatRange(min=0, max=1), required=True, help='The edge probability.')
@click.option('--q', 'q', type=int, default=2, show_default=True, help='The modulus.')
def exact(family, n, p, q):
    """
    Compute the exact law of the count vector modulo q for a tiny n.
    """
    graphs = parse_family(family)
    dist = exact_xi_distribution(n, p, graphs, q)
    bound = xor_tv_bound(dist)
    histogram = histogram_rows(dist)

    emit(result_document('exact', {
        'tv': bound.actual_tv,
        'epsilon': bound.epsilon,
        'xor_bound': bound.bound,
        'histogram': histogram
    }, config={'family': graphs.names, 'n': n, 'p': p, 'q': q}), histogram)


@cli.command()
@_family_option
@click.option('--n-grid', required=True, metavar='<n1,n2,...>', help='The vertex counts to study.')
@_p_spec_options
@click.option('--q', 'q', type=int, default=2, show_default=True, help='The modulus.')
@_sampling_options
@click.option('--exposure', type=click.Choice(EXPOSURES), default='direct', show_default=True,
              help='Sample G(n, p) directly or through the two-step exposure.')
def decay(family, n_grid, p, p_exp, p_scale, q, trials, seed, exposure):
    """
    Measure the distance to uniform along a grid of n.
    """
    graphs = parse_family(family)
    grid = _parse_n_grid(n_grid)
    pspec = _pspec(p, p_exp, p_scale)
    base = ExperimentConfig(graphs, grid[0], pspec, q, trials, seed, exposure)
    table = decay_study(base, grid)
    rows = [row._asdict() for row in table.rows]
    config = base.describe()
    config.pop('n')
    config.pop('p')
    config['n_grid'] = grid

    emit(result_document('decay', {'above_threshold': table.above_threshold, 'rows': rows},
                         config=config, sampler=sampler_metadata(seed)), rows)


@cli.command()
@_family_option
@click.option('--alpha', required=True, metavar='<rational>', help='The exponent alpha; p = n^(-alpha).')
@click.option('--n', 'n', type=click.IntRange(min=2), required=True, help='The number of vertices.')
@click.option('--q', 'q', type=int, default=2, show_default=True, help='The modulus.')
@_sampling_options
def corollary(family, alpha, n, q, trials, seed):
    """
    Split the family at 1/alpha and check both limits at p = n^(-alpha).
    """
    graphs = parse_family(family)
    report = corollary_experiment(graphs, alpha, n, q, trials, seed)
    histogram = histogram_rows(report.dist)
    payload = report.to_json()
    payload['histogram'] = histogram

    emit(result_document('corollary', payload,
                         config={'family': graphs.names, 'alpha': alpha, 'n': n, 'q': q, 'trials': trials,
                                 'seed': seed},
                         sampler=sampler_metadata(seed)), histogram)


@cli.command()
@click.option('--host-file', type=_host_path, help='The host graph file.')
@click.option('--pattern', required=True, help='The pattern: a catalog name or a graph file path.')
@click.option('--cap', type=click.IntRange(min=0), default=DEFAULT_CAP, show_default=True,
              help='The most copies to enumerate.')
@click.option('--exact/--no-exact', default=True, show_default=True,
              help='Find the largest packing exactly when there are at most 24 copies.')
@click.option('--study', is_flag=True, help='Sample G(n, p) along --n-grid instead of reading a host.')
@click.option('--n-grid', metavar='<n1,n2,...>', help='The vertex counts to study.')
@_p_spec_options
@click.option('--trials', type=click.IntRange(min=1), default=200, show_default=True,
              help='The number of trials per n.')
@click.option('--seed', type=click.IntRange(min=0, max=(1 << 64) - 1), default=0, show_default=True,
              help='The master seed.')
def packing(host_file, pattern, cap, exact, study, n_grid, p, p_exp, p_scale, trials, seed):
    """
    Pack vertex-disjoint copies of a pattern and compare with the Turan bound.
    """
    graph = read_pattern(pattern)

    if study:
        if n_grid is None:
            raise ParameterError('--study needs --n-grid.', 'BAD_N_GRID')
        grid = _parse_n_grid(n_grid)
        pspec = _pspec(p, p_exp, p_scale)
        rows = [row._asdict() for row in packing_study(graph, grid, pspec, trials, seed, cap)]
        emit(result_document('packing', {'rows': rows},
                             config={'pattern': graph.name, 'n_grid': grid, 'p_spec': pspec.describe(),
                                     'trials': trials, 'seed': seed, 'cap': cap},
                             sampler=sampler_metadata(seed)), rows)
        return

    if host_file is None:
        raise ParameterError('Give either --host-file or --study.', 'MISSING_HOST')
    report = packing_report(read_host_file(host_file), graph, cap, exact)
    emit(result_document('packing', report.to_json(), config={'pattern': graph.name, 'cap': cap}))


@cli.command()
@click.option('--host-file', type=_host_path, help="The host graph G' (at most 24 edges).")
@click.option('--family', metavar='<G1,G2,...>', help='The family, with --host-file.')
@click.option('--q', 'q', type=int, default=2, show_default=True, help='The modulus.')
@click.option('--blocks', type=click.IntRange(min=0), help='Use r disjoint blocks instead of a host.')
@click.option('--degree', type=click.IntRange(min=1), help='The variables per block, with --blocks.')
@click.option('--p', 'p', type=click.FloatRange(min=0, max=1), default=0.5, show_default=True,
              help='The probability each variable is 1, with --blocks.')
def charsum(host_file, family, q, blocks, degree, p):
    """
    Evaluate character sums exactly, for a host graph or for disjoint blocks.
    """
    if blocks is not None:
        if degree is None:
            raise ParameterError('--blocks needs --degree.', 'BAD_PARAMETER')
        polynomial = disjoint_block_polynomial(blocks, degree, q)
        value = exact_char_sum(polynomial, p)
        check = verify_lemma_conditions(polynomial, disjoint_block_system(blocks, degree))
        single = abs(1 - p ** degree + p ** degree * cmath.exp(2j * cmath.pi / q))
        emit(result_document('charsum', {
            'polynomial': polynomial.to_json(),
            'value': value.value,
            'modulus': value.modulus,
            'error_budget': value.error_budget,
            'product_formula': single ** blocks,
            'conditions': {'satisfied': check.satisfied, 'bullets': list(check.bullets)}
        }, config={'blocks': blocks, 'degree': degree, 'q': q, 'p': p}))
        return

    if host_file is None or family is None:
        raise ParameterError('Give either --host-file with --family, or --blocks with --degree.', 'MISSING_HOST')
    graphs = parse_family(family)
    study = conditional_study(read_host_file(host_file), graphs, q)
    rows = [{'c': list(row.c), 'char_sum': row.char_sum, 'r': row.r, 'conditions_hold': row.conditions_hold}
            for row in study.rows]

    emit(result_document('charsum', {
        'rows': rows,
        'epsilon': study.epsilon,
        'xor_epsilon': study.xor.epsilon,
        'xor_bound': study.xor.bound,
        'tv': study.xor.actual_tv
    }, config={'family': graphs.names, 'q': q}), rows)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    A function that runs the tool and returns its exit code: ``0`` on success, ``1`` for
    bad input and ``2`` for runtime failures.

    :param argv: the command line arguments, without the program name.
    :return: the exit code.
    """
    try:
        result = cli.main(args=None if argv is None else list(argv), prog_name='modcount', standalone_mode=False)
    except ModCountError as error:
        error_out(str(error))
        return error.exit_code
    except click.exceptions.Abort:
        error_out('[ABORTED] Interrupted.')
        return 2
    except click.ClickException as error:
        error.show()
        return 1
    except Exception as error:
        error_out(f'[INTERNAL] {error.__class__.__name__}: {error}')
        return 2

    return result if isinstance(result, int) else 0


def run():
    sys.exit(main())
