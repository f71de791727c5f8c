"""
This library runs the experiments: repeated sampling of ``ξ`` into a histogram over
``Z_q^k``, the exact law of ``ξ`` for tiny ``n``, the decay of the distance to uniform
along a grid of ``n``, the corollary split experiment and the two-step exposure
equivalence check.
"""
import math
from fractions import Fraction
from itertools import combinations
from multiprocessing import Pool
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from modcount.distributions import EmpiricalDist, ExactDist, check_cells, marginal, tv_to_uniform
from modcount.errors import ParameterError, SizeCapExceeded
from modcount.graphcore import GraphFamily, HostGraph
from modcount.gensample import PSpec, SeedSpec, sample_gnp, sample_two_step, sampler_metadata
from modcount.invariants import classify_corollary, format_rational, is_above_threshold, phi
from modcount.subcount import check_modulus, xi_vector
from modcount.utils import global_options, verbose_out, warn

EXPOSURES = ('direct', 'two-step')
MAX_EXACT_PAIRS = 24
MIN_EXPECTED = 5.0
CHI_SQUARE_LEVEL = 0.01


class ExperimentConfig(object):
    """
    Instances of this class describe one batch of trials.  Trial ``t`` uses the stream
    ``(master_seed, trial_offset + t)``.
    """
    def __init__(self, family: GraphFamily, n: int, pspec: PSpec, q: int, trials: int, master_seed: int,
                 exposure: str = 'direct', trial_offset: int = 0):
        if n < 1:
            raise ParameterError(f'An experiment needs n >= 1, not {n}.', 'BAD_VERTEX_COUNT')
        if trials < 1:
            raise ParameterError(f'At least one trial is needed, not {trials}.', 'BAD_TRIALS')
        if exposure not in EXPOSURES:
            raise ParameterError(f'Unknown exposure "{exposure}"; use one of {", ".join(EXPOSURES)}.',
                                 'BAD_EXPOSURE')
        check_modulus(q)
        check_cells(q, family.k)
        SeedSpec(master_seed, trial_offset)
        self._family = family
        self._n = n
        self._pspec = pspec
        self._p = pspec.evaluate(n)
        if exposure == 'two-step' and self._p > 0.5:
            raise ParameterError(f'Two-step exposure needs p <= 1/2, not {self._p}.', 'BAD_PROBABILITY')
        self._q = q
        self._trials = trials
        self._master_seed = master_seed
        self._exposure = exposure
        self._trial_offset = trial_offset

    @property
    def family(self) -> GraphFamily:
        return self._family

    @property
    def n(self) -> int:
        return self._n

    @property
    def pspec(self) -> PSpec:
        return self._pspec

    @property
    def p(self) -> float:
        return self._p

    @property
    def q(self) -> int:
        return self._q

    @property
    def trials(self) -> int:
        return self._trials

    @property
    def master_seed(self) -> int:
        return self._master_seed

    @property
    def exposure(self) -> str:
        return self._exposure

    @property
    def trial_offset(self) -> int:
        return self._trial_offset

    def with_n(self, n: int, trial_offset: Optional[int] = None) -> 'ExperimentConfig':
        return ExperimentConfig(self._family, n, self._pspec, self._q, self._trials, self._master_seed,
                                self._exposure, self._trial_offset if trial_offset is None else trial_offset)

    def describe(self) -> Dict[str, Any]:
        return {
            'family': self._family.names,
            'n': self._n,
            'p_spec': self._pspec.describe(),
            'p': self._p,
            'q': self._q,
            'trials': self._trials,
            'seed': self._master_seed,
            'exposure': self._exposure
        }

    def __repr__(self) -> str:
        return f'ExperimentConfig[{self._family.names}, n={self._n}, p={self._pspec.text()}, q={self._q}, ' \
               f'T={self._trials}]'


class DecayRow(NamedTuple):
    n: int
    p: float
    log_phi: float
    tv: float
    bias_scale: float
    trials: int


class DecayTable(NamedTuple):
    rows: List[DecayRow]
    above_threshold: bool


class CorollaryReport(NamedTuple):
    I: Tuple[int, ...]
    J: Tuple[int, ...]
    alpha: Fraction
    p: float
    zero_fraction: float
    marginal_tv: float
    bias_scale: Optional[float]
    dist: EmpiricalDist

    @property
    def zero_fraction_holds(self) -> bool:
        return self.zero_fraction >= 0.9

    @property
    def marginal_tv_holds(self) -> bool:
        return self.marginal_tv <= 0.1

    def to_json(self) -> Dict[str, Any]:
        return {
            'I': list(self.I),
            'J': list(self.J),
            'alpha': format_rational(self.alpha),
            'p': self.p,
            'zero_fraction': self.zero_fraction,
            'marginal_tv': self.marginal_tv,
            'bias_scale': self.bias_scale,
            'zero_fraction_holds': self.zero_fraction_holds,
            'marginal_tv_holds': self.marginal_tv_holds
        }


class ChiSquareResult(NamedTuple):
    statistic: float
    p_value: float
    dof: int

    @property
    def equivalent(self) -> bool:
        return self.p_value >= CHI_SQUARE_LEVEL


def _trial_cells(task: Tuple[GraphFamily, int, float, int, int, str, int, int]) -> List[int]:
    family, n, p, q, master_seed, exposure, start, stop = task
    cells = []

    for trial in range(start, stop):
        seed = SeedSpec(master_seed, trial)
        graph = sample_gnp(n, p, seed) if exposure == 'direct' else sample_two_step(n, p, seed)[1]
        cells.append(xi_vector(graph, family, q).cell_index())

    return cells


def _tasks(cfg: ExperimentConfig, workers: int) -> List[tuple]:
    first = cfg.trial_offset
    last = first + cfg.trials
    size = max(1, math.ceil(cfg.trials / (workers * 4)))
    return [(cfg.family, cfg.n, cfg.p, cfg.q, cfg.master_seed, cfg.exposure, start, min(start + size, last))
            for start in range(first, last, size)]


def run_trials(cfg: ExperimentConfig, workers: Optional[int] = None) -> EmpiricalDist:
    """
    A function that samples ``ξ`` once per trial and tallies the results.  Trials are
    split into contiguous index ranges; with more than one worker the ranges run in a
    process pool.  Each trial's graph depends only on its index, so the histogram is
    the same for any number of workers.

    :param cfg: the experiment configuration.
    :param workers: the number of worker processes; defaults to the global thread count.
    :return: the histogram.
    """
    workers = global_options.threads() if workers is None else max(1, workers)
    tasks = _tasks(cfg, workers)
    verbose_out(f'Running {cfg.trials} trials of {cfg!r} on {workers} worker(s).', level=0)

    if workers > 1 and len(tasks) > 1:
        with Pool(processes=workers) as pool:
            chunks = pool.map(_trial_cells, tasks)
    else:
        chunks = [_trial_cells(task) for task in tasks]

    return EmpiricalDist.from_cells(cfg.q, cfg.family.k, [cell for chunk in chunks for cell in chunk])


def exact_xi_distribution(n: int, p: float, family: GraphFamily, q: int) -> ExactDist:
    """
    A function that computes the exact law of ``ξ`` in ``G(n, p)`` by visiting every
    graph on ``n`` labeled vertices.  Graphs are tallied by cell and edge count first, so
    each cell's probability is a short sum of exact integer counts times ``p^e(1-p)^(N-e)``.

    :param n: the number of vertices; ``C(n, 2)`` may be at most 24.
    :param p: the edge probability, in ``[0, 1]``.
    :param family: the family.
    :param q: the modulus.
    :return: the exact law.
    """
    if n < 1:
        raise ParameterError(f'The exact law needs n >= 1, not {n}.', 'BAD_VERTEX_COUNT')
    if not 0 <= p <= 1:
        raise ParameterError(f'The edge probability must lie in [0, 1], not {p}.', 'BAD_PROBABILITY')
    cells = check_cells(q, family.k)
    pairs = list(combinations(range(n), 2))
    if len(pairs) > MAX_EXACT_PAIRS:
        raise SizeCapExceeded(f'n = {n} gives {len(pairs)} vertex pairs; the exact law supports at most '
                              f'{MAX_EXACT_PAIRS}.', 'EXACT_N_TOO_LARGE')
    host = HostGraph.empty(n)
    tallies = np.zeros((cells, len(pairs) + 1), dtype=np.int64)

    for mask in range(1 << len(pairs)):
        graph = host.subgraph_from_mask(pairs, mask)
        tallies[xi_vector(graph, family, q).cell_index(), mask.bit_count()] += 1

    weights = [p ** e * (1 - p) ** (len(pairs) - e) for e in range(len(pairs) + 1)]
    probabilities = [math.fsum(int(count) * weight for count, weight in zip(row, weights) if count)
                     for row in tallies]

    return ExactDist(q, family.k, probabilities)


def decay_study(base_cfg: ExperimentConfig, n_grid: Sequence[int], workers: Optional[int] = None) -> DecayTable:
    """
    A function that runs the base experiment at every ``n`` of a grid and records the
    distance to uniform next to ``log Φ``.  Each ``n`` gets its own block of trial
    indices.  A warning is issued when the p-specification is not above the family
    threshold, since no decay is expected then.

    :param base_cfg: the experiment to repeat; its ``n`` is replaced by each grid value.
    :param n_grid: the vertex counts.
    :param workers: the number of worker processes.
    :return: the table, one row per ``n``.
    """
    if not n_grid:
        raise ParameterError('The n grid must not be empty.', 'BAD_N_GRID')
    above = is_above_threshold(base_cfg.pspec, base_cfg.family)
    if not above:
        warn(f'The p-specification {base_cfg.pspec.text()} is not ω(p_Γ(n)); no decay is expected.')
    rows = []

    for position, n in enumerate(n_grid):
        cfg = base_cfg.with_n(n, base_cfg.trial_offset + position * base_cfg.trials)
        result = tv_to_uniform(run_trials(cfg, workers))
        rows.append(DecayRow(n, cfg.p, phi(cfg.family, n, cfg.p).log_phi, result.tv, result.bias_scale,
                             cfg.trials))
        verbose_out(f'n={n}: TV={result.tv:.5f} (bias scale {result.bias_scale:.5f})', level=1)

    return DecayTable(rows, above)


def corollary_experiment(family: GraphFamily, alpha, n: int, q: int, trials: int, master_seed: int,
                         workers: Optional[int] = None) -> CorollaryReport:
    """
    A function that runs trials at ``p = n^(-alpha)`` and checks the two limits that
    follow from splitting the family at ``1/alpha``: members above the split should
    almost never appear, so their counts are zero, while members below the split should
    be close to uniform jointly.

    :param family: the family.
    :param alpha: the exponent, a positive exact rational not equal to any ``1/m(G_i)``.
    :param n: the number of vertices.
    :param q: the modulus.
    :param trials: the number of trials.
    :param master_seed: the master seed.
    :param workers: the number of worker processes.
    :return: the report.
    """
    split = classify_corollary(family, alpha)
    pspec = PSpec.power(-split.alpha)
    cfg = ExperimentConfig(family, n, pspec, q, trials, master_seed)
    dist = run_trials(cfg, workers)

    zero_fraction = 1.0
    if split.J:
        absent = marginal(dist, split.J)
        zero_fraction = absent.cell_counts[0] / absent.trials

    below = marginal(dist, split.I)
    result = tv_to_uniform(below)

    return CorollaryReport(split.I, split.J, split.alpha, cfg.p, float(zero_fraction), result.tv,
                           result.bias_scale if split.I else None, dist)


def _pool_columns(table: np.ndarray) -> np.ndarray:
    """
    A function that merges adjacent columns of a two-row contingency table until every
    expected count is at least 5.  A short final column joins its left neighbor.

    :param table: the table, two rows.
    :return: the pooled table.
    """
    table = table[:, table.sum(axis=0) > 0]
    rows = table.sum(axis=1)
    total = rows.sum()
    needed = MIN_EXPECTED * total / rows.min() if rows.min() else math.inf
    pooled, current = [], np.zeros(2, dtype=np.int64)

    for column in table.T:
        current = current + column
        if current.sum() >= needed:
            pooled.append(current)
            current = np.zeros(2, dtype=np.int64)

    if current.sum():
        if pooled:
            pooled[-1] = pooled[-1] + current
        else:
            pooled.append(current)

    return np.array(pooled, dtype=np.int64).T


def two_sample_chi_square(counts_a: Sequence[int], counts_b: Sequence[int]) -> ChiSquareResult:
    """
    A function that tests whether two histograms over the same ordered bins come from
    the same distribution, using a chi-square test of homogeneity after pooling sparse
    neighboring bins.

    :param counts_a: the first histogram.
    :param counts_b: the second histogram, with the same bins.
    :return: the statistic, p-value and degrees of freedom.
    """
    if len(counts_a) != len(counts_b):
        raise ParameterError('Both histograms must have the same bins.', 'BAD_HISTOGRAM')
    table = _pool_columns(np.array([counts_a, counts_b], dtype=np.int64))

    if table.shape[1] < 2:
        return ChiSquareResult(0.0, 1.0, 0)

    statistic, p_value, dof, _ = stats.chi2_contingency(table, correction=False)
    return ChiSquareResult(float(statistic), float(p_value), int(dof))


def edge_count_equivalence(n: int, p: float, trials: int, master_seed: int) -> ChiSquareResult:
    """
    A function that compares the edge counts of ``G(n, p)`` sampled directly with those
    of the thinned graph from the two-step exposure.  The two samples use disjoint
    blocks of trial indices.

    :param n: the number of vertices.
    :param p: the edge probability, at most 1/2.
    :param trials: the number of graphs in each sample.
    :param master_seed: the master seed.
    :return: the chi-square comparison.
    """
    if trials < 1:
        raise ParameterError(f'At least one trial is needed, not {trials}.', 'BAD_TRIALS')
    pairs = n * (n - 1) // 2
    direct = [sample_gnp(n, p, SeedSpec(master_seed, t)).edge_count for t in range(trials)]
    thinned = [sample_two_step(n, p, SeedSpec(master_seed, trials + t))[1].edge_count for t in range(trials)]

    return two_sample_chi_square(np.bincount(direct, minlength=pairs + 1), np.bincount(thinned, minlength=pairs + 1))


def run_metadata(cfg: ExperimentConfig) -> Dict[str, Any]:
    return {'config': cfg.describe(), 'sampler': sampler_metadata(cfg.master_seed)}
