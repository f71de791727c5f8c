"""
This library provides seeded sampling of ``G(n, p)`` and of the two-step exposure,
``G' ~ G(n, 2p)`` thinned by independent coin flips.

Every trial gets its own generator, derived from ``(master_seed, trial_index)``
alone, so results never depend on the order in which trials run.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple

import numpy as np

from modcount.errors import ParameterError
from modcount.graphcore import HostGraph
from modcount.invariants import format_rational, parse_rational

MAX_SEED = (1 << 64) - 1
GENERATOR_ID = 'numpy.Philox4x64-10/SeedSequence'
# Round multipliers and key increments of the Philox 4x64 bijection.
PHILOX_CONSTANTS = {
    'multipliers': ['0xD2E7470EE14C6C93', '0xCA5A826395121157'],
    'key_increments': ['0x9E3779B97F4A7C15', '0xBB67AE8584CAA73B'],
    'rounds': 10
}
_DOUBLE_SCALE = 1.0 / (1 << 53)


class SeedSpec(object):
    """
    Instances of this class name the random stream for one trial.
    """
    def __init__(self, master_seed: int, trial_index: int = 0):
        if not 0 <= master_seed <= MAX_SEED:
            raise ParameterError(f'The master seed must be a 64-bit unsigned integer, not {master_seed}.',
                                 'BAD_SEED')
        if trial_index < 0:
            raise ParameterError(f'The trial index cannot be negative ({trial_index}).', 'BAD_SEED')
        self._master_seed = master_seed
        self._trial_index = trial_index

    @property
    def master_seed(self) -> int:
        return self._master_seed

    @property
    def trial_index(self) -> int:
        return self._trial_index

    def for_trial(self, trial_index: int) -> 'SeedSpec':
        return SeedSpec(self._master_seed, trial_index)

    def bit_generator(self) -> np.random.Philox:
        """
        A function that creates the generator for this trial.  The seed pair is mixed
        through ``SeedSequence`` hashing into a 128-bit Philox key; the counter starts
        at zero.

        :return: a fresh Philox bit generator.
        """
        sequence = np.random.SeedSequence(entropy=self._master_seed, spawn_key=(self._trial_index,))
        return np.random.Philox(key=sequence.generate_state(2, dtype=np.uint64))

    def __repr__(self) -> str:
        return f'SeedSpec[{self._master_seed}, {self._trial_index}]'


class PSpec(object):
    """
    Instances of this class describe how the edge probability depends on ``n``: a
    constant, ``n^e`` or ``c·n^e`` with an exact rational exponent ``e``.
    """
    @classmethod
    def constant(cls, p: float) -> 'PSpec':
        return cls('constant', float(p), Fraction(0))

    @classmethod
    def power(cls, exponent: Fraction, scale: float = 1.0) -> 'PSpec':
        return cls('scaled' if scale != 1.0 else 'exponent', float(scale), parse_rational(exponent))

    @classmethod
    def from_options(cls, p: Optional[float] = None, p_exp: Optional[str] = None,
                     p_scale: Optional[float] = None) -> 'PSpec':
        """
        This class function builds a specification from the command line grammar:
        ``--p`` alone, ``--p-exp`` alone or ``--p-scale`` with ``--p-exp``.

        :param p: a constant probability.
        :param p_exp: the exponent text, like ``-2/3``.
        :param p_scale: the scale factor for the exponent form.
        :return: the resulting specification.
        """
        if p is not None:
            if p_exp is not None or p_scale is not None:
                raise ParameterError('--p cannot be combined with --p-exp or --p-scale.', 'BAD_P_SPEC')
            return cls.constant(p)
        if p_exp is None:
            raise ParameterError('Either --p or --p-exp must be given.', 'BAD_P_SPEC')
        return cls.power(parse_rational(p_exp), 1.0 if p_scale is None else p_scale)

    def __init__(self, kind: str, scale: float, exponent: Fraction):
        if scale <= 0:
            raise ParameterError(f'The probability scale must be positive, not {scale}.', 'BAD_P_SPEC')
        self._kind = kind
        self._scale = scale
        self._exponent = exponent

    @property
    def kind(self) -> str:
        return self._kind

    @property
    def scale(self) -> float:
        return self._scale

    @property
    def exponent(self) -> Fraction:
        return self._exponent

    def evaluate(self, n: int) -> float:
        """
        A function that evaluates the edge probability for a given number of vertices.

        :param n: the number of vertices.
        :return: the probability, in ``(0, 1]``.
        """
        p = self._scale if self._exponent == 0 else self._scale * n ** float(self._exponent)
        if not 0 < p <= 1:
            raise ParameterError(f'The p-specification {self.text()} gives p = {p} at n = {n}, outside (0, 1].',
                                 'BAD_PROBABILITY')
        return p

    def text(self) -> str:
        if self._kind == 'constant':
            return f'{self._scale}'
        exponent = format_rational(self._exponent)
        return f'n^({exponent})' if self._kind == 'exponent' else f'{self._scale}*n^({exponent})'

    def describe(self) -> Dict[str, Any]:
        return {'kind': self._kind, 'scale': self._scale, 'exponent': format_rational(self._exponent),
                'text': self.text()}

    def __repr__(self) -> str:
        return f'PSpec[{self.text()}]'


def sampler_metadata(master_seed: int) -> Dict[str, Any]:
    """
    A function that describes the sampler for result files, so that runs can be
    reproduced bit for bit.

    :param master_seed: the master seed of the run.
    :return: the sampler description.
    """
    return {
        'generator': GENERATOR_ID,
        'constants': PHILOX_CONSTANTS,
        'uniform': 'top 53 bits of each 64-bit output scaled by 2^-53; one draw per pair in lexicographic order',
        'master_seed': master_seed,
        'numpy': np.__version__
    }


@lru_cache(maxsize=16)
def _pair_indices(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def _uniforms(bit_generator: np.random.Philox, count: int) -> np.ndarray:
    raw = bit_generator.random_raw(count)
    return (raw >> np.uint64(11)).astype(np.float64) * _DOUBLE_SCALE


def _check_probability(p: float, upper: float = 1.0):
    if not 0 <= p <= upper:
        raise ParameterError(f'The edge probability must lie in [0, {upper}], not {p}.', 'BAD_PROBABILITY')


def _host_from_selection(n: int, sources: np.ndarray, targets: np.ndarray) -> HostGraph:
    rows = [0] * n
    for u, w in zip(sources.tolist(), targets.tolist()):
        rows[u] |= 1 << w
        rows[w] |= 1 << u
    return HostGraph(n, rows)


def sample_gnp(n: int, p: float, seed: SeedSpec) -> HostGraph:
    """
    A function that samples ``G(n, p)``.  Pairs are visited in lexicographic order with
    one uniform draw each; a pair becomes an edge when its draw is below ``p``.

    :param n: the number of vertices, at least 1.
    :param p: the edge probability.
    :param seed: the seed of this trial.
    :return: the sampled graph.
    """
    if n < 1:
        raise ParameterError(f'A sampled graph needs at least one vertex, not {n}.', 'BAD_VERTEX_COUNT')
    _check_probability(p)
    sources, targets = _pair_indices(n)
    chosen = _uniforms(seed.bit_generator(), len(sources)) < p
    return _host_from_selection(n, sources[chosen], targets[chosen])


def sample_two_step(n: int, p: float, seed: SeedSpec) -> Tuple[HostGraph, HostGraph]:
    """
    A function that samples the two-step exposure.  ``G'`` is drawn as ``G(n, 2p)``; then,
    from the same stream, each edge of ``G'`` in lexicographic order gets one more draw
    and is kept in ``G`` when that draw is below 1/2.  Marginally ``G`` is ``G(n, p)``.

    :param n: the number of vertices, at least 1.
    :param p: the target edge probability, at most 1/2.
    :param seed: the seed of this trial.
    :return: the pair ``(G', G)``.
    """
    if n < 1:
        raise ParameterError(f'A sampled graph needs at least one vertex, not {n}.', 'BAD_VERTEX_COUNT')
    _check_probability(p, 0.5)
    sources, targets = _pair_indices(n)
    bit_generator = seed.bit_generator()
    present = _uniforms(bit_generator, len(sources)) < 2 * p
    outer_sources, outer_targets = sources[present], targets[present]
    kept = _uniforms(bit_generator, len(outer_sources)) < 0.5
    return (_host_from_selection(n, outer_sources, outer_targets),
            _host_from_selection(n, outer_sources[kept], outer_targets[kept]))
