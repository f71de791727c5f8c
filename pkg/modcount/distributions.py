"""
This library holds the distributions of ``ξ`` over ``Z_q^k``, empirical and exact, along
with the distance to uniform and marginalization.  Cells are numbered with the first
coordinate most significant, so a probability vector reshaped to ``(q,) * k`` in C
order is indexed by the coordinates themselves.
"""
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np

from modcount.errors import ParameterError, SizeCapExceeded
from modcount.subcount import check_modulus

MAX_CELLS = 1 << 20
_NORMALIZATION_TOLERANCE = 1e-12


def check_cells(q: int, k: int) -> int:
    """
    A function that checks that ``Z_q^k`` is small enough to tabulate.

    :param q: the modulus.
    :param k: the number of coordinates.
    :return: the number of cells, ``q^k``.
    """
    check_modulus(q)
    if k < 0:
        raise ParameterError(f'The number of coordinates cannot be negative ({k}).', 'BAD_PARAMETER')
    cells = q ** k
    if cells > MAX_CELLS:
        raise SizeCapExceeded(f'q^k = {q}^{k} cells exceeds the limit of {MAX_CELLS}.', 'TOO_MANY_CELLS')
    return cells


def cell_vector(index: int, q: int, k: int) -> Tuple[int, ...]:
    """
    A function that turns a cell index back into its coordinates.

    :param index: the cell index.
    :param q: the modulus.
    :param k: the number of coordinates.
    :return: the coordinates, first coordinate first.
    """
    digits = []
    for _ in range(k):
        index, digit = divmod(index, q)
        digits.append(digit)
    return tuple(reversed(digits))


class EmpiricalDist(object):
    """
    Instances of this class hold a histogram of ``ξ`` over ``Z_q^k`` from ``T`` trials.
    """
    def __init__(self, q: int, k: int, counts: Union[Sequence[int], np.ndarray]):
        cells = check_cells(q, k)
        counts = np.asarray(counts, dtype=np.int64)
        if counts.shape != (cells,):
            raise ParameterError(f'A histogram over {q}^{k} cells needs {cells} counts, not {counts.size}.',
                                 'BAD_HISTOGRAM')
        if (counts < 0).any():
            raise ParameterError('Histogram counts cannot be negative.', 'BAD_HISTOGRAM')
        self._q = q
        self._k = k
        self._counts = counts

    @classmethod
    def from_cells(cls, q: int, k: int, cells: Sequence[int]) -> 'EmpiricalDist':
        return cls(q, k, np.bincount(np.asarray(cells, dtype=np.int64), minlength=q ** k))

    @property
    def q(self) -> int:
        return self._q

    @property
    def k(self) -> int:
        return self._k

    @property
    def cell_counts(self) -> np.ndarray:
        return self._counts

    @property
    def trials(self) -> int:
        return int(self._counts.sum())

    @property
    def probabilities(self) -> np.ndarray:
        total = self.trials
        return self._counts / total if total else np.zeros(self._counts.shape)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmpiricalDist):
            return NotImplemented
        return self._q == other._q and self._k == other._k and np.array_equal(self._counts, other._counts)

    def __repr__(self) -> str:
        return f'EmpiricalDist[q={self._q}, k={self._k}, T={self.trials}]'


class ExactDist(object):
    """
    Instances of this class hold an exact law of ``ξ`` over ``Z_q^k``.
    """
    def __init__(self, q: int, k: int, probabilities: Union[Sequence[float], np.ndarray]):
        cells = check_cells(q, k)
        probabilities = np.asarray(probabilities, dtype=np.float64)
        if probabilities.shape != (cells,):
            raise ParameterError(f'A law over {q}^{k} cells needs {cells} probabilities, not {probabilities.size}.',
                                 'BAD_DISTRIBUTION')
        if (probabilities < 0).any():
            raise ParameterError('Probabilities cannot be negative.', 'BAD_DISTRIBUTION')
        total = math.fsum(probabilities.tolist())
        if abs(total - 1.0) > _NORMALIZATION_TOLERANCE:
            raise ParameterError(f'Probabilities must sum to 1, not {total!r}.', 'BAD_DISTRIBUTION')
        self._q = q
        self._k = k
        self._probabilities = probabilities

    @property
    def q(self) -> int:
        return self._q

    @property
    def k(self) -> int:
        return self._k

    @property
    def cell_probabilities(self) -> np.ndarray:
        return self._probabilities

    @property
    def probabilities(self) -> np.ndarray:
        return self._probabilities

    def __repr__(self) -> str:
        return f'ExactDist[q={self._q}, k={self._k}]'


Distribution = Union[EmpiricalDist, ExactDist]


class TvResult(NamedTuple):
    tv: float
    bias_scale: Optional[float]


def tv_to_uniform(dist: Distribution) -> TvResult:
    """
    A function that measures the total variation distance of a distribution from the
    uniform one on ``Z_q^k``.  For an empirical distribution the plug-in estimate is
    biased upward, so the scale of that bias, ``sqrt((q^k - 1)/(4T))``, comes along.

    :param dist: the distribution.
    :return: the distance and, for empirical input, the bias scale.
    """
    cells = dist.q ** dist.k
    tv = 0.5 * math.fsum(np.abs(dist.probabilities - 1.0 / cells).tolist())
    bias_scale = None

    if isinstance(dist, EmpiricalDist) and dist.trials:
        bias_scale = math.sqrt((cells - 1) / (4 * dist.trials))

    return TvResult(tv, bias_scale)


def marginal(dist: Distribution, indices: Sequence[int]) -> Distribution:
    """
    A function that returns the joint distribution of the chosen coordinates, in the
    order given.

    :param dist: the distribution.
    :param indices: the coordinates to keep.
    :return: a distribution of the same kind over ``Z_q^len(indices)``.
    """
    indices = list(indices)
    if any(not 0 <= index < dist.k for index in indices) or len(set(indices)) != len(indices):
        raise ParameterError(f'Marginal coordinates {indices} are not distinct values in [0, {dist.k}).',
                             'BAD_MARGINAL')
    values = dist.cell_counts if isinstance(dist, EmpiricalDist) else dist.cell_probabilities
    table = values.reshape((dist.q,) * dist.k)
    dropped = tuple(axis for axis in range(dist.k) if axis not in indices)
    reduced = table.sum(axis=dropped) if dropped else table
    kept = sorted(indices)
    reduced = np.transpose(reduced, [kept.index(index) for index in indices]) if indices else reduced
    flat = np.asarray(reduced).reshape(-1)

    if isinstance(dist, EmpiricalDist):
        return EmpiricalDist(dist.q, len(indices), flat)
    return ExactDist(dist.q, len(indices), flat)


def histogram_rows(dist: Distribution) -> List[dict]:
    """
    A function that lays a distribution out as one row per cell, for result files.

    :param dist: the distribution.
    :return: the rows, in cell order.
    """
    rows = []
    probabilities = dist.probabilities

    for index in range(dist.q ** dist.k):
        row = {'cell': list(cell_vector(index, dist.q, dist.k))}
        if isinstance(dist, EmpiricalDist):
            row['count'] = int(dist.cell_counts[index])
        row['probability'] = float(probabilities[index])
        rows.append(row)

    return rows
