"""
This library provides the exact density invariants of patterns and families: the
density, the maximum subgraph density, the containment threshold, the exponent
functional and the split of a family by a threshold exponent.
"""
import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Dict, List, NamedTuple, Optional, Tuple, Union

from modcount.errors import BoundaryAlpha, ParameterError
from modcount.graphcore import GraphFamily, PatternGraph, iterate_bits, check_pattern_size

RationalDensity = Fraction
_EXPONENTIATE_LIMIT = 500.0


class DensityProfile(NamedTuple):
    rho: Fraction
    m: Fraction
    witness: Tuple[int, ...]


class Threshold(NamedTuple):
    exponent: Fraction
    value: float


class PhiResult(NamedTuple):
    log_phi: float
    member: int
    witness: Tuple[int, ...]

    @property
    def phi(self) -> Optional[float]:
        """
        A read-only property that returns ``Φ`` itself, when that can be represented
        comfortably as a float.

        :return: ``exp(log Φ)`` or ``None`` when ``|log Φ|`` is 500 or more.
        """
        return math.exp(self.log_phi) if abs(self.log_phi) < _EXPONENTIATE_LIMIT else None


class CorollarySplit(NamedTuple):
    I: Tuple[int, ...]
    J: Tuple[int, ...]
    alpha: Fraction


def format_rational(value: Fraction) -> str:
    """
    A function that renders a rational in our output form, ``num/den``, even when the
    denominator is 1.

    :param value: the rational to render.
    :return: the rendered text.
    """
    return f'{value.numerator}/{value.denominator}'


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    A function that reads an exact rational.  Fractions (``-2/3``), integers and decimals
    (``0.8`` becomes ``4/5``) are all accepted.

    :param text: the text to read.
    :return: the exact value.
    """
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f'"{text}" is not an exact rational number.', 'BAD_RATIONAL')


@lru_cache(maxsize=None)
def _densest_by_size(pattern: PatternGraph) -> Tuple[Tuple[int, int, Tuple[int, ...]], ...]:
    """
    A function that finds, for every subset size ``s``, the largest number of edges
    induced by ``s`` vertices of the pattern, along with the first vertex subset (in
    mask order) achieving it.  Both ``m(H)`` and ``Φ`` only ever need these entries:
    for a fixed vertex set, keeping every induced edge maximizes density and, since
    ``p <= 1``, minimizes ``n^v p^e``.

    :param pattern: the pattern to examine.
    :return: a tuple of ``(size, edges, witness)`` entries, one per size.
    """
    check_pattern_size(pattern)
    rows = pattern.adjacency
    best: Dict[int, Tuple[int, int]] = {}

    for mask in range(1, 1 << pattern.vertex_count):
        size = mask.bit_count()
        edges = sum((rows[v] & mask).bit_count() for v in iterate_bits(mask)) // 2
        if size not in best or edges > best[size][0]:
            best[size] = (edges, mask)

    return tuple((size, edges, tuple(iterate_bits(mask))) for size, (edges, mask) in sorted(best.items()))


def density(pattern: PatternGraph) -> Fraction:
    """
    A function that returns the density of a pattern, ``e_H / v_H``.

    :param pattern: the pattern.
    :return: the exact, reduced density.
    """
    return Fraction(pattern.edge_count, pattern.vertex_count)


def max_density(pattern: PatternGraph) -> DensityProfile:
    """
    A function that returns the maximum density over all nonempty subgraphs of a
    pattern, with a vertex subset that achieves it.

    :param pattern: the pattern, at most 10 vertices.
    :return: the pattern's density profile.
    """
    m, witness = None, ()

    for size, edges, vertices in _densest_by_size(pattern):
        candidate = Fraction(edges, size)
        if m is None or candidate > m:
            m, witness = candidate, vertices

    return DensityProfile(density(pattern), m, witness)


def family_density(family: GraphFamily) -> Fraction:
    return max(pattern.density_profile.m for pattern in family)


def family_threshold(family: GraphFamily, n: int) -> Threshold:
    """
    A function that returns the family threshold ``p_Γ(n) = n^(-1/m(Γ))``.

    :param family: the family.
    :param n: the number of vertices, at least 2.
    :return: the exact exponent and the threshold's value.
    """
    if n < 2:
        raise ParameterError(f'The threshold needs n >= 2, not {n}.', 'BAD_VERTEX_COUNT')
    exponent = -1 / family_density(family)
    return Threshold(exponent, n ** float(exponent))


def phi(family: GraphFamily, n: int, p: float) -> PhiResult:
    """
    A function that computes the exponent functional ``Φ_Γ(n, p)``: the minimum, over
    members and their nonempty subgraphs, of ``n^v p^e``.  It is returned in the log
    domain since the raw value over- or underflows at modest ``n``.

    :param family: the family.
    :param n: the number of vertices, at least 1.
    :param p: the edge probability, in ``(0, 1]``.
    :return: ``log Φ``, with the member index and vertex subset achieving it.
    """
    if n < 1:
        raise ParameterError(f'Phi needs n >= 1, not {n}.', 'BAD_VERTEX_COUNT')
    if not 0 < p <= 1:
        raise ParameterError(f'Phi needs 0 < p <= 1, not {p}.', 'BAD_PROBABILITY')
    log_n, log_p = math.log(n), math.log(p)
    best = None

    for index, pattern in enumerate(family):
        for size, edges, vertices in _densest_by_size(pattern):
            value = size * log_n + edges * log_p
            if best is None or value < best.log_phi:
                best = PhiResult(value, index, vertices)

    return best


def classify_corollary(family: GraphFamily, alpha: Fraction) -> CorollarySplit:
    """
    A function that splits a family's indices by comparing each member's maximum
    density against ``1/alpha`` exactly.  Equality means an exact rational stands where
    an irrational exponent is needed, so it is rejected.

    :param family: the family.
    :param alpha: the exponent, a positive exact rational.
    :return: the indices below (``I``) and above (``J``) ``1/alpha``.
    """
    alpha = parse_rational(alpha)
    if alpha <= 0:
        raise ParameterError(f'alpha must be positive, not {format_rational(alpha)}.', 'BAD_ALPHA')
    limit = 1 / alpha
    below, above = [], []

    for index, pattern in enumerate(family):
        m = pattern.density_profile.m
        if m == limit:
            raise BoundaryAlpha(index)
        (below if m < limit else above).append(index)

    return CorollarySplit(tuple(below), tuple(above), alpha)


def expected_copies(n: int, p: float, pattern: PatternGraph) -> float:
    """
    A function that returns the expected number of copies of a pattern in ``G(n, p)``,
    ``(n)_v p^e / |Aut(H)|``.

    :param n: the number of vertices.
    :param p: the edge probability.
    :param pattern: the pattern.
    :return: the expected copy count.
    """
    if pattern.vertex_count > n:
        return 0.0
    return math.perm(n, pattern.vertex_count) * p ** pattern.edge_count / pattern.automorphism_count


def is_above_threshold(pspec, family: GraphFamily) -> bool:
    """
    A function that checks the exponent inequality behind ``p = ω(p_Γ(n))`` for a
    p-specification.  A constant ``p`` always qualifies; ``c·n^e`` qualifies when ``e``
    exceeds the threshold exponent strictly.

    :param pspec: the p-specification.
    :param family: the family.
    :return: ``True`` if the specification lies above the threshold.
    """
    return pspec.exponent > -1 / family_density(family)


def family_profile(family: GraphFamily, n: int, p: Optional[float] = None) -> Dict[str, Any]:
    """
    A function that collects every invariant of a family into one result document.

    :param family: the family.
    :param n: the number of vertices.
    :param p: the edge probability; when given, ``log Φ`` is included.
    :return: the result document.
    """
    members: List[Dict[str, Any]] = []

    for pattern in family:
        profile = pattern.density_profile
        members.append({
            'name': pattern.name,
            'vertices': pattern.vertex_count,
            'edges': pattern.edge_count,
            'automorphisms': pattern.automorphism_count,
            'rho': format_rational(profile.rho),
            'm': format_rational(profile.m),
            'witness': list(profile.witness)
        })

    threshold = family_threshold(family, n)
    result = {
        'n': n,
        'members': members,
        'm_family': format_rational(family_density(family)),
        'threshold_exponent': format_rational(threshold.exponent),
        'threshold': threshold.value
    }

    if p is not None:
        minimum = phi(family, n, p)
        result.update({
            'p': p,
            'log_phi': minimum.log_phi,
            'phi': minimum.phi,
            'phi_minimizer': {'member': family[minimum.member].name, 'vertices': list(minimum.witness)}
        })

    return result
