"""
This library evaluates character sums of polynomials over ``Z_q`` in 0/1 variables,
``E[ω^Q(z)]`` with ``ω = exp(2πi/q)`` and each ``z_j`` independently 1 with
probability ``p``.  Polynomials are built from the copies of a family in a host graph,
one variable per host edge.  It also checks the structural conditions of a disjoint
system of top-degree monomials and bounds a distribution's distance to uniform by its
largest nontrivial Fourier coefficient.
"""
import cmath
import json
import math
import sys
from itertools import product
from typing import Any, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from modcount.distributions import Distribution, ExactDist, check_cells, tv_to_uniform
from modcount.errors import ModCountError, ParameterError, SizeCapExceeded, TruncatedInput
from modcount.graphcore import GraphFamily, HostGraph
from modcount.packing import DEFAULT_CAP, enumerate_copies, greedy_disjoint_packing
from modcount.subcount import check_modulus, xi_vector

MAX_VARIABLES = 24
_CHUNK_BITS = 16
_FOURIER_ZERO = 1e-13
_TV_SLACK = 1e-12

Monomial = FrozenSet[int]


class CompensatedSum(object):
    """
    Instances of this class accumulate floating point values (or numpy arrays of them,
    elementwise) with Neumaier's compensated summation.
    """
    def __init__(self, start=0.0):
        self._total = start
        self._compensation = start * 0.0

    def add(self, value):
        total = self._total + value
        self._compensation += np.where(abs(self._total) >= abs(value),
                                       (self._total - total) + value,
                                       (value - total) + self._total)
        self._total = total

    @property
    def value(self):
        return self._total + self._compensation


class CharPolynomial(object):
    """
    Instances of this class represent ``Q(z) = Σ a_S ∏_{j∈S} z_j`` over ``Z_q``.  Every
    coefficient lies in ``[1, q)`` and monomials are distinct.
    """
    @classmethod
    def from_terms(cls, q: int, m: int, terms: Iterable[Tuple[int, Iterable[int]]]) -> 'CharPolynomial':
        """
        This class function builds a polynomial from terms that may repeat monomials or
        carry coefficients outside ``[1, q)``.  Coefficients of equal monomials are summed
        modulo ``q`` and terms that vanish are dropped.

        :param q: the modulus.
        :param m: the number of variables.
        :param terms: ``(coefficient, variables)`` pairs.
        :return: the polynomial.
        """
        check_modulus(q)
        merged: Dict[Monomial, int] = {}
        for coefficient, variables in terms:
            monomial = frozenset(variables)
            merged[monomial] = (merged.get(monomial, 0) + coefficient) % q
        return cls(q, m, [(coefficient, monomial) for monomial, coefficient in merged.items() if coefficient])

    def __init__(self, q: int, m: int, terms: Iterable[Tuple[int, Iterable[int]]]):
        check_modulus(q)
        if m < 0:
            raise ParameterError(f'The variable count cannot be negative ({m}).', 'BAD_PARAMETER')
        self._q = q
        self._m = m
        self._terms: List[Tuple[int, Monomial]] = []
        seen = set()

        for coefficient, variables in terms:
            monomial = frozenset(variables)
            if not 1 <= coefficient < q:
                raise ParameterError(f'Coefficient {coefficient} does not lie in [1, {q}).', 'BAD_COEFFICIENT')
            if any(not 0 <= variable < m for variable in monomial):
                raise ParameterError(f'Monomial {sorted(monomial)} uses a variable outside 0..{m - 1}.',
                                     'BAD_VARIABLE')
            if monomial in seen:
                raise ParameterError(f'Monomial {sorted(monomial)} appears more than once.', 'DUPLICATE_MONOMIAL')
            seen.add(monomial)
            self._terms.append((coefficient, monomial))

    @property
    def q(self) -> int:
        return self._q

    @property
    def variable_count(self) -> int:
        return self._m

    @property
    def terms(self) -> List[Tuple[int, Monomial]]:
        return list(self._terms)

    @property
    def degree(self) -> int:
        return max((len(monomial) for _, monomial in self._terms), default=0)

    def coefficient(self, monomial: Iterable[int]) -> int:
        monomial = frozenset(monomial)
        return next((coefficient for coefficient, candidate in self._terms if candidate == monomial), 0)

    def evaluate(self, assignment: int) -> int:
        """
        A function that evaluates this polynomial at a 0/1 assignment.

        :param assignment: a bit mask; bit ``j`` is the value of ``z_j``.
        :return: ``Q(z) mod q``.
        """
        total = 0
        for coefficient, monomial in self._terms:
            if all((assignment >> variable) & 1 for variable in monomial):
                total += coefficient
        return total % self._q

    def to_json(self) -> Dict[str, Any]:
        return {'q': self._q, 'm': self._m,
                'terms': [[coefficient, sorted(monomial)] for coefficient, monomial in self._terms]}

    @classmethod
    def from_json(cls, data) -> 'CharPolynomial':
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(int(data['q']), int(data['m']),
                       [(int(coefficient), [int(v) for v in variables]) for coefficient, variables in data['terms']])
        except (KeyError, TypeError, ValueError) as error:
            if isinstance(error, ModCountError):
                raise
            raise ParameterError(f'The polynomial document is malformed: {error}', 'BAD_POLYNOMIAL')

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharPolynomial):
            return NotImplemented
        return self._q == other._q and self._m == other._m and set(self._terms) == set(other._terms)

    def __repr__(self) -> str:
        return f'CharPolynomial[q={self._q}, m={self._m}, terms={len(self._terms)}]'


class DisjointSystem(NamedTuple):
    blocks: Tuple[Monomial, ...]
    d: int

    @property
    def r(self) -> int:
        return len(self.blocks)

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]]) -> 'DisjointSystem':
        blocks = tuple(frozenset(block) for block in blocks)
        return cls(blocks, max((len(block) for block in blocks), default=0))


class LemmaCheck(NamedTuple):
    satisfied: bool
    bullets: Tuple[bool, bool, bool, bool]
    diagnostics: List[str]


class CharSum(NamedTuple):
    value: complex
    modulus: float
    error_budget: float


class XorBound(NamedTuple):
    epsilon: float
    bound: float
    actual_tv: float


class ConditionalRow(NamedTuple):
    c: Tuple[int, ...]
    char_sum: float
    r: int
    conditions_hold: Optional[bool]


class ConditionalStudy(NamedTuple):
    rows: List[ConditionalRow]
    epsilon: float
    xor: XorBound


def build_polynomial(gprime: HostGraph, family: GraphFamily, c: Sequence[int], q: int,
                     cap: int = DEFAULT_CAP) -> CharPolynomial:
    """
    A function that builds ``Q_c(z) = Σ_i c_i Σ_{copies H of G_i in G'} ∏_{e∈H} z_e``.
    Variables are the edges of ``G'`` in lexicographic order.

    :param gprime: the host graph ``G'``, at most 24 edges.
    :param family: the family.
    :param c: one coefficient per family member, not all zero modulo ``q``.
    :param q: the modulus.
    :param cap: the most copies of any one member to enumerate.
    :return: the polynomial.
    """
    check_modulus(q)
    if len(c) != family.k:
        raise ParameterError(f'The coefficient vector has {len(c)} entries; the family has {family.k}.',
                             'BAD_COEFFICIENTS')
    c = [value % q for value in c]
    if not any(c):
        raise ParameterError('The coefficient vector must not be zero.', 'ZERO_COEFFICIENTS')
    edges = gprime.edges()
    if len(edges) > MAX_VARIABLES:
        raise SizeCapExceeded(f'The host has {len(edges)} edges; at most {MAX_VARIABLES} variables are supported.',
                              'TOO_MANY_VARIABLES')
    variable = {edge: index for index, edge in enumerate(edges)}
    terms = []

    for coefficient, pattern in zip(c, family):
        if not coefficient:
            continue
        copies = enumerate_copies(gprime, pattern, cap)
        if copies.truncated:
            raise TruncatedInput(f'More than {cap} copies of {pattern.name} were found.')
        terms.extend((coefficient, [variable[edge] for edge in copy.edges]) for copy in copies.copies)

    return CharPolynomial.from_terms(q, len(edges), terms)


def verify_lemma_conditions(polynomial: CharPolynomial, system: DisjointSystem) -> LemmaCheck:
    """
    A function that checks a disjoint system against a polynomial of degree ``d``:
    every block has ``d`` variables, has a nonzero coefficient, shares no variable with
    another block, and every other monomial meets the union of the blocks in fewer than
    ``d`` variables.

    :param polynomial: the polynomial.
    :param system: the candidate system; every block must be a monomial of the polynomial.
    :return: the overall verdict, one flag per condition and a note for each failure.
    """
    monomials = {monomial for _, monomial in polynomial.terms}
    for block in system.blocks:
        if block not in monomials:
            raise ParameterError(f'Block {sorted(block)} is not a monomial of the polynomial.', 'BLOCK_NOT_MONOMIAL')

    d = polynomial.degree
    diagnostics = []

    sizes = [index for index, block in enumerate(system.blocks) if len(block) != d]
    if sizes:
        diagnostics.append(f'blocks {sizes} do not have {d} variables.')

    zero = [index for index, block in enumerate(system.blocks) if polynomial.coefficient(block) % polynomial.q == 0]
    if zero:
        diagnostics.append(f'blocks {zero} have a zero coefficient.')

    union = frozenset()
    overlaps = []
    for index, block in enumerate(system.blocks):
        if union & block:
            overlaps.append(index)
        union |= block
    if overlaps:
        diagnostics.append(f'blocks {overlaps} share a variable with an earlier block.')

    blocks = set(system.blocks)
    heavy = [sorted(monomial) for _, monomial in polynomial.terms
             if monomial not in blocks and len(monomial & union) >= d]
    if heavy:
        diagnostics.append(f'monomials {heavy} meet the blocks in {d} or more variables.')

    bullets = (not sizes, not zero, not overlaps, not heavy)
    return LemmaCheck(all(bullets), bullets, diagnostics)


def _components(polynomial: CharPolynomial) -> List[Tuple[List[int], List[Tuple[int, Monomial]]]]:
    """
    A function that splits a polynomial's monomials into groups that share no variable
    across groups.  The character sum of the whole is the product over the groups.

    :param polynomial: the polynomial.
    :return: ``(variables, terms)`` for each group.
    """
    parent = list(range(polynomial.variable_count))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for _, monomial in polynomial.terms:
        variables = sorted(monomial)
        for other in variables[1:]:
            parent[find(other)] = find(variables[0])

    groups: Dict[int, Tuple[set, list]] = {}
    for term in polynomial.terms:
        if not term[1]:
            groups.setdefault(-1, (set(), []))[1].append(term)
            continue
        root = find(next(iter(term[1])))
        variables, terms = groups.setdefault(root, (set(), []))
        variables.update(term[1])
        terms.append(term)

    return [(sorted(variables), terms) for variables, terms in groups.values()]


def _component_sum(q: int, variables: List[int], terms: List[Tuple[int, Monomial]], p: float) -> complex:
    """
    A function that evaluates ``E[ω^Q(z)]`` for one group of monomials by visiting all
    ``2^s`` assignments of its ``s`` variables in fixed-size chunks.  The probability
    mass of each residue is accumulated first, with compensation across chunks; the
    residues are then combined with the powers of ``ω``.

    :param q: the modulus.
    :param variables: the group's variables.
    :param terms: the group's terms.
    :param p: the probability each variable is 1.
    :return: the group's character sum.
    """
    size = len(variables)
    if size > MAX_VARIABLES:
        raise SizeCapExceeded(f'A group of {size} interacting variables exceeds the limit of {MAX_VARIABLES}.',
                              'TOO_MANY_VARIABLES')
    local = {variable: index for index, variable in enumerate(variables)}
    masks = [(coefficient, sum(1 << local[v] for v in monomial)) for coefficient, monomial in terms]
    weights = np.array([p ** ones * (1 - p) ** (size - ones) for ones in range(size + 1)])
    chunk = 1 << min(size, _CHUNK_BITS)
    mass = CompensatedSum(np.zeros(q))

    for start in range(0, 1 << size, chunk):
        z = np.arange(start, start + chunk, dtype=np.int64)
        residues = np.zeros(chunk, dtype=np.int64)
        for coefficient, mask in masks:
            residues += coefficient * ((z & mask) == mask)
        residues %= q
        mass.add(np.bincount(residues, weights=weights[np.bitwise_count(z)], minlength=q))

    mass = mass.value
    roots = [cmath.exp(2j * math.pi * r / q) for r in range(q)]
    real = CompensatedSum()
    imaginary = CompensatedSum()
    for r in range(q):
        term = mass[r] * roots[r]
        real.add(term.real)
        imaginary.add(term.imag)

    return complex(float(real.value), float(imaginary.value))


def exact_char_sum(polynomial: CharPolynomial, p: float) -> CharSum:
    """
    A function that computes ``E[ω^Q(z)]`` exactly (up to double precision) where each
    variable is independently 1 with probability ``p``.  Groups of monomials that share
    no variable are evaluated separately and multiplied; each group may have at most
    24 variables.  Variables in no monomial contribute a factor of 1.

    :param polynomial: the polynomial.
    :param p: the probability, in ``[0, 1]``.
    :return: the sum, its modulus and a bound on accumulated rounding error.
    """
    if not 0 <= p <= 1:
        raise ParameterError(f'The variable probability must lie in [0, 1], not {p}.', 'BAD_PROBABILITY')
    value = complex(1.0)
    budget = 0.0

    for variables, terms in _components(polynomial):
        value *= _component_sum(polynomial.q, variables, terms, p)
        budget += (1 << len(variables)) * sys.float_info.epsilon

    return CharSum(value, abs(value), budget)


def xor_tv_bound(dist: Distribution) -> XorBound:
    """
    A function that computes ``ε``, the largest modulus of ``E[ω^{c·ξ}]`` over nonzero
    ``c ∈ Z_q^k``, with one multidimensional FFT over the cells.  A distribution within
    ``ε`` of every nontrivial character is within ``q^k·ε`` of uniform in total
    variation; the measured distance is checked against that bound.

    :param dist: an exact or empirical distribution over ``Z_q^k``.
    :return: ``ε``, the bound and the actual distance.
    """
    cells = check_cells(dist.q, dist.k)
    if dist.k == 0:
        return XorBound(0.0, 0.0, 0.0)
    table = np.asarray(dist.probabilities, dtype=np.float64).reshape((dist.q,) * dist.k)
    coefficients = np.abs(np.fft.fftn(table)).reshape(-1)
    coefficients[coefficients <= _FOURIER_ZERO] = 0.0
    epsilon = float(coefficients[1:].max())
    bound = cells * epsilon
    actual = tv_to_uniform(dist).tv

    if actual > bound + _TV_SLACK:
        raise ModCountError(f'The distance to uniform, {actual}, exceeds q^k·ε = {bound}.', 'XOR_BOUND_VIOLATED')

    return XorBound(epsilon, bound, actual)


def find_disjoint_system(gprime: HostGraph, family: GraphFamily, c: Sequence[int], q: int,
                         cap: int = DEFAULT_CAP) -> DisjointSystem:
    """
    A function that picks a disjoint system for ``Q_c``: among members with ``c_i ≠ 0``
    it takes the first with the most edges, packs its copies greedily and uses the
    edge sets of the packed copies as blocks.

    :param gprime: the host graph ``G'``.
    :param family: the family.
    :param c: the coefficient vector.
    :param q: the modulus.
    :param cap: the most copies to enumerate.
    :return: the disjoint system.
    """
    candidates = [index for index, value in enumerate(c) if value % q]
    if not candidates:
        raise ParameterError('The coefficient vector must not be zero.', 'ZERO_COEFFICIENTS')
    chosen = max(candidates, key=lambda index: (family[index].edge_count, -index))
    pattern = family[chosen]
    variable = {edge: index for index, edge in enumerate(gprime.edges())}
    copies = enumerate_copies(gprime, pattern, cap)
    blocks = [frozenset(variable[edge] for edge in copy.edges) for copy in greedy_disjoint_packing(copies)]

    return DisjointSystem(tuple(blocks), pattern.edge_count)


def conditional_xi_distribution(gprime: HostGraph, family: GraphFamily, q: int) -> ExactDist:
    """
    A function that computes the exact law of ``ξ(G)`` when ``G`` keeps each edge of
    ``G'`` independently with probability 1/2, by visiting all ``2^e(G')`` subgraphs.

    :param gprime: the host graph ``G'``, at most 24 edges.
    :param family: the family.
    :param q: the modulus.
    :return: the conditional law.
    """
    cells = check_cells(q, family.k)
    edges = gprime.edges()
    if len(edges) > MAX_VARIABLES:
        raise SizeCapExceeded(f'The host has {len(edges)} edges; at most {MAX_VARIABLES} are supported.',
                              'TOO_MANY_VARIABLES')
    counts = np.zeros(cells, dtype=np.int64)

    for mask in range(1 << len(edges)):
        counts[xi_vector(gprime.subgraph_from_mask(edges, mask), family, q).cell_index()] += 1

    return ExactDist(q, family.k, counts / float(1 << len(edges)))


def conditional_study(gprime: HostGraph, family: GraphFamily, q: int) -> ConditionalStudy:
    """
    A function that examines every nonzero coefficient vector ``c`` for a fixed ``G'``:
    the modulus of ``E[ω^Q_c]`` at ``p = 1/2``, the size of the chosen disjoint system
    and whether it meets the structural conditions.  It then compares the largest of
    these moduli, and the bound it implies, with the conditional law's actual distance
    to uniform.

    :param gprime: the host graph ``G'``, at most 24 edges.
    :param family: the family.
    :param q: the modulus.
    :return: the per-``c`` rows and the overall comparison.
    """
    check_cells(q, family.k)
    rows = []

    for c in product(range(q), repeat=family.k):
        if not any(c):
            continue
        polynomial = build_polynomial(gprime, family, c, q)
        system = find_disjoint_system(gprime, family, c, q)
        check = verify_lemma_conditions(polynomial, system).satisfied if system.blocks else None
        rows.append(ConditionalRow(c, exact_char_sum(polynomial, 0.5).modulus, system.r, check))

    xor = xor_tv_bound(conditional_xi_distribution(gprime, family, q))
    return ConditionalStudy(rows, max(row.char_sum for row in rows), xor)


def disjoint_block_polynomial(r: int, d: int, q: int = 2) -> CharPolynomial:
    """
    A function that builds ``z_1⋯z_d + z_{d+1}⋯z_{2d} + …`` with ``r`` blocks.

    :param r: the number of blocks.
    :param d: the variables per block.
    :param q: the modulus.
    :return: the polynomial over ``r·d`` variables.
    """
    if r < 0 or d < 1:
        raise ParameterError(f'Need r >= 0 blocks of d >= 1 variables, not r={r}, d={d}.', 'BAD_PARAMETER')
    return CharPolynomial(q, r * d, [(1, range(block * d, (block + 1) * d)) for block in range(r)])


def disjoint_block_system(r: int, d: int) -> DisjointSystem:
    return DisjointSystem(tuple(frozenset(range(block * d, (block + 1) * d)) for block in range(r)), d)
