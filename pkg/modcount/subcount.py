"""
This library counts copies of a pattern in a host graph, exactly or modulo ``q``, and
assembles the vector of family counts modulo ``q``.

Counting enumerates embeddings (injective, edge-preserving maps) by backtracking over
the pattern's vertices; candidate images are the intersection of the adjacency rows
of already-placed neighbors.  Copies are embeddings divided by ``|Aut(H)|``.
"""
from itertools import combinations
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from modcount.errors import ModCountError, ParameterError
from modcount.graphcore import GraphFamily, HostGraph, PatternGraph, check_pattern_size, is_isomorphic, \
    iterate_bits, search_order

MAX_MODULUS = 1 << 16


class CopyCount(NamedTuple):
    embeddings: int
    copies: int


class ModVector(object):
    """
    Instances of this class hold one residue modulo ``q`` per family member.
    """
    def __init__(self, q: int, values: Sequence[int]):
        if any(not 0 <= value < q for value in values):
            raise ParameterError(f'Every residue must lie in [0, {q}).', 'BAD_RESIDUE')
        self._q = q
        self._values = tuple(values)

    @property
    def q(self) -> int:
        return self._q

    @property
    def values(self) -> Tuple[int, ...]:
        return self._values

    @property
    def k(self) -> int:
        return len(self._values)

    def cell_index(self) -> int:
        """
        A function that returns this vector's position among the ``q^k`` cells, with the
        first coordinate most significant.

        :return: the cell index.
        """
        index = 0
        for value in self._values:
            index = index * self._q + value
        return index

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModVector):
            return NotImplemented
        return self._q == other._q and self._values == other._values

    def __hash__(self) -> int:
        return hash((self._q, self._values))

    def __repr__(self) -> str:
        return f'ModVector[q={self._q}, {self._values}]'


def check_modulus(q: int):
    if not 2 <= q <= MAX_MODULUS:
        raise ParameterError(f'The modulus must lie in [2, {MAX_MODULUS}], not {q}.', 'BAD_MODULUS')


def _backward_neighbors(pattern: PatternGraph, order: List[int]) -> List[List[int]]:
    return [[j for j in range(i) if pattern.has_edge(order[i], order[j])] for i in range(len(order))]


def _count_embeddings(host: HostGraph, pattern: PatternGraph, modulus: Optional[int] = None) -> int:
    """
    A function that counts embeddings of a pattern into a host, optionally reducing the
    running total modulo ``modulus`` at every level.

    :param host: the host graph.
    :param pattern: the pattern, at most 10 vertices.
    :param modulus: the modulus to reduce by, or ``None`` for the exact count.
    :return: the embedding count, reduced when a modulus is given.
    """
    check_pattern_size(pattern)
    if pattern.vertex_count > host.n:
        return 0

    order = search_order(pattern)
    backward = _backward_neighbors(pattern, order)
    rows = host.adjacency
    everything = (1 << host.n) - 1
    images = [0] * pattern.vertex_count
    last = pattern.vertex_count - 1

    def extend(position: int, used: int) -> int:
        neighbors = backward[position]
        candidates = everything
        for placed in neighbors:
            candidates &= rows[images[placed]]
        candidates &= ~used
        if position == last:
            return candidates.bit_count()
        total = 0
        for image in iterate_bits(candidates):
            images[position] = image
            total += extend(position + 1, used | (1 << image))
        return total % modulus if modulus else total

    total = extend(0, 0)
    return total % modulus if modulus else total


def iterate_embeddings(host: HostGraph, pattern: PatternGraph) -> Iterator[Tuple[int, ...]]:
    """
    A function that yields every embedding of a pattern into a host as a tuple whose
    entry ``v`` is the image of pattern vertex ``v``.  Embeddings come out in the
    backtracking order used by the counting functions.

    :param host: the host graph.
    :param pattern: the pattern, at most 10 vertices.
    :return: a generator over embeddings.
    """
    check_pattern_size(pattern)
    if pattern.vertex_count > host.n:
        return

    order = search_order(pattern)
    backward = _backward_neighbors(pattern, order)
    rows = host.adjacency
    everything = (1 << host.n) - 1
    images = [0] * pattern.vertex_count

    def extend(position: int, used: int) -> Iterator[Tuple[int, ...]]:
        if position == len(order):
            yield tuple(images)
            return
        candidates = everything & ~used
        for placed in backward[position]:
            candidates &= rows[images[order[placed]]]
        for image in iterate_bits(candidates):
            images[order[position]] = image
            yield from extend(position + 1, used | (1 << image))

    yield from extend(0, 0)


def count_embeddings(host: HostGraph, pattern: PatternGraph) -> int:
    """
    A function that counts the injective maps from the pattern's vertices into the
    host's that carry every pattern edge onto a host edge.

    :param host: the host graph.
    :param pattern: the pattern, at most 10 vertices.
    :return: the exact embedding count.
    """
    return _count_embeddings(host, pattern)


def count_copies(host: HostGraph, pattern: PatternGraph) -> CopyCount:
    """
    A function that counts the unlabeled copies of a pattern in a host, ``N(G, H)``.

    :param host: the host graph.
    :param pattern: the pattern, at most 10 vertices.
    :return: the embedding count and the copy count.
    """
    embeddings = _count_embeddings(host, pattern)
    copies, remainder = divmod(embeddings, pattern.automorphism_count)
    if remainder:
        raise ModCountError(f'{embeddings} embeddings of {pattern.name} is not a multiple of '
                            f'{pattern.automorphism_count}.', 'COUNT_INVARIANT')
    return CopyCount(embeddings, copies)


def count_copies_mod(host: HostGraph, pattern: PatternGraph, q: int) -> int:
    """
    A function that returns ``N(G, H) mod q`` without forming ``N(G, H)``.  Embeddings are
    accumulated modulo ``q·|Aut(H)|``; since the true embedding count is ``|Aut(H)|`` times
    the copy count, the residue divided by ``|Aut(H)|`` is the copy count modulo ``q``.

    :param host: the host graph.
    :param pattern: the pattern, at most 10 vertices.
    :param q: the modulus, in ``[2, 2^16]``.
    :return: the copy count modulo ``q``.
    """
    check_modulus(q)
    automorphisms = pattern.automorphism_count
    residue = _count_embeddings(host, pattern, q * automorphisms)
    return (residue // automorphisms) % q


def xi_vector(host: HostGraph, family: GraphFamily, q: int) -> ModVector:
    """
    A function that returns the family's copy counts modulo ``q``, in family order.

    :param host: the host graph.
    :param family: the family.
    :param q: the modulus.
    :return: the vector of residues.
    """
    return ModVector(q, [count_copies_mod(host, pattern, q) for pattern in family])


def brute_force_copies(host: HostGraph, pattern: PatternGraph) -> int:
    """
    A function that counts copies the slow way: for every set of ``v_H`` host vertices
    and every set of ``e_H`` edges among them, it checks whether those vertices and
    edges form a graph isomorphic to the pattern.  Only meant for small hosts.

    :param host: the host graph.
    :param pattern: the pattern.
    :return: the exact copy count.
    """
    size = pattern.vertex_count
    total = 0

    for vertices in combinations(range(host.n), size):
        position = {vertex: index for index, vertex in enumerate(vertices)}
        induced = [(position[u], position[w]) for u, w in combinations(vertices, 2) if host.has_edge(u, w)]
        for chosen in combinations(induced, pattern.edge_count):
            if is_isomorphic(PatternGraph(size, chosen), pattern):
                total += 1

    return total
