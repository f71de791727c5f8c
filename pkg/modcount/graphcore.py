"""
This library provides our small-graph model: patterns, host graphs and families of
patterns, along with parsing, isomorphism, automorphism counting and connectivity.

Adjacency is stored as one integer bit row per vertex; bit ``u`` of row ``v`` is set
when ``{u, v}`` is an edge.
"""
import re
from collections import deque
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from modcount.errors import GraphFormatError, ParameterError, SizeCapExceeded, DisconnectedMember, \
    TooSmallMember, IsomorphicPair

MAX_PATTERN_VERTICES = 10
Edge = Tuple[int, int]

_catalog_pattern = re.compile(r'^([KCPS])(\d+)$')
_catalog_ranges = {
    'K': (2, 8),
    'C': (3, 12),
    'P': (2, 10),
    'S': (3, 8),
}
_number_pattern = re.compile(r'^(0|[1-9]\d*)$')


def _normalize_edges(vertex_count: int, edges: Iterable[Sequence[int]]) -> FrozenSet[Edge]:
    """
    A function that checks a collection of vertex pairs against the graph invariants
    and returns them as a set of ``(low, high)`` tuples.

    :param vertex_count: the number of vertices in the graph.
    :param edges: the vertex pairs to check.
    :return: the normalized edge set.
    """
    result = set()

    for edge in edges:
        u, w = edge
        if not (0 <= u < vertex_count and 0 <= w < vertex_count):
            raise GraphFormatError(f'Edge {u} {w} refers to a vertex outside 0..{vertex_count - 1}.',
                                   'VERTEX_OUT_OF_RANGE')
        if u == w:
            raise GraphFormatError(f'Edge {u} {w} is a self-loop.', 'SELF_LOOP')
        pair = (u, w) if u < w else (w, u)
        if pair in result:
            raise GraphFormatError(f'Edge {pair[0]} {pair[1]} appears more than once.', 'DUPLICATE_EDGE')
        result.add(pair)

    return frozenset(result)


def _rows_from_edges(vertex_count: int, edges: Iterable[Edge]) -> Tuple[int, ...]:
    rows = [0] * vertex_count
    for u, w in edges:
        rows[u] |= 1 << w
        rows[w] |= 1 << u
    return tuple(rows)


def _edges_from_rows(rows: Sequence[int]) -> List[Edge]:
    edges = []
    for u, row in enumerate(rows):
        above = row >> (u + 1)
        while above:
            low = above & -above
            edges.append((u, u + low.bit_length()))
            above ^= low
    return edges


def iterate_bits(mask: int) -> Iterator[int]:
    """
    A function that yields the indices of the set bits of a mask, lowest first.

    :param mask: the mask to walk.
    :return: a generator over the set bit positions.
    """
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class PatternGraph(object):
    """
    Instances of this class represent a small pattern graph ``H``.  They are immutable;
    the automorphism count and density profile are computed on first use and cached.
    """
    def __init__(self, vertex_count: int, edges: Iterable[Sequence[int]], name: Optional[str] = None):
        """
        A function that creates a pattern graph.

        :param vertex_count: the number of vertices; vertices are ``0..vertex_count - 1``.
        :param edges: the unordered vertex pairs that are edges.
        :param name: an optional display name, such as a catalog name.
        """
        if vertex_count < 1:
            raise ParameterError('A pattern must have at least one vertex.', 'EMPTY_PATTERN')
        self._vertex_count = vertex_count
        self._edges = _normalize_edges(vertex_count, edges)
        self._adjacency = _rows_from_edges(vertex_count, self._edges)
        self._name = name
        self._automorphism_count = None
        self._density_profile = None

    @property
    def vertex_count(self) -> int:
        return self._vertex_count

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> List[Edge]:
        """
        A read-only property that returns the edges of the pattern in lexicographic
        order.

        :return: the sorted list of edges.
        """
        return sorted(self._edges)

    @property
    def adjacency(self) -> Tuple[int, ...]:
        return self._adjacency

    @property
    def name(self) -> str:
        return self._name or f'graph({self._vertex_count},{len(self._edges)})'

    def has_edge(self, u: int, w: int) -> bool:
        return bool((self._adjacency[u] >> w) & 1)

    def degree(self, vertex: int) -> int:
        return self._adjacency[vertex].bit_count()

    def degree_sequence(self) -> List[int]:
        return sorted(row.bit_count() for row in self._adjacency)

    @property
    def automorphism_count(self) -> int:
        if self._automorphism_count is None:
            self._automorphism_count = automorphism_count(self)
        return self._automorphism_count

    @property
    def density_profile(self):
        """
        A read-only property that returns this pattern's density profile (its density,
        maximum subgraph density and a witness for the latter).

        :return: the cached ``DensityProfile``.
        """
        if self._density_profile is None:
            # Imported here since the invariants library depends on this one.
            from modcount.invariants import max_density
            self._density_profile = max_density(self)
        return self._density_profile

    def relabel(self, permutation: Sequence[int]) -> 'PatternGraph':
        """
        A function that returns a copy of this pattern with vertex ``v`` renamed to
        ``permutation[v]``.

        :param permutation: the new label for each vertex.
        :return: the relabeled pattern.
        """
        return PatternGraph(self._vertex_count, [(permutation[u], permutation[w]) for u, w in self._edges],
                            self._name)

    def to_host(self) -> 'HostGraph':
        return HostGraph(self._vertex_count, self._adjacency)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PatternGraph):
            return NotImplemented
        return self._vertex_count == other._vertex_count and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._vertex_count, self._edges))

    def __repr__(self) -> str:
        return f'PatternGraph[{self.name}, v={self._vertex_count}, e={len(self._edges)}]'


class HostGraph(object):
    """
    Instances of this class represent a host graph on ``n`` vertices, either sampled
    or supplied.  They are immutable after construction.
    """
    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> 'HostGraph':
        """
        This class function creates a host graph from a list of edges, checking every
        one against the graph invariants.

        :param n: the number of vertices.
        :param edges: the unordered vertex pairs that are edges.
        :return: the resulting host graph.
        """
        if n < 0:
            raise ParameterError('A host graph cannot have a negative vertex count.', 'BAD_VERTEX_COUNT')
        return cls(n, _rows_from_edges(n, _normalize_edges(n, edges)))

    @classmethod
    def empty(cls, n: int) -> 'HostGraph':
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> 'HostGraph':
        full = (1 << n) - 1
        return cls(n, tuple(full ^ (1 << v) for v in range(n)))

    def __init__(self, n: int, adjacency: Sequence[int]):
        """
        A function that creates a host graph from adjacency bit rows.  The rows are
        trusted to be symmetric and loop-free; use ``from_edges()`` for unchecked input.

        :param n: the number of vertices.
        :param adjacency: one bit row per vertex.
        """
        self._n = n
        self._adjacency = tuple(adjacency)
        self._edge_count = sum(row.bit_count() for row in self._adjacency) // 2

    @property
    def n(self) -> int:
        return self._n

    @property
    def adjacency(self) -> Tuple[int, ...]:
        return self._adjacency

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def edges(self) -> List[Edge]:
        """
        A function that returns the edges of this graph in lexicographic order.  This
        order is also the order in which edge indicator variables are numbered.

        :return: the sorted list of edges.
        """
        return _edges_from_rows(self._adjacency)

    def has_edge(self, u: int, w: int) -> bool:
        return bool((self._adjacency[u] >> w) & 1)

    def disjoint_union(self, other: 'HostGraph') -> 'HostGraph':
        """
        A function that returns the disjoint union of this graph and another; the other
        graph's vertices follow ours.

        :param other: the graph to append.
        :return: the disjoint union.
        """
        shift = self._n
        return HostGraph(self._n + other._n, self._adjacency + tuple(row << shift for row in other._adjacency))

    def relabel(self, permutation: Sequence[int]) -> 'HostGraph':
        return HostGraph.from_edges(self._n, [(permutation[u], permutation[w]) for u, w in self.edges()])

    def subgraph_from_mask(self, edges: Sequence[Edge], mask: int) -> 'HostGraph':
        """
        A function that returns the spanning subgraph keeping edge ``edges[i]`` exactly
        when bit ``i`` of ``mask`` is set.

        :param edges: the candidate edges, usually ``self.edges()``.
        :param mask: the selection mask.
        :return: the spanning subgraph.
        """
        rows = [0] * self._n
        for index in iterate_bits(mask):
            u, w = edges[index]
            rows[u] |= 1 << w
            rows[w] |= 1 << u
        return HostGraph(self._n, rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HostGraph):
            return NotImplemented
        return self._n == other._n and self._adjacency == other._adjacency

    def __hash__(self) -> int:
        return hash((self._n, self._adjacency))

    def __repr__(self) -> str:
        return f'HostGraph[n={self._n}, e={self._edge_count}]'


class GraphFamily(object):
    """
    Instances of this class represent a validated, ordered family of patterns.  Use
    ``validate_family()`` to create them.
    """
    def __init__(self, patterns: Sequence[PatternGraph]):
        self._patterns = tuple(patterns)

    @property
    def patterns(self) -> Tuple[PatternGraph, ...]:
        return self._patterns

    @property
    def k(self) -> int:
        return len(self._patterns)

    @property
    def names(self) -> List[str]:
        return [pattern.name for pattern in self._patterns]

    def __len__(self) -> int:
        return len(self._patterns)

    def __iter__(self) -> Iterator[PatternGraph]:
        return iter(self._patterns)

    def __getitem__(self, index: int) -> PatternGraph:
        return self._patterns[index]

    def __repr__(self) -> str:
        return f'GraphFamily[{", ".join(self.names)}]'


def catalog_names() -> List[str]:
    """
    A function that returns the names of every graph in our catalog, grouped by kind.

    :return: the ordered list of catalog names.
    """
    return [f'{kind}{size}' for kind, (low, high) in _catalog_ranges.items() for size in range(low, high + 1)]


def catalog_graph(name: str) -> PatternGraph:
    """
    A function that builds a catalog graph.  ``Kn`` is the clique, ``Cn`` the cycle and
    ``Pn`` the path on ``n`` vertices; ``Sn`` is the star with ``n`` leaves.

    :param name: the catalog name.
    :return: the named graph.
    """
    match = _catalog_pattern.match(name.strip().upper())
    if not match:
        raise GraphFormatError(f'Unknown catalog graph name: {name}', 'UNKNOWN_CATALOG_NAME')
    kind, size = match.group(1), int(match.group(2))
    low, high = _catalog_ranges[kind]
    if not low <= size <= high:
        raise GraphFormatError(f'Unknown catalog graph name: {name}', 'UNKNOWN_CATALOG_NAME')

    if kind == 'K':
        vertex_count, edges = size, [(u, w) for u in range(size) for w in range(u + 1, size)]
    elif kind == 'C':
        vertex_count, edges = size, [(v, (v + 1) % size) for v in range(size)]
    elif kind == 'P':
        vertex_count, edges = size, [(v, v + 1) for v in range(size - 1)]
    else:
        vertex_count, edges = size + 1, [(0, leaf) for leaf in range(1, size + 1)]

    return PatternGraph(vertex_count, edges, name=f'{kind}{size}')


def _parse_pair(line: str, line_number: int) -> Tuple[int, int]:
    parts = line.split(' ')
    if len(parts) != 2 or not all(_number_pattern.match(part) for part in parts):
        raise GraphFormatError(f'Line {line_number} is not two space-separated decimal integers: "{line}"',
                               'MALFORMED_LINE')
    return int(parts[0]), int(parts[1])


def _parse_edge(line: str, line_number: int) -> Tuple[int, int]:
    u, w = _parse_pair(line, line_number)
    if u > w:
        raise GraphFormatError(f'Line {line_number} lists its endpoints out of order: "{line}"', 'MALFORMED_LINE')
    return u, w


def _parse_graph_text(text: str) -> Tuple[int, List[Tuple[int, int]]]:
    """
    A function that parses the graph text format: a ``v e`` header line followed by
    ``e`` lines of ``u w`` pairs with ``u <= w``.  Numbers carry no leading zeros.

    :param text: the text to parse.
    :return: the vertex count and the (unchecked) list of pairs.
    """
    lines = text.split('\n')
    while lines and lines[-1] == '':
        lines.pop()
    if not lines:
        raise GraphFormatError('The graph text is empty.', 'MALFORMED_LINE')
    vertex_count, edge_count = _parse_pair(lines[0], 1)
    if len(lines) - 1 != edge_count:
        raise GraphFormatError(f'The header promises {edge_count} edge lines but {len(lines) - 1} follow.',
                               'MALFORMED_LINE')
    return vertex_count, [_parse_edge(line, number) for number, line in enumerate(lines[1:], start=2)]


def parse_graph(text: str) -> PatternGraph:
    """
    A function that produces a pattern from either a catalog name (like ``K3``) or text
    in the graph format.

    :param text: the catalog name or graph text.
    :return: the described pattern.
    """
    stripped = text.strip()
    if stripped and '\n' not in stripped and ' ' not in stripped:
        return catalog_graph(stripped)
    vertex_count, pairs = _parse_graph_text(text)
    if vertex_count < 1:
        raise GraphFormatError('A pattern must have at least one vertex.', 'MALFORMED_LINE')
    return PatternGraph(vertex_count, pairs)


def serialize_graph(graph) -> str:
    """
    A function that renders a pattern or host graph in the graph text format, edges in
    lexicographic order.

    :param graph: the ``PatternGraph`` or ``HostGraph`` to render.
    :return: the graph text, newline-terminated.
    """
    if isinstance(graph, PatternGraph):
        vertex_count, edges = graph.vertex_count, graph.edges
    else:
        vertex_count, edges = graph.n, graph.edges()
    lines = [f'{vertex_count} {len(edges)}'] + [f'{u} {w}' for u, w in edges]
    return '\n'.join(lines) + '\n'


def read_host_file(path: Path) -> HostGraph:
    """
    A function that reads a host graph from a file in the graph text format.

    :param path: the file to read.
    :return: the host graph it describes.
    """
    try:
        text = path.read_text(encoding='utf-8')
    except OSError as error:
        raise GraphFormatError(f'Cannot read graph file {path}: {error}', 'UNREADABLE_FILE')
    n, pairs = _parse_graph_text(text)
    return HostGraph.from_edges(n, pairs)


def check_pattern_size(graph: PatternGraph):
    if graph.vertex_count > MAX_PATTERN_VERTICES:
        raise SizeCapExceeded(f'{graph.name} has {graph.vertex_count} vertices; at most {MAX_PATTERN_VERTICES} '
                              f'are supported.', 'PATTERN_TOO_LARGE')


def search_order(graph: PatternGraph) -> List[int]:
    """
    A function that orders a pattern's vertices for mapping searches: highest degree
    first, then repeatedly the vertex with the most already-ordered neighbors.

    :param graph: the pattern to order.
    :return: the vertex order.
    """
    remaining = set(range(graph.vertex_count))
    order = []
    placed = 0

    while remaining:
        vertex = max(remaining, key=lambda v: ((graph.adjacency[v] & placed).bit_count(), graph.degree(v), -v))
        order.append(vertex)
        placed |= 1 << vertex
        remaining.remove(vertex)

    return order


def _isomorphisms(a: PatternGraph, b: PatternGraph) -> Iterator[Dict[int, int]]:
    """
    A function that yields every edge-preserving bijection from ``a`` onto ``b``.
    Candidates for each vertex are restricted to vertices of equal degree, and every
    new assignment must agree with all earlier ones on adjacency.

    :param a: the source pattern.
    :param b: the target pattern.
    :return: a generator of vertex mappings.
    """
    check_pattern_size(a)
    check_pattern_size(b)

    if a.vertex_count != b.vertex_count or a.edge_count != b.edge_count or \
            a.degree_sequence() != b.degree_sequence():
        return

    order = search_order(a)
    by_degree: Dict[int, List[int]] = {}
    for w in range(b.vertex_count):
        by_degree.setdefault(b.degree(w), []).append(w)
    mapping: Dict[int, int] = {}
    used = [False] * b.vertex_count

    def extend(position: int) -> Iterator[Dict[int, int]]:
        if position == len(order):
            yield dict(mapping)
            return
        v = order[position]
        for w in by_degree.get(a.degree(v), []):
            if used[w]:
                continue
            if all(a.has_edge(v, u) == b.has_edge(w, image) for u, image in mapping.items()):
                mapping[v] = w
                used[w] = True
                yield from extend(position + 1)
                used[w] = False
                del mapping[v]

    yield from extend(0)


def is_isomorphic(a: PatternGraph, b: PatternGraph) -> bool:
    """
    A function that decides whether two patterns are isomorphic.

    :param a: the first pattern.
    :param b: the second pattern.
    :return: ``True`` if an edge-preserving bijection exists.
    """
    return next(_isomorphisms(a, b), None) is not None


def automorphism_count(graph: PatternGraph) -> int:
    """
    A function that counts the automorphisms of a pattern by exhaustive search.

    :param graph: the pattern.
    :return: ``|Aut(H)|``, always at least 1.
    """
    return sum(1 for _ in _isomorphisms(graph, graph))


def is_connected(graph) -> bool:
    """
    A function that returns whether a pattern or host graph has exactly one connected
    component.  A single vertex counts as connected.

    :param graph: the graph to check.
    :return: ``True`` if the graph is connected.
    """
    rows = graph.adjacency
    if len(rows) == 0:
        return False
    seen = 1
    queue = deque([0])

    while queue:
        fresh = rows[queue.popleft()] & ~seen
        seen |= fresh
        queue.extend(iterate_bits(fresh))

    return seen == (1 << len(rows)) - 1


def validate_family(patterns: Sequence[PatternGraph]) -> GraphFamily:
    """
    A function that checks a list of patterns for use as a family: every member must
    have at least two vertices, be connected and be nonisomorphic to every other
    member.  Order is preserved.

    :param patterns: the candidate members.
    :return: the validated family.
    """
    if not patterns:
        raise ParameterError('A family must have at least one member.', 'EMPTY_FAMILY')

    for index, pattern in enumerate(patterns):
        if pattern.vertex_count < 2:
            raise TooSmallMember(index)
        if not is_connected(pattern):
            raise DisconnectedMember(index)

    for first in range(len(patterns)):
        for second in range(first + 1, len(patterns)):
            if is_isomorphic(patterns[first], patterns[second]):
                raise IsomorphicPair(first, second)

    return GraphFamily(patterns)


def read_pattern(entry: str) -> PatternGraph:
    """
    A function that reads one pattern given either as a catalog name or as the path of
    a file in the graph text format.  A file's pattern is named after the file.

    :param entry: the catalog name or file path.
    :return: the pattern.
    """
    path = Path(entry)
    if not path.is_file():
        return catalog_graph(entry)
    try:
        pattern = parse_graph(path.read_text(encoding='utf-8'))
    except OSError as error:
        raise GraphFormatError(f'Cannot read graph file {path}: {error}', 'UNREADABLE_FILE')
    return PatternGraph(pattern.vertex_count, pattern.edges, name=path.stem)


def parse_family(text: str) -> GraphFamily:
    """
    A function that builds a family from a comma-separated list, each entry of which is
    either a catalog name or the path of a file in the graph text format.

    :param text: the family description, like ``K3,K4``.
    :return: the validated family.
    """
    return validate_family([read_pattern(entry) for entry in (part.strip() for part in text.split(',')) if entry])
