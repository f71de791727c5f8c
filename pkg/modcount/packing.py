"""
This library packs vertex-disjoint copies of a pattern into a host graph.  It
enumerates the copies, counts the pairs of copies that share a vertex, packs copies
greedily and, for small inputs, finds the largest packing exactly.
"""
from typing import Any, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence

from modcount.errors import ParameterError, SizeCapExceeded, TruncatedInput
from modcount.graphcore import Edge, GraphFamily, HostGraph, PatternGraph, iterate_bits
from modcount.gensample import PSpec, SeedSpec, sample_gnp
from modcount.invariants import expected_copies, phi
from modcount.subcount import iterate_embeddings
from modcount.utils import verbose_out

DEFAULT_CAP = 10 ** 6
MAX_EXACT_COPIES = 24
GREEDY_FRACTION = 0.1


class Copy(NamedTuple):
    edges: FrozenSet[Edge]
    vertex_mask: int

    @property
    def vertices(self) -> List[int]:
        return list(iterate_bits(self.vertex_mask))


class CopyList(NamedTuple):
    pattern: PatternGraph
    copies: List[Copy]
    truncated: bool

    @property
    def x(self) -> int:
        return len(self.copies)


class PackingReport(NamedTuple):
    X: int
    Z: int
    Y_greedy: int
    Y_exact: Optional[int]
    turan_bound: float

    def to_json(self) -> Dict[str, Any]:
        return self._asdict()


class PackingStudyRow(NamedTuple):
    n: int
    p: float
    log_phi: float
    expected_x: float
    mean_x: float
    mean_z: float
    mean_greedy: float
    mean_bound: float
    greedy_fraction: float
    truncated_trials: int


def enumerate_copies(host: HostGraph, pattern: PatternGraph, cap: int = DEFAULT_CAP) -> CopyList:
    """
    A function that lists the distinct copies of a pattern in a host.  A copy is
    identified by its edge set; the set of vertices it covers is kept alongside for
    disjointness tests.  Enumeration stops once a copy beyond ``cap`` turns up, in which
    case the list holds the first ``cap`` copies and is flagged as truncated.

    :param host: the host graph.
    :param pattern: the pattern, at most 10 vertices.
    :param cap: the most copies to keep.
    :return: the copies, in discovery order.
    """
    if cap < 0:
        raise ParameterError(f'The copy cap cannot be negative ({cap}).', 'BAD_CAP')
    pattern_edges = pattern.edges
    seen = set()
    copies = []

    for images in iterate_embeddings(host, pattern):
        edges = frozenset((min(images[u], images[w]), max(images[u], images[w])) for u, w in pattern_edges)
        if edges in seen:
            continue
        if len(copies) == cap:
            return CopyList(pattern, copies, True)
        seen.add(edges)
        mask = 0
        for image in images:
            mask |= 1 << image
        copies.append(Copy(edges, mask))

    return CopyList(pattern, copies, False)


def _copies_of(copies) -> Sequence[Copy]:
    return copies.copies if isinstance(copies, CopyList) else copies


def greedy_disjoint_packing(copies) -> List[Copy]:
    """
    A function that scans copies in order, keeping each one that shares no vertex
    with any copy already kept.

    :param copies: a ``CopyList`` or a sequence of copies.
    :return: the kept copies.
    """
    used = 0
    kept = []

    for copy in _copies_of(copies):
        if not copy.vertex_mask & used:
            kept.append(copy)
            used |= copy.vertex_mask

    return kept


def _require_complete(copies: CopyList, what: str):
    if isinstance(copies, CopyList) and copies.truncated:
        raise TruncatedInput(f'The copy list of {copies.pattern.name} was truncated, so {what} would be wrong.')


def _conflict_rows(copies: Sequence[Copy]) -> List[int]:
    """
    A function that builds the conflict graph over copies: bit ``j`` of row ``i`` is set
    when copies ``i`` and ``j`` share a vertex (including ``j == i``).  Each row is the
    union, over the copy's vertices, of the set of copies touching that vertex.

    :param copies: the copies.
    :return: one bit row per copy.
    """
    touching: Dict[int, int] = {}

    for index, copy in enumerate(copies):
        for vertex in iterate_bits(copy.vertex_mask):
            touching[vertex] = touching.get(vertex, 0) | (1 << index)

    rows = []
    for copy in copies:
        row = 0
        for vertex in iterate_bits(copy.vertex_mask):
            row |= touching[vertex]
        rows.append(row)

    return rows


def count_overlapping_pairs(copies) -> int:
    """
    A function that counts the unordered pairs of copies that share at least one
    vertex.

    :param copies: a complete ``CopyList``.
    :return: the number of overlapping pairs.
    """
    _require_complete(copies, 'the overlap count')
    copies = _copies_of(copies)
    rows = _conflict_rows(copies)
    return (sum(row.bit_count() for row in rows) - len(copies)) // 2


def turan_lower_bound(x: int, z: int) -> float:
    """
    A function that returns the lower bound ``X²/(X + 2Z)`` on the largest packing that
    Turán's theorem gives for a conflict graph with ``X`` vertices and ``Z`` edges.

    :param x: the number of copies.
    :param z: the number of overlapping pairs.
    :return: the bound; ``0`` when there are no copies.
    """
    if x < 0 or z < 0:
        raise ParameterError(f'X and Z cannot be negative (X={x}, Z={z}).', 'BAD_PARAMETER')
    return 0.0 if x == 0 else x * x / (x + 2 * z)


def max_disjoint_packing_exact(copies) -> int:
    """
    A function that finds the size of a largest vertex-disjoint packing, which is the
    independence number of the conflict graph, by branch and bound.

    :param copies: a complete ``CopyList`` of at most 24 copies.
    :return: the largest packing size.
    """
    _require_complete(copies, 'the exact packing size')
    copies = _copies_of(copies)
    if len(copies) > MAX_EXACT_COPIES:
        raise SizeCapExceeded(f'{len(copies)} copies is too many for the exact packing search; at most '
                              f'{MAX_EXACT_COPIES} are supported.', 'TOO_MANY_COPIES')
    rows = _conflict_rows(copies)
    best = 0

    def search(candidates: int, size: int):
        nonlocal best
        if candidates == 0:
            best = max(best, size)
            return
        if size + candidates.bit_count() <= best:
            return
        low = candidates & -candidates
        index = low.bit_length() - 1
        search(candidates & ~rows[index], size + 1)
        search(candidates & ~low, size)

    search((1 << len(copies)) - 1, 0)
    return best


def packing_report(host: HostGraph, pattern: PatternGraph, cap: int = DEFAULT_CAP, exact: bool = True) \
        -> PackingReport:
    """
    A function that gathers every packing quantity for one host and pattern.  The exact
    packing size is included only when asked for and when there are at most 24 copies.

    :param host: the host graph.
    :param pattern: the pattern.
    :param cap: the most copies to enumerate.
    :param exact: whether to run the exact packing search when it applies.
    :return: the packing report.
    """
    copies = enumerate_copies(host, pattern, cap)
    x = copies.x
    z = count_overlapping_pairs(copies)
    greedy = len(greedy_disjoint_packing(copies))
    y_exact = max_disjoint_packing_exact(copies) if exact and x <= MAX_EXACT_COPIES else None

    return PackingReport(x, z, greedy, y_exact, turan_lower_bound(x, z))


def packing_study(pattern: PatternGraph, n_grid: Iterable[int], pspec: PSpec, trials: int, master_seed: int,
                  cap: int = DEFAULT_CAP) -> List[PackingStudyRow]:
    """
    A function that samples ``G(n, p)`` repeatedly for each ``n`` of a grid and averages
    the copy count, the overlap count, the greedy packing size and the Turán bound.  It
    also reports how often the greedy packing reaches (is at least) a tenth of the bound.
    Graphs are drawn from ``G(n, p)`` at the given p-spec, so studying ``G(n, 2p)`` means
    passing the doubled p-spec.  Trials whose copy list was truncated are left out of the
    averages and counted instead.

    :param pattern: the pattern.
    :param n_grid: the vertex counts to study.
    :param pspec: the edge probability as a function of ``n``.
    :param trials: the number of graphs to sample per ``n``.
    :param master_seed: the master seed.
    :param cap: the most copies to enumerate per graph.
    :return: one row per ``n``.
    """
    if trials < 1:
        raise ParameterError(f'At least one trial is needed, not {trials}.', 'BAD_TRIALS')
    family = GraphFamily([pattern])
    rows = []

    for position, n in enumerate(n_grid):
        p = pspec.evaluate(n)
        totals = [0.0, 0.0, 0.0, 0.0]
        reached, truncated = 0, 0

        for trial in range(trials):
            graph = sample_gnp(n, p, SeedSpec(master_seed, position * trials + trial))
            copies = enumerate_copies(graph, pattern, cap)
            if copies.truncated:
                truncated += 1
                continue
            z = count_overlapping_pairs(copies)
            greedy = len(greedy_disjoint_packing(copies))
            bound = turan_lower_bound(copies.x, z)
            for index, value in enumerate((copies.x, z, greedy, bound)):
                totals[index] += value
            # With no copies both sides are zero and the trial counts as reaching.
            if greedy >= GREEDY_FRACTION * bound:
                reached += 1

        kept = trials - truncated
        means = [total / kept if kept else float('nan') for total in totals]
        rows.append(PackingStudyRow(n, p, phi(family, n, p).log_phi, expected_copies(n, p, pattern), *means,
                                    reached / kept if kept else float('nan'), truncated))
        verbose_out(f'n={n}: mean X={means[0]:.3f}, greedy reached the bound fraction in {reached}/{kept} trials.',
                    level=1)

    return rows
