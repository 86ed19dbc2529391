"""
Graph states and stabilizer groups.

Graph vertices are 1-based (``GraphSpec`` and the JSON graph format); qubit
indices inside Pauli words stay 0-based, vertex ``v`` being qubit ``v - 1``.

Explicit generator lists (computational basis, e.g. the GHZ and cluster
listings in ``states``) and graphs (graph basis) are independent inputs; no
local-Clifford conversion between them is ever applied.
"""
import itertools
import json
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np

from .dense import DenseState, expectation
from .errors import DataFormatError, GraphError, GroupError
from .pauli import MAX_QUBITS, PauliString, signed_product, to_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GraphSpec:
    """
    Simple undirected graph on vertices ``1..n``.

    Attributes:
        n: Number of vertices
        edges: Unordered vertex pairs stored as ``(min, max)`` tuples
    """

    n: int
    edges: FrozenSet[Tuple[int, int]]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "GraphSpec":
        """
        Validate and normalize an edge list.

        Raises:
            GraphError: On self-loops, duplicate edges or out-of-range vertices
        """
        if n < 1:
            raise GraphError(f"Graph needs at least one vertex, got n={n}")
        normalized = set()
        for edge in edges:
            if len(edge) != 2:
                raise GraphError(f"Edge {edge!r} must join exactly two vertices")
            i, j = int(edge[0]), int(edge[1])
            if i == j:
                raise GraphError(f"Self-loop at vertex {i}")
            if not (1 <= i <= n and 1 <= j <= n):
                raise GraphError(f"Edge ({i}, {j}) leaves the vertex range 1..{n}")
            key = (min(i, j), max(i, j))
            if key in normalized:
                raise GraphError(f"Duplicate edge {key}")
            normalized.add(key)
        return cls(n, frozenset(normalized))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(1, self.n + 1))
        g.add_edges_from(self.edges)
        return g


def star_graph(n: int) -> GraphSpec:
    """Vertex 1 joined to every other vertex (the GHZ graph)."""
    return GraphSpec.from_edges(n, [(1, j) for j in range(2, n + 1)])


def path_graph(n: int) -> GraphSpec:
    """Path 1-2-...-n (the linear cluster graph)."""
    return GraphSpec.from_edges(n, [(i, i + 1) for i in range(1, n)])


def complete_graph(n: int) -> GraphSpec:
    return GraphSpec.from_edges(n, itertools.combinations(range(1, n + 1), 2))


def graph_from_dict(obj: dict) -> GraphSpec:
    """Parse ``{"n": int, "edges": [[i, j], ...]}`` with 1-based vertices."""
    try:
        n = int(obj["n"])
        edges = [tuple(edge) for edge in obj.get("edges", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise DataFormatError(f"Malformed graph object: {e}") from e
    return GraphSpec.from_edges(n, edges)


def graph_to_dict(g: GraphSpec) -> dict:
    return {"n": g.n, "edges": [list(edge) for edge in sorted(g.edges)]}


def load_graph(path: str) -> GraphSpec:
    """Read a graph JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            obj = json.load(f)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"Graph file {path} is not valid JSON: {e}") from e
    return graph_from_dict(obj)


def dump_graph(g: GraphSpec, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(graph_to_dict(g), f, indent=2)


def generators_from_graph(g: GraphSpec) -> List[PauliString]:
    """``K_v = X_v prod_{u in N(v)} Z_u`` for ``v = 1..n``, all with sign +1."""
    if not isinstance(g, GraphSpec):
        raise TypeError("generators_from_graph expects a GraphSpec")
    graph = g.to_networkx()
    gens = []
    for v in range(1, g.n + 1):
        letters = ["I"] * g.n
        letters[v - 1] = "X"
        for u in graph.neighbors(v):
            letters[u - 1] = "Z"
        gens.append(PauliString.from_letters(letters))
    return gens


def _symplectic_rank(words: Sequence[PauliString]) -> int:
    """Rank over GF(2) of the ``[x | z]`` bit rows."""
    pivots: Dict[int, int] = {}
    rank = 0
    for w in words:
        row = (w.x << w.n) | w.z
        while row:
            top = row.bit_length() - 1
            if top not in pivots:
                pivots[top] = row
                rank += 1
                break
            row ^= pivots[top]
    return rank


@dataclass(frozen=True)
class StabilizerGroup:
    """
    Abelian group of signed Pauli words generated by independent generators.

    ``elements[m]`` is the product of the generators selected by the bits of
    ``m`` (bit ``i`` selects ``generators[i]``); ``elements[0]`` is the identity.
    """

    n: int
    generators: Tuple[PauliString, ...]
    elements: Tuple[PauliString, ...]

    @property
    def is_full(self) -> bool:
        """True when the group stabilizes a unique state (``2**n`` elements)."""
        return len(self.generators) == self.n

    def nontrivial(self) -> List[PauliString]:
        """All elements except the identity (``S*``)."""
        return [e for e in self.elements if not e.is_identity()]

    def __contains__(self, word: PauliString) -> bool:
        return word in set(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def group_from_generators(gens: Sequence[PauliString], full: bool = True) -> StabilizerGroup:
    """
    Enumerate all ``2**len(gens)`` signed products of commuting generators.

    Args:
        gens: Mutually commuting, independent Pauli words
        full: Require ``len(gens) == n`` (a group that fixes a unique state)

    Raises:
        GroupError: On an empty list, anticommuting or dependent generators,
            or a wrong generator count when ``full`` is set
    """
    gens = tuple(gens)
    if not gens:
        raise GroupError("Need at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise GroupError("Generators act on different qubit counts")
    for a, b in itertools.combinations(gens, 2):
        if not a.commutes_with(b):
            raise GroupError(f"Generators {a} and {b} anticommute")
    if _symplectic_rank(gens) != len(gens):
        raise GroupError("Generators are not independent")
    if full and len(gens) != n:
        raise GroupError(f"A full group on {n} qubits needs {n} generators, got {len(gens)}")
    elements = [PauliString.identity(n)]
    for g in gens:
        elements += [signed_product(e, g) for e in elements]
    return StabilizerGroup(n, gens, tuple(elements))


def group_projector(group: StabilizerGroup) -> np.ndarray:
    """``2**-k * sum of all elements`` as a dense matrix."""
    if group.n > MAX_QUBITS:
        raise GroupError(f"Dense projectors are limited to {MAX_QUBITS} qubits")
    total = sum(to_matrix(e) for e in group.elements)
    return total / len(group.elements)


def stabilizer_state(group: StabilizerGroup) -> DenseState:
    """
    The unique common +1 eigenvector of a full group.

    Raises:
        GroupError: If the projector is not rank one (inconsistent signs or
            too few generators)
    """
    proj = group_projector(group)
    evals, evecs = np.linalg.eigh(proj)
    rank = int(np.sum(evals > 0.5))
    if rank != 1 or not np.allclose(proj @ proj, proj, atol=1e-10):
        raise GroupError(f"Group projector has rank {rank}, expected 1")
    return DenseState.pure(evecs[:, -1], normalize=True)


def find_stabilizer_group(state: DenseState, tol: float = 1e-10) -> StabilizerGroup:
    """
    Recover the stabilizer group of a pure state by scanning all Pauli words.

    Raises:
        GroupError: If the state is not a stabilizer state
    """
    if not state.is_pure:
        raise GroupError("Only pure states have a stabilizer group")
    stabilizing = []
    for letters in itertools.product("IXYZ", repeat=state.n):
        word = PauliString.from_letters(letters)
        if word.is_identity():
            continue
        value = expectation(word, state)
        if abs(abs(value) - 1) < tol:
            stabilizing.append(word if value > 0 else -word)
    gens: List[PauliString] = []
    for word in stabilizing:
        if _symplectic_rank(gens + [word]) > len(gens):
            gens.append(word)
    if len(gens) != state.n:
        raise GroupError(f"State is not a stabilizer state ({len(gens)} independent stabilizers)")
    return group_from_generators(gens)


def correlation_profile(group: StabilizerGroup) -> Dict[int, int]:
    """Number of group elements per weight (support size)."""
    profile: Dict[int, int] = {}
    for e in group.elements:
        profile[e.weight] = profile.get(e.weight, 0) + 1
    return dict(sorted(profile.items()))


def elements_of_weight(group: StabilizerGroup, weight: int) -> List[PauliString]:
    """Group elements acting nontrivially on exactly ``weight`` qubits."""
    return [e for e in group.elements if e.weight == weight]


def _check_two_point_graph(g: GraphSpec) -> nx.Graph:
    if g.n < 3:
        raise GraphError(f"Two-point counting needs at least 3 vertices, got {g.n}")
    nxg = g.to_networkx()
    if not nx.is_connected(nxg):
        raise GraphError("Two-point counting needs a connected graph")
    return nxg


def count_two_point(g: GraphSpec) -> Tuple[int, List[PauliString]]:
    """
    Two-point stabilizing operators of a connected graph state from its graph.

    Three sources exist: generators of degree-one vertices (XZ), products of
    unconnected pairs with equal neighbourhoods (XX) and products of connected
    pairs with equal closed neighbourhoods (YY).

    Returns:
        ``(k, ops)`` with the operators sorted by label

    Raises:
        GraphError: If the graph is disconnected or has fewer than 3 vertices
    """
    nxg = _check_two_point_graph(g)
    gens = generators_from_graph(g)
    ops = [gens[v - 1] for v in nxg.nodes if nxg.degree[v] == 1]
    for i, j in itertools.combinations(sorted(nxg.nodes), 2):
        ni, nj = set(nxg.neighbors(i)), set(nxg.neighbors(j))
        if nxg.has_edge(i, j):
            matched = ni | {i} == nj | {j}
        else:
            matched = ni == nj
        if matched:
            ops.append(signed_product(gens[i - 1], gens[j - 1]))
    ops.sort(key=lambda p: p.label)
    logger.debug("Graph with %d vertices has %d two-point stabilizers", g.n, len(ops))
    return len(ops), ops


def count_two_point_brute_force(g: GraphSpec) -> Tuple[int, List[PauliString]]:
    """Weight-two elements of the full group, for cross-checking the rules."""
    _check_two_point_graph(g)
    group = group_from_generators(generators_from_graph(g))
    ops = sorted(elements_of_weight(group, 2), key=lambda p: p.label)
    return len(ops), ops


def two_point_bound(g1: GraphSpec, g2: GraphSpec) -> float:
    """
    Lower bound ``max(0, (k1 - k2)/k1)`` on both measures when the two-point
    stabilizers of ``g1`` discriminate it from the orbit of ``g2``.

    Raises:
        GraphError: If ``g1`` has no two-point stabilizers
    """
    k1, _ = count_two_point(g1)
    k2, _ = count_two_point(g2)
    if k1 == 0:
        raise GraphError("First graph has no two-point stabilizing operators")
    return max(0.0, (k1 - k2) / k1)
