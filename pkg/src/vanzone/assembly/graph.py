"""The decomposition graph of the vanishing zone and the comparison with a trunk."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from ..errors import InternalError, InvalidTrunk
from .continuation import orbits
from .pieces import MonodromyData, SeifertPiece
from .trunk import TrunkStub

TRUNK = "trunk"


def _tori(n: int) -> str:
    return f"{n} boundary torus" if n == 1 else f"{n} boundary tori"


@dataclass
class Edge:
    source: int
    target: int | str  # a piece id, "boundary:k", or the trunk
    kind: str  # "zone" for a torus between consecutive zones, "boundary" for the outer tori


@dataclass
class DecompositionGraph:
    pieces: list[SeifertPiece]
    edges: list[Edge]
    boundary_tori: int
    boundary_labels: list[str]
    invariants_g: int
    invariants_s: tuple[int, int]  # [s_min, s_max]
    cycle_rank: int
    q_manifold_flag: bool
    connectivity_flag: bool
    components: list[list[int]]
    trunk: TrunkStub | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def s(self) -> int:
        return self.invariants_s[0]

    def nx_graph(self, with_trunk: bool = True) -> nx.MultiGraph:
        G = nx.MultiGraph()
        for p in self.pieces:
            G.add_node(p.component_id)
        for e in self.edges:
            if isinstance(e.target, str) and e.target.startswith("boundary"):
                if with_trunk and self.trunk is not None:
                    G.add_edge(e.source, TRUNK)
                continue
            G.add_edge(e.source, e.target)
        return G


def _cycle_rank(G: nx.MultiGraph) -> int:
    return G.number_of_edges() - G.number_of_nodes() + nx.number_connected_components(G)


def assemble_graph(
    pieces: Sequence[SeifertPiece], monodromy: MonodromyData, trunk: TrunkStub | None = None
) -> DecompositionGraph:
    S = monodromy.sample
    N = monodromy.N
    by_zone: dict[tuple[int, int], list[SeifertPiece]] = {}
    for p in pieces:
        by_zone.setdefault(p.zone_index, []).append(p)
    zone_order = [zs.index for zs in S.zones]
    edges: list[Edge] = []
    labels: list[str] = []

    def owner(zone_pos: int, connect, orbit) -> int:
        hits = {p.component_id for p in by_zone[zone_order[zone_pos]] if any(connect[i] in orbit for i in p.sheets)}
        if len(hits) != 1:
            raise InternalError("a gluing torus is not attached to exactly one piece")
        return hits.pop()

    for k, circ in enumerate(S.boundaries):
        for orb in orbits(N, [circ.circle, circ.h]):
            below = owner(k, S.zones[k].to_outer, orb)
            if k + 1 < len(S.zones):
                above = owner(k + 1, S.zones[k + 1].to_inner, orb)
                edges.append(Edge(below, above, "zone"))
            else:
                label = f"boundary:{len(labels)}"
                labels.append(label)
                edges.append(Edge(below, label, "boundary"))
    r = len(labels)
    if r != monodromy.boundary_count:
        raise InternalError("boundary labels disagree with the transversal branch orbits")
    if trunk is not None and trunk.boundary_tori != r:
        raise InvalidTrunk(f"the trunk has {_tori(trunk.boundary_tori)}, the vanishing zone {_tori(r)}")
    g = sum(p.base_genus for p in pieces)
    s = sum(p.exceptional_count for p in pieces)
    fiber = monodromy.fiber
    q_flag = fiber.annulus_flag and r == 1
    graph = DecompositionGraph(
        pieces=list(pieces),
        edges=edges,
        boundary_tori=r,
        boundary_labels=labels,
        invariants_g=g,
        invariants_s=(s, s),
        cycle_rank=0,
        q_manifold_flag=q_flag,
        connectivity_flag=False,
        components=[],
        trunk=trunk,
    )
    bare = graph.nx_graph(with_trunk=False)
    graph.components = [sorted(c) for c in nx.connected_components(bare)]
    full = graph.nx_graph(with_trunk=True)
    graph.cycle_rank = _cycle_rank(full)
    graph.connectivity_flag = nx.is_connected(full)
    if q_flag and fiber.mu != 1:
        raise InternalError("Q-manifold flag without an annulus fibre")
    return graph


@dataclass
class Verdict:
    verdict: str
    fired: list[str]
    s_increment: int | None
    details: list[str]

    @property
    def open_case(self) -> bool:
        return self.verdict == "open case (lens)"


def compare_with_trunk(graph: DecompositionGraph, trunk: TrunkStub | None = None, *, irreducible: bool) -> Verdict:
    """Which obstructions to a homeomorphism between the boundary and the link fire."""
    trunk = trunk or graph.trunk
    if trunk is None:
        raise InvalidTrunk("a trunk description is required for the comparison")
    if trunk.boundary_tori != graph.boundary_tori:
        raise InvalidTrunk(f"the trunk has {_tori(trunk.boundary_tori)}, the vanishing zone {_tori(graph.boundary_tori)}")
    r = graph.boundary_tori
    if trunk.solid_torus_flag and irreducible:
        return Verdict(
            "open case (lens)",
            [],
            None,
            ["the trunk is a solid torus and f is irreducible: the boundary may be a lens space"],
        )
    fired, details = [], []
    by_id = {p.component_id: p for p in graph.pieces}
    for comp in graph.components:
        n_bdry = sum(1 for e in graph.edges if e.kind == "boundary" and e.source in comp)
        if n_bdry >= 2:
            fired.append("cycle-rank")
            details.append(
                f"component {comp} meets the trunk along {n_bdry} tori: gluing raises the cycle rank"
            )
            break
    if any(by_id[i].base_genus > 0 for i in by_id):
        fired.append("genus")
        details.append(f"base genus {graph.invariants_g} > 0 adds to the genus sum of the trunk")
    s_min = graph.invariants_s[0]
    increment = None
    if s_min >= 2 * r:
        fired.append("s-obstruction")
        increment = 2 * r
        details.append(f"{s_min} exceptional fibres >= 2r = {2 * r}: s(L_t) >= s(N_t) + {2 * r}")
    if not fired:
        return Verdict("inconclusive", [], None, ["no obstruction fires at this level of detail"])
    return Verdict(_NAMES[fired[0]], fired, increment, details)


_NAMES = {"cycle-rank": "cycle-rank obstruction", "genus": "genus obstruction", "s-obstruction": "s-obstruction"}
