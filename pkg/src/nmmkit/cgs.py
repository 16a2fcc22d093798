"""Coreference-based graph search.

A Coreference Primary Term Graph (CPTG) is a DAG of ``term -> term``
coreference edges whose sinks of interest are designated *primary terms*.
Resolution maps every term to the primary term reached by walking
downstream; in weighted mode each step follows the heaviest out-edge.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

logger = logging.getLogger(__name__)

FOUNDATIONAL = "foundational"
WEIGHTED = "weighted"


class CgsError(ValueError):
    pass


class CycleError(CgsError):
    def __init__(self, cycle: list[str]):
        super().__init__("coreference graph has a cycle: " + " -> ".join(cycle))
        self.cycle = cycle


class PrimaryOutEdgeError(CgsError):
    def __init__(self, term: str, targets: list[str]):
        super().__init__(f"primary term {term!r} has outgoing edges to {targets}")
        self.term = term


class BranchingNodeError(CgsError):
    def __init__(self, term: str, targets: list[str]):
        super().__init__(f"node {term!r} branches to {targets}; use weighted mode")
        self.term = term


@dataclass
class Cptg:
    nodes: frozenset[str]
    edges: dict[str, dict[str, float]]
    primaries: frozenset[str]
    mode: str = WEIGHTED
    warnings: list[str] = field(default_factory=list)
    _resolution: dict[str, str] | None = field(default=None, init=False, repr=False, compare=False)

    def successors(self, term: str) -> dict[str, float]:
        return self.edges.get(term, {})

    def next_term(self, term: str) -> str | None:
        """Downstream step: heaviest out-edge, ties to the smallest target."""
        out = self.successors(term)
        if not out:
            return None
        return min(out, key=lambda t: (-out[t], t))

    @property
    def resolution(self) -> dict[str, str]:
        if self._resolution is None:
            self._resolution = resolve_all(self)
        return self._resolution

    def path(self, term: str) -> list[str]:
        """Walk taken from ``term`` until a primary or a dead end."""
        if term not in self.nodes:
            return []
        walk = [term]
        while walk[-1] not in self.primaries:
            nxt = self.next_term(walk[-1])
            if nxt is None:
                break
            walk.append(nxt)
        return walk


def _find_cycle(nodes, edges) -> list[str] | None:
    WHITE, GREY, BLACK = 0, 1, 2
    color = dict.fromkeys(nodes, WHITE)
    for root in sorted(nodes):
        if color[root] != WHITE:
            continue
        stack = [(root, iter(sorted(edges.get(root, {}))))]
        trail = [root]
        color[root] = GREY
        while stack:
            node, it = stack[-1]
            for nxt in it:
                if color[nxt] == GREY:
                    return trail[trail.index(nxt):] + [nxt]
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    trail.append(nxt)
                    stack.append((nxt, iter(sorted(edges.get(nxt, {})))))
                    break
            else:
                color[node] = BLACK
                trail.pop()
                stack.pop()
    return None


def build_graph(edges, primaries, mode: str = WEIGHTED, nodes=()) -> Cptg:
    """Build and validate a CPTG.

    ``edges`` holds ``(from, to)`` or ``(from, to, weight)`` tuples; weight
    defaults to 1 and is ignored in foundational mode. Duplicate edges keep
    the larger weight.
    """
    if mode not in (FOUNDATIONAL, WEIGHTED):
        raise CgsError(f"unknown mode: {mode!r}")
    adj: dict[str, dict[str, float]] = {}
    all_nodes = set(nodes) | set(primaries)
    warnings = []
    for edge in edges:
        if len(edge) == 2:
            src, dst = edge
            weight = 1.0
        else:
            src, dst, weight = edge
            weight = 1.0 if weight is None else float(weight)
        if not weight > 0:
            raise CgsError(f"edge {src!r} -> {dst!r} has non-positive weight {weight}")
        all_nodes.update((src, dst))
        out = adj.setdefault(src, {})
        if dst in out:
            warnings.append(f"duplicate edge {src!r} -> {dst!r}; keeping weight {max(out[dst], weight)}")
            weight = max(out[dst], weight)
        out[dst] = weight
    for w in warnings:
        logger.warning(w)

    cycle = _find_cycle(all_nodes, adj)
    if cycle:
        raise CycleError(cycle)
    for p in sorted(primaries):
        if adj.get(p):
            raise PrimaryOutEdgeError(p, sorted(adj[p]))
    if mode == FOUNDATIONAL:
        for src in sorted(adj):
            if len(adj[src]) > 1:
                raise BranchingNodeError(src, sorted(adj[src]))
    return Cptg(frozenset(all_nodes), adj, frozenset(primaries), mode, warnings)


def resolve_all(g: Cptg) -> dict[str, str]:
    """Precompute term -> ultimate primary term for every node.

    Each node is resolved once and downstream results are reused. Nodes
    whose walk ends at a non-primary sink are left out.
    """
    memo: dict[str, str | None] = {}
    for start in sorted(g.nodes):
        trail = []
        node = start
        while node not in memo:
            if node in g.primaries:
                memo[node] = node
                break
            nxt = g.next_term(node)
            if nxt is None:
                memo[node] = None
                break
            trail.append(node)
            node = nxt
        result = memo[node]
        for t in trail:
            memo[t] = result
    return {t: p for t, p in sorted(memo.items()) if p is not None}


def resolve(g_or_dict: Cptg | dict[str, str], term: str) -> str | None:
    table = g_or_dict.resolution if isinstance(g_or_dict, Cptg) else g_or_dict
    return table.get(term)


def read_edge_list(path: str | Path) -> list[tuple[str, str, float]]:
    """Read ``from<TAB>to<TAB>weight?`` lines; ``#`` starts a comment line."""
    edges = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) not in (2, 3) or not parts[0] or not parts[1]:
                raise CgsError(f"{path}:{lineno}: expected 'from<TAB>to[<TAB>weight]'")
            weight = float(parts[2]) if len(parts) == 3 and parts[2].strip() else 1.0
            edges.append((parts[0], parts[1], weight))
    return edges


def read_primaries(path: str | Path) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
