"""Instance parsing, serialization, and generators.

Two text formats are supported:

- the canonical format: a header line ``ecc <num_nodes> <num_edges> <num_colors>``
  followed by one line per edge, ``<color> <weight> <node ids...>`` with 0-based
  ids; lines starting with ``#`` are ignored;
- the published benchmark two-file format: an edges file with one
  whitespace/comma-separated list of 1-based node ids per line, a labels file
  with one integer color per line, and an optional node-label file holding the
  ground-truth node colors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import EdgeColoredHypergraph, hypergraph


class ParseError(ValueError):
    """Malformed instance text; ``line`` is the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


def _format_weight(w: float) -> str:
    if w == int(w) and abs(w) < 1e15:
        return str(int(w))
    return repr(w)


def write_canonical(h: EdgeColoredHypergraph) -> str:
    """Serialize to canonical text; edges in index order, members sorted."""
    lines = [f"ecc {h.num_nodes} {len(h.edges)} {h.num_colors}"]
    for e in h.edges:
        ids = " ".join(str(v) for v in e.members)
        lines.append(f"{e.color} {_format_weight(e.weight)} {ids}")
    return "\n".join(lines) + "\n"


def parse_canonical(text: str) -> EdgeColoredHypergraph:
    """Parse canonical text, raising :class:`ParseError` with a line number."""
    header: tuple[int, int, int] | None = None
    edges: list[tuple[tuple[int, ...], int, float]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) != 4 or tokens[0] != "ecc":
                raise ParseError("expected header 'ecc <nodes> <edges> <colors>'", lineno)
            try:
                header = (int(tokens[1]), int(tokens[2]), int(tokens[3]))
            except ValueError:
                raise ParseError("non-integer header field", lineno) from None
            if min(header) < 0:
                raise ParseError("negative header field", lineno)
            continue
        n, m, k = header
        if len(edges) >= m:
            raise ParseError(f"more than the declared {m} edges", lineno)
        if len(tokens) < 3:
            raise ParseError("edge line needs '<color> <weight> <ids...>'", lineno)
        try:
            color = int(tokens[0])
            weight = float(tokens[1])
            members = tuple(int(t) for t in tokens[2:])
        except ValueError:
            raise ParseError("bad token in edge line", lineno) from None
        if not (1 <= color <= k):
            raise ParseError(f"color {color} out of range [1, {k}]", lineno)
        if not (weight >= 0.0) or weight != weight or weight == float("inf"):
            raise ParseError(f"weight {tokens[1]} is not a nonnegative finite number", lineno)
        for v in members:
            if not (0 <= v < n):
                raise ParseError(f"node id {v} out of range [0, {n})", lineno)
        edges.append((members, color, weight))
    if header is None:
        raise ParseError("empty input, no header found")
    n, m, k = header
    if len(edges) != m:
        raise ParseError(f"header declares {m} edges but file has {len(edges)}")
    return hypergraph(n, k, edges)


def _int_tokens(raw: str, lineno: int, what: str) -> list[int]:
    try:
        return [int(t) for t in raw.replace(",", " ").split()]
    except ValueError:
        raise ParseError(f"non-integer token in {what}", lineno) from None


def parse_benchmark(
    edges_text: str,
    labels_text: str,
    node_labels_text: str | None = None,
) -> tuple[EdgeColoredHypergraph, list[int] | None]:
    """Parse the benchmark two-file format, returning ``(instance, truth-or-None)``.

    Node ids are 1-based in the files and shifted to 0-based; all edges get unit
    weight; the number of colors is the maximum label observed.
    """
    edge_lines = [
        (i, line) for i, line in enumerate(edges_text.splitlines(), start=1) if line.strip()
    ]
    label_lines = [
        (i, line) for i, line in enumerate(labels_text.splitlines(), start=1) if line.strip()
    ]
    if len(edge_lines) != len(label_lines):
        raise ParseError(
            f"edges file has {len(edge_lines)} lines but labels file has {len(label_lines)}"
        )
    members_per_edge: list[list[int]] = []
    max_id = 0
    for lineno, raw in edge_lines:
        ids = _int_tokens(raw, lineno, "edges file")
        if not ids:
            raise ParseError("empty edge", lineno)
        if min(ids) < 1:
            raise ParseError("node ids are 1-based; found id < 1", lineno)
        max_id = max(max_id, max(ids))
        members_per_edge.append(ids)
    colors: list[int] = []
    for lineno, raw in label_lines:
        tokens = _int_tokens(raw, lineno, "labels file")
        if len(tokens) != 1:
            raise ParseError("expected one label per line", lineno)
        if tokens[0] < 1:
            raise ParseError("labels are 1-based; found label < 1", lineno)
        colors.append(tokens[0])

    truth: list[int] | None = None
    num_colors = max(colors, default=0)
    num_nodes = max_id
    if node_labels_text is not None:
        truth = []
        for lineno, raw in enumerate(node_labels_text.splitlines(), start=1):
            if not raw.strip():
                continue
            tokens = _int_tokens(raw, lineno, "node labels file")
            if len(tokens) != 1:
                raise ParseError("expected one node label per line", lineno)
            truth.append(tokens[0])
        num_nodes = max(num_nodes, len(truth))
        if len(truth) != num_nodes:
            raise ParseError(
                f"node labels file has {len(truth)} lines but instance has {num_nodes} nodes"
            )
        num_colors = max(num_colors, max(truth, default=0))

    edges = [
        (tuple(v - 1 for v in members), color)
        for members, color in zip(members_per_edge, colors)
    ]
    return hypergraph(num_nodes, num_colors, edges), truth


def gen_integrality_gap(k: int) -> EdgeColoredHypergraph:
    """Worst-case LP instance: one edge per color, one shared node per edge pair.

    For ``k >= 3`` this builds C(k,2) nodes indexed by color pairs ``(i, j)``;
    node ``(i, j)`` lies in edges ``i`` and ``j``, every edge has ``k - 1``
    members and unit weight. The best coloring mis-colors all but one edge while
    the fractional relaxation achieves ``k / 2``.
    """
    if k < 3:
        raise ValueError("gap construction needs k >= 3")
    pair_index: dict[tuple[int, int], int] = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            pair_index[(i, j)] = len(pair_index)
    edges = []
    for c in range(1, k + 1):
        members = [idx for (i, j), idx in pair_index.items() if c in (i, j)]
        edges.append((tuple(members), c, 1.0))
    return hypergraph(len(pair_index), k, edges)


def gen_star() -> EdgeColoredHypergraph:
    """Three-leaf star with one edge per color; node 0 is the center."""
    edges = [((0, i), i, 1.0) for i in (1, 2, 3)]
    return hypergraph(4, 3, edges)


@dataclass(frozen=True)
class PlantedInstance:
    """A generated instance together with the planted ground-truth coloring."""

    hypergraph: EdgeColoredHypergraph
    truth: list[int]
    noise: float


def gen_random(
    n: int,
    m: int,
    max_size: int,
    k: int,
    noise: float,
    seed: int,
) -> PlantedInstance:
    """Random planted instance: one cluster per color, deterministic per seed.

    Each node gets a uniform truth color. Each edge draws a size in
    ``[2..max_size]`` and a cluster, takes its members from that cluster (the
    size is clamped to the cluster when the cluster is smaller; clusters with
    fewer than two nodes are not used unless no usable cluster exists, in which
    case members are drawn uniformly from all nodes), and is colored by the
    cluster; with probability ``noise`` the edge color is redrawn uniformly.
    """
    if n < 1 or m < 1:
        raise ValueError("need n >= 1 and m >= 1")
    if max_size < 2:
        raise ValueError("need max_size >= 2")
    if k < 1:
        raise ValueError("need k >= 1")
    if not (0.0 <= noise <= 1.0):
        raise ValueError("noise must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    truth = rng.integers(1, k + 1, size=n)
    clusters = [np.flatnonzero(truth == c) for c in range(1, k + 1)]
    usable = [c for c in range(k) if len(clusters[c]) >= 2]
    all_nodes = np.arange(n)

    sizes = rng.integers(2, max_size + 1, size=m)
    chosen = rng.integers(0, k, size=m)
    noisy = rng.random(m) < noise
    resampled = rng.integers(1, k + 1, size=m)

    edges = []
    for idx in range(m):
        c = int(chosen[idx])
        if len(clusters[c]) < 2 and usable:
            c = usable[c % len(usable)]
        pool = clusters[c] if len(clusters[c]) >= 2 else all_nodes
        size = int(min(sizes[idx], len(pool)))
        members = _sample_distinct(rng, pool, size)
        color = int(resampled[idx]) if noisy[idx] else c + 1
        edges.append((tuple(int(v) for v in members), color, 1.0))
    h = hypergraph(n, k, edges)
    return PlantedInstance(h, [int(t) for t in truth], noise)


def _sample_distinct(rng: np.random.Generator, pool: np.ndarray, size: int) -> np.ndarray:
    if size >= len(pool):
        return pool
    if len(pool) <= 64:
        return rng.choice(pool, size=size, replace=False)
    # Large pool, tiny sample: rejection is far cheaper than a full permutation.
    while True:
        picks = pool[rng.integers(0, len(pool), size=size)]
        if len(set(picks.tolist())) == size:
            return picks
