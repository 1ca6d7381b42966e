"""Random-graph benchmark instances and their LP relaxations.

Erdos-Renyi graphs feed four families: Min Vertex Cover, Max Independent
Set, Max Clique (on the complement edge set), and Max Flow on a random
digraph with integer capacities. Emission is deterministic per seed so the
MPS files are byte-reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from qlpbench.lp import (
    MAXIMIZE,
    MINIMIZE,
    ROW_EQ,
    ROW_GE,
    ROW_LE,
    LinearProgram,
    SparseMatrix,
)
from qlpbench.mps import write_mps

FAMILIES = ("vertex_cover", "independent_set", "max_clique", "max_flow")


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]          # undirected, u < v
    directed: bool = False
    capacities: tuple[float, ...] = ()          # parallel to edges when directed
    seed: int | None = None

    def __post_init__(self):
        seen = set()
        for (u, v) in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            key = (u, v) if self.directed else (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        if self.directed and len(self.capacities) != len(self.edges):
            raise ValueError("capacity count must match arc count")
        if any(c <= 0 for c in self.capacities):
            raise ValueError("capacities must be positive")

    def degree(self, u: int) -> int:
        return sum(1 for (a, b) in self.edges if u in (a, b))


def erdos_renyi(n: int, p: float, seed: int = 0) -> Graph:
    """Each unordered pair kept independently with probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must be in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    edges = tuple((int(a), int(b)) for a, b in zip(iu[keep], ju[keep]))
    return Graph(n=n, edges=edges, seed=seed)


def random_digraph(n: int, p: float, seed: int = 0,
                   cap_lo: int = 1, cap_hi: int = 10) -> Graph:
    """Directed ER graph with uniform integer capacities in [cap_lo, cap_hi]."""
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must be in [0, 1]")
    rng = np.random.Generator(np.random.PCG64(seed))
    arcs = []
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < p:
                arcs.append((u, v))
    caps = tuple(float(c) for c in rng.integers(cap_lo, cap_hi + 1,
                                                size=len(arcs)))
    return Graph(n=n, edges=tuple(arcs), directed=True, capacities=caps,
                 seed=seed)


def _edge_lp(g: Graph, edges, sense, row_type, name: str) -> LinearProgram:
    m = len(edges)
    entries = []
    for i, (u, v) in enumerate(edges):
        entries.append((i, u, 1.0))
        entries.append((i, v, 1.0))
    return LinearProgram(
        c=np.ones(g.n),
        A=SparseMatrix.from_triplets(m, g.n, entries),
        b=np.ones(m),
        sense=sense,
        row_types=[row_type] * m,
        lo=np.zeros(g.n),
        hi=np.ones(g.n),
        name=name,
    )


def lp_vertex_cover(g: Graph) -> LinearProgram:
    """min sum x, x_u + x_v >= 1 per edge, 0 <= x <= 1."""
    return _edge_lp(g, g.edges, MINIMIZE, ROW_GE, "vertex_cover")


def lp_independent_set(g: Graph) -> LinearProgram:
    """max sum x, x_u + x_v <= 1 per edge, 0 <= x <= 1."""
    return _edge_lp(g, g.edges, MAXIMIZE, ROW_LE, "independent_set")


def lp_max_clique(g: Graph) -> LinearProgram:
    """max sum x with the independent-set rows on every non-edge."""
    present = set(g.edges)
    non_edges = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)
                 if (u, v) not in present]
    return _edge_lp(g, non_edges, MAXIMIZE, ROW_LE, "max_clique")


def lp_max_flow(g: Graph, s: int = 0, t: int | None = None) -> LinearProgram:
    """max net flow into t; conservation rows for every vertex except s and t
    (those two are linearly dependent on the rest), capacity row per arc."""
    if not g.directed:
        raise ValueError("max flow needs a directed graph")
    if t is None:
        t = g.n - 1
    if s == t:
        raise ValueError("s and t must differ")
    arcs = g.edges
    n_arcs = len(arcs)
    interior = [v for v in range(g.n) if v not in (s, t)]
    row_of = {v: i for i, v in enumerate(interior)}
    entries = []
    for j, (u, v) in enumerate(arcs):
        if u in row_of:
            entries.append((row_of[u], j, 1.0))   # flow out of u
        if v in row_of:
            entries.append((row_of[v], j, -1.0))  # flow into v
    m = len(interior)
    c = np.zeros(n_arcs)
    for j, (u, v) in enumerate(arcs):
        if v == t:
            c[j] += 1.0
        if u == t:
            c[j] -= 1.0
    return LinearProgram(
        c=c,
        A=SparseMatrix.from_triplets(m, n_arcs, entries),
        b=np.zeros(m),
        sense=MAXIMIZE,
        row_types=[ROW_EQ] * m,
        lo=np.zeros(n_arcs),
        hi=np.array(g.capacities, dtype=float),
        name="max_flow",
    )


@dataclass(frozen=True)
class InstanceSpec:
    family: str
    n: int
    p: float
    seed: int

    @property
    def stem(self) -> str:
        return f"{self.family}_n{self.n}_p{self.p:g}_s{self.seed}"


def build_lp(spec: InstanceSpec) -> LinearProgram:
    if spec.family == "max_flow":
        g = random_digraph(spec.n, spec.p, spec.seed)
        return lp_max_flow(g)
    g = erdos_renyi(spec.n, spec.p, spec.seed)
    builder = {
        "vertex_cover": lp_vertex_cover,
        "independent_set": lp_independent_set,
        "max_clique": lp_max_clique,
    }.get(spec.family)
    if builder is None:
        raise ValueError(f"unknown family {spec.family!r}")
    return builder(g)


def emit_instance(spec: InstanceSpec, out_dir: str | Path) -> Path:
    """Write <stem>.mps plus a JSON sidecar; returns the MPS path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    lp = build_lp(spec)
    mps_path = out_dir / f"{spec.stem}.mps"
    mps_path.write_text(write_mps(lp, name=spec.stem))
    sidecar = out_dir / f"{spec.stem}.json"
    sidecar.write_text(json.dumps(
        {"family": spec.family, "n": spec.n, "p": spec.p, "seed": spec.seed},
        indent=2) + "\n")
    return mps_path
