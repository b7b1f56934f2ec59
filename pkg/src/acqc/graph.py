"""Unit-disk graph instances for independent-set annealing.

Instances are sets of atom positions in the plane. Two atoms are adjacent
when their distance is at most the blockade radius, so the graph is always
re-derived from geometry and never stored explicitly. Instance generation
places atoms on randomly chosen crossings of a square grid, which with the
default spacing and blockade radius yields King's-lattice subgraphs
(nearest and diagonal neighbors connected).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .constants import SPACING_DEFAULT, UNIT_CONVENTION, default_blockade_radius
from .errors import DimensionError

if TYPE_CHECKING:  # pragma: no cover - import only for annotations
    from .hamiltonian import InteractionMatrix

__all__ = [
    "GridSpec",
    "CostParams",
    "UnitDiskGraph",
    "MisSolution",
    "GapConditionReport",
    "generate_kings_graph",
    "cost_energy",
    "is_independent",
    "solve_mis_exact",
    "mis_size_by_enumeration",
    "check_gap_condition",
    "save_graph",
    "load_graph",
]

MIS_SOLVER_VERTEX_CAP = 32
WITNESS_CAP = 1024


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridSpec:
    """Parameters for seeded placement of atoms on a square grid.

    Attributes:
        rows: number of grid rows.
        cols: number of grid columns.
        n_nodes: how many distinct crossings receive an atom.
        spacing: lattice constant in um.
        seed: seed for the placement generator.
    """

    rows: int
    cols: int
    n_nodes: int
    spacing: float = SPACING_DEFAULT
    seed: int = 0

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("grid must have at least one row and one column")
        if self.spacing <= 0:
            raise ValueError("grid spacing must be positive")
        if self.n_nodes < 1:
            raise ValueError("n_nodes must be at least 1")
        if self.n_nodes > self.rows * self.cols:
            raise ValueError(
                f"cannot place {self.n_nodes} atoms on a "
                f"{self.rows} x {self.cols} grid with only "
                f"{self.rows * self.cols} crossings"
            )


@dataclass(frozen=True)
class CostParams:
    """Coefficients of the independent-set cost function.

    The classical cost of a configuration x is

        penalty * sum_{(u,v) in E} x_u x_v - reward * sum_v x_v

    so edges are penalized and occupied vertices rewarded. Maximum
    independent sets are the global minima whenever penalty > reward > 0.
    Serialized as {"A": penalty, "B": reward}.
    """

    penalty: float = 2.0
    reward: float = 1.0

    def __post_init__(self):
        if not (self.penalty > self.reward > 0):
            raise ValueError(
                f"cost requires penalty > reward > 0, got "
                f"penalty={self.penalty}, reward={self.reward}"
            )

    def to_dict(self) -> dict:
        return {"A": self.penalty, "B": self.reward}

    @classmethod
    def from_dict(cls, d: dict) -> "CostParams":
        return cls(penalty=float(d["A"]), reward=float(d["B"]))


@dataclass(frozen=True)
class UnitDiskGraph:
    """Atoms in the plane with edges derived from the blockade radius.

    Edges connect every pair at distance <= blockade_radius and are computed
    at construction; they are a property of the geometry, not independent
    data. Vertex i corresponds to qubit i everywhere in the package.

    Attributes:
        positions: atom coordinates in um.
        blockade_radius: adjacency cutoff in um.
        seed: placement seed, if the instance came from a generator.
        grid: placement grid, if the instance came from a generator.
    """

    positions: tuple[tuple[float, float], ...]
    blockade_radius: float
    seed: int | None = None
    grid: GridSpec | None = None
    edges: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        pos = tuple((float(x), float(y)) for x, y in self.positions)
        object.__setattr__(self, "positions", pos)
        if self.blockade_radius <= 0:
            raise ValueError("blockade_radius must be positive")
        if len(set(pos)) != len(pos):
            raise ValueError("duplicate atom positions are not allowed")
        edges = []
        for u in range(len(pos)):
            xu, yu = pos[u]
            for v in range(u + 1, len(pos)):
                xv, yv = pos[v]
                if math.hypot(xu - xv, yu - yv) <= self.blockade_radius:
                    edges.append((u, v))
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def n_vertices(self) -> int:
        return len(self.positions)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def distance(self, u: int, v: int) -> float:
        xu, yu = self.positions[u]
        xv, yv = self.positions[v]
        return math.hypot(xu - xv, yu - yv)

    def neighbor_masks(self) -> list[int]:
        """Adjacency as per-vertex bitmasks (bit v set when v is adjacent)."""
        masks = [0] * self.n_vertices
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks


@dataclass(frozen=True)
class MisSolution:
    """Maximum independent set size with the optimal witnesses.

    Attributes:
        size: cardinality of a maximum independent set.
        witnesses: all optimal configurations as bitstrings (character i is
            vertex i), capped at WITNESS_CAP entries.
        energy: cost of any witness, equal to -reward * size.
        truncated: True when more witnesses exist than were stored.
    """

    size: int
    witnesses: tuple[str, ...]
    energy: float
    truncated: bool = False


@dataclass(frozen=True)
class GapConditionReport:
    """Outcome of the final-detuning feasibility inequality.

    The check compares (n_vertices - n_edges) * delta2 against the total
    interaction strength on the graph edges. When the left side is smaller,
    the final detuning is weak enough that breaking blockade on an edge
    never pays, so independent sets remain the low-energy configurations.
    """

    lhs: float
    rhs: float
    condition_met: bool
    n_vertices: int
    n_edges: int
    vertex_excess: bool


# ---------------------------------------------------------------------------
# Generation
# ---------------------------------------------------------------------------


def generate_kings_graph(
    spec: GridSpec, blockade_radius: float | None = None
) -> UnitDiskGraph:
    """Place atoms on random distinct grid crossings.

    Crossing (r, c) maps to position (c * spacing, r * spacing). Vertices
    are labeled in row-major grid order, so a fixed seed yields an
    identical instance on every platform.

    Args:
        spec: grid shape, atom count, and seed.
        blockade_radius: adjacency cutoff; defaults to the distance where
            the pair interaction equals the default peak Rabi amplitude
            (about 8.44 um, covering nearest and diagonal grid neighbors).

    Returns:
        The generated graph, carrying the seed and grid for provenance.
    """
    radius = default_blockade_radius() if blockade_radius is None else blockade_radius
    rng = np.random.default_rng(spec.seed)
    chosen = rng.choice(spec.rows * spec.cols, size=spec.n_nodes, replace=False)
    chosen = np.sort(chosen)
    positions = tuple(
        (float((idx % spec.cols) * spec.spacing), float((idx // spec.cols) * spec.spacing))
        for idx in chosen
    )
    return UnitDiskGraph(
        positions=positions, blockade_radius=radius, seed=spec.seed, grid=spec
    )


# ---------------------------------------------------------------------------
# Cost evaluation
# ---------------------------------------------------------------------------


def _as_bits(graph: UnitDiskGraph, bitstring: str | Sequence[int]) -> list[int]:
    if isinstance(bitstring, str):
        if any(ch not in "01" for ch in bitstring):
            raise ValueError(f"bitstring may contain only 0 and 1: {bitstring!r}")
        bits = [int(ch) for ch in bitstring]
    else:
        bits = [int(b) for b in bitstring]
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bit values must be 0 or 1")
    if len(bits) != graph.n_vertices:
        raise DimensionError(
            f"bitstring length {len(bits)} does not match "
            f"{graph.n_vertices} vertices"
        )
    return bits


def cost_energy(
    graph: UnitDiskGraph, bitstring: str | Sequence[int], params: CostParams
) -> float:
    """Classical cost of a configuration (edge penalties minus vertex rewards)."""
    bits = _as_bits(graph, bitstring)
    conflicts = sum(bits[u] * bits[v] for u, v in graph.edges)
    occupied = sum(bits)
    return params.penalty * conflicts - params.reward * occupied


def is_independent(graph: UnitDiskGraph, bitstring: str | Sequence[int]) -> bool:
    """Whether no edge has both endpoints occupied."""
    bits = _as_bits(graph, bitstring)
    return all(not (bits[u] and bits[v]) for u, v in graph.edges)


# ---------------------------------------------------------------------------
# Exact maximum independent set
# ---------------------------------------------------------------------------


def _mask_to_bitstring(mask: int, n: int) -> str:
    return "".join("1" if (mask >> i) & 1 else "0" for i in range(n))


def _greedy_lower_bound(masks: list[int], full: int) -> int:
    """Size of the independent set built by repeated min-degree selection."""
    cand = full
    size = 0
    while cand:
        best_v = -1
        best_deg = None
        m = cand
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            deg = (masks[v] & cand).bit_count()
            if best_deg is None or deg < best_deg:
                best_deg = deg
                best_v = v
        size += 1
        cand &= ~(masks[best_v] | (1 << best_v))
    return size


def solve_mis_exact(
    graph: UnitDiskGraph,
    params: CostParams | None = None,
    *,
    max_vertices: int = MIS_SOLVER_VERTEX_CAP,
    witness_cap: int = WITNESS_CAP,
) -> MisSolution:
    """Branch-and-bound maximum independent set with full witness collection.

    Branches on the highest-degree remaining vertex (include first, then
    exclude), prunes with the trivial size + remaining bound, and starts
    from a greedy lower bound. Pruning is strict, so every optimal witness
    is reached; ties at the incumbent size are always explored.

    Args:
        graph: instance to solve.
        params: cost coefficients used for the reported energy.
        max_vertices: refuse instances larger than this.
        witness_cap: stop storing witnesses beyond this count (the search
            still continues and the cap breach is flagged, not raised).

    Returns:
        MisSolution with all witnesses up to the cap.
    """
    if params is None:
        params = CostParams()
    n = graph.n_vertices
    if n > max_vertices:
        raise ValueError(
            f"instance has {n} vertices, above the exact-solver cap {max_vertices}"
        )
    if n == 0:
        return MisSolution(size=0, witnesses=("",), energy=0.0)

    masks = graph.neighbor_masks()
    full = (1 << n) - 1
    best = _greedy_lower_bound(masks, full)
    witnesses: list[int] = []
    truncated = False

    def pick_branch_vertex(cand: int) -> int:
        # Highest degree within the candidate set, lowest index on ties.
        best_v = -1
        best_deg = -1
        m = cand
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            deg = (masks[v] & cand).bit_count()
            if deg > best_deg:
                best_deg = deg
                best_v = v
        return best_v

    def expand(cand: int, current: int, size: int):
        nonlocal best, witnesses, truncated
        if cand == 0:
            if size > best:
                best = size
                witnesses = [current]
                truncated = False
            elif size == best:
                if len(witnesses) < witness_cap:
                    witnesses.append(current)
                else:
                    truncated = True
            return
        if size + cand.bit_count() < best:
            return
        v = pick_branch_vertex(cand)
        bit = 1 << v
        expand(cand & ~(masks[v] | bit), current | bit, size + 1)
        expand(cand & ~bit, current, size)

    expand(full, 0, 0)

    return MisSolution(
        size=best,
        witnesses=tuple(sorted(_mask_to_bitstring(w, n) for w in witnesses)),
        energy=-params.reward * best,
        truncated=truncated,
    )


def mis_size_by_enumeration(graph: UnitDiskGraph) -> int:
    """Maximum independent set size by exhaustive subset enumeration.

    Deliberately independent of the branch-and-bound solver; used as a
    cross-check. Limited to 20 vertices.
    """
    n = graph.n_vertices
    if n > 20:
        raise ValueError("exhaustive enumeration is capped at 20 vertices")
    if n == 0:
        return 0
    idx = np.arange(1 << n, dtype=np.int64)
    bits = ((idx[:, None] >> np.arange(n)) & 1).astype(np.int8)
    ok = np.ones(1 << n, dtype=bool)
    for u, v in graph.edges:
        ok &= ~((bits[:, u] & bits[:, v]).astype(bool))
    sizes = bits.sum(axis=1)
    return int(sizes[ok].max())


# ---------------------------------------------------------------------------
# Feasibility of the final Hamiltonian
# ---------------------------------------------------------------------------


def check_gap_condition(
    graph: UnitDiskGraph,
    delta2: float,
    interactions: "InteractionMatrix | np.ndarray",
) -> GapConditionReport:
    """Evaluate (n_vertices - n_edges) * delta2 < sum of edge interactions.

    Args:
        graph: instance under test.
        delta2: final detuning in rad/us (positive).
        interactions: pair interaction matrix for the same atom layout,
            either the InteractionMatrix type or a bare (n, n) array.

    Returns:
        Report with both sides of the inequality. The condition is trivially
        satisfied when the graph has at least as many edges as vertices,
        which the vertex_excess flag makes explicit.
    """
    j = np.asarray(getattr(interactions, "values", interactions), dtype=float)
    if j.shape != (graph.n_vertices, graph.n_vertices):
        raise DimensionError(
            f"interaction matrix shape {j.shape} does not match "
            f"{graph.n_vertices} vertices"
        )
    lhs = (graph.n_vertices - graph.n_edges) * delta2
    rhs = float(sum(j[u, v] for u, v in graph.edges))
    return GapConditionReport(
        lhs=float(lhs),
        rhs=rhs,
        condition_met=bool(lhs < rhs),
        n_vertices=graph.n_vertices,
        n_edges=graph.n_edges,
        vertex_excess=graph.n_vertices > graph.n_edges,
    )


# ---------------------------------------------------------------------------
# Persistence
# ---------------------------------------------------------------------------


def save_graph(graph: UnitDiskGraph, path: str | Path) -> None:
    """Write the instance as JSON (positions and radius; edges are derived)."""
    doc: dict = {
        "units": UNIT_CONVENTION,
        "positions": [[x, y] for x, y in graph.positions],
        "blockade_radius": graph.blockade_radius,
        "seed": graph.seed,
        "grid": None,
    }
    if graph.grid is not None:
        doc["grid"] = {
            "rows": graph.grid.rows,
            "cols": graph.grid.cols,
            "n_nodes": graph.grid.n_nodes,
            "spacing": graph.grid.spacing,
            "seed": graph.grid.seed,
        }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_graph(path: str | Path) -> UnitDiskGraph:
    """Read an instance written by save_graph, re-deriving the edges.

    Any edge list present in the file is ignored; adjacency always comes
    from positions and radius.
    """
    doc = json.loads(Path(path).read_text())
    grid = None
    if doc.get("grid"):
        g = doc["grid"]
        grid = GridSpec(
            rows=int(g["rows"]),
            cols=int(g["cols"]),
            n_nodes=int(g["n_nodes"]),
            spacing=float(g["spacing"]),
            seed=int(g["seed"]),
        )
    seed = doc.get("seed")
    return UnitDiskGraph(
        positions=tuple((float(x), float(y)) for x, y in doc["positions"]),
        blockade_radius=float(doc["blockade_radius"]),
        seed=None if seed is None else int(seed),
        grid=grid,
    )
