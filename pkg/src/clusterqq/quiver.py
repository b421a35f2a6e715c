"""Finite windows of the infinite quivers attached to a Cartan matrix.

Vertices are pairs ``(i, r)`` with ``i`` a Dynkin node and ``r`` an integer
spectral exponent, restricted to one parity component: ``r`` must be
congruent mod 2 to the parity class of ``i``.  The basic quiver has arrows
``(i, r) -> (j, r + c_ij)`` for ``c_ij != 0`` (including the vertical
up-arrows ``(i, r) -> (i, r+2)``).

``insert_reflection`` performs the four-step local surgery that creates a
red/green pair: split the vertical arrow below the chosen vertex, reroute
the oblique arrows leaving it to the new vertex, and relabel the rest of
the column downward by 2 so vertex ids stay in the fixed parity component.
Iterating it along a reduced word builds the initial-seed quivers; doing it
at every vertex of the finite starting pattern of a Coxeter element builds
the Coxeter quiver, normalized so its highest red vertex has height 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .rootsys import CoxeterDatum, RootSystem, coxeter_data, parse_orientation

Vertex = tuple[int, int]
Arrow = tuple[Vertex, Vertex]

RED = "red"
GREEN = "green"
BLACK = "black"


class MarginError(ValueError):
    """An operation reached too close to the window boundary."""


@dataclass(frozen=True)
class WindowedQuiver:
    rs: RootSystem
    rmin: int
    rmax: int
    parity: tuple[int, ...]
    vertices: frozenset[Vertex]
    arrows: tuple[tuple[Arrow, int], ...]  # sorted ((src, dst), multiplicity)
    colors: tuple[tuple[Vertex, str], ...]  # only non-black entries, sorted
    frozen: frozenset[Vertex] = field(default_factory=frozenset)
    margin: int = 2

    # -- convenience accessors --------------------------------------------

    def arrow_dict(self) -> dict[Arrow, int]:
        return dict(self.arrows)

    def color_dict(self) -> dict[Vertex, str]:
        return dict(self.colors)

    def color(self, v: Vertex) -> str:
        return self.color_dict().get(v, BLACK)

    def mult(self, src: Vertex, dst: Vertex) -> int:
        return self.arrow_dict().get((src, dst), 0)

    def arrows_out(self, v: Vertex) -> list[tuple[Vertex, int]]:
        return [(b, m) for (a, b), m in self.arrows if a == v]

    def arrows_in(self, v: Vertex) -> list[tuple[Vertex, int]]:
        return [(a, m) for (a, b), m in self.arrows if b == v]

    def reds(self) -> list[Vertex]:
        return sorted(v for v, c in self.colors if c == RED)

    def greens(self) -> list[Vertex]:
        return sorted(v for v, c in self.colors if c == GREEN)

    def in_component(self, v: Vertex) -> bool:
        i, r = v
        return 1 <= i <= self.rs.n and (r - self.parity[i - 1]) % 2 == 0

    def in_window(self, v: Vertex) -> bool:
        return self.in_component(v) and self.rmin <= v[1] <= self.rmax

    def relabeled(self, mapping: Mapping[Vertex, Vertex]) -> "WindowedQuiver":
        """Apply a vertex relabeling (identity outside the mapping)."""

        def f(v: Vertex) -> Vertex:
            return mapping.get(v, v)

        return _make(
            self,
            vertices={f(v) for v in self.vertices},
            arrows={(f(a), f(b)): m for (a, b), m in self.arrows},
            colors={f(v): c for v, c in self.colors},
            frozen={f(v) for v in self.frozen},
        )

    def same_arrows(self, other: "WindowedQuiver") -> bool:
        return self.vertices == other.vertices and self.arrows == other.arrows


def _make(
    base: WindowedQuiver,
    *,
    vertices: Iterable[Vertex] | None = None,
    arrows: Mapping[Arrow, int] | None = None,
    colors: Mapping[Vertex, str] | None = None,
    frozen: Iterable[Vertex] | None = None,
) -> WindowedQuiver:
    verts = frozenset(vertices) if vertices is not None else base.vertices
    arr = dict(base.arrows) if arrows is None else dict(arrows)
    col = dict(base.colors) if colors is None else dict(colors)
    frz = frozenset(frozen) if frozen is not None else base.frozen
    arr = {k: m for k, m in arr.items() if m > 0 and k[0] in verts and k[1] in verts}
    col = {v: c for v, c in col.items() if v in verts and c != BLACK}
    return replace(
        base,
        vertices=verts,
        arrows=tuple(sorted(arr.items())),
        colors=tuple(sorted(col.items())),
        frozen=frz & verts,
    )


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def basic_quiver(
    rs: RootSystem,
    rmin: int,
    rmax: int,
    parity: Sequence[int] | None = None,
    margin: int = 2,
) -> WindowedQuiver:
    """Window of the basic quiver: arrows (i,r) -> (j, r + c_ij)."""
    if rmin >= rmax:
        raise ValueError("empty window: need rmin < rmax")
    par = tuple(parity) if parity is not None else rs.bipartition_class()
    vertices = {
        (i, r)
        for i in range(1, rs.n + 1)
        for r in range(rmin, rmax + 1)
        if (r - par[i - 1]) % 2 == 0
    }
    arrows: dict[Arrow, int] = {}
    for i, r in vertices:
        for j in range(1, rs.n + 1):
            cij = rs.cartan[i - 1][j - 1]
            if cij == 0 and i != j:
                continue
            s = r + cij
            if (j, s) in vertices:
                arrows[((i, r), (j, s))] = 1
    proto = WindowedQuiver(
        rs, rmin, rmax, par, frozenset(), (), (), frozenset(), margin
    )
    return _make(proto, vertices=vertices, arrows=arrows, colors={})


def insert_reflection(q: WindowedQuiver, v: Vertex) -> WindowedQuiver:
    """Create a red/green pair at ``v`` by the four-step vertical surgery."""
    i, r = v
    if v not in q.vertices:
        raise ValueError(f"vertex {v} not in window")
    if q.color(v) != BLACK:
        raise ValueError(f"vertex {v} already colored {q.color(v)}")
    if r - q.rmin <= q.margin:
        raise MarginError(f"insertion at {v} too close to window bottom")

    below = (i, r - 2)
    # (iv) relabel the column below v down by 2 (dropping out-of-window ids)
    mapping = {
        (i, s): (i, s - 2) for (ii, s) in q.vertices if ii == i and s <= r - 2
    }
    vertices = {mapping.get(u, u) for u in q.vertices}
    vertices = {u for u in vertices if u[1] >= q.rmin}
    arrows = {
        (mapping.get(a, a), mapping.get(b, b)): m for (a, b), m in q.arrows
    }
    arrows = {
        (a, b): m for (a, b), m in arrows.items() if a in vertices and b in vertices
    }
    colors = {mapping.get(u, u): c for u, c in q.colors}

    # (i)+(ii) split the vertical arrow into red -> green <- lower column
    old_below = (i, r - 4)  # relabeled id of the former (i, r-2)
    arrows.pop((old_below, v), None)
    if old_below in vertices:
        arrows[(old_below, below)] = 1
    arrows[(v, below)] = 1
    vertices.add(below)

    # (iii) reroute oblique arrows leaving v so they leave the new vertex
    for (a, b), m in list(arrows.items()):
        if a == v and b[0] != i:
            del arrows[(a, b)]
            arrows[(below, b)] = arrows.get((below, b), 0) + m

    colors[v] = RED
    colors[below] = GREEN
    return _make(q, vertices=vertices, arrows=arrows, colors=colors)


def build_seed_quiver(
    rs: RootSystem,
    word: Sequence[int],
    heights: Sequence[int],
    rmin: int | None = None,
    rmax: int | None = None,
    parity: Sequence[int] | None = None,
    margin: int = 2,
) -> WindowedQuiver:
    """Initial-seed quiver for a reduced word, inserting top-down.

    ``heights[t]`` is the label of the t-th red vertex in the finished
    quiver; since the construction descends, it is also the literal
    insertion coordinate at step t.
    """
    from .rootsys import is_reduced

    word = tuple(word)
    heights = tuple(heights)
    if len(word) != len(heights):
        raise ValueError("word and heights must have equal length")
    if not is_reduced(rs, word):
        raise ValueError(f"word {word} is not reduced")
    if len(set(zip(word, heights))) != len(word):
        raise ValueError("height collision")
    if rmax is None:
        rmax = (max(heights) if heights else 0) + 4
    if rmin is None:
        rmin = (min(heights) if heights else 0) - 2 * len(word) - 6 - margin
    q = basic_quiver(rs, rmin, rmax, parity=parity, margin=margin)
    for i, r in zip(word, heights):
        q = insert_reflection(q, (i, r))
    return q


def mutate_quiver(q: WindowedQuiver, v: Vertex) -> WindowedQuiver:
    """Standard quiver mutation at a non-frozen vertex inside the margin."""
    if v not in q.vertices:
        raise ValueError(f"vertex {v} not in window")
    if v in q.frozen:
        raise ValueError(f"vertex {v} is frozen")
    r = v[1]
    if not (q.rmin + q.margin < r < q.rmax - q.margin):
        raise MarginError(f"mutation at {v} violates the window margin")

    arrows = dict(q.arrows)
    ins = [(a, m) for (a, b), m in arrows.items() if b == v]
    outs = [(b, m) for (a, b), m in arrows.items() if a == v]
    # compose paths through v
    for a, ma in ins:
        for b, mb in outs:
            arrows[(a, b)] = arrows.get((a, b), 0) + ma * mb
    # reverse arrows at v
    for a, m in ins:
        del arrows[(a, v)]
        arrows[(v, a)] = arrows.get((v, a), 0) + m
    for b, m in outs:
        del arrows[(v, b)]
        arrows[(b, v)] = arrows.get((b, v), 0) + m
    # cancel 2-cycles
    for (a, b) in list(arrows):
        if (b, a) in arrows and (a, b) in arrows and a < b:
            k = min(arrows[(a, b)], arrows[(b, a)])
            arrows[(a, b)] -= k
            arrows[(b, a)] -= k
    return _make(q, arrows=arrows)


def recolor_from_arrows(q: WindowedQuiver) -> WindowedQuiver:
    """Recompute red/green from vertical down-arrows (i,r) -> (i,r-2)."""
    colors: dict[Vertex, str] = {}
    for (a, b), m in q.arrows:
        if a[0] == b[0] and a[1] == b[1] + 2:
            colors[a] = RED
            colors[b] = GREEN
    return _make(q, colors=colors)


# ---------------------------------------------------------------------------
# Coxeter quivers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoxeterWindow:
    """The Coxeter-element quiver on a window, plus its finite core."""

    quiver: WindowedQuiver
    datum: CoxeterDatum
    gamma: WindowedQuiver  # finite core with 2n frozen vertices

    # -- band geometry ----------------------------------------------------

    def red_top(self, i: int) -> int:
        return -self.datum.l_of(i)

    def red_heights(self, i: int) -> list[int]:
        return [-self.datum.l_of(i) - 4 * k for k in range(self.datum.m_of(i))]

    def green_heights(self, i: int) -> list[int]:
        return [-self.datum.l_of(i) - 4 * k - 2 for k in range(self.datum.m_of(i))]

    def band_bottom(self) -> int:
        return min(h for i in range(1, self.datum.rs.n + 1) for h in self.green_heights(i))

    # -- slices -----------------------------------------------------------

    def slice_index(self, v: Vertex) -> int:
        i, r = v
        return (r - self.datum.l_of(i)) // 2

    def slice_vertices(self, m: int) -> list[Vertex]:
        out = []
        for i in range(1, self.datum.rs.n + 1):
            v = (i, self.datum.l_of(i) + 2 * m)
            if v in self.quiver.vertices:
                out.append(v)
        return out

    def slice_range(self) -> range:
        rs = self.datum.rs
        lo = min(
            (self.quiver.rmin - self.datum.l_of(i) + 1) // 2
            for i in range(1, rs.n + 1)
        )
        hi = max(
            (self.quiver.rmax - self.datum.l_of(i)) // 2 for i in range(1, rs.n + 1)
        )
        return range(lo, hi + 1)

    def I_red(self, m: int) -> list[int]:
        return [i for (i, r) in self.slice_vertices(m) if self.quiver.color((i, r)) == RED]

    def I_grn(self, m: int) -> list[int]:
        return [
            i for (i, r) in self.slice_vertices(m) if self.quiver.color((i, r)) == GREEN
        ]

    def slice_quiver(self, m: int) -> list[tuple[int, int]]:
        """Orientation of the Dynkin graph induced on slice m."""
        verts = {v[0]: v for v in self.slice_vertices(m)}
        out = []
        for i, j in self.datum.rs.edges():
            if i in verts and j in verts:
                if self.quiver.mult(verts[i], verts[j]):
                    out.append((i, j))
                elif self.quiver.mult(verts[j], verts[i]):
                    out.append((j, i))
        return out

    # -- green enumeration -------------------------------------------------

    def green_sequence(self) -> list[Vertex]:
        """All green vertices, slice-descending (then node-ascending)."""
        greens = self.quiver.greens()
        return sorted(greens, key=lambda v: (-self.slice_index(v), v[0]))

    def green_word(self) -> tuple[int, ...]:
        return tuple(v[0] for v in self.green_sequence())


def build_coxeter_quiver(
    rs: RootSystem,
    orientation: Sequence | CoxeterDatum,
    rmax: int = 2,
    depth_below: int = 8,
    margin: int = 2,
) -> CoxeterWindow:
    """Coxeter quiver with highest red vertex at height 0.

    The reflection pattern is inserted at the vertices ``(i, -l(i) - 2k)``
    for ``k < m_i``, processed top-down; cumulative same-column relabeling
    places the k-th red of column i at height ``-l(i) - 4k``.
    ``depth_below`` is how far the window extends below the band.
    """
    if isinstance(orientation, CoxeterDatum):
        datum = orientation
    else:
        datum = coxeter_data(rs, orientation)
    band_bottom = min(
        -datum.l_of(i) - 4 * (datum.m_of(i) - 1) - 2 for i in range(1, rs.n + 1)
    )
    rmin = band_bottom - depth_below
    if rmax < 2:
        raise ValueError("window too small to contain the band: need rmax >= 2")
    q = basic_quiver(rs, rmin, rmax, parity=datum.parity(), margin=margin)
    points = [
        (i, -datum.l_of(i) - 2 * k)
        for i in range(1, rs.n + 1)
        for k in range(datum.m_of(i))
    ]
    points.sort(key=lambda v: (-v[1], v[0]))
    count = {i: 0 for i in range(1, rs.n + 1)}
    for i, r0 in points:
        q = insert_reflection(q, (i, r0 - 2 * count[i]))
        count[i] += 1

    # finite core: band plus the vertex immediately above each highest red;
    # frozen boundary = that top rim and the lowest green in each column.
    core_vertices: set[Vertex] = set()
    frozen: set[Vertex] = set()
    for i in range(1, rs.n + 1):
        top = (i, -datum.l_of(i) + 2)
        core_vertices.add(top)
        frozen.add(top)
        for h in self_heights(datum, i):
            core_vertices.add((i, h))
        frozen.add((i, min(self_heights(datum, i))))
    core_arrows = {
        (a, b): m
        for (a, b), m in q.arrows
        if a in core_vertices and b in core_vertices
    }
    gamma = _make(
        replace(q, margin=0),
        vertices=core_vertices,
        arrows=core_arrows,
        colors=dict(q.colors),
        frozen=frozen,
    )
    return CoxeterWindow(q, datum, gamma)


def self_heights(datum: CoxeterDatum, i: int) -> list[int]:
    """All band heights (reds and greens) of column i."""
    out = []
    for k in range(datum.m_of(i)):
        out.append(-datum.l_of(i) - 4 * k)
        out.append(-datum.l_of(i) - 4 * k - 2)
    return out


# ---------------------------------------------------------------------------
# JSON round-trip
# ---------------------------------------------------------------------------


def quiver_to_json(q: WindowedQuiver) -> str:
    payload = {
        "type": q.rs.dynkin_type,
        "window": [q.rmin, q.rmax],
        "arrows": [[a[0], a[1], b[0], b[1], m] for (a, b), m in q.arrows],
        "colors": {f"{i},{r}": c for (i, r), c in q.colors},
        "frozen": sorted([list(v) for v in q.frozen]),
        "vertices": sorted([list(v) for v in q.vertices]),
        "parity": list(q.parity),
        "margin": q.margin,
    }
    return json.dumps(payload, sort_keys=True)


def quiver_from_json(text: str) -> WindowedQuiver:
    data = json.loads(text)
    rs = RootSystem.from_name(data["type"])
    rmin, rmax = data["window"]
    proto = WindowedQuiver(
        rs,
        rmin,
        rmax,
        tuple(data["parity"]),
        frozenset(),
        (),
        (),
        frozenset(),
        data.get("margin", 2),
    )
    vertices = {tuple(v) for v in data["vertices"]}
    arrows = {
        ((a[0], a[1]), (a[2], a[3])): a[4] for a in (tuple(x) for x in data["arrows"])
    }
    colors = {}
    for key, c in data["colors"].items():
        i, r = key.split(",")
        colors[(int(i), int(r))] = c
    return _make(
        proto,
        vertices=vertices,
        arrows=arrows,
        colors=colors,
        frozen={tuple(v) for v in data["frozen"]},
    )
