"""Stabilized g-vectors of the standard initial seeds.

Three independent computations of the stabilized g-vectors of a Coxeter
quiver are provided:

* :func:`blocks_gvectors` — per-slice block matrices: the g-vectors of the
  vertices in slice ``m`` are the columns of a product of elementary slice
  matrices ``T_{-1} T_{-2} ... T_m`` (identity above the band, minus the
  twisted permutation below it).
* :func:`knit_gvectors` — the knitting recursion down the window: unit
  vectors on top slices, then a degree shift along vertical up-arrows and
  an alternating sum along the red-over-green down-arrows.
* :func:`braid_gvectors` — the braid-group action ``θ_i`` on the free
  module over vertices, evaluated along the green word.

All three must agree; they are exposed separately so they can certify one
another.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

from .quiver import CoxeterWindow, Vertex, WindowedQuiver
from .rootsys import CoxeterDatum, Matrix, RootSystem, _identity, _mat_mul


@dataclass(frozen=True)
class GVec:
    """Integer vector in the free module spanned by the window vertices."""

    coeffs: tuple[tuple[Vertex, int], ...]  # sorted, nonzero

    @staticmethod
    def from_dict(d: dict[Vertex, int]) -> "GVec":
        return GVec(tuple(sorted((v, c) for v, c in d.items() if c)))

    @staticmethod
    def unit(v: Vertex) -> "GVec":
        return GVec(((v, 1),))

    @staticmethod
    def zero() -> "GVec":
        return GVec(())

    def as_dict(self) -> dict[Vertex, int]:
        return dict(self.coeffs)

    def __add__(self, other: "GVec") -> "GVec":
        d = self.as_dict()
        for v, c in other.coeffs:
            d[v] = d.get(v, 0) + c
        return GVec.from_dict(d)

    def __neg__(self) -> "GVec":
        return GVec(tuple((v, -c) for v, c in self.coeffs))

    def __sub__(self, other: "GVec") -> "GVec":
        return self + (-other)

    def scale(self, k: int) -> "GVec":
        return GVec.from_dict({v: k * c for v, c in self.coeffs})

    def shift(self, s: int) -> "GVec":
        """Degree shift [s]: moves each basis vertex (i,r) to (i, r+2s)."""
        return GVec(tuple(((i, r + 2 * s), c) for (i, r), c in self.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs


# ---------------------------------------------------------------------------
# slice matrices and block products
# ---------------------------------------------------------------------------


def green_slice_nodes(datum: CoxeterDatum, m: int) -> list[int]:
    """Nodes whose column has a green vertex in slice m."""
    out = []
    for i in range(1, datum.rs.n + 1):
        for k in range(datum.m_of(i)):
            if m == -datum.l_of(i) - 1 - 2 * k:
                out.append(i)
    return out


def lowest_green_slice(datum: CoxeterDatum) -> int:
    return min(
        -datum.l_of(i) - 1 - 2 * (datum.m_of(i) - 1)
        for i in range(1, datum.rs.n + 1)
    )


def slice_matrix(datum: CoxeterDatum, m: int) -> Matrix:
    """T_m: product of the reflection generators of the slice-m greens."""
    mats = [datum.rs.reflection_matrix_t(i) for i in green_slice_nodes(datum, m)]
    return reduce(_mat_mul, mats, _identity(datum.rs.n))


def block_matrix(datum: CoxeterDatum, k: int, m: int) -> Matrix:
    """Slice-m block after k green sweeps: T_{m+k-1} ... T_m."""
    if k < 0:
        raise ValueError("sweep count must be nonnegative")
    mats = [slice_matrix(datum, j) for j in range(m + k - 1, m - 1, -1)]
    return reduce(_mat_mul, mats, _identity(datum.rs.n))


def stable_block(datum: CoxeterDatum, m: int) -> Matrix:
    """Limit slice-m block: Id for m >= 0, else T_{-1} ... T_m."""
    if m >= 0:
        return _identity(datum.rs.n)
    m = max(m, lowest_green_slice(datum))
    mats = [slice_matrix(datum, j) for j in range(-1, m - 1, -1)]
    return reduce(_mat_mul, mats, _identity(datum.rs.n))


def _block_to_gvecs(
    datum: CoxeterDatum, m: int, block: Matrix
) -> dict[Vertex, GVec]:
    out = {}
    n = datum.rs.n
    for i in range(1, n + 1):
        v = (i, datum.l_of(i) + 2 * m)
        out[v] = GVec.from_dict(
            {
                (j, datum.l_of(j) + 2 * m): block[j - 1][i - 1]
                for j in range(1, n + 1)
            }
        )
    return out


def blocks_gvectors(cw: CoxeterWindow) -> dict[Vertex, GVec]:
    """Stabilized g-vector of every window vertex from the block limits."""
    out: dict[Vertex, GVec] = {}
    for m in cw.slice_range():
        block = stable_block(cw.datum, m)
        for v, g in _block_to_gvecs(cw.datum, m, block).items():
            if v in cw.quiver.vertices:
                out[v] = g
    return out


def sweep_gvectors(cw: CoxeterWindow, k: int) -> dict[Vertex, GVec]:
    """g-vectors of every window vertex after k green sweeps."""
    out: dict[Vertex, GVec] = {}
    for m in cw.slice_range():
        block = block_matrix(cw.datum, k, m) if m < 0 else _identity(cw.datum.rs.n)
        for v, g in _block_to_gvecs(cw.datum, m, block).items():
            if v in cw.quiver.vertices:
                out[v] = g
    return out


# ---------------------------------------------------------------------------
# knitting
# ---------------------------------------------------------------------------


def knit_gvectors(q: WindowedQuiver) -> dict[Vertex, GVec]:
    """Top-down knitting recursion on an inserted quiver window.

    Vertices whose column has no vertex above them get unit vectors; the
    window top must lie above every red vertex for this to be exact.
    """
    out: dict[Vertex, GVec] = {}
    pending = sorted(q.vertices, key=lambda u: -u[1])
    while pending:
        deferred = []
        for v in pending:
            i, r = v
            above = (i, r + 2)
            if above not in q.vertices:
                out[v] = GVec.unit(v)
            elif q.mult(v, above):
                if above not in out:
                    deferred.append(v)
                    continue
                out[v] = out[above].shift(-1)
            elif q.mult(above, v):
                deps = [above] + [w for w, _ in q.arrows_out(v)]
                if any(w not in out for w in deps):
                    deferred.append(v)
                    continue
                acc = -out[above].shift(-1)
                for (w, mlt) in q.arrows_out(v):
                    acc = acc + out[w].scale(mlt)
                out[v] = acc
            else:
                raise ValueError(f"no vertical arrow between {v} and {above}")
        if len(deferred) == len(pending):
            raise ValueError(f"cyclic dependencies at {deferred}")
        pending = deferred
    return out


def mesh_pairs(q: WindowedQuiver) -> list[Vertex]:
    """Green vertices (i,l) such that (i,l-4) is also green."""
    greens = set(q.greens())
    return sorted(v for v in greens if (v[0], v[1] - 4) in greens)


def mesh_check(
    q: WindowedQuiver, g: dict[Vertex, GVec], v: Vertex
) -> bool:
    """Translated almost-split relation at a green vertex v with a green
    vertex one step further down the same column."""
    i, l = v
    lhs = g[(i, l - 4)] + g[v].shift(-2)
    rhs = GVec.zero()
    for (w, mlt) in q.arrows_out(v):
        rhs = rhs + g[(w[0], w[1] - 2)].scale(mlt).shift(-1)
    return lhs == rhs


# ---------------------------------------------------------------------------
# braid-group action
# ---------------------------------------------------------------------------


def theta(rs: RootSystem, i: int, g: GVec) -> GVec:
    out: dict[Vertex, int] = {}

    def bump(v: Vertex, c: int) -> None:
        out[v] = out.get(v, 0) + c

    for (j, a), c in g.coeffs:
        if j != i:
            bump((j, a), c)
        else:
            bump((i, a - 2), -c)
            for k in rs.neighbors(i):
                bump((k, a - 1), c)
    return GVec.from_dict(out)


def theta_word(rs: RootSystem, word, g: GVec) -> GVec:
    for i in reversed(tuple(word)):
        g = theta(rs, i, g)
    return g


def braid_gvectors(cw: CoxeterWindow) -> dict[Vertex, GVec]:
    """Stabilized g-vectors of the green vertices via the braid action."""
    rs = cw.datum.rs
    greens = cw.green_sequence()
    word = [v[0] for v in greens]
    out: dict[Vertex, GVec] = {}
    seen: dict[int, int] = {}
    for t, (i, a) in enumerate(greens):
        s_t = seen.get(i, 0)
        start = GVec.unit((i, cw.red_top(i)))
        out[(i, a)] = theta_word(rs, word[: t + 1], start).shift(-s_t)
        seen[i] = s_t + 1
    return out
