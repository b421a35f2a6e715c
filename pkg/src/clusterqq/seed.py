"""Seeds carrying g-vectors (and optional ring values) over a window.

A :class:`Seed` stores its own quiver, the quiver of the reference seed,
and for every vertex the g-vector of its cluster variable with respect to
that reference.  Two mutation operations are provided:

* :func:`mutate_seed` — mutate the seed itself at a vertex.  The new
  g-vector follows the standard exchange recursion, whose two branches are
  selected by the sign of the c-vector of the mutated variable.  With a
  stabilized reference (the plain translation-invariant quiver) that
  c-vector is computed exactly by a top-down substitution: the defining
  linear relation expresses, column by column, each coefficient two steps
  below a vertex in terms of already-known coefficients above it.
* :func:`mutate_reference` — mutate the reference seed at a vertex and
  transport every stored g-vector accordingly; :func:`green_sweep` does
  this at every green vertex, translating the reference one step down.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Mapping

from .gvector import GVec, knit_gvectors, stable_block
from .quiver import (
    GREEN,
    CoxeterWindow,
    MarginError,
    Vertex,
    WindowedQuiver,
    basic_quiver,
    mutate_quiver,
    recolor_from_arrows,
)


class SignError(ValueError):
    """A c-vector turned out zero or not sign-coherent."""


@dataclass(frozen=True)
class Seed:
    quiver: WindowedQuiver
    ref_quiver: WindowedQuiver
    g: tuple[tuple[Vertex, GVec], ...]
    ref_tag: str
    values: tuple[tuple[Vertex, Any], ...] | None = None

    def gmap(self) -> dict[Vertex, GVec]:
        return dict(self.g)

    def g_of(self, v: Vertex) -> GVec:
        return dict(self.g)[v]

    def value_map(self) -> dict[Vertex, Any]:
        return dict(self.values) if self.values is not None else {}

    def with_values(self, values: Mapping[Vertex, Any]) -> "Seed":
        return replace(self, values=tuple(sorted(values.items())))


def _pack(g: Mapping[Vertex, GVec]) -> tuple[tuple[Vertex, GVec], ...]:
    return tuple(sorted(g.items()))


def initial_seed(cw: CoxeterWindow, stabilized: bool = True) -> Seed:
    """Initial seed on the Coxeter quiver.

    With ``stabilized=True`` the reference is the limit of downward
    translations — the plain quiver with no red/green band — and the
    stored g-vectors are the stabilized ones.  Otherwise the reference is
    the seed itself and every g-vector is a unit vector.
    """
    q = cw.quiver
    if stabilized:
        ref = basic_quiver(q.rs, q.rmin, q.rmax, parity=q.parity, margin=q.margin)
        return Seed(q, ref, _pack(knit_gvectors(q)), "stabilized")
    g = {v: GVec.unit(v) for v in q.vertices}
    return Seed(q, q, _pack(g), "self")


# ---------------------------------------------------------------------------
# c-vectors with respect to the stabilized reference
# ---------------------------------------------------------------------------


def _exchange_lhs(seed: Seed, k: Vertex) -> dict[Vertex, int]:
    """Net in-degree combination of g-vectors at k in the seed quiver."""
    acc = GVec.zero()
    for v, m in seed.quiver.arrows_in(k):
        acc = acc + seed.g_of(v).scale(m)
    for v, m in seed.quiver.arrows_out(k):
        acc = acc - seed.g_of(v).scale(m)
    return acc.as_dict()


def cvector(seed: Seed, k: Vertex) -> GVec:
    """Exact c-vector of the variable at k, from the defining relation.

    Requires the stabilized reference: there the relation reads, at each
    reference vertex (i,r),

        c(i,r+2) + sum_{j~i} c(j,r-1) - c(i,r-2) - sum_{j~i} c(j,r+1)
            = lhs(i,r),

    which determines c(i,r-2) from coefficients strictly above.  The
    substitution starts from virtual rows above the window top (where both
    c and the exchange data vanish) and raises :class:`MarginError` if a
    nonzero coefficient is pushed outside the window at either end.
    """
    if seed.ref_tag != "stabilized":
        raise ValueError("c-vectors are computed against the stabilized reference")
    ref = seed.ref_quiver
    lhs = _exchange_lhs(seed, k)
    cols: dict[int, list[int]] = {}
    for (i, r) in ref.vertices:
        cols.setdefault(i, []).append(r)
    top = max(max(h) for h in cols.values())
    bot = min(min(h) for h in cols.values())
    c: dict[Vertex, int] = {}
    for r in range(top + 5, bot - 1, -1):
        for i in sorted(cols):
            if (r - max(cols[i])) % 2:
                continue
            val = c.get((i, r + 2), 0)
            for j in ref.rs.neighbors(i):
                val += c.get((j, r - 1), 0) - c.get((j, r + 1), 0)
            val -= lhs.get((i, r), 0)
            if r - 2 >= min(cols[i]):
                c[(i, r - 2)] = val
            elif val:
                raise MarginError(
                    f"c-vector support reaches the window bottom in column {i}"
                )
    for (i, r), x in list(c.items()):
        if r > max(cols[i]):
            if x:
                raise MarginError(
                    f"c-vector support reaches the window top at {(i, r)}"
                )
            del c[(i, r)]
    return GVec.from_dict(c)


def cvector_sign(seed: Seed, k: Vertex) -> int:
    """+1 if the c-vector at k is nonnegative, -1 if nonpositive."""
    c = cvector(seed, k)
    coeffs = [x for _, x in c.coeffs]
    if not coeffs:
        raise SignError(f"zero c-vector at {k}")
    if all(x > 0 for x in coeffs):
        return 1
    if all(x < 0 for x in coeffs):
        return -1
    raise SignError(f"c-vector at {k} is not sign-coherent: {c}")


def dual_cvectors(cw: CoxeterWindow) -> dict[Vertex, GVec]:
    """Initial c-vectors predicted by per-slice duality.

    In each slice the c-matrix is the inverse transpose of the stabilized
    g-matrix block (an integer matrix, since the blocks lie in the Weyl
    group up to sign).
    """
    out: dict[Vertex, GVec] = {}
    n = cw.datum.rs.n
    for m in cw.slice_range():
        block = stable_block(cw.datum, m)
        inv_t = _integer_inverse_transpose(block)
        for i in range(1, n + 1):
            v = (i, cw.datum.l_of(i) + 2 * m)
            if v in cw.quiver.vertices:
                out[v] = GVec.from_dict(
                    {
                        (j, cw.datum.l_of(j) + 2 * m): inv_t[j - 1][i - 1]
                        for j in range(1, n + 1)
                    }
                )
    return out


def _integer_inverse_transpose(mat) -> tuple[tuple[int, ...], ...]:
    n = len(mat)
    aug = [
        [Fraction(mat[i][j]) for j in range(n)]
        + [Fraction(1 if i == j else 0) for j in range(n)]
        for i in range(n)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        scale = aug[col][col]
        aug[col] = [x / scale for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    inv = [[aug[i][n + j] for j in range(n)] for i in range(n)]
    for row in inv:
        assert all(x.denominator == 1 for x in row)
    # transpose while converting to int
    return tuple(tuple(int(inv[j][i]) for j in range(n)) for i in range(n))


# ---------------------------------------------------------------------------
# mutations
# ---------------------------------------------------------------------------


def _divide(num, den):
    try:
        return num / den
    except TypeError:
        return num * den.inverse()


def mutate_seed(seed: Seed, k: Vertex) -> Seed:
    """Mutate the seed at k, updating quiver, g-vector and optional value."""
    sign = cvector_sign(seed, k)
    g = seed.gmap()
    acc = -g[k]
    arrows = seed.quiver.arrows_in(k) if sign > 0 else seed.quiver.arrows_out(k)
    for v, m in arrows:
        acc = acc + g[v].scale(m)
    g[k] = acc
    values = None
    if seed.values is not None:
        vals = seed.value_map()
        num_in = None
        for v, m in seed.quiver.arrows_in(k):
            for _ in range(m):
                num_in = vals[v] if num_in is None else num_in * vals[v]
        num_out = None
        for v, m in seed.quiver.arrows_out(k):
            for _ in range(m):
                num_out = vals[v] if num_out is None else num_out * vals[v]
        if num_in is None or num_out is None:
            raise ValueError(f"vertex {k} must have both in- and out-arrows")
        vals[k] = _divide(num_in + num_out, vals[k])
        values = tuple(sorted(vals.items()))
    return replace(
        seed, quiver=mutate_quiver(seed.quiver, k), g=_pack(g), values=values
    )


def mutate_reference(seed: Seed, l: Vertex) -> Seed:
    """Mutate the reference at l and transport all stored g-vectors."""
    ref = seed.ref_quiver
    if l not in ref.vertices:
        raise ValueError(f"vertex {l} not in reference window")
    out_arrows = ref.arrows_out(l)
    in_arrows = ref.arrows_in(l)
    new_g: dict[Vertex, GVec] = {}
    for x, gvec in seed.g:
        comp = dict(gvec.coeffs)
        gl = comp.get(l, 0)
        if gl == 0:
            new_g[x] = gvec
            continue
        arrows = out_arrows if gl >= 0 else in_arrows
        comp[l] = -gl
        for v, m in arrows:
            comp[v] = comp.get(v, 0) + m * gl
        new_g[x] = GVec.from_dict(comp)
    return replace(
        seed,
        ref_quiver=mutate_quiver(ref, l),
        g=_pack(new_g),
        ref_tag=seed.ref_tag + f"*mu{l}",
    )


def green_sweep(seed: Seed) -> Seed:
    """Mutate the reference at every green vertex, then recolor.

    The reference quiver comes back as its own one-step downward
    translation; the mutations pairwise commute so the order is free.
    """
    tag = seed.ref_tag
    greens = seed.ref_quiver.greens()
    if not greens:
        raise ValueError("reference quiver has no green vertices")
    for l in greens:
        seed = mutate_reference(seed, l)
    ref = recolor_from_arrows(seed.ref_quiver)
    base_tag = tag.split("*")[0]
    old_sweeps = tag.count("+sweep")
    return replace(
        seed, ref_quiver=ref, ref_tag=base_tag + "+sweep" * (old_sweeps + 1)
    )
