"""Truncated formal power series and exact Q-variable evaluation.

The ambient ring is spanned by monomials ``[λ]·∏ Ψ_{i,q^r}^{m}``, where λ
runs over the half-integral weight lattice (stored in doubled fundamental
coordinates) and Ψ are the formal series variables indexed by quiver
vertices.  A :class:`KSeries` is a finite, exactly-truncated element: all
terms whose weight height is strictly above ``cutoff2`` (doubled height)
are present with exact integer coefficients, and everything at or below
the cutoff has been discarded.

Q-variables are evaluated by a bootstrap: for an ascent ``w s_i > w`` the
two-term linear relation of the QQ-system is solved for the new variable
as an explicit descending sum over spectral shifts.  Every solved value is
certified against the QQ relation itself before it is cached, so a cached
value is always a machine-checked one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .rootsys import (
    RootSystem,
    fundamental_weight,
    is_reduced,
    simple_root,
    weyl_from_word,
)

Lam2 = tuple[int, ...]
Psi = tuple[tuple[tuple[int, int], int], ...]  # ((i, r), exponent), sorted
Key = tuple[Lam2, Psi]


def psi_one() -> Psi:
    return ()


def psi_var(i: int, r: int, e: int = 1) -> Psi:
    return (((i, r), e),)


def psi_mul(p1: Psi, p2: Psi) -> Psi:
    d = dict(p1)
    for v, e in p2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted((v, e) for v, e in d.items() if e))


def psi_inv(p: Psi) -> Psi:
    return tuple((v, -e) for v, e in p)


def key_mul(k1: Key, k2: Key) -> Key:
    l1, p1 = k1
    l2, p2 = k2
    return (tuple(a + b for a, b in zip(l1, l2)), psi_mul(p1, p2))


def key_inv(k: Key) -> Key:
    lam, p = k
    return (tuple(-a for a in lam), psi_inv(p))


def key_one(n: int) -> Key:
    return ((0,) * n, ())


def omega_lam2(rs: RootSystem, psi: Psi) -> Lam2:
    """Doubled coordinates of Ω(Ψ-monomial) = Σ m·(r/2)·ϖ_i."""
    out = [0] * rs.n
    for (i, r), e in psi:
        out[i - 1] += e * r
    return tuple(out)


# ---------------------------------------------------------------------------
# distinguished monomials
# ---------------------------------------------------------------------------


def bracket(rs: RootSystem, lam2: Lam2) -> Key:
    return (tuple(lam2), ())


def y_monomial(rs: RootSystem, i: int, r: int) -> Key:
    """[ϖ_i]·Ψ_{i,q^{r-1}}/Ψ_{i,q^{r+1}}."""
    lam2 = fundamental_weight(rs, i).coords2
    return (lam2, psi_mul(psi_var(i, r - 1), psi_var(i, r + 1, -1)))


def a_monomial(rs: RootSystem, i: int, r: int) -> Key:
    """Y_{i,q^{r-1}}·Y_{i,q^{r+1}}·∏_{j~i} Y_{j,q^r}^{-1}."""
    k = key_mul(y_monomial(rs, i, r - 1), y_monomial(rs, i, r + 1))
    for j in rs.neighbors(i):
        k = key_mul(k, key_inv(y_monomial(rs, j, r)))
    return k


def psi_tilde(rs: RootSystem, i: int, r: int) -> Key:
    """Ψ_{i,q^r}^{-1}·∏_{j~i} Ψ_{j,q^{r+1}}."""
    p = psi_var(i, r, -1)
    for j in rs.neighbors(i):
        p = psi_mul(p, psi_var(j, r + 1))
    return ((0,) * rs.n, p)


# ---------------------------------------------------------------------------
# truncated series
# ---------------------------------------------------------------------------


class TruncationError(ValueError):
    """An operation needed terms beyond the guaranteed truncation."""


@dataclass
class KSeries:
    rs: RootSystem
    terms: dict
    cutoff2: Fraction

    @staticmethod
    def monomial(rs: RootSystem, key: Key, cutoff2, coeff: int = 1) -> "KSeries":
        s = KSeries(rs, {key: coeff}, Fraction(cutoff2))
        s._prune()
        return s

    @staticmethod
    def one(rs: RootSystem, cutoff2) -> "KSeries":
        return KSeries.monomial(rs, key_one(rs.n), cutoff2)

    @staticmethod
    def zero(rs: RootSystem, cutoff2) -> "KSeries":
        return KSeries(rs, {}, Fraction(cutoff2))

    def _ht(self, key: Key) -> Fraction:
        return sum(self.rs.root_coords2(key[0]), Fraction(0))

    def _prune(self) -> None:
        self.terms = {
            k: c for k, c in self.terms.items() if c and self._ht(k) > self.cutoff2
        }

    def max_ht(self) -> Fraction:
        if not self.terms:
            return self.cutoff2
        return max(self._ht(k) for k in self.terms)

    def top(self) -> tuple[Key, int]:
        """The unique term of maximal height, as (key, coefficient)."""
        if not self.terms:
            raise TruncationError("series has no terms above its cutoff")
        h = self.max_ht()
        tops = [k for k in self.terms if self._ht(k) == h]
        if len(tops) != 1:
            raise TruncationError(f"leading term is not unique: {tops}")
        return tops[0], self.terms[tops[0]]

    def __add__(self, other: "KSeries") -> "KSeries":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        s = KSeries(self.rs, out, max(self.cutoff2, other.cutoff2))
        s._prune()
        return s

    def __neg__(self) -> "KSeries":
        return KSeries(self.rs, {k: -c for k, c in self.terms.items()}, self.cutoff2)

    def __sub__(self, other: "KSeries") -> "KSeries":
        return self + (-other)

    def __mul__(self, other: "KSeries") -> "KSeries":
        cutoff = max(
            self.cutoff2 + other.max_ht(), other.cutoff2 + self.max_ht()
        )
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = key_mul(k1, k2)
                out[k] = out.get(k, 0) + c1 * c2
        s = KSeries(self.rs, out, cutoff)
        s._prune()
        return s

    def mul_monomial(self, key: Key, coeff: int = 1) -> "KSeries":
        """Exact multiplication by a single monomial (shifts the cutoff)."""
        shift = self._ht(key)
        out = {key_mul(k, key): c * coeff for k, c in self.terms.items()}
        return KSeries(self.rs, out, self.cutoff2 + shift)

    def clamped(self, cutoff2) -> "KSeries":
        """Copy truncated at a coarser (higher) cutoff."""
        s = KSeries(self.rs, dict(self.terms), max(self.cutoff2, Fraction(cutoff2)))
        s._prune()
        return s

    def inverse(self) -> "KSeries":
        t, c0 = self.top()
        if c0 not in (1, -1):
            raise TruncationError(f"cannot invert leading coefficient {c0}")
        th = self._ht(t)
        cutoff = self.cutoff2 - th
        eps = self.mul_monomial(key_inv(t), c0) - KSeries.one(self.rs, cutoff)
        acc = KSeries.one(self.rs, cutoff)
        power = acc
        while power.terms:
            power = (-(power * eps)).clamped(cutoff)
            acc = acc + power
        return acc.mul_monomial(key_inv(t), c0)

    def matches(self, other: "KSeries") -> bool:
        """Equality of all terms above the common guaranteed cutoff."""
        cutoff = max(self.cutoff2, other.cutoff2)
        a = {k: c for k, c in self.terms.items() if self._ht(k) > cutoff}
        b = {k: c for k, c in other.terms.items() if other._ht(k) > cutoff}
        return a == b

    def is_zero(self) -> bool:
        return not self.terms


def product(factors) -> KSeries:
    it = iter(factors)
    out = next(it)
    for f in it:
        out = out * f
    return out


# ---------------------------------------------------------------------------
# normalization factors
# ---------------------------------------------------------------------------


def chi_factor(rs: RootSystem, word, i: int, depth: int = 6) -> KSeries:
    """Bracket-only normalization factor attached to the weight w(ϖ_i).

    Defined inductively: trivial for the fundamental weights, and for an
    ascent w s_i > w the product of the factors at w(ϖ_i) and ws_i(ϖ_i)
    equals ∏_{j~i} (factor at w(ϖ_j)) divided by 1 - [-w(α_i)].
    """
    word = tuple(word)
    while word and word[-1] != i:
        word = word[:-1]
    cutoff = Fraction(-2 * depth)
    if not word:
        return KSeries.one(rs, cutoff)
    w_prime = word[:-1]
    num = KSeries.one(rs, cutoff)
    for j in rs.neighbors(i):
        num = (num * chi_factor(rs, w_prime, j, depth)).clamped(cutoff)
    alpha2 = weyl_from_word(rs, w_prime).apply(simple_root(rs, i)).coords2
    denom = KSeries.one(rs, cutoff) - KSeries.monomial(
        rs, bracket(rs, tuple(-a for a in alpha2)), cutoff
    )
    return (
        num * denom.inverse() * chi_factor(rs, w_prime, i, depth).inverse()
    ).clamped(cutoff)


# ---------------------------------------------------------------------------
# Q-variable evaluation
# ---------------------------------------------------------------------------


class CertificationError(RuntimeError):
    """A solved Q-variable failed its defining relation check."""


class QEvaluator:
    """Exact evaluator of (renormalized) Q-variables on a height window.

    ``depth`` is the guaranteed truncation depth in root-height units:
    every returned series is exact on all terms less than ``depth`` simple
    roots below its leading monomial.
    """

    def __init__(self, rs: RootSystem, depth: int = 6):
        self.rs = rs
        self.depth = depth
        self._memo: dict = {}
        self._certified: set = set()

    # -- bookkeeping ------------------------------------------------------

    def _strip(self, word, i: int):
        word = tuple(word)
        if not is_reduced(self.rs, word):
            raise ValueError(f"word {word} is not reduced")
        while word and word[-1] != i:
            word = word[:-1]
        return word

    def weight_of(self, word, i: int) -> Lam2:
        return weyl_from_word(self.rs, word).apply(
            fundamental_weight(self.rs, i)
        ).coords2

    # -- raw Q-variables --------------------------------------------------

    def q_raw(self, word, i: int, r: int) -> KSeries:
        """Projection of the Q-variable of weight w(ϖ_i) at parameter q^r."""
        word = self._strip(word, i)
        memo_key = (self.weight_of(word, i), r)
        if memo_key not in self._memo:
            value = self._solve(word, i, r)
            self._memo[memo_key] = value
            self._certify(word, i, r, value)
        return self._memo[memo_key]

    def _solve(self, word, i: int, r: int) -> KSeries:
        cutoff = Fraction(-2 * self.depth)
        if not word:
            return KSeries.monomial(
                self.rs, ((0,) * self.rs.n, psi_var(i, r)), cutoff
            )
        w_prime = word[:-1]
        alpha2 = weyl_from_word(self.rs, w_prime).apply(
            simple_root(self.rs, i)
        ).coords2
        ht2 = sum(self.rs.root_coords2(alpha2), Fraction(0))
        if ht2 <= 0:
            raise ValueError(f"{word} is not an ascent at {i}")
        br = bracket(self.rs, tuple(-a for a in alpha2))

        def qp(j, b):
            return self.q_raw(w_prime, j, b)

        def neighbor_product(b):
            out = KSeries.one(self.rs, cutoff)
            for j in self.rs.neighbors(i):
                out = (out * qp(j, b)).clamped(cutoff)
            return out

        levels = int(Fraction(2 * self.depth) / ht2) + 1
        series = KSeries.one(self.rs, cutoff)
        for k in range(levels - 1, 0, -1):
            b = r - 2 * k
            ratio = (
                qp(i, b - 2).inverse()
                * qp(i, b + 2)
                * neighbor_product(b - 1)
                * neighbor_product(b + 1).inverse()
            ).mul_monomial(br).clamped(cutoff)
            series = KSeries.one(self.rs, cutoff) + (ratio * series).clamped(cutoff)
        return (
            qp(i, r - 2).inverse() * neighbor_product(r - 1) * series
        ).clamped(cutoff)

    def _certify(self, word, i: int, r: int, value: KSeries) -> None:
        """Check the defining two-term relation before trusting a value."""
        if not word:
            return
        memo_key = (self.weight_of(word, i), r)
        if memo_key in self._certified:
            return
        self._certified.add(memo_key)
        w_prime = word[:-1]
        alpha2 = weyl_from_word(self.rs, w_prime).apply(
            simple_root(self.rs, i)
        ).coords2
        br = bracket(self.rs, tuple(-a for a in alpha2))
        lower = self._solve(word, i, r - 2)
        lhs = value * self.q_raw(w_prime, i, r - 2) - (
            lower * self.q_raw(w_prime, i, r)
        ).mul_monomial(br)
        rhs = KSeries.one(self.rs, Fraction(-2 * self.depth))
        for j in self.rs.neighbors(i):
            rhs = rhs * self.q_raw(w_prime, j, r - 1)
        if not lhs.matches(rhs):
            raise CertificationError(
                f"QQ relation failed for word={word}, i={i}, r={r}"
            )

    # -- renormalized Q-variables -----------------------------------------

    def q_bar(self, word, i: int, r: int) -> KSeries:
        """Renormalized variable: q_raw multiplied by [-Ω(top Ψ-monomial)]."""
        raw = self.q_raw(word, i, r)
        (lam2, psi), _ = raw.top()
        shift = tuple(-a for a in omega_lam2(self.rs, psi))
        return raw.mul_monomial(bracket(self.rs, shift))


def qq_check(ev: QEvaluator, word, i: int, r: int) -> bool:
    """Renormalized QQ relation for the ascent w s_i > w at parameter q^r."""
    word = tuple(word)
    ext = word + (i,)
    if not is_reduced(ev.rs, ext):
        raise ValueError(f"{word} has no ascent at {i}")
    lhs = ev.q_bar(ext, i, r) * ev.q_bar(word, i, r - 2) - ev.q_bar(
        ext, i, r - 2
    ) * ev.q_bar(word, i, r)
    rhs = KSeries.one(ev.rs, Fraction(-2 * ev.depth))
    for j in ev.rs.neighbors(i):
        rhs = rhs * ev.q_bar(word, j, r - 1)
    return lhs.matches(rhs)


def qqstar_check(ev: QEvaluator, word, i: int, j: int, r: int) -> bool:
    """Three-term exchange relation for adjacent i, j with l(w s_i s_j s_i)
    = l(w) + 3: the product at (ws_i, ws_j) splits into the two mixed
    products, at parameters q^r and q^{r+1}."""
    if ev.rs.cartan[i - 1][j - 1] != -1:
        raise ValueError(f"nodes {i} and {j} are not adjacent")
    word = tuple(word)
    if not is_reduced(ev.rs, word + (i, j, i)):
        raise ValueError(f"{word} does not admit the triple ascent {i},{j}")
    lhs = ev.q_bar(word + (i,), i, r) * ev.q_bar(word + (j,), j, r + 1)
    rhs = ev.q_bar(word, i, r) * ev.q_bar(word + (i, j), j, r + 1) + ev.q_bar(
        word + (j, i), i, r
    ) * ev.q_bar(word, j, r + 1)
    return lhs.matches(rhs)


# ---------------------------------------------------------------------------
# the embedding of initial cluster variables
# ---------------------------------------------------------------------------


def f_label(cw, v, gvectors=None):
    """Word, node and spectral exponent of the Q-variable attached to a
    window vertex, determined by its stabilized g-vector."""
    from .gvector import GVec, knit_gvectors, theta_word

    if gvectors is None:
        gvectors = knit_gvectors(cw.quiver)
    i = v[0]
    m = cw.slice_index(v)
    prefix = [g for g in cw.green_sequence() if cw.slice_index(g) >= m]
    word = tuple(g[0] for g in prefix)
    x = theta_word(cw.datum.rs, word, GVec.unit((i, cw.red_top(i))))
    target = gvectors[v]
    s = (target.coeffs[0][0][1] - x.coeffs[0][0][1]) // 2
    if x.shift(s) != target:
        raise ValueError(f"braid expression does not match g-vector at {v}")
    return word, i, cw.red_top(i) + 2 * s


def f_image(cw, v, ev: QEvaluator, gvectors=None) -> KSeries:
    """Image of the initial cluster variable at v: a renormalized
    Q-variable whose leading Ψ-monomial exponents are the coordinates of
    the stabilized g-vector of v."""
    word, i, r = f_label(cw, v, gvectors)
    return ev.q_bar(word, i, r)
