"""
Braid matrices, the Deodhar torus chart, grid and chamber minors, and the
cluster variables they determine.

The chart starts from the signed lift of w0*u at the right end and moves left:
a red crossing c multiplies on the right by z_{i_c}(t_c), a blue crossing on the
left by the inverse of zbar_{|i_c|*}(t_c).  Solid crossings carry a fresh symbol
t_c, hollow crossings carry 0.

>>> from braidcluster.perm import simple
>>> from braidcluster.braid import DoubleBraidWord
>>> chart = build_chart(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))
>>> chart.symbols
('t1', 't2', 't4', 't5')
>>> str(chart.chamber_minor(4))
't4*t5'
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .braid import (
    DoubleBraidWord,
    OrderTable,
    SubexpressionRecord,
    compute_pds,
    order_table,
)
from .laurent import ONE, ZERO, InexactDivision, LaurentPolynomial, Poly, lift, var
from .perm import Permutation, compose, longest, signed_matrix, star

PolyMatrix = tuple[tuple[LaurentPolynomial, ...], ...]


# matrices -------------------------------------------------------------------

def poly_identity(n: int) -> PolyMatrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def from_ints(rows: Sequence[Sequence[int]]) -> PolyMatrix:
    return tuple(tuple(lift(x) for x in r) for r in rows)


def matmul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    n, k, p = len(a), len(b), len(b[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = ZERO
            for s in range(k):
                if a[i][s].terms and b[s][j].terms:
                    acc = acc + a[i][s] * b[s][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def determinant(mat: PolyMatrix, rows: Sequence[int] | None = None,
                cols: Sequence[int] | None = None) -> LaurentPolynomial:
    """Determinant of the submatrix on 1-based rows and columns (Laplace expansion)."""
    rows = tuple(rows) if rows is not None else tuple(range(1, len(mat) + 1))
    cols = tuple(cols) if cols is not None else tuple(range(1, len(mat) + 1))
    if len(rows) != len(cols):
        raise ValueError("minor must be square")
    memo: dict[tuple[tuple[int, ...], tuple[int, ...]], LaurentPolynomial] = {}

    def rec(rs: tuple[int, ...], cs: tuple[int, ...]) -> LaurentPolynomial:
        if not rs:
            return ONE
        key = (rs, cs)
        if key in memo:
            return memo[key]
        r0, rest = rs[0], rs[1:]
        acc = ZERO
        for k, c in enumerate(cs):
            entry = mat[r0 - 1][c - 1]
            if entry.terms:
                sub = rec(rest, cs[:k] + cs[k + 1:])
                if sub.terms:
                    acc = acc + (entry * sub if k % 2 == 0 else -(entry * sub))
        memo[key] = acc
        return acc

    return rec(rows, cols)


def block(n: int, i: int, entries: Sequence[Sequence[Poly]]) -> PolyMatrix:
    """Embed a 2x2 block at rows/columns i, i+1 of the n x n identity."""
    rows = [list(r) for r in poly_identity(n)]
    for a in range(2):
        for b in range(2):
            rows[i - 1 + a][i - 1 + b] = lift(entries[a][b])
    return tuple(tuple(r) for r in rows)


def braid_matrix(kind: str, i: int, arg: Poly, n: int) -> PolyMatrix:
    """The matrices z, zbar, zbar_inv, x, y, coroot and lift at index i.

    >>> m = braid_matrix("z", 1, 0, 2)
    >>> [[str(e) for e in r] for r in m]
    [['0', '-1'], ['1', '0']]
    """
    t = lift(arg)
    if kind == "z":
        return block(n, i, [[t, -1], [1, 0]])
    if kind == "zbar":
        return block(n, i, [[t, 1], [-1, 0]])
    if kind == "zbar_inv":
        return block(n, i, [[0, -1], [1, t]])
    if kind == "x":
        return block(n, i, [[1, t], [0, 1]])
    if kind == "y":
        return block(n, i, [[1, 0], [t, 1]])
    if kind == "coroot":
        return block(n, i, [[t, 0], [0, t ** -1]])
    if kind == "lift":
        return block(n, i, [[0, -1], [1, 0]])
    raise ValueError(f"unknown braid matrix kind {kind!r}")


def matrix_str(mat: PolyMatrix) -> list[list[str]]:
    return [[str(e) for e in r] for r in mat]


# chart ----------------------------------------------------------------------

@dataclass(frozen=True)
class TorusChart:
    """Symbolic matrices Z_0..Z_m along the Deodhar torus."""

    u: Permutation
    beta: DoubleBraidWord
    record: SubexpressionRecord
    matrices: tuple[PolyMatrix, ...]
    params: tuple[LaurentPolynomial, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(f"t{c}" for c in self.record.solid)

    def Z(self, c: int) -> PolyMatrix:
        return self.matrices[c]

    def grid_minor(self, c: int, h: int) -> LaurentPolynomial:
        """Red (h > 0) or blue (h < 0) grid minor at time c; levels 0 and +-n give 1."""
        n = self.beta.n
        if h in (0, n, -n):
            return ONE
        key = (c, h)
        if key not in self._cache:
            uc = self.record.pds[c]
            if h > 0:
                rows = sorted(n + 1 - uc(k) for k in range(1, h + 1))
                cols = list(range(1, h + 1))
            else:
                rows = list(range(n + h + 1, n + 1))
                cols = sorted(uc.inverse()(k) for k in range(1, -h + 1))
            self._cache[key] = determinant(self.matrices[c], rows, cols)
        return self._cache[key]

    def chamber_minor(self, c: int) -> LaurentPolynomial:
        return self.grid_minor(c - 1, self.beta.letter(c))


def build_chart(u: Permutation, beta: DoubleBraidWord,
                record: SubexpressionRecord | None = None) -> TorusChart:
    record = record or compute_pds(u, beta)
    n = beta.n
    Z = from_ints(signed_matrix(compose(longest(n), u)))
    mats = [Z]
    params = []
    for c in range(beta.m, 0, -1):
        a = beta.letter(c)
        t = var(f"t{c}") if record.is_solid(c) else ZERO
        params.append(t)
        if a > 0:
            Z = matmul(Z, braid_matrix("z", a, t, n))
        else:
            Z = matmul(braid_matrix("zbar_inv", star(-a, n), t, n), Z)
        mats.append(Z)
    mats.reverse()
    params.reverse()
    return TorusChart(u, beta, record, tuple(mats), tuple(params))


# cluster variables ------------------------------------------------------------

def unitriangular_inverse(mat: list[list[int]]) -> list[list[int]]:
    """Inverse of an integer matrix that is a permuted unitriangular matrix."""
    k = len(mat)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(k)] for i, row in enumerate(mat)]
    for col in range(k):
        piv = next((r for r in range(col, k) if aug[r][col] != 0), None)
        if piv is None:
            raise ValueError("chamber order matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(k):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [[x for x in row[k:]] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("chamber order matrix is not unimodular")
    return [[int(x) for x in row] for row in inv]


def monomial_in(bases: dict[int, LaurentPolynomial], exps: dict[int, int]) -> LaurentPolynomial:
    """Exact evaluation of prod bases[c]^exps[c] via one exact division."""
    num, den = ONE, ONE
    for c, e in exps.items():
        if e > 0:
            num = num * bases[c] ** e
        elif e < 0:
            den = den * bases[c] ** (-e)
    return num.exact_divide(den)


def cluster_variables(chart: TorusChart, table: OrderTable | None = None) -> dict[int, LaurentPolynomial]:
    """x_d from the chamber minors by inverting the order matrix.

    The chamber minor of c equals prod_d x_d^{q[d][c-1][i_c]}; inverting this
    unitriangular system expresses each x_d through chamber minors.
    """
    table = table or order_table(chart.u, chart.beta, chart.record)
    solid = table.solid
    M = table.chamber_matrix(chart.beta.letters)
    inv = unitriangular_inverse(M)
    chambers = {c: chart.chamber_minor(c) for c in solid}
    out = {}
    for a, d in enumerate(solid):
        exps = {c: inv[a][b] for b, c in enumerate(solid) if inv[a][b]}
        out[d] = monomial_in(chambers, exps)
    return out


def normalized_variables(xs: dict[int, LaurentPolynomial]) -> dict[int, LaurentPolynomial]:
    return {d: x.normalized() for d, x in xs.items()}


# verification -------------------------------------------------------------------

@dataclass
class IdentityReport:
    """Outcome of one family of symbolic checks."""

    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def record(self, ok: bool, where: str) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(where)

    def to_json(self) -> dict:
        return {"name": self.name, "checked": self.checked, "passed": self.passed,
                "failures": self.failures[:20]}


def verify_stability(chart: TorusChart) -> IdentityReport:
    """A grid minor at a level other than the crossing's, on the same side, is unchanged by the crossing."""
    rep = IdentityReport("stability")
    n = chart.beta.n
    for c in range(1, chart.beta.m + 1):
        a = chart.beta.letter(c)
        for h in range(1, n):
            h = h if a > 0 else -h
            if h != a:
                rep.record(chart.grid_minor(c - 1, h) == chart.grid_minor(c, h), f"c={c} h={h}")
    return rep


def verify_short_relations(chart: TorusChart) -> IdentityReport:
    """Delta_{c,a} Delta_{c,b+1} = Delta_{c,b} Delta_{c,a-1} with b = -u_(c)(a)."""
    rep = IdentityReport("short relations")
    n = chart.beta.n
    for c in range(chart.beta.m + 1):
        uc = chart.record.pds[c]
        for a in range(1, n + 1):
            b = -uc(a)
            lhs = chart.grid_minor(c, a) * chart.grid_minor(c, b + 1)
            rhs = chart.grid_minor(c, b) * chart.grid_minor(c, a - 1)
            rep.record(lhs == rhs, f"c={c} a={a}")
    return rep


def _level(chart: TorusChart, c: int, h: int) -> LaurentPolynomial:
    return ONE if h == 0 or abs(h) >= chart.beta.n else chart.grid_minor(c, h)


def verify_move_identity(u: Permutation, beta: DoubleBraidWord, mv) -> IdentityReport:
    """The three-term relation between grid minors before and after a mutation move.

    For an opposite-sign swap on crossings (c, c+1) with first letter j:
    Delta_{c,j} Delta'_{c,j} = Delta_{c+1,j} Delta_{c-1,j} + Delta_{c,j-1} Delta_{c,j+1}.
    For a braid relation i j i -> j i j on crossings (c-1, c, c+1):
    Delta_{c,i} Delta'_{c,j} = Delta_{c+1,i} Delta_{c-2,j} + Delta_{c+1,j} Delta_{c-2,i}.
    """
    from .moves import transported_chart

    chart = build_chart(u, beta)
    moved = transported_chart(u, beta, mv)
    c = mv.position - 1
    if mv.kind == "B1":
        rep = IdentityReport("exchange identity (opposite-sign swap)")
        j = beta.letter(c)
        lhs = _level(chart, c, j) * _level(moved, c, j)
        rhs = _level(chart, c + 1, j) * _level(chart, c - 1, j) + _level(chart, c, j - 1) * _level(chart, c, j + 1)
    else:
        rep = IdentityReport("exchange identity (braid relation)")
        i, j = beta.letter(c - 1), beta.letter(c)
        lhs = _level(chart, c, i) * _level(moved, c, j)
        rhs = _level(chart, c + 1, i) * _level(chart, c - 2, j) + _level(chart, c + 1, j) * _level(chart, c - 2, i)
    rep.record(lhs == rhs, f"{mv.kind} at {mv.position}")
    return rep


def verify_ord_min(u: Permutation, beta: DoubleBraidWord, mv) -> IdentityReport:
    """Vanishing orders of both sides of the exchange identity agree for every x_e, e != d.

    The order of the left side is a sum over the two factors; the order of a sum
    of two monomials in the cluster variables is the smaller of the two.
    """
    from .moves import apply

    rep = IdentityReport("order minimum")
    n = beta.n
    _, beta2, eff = apply(u, beta, mv)
    t, t2 = order_table(u, beta), order_table(u, beta2)
    d = mv.position

    def q(tab, e, c, h):
        return 0 if h == 0 or abs(h) >= n else tab.q[e][c][h]

    c = d - 1
    for e in t.solid:
        if e == d:
            continue
        e2 = eff.mapping.get(e, e)
        if mv.kind == "B1":
            j = beta.letter(c)
            lhs = q(t, e, c, j) + q(t2, e2, c, j)
            rhs = min(q(t, e, c + 1, j) + q(t, e, c - 1, j), q(t, e, c, j - 1) + q(t, e, c, j + 1))
        else:
            i, j = beta.letter(c - 1), beta.letter(c)
            lhs = q(t, e, c, i) + q(t2, e2, c, j)
            rhs = min(q(t, e, c + 1, i) + q(t, e, c - 2, j), q(t, e, c + 1, j) + q(t, e, c - 2, i))
        rep.record(lhs == rhs, f"{mv.kind} at {d}, e={e}")
    return rep


def verify_minor_identities(u: Permutation, beta: DoubleBraidWord) -> dict[str, IdentityReport]:
    """Every identity family that applies to (u, beta), each as one report.

    >>> from braidcluster.perm import simple
    >>> reps = verify_minor_identities(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3))
    >>> all(r.passed for r in reps.values()), sorted(reps)
    (True, ['grid monomials', 'short relations', 'stability'])
    """
    from .moves import enumerate_applicable

    chart = build_chart(u, beta)
    reports = {"stability": verify_stability(chart),
               "short relations": verify_short_relations(chart),
               "grid monomials": verify_grid_monomials(chart)}
    for mv in enumerate_applicable(u, beta):
        if not mv.mutation:
            continue
        for rep in (verify_move_identity(u, beta, mv), verify_ord_min(u, beta, mv)):
            agg = reports.setdefault(rep.name, IdentityReport(rep.name))
            agg.checked += rep.checked
            agg.failures += rep.failures
    return reports


def verify_grid_monomials(chart: TorusChart, table: OrderTable | None = None) -> IdentityReport:
    """Every grid minor equals +-prod_d x_d^{q[d][c][h]}."""
    table = table or order_table(chart.u, chart.beta, chart.record)
    xs = cluster_variables(chart, table)
    rep = IdentityReport("grid monomials")
    for c in range(chart.beta.m + 1):
        for h in range(1, chart.beta.n):
            for level in (h, -h):
                expected = ONE
                for d in table.solid:
                    if table.q[d][c][level]:
                        expected = expected * xs[d]
                got = chart.grid_minor(c, level)
                rep.record(got == expected or got == -expected, f"c={c} h={level}")
    return rep


def rank_profile(rows: Sequence[Sequence[int]], p: int) -> tuple[tuple[int, ...], ...]:
    """r[i][j] = rank over F_p of rows i..n and columns 1..j (1-based)."""
    n = len(rows)
    out = []
    for i in range(1, n + 1):
        line = []
        for j in range(1, n + 1):
            sub = [[x % p for x in r[:j]] for r in rows[i - 1:]]
            line.append(_rank_mod(sub, p))
        out.append(tuple(line))
    return tuple(out)


def _rank_mod(mat: list[list[int]], p: int) -> int:
    mat = [r[:] for r in mat]
    rank, cols = 0, len(mat[0]) if mat else 0
    for col in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][col], -1, p)
        for r in range(len(mat)):
            if r != rank and mat[r][col]:
                f = mat[r][col] * inv % p
                mat[r] = [(x - f * y) % p for x, y in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def permutation_profile(w: Permutation) -> tuple[tuple[int, ...], ...]:
    """Rank profile of the permutation matrix of w: #{k <= j : w(k) >= i}."""
    n = w.n
    return tuple(tuple(sum(1 for k in range(1, j + 1) if w(k) >= i) for j in range(1, n + 1))
                 for i in range(1, n + 1))


def verify_chart_validity(chart: TorusChart, trials: int = 3, seed: int = 0,
                          p: int = 1_000_003) -> IdentityReport:
    """Z_c lies in the double Bruhat cell of w0 u_(c) at random points, and det Z_c = 1.

    A random point mod a large prime lands in the generic cell unless it hits a
    hypersurface of degree at most m, which happens with probability <= m/p.
    """
    import random

    rng = random.Random(seed)
    rep = IdentityReport("chart validity")
    n = chart.beta.n
    w0 = longest(n)
    for c, Z in enumerate(chart.matrices):
        rep.record(determinant(Z) == ONE, f"det Z_{c}")
    for _ in range(trials):
        point = {s: rng.randrange(1, p) for s in chart.symbols}
        for c, Z in enumerate(chart.matrices):
            rows = [[e.evaluate_mod(point, p) for e in r] for r in Z]
            want = permutation_profile(compose(w0, chart.record.pds[c]))
            rep.record(rank_profile(rows, p) == want, f"cell of Z_{c}")
    return rep


def verify_mutation_regularity(u: Permutation, beta: DoubleBraidWord, d: int,
                               xs: dict[int, LaurentPolynomial] | None = None,
                               quiver=None) -> IdentityReport:
    """The exchange relation at d divides exactly by x_d.

    >>> from braidcluster.perm import simple
    >>> verify_mutation_regularity(simple(2, 3), DoubleBraidWord((-2, 1, 2, 1, -1), 3), 4).passed
    True
    """
    from .quiver import quiver_from_half_arrows

    table = order_table(u, beta)
    if d not in table.mutable:
        raise ValueError(f"crossing {d} is not mutable")
    if xs is None:
        xs = cluster_variables(build_chart(u, beta), table)
    quiver = quiver or quiver_from_half_arrows(table, beta.letters)
    rep = IdentityReport(f"exchange regularity at {d}")
    try:
        mutated_variable(xs, quiver, d)
        rep.record(True, f"d={d}")
    except InexactDivision:
        rep.record(False, f"d={d}")
    return rep


def mutated_variable(xs: dict[int, LaurentPolynomial], quiver, d: int) -> LaurentPolynomial:
    """x'_d from the exchange relation; raises InexactDivision if it is not Laurent."""
    incoming, outgoing = ONE, ONE
    for c in quiver.vertices:
        k = quiver.b(c, d)
        if k > 0:
            incoming = incoming * xs[c] ** k
        elif k < 0:
            outgoing = outgoing * xs[c] ** (-k)
    return (incoming + outgoing).exact_divide(xs[d])
