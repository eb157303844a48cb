"""
Double braid moves on (u, beta): detection, application, quiver-level
invariance checks, and transport of torus-chart parameters.

Moves act on a window of adjacent crossings; ``position`` is the rightmost
crossing of the window (for B4 and B5 it is m and 1).

>>> from braidcluster.perm import simple
>>> from braidcluster.braid import DoubleBraidWord
>>> beta = DoubleBraidWord((-2, 1, 2, 1, -1), 3)
>>> [(mv.kind, mv.position, mv.mutation) for mv in enumerate_applicable(simple(2, 3), beta)]
[('B1', 2, False), ('B3', 4, False), ('B1', 5, False), ('B5', 1, False)]
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .braid import (
    DoubleBraidWord,
    compute_aps,
    compute_pds,
    order_table,
)
from .laurent import LaurentPolynomial, var
from .perm import Permutation, compose, longest, simple, star
from .quiver import IceQuiver, mutate, quiver_from_half_arrows


class InapplicableMove(ValueError):
    pass


class VerificationFailure(AssertionError):
    """A move changed the quiver in a way the invariance theorem forbids."""

    def __init__(self, message: str, before: IceQuiver | None = None, after: IceQuiver | None = None):
        super().__init__(message)
        self.before, self.after = before, after


@dataclass(frozen=True)
class MoveInstance:
    kind: str
    position: int
    special: bool = False
    fully_solid: bool = False

    @property
    def solid_special(self) -> bool:
        return self.special and self.fully_solid

    @property
    def mutation(self) -> bool:
        return (self.kind == "B1" and self.solid_special) or (self.kind == "B3" and self.fully_solid)

    @property
    def window(self) -> tuple[int, ...]:
        if self.kind in ("B1", "B2"):
            return (self.position - 1, self.position)
        if self.kind == "B3":
            return (self.position - 2, self.position - 1, self.position)
        return (self.position,)

    def to_json(self) -> dict:
        return {"kind": self.kind, "position": self.position, "special": self.special,
                "fully_solid": self.fully_solid, "mutation": self.mutation}


@dataclass(frozen=True)
class Effect:
    """What a move does to the ice quiver.

    ``kind`` is 'mutate' (at ``vertex``, then relabel by ``mapping``), 'relabel',
    'mutable-part' (B5: only the mutable part is preserved) or 'identity'.
    """

    kind: str
    vertex: int | None = None
    mapping: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.vertex is not None:
            out["vertex"] = self.vertex
        if self.mapping:
            out["mapping"] = {str(k): v for k, v in sorted(self.mapping.items())}
        return out


def _is_special(u: Permutation, beta: DoubleBraidWord, d: int) -> bool:
    """Speciality of the opposite-sign pair at (d-1, d), read in its blue-first form."""
    a, b = beta.letter(d - 1), beta.letter(d)
    if a > 0:
        beta = swapped(beta, d)
        a, b = b, a
    rec = compute_pds(u, beta)
    w = rec.pds[d - 1]
    n = beta.n
    return compose(w, simple(b, n)) == compose(simple(-a, n), w)


def swapped(beta: DoubleBraidWord, d: int) -> DoubleBraidWord:
    letters = list(beta.letters)
    letters[d - 2], letters[d - 1] = letters[d - 1], letters[d - 2]
    return DoubleBraidWord(tuple(letters), beta.n)


def enumerate_applicable(u: Permutation, beta: DoubleBraidWord) -> list[MoveInstance]:
    """All move instances, left to right; B4 (only for u = w0) and B5 come last."""
    rec = compute_pds(u, beta)
    L, n = beta.letters, beta.n
    out = []
    for d in range(2, beta.m + 1):
        a, b = L[d - 2], L[d - 1]
        solid2 = rec.is_solid(d - 1) and rec.is_solid(d)
        if (a > 0) != (b > 0):
            out.append(MoveInstance("B1", d, _is_special(u, beta, d), solid2))
        elif abs(a - b) > 1:
            out.append(MoveInstance("B2", d, False, solid2))
        if d >= 3:
            x, y, z = L[d - 3], L[d - 2], L[d - 1]
            if x == z and (x > 0) == (y > 0) and abs(abs(x) - abs(y)) == 1:
                out.append(MoveInstance("B3", d, False, solid2 and rec.is_solid(d - 2)))
    if beta.m and u == longest(n):
        out.append(MoveInstance("B4", beta.m, False, rec.is_solid(beta.m)))
    if beta.m:
        out.append(MoveInstance("B5", 1, False, rec.is_solid(1)))
    return out


def _aps_matching(u: Permutation, beta: DoubleBraidWord, beta2: DoubleBraidWord,
                  window: tuple[int, ...]) -> dict[int, int]:
    """Match solid crossings inside the window by their almost positive sequence at the left wall."""
    wall = window[0] - 1
    rec, rec2 = compute_pds(u, beta), compute_pds(u, beta2)
    left = {c: compute_aps(u, beta, c, rec).seq[wall] for c in window if rec.is_solid(c)}
    right = {c: compute_aps(u, beta2, c, rec2).seq[wall] for c in window if rec2.is_solid(c)}
    mapping = {}
    for c, v in left.items():
        hits = [c2 for c2, v2 in right.items() if v2 == v]
        if len(hits) != 1:
            raise VerificationFailure(f"no unique multicurve match for crossing {c}")
        mapping[c] = hits[0]
    return mapping


def find_move(u: Permutation, beta: DoubleBraidWord, kind: str, position: int) -> MoveInstance:
    """The applicable move of the given kind at a position, with its flags filled in."""
    for mv in enumerate_applicable(u, beta):
        if mv.kind == kind and mv.position == position:
            return mv
    raise InapplicableMove(f"{kind} does not apply at {position}")


def apply(u: Permutation, beta: DoubleBraidWord, mv: MoveInstance) -> tuple[Permutation, DoubleBraidWord, Effect]:
    """Apply a move and report its expected effect on the quiver.

    >>> from braidcluster.perm import longest
    >>> _, b2, eff = apply(longest(2), DoubleBraidWord((1, 1, 1), 2), MoveInstance("B5", 1))
    >>> b2.letters, eff.kind
    ((-1, 1, 1), 'mutable-part')
    """
    L, n, d = list(beta.letters), beta.n, mv.position
    mv = find_move(u, beta, mv.kind, d)
    if mv.kind in ("B1", "B2"):
        new = swapped(beta, d)
        if mv.mutation:
            return u, new, Effect("mutate", d)
        if mv.kind == "B1" and mv.special:
            return u, new, Effect("identity")
        return u, new, Effect("relabel", mapping=_transposition(d - 1, d))
    if mv.kind == "B3":
        x, y = L[d - 3], L[d - 2]
        L[d - 3:d] = [y, x, y]
        new = DoubleBraidWord(tuple(L), n)
        if mv.fully_solid:
            # the two outer crossings trade places: d-2 and d-1 swap labels
            return u, new, Effect("mutate", d, _transposition(d - 2, d - 1))
        return u, new, Effect("relabel", mapping=_aps_matching(u, beta, new, mv.window))
    if mv.kind == "B4":
        L[-1] = -star(L[-1], n)
        return u, DoubleBraidWord(tuple(L), n), Effect("identity")
    if mv.kind == "B5":
        L[0] = -L[0]
        return u, DoubleBraidWord(tuple(L), n), Effect("mutable-part")
    raise InapplicableMove(f"unknown move {mv.kind}")


def _transposition(a: int, b: int) -> dict[int, int]:
    return {a: b, b: a}


def _quiver(u: Permutation, beta: DoubleBraidWord) -> IceQuiver:
    return quiver_from_half_arrows(order_table(u, beta), beta.letters)


def _relabel_solid(q: IceQuiver, mapping: dict[int, int]) -> IceQuiver:
    return q.relabel({v: mapping.get(v, v) for v in q.vertices})


@dataclass(frozen=True)
class InvarianceReport:
    move: MoveInstance
    effect: Effect
    passed: bool
    before: IceQuiver
    after: IceQuiver

    def to_json(self) -> dict:
        from .quiver import to_json

        return {"move": self.move.to_json(), "effect": self.effect.to_json(), "passed": self.passed,
                "before": to_json(self.before), "after": to_json(self.after)}


def verify_invariance(u: Permutation, beta: DoubleBraidWord, mv: MoveInstance,
                      raise_on_failure: bool = True) -> InvarianceReport:
    """Recompute the quiver after the move from scratch and compare with the prediction.

    >>> from braidcluster.perm import longest
    >>> beta = DoubleBraidWord((-1, 1, 1), 2)
    >>> mv = MoveInstance("B1", 2, True, True)
    >>> verify_invariance(longest(2), beta, mv).passed
    True
    """
    before = _quiver(u, beta)
    u2, beta2, eff = apply(u, beta, mv)
    after = _quiver(u2, beta2)
    if eff.kind == "mutate":
        ok = eff.vertex in before.mutable and _relabel_solid(mutate(before, eff.vertex), eff.mapping) == after
    elif eff.kind == "relabel":
        ok = _relabel_solid(before, eff.mapping) == after
    elif eff.kind == "mutable-part":
        ok = before.mutable_part() == after.mutable_part()
    else:
        ok = before == after
    report = InvarianceReport(mv, eff, ok, before, after)
    if not ok and raise_on_failure:
        raise VerificationFailure(f"{mv.kind} at {mv.position} broke invariance", before, after)
    return report


# chart transport ---------------------------------------------------------------

def transport_parameters(u: Permutation, beta: DoubleBraidWord, mv: MoveInstance) -> dict[str, LaurentPolynomial] | None:
    """Symbols of the chart after the move, written in the symbols before it.

    Available for B1 and B2 when both crossings are solid or the swap keeps the
    hollow crossing's letter hollow, and for fully solid B3.  Other moves
    rearrange flags and return None.

    >>> beta = DoubleBraidWord((1, 2, 1), 3)
    >>> from braidcluster.perm import identity
    >>> {k: str(v) for k, v in transport_parameters(identity(3), beta, MoveInstance("B3", 3, False, True)).items()}
    {'t1': 't3', 't2': 't1*t3 - t2', 't3': 't1'}
    """
    d = mv.position
    rec = compute_pds(u, beta)
    if mv.kind in ("B1", "B2"):
        _, beta2, _ = apply(u, beta, mv)
        rec2 = compute_pds(u, beta2)
        # the swapped letter keeps its parameter only if its solid/hollow status moves with it
        if rec.is_solid(d - 1) != rec2.is_solid(d) or rec.is_solid(d) != rec2.is_solid(d - 1):
            return None
        out = {}
        if rec2.is_solid(d):
            out[f"t{d}"] = var(f"t{d - 1}")
        if rec2.is_solid(d - 1):
            out[f"t{d - 1}"] = var(f"t{d}")
        return out
    if mv.kind == "B3" and mv.fully_solid:
        t1, t2, t3 = var(f"t{d - 2}"), var(f"t{d - 1}"), var(f"t{d}")
        return {f"t{d - 2}": t3, f"t{d - 1}": t1 * t3 - t2, f"t{d}": t1}
    return None


def verify_transport(u: Permutation, beta: DoubleBraidWord, mv: MoveInstance) -> bool | None:
    """Check that the transported chart reproduces Z_c outside the move window."""
    from .minors import build_chart

    sub = transport_parameters(u, beta, mv)
    if sub is None:
        return None
    _, beta2, _ = apply(u, beta, mv)
    chart, chart2 = build_chart(u, beta), build_chart(u, beta2)
    lo = mv.window[0] - 1
    for c in list(range(0, lo + 1)) + list(range(mv.position, beta.m + 1)):
        Z2 = tuple(tuple(e.substitute(sub) for e in row) for row in chart2.Z(c))
        if Z2 != chart.Z(c):
            return False
    return True


def transported_chart(u: Permutation, beta: DoubleBraidWord, mv: MoveInstance):
    """Chart of the moved word with its symbols rewritten in the original ones."""
    from .minors import TorusChart, build_chart

    sub = transport_parameters(u, beta, mv)
    if sub is None:
        raise InapplicableMove(f"no parameter transport for {mv.kind}")
    _, beta2, _ = apply(u, beta, mv)
    chart2 = build_chart(u, beta2)
    mats = tuple(tuple(tuple(e.substitute(sub) for e in row) for row in Z) for Z in chart2.matrices)
    params = tuple(p.substitute(sub) for p in chart2.params)
    return TorusChart(u, beta2, chart2.record, mats, params)


# conjugation ------------------------------------------------------------------

def conjugation_move(u: Permutation, beta: DoubleBraidWord) -> tuple[DoubleBraidWord, list[MoveInstance]]:
    """Rotate the first letter to the end: i beta0 -> beta0 i*, for u = w0.

    Realized as B5, then B1 repeatedly to carry the flipped letter to the end,
    then B4.  Returns the final word and the moves applied.

    >>> from braidcluster.perm import longest
    >>> conjugation_move(longest(2), DoubleBraidWord((1, 1), 2))[0].letters
    (1, 1)
    """
    if u != longest(beta.n):
        raise InapplicableMove("the conjugation move needs u = w0")
    if not beta.m:
        return beta, []
    steps = []
    rec = compute_pds(u, beta)
    mv = MoveInstance("B5", 1, False, rec.is_solid(1))
    _, cur, _ = apply(u, beta, mv)
    steps.append(mv)
    L = list(cur.letters)
    pos = 1
    while pos < beta.m:
        # move the flipped letter past the next one; same-sign neighbours need B4-style flips
        if (L[pos - 1] > 0) == (L[pos] > 0):
            raise InapplicableMove("conjugation needs the remaining letters to have the opposite sign")
        mv = next(x for x in enumerate_applicable(u, cur) if x.kind == "B1" and x.position == pos + 1)
        _, cur, _ = apply(u, cur, mv)
        steps.append(mv)
        L = list(cur.letters)
        pos += 1
    mv = next(x for x in enumerate_applicable(u, cur) if x.kind == "B4")
    _, cur, _ = apply(u, cur, mv)
    steps.append(mv)
    return cur, steps
