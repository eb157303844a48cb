"""
Command-line front end.

Instances are given as ``u=... beta=...`` tokens (``;`` also separates them),
or as ``le=...`` for a Le-diagram.  Every JSON document carries ``schema: 1``.

Exit codes: 0 ok, 2 parse error, 3 not admissible, 4 verification failure,
5 budget exhausted.

>>> job = parse_job(["u=s2; beta=-2 1 2 1 -1"])
>>> job.n, str(job.u), job.beta.letters
(3, '1,3,2', (-2, 1, 2, 1, -1))
"""
from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .braid import (
    DoubleBraidWord,
    NotAdmissible,
    ParseError,
    admissible_pairs,
    demazure_product_of_word,
    le_diagram_to_pair,
    order_table,
    parse_le_diagram,
    parse_word,
    random_instance,
    random_le_diagram,
)
from .count import (
    BudgetExceeded,
    deodhar_count,
    fq_brute_force,
    homfly,
    link_word,
    point_count_function,
    top_a_term,
    verify_thm_pc,
)
from .perm import Permutation, bruhat_leq, parse_permutation

EXIT_OK, EXIT_PARSE, EXIT_ADMISSIBLE, EXIT_VERIFY, EXIT_BUDGET = 0, 2, 3, 4, 5


# input ------------------------------------------------------------------------------

@dataclass(frozen=True)
class JobSpec:
    """A parsed instance."""

    n: int
    u: Permutation
    beta: DoubleBraidWord
    source: str

    def to_json(self) -> dict:
        return {"n": self.n, "u": list(self.u.images), "beta": list(self.beta.letters)}


def _fields(text: str) -> dict[str, tuple[str, int]]:
    """key -> (value, byte offset of the value)."""
    out: dict[str, tuple[str, int]] = {}
    pos = 0
    for part in text.split(";"):
        stripped = part.strip()
        if stripped:
            start = pos + part.index(stripped)
            if "=" not in stripped:
                raise ParseError(f"expected key=value at offset {start}: {stripped!r}")
            key, value = stripped.split("=", 1)
            key = key.strip().lower()
            if key not in ("u", "beta", "n", "le"):
                raise ParseError(f"unknown key {key!r} at offset {start}")
            eq = start + stripped.index("=") + 1
            out[key] = (value.strip(), eq + len(value) - len(value.lstrip()))
        pos += len(part) + 1
    return out


def parse_job(tokens: list[str]) -> JobSpec:
    """Parse ``u=``, ``beta=``, ``n=`` and ``le=`` tokens.

    >>> parse_job(["le=+./.+", "n=4"]).beta.letters
    (2, 3, 1, 2)
    >>> parse_job(["u=2,1", "beta=1 1"]).u
    Permutation(images=(2, 1))
    """
    text = "; ".join(tokens)
    fields = _fields(text)
    n = None
    if "n" in fields:
        value, off = fields["n"]
        if not value.isdigit() or int(value) < 1:
            raise ParseError(f"bad rank {value!r} at offset {off}")
        n = int(value)
    if "le" in fields:
        value, off = fields["le"]
        try:
            diagram = parse_le_diagram(value, n)
            u, beta = le_diagram_to_pair(diagram)
        except ParseError as exc:
            raise ParseError(f"{exc} (Le-diagram at offset {off})") from None
        except ValueError as exc:
            raise NotAdmissible(str(exc)) from None
        return JobSpec(diagram.n, u, beta, text)
    if "beta" not in fields:
        raise ParseError("missing beta=")
    beta_text, beta_off = fields["beta"]
    u_text, u_off = fields.get("u", ("id", 0))
    letters = []
    for tok in beta_text.replace(",", " ").split():
        try:
            letters.append(int(tok))
        except ValueError:
            raise ParseError(f"bad letter {tok!r} at offset {beta_off + beta_text.index(tok)}") from None
    if n is None:
        if u_text and u_text[0].isdigit():
            n = len(u_text.split(","))
        else:
            idx = [int(p) for p in u_text.replace("s", " ").replace(",", " ").split() if p.isdigit()]
            n = max([abs(a) for a in letters] + idx + [0]) + 1
    try:
        u = parse_permutation(u_text, n)
    except ValueError as exc:
        raise ParseError(f"{exc} (u at offset {u_off})") from None
    try:
        beta = parse_word(beta_text, n)
    except ParseError as exc:
        raise ParseError(f"{exc} (beta at offset {beta_off})") from None
    if not bruhat_leq(u, demazure_product_of_word(beta)):
        raise NotAdmissible(f"u = {u} is not below the Demazure product of beta = {beta}")
    return JobSpec(n, u, beta, text)


def _dump(obj: dict) -> str:
    return json.dumps({"schema": 1, **obj}, sort_keys=True, indent=2)


# commands --------------------------------------------------------------------------

def seed_document(job: JobSpec) -> dict:
    from .minors import build_chart, cluster_variables
    from .quiver import seed_quiver, to_json

    table = order_table(job.u, job.beta)
    xs = cluster_variables(build_chart(job.u, job.beta), table)
    return {
        "command": "seed",
        "instance": job.to_json(),
        "J": list(table.solid),
        "frozen": sorted(table.frozen),
        "mutable": sorted(table.mutable),
        "quiver": to_json(seed_quiver(job.u, job.beta)),
        "cluster_variables": {str(d): str(x) for d, x in sorted(xs.items())},
    }


def cmd_seed(args) -> int:
    print(_dump(seed_document(parse_job(args.instance))))
    return EXIT_OK


# verification families: each returns (passed, detail) or raises BudgetExceeded

def _family_halfarrow(u, beta, opts):
    from .graph3d import build_graph
    from .quiver import quiver_from_cycles, seed_quiver

    a, b = quiver_from_cycles(build_graph(u, beta)), seed_quiver(u, beta)
    return a == b, {}


def _family_moves(u, beta, opts):
    from .moves import enumerate_applicable, verify_invariance

    reports = [verify_invariance(u, beta, mv, raise_on_failure=False) for mv in enumerate_applicable(u, beta)]
    bad = [r.move.to_json() for r in reports if not r.passed]
    return not bad, {"moves": len(reports), "failed": bad}


def _family_identities(u, beta, opts):
    from .minors import verify_minor_identities, verify_mutation_regularity

    reps = verify_minor_identities(u, beta)
    ok = all(r.passed for r in reps.values())
    for d in sorted(order_table(u, beta).mutable):
        ok &= verify_mutation_regularity(u, beta, d).passed
    return ok, {name: r.checked for name, r in reps.items()}


def _family_sinkrec(u, beta, opts):
    from .quiver import Unknown, check_certificate, is_sink_recurrent, seed_quiver

    q = seed_quiver(u, beta)
    cert = is_sink_recurrent(q, budget=opts.get("budget", 20000))
    if isinstance(cert, Unknown):
        raise BudgetExceeded("no sink-recurrence certificate within the search budget")
    return check_certificate(q, cert), {"certificate": cert.to_json()}


def _family_rank(u, beta, opts):
    from .quiver import really_full_rank, seed_quiver

    return really_full_rank(seed_quiver(u, beta)), {}


def _family_count(u, beta, opts):
    walk = deodhar_count(u, beta)
    qs = opts.get("qs", (2, 3, 5))
    got = {q: fq_brute_force(u, beta, q, budget=opts.get("budget", 10 ** 7)) for q in qs}
    return all(walk(q) == c for q, c in got.items()), {"walk": walk.to_json(), "brute": got}


def _family_pc(u, beta, opts):
    rep = verify_thm_pc(u, beta)
    return rep.passed, rep.to_json()


def _family_plane(u, beta, opts):
    from .cycles import plane_check
    from .graph3d import build_graph

    if any(a < 0 for a in beta.letters):
        return True, {"skipped": "blue letters"}
    rep = plane_check(build_graph(u, beta))
    return rep.passed, rep.to_json()


FAMILIES: dict[str, Callable] = {
    "halfarrow": _family_halfarrow,
    "moves": _family_moves,
    "identities": _family_identities,
    "sinkrec": _family_sinkrec,
    "rank": _family_rank,
    "count": _family_count,
    "pc": _family_pc,
    "plane": _family_plane,
}


def _instances(args, rng):
    if args.instance:
        job = parse_job(args.instance)
        yield job.u, job.beta
        return
    if args.family == "plane":
        for _ in range(args.fuzz or 20):
            diagram = random_le_diagram(rng, rng.randint(1, args.n or 3), rng.randint(1, args.m or 4))
            yield le_diagram_to_pair(diagram)
        return
    n_max = args.max or args.n or 3
    m_max = args.max or args.m or 4
    if args.fuzz:
        for _ in range(args.fuzz):
            yield random_instance(rng, n_max, m_max)
        return
    for n in range(2, n_max + 1):
        for m in range(m_max + 1):
            yield from admissible_pairs(n, m)


def run_family(family: str, instances, opts: dict | None = None) -> tuple[list[dict], int]:
    """Run one family; returns per-instance rows and the number of budget stops."""
    check = FAMILIES[family]
    rows, budget_stops = [], 0
    for u, beta in instances:
        t0 = time.perf_counter()
        try:
            ok, detail = check(u, beta, opts or {})
            status = "pass" if ok else "fail"
        except BudgetExceeded as exc:
            budget_stops += 1
            status, detail = "budget", {"reason": str(exc)}
        rows.append({"family": family, "n": beta.n, "m": beta.m, "u": str(u), "beta": str(beta),
                     "status": status, "seconds": round(time.perf_counter() - t0, 6), "detail": detail})
    return rows, budget_stops


def write_report(rows: list[dict], directory: Path) -> list[Path]:
    """results.csv plus a summary figure."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    directory.mkdir(parents=True, exist_ok=True)
    table = directory / "results.csv"
    with table.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["family", "n", "m", "u", "beta", "status", "seconds"])
        for r in rows:
            writer.writerow([r["family"], r["n"], r["m"], r["u"], r["beta"], r["status"], r["seconds"]])
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.5))
    lengths = sorted({r["m"] for r in rows})
    for status, colour in (("pass", "tab:green"), ("fail", "tab:red"), ("budget", "tab:orange")):
        counts = [sum(1 for r in rows if r["m"] == m and r["status"] == status) for m in lengths]
        if any(counts):
            left.bar(lengths, counts, color=colour, label=status, alpha=0.8)
    left.set_xlabel("word length m")
    left.set_ylabel("instances")
    left.legend()
    right.scatter([r["m"] for r in rows], [r["seconds"] for r in rows], s=6)
    right.set_xlabel("word length m")
    right.set_ylabel("seconds")
    fig.tight_layout()
    figure = directory / "summary.png"
    fig.savefig(figure, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return [table, figure]


def cmd_verify(args) -> int:
    rng = random.Random(args.seed)
    opts = {"budget": args.budget} if args.budget else {}
    rows, budget_stops = run_family(args.family, _instances(args, rng), opts)
    failures = [r for r in rows if r["status"] == "fail"]
    doc = {"command": "verify", "family": args.family, "seed": args.seed, "instances": len(rows),
           "failures": failures[:20], "failure_count": len(failures), "budget_stops": budget_stops,
           "passed": not failures and not budget_stops}
    if args.report:
        doc["report_files"] = [str(p) for p in write_report(rows, Path(args.report))]
    print(_dump(doc))
    if failures:
        return EXIT_VERIFY
    return EXIT_BUDGET if budget_stops else EXIT_OK


def render_svg(job: JobSpec, path: Path, cycle: int | None = None) -> None:
    """Red and blue projections with grid-minor face labels and an optional cycle."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .graph3d import build_graph

    matplotlib.rcParams["svg.hashsalt"] = "braidcluster"
    g = build_graph(job.u, job.beta)
    n, m = g.n, g.m
    fig, axes = plt.subplots(1, 2, figsize=(max(4, 1.2 * m + 2) * 2, 0.8 * n + 1.5))
    for ax, colour, coord, point in ((axes[0], "red", 1, g.red_point), (axes[1], "blue", 0, g.blue_point)):
        ax.set_title(f"{colour} projection")
        ax.set_xlim(-0.5, m + 0.5)
        ax.set_ylim(0.5, n + 0.5)
        for s in range(1, n + 1):
            ts = [0.0]
            ys = [g.dot(0, s)[coord]]
            for c in range(1, m + 1):
                ts += [c - 0.75, c - 0.25]
                ys += [g.dot(c - 1, s)[coord], g.dot(c, s)[coord]]
            ts.append(float(m))
            ys.append(g.dot(m, s)[coord])
            ax.plot(ts, ys, color="0.3", lw=1)
        for b in g.bridges.values():
            if b.color != colour:
                continue
            (t1, y1), (t2, y2) = point(b.vertex(1)), point(b.vertex(2))
            ax.plot([t1, t2], [y1, y2], color=colour, lw=2)
            for which, (t, y) in ((1, (t1, y1)), (2, (t2, y2))):
                face = "black" if b.vertex_color(which) == "black" else "white"
                ax.scatter([t], [y], s=40, facecolor=face, edgecolor="black", zorder=3)
        sign = 1 if colour == "red" else -1
        for c in range(m + 1):
            for h in range(1, n):
                ax.text(c, h + 0.5, f"{c},{sign * h}", fontsize=6, ha="center", va="center", color="0.5")
        ax.set_xlabel("time")
    if cycle is not None:
        from .cycles import cycle_of

        for walk in cycle_of(g, cycle).walks:
            for _, a, b in walk:
                (t1, y1), (t2, y2) = g.red_point(a), g.red_point(b)
                axes[0].plot([t1, t2], [y1, y2], color="green", lw=3, alpha=0.5)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_render(args) -> int:
    from .graph3d import build_graph
    from .quiver import seed_quiver, to_dot

    job = parse_job(args.instance)
    out = Path(args.out) if args.out else None
    if args.format == "dot":
        text = to_dot(seed_quiver(job.u, job.beta)) + "\n"
        if out:
            out.write_text(text)
        else:
            sys.stdout.write(text)
    elif args.format == "json":
        text = _dump({"command": "render", "graph": build_graph(job.u, job.beta).to_json()}) + "\n"
        if out:
            out.write_text(text)
        else:
            sys.stdout.write(text)
    else:
        out = out or Path("graph.svg")
        render_svg(job, out, args.cycle)
        print(_dump({"command": "render", "file": str(out)}))
    return EXIT_OK


def cmd_moves(args) -> int:
    from .moves import apply, enumerate_applicable, verify_invariance

    job = parse_job(args.instance)
    moves = enumerate_applicable(job.u, job.beta)
    listing = [{"index": k, **mv.to_json()} for k, mv in enumerate(moves, start=1)]
    if args.apply is not None:
        if not 1 <= args.apply <= len(moves):
            raise ParseError(f"--apply {args.apply}: there are {len(moves)} applicable moves")
        mv = moves[args.apply - 1]
        u2, b2, eff = apply(job.u, job.beta, mv)
        print(_dump({"command": "moves", "instance": job.to_json(), "move": mv.to_json(),
                     "result": {"u": list(u2.images), "beta": list(b2.letters)}, "effect": eff.to_json()}))
        return EXIT_OK
    if args.verify_all:
        reports = [verify_invariance(job.u, job.beta, mv, raise_on_failure=False) for mv in moves]
        ok = all(r.passed for r in reports)
        print(_dump({"command": "moves", "instance": job.to_json(),
                     "reports": [{"move": r.move.to_json(), "effect": r.effect.to_json(), "passed": r.passed}
                                 for r in reports], "passed": ok}))
        return EXIT_OK if ok else EXIT_VERIFY
    print(_dump({"command": "moves", "instance": job.to_json(), "moves": listing}))
    return EXIT_OK


def cmd_count(args) -> int:
    job = parse_job(args.instance)
    doc = {"command": "count", "method": args.method, "instance": job.to_json()}
    if args.method == "walk":
        poly = deodhar_count(job.u, job.beta)
        doc["count"] = poly.to_json()
        doc["text"] = str(poly)
        doc["R"] = point_count_function(job.u, job.beta).to_json()
        if args.q is not None:
            doc["q"] = args.q
            doc["value"] = poly(args.q)
    else:
        if args.q is None:
            raise ParseError("--method brute needs --q")
        doc["q"] = args.q
        try:
            doc["value"] = fq_brute_force(job.u, job.beta, args.q, budget=args.budget)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    print(_dump(doc))
    return EXIT_OK


def cmd_homfly(args) -> int:
    job = parse_job(args.instance)
    link = link_word(job.u, job.beta)
    p = homfly(link)
    top, coeff = top_a_term(p)
    print(_dump({"command": "homfly", "instance": job.to_json(), "link": link.to_json(),
                 "homfly": p.to_json(), "text": str(p), "top_a_degree": top,
                 "top_coefficient": str(coeff)}))
    return EXIT_OK


def cmd_verify_pc(args) -> int:
    job = parse_job(args.instance)
    rep = verify_thm_pc(job.u, job.beta)
    print(_dump({"command": "verify-pc", **rep.to_json()}))
    return EXIT_OK if rep.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="braidcluster",
                                description="Seeds, quivers and point counts of braid varieties.")
    sub = p.add_subparsers(dest="command", required=True)

    def instance(sp, required=True):
        sp.add_argument("instance", nargs="+" if required else "*",
                        help="u=<one-line or s-word> beta=<signed ints> [n=<rank>] | le=<rows of . and +>")

    sp = sub.add_parser("seed", help="cluster seed as JSON")
    instance(sp)
    sp.set_defaults(func=cmd_seed)

    sp = sub.add_parser("verify", help="run a verification family on an instance or a range")
    instance(sp, required=False)
    sp.add_argument("--family", choices=sorted(FAMILIES), default="halfarrow")
    sp.add_argument("--n", type=int, help="largest rank in the range")
    sp.add_argument("--m", type=int, help="largest word length in the range")
    sp.add_argument("--max", type=int, help="shorthand for --n K --m K")
    sp.add_argument("--fuzz", type=int, help="number of random instances instead of a full sweep")
    sp.add_argument("--seed", type=int, default=0, help="random seed (recorded in the report)")
    sp.add_argument("--budget", type=int, help="search or enumeration budget")
    sp.add_argument("--report", help="directory for results.csv and summary.png")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("render", help="SVG projections, quiver DOT or graph JSON")
    instance(sp)
    sp.add_argument("--format", choices=("svg", "dot", "json"), default="svg")
    sp.add_argument("--out")
    sp.add_argument("--cycle", type=int, help="overlay the relative cycle of this crossing")
    sp.set_defaults(func=cmd_render)

    sp = sub.add_parser("moves", help="list, apply or verify double braid moves")
    instance(sp)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--list", action="store_true", default=True)
    grp.add_argument("--apply", type=int, metavar="K", help="apply the K-th listed move")
    grp.add_argument("--verify-all", action="store_true")
    sp.set_defaults(func=cmd_moves)

    sp = sub.add_parser("count", help="point count over F_q")
    instance(sp)
    sp.add_argument("--method", choices=("walk", "brute"), default="walk")
    sp.add_argument("--q", type=int)
    sp.add_argument("--budget", type=int, default=10 ** 7)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("homfly", help="HOMFLY polynomial of the braid Richardson link")
    instance(sp)
    sp.set_defaults(func=cmd_homfly)

    sp = sub.add_parser("verify-pc", help="compare the point-count function with the HOMFLY top term")
    instance(sp)
    sp.set_defaults(func=cmd_verify_pc)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotAdmissible as exc:
        print(f"not admissible: {exc}", file=sys.stderr)
        return EXIT_ADMISSIBLE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
