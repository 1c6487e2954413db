"""Command-line front end.

Every verb emits one report per check. ``--format records`` prints each
report as a JSON object on its own line with the fields, in order,
``command, group, radius, status, witnesses, counts, timing_ms``. Witness
strings are words in the group's atom grammar; a witness made of several
elements joins them with `` ; ``.

Exit codes: 0 success / holds up to radius, 1 violation or refutation
found, 2 usage, spec, word or precondition error, 3 a capacity limit hit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .constructions import DEFAULT_CAP, GroupContext, enumerate_ball
from .errors import (
    CapacityError,
    CombinatorialCapError,
    ContextError,
    ContractError,
    DegenerateInputError,
    DomainError,
    IterationCapError,
    NotFoundError,
    RadiusInsufficientError,
    SpecError,
    ValgroupError,
    WordError,
)
from .normal_forms import cyclic_reduce, is_cyclically_reduced, normal_form
from .specfile import parse_spec, parse_word, parse_word_list
from .structure import (
    CONSISTENT,
    centralizer_structure,
    commuting_decompose,
    conjugacy_decompose,
    conjugate_search,
    csa_check,
    nielsen_reduce,
    subgroup_decomposition_probe,
)
from .valuation import HOLDS, AxiomId, check_axiom, in_N

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3
DEFAULT_AXIOMS = "A1,A2,A3,A4"
SUCCESS = "success"


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def _record(command, ctx, radius, status, witnesses, counts, cap, started, timing):
    counts = dict(counts)
    counts["cap"] = cap
    elapsed = int(round((time.perf_counter() - started) * 1000)) if timing else 0
    return {
        "command": command,
        "group": ctx.name,
        "radius": radius,
        "status": status,
        "witnesses": list(witnesses),
        "counts": counts,
        "timing_ms": elapsed,
    }


def _w(ctx: GroupContext, *elements) -> str:
    return " ; ".join(ctx.format(g) for g in elements)


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise _Usage(f"--{n.replace('_', '-')} is required for {args.verb}")


# -- verbs ---------------------------------------------------------------------------


def _check_axioms(ctx, args):
    out = []
    for name in [a for a in args.axioms.split(",") if a.strip()]:
        axiom = AxiomId.parse(name.strip())
        t0 = time.perf_counter()
        rep = check_axiom(ctx, axiom, args.radius, args.witnesses, args.cap)
        counts = {"checked": rep.checked_count, "violations": rep.violation_count}
        wits = [_w(ctx, *w) for w in rep.witnesses]
        out.append(_record(f"check-axioms:{axiom.value}", ctx, args.radius, rep.status, wits, counts, args.cap, t0, args.timing))
    return out


def _normal_form(ctx, args):
    _need(args, "word")
    t0 = time.perf_counter()
    g = parse_word(ctx, args.word)
    nf = normal_form(ctx, g)
    pieces = [ctx.format(p) for p in nf.pieces] if nf.pieces else [ctx.format(g)]
    counts = {"length": g.length, "pieces": len(nf.pieces)}
    for i, j in enumerate(nf.junction_lengths, 1):
        counts[f"junction_{i}"] = j
    return [_record("normal-form", ctx, args.radius, SUCCESS, pieces, counts, args.cap, t0, args.timing)]


def _cyclic_reduce(ctx, args):
    _need(args, "word")
    t0 = time.perf_counter()
    g = parse_word(ctx, args.word)
    cr = cyclic_reduce(ctx, g)
    y, x = cr.conjugator, cr.core
    identity_ok = cr.verify()
    length_ok = g.length == 2 * y.length + x.length
    counts = {
        "length": g.length,
        "conjugator_length": y.length,
        "core_length": x.length,
        "in_N": int(in_N(ctx, g)),
        "core_cyclically_reduced": int(is_cyclically_reduced(ctx, x)),
        "conjugation_identity": int(identity_ok),
        "length_identity": int(length_ok),
    }
    status = SUCCESS if identity_ok else "verification_failed"
    return [_record("cyclic-reduce", ctx, args.radius, status, [ctx.format(y), ctx.format(x)], counts, args.cap, t0, args.timing)]


def _conjugacy(ctx, args):
    _need(args, "y", "z")
    t0 = time.perf_counter()
    y, z = parse_word(ctx, args.y), parse_word(ctx, args.z)
    Lx = args.max_conjugator if args.max_conjugator is not None else args.radius
    x = conjugate_search(ctx, y, z, Lx, args.cap)
    if x is None:
        return [_record("conjugacy", ctx, Lx, "not_conjugate_up_to_radius", [], {}, args.cap, t0, args.timing)]
    d = conjugacy_decompose(ctx, x, y, z)
    counts = {
        "n": d.n,
        "m": d.m,
        f"case_{d.case}": 1,
        "ab_length_loss": d.a.length + d.b.length - (d.a * d.b).length,
        "ba_length_loss": d.a.length + d.b.length - (d.b * d.a).length,
    }
    wits = [ctx.format(x), ctx.format(d.a), ctx.format(d.b)]
    return [_record("conjugacy", ctx, Lx, SUCCESS, wits, counts, args.cap, t0, args.timing)]


def _centralizer(ctx, args):
    _need(args, "g")
    t0 = time.perf_counter()
    g = parse_word(ctx, args.g)
    try:
        cs = centralizer_structure(ctx, g, args.radius, args.cap)
    except RadiusInsufficientError:
        return [_record("centralizer", ctx, args.radius, "radius_insufficient", [], {}, args.cap, t0, args.timing)]
    counts = {
        "centralizer_size": len(cs.centralizer),
        "b_part_size": len(cs.b_part),
        "cyclic_in_ball": int(cs.is_cyclic_in_ball),
    }
    wits = [ctx.format(cs.s)] + [ctx.format(h) for h in cs.b_part]
    return [_record("centralizer", ctx, args.radius, SUCCESS, wits, counts, args.cap, t0, args.timing)]


def _commute(ctx, args):
    _need(args, "x", "y")
    t0 = time.perf_counter()
    x, y = parse_word(ctx, args.x), parse_word(ctx, args.y)
    try:
        d = commuting_decompose(ctx, x, y, args.radius, args.cap)
    except NotFoundError:
        return [_record("commute-decompose", ctx, args.radius, "not_found", [], {}, args.cap, t0, args.timing)]
    counts = {"n": d.n, "m": d.m, "verified": int(d.verify(x, y))}
    wits = [ctx.format(d.X), ctx.format(d.h1), ctx.format(d.h2)]
    return [_record("commute-decompose", ctx, args.radius, SUCCESS, wits, counts, args.cap, t0, args.timing)]


def _nielsen(ctx, args):
    _need(args, "gens")
    t0 = time.perf_counter()
    gens = parse_word_list(ctx, args.gens)
    res = nielsen_reduce(ctx, gens, args.nmax, cap=args.cap)
    counts = {
        "input_generators": len(gens),
        "output_generators": len(res.generators),
        "steps": len(res.log),
        "sequences_checked": res.final_report.checked_count,
        "nmax": args.nmax,
    }
    wits = [ctx.format(g) for g in res.generators]
    return [_record("nielsen", ctx, args.radius, SUCCESS, wits, counts, args.cap, t0, args.timing)]


def _csa(ctx, args):
    t0 = time.perf_counter()
    rep = csa_check(ctx, args.radius, args.cap)
    counts = {
        "involutions": len(rep.involution_witnesses),
        "condition_i_holds": int(rep.condition_i_status == HOLDS),
        "condition_ii_holds": int(rep.condition_ii_status == HOLDS),
    }
    counts.update({f"checked_{k}": v for k, v in rep.checked.items()})
    wits = []
    if rep.verdict_witness is not None:
        reason, *elements = rep.verdict_witness
        counts[f"reason_{reason}"] = 1
        wits.append(_w(ctx, *elements))
    return [_record("csa", ctx, args.radius, rep.verdict, wits, counts, args.cap, t0, args.timing)]


def _probe(ctx, args):
    _need(args, "gens")
    t0 = time.perf_counter()
    gens = parse_word_list(ctx, args.gens)
    rep = subgroup_decomposition_probe(ctx, gens, args.radius, args.nmax, args.cap)
    wits = []
    if rep.hypothesis_witness is not None:
        wits.append(_w(ctx, *rep.hypothesis_witness))
    wits += [ctx.format(u) for u in rep.reduced_generators]
    labels = [lab for _, lab, _ in rep.classification]
    counts = {
        "hypothesis_witnesses": int(rep.hypothesis_witness is not None),
        "free_part": labels.count("free_part"),
        "n_class_part": labels.count("n_class_part"),
        "steps": len(rep.log),
        "nielsen_complete": int(rep.nielsen_complete),
    }
    return [_record("subgroup-probe", ctx, args.radius, rep.hypothesis_status, wits, counts, args.cap, t0, args.timing)]


def _ball_stats(ctx, args):
    t0 = time.perf_counter()
    ball = enumerate_ball(ctx, args.radius, args.cap)
    counts = {"size": len(ball), "b_size": len(ctx.b_elements()), "s_size": len(ctx.s_elements())}
    for n in range(args.radius + 1):
        counts[f"length_{n}"] = len(ball.of_length(n))
    return [_record("ball-stats", ctx, args.radius, SUCCESS, [], counts, args.cap, t0, args.timing)]


VERBS = {
    "check-axioms": _check_axioms,
    "normal-form": _normal_form,
    "cyclic-reduce": _cyclic_reduce,
    "conjugacy": _conjugacy,
    "centralizer": _centralizer,
    "commute-decompose": _commute,
    "nielsen": _nielsen,
    "csa": _csa,
    "subgroup-probe": _probe,
    "ball-stats": _ball_stats,
}

# statuses that count as a successful check
_OK_STATUSES = {SUCCESS, HOLDS, CONSISTENT, "not_conjugate_up_to_radius"}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="valgroup", description="Bounded checks on valuated groups with normal forms.")
    p.add_argument("verb", choices=sorted(VERBS))
    p.add_argument("--group", required=True, help="path to a group specification file")
    p.add_argument("--name", help="valuated group to use (default: the first declared)")
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--axioms", default=DEFAULT_AXIOMS, help="comma-separated axiom ids")
    p.add_argument("--word")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--z")
    p.add_argument("--g")
    p.add_argument("--gens", help="semicolon-separated words")
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--max-conjugator", type=int, dest="max_conjugator")
    p.add_argument("--format", choices=("text", "records"), default="text")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--witnesses", type=int, default=10)
    p.add_argument("--timing", action="store_true", help="report wall time (otherwise timing_ms is 0)")
    return p


def render_text(rec: dict) -> str:
    head = f"{rec['command']} [{rec['group']}, radius {rec['radius']}]: {rec['status']}"
    lines = [head]
    counts = ", ".join(f"{k}={v}" for k, v in rec["counts"].items())
    lines.append(f"  counts: {counts}")
    if rec["command"] == "normal-form":
        lines.append("  pieces: " + " | ".join(rec["witnesses"]))
    else:
        for w in rec["witnesses"]:
            lines.append(f"  witness: {w}")
    if rec["timing_ms"]:
        lines.append(f"  time: {rec['timing_ms']} ms")
    return "\n".join(lines)


def render_record(rec: dict) -> str:
    return json.dumps(rec, ensure_ascii=False)


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.radius < 0:
            raise _Usage("--radius must be non-negative")
        if args.cap < 1:
            raise _Usage("--cap must be positive")
        text = Path(args.group).read_text()
        ctx = parse_spec(text).context(args.name)
        records = VERBS[args.verb](ctx, args)
    except _Usage as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read group file: {exc}", file=stderr)
        return EXIT_USAGE
    except (CapacityError, CombinatorialCapError, IterationCapError) as exc:
        print(f"capacity error: {exc}", file=stderr)
        return EXIT_CAPACITY
    except (SpecError, WordError, ContractError, ContextError, DomainError, DegenerateInputError, ValueError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except ValgroupError as exc:
        print(f"internal error: {exc}", file=stderr)
        return EXIT_VIOLATION
    render = render_record if args.format == "records" else render_text
    # assemble everything before writing so reports never interleave
    stdout.write("".join(render(r) + "\n" for r in records))
    stdout.flush()
    return EXIT_OK if all(r["status"] in _OK_STATUSES for r in records) else EXIT_VIOLATION


def main() -> None:
    sys.exit(run())
