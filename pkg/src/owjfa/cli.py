"""Command-line front end.

Exit codes: 0 on success (REJECT is a verdict, not a failure), 1 on domain
errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import analysis, langtools
from .core import Nfa, load, serialize
from .engines import (
    ENGINES,
    OwjRun,
    format_events,
    outcome_to_dict,
    render_sweeps,
    run_jumping,
    trace_classical,
    trace_to_dict,
)
from .errors import UnsupportedEngine, WorkbenchError


class UsageError(Exception):
    pass


def _dump(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _verdict(accepted):
    return "ACCEPT" if accepted else "REJECT"


def _deterministic(a, verb):
    if isinstance(a, Nfa):
        raise UnsupportedEngine(f"'{verb}' needs a deterministic automaton; this file describes an NFA")
    return a


def _counters(o):
    return f"sweeps={o.sweeps} jumps={o.jumps} steps={o.steps}"


def cmd_run(args):
    a = load(args.file)
    engine = args.engine
    if engine == "jumping":
        accepted = run_jumping(a, args.word)
        if args.format == "json":
            return _dump({"engine": engine, "word": args.word, "accepted": accepted})
        return f"{_verdict(accepted)} engine=jumping\n"
    a = _deterministic(a, "run")
    if engine == "owj":
        r = OwjRun(a, args.word).run()
        t = r.trace()
    else:
        t = trace_classical(a, args.word)
    o = t.outcome
    if args.format == "json":
        doc = {"engine": engine, "word": a.alphabet.decode(t.word), **outcome_to_dict(a, o)}
        if args.trace:
            doc["trace"] = trace_to_dict(a, t, engine)
        return _dump(doc)
    out = f"{_verdict(o.accepted)} {_counters(o)}\n"
    if args.trace:
        out = format_events(a, t) + out
    return out


def cmd_trace(args):
    a = _deterministic(load(args.file), "trace")
    if args.engine == "jumping":
        raise UsageError("trace supports --engine owj or classical")
    t = OwjRun(a, args.word).run().trace() if args.engine == "owj" else trace_classical(a, args.word)
    if args.format == "json":
        return _dump(trace_to_dict(a, t, args.engine))
    lines = render_sweeps(a, t)
    lines.append(f"{_verdict(t.outcome.accepted)} {_counters(t.outcome)}")
    return "\n".join(lines) + "\n"


def cmd_profile(args):
    a = _deterministic(load(args.file), "profile")
    if args.engine == "jumping":
        raise UsageError("profile supports --engine owj or classical")
    p = analysis.sweep_complexity(a, args.n, args.budget, samples=args.samples, seed=args.seed,
                                  engine=args.engine, workers=args.workers)
    growth = None
    if len(p.records) >= 6:
        growth = analysis.classify_growth(p)
    if args.format == "csv":
        return p.to_csv()
    if args.format == "json":
        doc = p.to_json()
        if growth is not None:
            doc["growth"] = {"class": growth.growth, "slope": round(growth.slope, 6),
                             "plateau": growth.plateau, "note": growth.note}
        return _dump(doc)
    lines = [f"{'n':>4} {'SC(n)':>6} {'max_jumps':>9} {'mean_jumps':>10} {'mode':>10}  witness"]
    for r in p.records:
        lines.append(f"{r.n:>4} {r.max_sweeps:>6} {r.max_jumps:>9} {r.mean_jumps:>10.3f} {r.mode:>10}  "
                     f"{a.alphabet.decode(r.witness)}")
    if growth is not None:
        lines.append(f"growth: {growth.growth} (slope {growth.slope:.3f}; {growth.note})")
    return "\n".join(lines) + "\n"


def cmd_enumerate(args):
    a = load(args.file)
    s = langtools.enumerate_language(a, args.engine, args.max_len)
    if args.format == "json":
        return _dump({
            "engine": args.engine,
            "max_len": args.max_len,
            "words": [{"word": a.alphabet.decode(w), "member": m} for w, m in s.items()],
        })
    return s.export()


def _engine_pair(spec):
    parts = spec.split(",")
    if len(parts) == 1:
        parts = parts * 2
    if len(parts) != 2 or any(p not in ENGINES for p in parts):
        raise UsageError(f"--engine expects E or E1,E2 with E in {{{', '.join(ENGINES)}}}")
    return parts


def cmd_compare(args):
    e1, e2 = _engine_pair(args.engine)
    a1 = load(args.files[0])
    a2 = load(args.files[1]) if len(args.files) > 1 else a1
    r = langtools.equivalent_up_to(a1, e1, a2, e2, args.n)
    if args.format == "json":
        doc = {"left_engine": e1, "right_engine": e2, "n": args.n, "equal": r.equal}
        if not r.equal:
            doc.update(counterexample=a1.alphabet.decode(r.counterexample), left=r.left, right=r.right)
        return _dump(doc)
    if r.equal:
        return f"EQUAL up to n={args.n}\n"
    w = a1.alphabet.decode(r.counterexample)
    return f"COUNTEREXAMPLE '{w}' left={_verdict(r.left)} right={_verdict(r.right)}\n"


def cmd_determinize(args):
    a = load(args.file)
    return serialize(langtools.subset_construction(a))


def cmd_minimize(args):
    a = load(args.file)
    if isinstance(a, Nfa):
        a = langtools.subset_construction(a)
    return serialize(langtools.minimize(a, require_complete=args.require_complete))


def _param(text):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    return text


def cmd_gen(args):
    params = [_param(p) for p in args.params]
    if args.family in ("complete_random", "partial_random"):
        params.append(args.seed)
    return serialize(langtools.gen_family(args.family, *params))


def cmd_probe(args):
    a = load(args.file)
    max_len = args.max_len if args.max_len is not None else args.p + args.s
    s = langtools.enumerate_language(a, args.engine, max_len)
    t = langtools.residual_probe(s, args.p, args.s)
    if args.format == "csv":
        return t.export_csv()
    if args.format == "json":
        return _dump({"p": args.p, "s": args.s, "distinct_rows": t.distinct_rows, "verdict": t.verdict()})
    return t.verdict() + "\n"


def build_parser():
    p = argparse.ArgumentParser(prog="owjfa", description="One-way jumping finite automata workbench")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, formats=("text", "json"), default=None):
        sp.add_argument("--format", choices=formats, default=default or formats[0])
        sp.add_argument("--out", metavar="FILE", help="write output here instead of stdout")

    engines = list(ENGINES)

    sp = sub.add_parser("run", help="run one word")
    sp.add_argument("--engine", choices=engines, required=True)
    sp.add_argument("--trace", action="store_true", help="include the event trace")
    sp.add_argument("file")
    sp.add_argument("word")
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("trace", help="sweep-by-sweep picture of a run")
    sp.add_argument("--engine", choices=engines, required=True)
    sp.add_argument("file")
    sp.add_argument("word")
    common(sp)
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("profile", help="worst-case sweep complexity per length")
    sp.add_argument("--engine", choices=engines, required=True)
    sp.add_argument("file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--budget", type=int, default=analysis.DEFAULT_BUDGET)
    sp.add_argument("--samples", type=int, default=analysis.DEFAULT_SAMPLES)
    sp.add_argument("--seed", type=int, default=analysis.DEFAULT_SEED)
    sp.add_argument("--workers", type=int, default=1)
    common(sp, ("csv", "json", "text"))
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("enumerate", help="membership of every word up to a length")
    sp.add_argument("--engine", choices=engines, required=True)
    sp.add_argument("file")
    sp.add_argument("--max-len", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("compare", help="compare languages up to a length")
    sp.add_argument("--engine", required=True, help="E or E1,E2")
    sp.add_argument("files", nargs="+")
    sp.add_argument("--n", type=int, required=True)
    common(sp)
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("determinize", help="subset construction")
    sp.add_argument("file")
    common(sp, ("text",))
    sp.set_defaults(func=cmd_determinize)

    sp = sub.add_parser("minimize", help="minimal complete DFA (classical semantics)")
    sp.add_argument("file")
    sp.add_argument("--require-complete", action="store_true")
    common(sp, ("text",))
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("gen", help="print a fixture automaton")
    sp.add_argument("family", choices=langtools.FAMILIES)
    sp.add_argument("params", nargs="*")
    sp.add_argument("--seed", type=int, default=analysis.DEFAULT_SEED)
    common(sp, ("text",))
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("probe", help="bounded residual (Myhill-Nerode) table")
    sp.add_argument("file")
    sp.add_argument("--engine", choices=engines, default="owj")
    sp.add_argument("--max-len", type=int)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--s", type=int, required=True)
    common(sp, ("text", "csv", "json"))
    sp.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        out = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"owjfa: error: {exc}", file=sys.stderr)
        return 2
    except WorkbenchError as exc:
        print(f"error ({exc.module}): {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error (cli): {exc}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
