"""Command-line front end (``langdiv``)."""

import argparse
import json
import math
import sys
from pathlib import Path

from langdiv.builtin import BUILTINS, DEFAULT_KICK_PHASE, get_builtin
from langdiv.diversity import DiversityReport, SweepConfig, pseudo_period, sweep
from langdiv.errors import LangDivError, MachineSyntaxError, NotUnitary, ValidationError
from langdiv.io import language_to_dict, parse_machine, serialize_machine
from langdiv.languages import describe_support, format_word, max_deviation
from langdiv.machines import QuantumGenerator, classical_analog, is_deterministic
from langdiv.matrix import classify_stochastic
from langdiv.protocol import EnumerationConfig, InitialState, MeasurementProtocol, enumerate_language

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ENSEMBLE_NAMES = {
    "basis": "basis",
    "uniform": "uniform",
    "basis+uniform": "basis_and_uniform",
    "components": "components",
}


class UsageError(Exception):
    pass


def _period_range(text: str):
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid period range {text!r}")
    return lo, hi


def _initial(text: str) -> InitialState:
    try:
        return InitialState.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def load_machine(source: str):
    """Read a machine file; ``builtin:<name>`` loads an example directly."""
    if source.startswith("builtin:"):
        try:
            return get_builtin(source.split(":", 1)[1])
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
    path = Path(source)
    if not path.is_file():
        raise UsageError(f"no such file: {source}")
    return parse_machine(path.read_text())


def _write(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _describe_machine(m) -> str:
    kind = "quantum" if isinstance(m, QuantumGenerator) else "classical"
    return (f"{m.name} ({kind}, {m.dim} states, alphabet {{{','.join(m.alphabet)}}}, "
            f"{'deterministic' if is_deterministic(m) else 'non-deterministic'})")


# --- subcommands -----------------------------------------------------------


def cmd_validate(args):
    m = load_machine(args.file)
    print(f"ok: {_describe_machine(m)}")
    if isinstance(m, QuantumGenerator):
        print("unitary: passes")
    else:
        cls = classify_stochastic(m.state_transition)
        print(f"state-to-state matrix: stochastic={cls.stochastic} doubly_stochastic={cls.doubly_stochastic}")
    return EXIT_OK


def cmd_language(args):
    m = load_machine(args.file)
    lang = enumerate_language(m, MeasurementProtocol(args.period, args.initial),
                              EnumerationConfig(args.max_length, args.prune))
    if args.format == "json":
        doc = language_to_dict(lang, args.period, args.initial.describe())
        print(json.dumps(doc, indent=2))
        return EXIT_OK
    print(f"# {m.name}  period={args.period}  initial={args.initial.describe()}  max_length={args.max_length}")
    print(f"# support: {describe_support(lang)}")
    for w, p in lang.words.items():
        print(f"{format_word(w, lang.alphabet):>{args.max_length}}  {p:.12g}")
    return EXIT_OK


def _period_label(periods, report: DiversityReport) -> str:
    k = report.pseudo_period or report.period
    all_p = list(report.config.periods)
    if sorted(periods) == all_p:
        return "n"
    if k and len(all_p) >= 2 * k:
        residues = sorted({p % k for p in periods})
        if sorted(periods) == [p for p in all_p if p % k in residues]:
            return ", ".join(f"{k}n" if r == 0 else f"{k}n+{r}" for r in residues)
    return ",".join(map(str, periods))


def _log2_label(n: int) -> str:
    return f"log2({n}) = {_fmt(math.log2(n))}" if n else "0"


def report_to_dict(report: DiversityReport) -> dict:
    cfg = report.config
    return {
        "machine": report.machine_name,
        "config": {
            "periods": [cfg.p_min, cfg.p_max],
            "ensemble": cfg.ensemble,
            "max_length": cfg.max_length,
            "delta": cfg.delta,
            "dedup": cfg.dedup,
        },
        "classes": [
            {
                "index": i,
                "periods": c.periods,
                "initials": sorted({init for _, init in c.provenance}),
                "support": describe_support(c.language),
                "words": language_to_dict(c.language)["words"],
            }
            for i, c in enumerate(report.classes)
        ],
        "entries": [{"period": e.period, "initial": e.initial, "class": e.class_index}
                    for e in report.entries],
        "n_stoch": report.n_stoch,
        "d_stoch": report.d_stoch,
        "n_formal": report.n_formal,
        "d_formal": report.d_formal,
        "pseudo_period": report.pseudo_period,
        "period": report.period,
        "bounds": [{"kind": b.kind, "m": b.m, "alphabet_size": b.alphabet_size,
                    "value": b.value, "passed": b.passed} for b in report.bounds],
        "warnings": report.warnings,
    }


def render_report(report: DiversityReport, sample: int = 4) -> str:
    cfg = report.config
    lines = [
        f"sweep: periods {cfg.p_min}..{cfg.p_max}, ensemble {cfg.ensemble}, "
        f"max length {cfg.max_length}, dedup {cfg.dedup} (delta {cfg.delta:g})",
    ]
    for i, c in enumerate(report.classes):
        lang = c.language
        inits = sorted({init for _, init in c.provenance})
        shown = []
        for w, p in lang.words.items():
            if len(w) == min(lang.max_length, 5):
                shown.append(f"{format_word(w, lang.alphabet)}:{p:.4g}")
        more = " ..." if len(shown) > sample else ""
        lines.append(
            f"  [{i + 1}] p = {_period_label(c.periods, report):<16} supp = {describe_support(lang):<18} "
            f"from {','.join(inits)}"
        )
        lines.append(f"      Pr(L={min(lang.max_length, 5)}): {' '.join(shown[:sample])}{more}")
    lines.append(f"  D_stoch  = {_log2_label(report.n_stoch)}")
    lines.append(f"  D_formal = {_log2_label(report.n_formal)}")
    k = report.pseudo_period
    lines.append(f"  pseudo-period: {k if k is not None else 'not detected'}")
    if report.period is not None:
        lines.append(f"  period (permutation order): {report.period}")
    for b in report.bounds:
        name = "N" if b.kind == "periodic" else "k"
        lines.append(f"  bound {b.kind}({name}={b.m}): log2(|Y|+{name}({name}-1)) = {_fmt(b.value)}  "
                     f"D_stoch <= bound: {'PASS' if b.passed else 'FAIL'}")
    for w in report.warnings:
        lines.append(f"  warning: {w}")
    return "\n".join(lines) + "\n"


def _sweep_config(args, ensemble=None) -> SweepConfig:
    lo, hi = args.periods
    return SweepConfig(p_min=lo, p_max=hi, ensemble=ensemble or ENSEMBLE_NAMES[args.ensemble],
                       max_length=args.max_length, delta=args.delta,
                       dedup="delta" if args.dedup_delta else "key", jobs=args.jobs)


def cmd_diversity(args):
    m = load_machine(args.file)
    report = sweep(m, _sweep_config(args))
    if args.format == "json":
        print(json.dumps(report_to_dict(report), indent=2))
    else:
        sys.stdout.write(f"machine: {_describe_machine(m)}\n" + render_report(report))
    return EXIT_OK


def cmd_analog(args):
    m = load_machine(args.file)
    if not isinstance(m, QuantumGenerator):
        print("error: analog needs a quantum machine", file=sys.stderr)
        return EXIT_FAIL
    if not is_deterministic(m):
        print("warning: machine is not deterministic; squared-modulus analog may not reproduce its language",
              file=sys.stderr)
    _write(serialize_machine(classical_analog(m)), args.output)
    return EXIT_OK


def cmd_pseudo_period(args):
    m = load_machine(args.file)
    u = m.unitary if isinstance(m, QuantumGenerator) else m.state_transition
    try:
        k = pseudo_period(u, args.max_k, args.tol)
    except NotUnitary as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if k is None:
        print(f"not detected within k <= {args.max_k}")
        return EXIT_FAIL
    print(k)
    return EXIT_OK


def cmd_compare(args):
    a, b = load_machine(args.file_a), load_machine(args.file_b)
    cfg = EnumerationConfig(args.max_length)
    proto = MeasurementProtocol(args.period, args.initial)
    la, lb = enumerate_language(a, proto, cfg), enumerate_language(b, proto, cfg)
    dev = max_deviation(la, lb)
    similar = dev <= args.delta
    print(f"max |Pr_a(w) - Pr_b(w)| = {dev:.3e}  (delta {args.delta:g}): "
          f"{'delta-similar' if similar else 'NOT delta-similar'}")
    return EXIT_OK if similar else EXIT_FAIL


def cmd_examples(args):
    if args.name is None:
        print("\n".join(BUILTINS))
        return EXIT_OK
    try:
        m = get_builtin(args.name, phase=args.phase, analog=args.analog)
    except (KeyError, ValueError) as exc:
        raise UsageError(exc.args[0]) from None
    _write(serialize_machine(m), args.output)
    return EXIT_OK


def cmd_report(args):
    m = load_machine(args.file)
    out = [f"machine: {_describe_machine(m)}", f"horizon: words up to length {args.max_length}", ""]
    ensembles = ["basis", "components"]
    reports = {}
    for ens in ensembles:
        r = sweep(m, _sweep_config(args, ensemble=ens))
        reports[ens] = r
        out.append(f"== {m.name}, ensemble {ens}")
        out.append(render_report(r))
    analog = None
    if isinstance(m, QuantumGenerator) and is_deterministic(m):
        analog = classical_analog(m)
        for ens in ensembles:
            r = sweep(analog, _sweep_config(args, ensemble=ens))
            reports["analog-" + ens] = r
            out.append(f"== {analog.name} (classical analog), ensemble {ens}")
            out.append(render_report(r))
    out.append("== summary")
    for name, r in reports.items():
        out.append(f"  {name:<18} classes = {r.n_stoch:<3} D_stoch = {_fmt(r.d_stoch)}  "
                   f"supports = {r.n_formal:<3} D_formal = {_fmt(r.d_formal)}")
    if analog is not None:
        for ens in ensembles:
            q, c = reports[ens].d_stoch, reports["analog-" + ens].d_stoch
            out.append(f"  quantum >= classical ({ens}): {'yes' if q >= c - 1e-12 else 'no'}")
    note = _parity_note(reports["basis"])
    if note:
        out.append(f"  note: {note}")
    text = "\n".join(out) + "\n"
    if args.format == "json":
        text = json.dumps({k: report_to_dict(r) for k, r in reports.items()}, indent=2) + "\n"
    _write(text, args.output)
    return EXIT_OK


def _parity_note(report: DiversityReport):
    """Spell out the parity-to-language mapping when U^2 is the identity up to phase."""
    if report.pseudo_period != 2:
        return None
    by_parity = {"odd": set(), "even": set()}
    for c in report.classes:
        for p in c.periods:
            by_parity["odd" if p % 2 else "even"].add(describe_support(c.language))
    return ("U^2 is the identity up to phase, so languages depend only on period parity: "
            f"odd periods -> {', '.join(sorted(by_parity['odd']))}; "
            f"even periods -> {', '.join(sorted(by_parity['even']))}")


# --- argument parsing ------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="langdiv",
        description="Language diversity of quantum and classical finite-state generators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a machine file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("language", help="enumerate the language at one measurement period")
    p.add_argument("file")
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--initial", type=_initial, default=InitialState.uniform(),
                   help="basis:<i> or uniform (default)")
    p.add_argument("--max-length", type=int, default=8)
    p.add_argument("--prune", type=float, default=1e-12)
    p.add_argument("--format", choices=("table", "json"), default="table")
    p.set_defaults(func=cmd_language)

    def sweep_args(p):
        p.add_argument("--periods", type=_period_range, default=(1, 20), help="A..B (default 1..20)")
        p.add_argument("--max-length", type=int, default=8)
        p.add_argument("--delta", type=float, default=1e-9)
        p.add_argument("--dedup-delta", action="store_true",
                       help="merge languages by delta-similarity instead of rounded keys")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--format", choices=("table", "json"), default="table")

    p = sub.add_parser("diversity", help="sweep measurement periods and count distinct languages")
    p.add_argument("file")
    p.add_argument("--ensemble", choices=tuple(ENSEMBLE_NAMES), default="basis")
    sweep_args(p)
    p.set_defaults(func=cmd_diversity)

    p = sub.add_parser("analog", help="write the classical analog of a quantum machine")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_analog)

    p = sub.add_parser("pseudo-period", help="smallest k with U^k equal to identity up to phase")
    p.add_argument("file")
    p.add_argument("--max-k", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_pseudo_period)

    p = sub.add_parser("compare", help="test two machines' languages for delta-similarity")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("--period", type=int, required=True)
    p.add_argument("--initial", type=_initial, default=InitialState.uniform())
    p.add_argument("--delta", type=float, default=1e-9)
    p.add_argument("--max-length", type=int, default=8)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("examples", help="write a built-in machine (omit name to list)")
    p.add_argument("name", nargs="?")
    p.add_argument("--phase", type=float, default=DEFAULT_KICK_PHASE, help="kicked-top phase parameter")
    p.add_argument("--analog", action="store_true", help="write the classical analog instead")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_examples)

    p = sub.add_parser("report", help="full tables-style report (basis and components ensembles)")
    p.add_argument("file")
    sweep_args(p)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MachineSyntaxError, ValidationError) as exc:
        print(f"invalid machine: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except LangDivError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
