"""Command line front end.

Subcommands: gen, analyze, ldist, partition, density, experiment.
Exit codes: 0 on success, 2 on a validation error, 3 on a scale error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import asdict
from fractions import Fraction

from .errors import ScaleError, ValidationError
from .generator import Arrangement
from .graphcore import Graph, graph6_decode, graph6_encode
from .graphon import t_counts, t_graphon, wp
from .harness import (
    ExperimentSpec,
    _gen_signed,
    canonical_json,
    graph_invariants,
    run,
    trial_rng,
)
from .lndist import build, mean, sample, tail_ge, tail_ge_log2
from .partitions import sample_uniform, stats

__all__ = ["main"]

_PATTERNS = {
    "K2": (2, [(0, 1)]),
    "K3": (3, [(0, 1), (0, 2), (1, 2)]),
    "P4": (4, [(0, 1), (1, 2), (2, 3)]),
    "C4": (4, [(0, 1), (1, 2), (2, 3), (0, 3)]),
}


def pattern_graph(name: str) -> Graph:
    """K2 | K3 | P4 | C4 | g6:<graph6 string>."""
    if name in _PATTERNS:
        n, e = _PATTERNS[name]
        return Graph.from_edges(n, e)
    if name.startswith("g6:"):
        return graph6_decode(name[3:].encode("ascii"))
    raise ValidationError(
        f"unknown pattern {name!r}; use K2, K3, P4, C4, or g6:<string>"
    )


def _read_graph6_lines(path: str) -> list[Graph]:
    if path == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(path, "r", encoding="ascii") as fh:
                text = fh.read()
        except OSError as ex:
            raise ValidationError(f"cannot read {path}: {ex}") from ex
    graphs = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith(">>"):
            continue
        graphs.append(graph6_decode(line.encode("ascii")))
    if not graphs:
        raise ValidationError(f"no graph6 lines found in {path}")
    return graphs


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


def _print_kv(pairs):
    for key, val in pairs:
        print(f"{key} = {val}")


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# -- subcommands -------------------------------------------------------------------


def _cmd_gen(args) -> int:
    if args.arrangement_out and args.trials != 1:
        raise ValidationError("--arrangement-out needs --trials 1")
    records = []
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        g, arr = _gen_signed(args.n, rng, {"+": 1, "-": -1, "mixed": None}[args.sign])
        g6 = graph6_encode(g).decode("ascii")
        print(g6)
        records.append(
            {
                "trial": t,
                "graph6": g6,
                "arrangement": arr.to_json_obj(),
            }
        )
    if args.arrangement_out:
        _write(args.arrangement_out, canonical_json(records[0]["arrangement"]))
    if args.json:
        payload = {
            "n": args.n,
            "seed": args.seed,
            "sign": args.sign,
            "graphs": records,
        }
        _write(args.json, canonical_json(payload))
    return 0


def _cmd_analyze(args) -> int:
    graphs = _read_graph6_lines(args.infile)
    arr = None
    if args.arrangement:
        if len(graphs) != 1:
            raise ValidationError("--arrangement needs exactly one input graph")
        import json as _json

        try:
            with open(args.arrangement, "r", encoding="utf-8") as fh:
                obj = _json.load(fh)
        except (OSError, _json.JSONDecodeError) as ex:
            raise ValidationError(f"cannot read {args.arrangement}: {ex}") from ex
        arr = Arrangement.from_json_obj(graphs[0], obj)
    records = []
    for i, g in enumerate(graphs):
        inv = graph_invariants(g, arr)
        rec = {"graph": i, "n": g.n, "edges": g.edge_count(), **asdict(inv)}
        records.append(rec)
        _print_kv(sorted(rec.items()))
        if len(graphs) > 1:
            print()
    if args.json:
        _write(args.json, canonical_json({"graphs": records}))
    return 0


def _cmd_ldist(args) -> int:
    d = build(args.n)
    import numpy as _np

    info = {
        "n": args.n,
        "mu": d.mu,
        "mean": mean(d),
        "mode": int(_np.argmax(d.pmf)),
        "log2_L": d.log_L,
    }
    if args.x is not None:
        info["tail_log2"] = tail_ge_log2(d, args.x)
        info["tail"] = tail_ge(d, args.x)
    if args.samples:
        rng = trial_rng(args.seed, 0)
        info["samples"] = [sample(d, rng) for _ in range(args.samples)]
    _print_kv(sorted((k, v) for k, v in info.items() if k != "samples"))
    if "samples" in info:
        print("samples =", " ".join(str(s) for s in info["samples"]))
    if args.json:
        _write(args.json, canonical_json(info))
    if args.csv:
        lines = ["k,pmf,log2_ell"]
        for k in range(args.n + 1):
            lines.append(f"{k},{float(d.pmf[k])!r},{float(d.log_ell[k])!r}")
        _write(args.csv, "\n".join(lines))
    return 0


def _cmd_partition(args) -> int:
    records = []
    for t in range(args.trials):
        rng = trial_rng(args.seed, t)
        p = sample_uniform(args.m, rng)
        st = stats(p)
        blocks = p.blocks()
        print("|".join(" ".join(str(e) for e in blk) for blk in blocks))
        records.append(
            {
                "trial": t,
                "blocks": blocks,
                "block_count": st.block_count,
                "max_block": st.max_block,
            }
        )
    if args.json:
        _write(
            args.json,
            canonical_json({"m": args.m, "seed": args.seed, "partitions": records}),
        )
    if args.csv:
        lines = ["trial,block_count,max_block,blocks"]
        for rec in records:
            flat = "|".join(" ".join(str(e) for e in blk) for blk in rec["blocks"])
            lines.append(f"{rec['trial']},{rec['block_count']},{rec['max_block']},{flat}")
        _write(args.csv, "\n".join(lines))
    return 0


def _cmd_density(args) -> int:
    f = pattern_graph(args.pattern)
    info: dict = {"pattern": args.pattern, "v": f.n}
    if args.graphon:
        w = wp()  # only the plateau graphon is built in
        tw = t_graphon(f, w)
        info["t_graphon"] = _frac_str(tw)
        info["t_graphon_float"] = float(tw)
    if args.infile:
        g = _read_graph6_lines(args.infile)[0]
        rep = t_counts(f, g)
        info.update(
            {
                "n": g.n,
                "t_hom": _frac_str(rep.t_hom),
                "t_hom_float": float(rep.t_hom),
                "t_inj": _frac_str(rep.t_inj),
                "t_inj_float": float(rep.t_inj),
                "bound": rep.bound,
                "t_graphon_ref": _frac_str(rep.t_graphon),
            }
        )
    elif not args.graphon:
        raise ValidationError("density needs --in and/or --graphon")
    _print_kv(sorted(info.items()))
    if args.json:
        _write(args.json, canonical_json(info))
    return 0


def _cmd_experiment(args) -> int:
    pattern = None
    if args.pattern is not None:
        pattern = graph6_encode(pattern_graph(args.pattern)).decode("ascii")
    spec = ExperimentSpec(
        name=args.name,
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        sign=args.sign,
        pattern=pattern,
    )
    report = run(spec)
    _print_kv(sorted(report.summary.items()))
    if args.json:
        _write(args.json, report.to_json())
    if args.csv:
        _write(args.csv, report.to_csv())
    return 0


# -- parser ------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="perfectgen",
        description="Sample uniformly random perfect graphs and reproduce "
        "their limit-law statistics.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="sample graphs, print graph6 lines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--sign", choices=["+", "-", "mixed"], default="mixed")
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--arrangement-out", metavar="OUT", help="needs --trials 1")
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("analyze", help="invariant bundle for graph6 input")
    p.add_argument("--in", dest="infile", required=True, metavar="FILE")
    p.add_argument("--arrangement", metavar="FILE", help="arrangement JSON (one graph)")
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("ldist", help="central clique size law L(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x", type=float, help="report P(|X - mu| >= x)")
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--csv", metavar="OUT")
    p.set_defaults(fn=_cmd_ldist)

    p = sub.add_parser("partition", help="uniform set partitions")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--csv", metavar="OUT")
    p.set_defaults(fn=_cmd_partition)

    p = sub.add_parser("density", help="pattern densities in a graph or graphon")
    p.add_argument("--in", dest="infile", metavar="FILE")
    p.add_argument("--pattern", required=True, help="K2|K3|P4|C4|g6:<string>")
    p.add_argument(
        "--graphon",
        nargs="?",
        const="wp",
        choices=["wp"],
        help="also report the limit density",
    )
    p.add_argument("--json", metavar="OUT")
    p.set_defaults(fn=_cmd_density)

    p = sub.add_parser("experiment", help="seeded Monte Carlo experiment")
    p.add_argument("--name", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sign", choices=["+", "-", "mixed"], default="mixed")
    p.add_argument("--pattern", help="trichotomy only: K2|K3|P4|C4|g6:<string>")
    p.add_argument("--json", metavar="OUT")
    p.add_argument("--csv", metavar="OUT")
    p.set_defaults(fn=_cmd_experiment)

    return top


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ScaleError as ex:
        print(f"scale error: {ex}", file=sys.stderr)
        return 3
    except ValidationError as ex:
        print(f"validation error: {ex}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
