"""``scidiv`` command line: basemap, analyze, map, pathstats, synth.

Exit codes: 0 success, 2 input error, 3 internal invariant violation.
Every subcommand writes ``run_config.json`` next to its outputs.
"""

import argparse
import json
import logging
import re
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from scidiv import __version__, kernels
from scidiv.basemap import DEFAULT_THRESHOLD, build_basemap, load_basemap, read_citation_matrix, save_basemap
from scidiv.distance import distance_matrix, path_length_distribution, write_histogram
from scidiv.diversity import SCORE_VARIANTS, diversity_report, read_scores, write_report
from scidiv.errors import InputError, InvariantError
from scidiv.profile import (
    COUNTING_MODES,
    OVERLAY_POLICIES,
    aggregate_profiles,
    filter_orgs,
    overlay,
    read_profiles,
    read_records,
    write_profiles,
)
from scidiv.ranking import build_rank_table, compare, write_rank_table
from scidiv.render import FORMATS, export_map, layout_fr
from scidiv.synth import SynthSpec, gen_basemap_path, gen_profile

log = logging.getLogger("scidiv")


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict = field(default_factory=dict)
    threshold: float = DEFAULT_THRESHOLD
    counting: str = "full"
    policy: str = "drop-renormalize"
    variants: list = field(default_factory=lambda: list(SCORE_VARIANTS))
    disconnected: float | None = None
    seed: int = 0
    out_dir: str = "."
    options: dict = field(default_factory=dict)

    def write(self, out_dir):
        data = asdict(self)
        data["scidiv_version"] = __version__
        data["backend"] = kernels.active_backend()
        path = Path(out_dir) / "run_config.json"
        path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
        return path


def _variants(text):
    items = [v.strip() for v in text.split(",") if v.strip()]
    bad = [v for v in items if v not in SCORE_VARIANTS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown variant(s) {bad}; choose from {list(SCORE_VARIANTS)}")
    return [v for v in SCORE_VARIANTS if v in items]


def _formats(text):
    items = [f.strip() for f in text.split(",") if f.strip()]
    bad = [f for f in items if f not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {bad}; choose from {list(FORMATS)}")
    return items


def _out_dir(path):
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_profiles(args):
    if args.records:
        profiles = aggregate_profiles(read_records(args.records), args.counting)
        if args.min_papers > 1:
            total = len(profiles)
            profiles = filter_orgs(profiles, args.min_papers)
            print(f"organizations retained: {len(profiles)} of {total} (min {args.min_papers} papers)")
        return profiles
    if args.profiles:
        if args.min_papers > 1:
            raise InputError("--min-papers needs --records (paper counts are not in profile CSVs)")
        return read_profiles(args.profiles)
    raise InputError("one of --records or --profiles is required")


# -- subcommands ------------------------------------------------------------


def cmd_basemap(args):
    out = _out_dir(args.out_dir)
    fmt = args.format
    if args.action == "build":
        cm = read_citation_matrix(args.input)
        bm = build_basemap(cm, args.threshold, zero_diagonal=args.zero_diagonal)
    else:
        bm = load_basemap(args.input, args.in_format)
    target = out / f"basemap.{fmt}"
    save_basemap(bm, target, fmt)
    summary = bm.summary()
    print(
        f"nodes: {summary['nodes']}  edges: {summary['edges']}  isolated: {summary['isolated']}  "
        f"degree min/mean/max: {summary['degree_min']}/{summary['degree_mean']:.3f}/{summary['degree_max']}"
    )
    RunConfig(
        "basemap",
        inputs={"action": args.action, "input": str(args.input)},
        threshold=args.threshold,
        out_dir=str(out),
        options={"zero_diagonal": args.zero_diagonal, "format": fmt, "summary": summary},
    ).write(out)
    return 0


def _check_ranks(rt):
    n = len(rt.org_ids)
    for v, r in rt.ranks.items():
        if n and not np.isclose(r.sum(), n * (n + 1) / 2):
            raise InvariantError(f"ranks for {v} do not sum to n(n+1)/2")


def cmd_analyze(args):
    out = _out_dir(args.out_dir)
    if args.scores:
        report = read_scores(args.scores)
        missing = [v for v in args.variants if v not in report.variants] if args.variants_given else []
        if missing:
            raise InputError(f"--scores file lacks variant(s) {missing}")
        variants = list(report.variants) if not args.variants_given else args.variants
        report.variants = tuple(variants)
        inputs = {"scores": str(args.scores)}
    else:
        if not args.basemap:
            raise InputError("--basemap is required unless --scores is given")
        bm = load_basemap(args.basemap)
        profiles = _load_profiles(args)
        variants = args.variants
        report = diversity_report(
            profiles,
            bm,
            variants,
            policy=args.policy,
            disconnected=args.disconnected,
            weighting="uniform" if args.uniform else "shares",
        )
        inputs = {"basemap": str(args.basemap), "records": args.records and str(args.records),
                  "profiles": args.profiles and str(args.profiles)}
    for org, msg in report.errors.items():
        print(f"error: {msg}", file=sys.stderr)
    write_report(report, out / "report.csv")
    rt = build_rank_table(report, variants)
    _check_ranks(rt)
    write_rank_table(rt, out / "ranks.csv")

    print(f"organizations scored: {len(rt.org_ids)}")
    rhos = compare(rt)
    with open(out / "comparison.csv", "w") as fh:
        fh.write("first,second,spearman\n")
        for (a, b), rho in rhos.items():
            fh.write(f"{a},{b},{'' if rho is None else f'{rho:.6f}'}\n")
    if len(rt.org_ids) < 2:
        print("comparison skipped: needs at least 2 organizations")
    else:
        for (a, b), rho in rhos.items():
            print(f"spearman({a}, {b}) = {'undefined' if rho is None else f'{rho:.4f}'}")
        for v in variants:
            s = rt.scores[v]
            if s.min() > 0:
                print(f"score ratio max/min [{v}] = {s.max() / s.min():.4f}")
    RunConfig(
        "analyze",
        inputs=inputs,
        counting=args.counting,
        policy=args.policy,
        variants=list(variants),
        disconnected=args.disconnected,
        out_dir=str(out),
        options={"min_papers": args.min_papers, "uniform": args.uniform},
    ).write(out)
    return 0


def _safe_name(org):
    return re.sub(r"[^A-Za-z0-9._-]+", "_", org) or "org"


def cmd_map(args):
    out = _out_dir(args.out_dir)
    bm = load_basemap(args.basemap)
    profiles = _load_profiles(args)
    coords = layout_fr(bm, seed=args.seed, iterations=args.iterations)
    written = 0
    for prof in profiles:
        cmap = overlay(prof, bm, args.policy)
        for fmt in args.formats:
            export_map(cmap, coords, fmt, out / f"{_safe_name(prof.org_id)}.{fmt}")
            written += 1
    print(f"wrote {written} file(s) for {len(profiles)} organization(s)")
    RunConfig(
        "map",
        inputs={"basemap": str(args.basemap), "records": args.records and str(args.records),
                "profiles": args.profiles and str(args.profiles)},
        counting=args.counting,
        policy=args.policy,
        seed=args.seed,
        out_dir=str(out),
        options={"formats": args.formats, "iterations": args.iterations},
    ).write(out)
    return 0


def cmd_pathstats(args):
    out = _out_dir(args.out_dir)
    bm = load_basemap(args.basemap)
    dm = distance_matrix(bm, args.variant, args.disconnected)
    hist = path_length_distribution(dm, args.bin_width)
    write_histogram(hist, out / f"pathstats_{args.variant}.csv")
    for b, c in hist.bins.items():
        print(f"{b if isinstance(b, int) else f'{b:g}'}\t{c}")
    print(f"unreachable pairs: {hist.unreachable}")
    RunConfig(
        "pathstats",
        inputs={"basemap": str(args.basemap)},
        disconnected=args.disconnected,
        out_dir=str(out),
        options={"variant": args.variant, "bin_width": args.bin_width},
    ).write(out)
    return 0


def cmd_synth(args):
    out = _out_dir(args.out_dir)
    bm = gen_basemap_path(args.nodes, args.edge_w)
    profiles = [
        gen_profile(SynthSpec(kind, n_active=args.n_active, poles=args.poles, seed=args.seed, org_id=kind), bm)
        for kind in args.kinds
    ]
    save_basemap(bm, out / "basemap.csv")
    write_profiles(profiles, out / "profiles.csv")
    report = diversity_report(profiles, bm, ("sim", "wpath"))
    for org, vals in report.values.items():
        print(f"{org}: div_sim={vals['sim']:.6f} div_wpath={vals['wpath']:.6f}")
    if {"polarized", "spread"} <= set(report.values):
        pol, spr = report.values["polarized"], report.values["spread"]
        print(f"discrimination ratio polarized/spread: wpath={pol['wpath'] / spr['wpath']:.4f} "
              f"sim={pol['sim'] / spr['sim']:.4f}")
    RunConfig(
        "synth",
        seed=args.seed,
        out_dir=str(out),
        options={"nodes": args.nodes, "edge_w": args.edge_w, "kinds": args.kinds,
                 "n_active": args.n_active, "poles": args.poles},
    ).write(out)
    return 0


# -- parser -----------------------------------------------------------------


def _profile_args(p):
    p.add_argument("--records", type=Path, help="paper records CSV (org_id,paper_id,subject_categories)")
    p.add_argument("--profiles", type=Path, help="pre-aggregated CSV (org_id,subject_category,count)")
    p.add_argument("--counting", choices=COUNTING_MODES, default="full")
    p.add_argument("--min-papers", type=int, default=1, help="drop orgs with fewer distinct papers")
    p.add_argument("--policy", choices=OVERLAY_POLICIES, default="drop-renormalize",
                   help="treatment of subject categories missing from the basemap")


def build_parser():
    parser = argparse.ArgumentParser(prog="scidiv", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("basemap", help="build a basemap from a citation matrix or import an edge list")
    p.add_argument("action", choices=("build", "import"))
    p.add_argument("input", type=Path)
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--zero-diagonal", action="store_true", help="ignore SC self-citations")
    p.add_argument("--in-format", choices=("csv", "graphml"))
    p.add_argument("--format", choices=("csv", "graphml"), default="csv")
    p.add_argument("-o", "--out-dir", default=".")
    p.set_defaults(func=cmd_basemap)

    p = sub.add_parser("analyze", help="diversity scores, ranks and rank comparison")
    _profile_args(p)
    p.add_argument("--basemap", type=Path)
    p.add_argument("--scores", type=Path, help="precomputed scores; skips scoring")
    p.add_argument("--variants", type=_variants, default=None, help="comma list of sim,path,wpath")
    p.add_argument("--disconnected", type=float, default=None, help="distance for unreachable pairs")
    p.add_argument("--uniform", action="store_true", help="unweighted sum over active SCs")
    p.add_argument("-o", "--out-dir", default=".")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("map", help="lay out and export competence maps")
    _profile_args(p)
    p.add_argument("--basemap", type=Path, required=True)
    p.add_argument("--formats", type=_formats, default=["svg"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("-o", "--out-dir", default=".")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("pathstats", help="shortest-path length distribution")
    p.add_argument("--basemap", type=Path, required=True)
    p.add_argument("--variant", choices=("path", "wpath", "cosine"), default="path")
    p.add_argument("--bin-width", type=float, default=0.1)
    p.add_argument("--disconnected", type=float, default=None)
    p.add_argument("-o", "--out-dir", default=".")
    p.set_defaults(func=cmd_pathstats)

    p = sub.add_parser("synth", help="synthetic path basemap with typology portfolios")
    p.add_argument("--nodes", type=int, default=5)
    p.add_argument("--edge-w", type=float, default=0.15)
    p.add_argument("--kinds", type=lambda s: [k.strip() for k in s.split(",") if k.strip()],
                   default=["polarized", "spread"])
    p.add_argument("--n-active", type=int, default=3)
    p.add_argument("--poles", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out-dir", default=".")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )
    if args.command == "analyze":
        args.variants_given = args.variants is not None
        if args.variants is None:
            args.variants = list(SCORE_VARIANTS)
    try:
        return args.func(args)
    except (InputError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
