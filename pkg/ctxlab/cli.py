"""
ctxlab command line
analyze | generate | face | collapse | category; JSON reports on stdout
"""
import argparse
import logging
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import isprime

from .budget import LabelingBudget
from .config import config
from .contextuality import (
    classify,
    homotopical_witness,
    marginal_inequalities,
    pr_circle_decider,
)
from .digest import get_digest
from .errors import (
    CtxlabError,
    DeciderDisagreement,
    InvalidParams,
    NotCollapsible,
    UnknownEdge,
    WrongOutcomeArity,
)
from .homotopy import (
    circle_invariant,
    face_member,
    face_structure,
    is_null_homotopic,
    labeling_of_differences,
    unique_sc_vertex,
)
from .io import (
    distribution_to_dict,
    dumps,
    load_distribution,
    load_labels,
    load_scenario,
    read_json,
    scenario_to_dict,
    write_json,
)
from .logiccat import build_category, category_support, reduce_and_decide, sc_criterion, semigroup_table_check
from .scenario import Circle, Scenario, Step, collapse_edge, cycle_scenario, enumerate_circles
from .semiring import Dist, Kind, uniform
from .simpdist import (
    SimpDist,
    deterministic,
    is_diagonal,
    mixture,
    pr_box,
    section_T,
    section_T_of_labeling,
    transport_collapse,
)
from .summaries import summarizer

logger = logging.getLogger("ctxlab")

GENERATORS = ("pr-box", "deterministic", "section-t", "random")


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InvalidParams(f"Expected comma-separated integers, got {text!r}") from None


def _names(text: str) -> List[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _options(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "cap": args.cap if args.cap is not None else config.LABELING_CAP,
        "cross_check": config.CROSS_CHECK and not args.no_cross_check,
        "d": args.d,
    }


def _base_report(command: str, source: str, data: Any, options: Dict[str, Any], seed: Optional[int] = None) -> Dict[str, Any]:
    return {
        "command": command,
        "input": source,
        "input_digest": get_digest(data),
        "config": dict(options),
        "seed": seed,
    }


def _check_d(p: SimpDist, options: Dict[str, Any]) -> None:
    if options.get("d") is not None and options["d"] != p.d:
        raise WrongOutcomeArity(f"--d {options['d']} does not match the file's d={p.d}")


# -- report sections ---------------------------------------------------------------


def category_section(p: SimpDist, cross_check: bool, semigroup: bool = False) -> Dict[str, Any]:
    c = build_category(p)
    out: Dict[str, Any] = {
        "hom_sets": c.as_dict(),
        "support": [phi.as_dict() for phi in category_support(c)],
    }
    if p.d == 2:
        out["criterion"] = sc_criterion(c).as_dict()
        out["reduction"] = reduce_and_decide(p, cross_check).as_dict()
    if semigroup:
        out["semigroup_table"] = semigroup_table_check()
    return out


def homotopy_section(p: SimpDist) -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    labels = labeling_of_differences(p) if p.kind is Kind.RATIONAL else None
    if labels is not None:
        out["edge_labels"] = labels
        out["circle_invariants"] = [
            {"circle": c.describe(), "invariant": circle_invariant(c, labels, p.d)}
            for c in enumerate_circles(p.scenario, config.MAX_CIRCLE_LEN)
        ]
    if p.d == 2 and p.kind is Kind.RATIONAL and p.scenario.edges:
        pr = pr_circle_decider(p)
        if pr.circle is not None:
            witness = homotopical_witness(p, pr.circle)
            out["pr_circle"] = pr.as_dict()
            out["circle_labels"] = witness
        out["marginal_inequalities"] = {
            e: marginal_inequalities(m) for e, m in p.matrices if marginal_inequalities(m)
        }
    return out


def analyze_distribution(path: str, options: Dict[str, Any], with_category: bool = False, with_homotopy: bool = False) -> Dict[str, Any]:
    start = time.perf_counter()
    data = read_json(path)
    p = load_distribution(path)
    _check_d(p, options)
    report = _base_report("analyze", path, data, options, data.get("seed") if isinstance(data, dict) else None)
    budget = LabelingBudget(options["cap"])
    result = classify(p, budget, options["cross_check"])
    report["classification"] = result.as_dict()
    report["budget"] = budget.get_usage_summary()
    if with_category:
        report["category"] = category_section(p, options["cross_check"])
    if with_homotopy:
        report["homotopy"] = homotopy_section(p)
    report["timing_ms"] = (time.perf_counter() - start) * 1000
    logger.info(f"✅ Analysis of {path} complete")
    return report


def _batch_worker(job: Tuple[str, Dict[str, Any], bool, bool]) -> Dict[str, Any]:
    path, options, with_category, with_homotopy = job
    try:
        return analyze_distribution(path, options, with_category, with_homotopy)
    except CtxlabError as e:
        return {"command": "analyze", "input": path, "error": str(e), "error_type": type(e).__name__, "exit_code": e.exit_code}
    except Exception as e:
        logger.error(f"❌ Unexpected failure on {path}: {e}")
        return {"command": "analyze", "input": path, "error": str(e), "error_type": type(e).__name__, "exit_code": 1}


def cmd_analyze(args: argparse.Namespace) -> Tuple[Any, int]:
    options = _options(args)
    if args.batch:
        files = sorted(str(f) for f in Path(args.batch).glob("*.json"))
        if not files:
            raise InvalidParams(f"No .json files in {args.batch}")
        jobs = [(f, options, args.category, args.homotopy) for f in files]
        workers = config.WORKERS or None
        logger.info(f"📦 Analyzing {len(files)} files from {args.batch}")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_batch_worker, jobs))
        code = max((r.get("exit_code", 0) for r in reports), default=0)
        return {"command": "analyze", "batch": args.batch, "reports": reports}, code
    if not args.path:
        raise InvalidParams("analyze needs a distribution file or --batch DIR")
    return analyze_distribution(args.path, options, args.category, args.homotopy), 0


# -- generate ---------------------------------------------------------------------------


def _scenario_arg(args: argparse.Namespace) -> Scenario:
    if args.scenario:
        return load_scenario(args.scenario)
    if args.cycle:
        if args.cycle < 1:
            raise InvalidParams("--cycle needs at least one edge")
        return cycle_scenario(args.cycle)
    raise InvalidParams("Give --scenario FILE or --cycle N")


def _random_dist(rng: random.Random, outcomes: Sequence[Any], max_den: int) -> Dist:
    cuts = sorted(rng.randint(0, max_den) for _ in range(len(outcomes) - 1))
    bounds = [0] + cuts + [max_den]
    return Dist.from_weights(
        {o: Fraction(bounds[i + 1] - bounds[i], max_den) for i, o in enumerate(outcomes)}
    )


def random_distribution(s: Scenario, d: int, seed: int, max_den: int) -> SimpDist:
    """Seeded mixture of a T-section image and a deterministic distribution"""
    if max_den < 1:
        raise InvalidParams("--max-den must be positive")
    rng = random.Random(seed)
    q = {e.id: _random_dist(rng, range(d), max_den) for e in s.edges}
    labels = {v: rng.randrange(d) for v in s.vertices}
    w = Fraction(rng.randint(0, max_den), max_den)
    return mixture([(w, section_T(s, q, d)), (1 - w, deterministic(s, labels, d))])


def generate(args: argparse.Namespace) -> Tuple[SimpDist, Dict[str, Any]]:
    d = args.d or config.DEFAULT_D
    params: Dict[str, Any] = {"kind": args.kind, "d": d}
    if args.kind == "pr-box":
        if args.scenario or not args.cycle:
            raise InvalidParams("pr-box takes --cycle N")
        s = _scenario_arg(args)
        circle = Circle.canonical(Step(e.id, True) for e in s.edges)
        minus = _names(args.minus) if args.minus else [s.edge_ids[0]]
        params["minus"] = minus
        return pr_box(s, circle, minus, d), params
    if args.kind == "deterministic":
        s = _scenario_arg(args)
        if not args.labels:
            raise InvalidParams("deterministic needs --labels")
        values = _ints(args.labels)
        if len(values) != len(s.vertices):
            raise InvalidParams(f"--labels needs {len(s.vertices)} values, got {len(values)}")
        params["labels"] = values
        return deterministic(s, dict(zip(s.vertices, values)), d), params
    if args.kind == "section-t":
        s = _scenario_arg(args)
        if not args.edge_labels:
            raise InvalidParams("section-t needs --edge-labels")
        values = _ints(args.edge_labels)
        if len(values) != len(s.edges):
            raise InvalidParams(f"--edge-labels needs {len(s.edges)} values, got {len(values)}")
        params["edge_labels"] = values
        return section_T_of_labeling(s, dict(zip(s.edge_ids, values)), d), params
    if args.kind == "random":
        s = _scenario_arg(args)
        seed = args.seed if args.seed is not None else 0
        params.update({"seed": seed, "max_den": args.max_den})
        return random_distribution(s, d, seed, args.max_den), params
    raise InvalidParams(f"Unknown generator {args.kind!r}")


def cmd_generate(args: argparse.Namespace) -> Tuple[Any, int]:
    start = time.perf_counter()
    p, params = generate(args)
    document = distribution_to_dict(p, seed=params.get("seed"))
    if not args.output:
        return document, 0
    write_json(args.output, document)
    report = _base_report("generate", args.kind, params, _options(args), params.get("seed"))
    report["output"] = args.output
    report["timing_ms"] = (time.perf_counter() - start) * 1000
    return report, 0


# -- face --------------------------------------------------------------------------------


def cmd_face(args: argparse.Namespace) -> Tuple[Any, int]:
    start = time.perf_counter()
    if not args.labels_file:
        raise InvalidParams("face needs a scenario file and a labels file")
    s = load_scenario(args.path)
    raw_scenario = read_json(args.path)
    labels_file = load_labels(args.labels_file)
    d = args.d or labels_file.d or raw_scenario.get("d") or config.DEFAULT_D
    unknown = set(labels_file.labels) ^ set(s.edge_ids)
    if unknown:
        raise UnknownEdge(f"Labels do not match scenario edges: {sorted(unknown)}")
    labels = {e: g % d for e, g in labels_file.labels.items()}
    fs = face_structure(s, labels, d)
    nh = is_null_homotopic(s, labels, d)
    face: Dict[str, Any] = fs.as_dict()
    face["null_homotopic"] = nh.null_homotopic
    face["potential"] = nh.potential
    face["obstruction"] = nh.obstruction.describe() if nh.obstruction else None
    base = sorted(s.vertices)[0]
    face["member"] = distribution_to_dict(face_member(fs, base, uniform(range(d))))
    if isprime(d) and not nh.null_homotopic:
        vertex = unique_sc_vertex(s, labels, d)
        face["unique_sc_vertex"] = distribution_to_dict(vertex)
        face["unique_sc_vertex_classification"] = classify(vertex, LabelingBudget(_options(args)["cap"])).flags()
    else:
        face["unique_sc_vertex"] = None
    data = {"scenario": raw_scenario, "labels": labels_file.labels}
    report = _base_report("face", args.path, data, _options(args))
    report["face"] = face
    report["timing_ms"] = (time.perf_counter() - start) * 1000
    return report, 0


# -- collapse ------------------------------------------------------------------------------


def collapse_all(p: SimpDist, edges: Sequence[str], all_diagonal: bool) -> Tuple[SimpDist, List[str]]:
    todo = list(edges)
    done: List[str] = []
    q = p
    while True:
        if not todo and all_diagonal:
            todo = [e.id for e in q.scenario.edges if not e.is_loop and is_diagonal(q.matrix(e.id))][:1]
        if not todo:
            return q, done
        e = todo.pop(0)
        q = transport_collapse(collapse_edge(q.scenario, e), q)
        done.append(e)


def cmd_collapse(args: argparse.Namespace) -> Tuple[Any, int]:
    start = time.perf_counter()
    options = _options(args)
    data = read_json(args.path)
    p = load_distribution(args.path)
    _check_d(p, options)
    if not args.edges and not args.all_diagonal:
        raise InvalidParams("collapse needs edge ids or --all-diagonal")
    q, done = collapse_all(p, args.edges, args.all_diagonal)
    if not done:
        raise NotCollapsible("No diagonal non-loop edge to collapse")
    budget = LabelingBudget(options["cap"])
    before = classify(p, budget, options["cross_check"]).flags()
    after = classify(q, budget, options["cross_check"]).flags()
    if before != after:
        raise DeciderDisagreement(f"Collapse changed the classification: {before} -> {after}")
    section: Dict[str, Any] = {
        "edge": ",".join(done),
        "edges": done,
        "flags": after,
        "vertices": len(q.scenario.vertices),
    }
    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        stem = Path(args.path).stem
        scenario_path = out / f"{stem}_collapsed_scenario.json"
        dist_path = out / f"{stem}_collapsed.json"
        write_json(scenario_path, scenario_to_dict(q.scenario, q.d))
        write_json(dist_path, distribution_to_dict(q, scenario_path.name))
        section["files"] = [str(scenario_path), str(dist_path)]
    else:
        section["distribution"] = distribution_to_dict(q)
    report = _base_report("collapse", args.path, data, options)
    report["collapse"] = section
    report["timing_ms"] = (time.perf_counter() - start) * 1000
    return report, 0


# -- category ------------------------------------------------------------------------------


def cmd_category(args: argparse.Namespace) -> Tuple[Any, int]:
    start = time.perf_counter()
    options = _options(args)
    data = read_json(args.path)
    p = load_distribution(args.path)
    _check_d(p, options)
    report = _base_report("category", args.path, data, options)
    report["category"] = category_section(p, options["cross_check"], args.semigroup)
    report["timing_ms"] = (time.perf_counter() - start) * 1000
    return report, 0


HANDLERS = {
    "analyze": cmd_analyze,
    "generate": cmd_generate,
    "face": cmd_face,
    "collapse": cmd_collapse,
    "category": cmd_category,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, help="Outcome group order (ℤ_d)")
    common.add_argument("--cap", type=int, help=f"Labeling cap (default {config.LABELING_CAP})")
    common.add_argument("--seed", type=int, help="Seed for random generation")
    common.add_argument("--verbose", action="store_true", help="Human summary on stderr")
    common.add_argument("--output", help="Output file (generate) or directory (collapse)")
    common.add_argument("--no-cross-check", action="store_true", help="Skip the secondary deciders")

    parser = argparse.ArgumentParser(prog="ctxlab", description="Exact contextuality analysis of simplicial distributions")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", parents=[common], help="Classify a distribution")
    analyze.add_argument("path", nargs="?")
    analyze.add_argument("--batch", help="Analyze every .json file in DIR")
    analyze.add_argument("--category", action="store_true", help="Include the logical category")
    analyze.add_argument("--homotopy", action="store_true", help="Include circle witnesses and marginal checks")

    gen = sub.add_parser("generate", parents=[common], help="Write a distribution file")
    gen.add_argument("kind", choices=GENERATORS)
    gen.add_argument("--cycle", type=int, help="Use the N-cycle scenario")
    gen.add_argument("--scenario", help="Scenario file")
    gen.add_argument("--minus", help="Comma-separated p₋ edges (pr-box)")
    gen.add_argument("--labels", help="Comma-separated vertex outcomes (deterministic)")
    gen.add_argument("--edge-labels", help="Comma-separated edge labels (section-t)")
    gen.add_argument("--max-den", type=int, default=4, help="Largest denominator (random)")

    face = sub.add_parser("face", parents=[common], help="Face of an edge labeling")
    face.add_argument("path")
    face.add_argument("labels_file", nargs="?")

    collapse = sub.add_parser("collapse", parents=[common], help="Collapse diagonal edges")
    collapse.add_argument("path")
    collapse.add_argument("edges", nargs="*")
    collapse.add_argument("--all-diagonal", action="store_true", help="Collapse until no diagonal edge is left")

    category = sub.add_parser("category", parents=[common], help="Logical category and support")
    category.add_argument("path")
    category.add_argument("--semigroup", action="store_true", help="Include the Boolean semigroup table")
    return parser


def setup_logging() -> None:
    level = getattr(logging, config.LOG_LEVEL, logging.INFO)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 2
    setup_logging()
    if args.verbose:
        print(config.get_settings_status(), file=sys.stderr)
    missing = config.get_missing_config()
    if missing:
        logger.warning(f"⚠️ Unusable settings ignored: {missing}")
    if args.no_cross_check or not config.CROSS_CHECK:
        logger.warning("⚠️ Decider cross-check disabled; verdicts rest on the support search alone")
    try:
        output, code = HANDLERS[args.command](args)
    except CtxlabError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        sys.stdout.write(dumps({"error": str(e), "error_type": type(e).__name__, "exit_code": e.exit_code}))
        return e.exit_code
    sys.stdout.write(dumps(output))
    if args.verbose:
        if "reports" in output:
            for report in output["reports"]:
                print(summarizer.summarize(report), file=sys.stderr)
        elif "command" in output:
            print(summarizer.summarize(output), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
