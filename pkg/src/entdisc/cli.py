"""
Command-line interface for entanglement discrimination.
Subcommands evaluate and orbit-minimize the measures, search observable
families, tabulate noise curves, bound graph-state pairs, simulate finite
samples and evaluate measured correlations.
"""
import argparse
import json
import logging
import math
import os
import sys
from typing import List, Optional, Sequence, Tuple

from . import display
from .dense import DenseState, state_from_dict
from .errors import DataFormatError, DiscriminationError, StateError
from .graphs import (
    StabilizerGroup,
    correlation_profile,
    count_two_point,
    elements_of_weight,
    find_stabilizer_group,
    generators_from_graph,
    graph_from_dict,
    group_from_generators,
    load_graph,
    stabilizer_state,
    two_point_bound,
)
from .observables import Observable, ProductBasis, computational_basis
from .optimizer import (
    OptimizerConfig,
    fidelity_measure,
    max_overlap,
    minimize_d,
    minimize_f,
    noise_curve,
    noise_tolerance,
    parse_grid,
    subset_search,
)
from .pauli import parse_labels
from .states import BUILTIN_STATES, builtin_generators, builtin_state
from .statstest import (
    DEFAULT_MC_SAMPLES,
    ingest_correlations,
    measures_from_correlations,
    simulate_runs,
    summarize_samples,
)

logger = logging.getLogger(__name__)

OBSERVABLE_FAMILIES = ("stabilizers", "two-point", "three-point", "comp-basis")


class _Input:
    """A resolved ``--rho``/``--sigma`` argument."""

    def __init__(self, name: str, state: DenseState, group: Optional[StabilizerGroup] = None):
        self.name = name
        self.state = state
        self._group = group

    def group(self) -> StabilizerGroup:
        """Stabilizer group, from the listed generators or by scanning all Pauli words."""
        if self._group is None:
            self._group = find_stabilizer_group(self.state)
        return self._group


def _read_json(path: str) -> dict:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DataFormatError(f"{path} is not valid JSON: {e}") from e


def resolve_state(text: str) -> _Input:
    """
    Resolve a built-in state name, a state JSON file or a graph JSON file.

    Raises:
        FileNotFoundError: If ``text`` is neither a built-in name nor a file
    """
    if text in BUILTIN_STATES:
        try:
            group = group_from_generators(builtin_generators(text))
        except StateError:
            group = None
        return _Input(text, builtin_state(text), group)
    if not os.path.exists(text):
        known = ", ".join(sorted(BUILTIN_STATES))
        raise FileNotFoundError(f"{text}: no such file and not a built-in state ({known})")
    obj = _read_json(text)
    if isinstance(obj, dict) and "edges" in obj:
        group = group_from_generators(generators_from_graph(graph_from_dict(obj)))
        return _Input(text, stabilizer_state(group), group)
    return _Input(text, state_from_dict(obj))


def read_label_file(path: str) -> List[str]:
    """Pauli labels, one per line; ``#`` comments and blank lines ignored."""
    labels = []
    with open(path, 'r', encoding='utf-8') as f:
        for raw in f:
            line = raw.split('#', 1)[0].strip()
            if line:
                labels.append(line)
    if not labels:
        raise DataFormatError(f"{path} lists no observables")
    return labels


def resolve_observables(text: str, rho: _Input) -> List[Observable]:
    """Named observable family of rho, or a file of Pauli labels."""
    if text == "stabilizers":
        obs = rho.group().nontrivial()
    elif text == "two-point":
        obs = elements_of_weight(rho.group(), 2)
    elif text == "three-point":
        obs = elements_of_weight(rho.group(), 3)
    elif text == "comp-basis":
        obs = [computational_basis(rho.state.n)]
    elif os.path.exists(text):
        obs = parse_labels(read_label_file(text))
    else:
        raise FileNotFoundError(
            f"{text}: no such file and not an observable family ({', '.join(OBSERVABLE_FAMILIES)})"
        )
    if not obs:
        raise StateError(f"{rho.name} has no {text} observables")
    return obs


def build_config(args: argparse.Namespace) -> OptimizerConfig:
    """OptimizerConfig from flags; unset flags keep the environment defaults."""
    overrides = {
        "restarts": args.restarts,
        "seed": args.seed,
        "tol": args.tol,
        "max_iter": args.max_iter,
        "workers": args.workers,
    }
    kwargs = {key: value for key, value in overrides.items() if value is not None}
    return OptimizerConfig(
        include_permutations=args.perms, progress=args.progress, **kwargs
    )


def _emit(args: argparse.Namespace, text: str) -> None:
    if args.out:
        with open(args.out, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args: argparse.Namespace, obj) -> None:
    _emit(args, json.dumps(obj, indent=2) + "\n")


def _number(value):
    if value is None:
        return None
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def _normalization(args: argparse.Namespace, rho: _Input) -> Tuple[str, Optional[DenseState]]:
    """Normalization target; ``--normalization reference`` alone uses rho as the ideal state."""
    if args.reference is not None:
        return "reference", resolve_state(args.reference).state
    if args.normalization == "reference":
        return "reference", rho.state
    return args.normalization, None


def cmd_discriminate(args: argparse.Namespace) -> int:
    """Orbit-minimized F and/or D of rho against sigma."""
    rho = resolve_state(args.rho)
    sigma = resolve_state(args.sigma)
    obs = resolve_observables(args.obs, rho)
    cfg = build_config(args)
    normalization, reference = _normalization(args, rho)
    result = {"rho": rho.name, "sigma": sigma.name, "observables": args.obs}
    metrics = ["F", "D"] if args.metric == "both" else [args.metric]
    if args.metric == "both" and any(isinstance(a, ProductBasis) for a in obs):
        logger.warning("F is undefined for product-basis measurements; reporting D only")
        result["F"] = None
        metrics = ["D"]
    for metric in metrics:
        search = minimize_f if metric == "F" else minimize_d
        report = search(rho.state, sigma.state, obs, cfg, normalization=normalization, reference=reference)
        result[metric] = report.to_dict()
        if not args.quiet:
            display.show_table(
                f"{metric}({rho.name} || {sigma.name}), {len(obs)} observable(s)",
                display.REPORT_HEADER,
                display.report_rows(report),
                footer=[f"F = {display.format_value(report.F)}   D = {display.format_value(report.D)}"],
            )
    _emit_json(args, result)
    return 0


def cmd_overlap(args: argparse.Namespace) -> int:
    """Maximal squared overlap of rho with the orbit of sigma."""
    rho = resolve_state(args.rho)
    sigma = resolve_state(args.sigma)
    value, params = max_overlap(rho.state, sigma.state, build_config(args))
    result = {
        "rho": rho.name,
        "sigma": sigma.name,
        "max_overlap": value,
        "fidelity_measure": fidelity_measure(rho.state.n, min(value, 1.0)),
        "params": params.to_dict(),
    }
    if not args.quiet:
        print(f"max overlap = {value:.8g}", file=sys.stderr)
    _emit_json(args, result)
    return 0


def cmd_subset_search(args: argparse.Namespace) -> int:
    """Rank observable families by their orbit-minimized measure."""
    rho = resolve_state(args.rho)
    sigma = resolve_state(args.sigma)
    candidates = resolve_observables(args.obs, rho)
    metric = args.metric
    normalization, reference = _normalization(args, rho)
    results = subset_search(
        rho.state, sigma.state, candidates, args.max_size, metric, build_config(args),
        normalization, reference,
    )
    if args.top:
        results = results[: args.top]
    if not args.quiet:
        rows = [[", ".join(r.labels), str(r.size), display.format_value(r.value)] for r in results]
        display.show_table(f"Best {metric} families", ("family", "size", metric), rows)
    _emit_json(args, {"rho": rho.name, "sigma": sigma.name, "metric": metric,
                      "families": [r.to_dict() for r in results]})
    return 0


def cmd_noise_curve(args: argparse.Namespace) -> int:
    """Tabulate F and D against the white-noise level as CSV."""
    sigma = resolve_state(args.sigma)
    grid = parse_grid(args.noise_grid)
    cfg = build_config(args)
    if args.correlations:
        rho_data = ingest_correlations(args.correlations).to_statistics()
        curve = noise_curve(rho_data, sigma.state, None, grid, cfg)
    else:
        rho = resolve_state(args.rho)
        curve = noise_curve(rho.state, sigma.state, resolve_observables(args.obs, rho), grid, cfg)
    if not args.quiet:
        for column in ("F", "D"):
            tolerance = noise_tolerance(curve, column)
            print(f"{column} noise tolerance >= {display.format_value(tolerance)}", file=sys.stderr)
    if args.out:
        with open(args.out, 'w', encoding='utf-8', newline='') as f:
            curve.write_csv(f)
    else:
        curve.write_csv(sys.stdout)
    return 0


def cmd_graph_bound(args: argparse.Namespace) -> int:
    """Two-point lower bound for a pair of graph states."""
    g1, g2 = load_graph(args.g1), load_graph(args.g2)
    k1, ops1 = count_two_point(g1)
    k2, ops2 = count_two_point(g2)
    bound = two_point_bound(g1, g2)
    result = {
        "k1": k1,
        "k2": k2,
        "bound": bound,
        "two_point_g1": [w.label for w in ops1],
        "two_point_g2": [w.label for w in ops2],
        "profile_g1": correlation_profile(group_from_generators(generators_from_graph(g1))),
        "profile_g2": correlation_profile(group_from_generators(generators_from_graph(g2))),
    }
    if not args.quiet:
        print(f"k1 = {k1}, k2 = {k2}, bound = {bound:.4f}", file=sys.stderr)
    _emit_json(args, result)
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    """Sample finite measurement runs of rho and score them against sigma."""
    rho = resolve_state(args.rho)
    sigma = resolve_state(args.sigma)
    obs = resolve_observables(args.obs, rho)
    seed = args.seed if args.seed is not None else OptimizerConfig().seed
    runs = simulate_runs(rho.state, obs, args.runs, seed)
    summary = summarize_samples(runs, sigma.state)
    if not args.quiet:
        rows = [[label, str(s["runs"]), display.format_value(s["D"]), display.format_value(s["coin_tosses"])]
                for label, s in summary.items()]
        display.show_table(f"{args.runs} runs of {rho.name} vs {sigma.name}",
                           ("observable", "runs", "D", "coin tosses"), rows)
    _emit_json(args, {"rho": rho.name, "sigma": sigma.name, "seed": seed, "samples": summary})
    return 0


def cmd_ingest(args: argparse.Namespace) -> int:
    """Measures and Monte-Carlo uncertainties from measured correlations."""
    data = ingest_correlations(args.data)
    sigma = resolve_state(args.sigma)
    reference = resolve_state(args.reference).state if args.reference else None
    cfg = build_config(args)
    result = {"data": args.data, "sigma": sigma.name, "records": len(data),
              "mc_samples": args.mc_samples}
    metrics = ["F", "D"] if args.metric == "both" else [args.metric]
    for metric in metrics:
        value, uncertainty = measures_from_correlations(
            data, sigma.state, metric, cfg, args.mc_samples, reference
        )
        result[metric] = {"value": _number(value), "uncertainty": _number(uncertainty)}
        if not args.quiet:
            print(f"{metric} = {display.format_value(value)} +- {display.format_value(uncertainty)}",
                  file=sys.stderr)
    _emit_json(args, result)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('-o', '--out', help='Write the output to this file instead of stdout')
    parser.add_argument('-q', '--quiet', action='store_true', help='Do not print the human-readable summary')
    parser.add_argument('-v', '--verbose', action='count', default=0,
                        help='Log progress (-v for INFO, -vv for DEBUG)')


def _add_optimizer(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--perms', action='store_true',
                        help='Include qubit permutations of sigma in the orbit')
    parser.add_argument('--restarts', type=int, help='Starts per permutation (default: ENTDISC_RESTARTS or 64)')
    parser.add_argument('--seed', type=int, help='Master seed (default: ENTDISC_SEED or 0)')
    parser.add_argument('--tol', type=float, help='Objective tolerance (default: ENTDISC_TOL or 1e-9)')
    parser.add_argument('--max-iter', type=int, help='Iterations per start (default: ENTDISC_MAX_ITER or 4000)')
    parser.add_argument('--workers', type=int,
                        help='Worker processes for the local searches (default: ENTDISC_WORKERS or all CPUs)')
    parser.add_argument('--progress', action='store_true', help='Show progress bars')


def _add_states(parser: argparse.ArgumentParser, obs_default: str = "stabilizers") -> None:
    parser.add_argument('--rho', required=True, help='Built-in state name, state JSON or graph JSON')
    parser.add_argument('--sigma', required=True, help='Built-in state name, state JSON or graph JSON')
    parser.add_argument('--obs', default=obs_default,
                        help=f"Observable family ({', '.join(OBSERVABLE_FAMILIES)}) or a file of Pauli labels")


def _add_normalization(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--normalization', choices=('rho', 'reference'), default='rho',
                        help='State the averaged observable is normalized on (default: rho)')
    parser.add_argument('--reference', help='Ideal state for reference normalization (default: rho)')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entdisc",
        description="Discriminate multiqubit states from local-unitary orbits",
    )
    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    p = subparsers.add_parser('discriminate', help='Orbit-minimized F and D for an observable family')
    _add_states(p)
    p.add_argument('--metric', choices=('F', 'D', 'both'), default='both', help='Measures to compute')
    _add_normalization(p)
    _add_optimizer(p)
    _add_common(p)
    p.set_defaults(handler=cmd_discriminate)

    p = subparsers.add_parser('overlap', help='Maximal overlap of rho with the orbit of sigma')
    p.add_argument('--rho', required=True, help='Pure state (name or JSON)')
    p.add_argument('--sigma', required=True, help='Pure state (name or JSON)')
    _add_optimizer(p)
    _add_common(p)
    p.set_defaults(handler=cmd_overlap)

    p = subparsers.add_parser('subset-search', help='Rank families of stabilizing operators')
    _add_states(p)
    p.add_argument('--metric', choices=('F', 'D'), default='D', help='Measure to rank by (default: D)')
    p.add_argument('--max-size', type=int, default=4, help='Largest family size (default: 4)')
    p.add_argument('--top', type=int, default=0, help='Only report the best N families')
    _add_normalization(p)
    _add_optimizer(p)
    _add_common(p)
    p.set_defaults(handler=cmd_subset_search)

    p = subparsers.add_parser('noise-curve', help='F and D against white noise, as CSV')
    p.add_argument('--rho', help='Noiseless prepared state (name or JSON)')
    p.add_argument('--sigma', required=True, help='Pure state whose orbit is searched')
    p.add_argument('--obs', default='stabilizers', help='Observable family or label file')
    p.add_argument('--correlations', help='Measured correlations CSV used instead of --rho')
    p.add_argument('--noise-grid', default='0:1:0.05', help='Grid of p as a:b:step (default: 0:1:0.05)')
    _add_optimizer(p)
    _add_common(p)
    p.set_defaults(handler=cmd_noise_curve)

    p = subparsers.add_parser('graph-bound', help='Two-point stabilizer bound for two graphs')
    p.add_argument('--g1', required=True, help='Graph JSON of the prepared state')
    p.add_argument('--g2', required=True, help='Graph JSON of the orbit state')
    _add_common(p)
    p.set_defaults(handler=cmd_graph_bound)

    p = subparsers.add_parser('simulate', help='Finite-sample runs and their type-class exponents')
    _add_states(p)
    p.add_argument('--runs', type=int, default=1000, help='Total number of runs (default: 1000)')
    p.add_argument('--seed', type=int, help='Sampling seed (default: ENTDISC_SEED or 0)')
    _add_common(p)
    p.set_defaults(handler=cmd_simulate)

    p = subparsers.add_parser('ingest', help='Measures from a correlations CSV')
    p.add_argument('--data', required=True, help='CSV of label,expectation,stderr')
    p.add_argument('--sigma', required=True, help='Pure state whose orbit is searched')
    p.add_argument('--reference', help='Ideal state the observables are normalized against')
    p.add_argument('--metric', choices=('F', 'D', 'both'), default='both', help='Measures to compute')
    p.add_argument('--mc-samples', type=int, default=DEFAULT_MC_SAMPLES,
                   help=f'Monte-Carlo resamples for the uncertainty (default: {DEFAULT_MC_SAMPLES})')
    _add_optimizer(p)
    _add_common(p)
    p.set_defaults(handler=cmd_ingest)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger("entdisc").setLevel(level)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse ``argv`` and run the subcommand.

    Returns:
        0 on success, 1 on a computation or input error; usage errors exit
        with status 2 from argparse
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_help(sys.stderr)
        return 2
    if args.command == 'noise-curve' and not (args.rho or args.correlations):
        parser.error("noise-curve needs --rho or --correlations")
    _configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (DiscriminationError, OSError) as e:
        display.show_error(str(e))
        return 1


def main():
    """Main entry point for the CLI."""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(130)


if __name__ == "__main__":
    main()
