"""Command-line front end.

Subcommands::

    bound    single-variable bound catalog at one s (optionally compared)
    tail     CSV of tail certificates over t values or a t range
    select   order selection and crossover table for one scenario at one t
    verify   oracle sweep: exact MGFs and Monte Carlo vs. the certificates
    sweep    CSV of per-group log-bound curves with crossover footer rows

All numeric CSV cells use 12 significant digits and LF line endings, so the
output is byte-stable for fixed inputs and seed.  Exit codes: 0 success,
2 input error, 3 enumeration-size guard, 4 verification failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .bounds import (
    BoundedSupport,
    Family,
    FamilyTag,
    MgfBound,
    eval_log_mgf_bound,
    mgf_bound,
    order_k,
)
from .oracle import (
    S_GRID,
    FinitePmf,
    extremal_two_point,
    mc_sum_tail,
    moment_matched_pmf,
    moments,
    random_mean_zero_pmf,
    validity_gap,
)
from .scenario import Query, Scenario, ScenarioError, load_scenario
from .selection import (
    SizeGuardError,
    crossover_threshold,
    optimize_exact,
    optimize_relaxed,
)
from .tails import (
    Side,
    SumScenario,
    lower_tail,
    mirror,
    one_sided_tail,
    order_k_scenario,
    two_sided_tail,
)

GAP_TOL = 1e-9  # validity sweep: exact log MGF may not exceed a bound by more

# Supports exercised by `verify --random` when none is given explicitly.
CANONICAL_SUPPORTS = ((-1.0, 1.0), (-1.0, 5.0), (-5.0, 1.0), (-2.0, 3.0))


def g12(x: float) -> str:
    return f"{x:.12g}"


def _pool_map(fn, items, threads: int):
    """Order-preserving map, optionally across a thread pool."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _emit(args, lines) -> None:
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _support_from_args(args) -> BoundedSupport:
    return BoundedSupport(
        a=args.a,
        b=args.b,
        m2=args.m2,
        m4=args.m4,
        odd_moments_zero=args.odd_moments_zero,
    )


def _tag_from_args(args) -> FamilyTag:
    try:
        family = Family(args.family)
    except ValueError:
        valid = ", ".join(f.value for f in Family)
        raise ValueError(f"--family must be one of: {valid}") from None
    if family is Family.ORDER_K:
        if args.k is None:
            raise ValueError("--family order_k requires --k")
        return order_k(args.k)
    if args.k is not None:
        raise ValueError(f"--k only applies to order_k, not {family.value}")
    return FamilyTag(family)


def _applicable_tags(support: BoundedSupport, k_max: int) -> list[FamilyTag]:
    tags = [FamilyTag(Family.CLASSIC), FamilyTag(Family.HERTZ)]
    tags += [order_k(k) for k in range(1, k_max + 1)]
    for fam in (Family.ORDER2_MOMENT, Family.ORDER4_MOMENT, Family.SYMMETRIC_ORDER4):
        tag = FamilyTag(fam)
        try:
            mgf_bound(support, tag)
        except ValueError:
            continue
        tags.append(tag)
    return tags


def cmd_bound(args) -> int:
    support = _support_from_args(args)
    header = "family,log_multiplier,rate,eval_at_s"
    if args.compare:
        rows = []
        for tag in _applicable_tags(support, args.k_max):
            bound = mgf_bound(support, tag)
            rows.append((eval_log_mgf_bound(bound, args.s), tag.label(), bound))
        rows.sort(key=lambda row: (row[0], row[1]))
        lines = [header] + [
            f"{label},{g12(bound.log_multiplier)},{g12(bound.rate)},{g12(value)}"
            for value, label, bound in rows
        ]
        _emit(args, lines)
        return 0
    if args.family is None:
        raise ValueError("give --family or --compare")
    bound = mgf_bound(support, _tag_from_args(args))
    value = eval_log_mgf_bound(bound, args.s)
    _emit(
        args,
        [
            header,
            f"{bound.family_tag.label()},{g12(bound.log_multiplier)},"
            f"{g12(bound.rate)},{g12(value)}",
        ],
    )
    return 0


def _resolve_query(scenario: Scenario, args) -> Query:
    query = scenario.query
    ts = query.ts
    t_range = query.t_range
    if getattr(args, "t", None):
        ts, t_range = tuple(args.t), None
    if getattr(args, "t_range", None):
        lo, hi, count = args.t_range
        if not 0.0 < lo < hi or int(count) < 2:
            raise ValueError("--t-range needs 0 < MIN < MAX and COUNT >= 2")
        ts, t_range = None, (lo, hi, int(count))
    side = query.side
    if getattr(args, "side", None):
        side = Side(args.side)
    samples = args.samples if getattr(args, "samples", None) else query.samples
    seed = args.seed if getattr(args, "seed", None) is not None else query.seed
    return Query(ts=ts, t_range=t_range, side=side, samples=samples, seed=seed)


def _choice_cell(tags) -> str:
    return "|".join(str(t.k) if t.family is Family.ORDER_K else t.label() for t in tags)


def _select_ks(variables, t: float, k_max: int, relaxed: bool):
    if relaxed:
        return optimize_relaxed(variables, t).rounded.ks
    return optimize_exact(variables, t, k_max).ks


def cmd_tail(args) -> int:
    scenario = load_scenario(args.scenario)
    query = _resolve_query(scenario, args)
    ts = query.resolve_ts()
    variables = scenario.variables
    mirrored = tuple(mirror(v) for v in variables)
    two_sided = query.side is Side.TWO_SIDED

    def row(t: float) -> str:
        if scenario.auto:
            if query.side is Side.LOWER:
                # the lower tail is the upper tail of the mirrored supports,
                # so the selector runs on those
                ks = _select_ks(mirrored, t, args.k_max, args.relaxed)
                cert = lower_tail(order_k_scenario(variables, ks), t)
                return f"{g12(t)},{g12(cert.log_bound)},{g12(cert.s_star)}," + "|".join(
                    map(str, ks)
                )
            ks_up = _select_ks(variables, t, args.k_max, args.relaxed)
            up = order_k_scenario(variables, ks_up)
            if not two_sided:
                cert = one_sided_tail(up, t)
                return f"{g12(t)},{g12(cert.log_bound)},{g12(cert.s_star)}," + "|".join(
                    map(str, ks_up)
                )
            ks_dn = _select_ks(mirrored, t, args.k_max, args.relaxed)
            cert = two_sided_tail(up, t, tuple(order_k(k) for k in ks_dn))
            return (
                f"{g12(t)},{g12(cert.log_bound)},{g12(cert.s_star)},"
                + "|".join(map(str, ks_up))
                + ","
                + "|".join(map(str, ks_dn))
            )
        fixed = scenario.sum_scenario()
        cell = _choice_cell(fixed.choices)
        if query.side is Side.LOWER:
            cert = lower_tail(fixed, t)
        elif two_sided:
            cert = two_sided_tail(fixed, t)
        else:
            cert = one_sided_tail(fixed, t)
        line = f"{g12(t)},{g12(cert.log_bound)},{g12(cert.s_star)},{cell}"
        if two_sided:
            line += f",{cell}"
        return line

    header = "t,log_bound,s_star,ks" + (",ks_mirror" if two_sided else "")
    lines = [header] + _pool_map(row, ts, args.threads)
    _emit(args, lines)
    return 0


def cmd_select(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.t is not None:
        t = args.t
    else:
        ts = scenario.query.resolve_ts()
        if len(ts) != 1:
            raise ValueError("select needs a single t (--t or a one-value query.t)")
        t = ts[0]
    selection = optimize_exact(scenario.variables, t, args.k_max)
    lines = [
        "k," + "|".join(map(str, selection.ks)),
        f"log_bound,{g12(selection.log_bound)}",
        "variable,k,k_next,t_star",
    ]
    for i, support in enumerate(scenario.variables, start=1):
        for k in range(1, args.k_max + 1):
            try:
                t_star = crossover_threshold(support, k)
            except RuntimeError:
                t_star = math.nan  # moment-refined A_{k+1} dipped below A_k
            lines.append(f"{i},{k},{k + 1},{g12(t_star)}")
    _emit(args, lines)
    return 0


def _measured_support(pmf: FinitePmf) -> BoundedSupport:
    base = pmf.support
    return BoundedSupport(
        a=base.a, b=base.b, m2=moments(pmf, 2), m4=moments(pmf, 4)
    )


def _poison(bound: MgfBound, factor: float) -> MgfBound:
    if factor == 1.0:
        return bound
    return MgfBound(bound.log_multiplier, bound.rate * factor, bound.family_tag)


def _sweep_one_pmf(pmf: FinitePmf, k_max: int, poison: float):
    """Max (exact - bound) gap per family label for one pmf."""
    measured = _measured_support(pmf)
    gaps = {}
    for tag in _applicable_tags(measured, k_max):
        bound = _poison(mgf_bound(measured, tag), poison)
        label = "order_k" if tag.family is Family.ORDER_K else tag.label()
        gap = validity_gap(pmf, bound, S_GRID)
        if label not in gaps or gap > gaps[label]:
            gaps[label] = gap
    return gaps


def _verify_pmfs(args) -> tuple[list[FinitePmf], Scenario | None]:
    rng = np.random.default_rng(args.seed)
    pmfs: list[FinitePmf] = []
    if args.random:
        if (args.a is None) != (args.b is None):
            raise ValueError("give both --a and --b, or neither")
        if args.a is not None:
            supports = [BoundedSupport(args.a, args.b)]
        else:
            supports = [BoundedSupport(a, b) for a, b in CANONICAL_SUPPORTS]
        for support in supports:
            pmfs.append(extremal_two_point(support))
            for _ in range(args.pmfs):
                atoms = int(rng.integers(2, 9))
                pmfs.append(
                    random_mean_zero_pmf(support, atoms, int(rng.integers(2 ** 63)))
                )
        return pmfs, None
    scenario = load_scenario(args.scenario)
    for i, support in enumerate(scenario.variables):
        pmfs.append(moment_matched_pmf(support, seed=args.seed + i))
    return pmfs, scenario


def cmd_verify(args) -> int:
    if args.random == (args.scenario is not None):
        raise ValueError("give a scenario file or --random (not both)")
    pmfs, scenario = _verify_pmfs(args)

    per_pmf = _pool_map(
        lambda pmf: _sweep_one_pmf(pmf, args.k_max, args.poison_rate),
        pmfs,
        args.threads,
    )
    max_gap: dict[str, float] = {}
    for gaps in per_pmf:
        for label, gap in gaps.items():
            if label not in max_gap or gap > max_gap[label]:
                max_gap[label] = gap

    lines = ["family,max_gap,violations"]
    violations = 0
    for label in sorted(max_gap):
        bad = 1 if max_gap[label] > GAP_TOL else 0
        violations += bad
        lines.append(f"{label},{g12(max_gap[label])},{bad}")

    # Monte Carlo side: one pmf per support summed, vs. its certificates.
    lines.append("kind,t,ks,estimate,std_error,certificate,ok")
    if args.random:
        group = pmfs[:: args.pmfs + 1]  # the extremal pmf of each support
    else:
        group = pmfs
    variables = tuple(_measured_support(p) for p in group)
    reach = sum(v.b for v in variables)
    ts = tuple(f * reach for f in (0.25, 0.5, 0.75))
    if scenario is not None and (scenario.query.ts or scenario.query.t_range):
        ts = tuple(t for t in scenario.query.resolve_ts() if t <= reach) or ts
        if len(ts) > 8:
            idx = np.linspace(0, len(ts) - 1, 8).astype(int)
            ts = tuple(ts[i] for i in idx)
    for t in ts:
        candidates = [(1,) * len(group), (2,) * len(group)]
        if args.k_max ** len(group) <= 10 ** 5:
            best = optimize_exact(variables, t, args.k_max).ks
            if best not in candidates:
                candidates.append(best)
        estimate, se = mc_sum_tail(group, t, args.samples, args.seed)
        for ks in candidates:
            cert = one_sided_tail(order_k_scenario(variables, ks), t)
            certificate = math.exp(min(cert.log_bound, 0.0))
            ok = estimate <= certificate + 3.0 * se
            if not ok:
                violations += 1
            lines.append(
                f"mc,{g12(t)},{'|'.join(map(str, ks))},{g12(estimate)},"
                f"{g12(se)},{g12(certificate)},{int(ok)}"
            )
    lines.append("verdict," + ("ok" if violations == 0 else "violation"))
    _emit(args, lines)
    return 0 if violations == 0 else 4


def _parse_group(text: str, n: int) -> tuple[int, ...]:
    try:
        ks = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise ValueError(f"--group must be comma-separated integers, got {text!r}")
    if len(ks) != n or any(k < 1 for k in ks):
        raise ValueError(f"--group needs {n} integers >= 1, got {text!r}")
    return ks


def cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    query = _resolve_query(scenario, args)
    if query.t_range is not None:
        lo, hi, count = query.t_range
        ts = np.linspace(lo, hi, count)
    else:
        ts = np.asarray(query.resolve_ts())
    variables = scenario.variables
    if args.group:
        groups = [_parse_group(g, len(variables)) for g in args.group]
        scenarios = [order_k_scenario(variables, ks) for ks in groups]
    elif not scenario.auto:
        scenarios = [scenario.sum_scenario()]
    else:
        raise ValueError("sweep needs --group selections (or explicit choices)")

    def curve(sum_scenario: SumScenario):
        return [one_sided_tail(sum_scenario, float(t)).log_bound for t in ts]

    curves = _pool_map(curve, scenarios, args.threads)
    names = [f"group{i + 1}" for i in range(len(scenarios))]
    lines = ["t," + ",".join(names)]
    for j, t in enumerate(ts):
        lines.append(g12(float(t)) + "," + ",".join(g12(c[j]) for c in curves))

    # crossovers of the lower envelope, refined by bisection
    def winner(t: float) -> int:
        values = [one_sided_tail(s, t).log_bound for s in scenarios]
        return min(range(len(values)), key=lambda i: (values[i], i))

    for j in range(1, len(ts)):
        before, after = winner(float(ts[j - 1])), winner(float(ts[j]))
        if before == after:
            continue
        lo, hi = float(ts[j - 1]), float(ts[j])
        while hi - lo > 1e-6:
            mid = 0.5 * (lo + hi)
            if winner(mid) == before:
                lo = mid
            else:
                hi = mid
        lines.append(
            f"crossover,{names[before]}->{names[after]},{g12(0.5 * (lo + hi))}"
        )
    _emit(args, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kbounds",
        description="Order-k MGF bounds and Chernoff tail certificates "
        "for sums of bounded zero-mean variables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    cpu = os.cpu_count() or 1

    def add_common(p, threads=False, out=True, k_max=True):
        if out:
            p.add_argument("--out", help="write output to this file instead of stdout")
        if k_max:
            p.add_argument("--k-max", type=int, default=8, dest="k_max")
        if threads:
            p.add_argument("--threads", type=int, default=cpu)

    p_bound = sub.add_parser("bound", help="single-variable bound catalog")
    p_bound.add_argument("--a", type=float, required=True)
    p_bound.add_argument("--b", type=float, required=True)
    p_bound.add_argument("--m2", type=float)
    p_bound.add_argument("--m4", type=float)
    p_bound.add_argument("--odd-moments-zero", action="store_true")
    p_bound.add_argument("--family", help="classic, hertz, order_k, ...")
    p_bound.add_argument("--k", type=int)
    p_bound.add_argument("--s", type=float, required=True)
    p_bound.add_argument("--compare", action="store_true")
    add_common(p_bound)
    p_bound.set_defaults(func=cmd_bound)

    p_tail = sub.add_parser("tail", help="tail certificates over t")
    p_tail.add_argument("scenario")
    p_tail.add_argument("--t", type=float, nargs="+")
    p_tail.add_argument("--t-range", type=float, nargs=3, metavar=("MIN", "MAX", "N"))
    p_tail.add_argument("--side", choices=[s.value for s in Side])
    p_tail.add_argument("--relaxed", action="store_true",
                        help="auto-select via the continuous relaxation")
    p_tail.add_argument("--seed", type=int)
    p_tail.add_argument("--samples", type=int)
    add_common(p_tail, threads=True)
    p_tail.set_defaults(func=cmd_tail)

    p_select = sub.add_parser("select", help="order selection + crossover table")
    p_select.add_argument("scenario")
    p_select.add_argument("--t", type=float)
    add_common(p_select)
    p_select.set_defaults(func=cmd_select)

    p_verify = sub.add_parser("verify", help="oracle sweep against certificates")
    p_verify.add_argument("scenario", nargs="?")
    p_verify.add_argument("--random", action="store_true",
                          help="random pmfs on canonical (or --a/--b) supports")
    p_verify.add_argument("--a", type=float)
    p_verify.add_argument("--b", type=float)
    p_verify.add_argument("--pmfs", type=int, default=1000,
                          help="random pmfs per support")
    p_verify.add_argument("--samples", type=int, default=10 ** 6)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--poison-rate", type=float, default=1.0,
                          help=argparse.SUPPRESS)  # negative-control test hook
    add_common(p_verify, threads=True)
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="per-group bound curves over a t range")
    p_sweep.add_argument("scenario")
    p_sweep.add_argument("--t-range", type=float, nargs=3, metavar=("MIN", "MAX", "N"))
    p_sweep.add_argument("--group", action="append",
                         help="comma-separated k per variable; repeatable")
    p_sweep.add_argument("--seed", type=int)
    p_sweep.add_argument("--samples", type=int)
    add_common(p_sweep, threads=True, k_max=False)
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SizeGuardError as exc:
        print(f"error: {exc} (for `tail`, retry with --relaxed)", file=sys.stderr)
        return 3
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
