"""Command line front end.

Exit codes: 0 success, 1 a check failed (the witness is printed), 2 usage or
budget error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import experiments as ex
from . import harmonic as hm
from . import partitions as pt
from . import words as wd
from .config import Config, load_config
from .errors import BudgetExceeded, DomainError
from .group import GroupElement, check_word
from .output import render

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2


class CheckFailed(Exception):
    pass


def _triple(p: argparse.ArgumentParser) -> None:
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p.add_argument("z", type=int)


def _element(text: str) -> GroupElement:
    try:
        return GroupElement.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisenberg",
        description="Bounded partition functions and harmonic functions on H3(Z).",
    )
    parser.add_argument("--config", help="key=value config file (HEIS_* variables override it)")
    parser.add_argument("--format", choices=("csv", "json"))
    parser.add_argument("--seed", type=int, help="RNG seed override")
    parser.add_argument("--precision", type=int, help="decimal digits for ratios")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("count", help="p(x, y, z)")
    _triple(p)
    p = sub.add_parser("row", help="p(x, y, z) for every z, as CSV")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)
    p = sub.add_parser("enumerate", help="list the partitions fitting in the box")
    _triple(p)
    p = sub.add_parser("fiber", help="words evaluating to (x, y, z)")
    _triple(p)
    p = sub.add_parser("corners", help="inner/outer corners of a word and its relation pairs")
    p.add_argument("word")
    p = sub.add_parser("relations", help="relation pairs whose first word evaluates to (x, y, z)")
    _triple(p)
    p = sub.add_parser("corner-identity", help="exact corner-weighted count of a fiber")
    _triple(p)

    p = sub.add_parser("harmonic-check", help="residual f - P_mu f over a box")
    p.add_argument("function", help="function tag, e.g. h0, char:2/2, translate:h0:1,2,1")
    p.add_argument("--measure", default="sw", help="sw, sw-prob or a JSON file")
    p.add_argument("--box", nargs=3, type=int, default=(10, 10, 50), metavar=("X", "Y", "Z"),
                   help="half-widths: |x| <= X, |y| <= Y, |z| <= Z")
    p.add_argument("--superharmonic", action="store_true", help="only require f >= P_mu f")

    p = sub.add_parser("iterate-seed", help="P_mu^k applied to an induced seed, k = 0..n")
    p.add_argument("n", type=int)
    _triple(p)
    p.add_argument("--measure", default="sw")
    p.add_argument("--generators", default="[[-1,0,0]]",
                   help="JSON list of commuting support points generating the seed subgroup")
    p.add_argument("--chi", default="[\"1\"]", help="JSON list of character values on the generators")

    p = sub.add_parser("degree-sum", help="f(g0) against the degree-n sum")
    p.add_argument("function")
    p.add_argument("g0", type=_element, help="x,y,z")
    p.add_argument("n", type=int)

    p = sub.add_parser("ratio-table", help="p(x,y,z-1)/p(x,y,z) along a family")
    _family(p)

    p = sub.add_parser("corner-ratio", help="p_{<=i}/p along a family")
    p.add_argument("--i", type=int, default=1)
    _family(p)

    p = sub.add_parser("unimodality", help="sweep for unimodality violations")
    p.add_argument("--max", nargs=2, type=int, default=(30, 30), metavar=("X", "Y"))

    p = sub.add_parser("bounds", help="polynomial upper bounds and reported lower bounds")
    p.add_argument("--x", default="1..20")
    p.add_argument("--y", default="1..20")
    p.add_argument("--z", default=None, help="restrict z (default 1..xy)")
    p.add_argument("--i", default="1..4")
    p.add_argument("--j", default="", help="exponents for the reported p >= z^j checks")

    p = sub.add_parser("walk", help="Monte Carlo southwest random walk")
    p.add_argument("--steps", type=int, default=12)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--targets", default="1,1,1;3,2,4;5,4,12", help="points g; frequency of g^-1 is reported")

    p = sub.add_parser("coset-decay", help="boundary part of the degree-n sums")
    p.add_argument("function")
    p.add_argument("--g0", type=_element, default=GroupElement(0, 0, 0))
    p.add_argument("--A", dest="cutoff", type=int, default=2)
    p.add_argument("--n-range", default="10,20,30")

    p = sub.add_parser("center-condition", help="search for non-central g, h with gh central")
    p.add_argument("--measure", required=True)
    p.add_argument("--depth", type=int, default=8)
    return parser


def _family(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=("diagonal", "fixed-height", "affine"), default="diagonal")
    p.add_argument("--t-range", default="8,16,24,32")
    p.add_argument("--height", type=int)
    p.add_argument("--affine", help="x0,x1,y0,y1,z0,z1")


def _spec(args) -> ex.SequenceSpec:
    affine = tuple(int(v) for v in args.affine.split(",")) if args.affine else None
    return ex.SequenceSpec(args.preset, ex.parse_range(args.t_range), args.height, affine)


def _meta(cfg: Config, command: str, **extra) -> dict:
    return {"command": command, **extra, **{f"config.{k}": v for k, v in cfg.as_dict().items()}}


def _emit(out, columns, rows, meta, cfg: Config) -> None:
    out.write(render(columns, rows, meta, cfg.format))


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = load_config(args.config).updated(format=args.format, seed=args.seed, precision=args.precision)
        pt.default_table().capacity = cfg.memo_capacity
        return _dispatch(args, cfg, out)
    except CheckFailed as exc:
        err.write(f"check failed: {exc}\n")
        return EXIT_CHECK_FAILED
    except (BudgetExceeded, DomainError, OSError, ValueError, json.JSONDecodeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def _dispatch(args, cfg: Config, out) -> int:
    cmd = args.command
    if cmd == "count":
        out.write(f"{pt.count(args.x, args.y, args.z)}\n")
    elif cmd == "row":
        row = pt.count_row(args.x, args.y)
        _emit(out, ["x", "y", "z", "count"], [(args.x, args.y, z, v) for z, v in enumerate(row)],
              _meta(cfg, cmd, x=args.x, y=args.y), cfg)
    elif cmd == "enumerate":
        for rows in pt.enumerate_partitions(args.x, args.y, args.z, cfg.enum_cells):
            out.write(("+".join(map(str, rows)) or "0") + "\n")
    elif cmd == "fiber":
        for w in wd.fiber(GroupElement(args.x, args.y, args.z), cfg.word_budget):
            out.write(w + "\n")
    elif cmd == "corners":
        w = check_word(args.word)
        _emit(out, ["w", "w_prime", "position", "f_w", "f_prime"],
              [(p.w, p.w_prime, p.position, p.f_w, p.f_prime) for p in wd.relations_from(w)],
              _meta(cfg, cmd, word=w, inner_corners=wd.inner_corners(w), outer_corners=wd.outer_corners(w)), cfg)
    elif cmd == "relations":
        g = GroupElement(args.x, args.y, args.z)
        _emit(out, ["w", "w_prime", "position", "f_w", "f_prime"],
              [(p.w, p.w_prime, p.position, p.f_w, p.f_prime) for p in wd.relation_pairs(g, cfg.word_budget)],
              _meta(cfg, cmd, target=str(g)), cfg)
    elif cmd == "corner-identity":
        res = wd.corner_identity_check(GroupElement(args.x, args.y, args.z), cfg.word_budget)
        _emit(out, ["target", "lhs", "rhs", "epsilon", "shifted_lhs", "shifted_rhs", "epsilon_prime", "pairs"],
              [(str(res.target), res.lhs, res.rhs, res.epsilon, res.shifted_lhs, res.shifted_rhs,
                res.epsilon_prime, res.pairs)], _meta(cfg, cmd), cfg)
        if not res.holds:
            raise CheckFailed(f"corner identity fails at {res.target}")
    elif cmd == "harmonic-check":
        return _harmonic_check(args, cfg, out)
    elif cmd == "iterate-seed":
        mu = hm.load_measure(args.measure)
        g = GroupElement(args.x, args.y, args.z)
        res = hm.induced_function(mu, json.loads(args.generators), json.loads(args.chi), args.n, [g],
                                  node_budget=cfg.node_budget)
        _emit(out, ["n", "point", "value"], [(k, str(g), vals[g]) for k, vals in enumerate(res.history)],
              _meta(cfg, cmd, measure=mu.tag, generators=args.generators, chi=args.chi, status=res.status), cfg)
    elif cmd == "degree-sum":
        f = hm.parse_function(args.function)
        lhs, rhs = hm.degree_sum_identity(f, args.g0, args.n)
        _emit(out, ["function", "g0", "n", "lhs", "rhs"], [(f.tag, str(args.g0), args.n, lhs, rhs)],
              _meta(cfg, cmd), cfg)
        if lhs != rhs:
            raise CheckFailed(f"degree sum {lhs} != {rhs}")
    elif cmd == "ratio-table":
        spec = _spec(args)
        rep = ex.ratio_table(spec, cfg.compute_budget, cfg.precision)
        _emit(out, ["t", "x", "y", "z", "p_prev", "p", "ratio", "ratio_decimal", "deviation_decimal"],
              [(r.t, r.x, r.y, r.z, r.previous, r.current, r.ratio, r.ratio_decimal, r.deviation_decimal)
               for r in rep.rows], _meta(cfg, cmd, spec=spec.describe()), cfg)
    elif cmd == "corner-ratio":
        spec = _spec(args)
        rows = ex.corner_ratio_decay(args.i, spec, cfg.compute_budget, cfg.precision)
        _emit(out, ["t", "x", "y", "z", "p_le_i", "p", "ratio", "ratio_decimal"],
              [(r.t, r.x, r.y, r.z, r.bounded, r.total, r.ratio, r.ratio_decimal) for r in rows],
              _meta(cfg, cmd, spec=spec.describe(), i=args.i), cfg)
    elif cmd == "unimodality":
        mx, my = args.max
        bad = ex.unimodality_sweep(mx, my)
        _emit(out, ["x", "y", "z"], bad, _meta(cfg, cmd, max_x=mx, max_y=my, violations=len(bad)), cfg)
        if bad:
            raise CheckFailed(f"unimodality fails at {bad[0]}")
    elif cmd == "bounds":
        return _bounds(args, cfg, out)
    elif cmd == "walk":
        tally = ex.simulate_walk(args.steps, args.trials, cfg.seed, cfg.rng)
        targets = [GroupElement.parse(t) for t in args.targets.split(";") if t.strip()]
        rows = []
        for g in targets:
            rows.append((str(g), tally.visits.get(GroupElement(-g.x, -g.y, g.x * g.y - g.z), 0),
                         float(tally.green_estimate(g)), ex.expected_visit_mass(g),
                         float(ex.expected_visit_mass(g)), tally.standard_error(g), tally.z_score(g)))
        _emit(out, ["g", "visits_to_inverse", "frequency", "expected", "expected_decimal", "std_error", "z_score"],
              rows, _meta(cfg, cmd, steps=args.steps, trials=args.trials, seed=cfg.seed, rng=cfg.rng,
                          stream="SeedSequence([seed, trial // %d])" % ex.WALK_BLOCK), cfg)
    elif cmd == "coset-decay":
        f = hm.parse_function(args.function)
        rows = ex.coset_decay_table(f, args.g0, args.cutoff, ex.parse_range(args.n_range),
                                    precision=cfg.precision)
        _emit(out, ["n", "value", "value_decimal"], [(r.n, r.value, r.value_decimal) for r in rows],
              _meta(cfg, cmd, function=f.tag, g0=str(args.g0), A=args.cutoff), cfg)
    elif cmd == "center-condition":
        mu = hm.load_measure(args.measure)
        res = hm.center_product_condition(mu, args.depth)
        _emit(out, ["found", "g", "h", "product"],
              [(res.found, res.g and str(res.g), res.h and str(res.h), res.product and str(res.product))],
              _meta(cfg, cmd, measure=mu.tag, depth=args.depth), cfg)
        if not res.found:
            raise CheckFailed(f"not found within depth {args.depth}")
    return EXIT_OK


def _harmonic_check(args, cfg: Config, out) -> int:
    f = hm.parse_function(args.function)
    mu = hm.load_measure(args.measure)
    box = hm.Box.symmetric(*args.box)
    if args.superharmonic:
        ok, witness = hm.superharmonic_check(mu, f, box)
        _emit(out, ["function_tag", "measure_tag", "box", "superharmonic", "witness_point"],
              [(f.tag, mu.tag, str(box), ok, witness and str(witness))], _meta(cfg, "harmonic-check"), cfg)
        if not ok:
            raise CheckFailed(f"{f.tag} is not superharmonic at {witness}")
        return EXIT_OK
    rep = hm.harmonic_residual(mu, f, box)
    _emit(out, ["function_tag", "measure_tag", "box", "max_defect", "witness_point"],
          [(f.tag, mu.tag, str(box), rep.max_defect, rep.witness and str(rep.witness))],
          _meta(cfg, "harmonic-check", nonzero_defects=rep.nonzero_count), cfg)
    if not rep.zero:
        raise CheckFailed(f"max_defect={rep.max_defect} at {rep.witness}")
    return EXIT_OK


def _bounds(args, cfg: Config, out) -> int:
    rep = ex.bound_sweep(
        ex.parse_range(args.x), ex.parse_range(args.y), ex.parse_range(args.i),
        ex.parse_range(args.z) if args.z else None, ex.parse_range(args.j) if args.j else (),
    )
    rows = [("power_upper", *v, "", "violated") for v in rep.power_violations]
    rows += [("corner_upper", *v, "violated") for v in rep.corner_violations]
    rows += [("lower_ratio_min", *where, "", ex.to_decimal(Fraction(q), cfg.precision))
             for q, where in (rep.lower_ratio_minima[y] for y in sorted(rep.lower_ratio_minima))]
    rows += [(f"power_lower_j{j}", x, y, z, "", "holds" if ok else "fails")
             for j, x, y, z, ok in rep.power_lower_checks if not ok]
    _emit(out, ["check", "x", "y", "z", "i", "result"], rows,
          _meta(cfg, "bounds", cells=rep.cells, corner_cells=rep.corner_cells,
                upper_violations=len(rep.power_violations) + len(rep.corner_violations),
                lower_checks=len(rep.power_lower_checks)), cfg)
    if not rep.upper_bounds_hold:
        raise CheckFailed("upper bound violated")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
