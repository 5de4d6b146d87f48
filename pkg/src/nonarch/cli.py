"""Command-line driver: verb-routed, JSON in and out, reproducible sweeps.

Single results print one JSON object on stdout; sweep commands stream one
JSON object per line, ordered by input index regardless of worker timing.
Domain errors exit 1 with {"code", "message"}; usage errors exit 2.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from .arith import FieldSpec, ZpApprox
from .characters import (
    AnalyticCharacter,
    ContinuousCharacter,
    diagonal_embed,
    eval_analytic,
    eval_continuous,
    is_locally_analytic,
    recover_exponent,
    series_at_one,
)
from .errors import ToolkitError
from .pbw import good_preimage, in_lambda, norm_certificate_bound
from .projcoh import (
    delta_bound,
    local_cohomology_dim,
    strictness_modulus,
    uniform_strictness,
    weight_change,
    weight_cohomology,
    weights_with_sum,
)
from .series import INF, LaurentSeries, PowerSeriesAtOne, hasse_derivative, one_unit_pow
from .units import OneUnitExponents, decompose, expand, peel


def _dump(obj):
    print(json.dumps(obj, sort_keys=True))


def _ints(text):
    return [int(x) for x in text.split(",") if x != ""]


def _load_json_arg(text):
    """Inline JSON or @path to a JSON file."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    return json.loads(text)


def _field(args):
    modulus = tuple(_ints(args.modulus)) if getattr(args, "modulus", None) else None
    return FieldSpec(args.p, getattr(args, "r", 1) or 1, modulus)


def _series_arg(spec, raw):
    return LaurentSeries.from_json(spec, _load_json_arg(raw))


def _zp_arg(args):
    digits = _ints(args.c)
    return ZpApprox(args.p, tuple(digits))


def _logp_json(value):
    if value == INF:
        return "inf"
    if value == -INF:
        return "-inf"
    return int(value)


def _ordered_map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            yield from ex.map(fn, items)
    else:
        for item in items:
            yield fn(item)


# ---------------------------------------------------------------------------
# char verb


def _cmd_char_eval(args):
    spec = _field(args)
    chi = ContinuousCharacter.from_json(spec, _load_json_arg(args.char))
    u = _series_arg(spec, args.unit)
    out = eval_continuous(chi, u)
    _dump({"value": out.to_json()})


def _cmd_char_recover(args):
    spec = _field(args)
    coeffs = _ints(args.coeffs)
    series = PowerSeriesAtOne(spec, coeffs)
    c = recover_exponent(series, args.digits)
    _dump({"c": c.to_json()})


def _cmd_char_test_analytic(args):
    spec = _field(args)
    chi = ContinuousCharacter.from_json(spec, _load_json_arg(args.char))
    verdict = is_locally_analytic(chi, args.terms)
    out = {"analytic": verdict.analytic}
    if verdict.analytic:
        out["c"] = verdict.c.to_json()
    else:
        out["witness"] = list(verdict.witness)
    _dump(out)


def _cmd_char_diag(args):
    spec = _field(args)
    c = _zp_arg(args)
    chi = diagonal_embed(c, args.horizon, args.prec, spec)
    _dump(chi.to_json())


# ---------------------------------------------------------------------------
# units verb


def _cmd_units_decompose(args):
    spec = _field(args)
    x = _series_arg(spec, args.series)
    _dump(decompose(x).to_json())


def _cmd_units_expand(args):
    spec = _field(args)
    e = OneUnitExponents.from_json(spec, _load_json_arg(args.exps))
    _dump({"unit": expand(e, args.prec).to_json()})


def _cmd_units_peel(args):
    spec = _field(args)
    u = _series_arg(spec, args.series)
    N = args.prec if args.prec else (int(u.prec) if u.prec != INF else None)
    if N is None:
        N = (u.val + u._a.shape[0]) if not u.is_zero_like() else 1
    _dump(peel(u.truncate(N) if u.prec == INF else u, N).to_json())


# ---------------------------------------------------------------------------
# series verb


def _cmd_series_mul(args):
    spec = _field(args)
    f = _series_arg(spec, args.f)
    g = _series_arg(spec, args.g)
    _dump({"product": (f * g).to_json()})


def _cmd_series_inv(args):
    spec = _field(args)
    f = _series_arg(spec, args.f)
    _dump({"inverse": f.inverse(args.prec).to_json()})


def _cmd_series_pow(args):
    spec = _field(args)
    f = _series_arg(spec, args.f)
    c = _zp_arg(args)
    _dump({"power": one_unit_pow(f, c, args.prec).to_json()})


def _cmd_series_hasse(args):
    spec = _field(args)
    f = _series_arg(spec, args.f)
    _dump({"derivative": hasse_derivative(f, args.k).to_json()})


# ---------------------------------------------------------------------------
# coh verb


def _cmd_coh_dim(args):
    lam = tuple(_ints(args.lam))
    dim = weight_cohomology(args.d, args.r_schubert, args.k, lam, args.q)
    _dump({"weight": list(lam), "q": args.q, "dim": dim})


def _cmd_coh_local(args):
    lam = tuple(_ints(args.lam))
    dim = local_cohomology_dim(args.d, args.r_schubert, args.k, lam, args.i)
    _dump({"dim": dim})


def _cmd_coh_weight_change(args):
    mu = tuple(_ints(args.mu))
    res = weight_change(args.d, args.k, mu, args.eps_exp)
    _dump(
        {
            "nu": list(res.nu),
            "steps": res.steps,
            "trace": [list(t) for t in res.trace],
            "norm_drop_logp": res.norm_drop_logp(),
        }
    )


def _cmd_coh_strictness(args):
    if args.lam:
        lam = tuple(_ints(args.lam))
        R = strictness_modulus(
            args.d, args.r_schubert, args.k, args.q, args.eps_exp, lam, args.p
        )
        _dump({"weight": list(lam), "R_logp": _logp_json(R.logp)})
        return
    if not args.sweep:
        raise ToolkitError("either --lambda or --sweep is required")
    N = delta_bound(args.d, args.k)
    items = list(weights_with_sum(args.d, args.k, N))
    if args.sample:
        rng = random.Random(args.seed)
        items = [
            tuple(
                rng.randrange(-args.sample_radius, args.sample_radius + 1)
                for _ in range(args.d)
            )
            for _ in range(args.sample)
        ]
        items = [w + (args.k - sum(w),) for w in items]

    def compute(lam):
        R = strictness_modulus(
            args.d, args.r_schubert, args.k, args.q, args.eps_exp, lam, args.p
        )
        return {"weight": list(lam), "R_logp": _logp_json(R.logp)}

    for row in _ordered_map(compute, items, args.workers):
        _dump(row)
    cert = uniform_strictness(args.d, args.r_schubert, args.k, args.q, args.eps_exp, args.p)
    _dump(
        {
            "uniform_R_logp": _logp_json(cert.R_logp),
            "witness_weight": list(cert.witness_weight) if cert.witness_weight else None,
            "weights_checked": cert.weights_checked,
        }
    )


# ---------------------------------------------------------------------------
# pbw verb


def _cmd_pbw_preimage(args):
    mu = tuple(_ints(args.mu))
    I = tuple(_ints(args.I))
    Y = good_preimage(mu, I, args.d)
    out = {"Y": Y.to_json()}
    if args.p:
        norm = Y.norm(args.eps_exp, args.p)
        out["norm_logp"] = _logp_json(norm.logp)
        out["bound_logp"] = norm_certificate_bound(mu, args.eps_exp, args.p)
    _dump(out)


def _cmd_pbw_check_bounds(args):
    from fractions import Fraction
    from itertools import combinations

    d = args.d
    box = args.sweep_box
    eps_list = _ints(args.eps_exp) if args.eps_exp else [1]

    def all_mus():
        for I_size in range(1, d + 2):
            for I in combinations(range(d + 1), I_size):
                for mu in weights_with_sum(d, 0, box):
                    if sum(abs(x) for x in mu) <= box and in_lambda(mu, I, d):
                        yield (mu, I)

    def compute(pair):
        mu, I = pair
        Y = good_preimage(mu, I, d)
        img = Y.apply()
        exact = img == {tuple(mu): Fraction(1)}
        row = {"mu": list(mu), "I": list(I), "exact": exact, "checks": []}
        for e in eps_list:
            norm = Y.norm(e, args.p).logp
            bound = norm_certificate_bound(mu, e, args.p)
            row["checks"].append(
                {
                    "eps_exp": e,
                    "norm_logp": _logp_json(norm),
                    "bound_logp": bound,
                    "ok": bool(norm <= bound),
                }
            )
        return row

    for row in _ordered_map(compute, list(all_mus()), args.workers):
        _dump(row)


# ---------------------------------------------------------------------------
# parser


def build_parser():
    top = argparse.ArgumentParser(
        prog="nonarch",
        description="Exact local-field arithmetic, unit-group characters, "
        "weight-graded cohomology, and PBW preimage certificates.",
    )
    verbs = top.add_subparsers(dest="verb", required=True)

    def add_field_flags(sp, need_r=True):
        sp.add_argument("--p", type=int, required=True, help="residue characteristic")
        if need_r:
            sp.add_argument("--r", type=int, default=1, help="extension degree of F_q over F_p")
        sp.add_argument("--modulus", help="comma list, little-endian monic modulus")

    char = verbs.add_parser("char").add_subparsers(dest="sub", required=True)
    sp = char.add_parser("eval")
    add_field_flags(sp)
    sp.add_argument("--char", required=True, help="character JSON (inline or @file)")
    sp.add_argument("--unit", required=True, help="one-unit series JSON")
    sp.set_defaults(fn=_cmd_char_eval)
    sp = char.add_parser("recover")
    add_field_flags(sp)
    sp.add_argument("--coeffs", required=True, help="comma list of series coefficients")
    sp.add_argument("--digits", type=int, required=True)
    sp.set_defaults(fn=_cmd_char_recover)
    sp = char.add_parser("test-analytic")
    add_field_flags(sp)
    sp.add_argument("--char", required=True)
    sp.add_argument("--terms", type=int, required=True)
    sp.set_defaults(fn=_cmd_char_test_analytic)
    sp = char.add_parser("diag")
    add_field_flags(sp)
    sp.add_argument("--c", required=True, help="comma list of base-p digits")
    sp.add_argument("--horizon", type=int, required=True)
    sp.add_argument("--prec", type=int, required=True)
    sp.set_defaults(fn=_cmd_char_diag)

    units = verbs.add_parser("units").add_subparsers(dest="sub", required=True)
    sp = units.add_parser("decompose")
    add_field_flags(sp)
    sp.add_argument("--series", required=True)
    sp.set_defaults(fn=_cmd_units_decompose)
    sp = units.add_parser("expand")
    add_field_flags(sp)
    sp.add_argument("--exps", required=True)
    sp.add_argument("--prec", type=int, required=True)
    sp.set_defaults(fn=_cmd_units_expand)
    sp = units.add_parser("peel")
    add_field_flags(sp)
    sp.add_argument("--series", required=True)
    sp.add_argument("--prec", type=int)
    sp.set_defaults(fn=_cmd_units_peel)

    series = verbs.add_parser("series").add_subparsers(dest="sub", required=True)
    sp = series.add_parser("mul")
    add_field_flags(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--g", required=True)
    sp.set_defaults(fn=_cmd_series_mul)
    sp = series.add_parser("inv")
    add_field_flags(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--prec", type=int)
    sp.set_defaults(fn=_cmd_series_inv)
    sp = series.add_parser("pow")
    add_field_flags(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--c", required=True, help="comma list of base-p digits")
    sp.add_argument("--prec", type=int)
    sp.set_defaults(fn=_cmd_series_pow)
    sp = series.add_parser("hasse")
    add_field_flags(sp)
    sp.add_argument("--f", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(fn=_cmd_series_hasse)

    coh = verbs.add_parser("coh").add_subparsers(dest="sub", required=True)

    def add_coh_flags(sp, with_q=False, with_i=False):
        sp.add_argument("--d", type=int, required=True)
        sp.add_argument("--r", "--r-schubert", dest="r_schubert", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--lambda", dest="lam", required=True)
        if with_q:
            sp.add_argument("--q", type=int, required=True)
        if with_i:
            sp.add_argument("--i", type=int, required=True)

    sp = coh.add_parser("dim")
    add_coh_flags(sp, with_q=True)
    sp.set_defaults(fn=_cmd_coh_dim)
    sp = coh.add_parser("local")
    add_coh_flags(sp, with_i=True)
    sp.set_defaults(fn=_cmd_coh_local)
    sp = coh.add_parser("weight-change")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--mu", required=True)
    sp.add_argument("--eps-exp", dest="eps_exp", type=int, default=1)
    sp.set_defaults(fn=_cmd_coh_weight_change)
    sp = coh.add_parser("strictness")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--r", "--r-schubert", dest="r_schubert", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--eps-exp", dest="eps_exp", type=int, default=1)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--lambda", dest="lam")
    sp.add_argument("--sweep", action="store_true")
    sp.add_argument("--sample", type=int, default=0, help="random weights instead of Delta_N")
    sp.add_argument("--sample-radius", dest="sample_radius", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(fn=_cmd_coh_strictness)

    pbw = verbs.add_parser("pbw").add_subparsers(dest="sub", required=True)
    sp = pbw.add_parser("preimage")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--I", required=True, help="comma list of chart indices")
    sp.add_argument("--mu", required=True)
    sp.add_argument("--eps-exp", dest="eps_exp", type=int, default=1)
    sp.add_argument("--p", type=int, help="report the norm certificate at this prime")
    sp.set_defaults(fn=_cmd_pbw_preimage)
    sp = pbw.add_parser("check-bounds")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--sweep-box", dest="sweep_box", type=int, required=True)
    sp.add_argument("--eps-exp", dest="eps_exp", default="1,2,3")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(fn=_cmd_pbw_check_bounds)

    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.fn(args)
    except ToolkitError as err:
        _dump({"code": err.code, "message": str(err)})
        return 1
    except (ValueError, KeyError) as err:
        _dump({"code": "invalid-input", "message": str(err)})
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
