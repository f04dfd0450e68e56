"""Command-line front end.

Subcommands: analyze, dual, riesz, onb, cross, induce, perturb, gen.
Every command prints a deterministic JSON payload to stdout (reports carry
the command echo, input digests, seed and tolerances; gen emits a system
file).  Exit codes: 0 = positive verdict / sound certificate, 1 = negative
verdict, 2 = input error.
"""

from __future__ import annotations

import argparse
import sys as _sys

import numpy as np

from . import bases, induced, perturb
from .errors import GFusionError
from .generate import generate, generate_like, perturbed_copy
from .io import dumps_canonical, file_digest, load_system, save_system, system_to_dict, to_jsonable
from .linalg import hpd_inverse
from .sampling import random_unit_vectors
from .system import (
    canonical_dual,
    frame_bounds,
    frame_operator,
    is_gf_complete,
    reconstruct,
    spectral_extremes,
)

_THEOREMS = ("t52", "cR", "synth", "analysis", "lemma")


def _input_stamp(label: str, path: str) -> dict:
    return {label: {"path": path, "sha256": file_digest(path)}}


def _envelope(args, command: str, inputs: dict, tolerances: dict, seed=None) -> dict:
    return {
        "command": command,
        "argv": list(args._argv),
        "inputs": inputs,
        "seed": seed,
        "tolerances": tolerances,
    }


def _cmd_analyze(args):
    sys_ = load_system(args.system)
    tol_pd = args.tol if args.tol is not None else 1e-12
    fb = frame_bounds(sys_, tol_pd=tol_pd)
    ext = spectral_extremes(sys_)
    report = _envelope(args, "analyze", _input_stamp("system", args.system), {"tol_pd": tol_pd})
    report.update(
        {
            "dim": sys_.dim,
            "field": sys_.field,
            "blocks": sys_.block_count,
            "verdict": "frame" if fb is not None else "not_a_frame",
            "bounds": to_jsonable(fb),
            "spectral_extremes": {"min_eig": ext.min_eig, "max_eig": ext.max_eig},
            "parseval": bool(fb is not None and abs(fb.lower - 1) <= 1e-9 and abs(fb.upper - 1) <= 1e-9),
            "gf_complete": is_gf_complete(sys_),
        }
    )
    return (0 if fb is not None else 1), report


def _cmd_dual(args):
    sys_ = load_system(args.system)
    tol = args.tol if args.tol is not None else 1e-9
    report = _envelope(args, "dual", _input_stamp("system", args.system), {"residual_tol": tol}, args.seed)
    if frame_bounds(sys_) is None:
        report.update({"verdict": "not_a_frame"})
        return 1, report
    dual = canonical_dual(sys_)
    rng = np.random.default_rng(args.seed)
    f_batch = random_unit_vectors(rng, sys_.dim, 100, sys_.field)
    worst_primal = worst_swapped = 0.0
    for i in range(f_batch.shape[1]):
        res = reconstruct(sys_, dual, f_batch[:, i])
        worst_primal = max(worst_primal, res.primal_residual)
        worst_swapped = max(worst_swapped, res.swapped_residual)
    ok = worst_primal <= tol and worst_swapped <= tol
    report.update(
        {
            "verdict": "dual_ok" if ok else "dual_residual_too_large",
            "max_primal_residual": worst_primal,
            "max_swapped_residual": worst_swapped,
            "vectors": 100,
            "dual_system": system_to_dict(dual),
        }
    )
    if args.emit_dual:
        save_system(dual, args.emit_dual)
    return (0 if ok else 1), report


def _cmd_riesz(args):
    sys_ = load_system(args.system)
    tol = args.tol if args.tol is not None else 1e-9
    rb = bases.riesz_bounds(sys_, tol)
    report = _envelope(args, "riesz", _input_stamp("system", args.system), {"tol": tol})
    report.update({"verdict": "riesz" if rb is not None else "not_riesz", "riesz_bounds": to_jsonable(rb)})
    return (0 if rb is not None else 1), report


def _cmd_onb(args):
    sys_ = load_system(args.system)
    tol = args.tol if args.tol is not None else 1e-9
    verdict = bases.is_gf_orthonormal(sys_, tol)
    report = _envelope(args, "onb", _input_stamp("system", args.system), {"tol": tol})
    report.update({"verdict": to_jsonable(verdict)})
    return (0 if verdict.is_gf_orthonormal else 1), report


def _cmd_cross(args):
    theta = load_system(args.theta)
    lam = load_system(args.system)
    tol = args.tol if args.tol is not None else 1e-9
    rep = bases.cross_operator(theta, lam, tol)
    rep = bases.classify_cross_operator(rep, lam, tol)
    inputs = {**_input_stamp("theta", args.theta), **_input_stamp("lambda", args.system)}
    report = _envelope(args, "cross", inputs, {"tol": tol})
    report.update({"report": to_jsonable(rep)})
    ok = rep.intertwine_residual <= tol and rep.surjective
    return (0 if ok else 1), report


def _cmd_induce(args):
    sys_ = load_system(args.system)
    tol = args.tol if args.tol is not None else 1e-9
    fam = induced.induce_vectors(sys_)
    rep = induced.verify_correspondence(sys_, fam, tol)
    report = _envelope(args, "induce", _input_stamp("system", args.system), {"tol": tol})
    report.update(
        {
            "family": {
                "count": fam.count,
                "labels": [[j, k] for j, k, _ in fam.entries],
                "vectors": to_jsonable(fam.matrix()),
            },
            "report": to_jsonable(rep),
        }
    )
    ok = rep.coincidence_residual <= tol and rep.bounds_agree
    return (0 if ok else 1), report


def _cmd_perturb(args):
    lam_sys = load_system(args.system)
    theta_sys = load_system(args.perturbed)
    tol = args.tol if args.tol is not None else 1e-9
    params = perturb.PerturbParams(args.lam, args.mu, args.gamma)
    if args.theorem == "t52":
        rep = perturb.certify_frame_operator_perturbation(
            lam_sys, theta_sys, params, samples=args.samples, seed=args.seed, bracket_tol=tol
        )
        ok = rep.hypothesis_holds and bool(rep.bracket_ok)
    elif args.theorem == "cR":
        rep = perturb.certify_R_condition(
            lam_sys, theta_sys, samples=args.samples, seed=args.seed, bracket_tol=tol
        )
        ok = rep.hypothesis_holds and bool(rep.bracket_ok)
    elif args.theorem == "synth":
        rep = perturb.certify_synthesis_perturbation(
            lam_sys, theta_sys, params, samples=args.samples, seed=args.seed, bracket_tol=tol
        )
        ok = rep.hypothesis_holds and bool(rep.bracket_ok)
    elif args.theorem == "analysis":
        rep = perturb.certify_analysis_perturbation(lam_sys, theta_sys, bracket_tol=tol)
        ok = rep.hypothesis_holds and bool(rep.bracket_ok)
    else:  # lemma: U = S_theta S_lambda^-1, lam1 = lam + gamma/sqrt(A), lam2 = mu
        fb = frame_bounds(lam_sys)
        if fb is None:
            raise GFusionError("lemma mode needs the reference system to be a frame")
        u = frame_operator(theta_sys) @ hpd_inverse(frame_operator(lam_sys))
        lam1 = args.lam + args.gamma / np.sqrt(fb.lower)
        rep = perturb.check_invertibility_lemma(u, lam1, args.mu, samples=args.samples, seed=args.seed)
        ok = rep.hypothesis_holds and rep.sandwich_ok
    inputs = {**_input_stamp("system", args.system), **_input_stamp("perturbed", args.perturbed)}
    report = _envelope(args, "perturb", inputs, {"bracket_tol": tol}, args.seed)
    report.update(
        {
            "theorem": args.theorem,
            "params": {"lam": args.lam, "mu": args.mu, "gamma": args.gamma},
            "samples": args.samples,
            "report": to_jsonable(rep),
        }
    )
    return (0 if ok else 1), report


def _cmd_gen(args):
    if args.noise is not None:
        if args.base is None:
            raise GFusionError("--noise needs --base")
        base = load_system(args.base)
        sys_ = perturbed_copy(base, args.seed, radius=args.noise)
    elif args.base is not None:
        base = load_system(args.base)
        sys_ = generate_like(base, args.kind, args.seed)
    else:
        if args.dim is None or args.blocks is None:
            raise GFusionError("gen needs --dim and --blocks (or --base)")
        sys_ = generate(args.kind, args.dim, args.blocks, args.seed, field=args.field)
    return 0, system_to_dict(sys_)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfusion", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_seed=False):
        p.add_argument("--tol", type=float, default=None, help="override the command's verdict tolerance")
        p.add_argument("-o", "--output", default=None, help="also write the JSON payload to this file")
        if with_seed:
            p.add_argument("--seed", type=int, required=True, help="seed for the randomized parts")

    p = sub.add_parser("analyze", help="frame verdict, optimal bounds, completeness")
    p.add_argument("system")
    add_common(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("dual", help="canonical dual and reconstruction residuals")
    p.add_argument("system")
    p.add_argument("--emit-dual", default=None, help="write the dual as a system file")
    add_common(p, with_seed=True)
    p.set_defaults(func=_cmd_dual)

    p = sub.add_parser("riesz", help="gf-Riesz verdict and bounds")
    p.add_argument("system")
    add_common(p)
    p.set_defaults(func=_cmd_riesz)

    p = sub.add_parser("onb", help="gf-orthonormal basis verdict")
    p.add_argument("system")
    add_common(p)
    p.set_defaults(func=_cmd_onb)

    p = sub.add_parser("cross", help="cross operator between a gf-orthonormal system and a frame")
    p.add_argument("theta", help="gf-orthonormal system file")
    p.add_argument("system", help="g-fusion frame file")
    add_common(p)
    p.set_defaults(func=_cmd_cross)

    p = sub.add_parser("induce", help="induced vector family and correspondence report")
    p.add_argument("system")
    add_common(p)
    p.set_defaults(func=_cmd_induce)

    p = sub.add_parser("perturb", help="perturbation certificates")
    p.add_argument("system", help="reference system file")
    p.add_argument("perturbed", help="perturbed system file")
    p.add_argument("--theorem", choices=_THEOREMS, required=True)
    p.add_argument("--lam", type=float, default=0.0)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--samples", type=int, default=2000)
    add_common(p, with_seed=True)
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("gen", help="generate a random system file")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--kind", choices=("frame", "parseval", "onb", "riesz"), default="frame")
    p.add_argument("--field", choices=("real", "complex"), default="real")
    p.add_argument("--base", default=None, help="existing system file providing the structure")
    p.add_argument("--noise", type=float, default=None, help="perturb --base by this exact analysis radius")
    add_common(p, with_seed=True)
    p.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    argv = list(_sys.argv[1:]) if argv is None else list(argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    args._argv = argv
    try:
        code, payload = args.func(args)
    except (GFusionError, ValueError, RuntimeError) as exc:
        _sys.stderr.write(dumps_canonical({"error": type(exc).__name__, "message": str(exc)}))
        return 2
    text = dumps_canonical(payload)
    _sys.stdout.write(text)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
