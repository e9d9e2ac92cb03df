"""quiverbf command line: bfn, decompose, verify, info.

Exit codes: 0 success, 1 input error, 2 method inapplicable,
3 verification mismatch, 4 internal invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import candecomp, oracle, reflection, slicing
from .bpoly import FactorProduct
from .problem import ProblemError, ProblemFile, load
from .quiver import (
    GenericityError,
    classify,
    convert_weight,
    coxeter_matrix,
    euler_matrix,
    positive_roots,
)
from .schofield import build_schofield, random_exceptional, schofield_degree

EXIT_OK, EXIT_INPUT, EXIT_INAPPLICABLE, EXIT_MISMATCH, EXIT_INVARIANT = 0, 1, 2, 3, 4


class Inapplicable(Exception):
    pass


def _parse_m(text: str | None) -> tuple | None:
    if text is None:
        return None
    try:
        vals = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ProblemError(f"--m expects integers, got {text!r}") from None
    if not vals or any(v <= 0 for v in vals):
        raise ProblemError("--m needs positive integers")
    return vals


def _exponents(pf: ProblemFile, args) -> tuple:
    m = _parse_m(args.m) or pf.exponents()
    if len(m) != pf.nweights:
        raise ProblemError(f"--m has {len(m)} entries but the problem has {pf.nweights} weights")
    return m


def _exceptionals(pf: ProblemFile, seed: int) -> list:
    out = []
    for alpha in pf.alphas():
        try:
            out.append(random_exceptional(pf.quiver, alpha, seed=seed))
        except ValueError as exc:
            raise Inapplicable(f"no Schofield determinant for alpha={alpha}: {exc}") from None
    return out


def _verify(pf: ProblemFile, product: FactorProduct | None, m, seed: int) -> dict:
    Vs = _exceptionals(pf, seed)
    cfg = oracle.OracleConfig(seed=seed)
    try:
        oracle.check_budget([schofield_degree(pf.quiver, pf.beta, V, seed) for V in Vs], m, cfg)
        fs = [build_schofield(pf.quiver, pf.beta, V)[1] for V in Vs]
        if product is None:
            res = oracle.bfunction_oracle(fs, m, cfg)
            fac = oracle.factor_linear(res.b)
            return {"status": "computed", "mode": res.mode, "b": str(res.b),
                    "factored": fac.text() if fac else None, "degree_bound": res.degree_bound,
                    "text": f"oracle ({res.mode}): b = {fac.text() if fac else res.b}"}
        rep = oracle.verify(product, fs, m, cfg)
    except oracle.OracleBudgetError as exc:
        return {"status": "skipped", "text": f"oracle: skipped ({exc})"}
    return {"status": "match" if rep.match else "mismatch", "mode": rep.oracle.mode,
            "scalar": str(rep.scalar) if rep.scalar is not None else None,
            "detail": rep.detail, "text": rep.text()}


def _run_method(pf: ProblemFile, method: str, m, cap: int):
    """Returns (method used, product, trace, extras, diagnostics)."""
    diagnostics = []
    alphas = pf.alphas()
    if method in ("slice", "auto"):
        res = slicing.run_slice(pf.quiver, pf.beta, alphas, m)
        if res:
            lss = slicing.locally_semisimple(res, pf.quiver)
            if isinstance(lss, slicing.Unsupported):
                extras = {"lss": None, "lss_note": lss.reason}
            else:
                extras = {"lss": [{"vector": list(v), "multiplicity": k} for v, k in lss], "lss_note": None}
            return "slice", res.product, res.trace, extras, diagnostics
        diagnostics.append(f"slice: not sliceable: {res.diagnostic}")
        if method == "slice":
            raise Inapplicable("\n".join(diagnostics + [f"  {line}" for line in res.per_arrow]))
    res = reflection.run_reflect(pf.quiver, pf.beta, alphas, m, "auto", cap)
    if res:
        extras = {"lss": None, "lss_note": "not reconstructed by the reflection method"}
        return f"reflect ({res.direction})", res.product, res.trace, extras, diagnostics
    diagnostics.append(f"reflect: {res.reason}: {res.detail}")
    raise Inapplicable("\n".join(diagnostics))


def cmd_bfn(args) -> int:
    pf = load(args.file)
    m = _exponents(pf, args)
    try:
        used, product, trace, extras, diags = _run_method(pf, args.method, m, args.max_reflections)
    except Inapplicable as exc:
        _emit(args, {"status": "inapplicable", "diagnostics": str(exc).splitlines()}, str(exc))
        return EXIT_INAPPLICABLE
    check = _verify(pf, product, m, args.seed) if args.verify else None
    expanded = product.text(brackets=False, sep="")
    payload = {
        "status": "ok", "method": used, "nvars": product.nvars, "m": list(m),
        "b": product.to_json(), "text": product.text(), "expanded": expanded,
        "degree": product.degree(), "diagnostics": diags, "verify": check,
        "trace": trace.to_json(), **extras,
    }
    lines = list(diags)
    lines.append(f"method: {used}")
    lines.append(f"b = {product.text()}")
    summary = expanded + (f", {check['text']}" if check else "")
    lines.append(summary)
    if args.trace:
        lines.append(trace.text(snapshots=True))
    if extras.get("lss"):
        parts = [f"({','.join(map(str, d['vector']))})" + (f"^{d['multiplicity']}" if d["multiplicity"] > 1 else "")
                 for d in extras["lss"]]
        lines.append("locally semisimple: " + " + ".join(parts))
    _emit(args, payload, "\n".join(lines))
    if check and check["status"] == "mismatch":
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify(args) -> int:
    pf = load(args.file)
    m = _exponents(pf, args)
    try:
        check = _verify(pf, None, m, args.seed)
    except Inapplicable as exc:
        _emit(args, {"status": "inapplicable", "diagnostics": [str(exc)]}, str(exc))
        return EXIT_INAPPLICABLE
    _emit(args, check, check["text"])
    return EXIT_INAPPLICABLE if check["status"] == "skipped" else EXIT_OK


def cmd_decompose(args) -> int:
    pf = load(args.file)
    Q = pf.quiver
    try:
        if args.dn_diagram:
            res = candecomp.dn_canonical(Q, pf.beta, seed=args.seed)
            dec, extra = res.decomposition, res.diagram.render()
        else:
            dec, extra = candecomp.generic_decomposition(Q, pf.beta, seed=args.seed), ""
    except ValueError as exc:
        _emit(args, {"status": "inapplicable", "diagnostics": [str(exc)]}, str(exc))
        return EXIT_INAPPLICABLE
    payload = {"status": "ok", **dec.to_json(), "text": dec.text()}
    if extra:
        payload["diagram"] = extra
    _emit(args, payload, dec.text() + ("\n" + extra if extra else ""))
    return EXIT_OK


def cmd_info(args) -> int:
    pf = load(args.file)
    Q = pf.quiver
    cls = classify(Q)
    info = {"classification": [str(c) for c in cls] if isinstance(cls, list) else str(cls),
            "euler_matrix": euler_matrix(Q), "coxeter_matrix": coxeter_matrix(Q), "weights": []}
    for kind, vec in pf.weights:
        w = convert_weight(Q, **{kind: vec})
        info["weights"].append({"alpha": list(w.alpha), "sigma": list(w.sigma), "alphastar": list(w.alphastar),
                                "preprojective": bool(reflection.is_preprojective(Q, w.alpha)),
                                "preinjective": bool(reflection.is_preinjective(Q, w.alpha))})
    if not isinstance(cls, list) and cls.kind == "Dynkin":
        info["positive_roots"] = [list(r) for r in positive_roots(Q)]
    lines = [f"classification: {info['classification']}"]
    lines.append("Euler matrix:")
    lines += ["  " + " ".join(f"{x:>3}" for x in row) for row in info["euler_matrix"]]
    lines.append("Coxeter matrix:")
    lines += ["  " + " ".join(f"{x:>3}" for x in row) for row in info["coxeter_matrix"]]
    for i, w in enumerate(info["weights"], 1):
        lines.append(f"weight {i}: alpha={w['alpha']} sigma={w['sigma']} alpha*={w['alphastar']} "
                     f"preprojective={w['preprojective']} preinjective={w['preinjective']}")
    if "positive_roots" in info:
        lines.append(f"positive roots: {len(info['positive_roots'])}")
    _emit(args, info, "\n".join(lines))
    return EXIT_OK


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quiverbf", description="b-functions of quiver semi-invariants")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("file", help="problem file")
        sp.add_argument("--seed", type=int, default=42)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    b = sub.add_parser("bfn", help="compute the b-function")
    common(b)
    b.add_argument("--method", choices=("slice", "reflect", "auto"), default="auto")
    b.add_argument("--verify", action="store_true", help="also run the brute-force oracle")
    b.add_argument("--m", help="exponent tuple, e.g. '1,1'")
    b.add_argument("--max-reflections", type=int, default=reflection.DEFAULT_CAP)
    b.add_argument("--trace", action="store_true", help="print every reduction step")
    b.set_defaults(func=cmd_bfn)

    d = sub.add_parser("decompose", help="canonical decomposition of beta")
    common(d)
    d.add_argument("--dn-diagram", action="store_true", help="use the D_n diagram rule and print the diagram")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="b-function from the oracle alone")
    common(v)
    v.add_argument("--m", help="exponent tuple, e.g. '1,1'")
    v.set_defaults(func=cmd_verify)

    i = sub.add_parser("info", help="classification, Euler and Coxeter matrices, weights")
    common(i)
    i.set_defaults(func=cmd_info)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ProblemError, slicing.InvalidWeightError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (slicing.InvariantViolation, GenericityError, candecomp.DecompositionError,
            oracle.InexactDivisionError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
