"""Compare the D_n longest-root b-function from both engines against two closed forms.

``displayed`` puts [s]_{b_{n-1},c} [s]_{b_n,c} [s]_c after the arm factors.
``corrected`` ends with the five-factor D4 block instead.  Pass --oracle to also
run the exact oracle at small beta (slow: roughly 20 s per point).
"""
from __future__ import annotations

import argparse
import itertools
import time

from quiverbf.bpoly import bracket, equal_up_to_scalar
from quiverbf.oracle import OracleConfig, bfunction_oracle
from quiverbf.quiver import Quiver, euler_form, generic_hom_ext
from quiverbf.reflection import run_reflect
from quiverbf.schofield import build_schofield, random_exceptional
from quiverbf.slicing import run_slice


def dn_inward(n):
    edges = [(i, i + 1) for i in range(1, n - 2)] + [(n - 1, n - 2), (n, n - 2)]
    return Quiver.from_edges(range(1, n + 1), edges)


def longest(n):
    return (1,) + (2,) * (n - 3) + (1, 1)


def displayed(b):
    n, B = len(b), (0,) + tuple(b)
    out = bracket(1, 1, B[1], B[2])
    for i in range(3, n - 1):
        out = out * bracket(2, 1, B[1], B[i]) * bracket(1, 1, B[2] - B[1], B[i] - B[1])
    c = B[n - 2] - B[1]
    return out * bracket(1, 1, B[n - 1], c) * bracket(1, 1, B[n], c) * bracket(1, 1, c, c)


def corrected(b):
    n, B = len(b), (0,) + tuple(b)
    out = bracket(1, 1, B[1], B[2])
    for i in range(3, n - 1):
        out = out * bracket(2, 1, B[1], B[i])
    for i in range(3, n - 2):
        out = out * bracket(1, 1, B[2] - B[1], B[i] - B[1])
    A, Bv, C, c = B[2] - B[1], B[n - 1], B[n], B[n - 2] - B[1]
    return (out * bracket(1, 1, A, c) * bracket(1, 1, c - A, Bv) * bracket(1, 1, c - C, A)
            * bracket(1, 1, c - Bv, C) * bracket(1, 1, c - A, c - A))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-entry", type=int, default=5)
    ap.add_argument("--n", type=int, nargs="+", default=[5, 6, 7])
    ap.add_argument("--oracle", action="store_true")
    args = ap.parse_args()

    for n in args.n:
        Q, alpha = dn_inward(n), longest(n)
        t = time.time()
        total = corr = disp = 0
        for beta in itertools.product(range(args.max_entry + 1), repeat=n):
            if not any(beta) or euler_form(Q, alpha, beta) or generic_hom_ext(Q, alpha, beta)[0]:
                continue
            s, r = run_slice(Q, beta, [alpha]), run_reflect(Q, beta, [alpha])
            assert s and r and equal_up_to_scalar(s.product.expand(), r.product.expand()).match, beta
            total += 1
            corr += s.product == corrected(beta)
            disp += s.product == displayed(beta)
        print(f"D{n}: {total} beta, corrected form exact {corr}, displayed form exact {disp}, "
              f"{time.time() - t:.1f}s", flush=True)

    if args.oracle:
        Q, alpha = dn_inward(5), longest(5)
        for beta in [(1, 1, 2, 1, 1), (1, 2, 3, 2, 1)]:
            f = build_schofield(Q, beta, random_exceptional(Q, alpha))[1]
            t = time.time()
            b = bfunction_oracle([f], config=OracleConfig(mode="pointwise", budget=100)).b
            print(f"oracle {beta}: degree {b.total_degree()} ({time.time() - t:.1f}s)", flush=True)
            for name, form in [("corrected", corrected(beta)), ("displayed", displayed(beta))]:
                print(f"  {name} (degree {form.degree()}):",
                      "match" if equal_up_to_scalar(form.expand(b.gens), b).match else "MISMATCH")


if __name__ == "__main__":
    main()
