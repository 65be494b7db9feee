#!/usr/bin/env python3
"""Nearest-neighbour correlators of the spin-1/2 XXZ chain in the thermodynamic limit.

The chain is H = sum_i (sx_i sx_{i+1} + sy_i sy_{i+1} + delta sz_i sz_{i+1}) in
Pauli matrices. Rotating every second spin about z maps it onto the
antiferromagnet h = sum (Sx Sx + Sy Sy + D Sz Sz) with D = -delta, whose ground
state energy per site e(D) follows from the Bethe ansatz. Hellmann-Feynman then
gives the correlators:

    <sz sz> = 4 e'(D)        <sx sx> = <sy sy> = -2 (e(D) - D e'(D))

and <sz> = 0. Rows with delta >= 1 (ferromagnetic side) are not produced.

Writes a table readable by qcorr::load_correlator_table.
"""

import argparse
import sys

import numpy as np
from scipy.integrate import quad


def energy_af(D):
    """Ground-state energy per site of the spin-1/2 antiferromagnet h(D), D > -1."""
    if -1.0 < D < 1.0:
        mu = np.arccos(D)

        def integrand(x):
            if x == 0.0:
                return (np.pi - mu) / np.pi
            # Written with decaying exponentials only, so large x cannot overflow.
            num = 2.0 * np.exp(-2.0 * mu * x) * (-np.expm1(-2.0 * (np.pi - mu) * x))
            den = (-np.expm1(-2.0 * np.pi * x)) * (1.0 + np.exp(-2.0 * mu * x))
            return num / den

        value = quad(integrand, 0.0, np.inf, epsabs=1e-14, epsrel=1e-13, limit=1000)[0]
        return D / 4.0 - np.sin(mu) / 2.0 * 2.0 * value
    if D > 1.0:
        phi = np.arccosh(D)
        n = np.arange(1, 400000)
        q = np.exp(-2.0 * n * phi)
        return D / 4.0 - np.sinh(phi) * (0.5 + 2.0 * np.sum(q / (1.0 + q)))
    raise ValueError("D = +-1 and D <= -1 are not covered")


def correlators(delta, h=1e-5):
    D = -delta
    e = energy_af(D)
    de = (energy_af(D + h) - energy_af(D - h)) / (2.0 * h)
    szz = 4.0 * de
    sxx = -2.0 * (e - D * de)
    return 0.0, sxx, sxx, szz


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--from", dest="lo", type=float, default=-3.0)
    parser.add_argument("--to", dest="hi", type=float, default=0.99)
    parser.add_argument("--step", type=float, default=0.01)
    parser.add_argument("-o", "--output", default="-")
    args = parser.parse_args(argv)

    count = int(round((args.hi - args.lo) / args.step)) + 1
    deltas = [round(args.lo + i * args.step, 10) for i in range(count)]
    out = sys.stdout if args.output == "-" else open(args.output, "w", newline="\n")
    out.write("# XXZ chain, nearest neighbours, Bethe ansatz + Hellmann-Feynman\n")
    out.write("# generated by tools/scripts/gen_xxz_table.py\n")
    out.write("kind,delta,r,mz,sxx,syy,szz\n")
    for delta in deltas:
        if abs(abs(delta) - 1.0) < 1e-12 or delta >= 1.0:
            continue
        mz, sxx, syy, szz = correlators(delta)
        out.write(f"xxz,{delta!r},1,{mz!r},{sxx:.17g},{syy:.17g},{szz:.17g}\n")
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
