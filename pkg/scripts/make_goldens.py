#!/usr/bin/env python3
"""One-shot brute-force computation of the frozen golden integrals.

Ray values are computed by direct summation of one million length-pi
slices with a fixed 15-point rule and NO acceleration, then cross-checked
against mpmath's oscillatory quadrature.  The engine in oscint.quad never
sees this code path; committed values are the independent oracle.

Run from the repository root:  python scripts/make_goldens.py
"""

import csv
import math
import pathlib
import sys

import mpmath as mp
import numpy as np

NODES, WEIGHTS = np.polynomial.legendre.leggauss(15)
N_SLICES = 1_000_000
N_SLICES_SLOW = 8_000_000  # rho = -3/2 partial sums decay like K^(-3/2)
CHUNK = 20_000

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "oscint" / \
    "data" / "golden_values.csv"


def brute_ray(rho, sigma, orient, a):
    """Sum pi-slices of t^rho log^sigma e^{i*orient*t} from a, no acceleration."""
    total = 0.0 + 0.0j
    width = math.pi
    n_slices = N_SLICES if rho <= -1.75 else N_SLICES_SLOW
    for start in range(0, n_slices, CHUNK):
        ks = np.arange(start, min(start + CHUNK, n_slices))
        lo = a + width * ks
        mid = lo + width / 2.0
        nodes = mid[:, None] + (width / 2.0) * NODES[None, :]
        vals = nodes ** rho
        if sigma:
            vals = vals * np.log(nodes) ** sigma
        vals = vals * np.exp(1j * orient * nodes)
        total += complex(np.sum((width / 2.0) * (vals @ WEIGHTS)))
    # truncation tail of the alternating slice sum: at most the next slice
    t_end = a + width * n_slices
    tail = t_end ** rho * (math.log(t_end) ** sigma) * width
    return total, abs(tail)


def mpmath_ray(rho, sigma, orient, a):
    mp.mp.dps = 30
    f = lambda t: t ** rho * mp.log(t) ** sigma * mp.e ** (1j * orient * t)
    val = mp.quadosc(f, [a, mp.inf], period=2 * mp.pi)
    return complex(val)


def main():
    rows = []
    specs = [
        ("g1", -2.0, 0, 1, 1.0),
        ("g2", -1.5, 0, 1, 1.0),
        ("g3", -2.0, 1, 1, 1.0),
        ("g4", -1.5, 1, -1, 1.0),
    ]
    for key, rho, sigma, orient, a in specs:
        brute, tail = brute_ray(rho, sigma, orient, a)
        check = mpmath_ray(rho, sigma, orient, a)
        delta = abs(brute - check)
        print(f"{key}: brute={brute:.12g} mpmath={check:.12g} "
              f"delta={delta:.2e} tail={tail:.2e}")
        if delta > 1e-8:
            sys.exit(f"{key}: brute force and mpmath disagree by {delta}")
        rows.append((key, brute.real, brute.imag, max(delta, tail)))

    # Fresnel: lim_T integral_0^T e^{i t^2} dt = sqrt(pi/8)*(1+i)
    mp.mp.dps = 30
    fresnel = complex(mp.sqrt(mp.pi / 8)) * (1 + 1j)
    # numeric confirmation via the substitution s = t^2 and quadosc
    g = lambda s: mp.e ** (1j * s) / (2 * mp.sqrt(s))
    num = complex(mp.quad(lambda t: mp.e ** (1j * t ** 2), [0, 1])
                  + mp.quadosc(g, [1, mp.inf], period=2 * mp.pi))
    print(f"fresnel: formula={fresnel:.12g} numeric={num:.12g} "
          f"delta={abs(fresnel-num):.2e}")
    if abs(fresnel - num) > 1e-12:
        sys.exit("fresnel confirmation failed")
    rows.append(("fresnel", fresnel.real, fresnel.imag, 1e-12))

    # Si(20) reference
    si20 = complex(mp.si(20))
    rows.append(("si20", si20.real, si20.imag, 1e-15))
    print(f"si20: {si20.real:.12g}")

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with OUT.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["key", "re", "im", "bound"])
        for key, re, im, bound in rows:
            w.writerow([key, f"{re:.12f}", f"{im:.12f}", f"{bound:.3e}"])
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
