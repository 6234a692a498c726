#!/usr/bin/env python3
"""Reconciliation study for the four-level closed form.

Two questions, answered over a seeded ensemble:

1. Does the nine-group closed form reproduce the direct commutator
   determinant?  (It does, to roundoff; worst relative error printed.)

2. Is the real-part handling of the cycle groups required?  Each cycle
   group sums a single orientation of a 3-cycle, whose conjugate partner is
   not part of the expansion.  Summing those groups as raw complex numbers
   leaves an O(1) imaginary remainder and a wrong real part; they only
   contribute through their real parts.  The table shows how large the
   discarded imaginary parts are, and what the closed-form error would be
   if they were kept.

Usage: python3 scripts/reconcile_closed_form.py [--trials N] [--seed S]
"""

import argparse

from jarlskog import (
    MassPairInput,
    SeededRng,
    derive_seed,
    det4_closed,
    det_direct,
    haar_unitary,
    random_spectrum,
    t_factors,
)
from jarlskog.determinant import _det4_pieces, _sum3_cycle, _sum4_cycle


def cycle_sums(inp):
    """Raw complex one-orientation cycle sums with their T weights."""
    tf = t_factors(inp.a)
    bw, q, x, mod2 = _det4_pieces(inp)
    m1, m2, m3 = mod2
    m23 = tuple(m2[k] + m3[k] for k in range(3))
    m12 = tuple(m1[k] + m2[k] for k in range(3))
    m13 = tuple(m1[k] + m3[k] for k in range(3))
    cyc312 = (x[(3, 1)], x[(1, 2)], x[(2, 3)])
    cyc132 = (x[(1, 3)], x[(3, 2)], x[(2, 1)])
    cyc123 = (x[(1, 2)], x[(2, 3)], x[(3, 1)])
    total = 0j
    total += -2.0 * tf.cycle[(1, 2, 4, 3)] * _sum3_cycle(bw, *cyc312)
    total += -2.0 * tf.cycle[(1, 3, 2, 4)] * _sum3_cycle(bw, *cyc132)
    total += -2.0 * tf.cycle[(1, 2, 3, 4)] * _sum3_cycle(bw, *cyc123)
    total += 2.0 * tf.cycle[(1, 2, 4, 3)] * _sum4_cycle(bw, *cyc312, m23)
    total += 2.0 * tf.cycle[(1, 3, 2, 4)] * _sum4_cycle(bw, *cyc132, m12)
    total += 2.0 * tf.cycle[(1, 2, 3, 4)] * _sum4_cycle(bw, *cyc123, m13)
    return total


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--trials", type=int, default=500)
    parser.add_argument("--seed", type=int, default=424242)
    args = parser.parse_args()

    worst_rel = 0.0
    worst_raw_rel = 0.0
    worst_im = 0.0
    print(f"{'trial':>5}  {'|direct|':>12}  {'closed rel err':>14}  "
          f"{'cycle Im part':>13}  {'raw-sum rel err':>15}")
    for t in range(args.trials):
        rng = SeededRng(derive_seed(args.seed, t))
        v = haar_unitary(4, rng)
        a = random_spectrum(4, rng)
        b = random_spectrum(4, rng)
        inp = MassPairInput(a=a, b=b, v=v)
        d = det_direct(inp)
        c = det4_closed(inp)
        raw_cycles = cycle_sums(inp)
        # what the total would be if cycle groups kept their raw complex value
        raw_total = c - complex(raw_cycles.real, 0.0) + raw_cycles
        scale = max(1.0, abs(d))
        rel = abs(c - d) / scale
        raw_rel = abs(raw_total - d) / scale
        worst_rel = max(worst_rel, rel)
        worst_raw_rel = max(worst_raw_rel, raw_rel)
        worst_im = max(worst_im, abs(raw_cycles.imag))
        if t < 10:
            print(f"{t:>5}  {abs(d):>12.4e}  {rel:>14.3e}  "
                  f"{abs(raw_cycles.imag):>13.4e}  {raw_rel:>15.3e}")

    print()
    print(f"over {args.trials} trials:")
    print(f"  closed form vs direct, worst relative error: {worst_rel:.3e}")
    print(f"  largest imaginary part of the raw cycle sums: {worst_im:.3e}")
    print(f"  worst error if cycle groups kept raw complex values: {worst_raw_rel:.3e}")
    print()
    print("conclusion: the nine-group expansion is correct with cycle groups")
    print("entering through their real parts; keeping the raw one-orientation")
    print("complex sums would be wrong by many orders of magnitude.")


if __name__ == "__main__":
    main()
