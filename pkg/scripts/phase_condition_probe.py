#!/usr/bin/env python3
"""Empirical study of the boundary-phase condition sign conventions.

For a set of seed eigenvalues and norming constants, measure the left
boundary matrix of the reconstructed field at x = -40 and compare
arg det(Q+ Qm^dag) against all sign variants of the discrete phase sums.
Rank-1 seeds correspond to simple zeros of det a, rank-2 seeds to double
zeros; the match column shows which variant the measurement selects.
"""

import math
import sys

import numpy as np

from hirota_ist import (
    Background,
    DiscreteEigenpair,
    RankFlag,
    TraceInput,
    expand_quartets,
    reconstruct_Q,
    theta_condition_variants,
)
from hirota_ist.matrices import dagger

EYE = np.eye(2, dtype=complex)

CASES = [
    ("rank1, delta=pi/2", 2j, np.ones((2, 2), dtype=complex)),
    ("rank1, generic", 1 + 2j, np.ones((2, 2), dtype=complex)),
    ("rank1, generic 2", 0.5 + 1.5j, np.array([[1, 2], [2, 4]], dtype=complex)),
    ("rank2, generic", 1 + 2j, np.array([[1, 1], [1, 2]], dtype=complex)),
    ("rank2, generic 2", 0.8 + 1.8j, np.array([[1, 1j], [1j, 1]], dtype=complex)),
]


def main() -> int:
    bg = Background(sigma=-1, k0=1.0, alpha=1.0, beta=0.05, Qplus=EYE, Qminus=EYE)
    print(f"{'case':18s} {'measured':>9s}  best-matching variant")
    for name, zeta, C in CASES:
        seed = DiscreteEigenpair(zeta, C)
        spec = expand_quartets([seed], bg)
        Qm = reconstruct_Q(-40.0, 0.2, spec)
        measured = float(np.angle(np.linalg.det(bg.Qplus @ dagger(Qm))) % (2 * math.pi))
        if seed.rank_flag is RankFlag.RANK1:
            inp = TraceInput(bg=bg, simple_zeros=(zeta,))
        else:
            inp = TraceInput(bg=bg, double_zeros=(zeta,))
        variants = theta_condition_variants(inp)
        diffs = {
            k: min(abs(v - measured), 2 * math.pi - abs(v - measured))
            for k, v in variants.items()
        }
        best = min(diffs, key=diffs.get)
        print(f"{name:18s} {measured:9.6f}  {best} (|diff| = {diffs[best]:.2e})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
