"""Probe the derivative estimator across y=0 for 1/2 < H < 2/3.

In this window the raw estimator's mean jumps at the origin, but after
subtracting the deterministic mean (renormalization) the ensemble
average is flat through zero.  A small seeded ensemble makes both
effects visible.
"""

import numpy as np

from siltlab import Mollifier
from siltlab.regularity import continuity_probe_at_zero


def main() -> None:
    hurst = 0.55
    y_grid = np.linspace(-0.5, 0.5, 9)
    res = continuity_probe_at_zero(range(24), hurst, y_grid, Mollifier(0.01),
                                   n_steps=1024)
    print(f"H={hurst}, {res['n_seeds']} seeds, mollifier width "
          f"{res['epsilon']}")
    print()
    print(f"{'y':>7} {'mean':>10} {'oracle':>10} {'renormalized':>13} "
          f"{'std':>8}")
    for i, y in enumerate(res["y"]):
        print(f"{y:>7.3f} {res['mean'][i]:>10.4f} "
              f"{res['oracle_mean'][i]:>10.4f} "
              f"{res['renormalized_mean'][i]:>13.4f} "
              f"{np.sqrt(res['variance'][i]):>8.4f}")

    i0 = len(y_grid) // 2
    raw_jump = res["mean"][i0 + 1] - res["mean"][i0 - 1]
    ren_jump = res["renormalized_mean"][i0 + 1] - res["renormalized_mean"][i0 - 1]
    print()
    print(f"raw mean jump across 0: {raw_jump:+.4f}; after subtracting the "
          f"oracle mean: {ren_jump:+.4f}")
    print("the oracle carries the entire discontinuity; the centered field")
    print("is the object whose spatial continuity survives at these H.")


if __name__ == "__main__":
    main()
