"""Map the small-offset behavior of the derivative mean across regimes.

E[alpha_hat_prime_t(y)] behaves like c*y for small H, like c*y*log|y| at
H=1/3, and like c*|y|^(1/H-2)*sign(y) above; the mean is continuous at
y=0 exactly when H < 1/2.  Prints the classification and checks each
scaling against direct quadrature.
"""

import math

from siltlab import asymptotic_constant, mean_alpha_prime, regime_classify


def main() -> None:
    print(f"{'H':>6} {'regime':>14} {'scaling':>22} {'constant':>12} "
          f"{'cont. at 0':>10}")
    for hurst in (0.25, 1.0 / 3.0, 0.45, 0.5, 0.55):
        info = asymptotic_constant(1.0, hurst)
        cls = regime_classify(hurst)
        print(f"{hurst:>6.3f} {info.regime:>14} {info.scaling:>22} "
              f"{info.constant:>12.5f} {str(cls.continuous_at_zero):>10}")

    print()
    print("check the predicted scaling against quadrature at y = 1e-5:")
    y = 1e-5
    for hurst in (0.25, 1.0 / 3.0, 0.55):
        info = asymptotic_constant(1.0, hurst)
        value = mean_alpha_prime(1.0, y, hurst).value
        if info.regime == "subcritical":
            predicted = info.constant * y
        elif info.regime == "critical":
            predicted = info.constant * y * math.log(y)
        else:
            predicted = info.constant * y ** (1.0 / hurst - 2.0)
        print(f"  H={hurst:.3f}: quadrature {value:+.4e}, "
              f"predicted {predicted:+.4e} "
              f"(rel {abs(value - predicted) / abs(value):.1e})")

    print()
    print("the H=1/2 jump: mean tends to -t from the right, +t from the left,")
    plus = mean_alpha_prime(1.0, 1e-6, 0.5).value
    minus = mean_alpha_prime(1.0, -1e-6, 0.5).value
    print(f"  measured limits {plus:+.5f} / {minus:+.5f} -> jump height "
          f"{abs(plus - minus):.5f}")


if __name__ == "__main__":
    main()
