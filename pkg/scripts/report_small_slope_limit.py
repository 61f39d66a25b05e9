#!/usr/bin/env python3
"""Numerical diagnostic: behaviour of the inefficiency probability as the
frontier slope s shrinks toward zero.

This is reported rather than asserted anywhere in the test suite: for fixed
lambda != 0 the limit is not obviously 0.5, so the table below documents what
the quadrature actually produces at small s.
"""

from mvequiv.inference import prob_inefficient_lambda

N, K = 60, 5
LAMBDAS = (-0.3, -0.1, 0.0, 0.1, 0.3)
SLOPES = (0.25, 1e-2, 1e-4, 1e-6)


def main():
    header = "lambda  " + "".join(f"s={s:<12g}" for s in SLOPES)
    print(header)
    for lam in LAMBDAS:
        cells = "".join(
            f"{prob_inefficient_lambda(lam, s, N, K):<14.8f}" for s in SLOPES
        )
        print(f"{lam:>6.2f}  {cells}")


if __name__ == "__main__":
    main()
