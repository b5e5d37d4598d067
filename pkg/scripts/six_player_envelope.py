"""Compare the brute-force optimal six-player payoff with the two reference strategies.

Prints, per alpha, the optimizer's best symmetric payoff, the two reference
payoffs (2 + 3a^2)/16 and 7(2 - a^2)/64, the excess of the optimum over
their envelope, and which Werner plane (XY or ZY) gives the larger MABK
value.

    python scripts/six_player_envelope.py --steps 21
"""

import argparse

import numpy as np

from mbell.bell import evaluate, mabk_polynomial, werner_scheme
from mbell.cli import fmt
from mbell.game import minority_payoff_spec, six_payoff_high, six_payoff_low
from mbell.optimize import alpha_grid, optimize_symmetric_strategy
from mbell.quantum import make_six_in


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=21)
    args = parser.parse_args()

    spec = minority_payoff_spec(6)
    poly = mabk_polynomial(6)
    schemes = {p: werner_scheme(6, p) for p in ("xy", "zy")}
    print("alpha,optimum,theta,beta,ref_high,ref_low,excess,werner_plane")
    for alpha in alpha_grid(args.steps):
        state = make_six_in(alpha)
        res = optimize_symmetric_strategy(state, spec)
        refs = six_payoff_high(alpha), six_payoff_low(alpha)
        chi = {p: abs(evaluate(poly, state, s)) for p, s in schemes.items()}
        theta, beta = res.best_parameters
        print(
            ",".join(
                [fmt(alpha), fmt(res.best_value), fmt(theta), fmt(beta), fmt(refs[0]), fmt(refs[1]),
                 fmt(res.best_value - max(refs)), max(chi, key=chi.get)]
            )
        )
    print(f"# reference fulcrum sqrt(6/19) = {fmt(np.sqrt(6 / 19))}")


if __name__ == "__main__":
    main()
