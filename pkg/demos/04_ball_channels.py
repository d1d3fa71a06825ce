"""Ball-model channels: an ellipsoid is worth one (noisy) classical bit.

Simulates a three-effect measurement on the Euclidean ball in R^3 (norm
index 2) with a 2-state classical mixture, then a norm-index-4 ball with a
4-state one.
"""

import numpy as np

from chansim.channels import BallEffect, BallState
from chansim.simulate import simulate_ball

rng = np.random.default_rng(1)

# partition of unity on the Euclidean unit ball in R^3
vs = np.array([[0.3, 0.1, 0.0], [-0.2, 0.2, 0.1]])
vs = np.vstack([vs, -vs.sum(axis=0)])
norms = np.linalg.norm(vs, axis=1)
cs = norms + (1 - norms.sum()) / 3
effects = [BallEffect(c=float(c), v=v, norm_index=2) for c, v in zip(cs, vs)]
states = [
    BallState(x=np.array([0.8, 0.0, 0.6]) * 0.9, norm_index=2),
    BallState(x=np.array([-0.5, 0.5, 0.0]), norm_index=2),
]

for delta in (0.0, 0.25):
    result = simulate_ball(effects, states, delta=delta)
    print(
        f"Euclidean ball, delta={delta}: {len(result.mixture.terms)} protocols on "
        f"{result.mixture.num_states} states, residual {result.residual:.2e}"
    )
print("An ellipsoid channel reduces to a (delta-noisy) classical bit.")

# a flatter ball: unit ball of the 4/3-norm, simulated on 4 states
vs4 = rng.normal(size=(3, 2)) * 0.2
vs4 -= vs4.mean(axis=0)
n4 = np.sum(np.abs(vs4) ** 4, axis=1) ** 0.25
cs4 = n4 + (1 - n4.sum()) * np.ones(3) / 3
effects4 = [BallEffect(c=float(c), v=v, norm_index=4) for c, v in zip(cs4, vs4)]
states4 = [BallState(x=x, norm_index=4) for x in (np.array([0.7, -0.3]), np.array([0.0, 0.9]))]
result4 = simulate_ball(effects4, states4, delta=0.5)
print(
    f"\n4/3-norm ball, delta=0.5: {len(result4.mixture.terms)} protocols on "
    f"{result4.mixture.num_states} states, residual {result4.residual:.2e}"
)
