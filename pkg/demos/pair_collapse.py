"""
Preparing the photon pair and watching one measurement collapse it
==================================================================

Walks the quantum model through a single emission by hand: build the
anticorrelated pair, pass channel A through the half-wave plate, then
measure channel B and see channel A answer with certainty.
"""

import math

from biphoton import (
    Channel,
    apply_element,
    hwp_jones,
    joint_probabilities,
    make_anticorrelated_pair,
    measure_channel,
)

# The source emits (|x>_a |y>_b + |y>_a |x>_b) / sqrt(2): whatever axis one
# photon shows, the partner shows the other.
pair = make_anticorrelated_pair()
print("source state amplitudes [XX, XY, YX, YY]:")
print(" ", pair.amps.real)

table = joint_probabilities(pair, 0.0, 0.0)
print("joint probabilities at alpha = beta = 0:", table.p)

# A half-wave plate at pi/4 on channel A turns a's polarization plane by
# pi/2, flipping anticorrelation into correlation.
plate = hwp_jones(math.pi / 4)
correlated = apply_element(pair, Channel.A, plate)
print("\nafter the plate on channel A:")
print(" ", correlated.amps.real)
print("joint probabilities at alpha = beta = 0:", joint_probabilities(correlated, 0.0, 0.0).p)

# Now measure channel B. The draw u decides the branch; the collapse is
# global, so channel A's answer is fixed the moment B registers.
for u in (0.1, 0.9):
    first = measure_channel(correlated, Channel.B, 0.0, u=u)
    print(f"\nmeasure B with u = {u}: outcome {first.outcome.value}, branch probability {first.probability:.3f}")
    print("  collapsed amplitudes:", first.collapsed.amps.real)
    second = measure_channel(first.collapsed, Channel.A, 0.0, u=0.5)
    print(f"  then A answers {second.outcome.value} with probability {second.probability:.3f}")
