"""Motion corruption of multishot acquisitions.

Corruption happens in three phases: each shot sees a fully sampled
k-space of the object in that shot's motion state, each shot's k-space
is restricted to its own rows, and the restricted segments are summed
into one combined k-space. Reconstructing that combination under a
static-object assumption is what produces the artifact.
"""

import numpy as np

from .encoding import MotionTrajectory, SamplingPattern, forward

__all__ = ["make_trajectory", "corrupt"]


def make_trajectory(num_shots: int, degree: float) -> MotionTrajectory:
    """Reference trajectory: shot 0 still, every later shot rotated by `degree`."""
    if num_shots < 1:
        raise ValueError(f"num_shots must be >= 1, got {num_shots}")
    rotations = np.full(num_shots, float(degree))
    rotations[0] = 0.0
    return MotionTrajectory(rotations)


def corrupt(
    x, maps, pattern: SamplingPattern, traj: MotionTrajectory
) -> np.ndarray:
    """Combined corrupted k-space, C x H x W: the shot sum of forward(x)."""
    return forward(x, maps, pattern, traj).sum(axis=0)
