import random

import pytest

from baru import (
    Act,
    Density,
    INDIFFERENT,
    OutcomeSpace,
    Preference,
    Profile,
    Utility,
)


@pytest.fixture
def table1():
    """Two concerned agents with mirrored beliefs plus a bystander; the
    fork act f and the hedge act g."""
    space = OutcomeSpace(("a", "b", "c", "d"))
    p1 = Preference(
        Density.from_state_probs((0.9, 0.1)),
        Utility({"a": 1.0, "b": 0.0, "c": 0.9, "d": 0.0}),
    )
    p2 = Preference(
        Density.from_state_probs((0.1, 0.9)),
        Utility({"a": 0.0, "b": 1.0, "c": 0.8, "d": 0.0}),
    )
    profile = Profile(space, (p1, p2, INDIFFERENT))
    f = Act.from_segments(((0.0, 0.5, "a"), (0.5, 1.0, "b")))
    g = Act.from_segments(((0.0, 1.0, "c"),))
    return profile, f, g


@pytest.fixture
def rng():
    return random.Random(987123)
