import random

from hypothesis import HealthCheck, settings, strategies as st

from lfoc import corpus
from lfoc.terms import NEG, POS

settings.register_profile(
    "default", deadline=None, max_examples=150, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def seeded(build):
    """A strategy drawing a seed and building a value from a seeded RNG."""
    return st.integers(0, 2**32 - 1).map(lambda s: build(random.Random(s)))


commands = seeded(lambda rng: corpus.random_command(rng, rng.randint(1, 4)))
negative_terms = seeded(lambda rng: corpus.random_term(rng, NEG, rng.randint(1, 4)))
positive_values = seeded(lambda rng: corpus.random_term(rng, POS, rng.randint(1, 3), value=True))
open_commands = seeded(
    lambda rng: corpus.random_command(
        rng, rng.randint(1, 4), [v for v in (corpus.pos("x"), corpus.neg("a"), corpus.pos("y"))]
    )
)
