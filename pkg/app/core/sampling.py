from dataclasses import dataclass
from typing import Dict, Union

import numpy as np

from app.core.config import DEFAULT_SAMPLES, DEFAULT_SEED
from app.core.field import Field, QQ_FIELD

StreamKey = Union[int, str]


def _key_to_int(key: StreamKey) -> int:
    if isinstance(key, (int, np.integer)):
        return int(key) & 0xFFFFFFFF
    # stable across interpreter runs, unlike hash()
    value = 0
    for ch in str(key):
        value = (value * 131 + ord(ch)) & 0xFFFFFFFF
    return value


@dataclass(frozen=True)
class SamplingContext:
    """Seed, sample count and field shared by every randomized routine of one run.

    Independent tasks draw from ``rng(*keys)``, a stream derived from the
    master seed by the task's keys, so results do not depend on call order.
    """

    field: Field = QQ_FIELD
    seed: int = DEFAULT_SEED
    samples: int = DEFAULT_SAMPLES

    def rng(self, *keys: StreamKey) -> np.random.Generator:
        entropy = [self.seed & 0xFFFFFFFFFFFFFFFF] + [_key_to_int(k) for k in keys]
        return np.random.default_rng(np.random.SeedSequence(entropy))

    def with_samples(self, samples: int) -> "SamplingContext":
        return SamplingContext(self.field, self.seed, samples)

    def provenance(self) -> Dict[str, object]:
        return {"seed": self.seed, "samples": self.samples, "field": self.field.tag}
