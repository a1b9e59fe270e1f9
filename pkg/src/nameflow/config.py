"""Run configuration shared by the pipeline and the CLI."""
from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields

from .patterns import TraversalConfig

ENV_VAR = 'NAMEFLOW_CONFIG'


@dataclass
class RunConfig:
    max_virtuals: int = 5
    max_pattern_length: int = 5
    interproc: bool = True
    name_features: bool = True
    type_features: bool = True
    top_k: int = 10
    evidence_n: int = 3
    sim_threshold: float = 0.90
    confidence_dist_sign: str = 'neg'       # 'neg' -> exp(-dist), 'literal' -> exp(+dist)
    smoothing: float = 1.0
    max_patterns_per_variable: int = 10000
    rename_fields: bool = False

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.type in ('int', 'float') and not v > 0:
                raise ValueError(f'{f.name} must be positive, got {v!r}')
        if self.confidence_dist_sign not in ('neg', 'literal'):
            raise ValueError("confidence_dist_sign must be 'neg' or 'literal'")

    def traversal(self) -> TraversalConfig:
        return TraversalConfig(self.max_pattern_length, self.max_virtuals, self.interproc,
                               self.max_patterns_per_variable)

    def to_json(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ValueError(f'unknown config keys: {", ".join(unknown)}')
        return cls(**d)

    @classmethod
    def from_env(cls, environ=None, **overrides):
        """Defaults, then the file named by $NAMEFLOW_CONFIG, then ``overrides``."""
        environ = os.environ if environ is None else environ
        base = {}
        path = environ.get(ENV_VAR)
        if path:
            with open(path, encoding='utf-8') as fp:
                base = json.load(fp)
        base.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(base)
