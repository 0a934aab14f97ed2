"""Run configuration: caps, tolerances, seed and output format.

Config files hold one ``key = value`` per line; ``#`` starts a comment.
Later sources override earlier ones: defaults, then ``--config``, then
command-line flags.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace

from .criteria import ClassifyConfig, VerdictRule
from .errors import InvalidArgumentError
from .optimal import SearchConfig

FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    # index caps
    n_cap: int = 14
    m_cap: int = 4096
    grid: int = 200
    # Lorentz criteria
    l_cap: int = 10_000
    assump_n: int = 256
    did_n_cap: int = 100_000
    # block search
    L_max: int = 6
    K_max: int = 2
    enum_cap: int = 64
    restarts: int = 8
    max_evals: int = 500
    refine_top: int = 4
    partition_n_max: int = 12
    # sampled checks
    tensor_samples: int = 20
    pairing_samples: int = 1000
    # tolerances
    bisection_tol: float = 1e-12
    optimizer_tol: float = 1e-7
    verdict_tol: float = 0.05
    decay_ratio: float = 0.5
    seed: int = 0
    format: str = "json"

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.type == "int" and f.name != "seed" and v < 1:
                raise InvalidArgumentError(f"{f.name} must be >= 1")
            if f.type == "float" and not 0.0 < v < 1.0:
                raise InvalidArgumentError(f"{f.name} must be in (0, 1)")
        if not 0 <= self.seed < 2**64:
            raise InvalidArgumentError("seed must be a 64-bit unsigned integer")
        if self.format not in FORMATS:
            raise InvalidArgumentError(f"format must be one of {FORMATS}")
        if self.n_cap < 4:
            raise InvalidArgumentError("n_cap must be >= 4")
        if self.grid < 100:
            raise InvalidArgumentError("grid must be >= 100")

    def search(self) -> SearchConfig:
        return SearchConfig(L_max=self.L_max, restarts=self.restarts,
                            max_evals=self.max_evals, rel_tol=self.optimizer_tol,
                            enum_cap=self.enum_cap, refine_top=self.refine_top,
                            K_max=self.K_max, partition_n_max=self.partition_n_max,
                            seed=self.seed)

    def rule(self) -> VerdictRule:
        return VerdictRule(agree_tol=self.verdict_tol, decay_ratio=self.decay_ratio)

    def classify(self) -> ClassifyConfig:
        return ClassifyConfig(
            n_cap=self.n_cap, m_cap=self.m_cap, grid=self.grid,
            did_ns=tuple(n for n in (10**2, 10**3, 10**4) if n < self.did_n_cap)
            + (self.did_n_cap,),
            assump_n=self.assump_n,
            assump_ls=tuple(l for l in (10, 10**2, 10**3) if l < self.l_cap)
            + (self.l_cap,),
            rule=self.rule())

    def as_dict(self) -> dict:
        return asdict(self)

    def updated(self, values: dict) -> RunConfig:
        return replace(self, **coerce(values))


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def coerce(values: dict) -> dict:
    """Convert text values to the field types, rejecting unknown keys."""
    out = {}
    for key, raw in values.items():
        if key not in _TYPES:
            raise InvalidArgumentError(f"unknown config key {key!r}")
        kind = _TYPES[key]
        try:
            if kind == "int":
                x = float(raw)
                if not x.is_integer():
                    raise ValueError(raw)
                v = int(raw) if isinstance(raw, int) or str(raw).strip().isdigit() else int(x)
            elif kind == "float":
                v = float(raw)
            else:
                v = str(raw)
        except ValueError as exc:
            raise InvalidArgumentError(f"bad value for {key}: {raw!r}") from exc
        out[key] = v
    return out


def parse_config_text(text: str) -> dict:
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"config line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key] = value
    return values


def parse_pairs(text: str) -> dict:
    """``"a=1,b=2"`` as used by ``--caps``."""
    values = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in item:
            raise InvalidArgumentError(f"expected key=value, got {item!r}")
        key, value = (s.strip() for s in item.split("=", 1))
        values[key] = value
    return values


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    if path:
        with open(path, encoding="utf-8") as fh:
            cfg = cfg.updated(parse_config_text(fh.read()))
    if overrides:
        cfg = cfg.updated(overrides)
    return cfg
