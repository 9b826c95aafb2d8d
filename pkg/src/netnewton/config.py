"""Run configuration: TOML schema, strict parsing, object builders.

Configs are TOML with a versioned schema_version field.  Parsing is
fail closed: any unknown key anywhere in the file is an error, so a
typo like "epsilonn" cannot silently fall back to a default.  Paths
inside a config resolve relative to the config file's directory.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from importlib.resources import files
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:              # Python 3.10
    import tomli as tomllib

from .errors import ConfigParse
from .objective import BUILDERS, PenalizedObjective
from .topology import (
    ConsensusNetwork,
    complete_graph,
    cycle_graph,
    path_graph,
    laplacian_weights,
    metropolis_weights,
    read_edge_list,
    read_weight_csv,
    validate,
)

SCHEMA_VERSION = 1

NETWORK_KINDS = ("complete", "path", "cycle", "edge_file")
WEIGHT_KINDS = ("laplacian", "metropolis", "csv")


def bundled_config_path(name: str = "complete5.toml") -> Path:
    """Path of a config shipped inside the package."""
    return Path(str(files("netnewton") / "configs" / name))


@dataclass(frozen=True)
class NetworkSpec:
    kind: str
    n: int | None
    edge_file: str | None
    weights: str
    kappa: float | None
    weight_csv: str | None


@dataclass(frozen=True, eq=False)
class AgentSpec:
    kind: str
    params: dict


@dataclass(frozen=True, eq=False)
class ObjectiveSpec:
    alpha: float
    agents: tuple[AgentSpec, ...]


@dataclass(frozen=True)
class NewtonSpec:
    epsilon: float
    policy: str
    iterations: int
    trials: int
    seed: int
    stride: int
    clock: bool


@dataclass(frozen=True)
class GossipSpec:
    gamma: float
    iterations: int


@dataclass(frozen=True, eq=False)
class RunConfig:
    schema_version: int
    out: str
    network: NetworkSpec
    objective: ObjectiveSpec
    newton: NewtonSpec
    gossip: GossipSpec
    base_dir: Path
    mode: str | None = None   # filled by the CLI from the subcommand


_REQUIRED = object()


def _take(table: dict, key: str, types, where: str, default=_REQUIRED):
    if key not in table:
        if default is _REQUIRED:
            raise ConfigParse(f"missing required key {where}.{key}")
        return default
    v = table.pop(key)
    # bool passes isinstance checks against int, so reject it explicitly
    # wherever a number is wanted.
    if types in (int, float) and isinstance(v, bool):
        raise ConfigParse(f"{where}.{key}: expected {types.__name__}, got bool")
    if types is float and isinstance(v, int):
        v = float(v)
    if not isinstance(v, types):
        tn = types.__name__ if isinstance(types, type) else str(types)
        raise ConfigParse(f"{where}.{key}: expected {tn}, got {type(v).__name__}")
    return v


def _done(table: dict, where: str) -> None:
    if table:
        keys = ", ".join(sorted(table))
        raise ConfigParse(f"unknown key(s) under {where}: {keys}")


def load_config(path) -> RunConfig:
    """Parse and schema check a TOML config file.

    Raises ConfigParse on syntax errors, missing keys, type errors,
    unknown keys and schema version mismatches.
    """
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigParse(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigParse(f"{path}: {exc}") from None

    version = _take(raw, "schema_version", int, "top level")
    if version != SCHEMA_VERSION:
        raise ConfigParse(
            f"schema_version {version} unsupported; this build reads "
            f"version {SCHEMA_VERSION}"
        )
    out = _take(raw, "out", str, "top level", default="out")

    nt = _take(raw, "network", dict, "top level")
    kind = _take(nt, "kind", str, "network")
    if kind not in NETWORK_KINDS:
        raise ConfigParse(f"network.kind must be one of {NETWORK_KINDS}, got {kind!r}")
    n = _take(nt, "n", int, "network", default=None)
    edge_file = _take(nt, "edge_file", str, "network", default=None)
    if kind == "edge_file" and edge_file is None:
        raise ConfigParse("network.kind = 'edge_file' needs network.edge_file")
    if kind != "edge_file" and n is None:
        raise ConfigParse(f"network.kind = {kind!r} needs network.n")
    weights = _take(nt, "weights", str, "network")
    if weights not in WEIGHT_KINDS:
        raise ConfigParse(
            f"network.weights must be one of {WEIGHT_KINDS}, got {weights!r}"
        )
    kappa = _take(nt, "kappa", float, "network", default=None)
    if weights == "laplacian" and kappa is None:
        raise ConfigParse("network.weights = 'laplacian' needs network.kappa")
    weight_csv = _take(nt, "weight_csv", str, "network", default=None)
    if weights == "csv" and weight_csv is None:
        raise ConfigParse("network.weights = 'csv' needs network.weight_csv")
    _done(nt, "network")
    network = NetworkSpec(kind=kind, n=n, edge_file=edge_file, weights=weights,
                          kappa=kappa, weight_csv=weight_csv)

    ot = _take(raw, "objective", dict, "top level")
    alpha = _take(ot, "alpha", float, "objective")
    rows = _take(ot, "agents", list, "objective")
    agents = []
    for k, row in enumerate(rows):
        if not isinstance(row, dict):
            raise ConfigParse(f"objective.agents[{k}] must be a table")
        akind = _take(row, "kind", str, f"objective.agents[{k}]")
        if akind not in BUILDERS:
            raise ConfigParse(
                f"objective.agents[{k}].kind = {akind!r}; known kinds: "
                f"{sorted(BUILDERS)}"
            )
        # Remaining keys are builder parameters; the builder's signature
        # is the schema, checked at build time.
        agents.append(AgentSpec(kind=akind, params=dict(row)))
    _done(ot, "objective")
    objective_spec = ObjectiveSpec(alpha=alpha, agents=tuple(agents))

    wt = _take(raw, "newton", dict, "top level")
    newton = NewtonSpec(
        epsilon=_take(wt, "epsilon", float, "newton"),
        policy=_take(wt, "policy", str, "newton", default="theorem2"),
        iterations=_take(wt, "iterations", int, "newton"),
        trials=_take(wt, "trials", int, "newton", default=1),
        seed=_take(wt, "seed", int, "newton"),
        stride=_take(wt, "stride", int, "newton", default=1),
        clock=_take(wt, "clock", bool, "newton", default=False),
    )
    _done(wt, "newton")

    gt = _take(raw, "gossip", dict, "top level", default=None)
    if gt is None:
        gossip = GossipSpec(gamma=0.05, iterations=newton.iterations)
    else:
        gossip = GossipSpec(
            gamma=_take(gt, "gamma", float, "gossip", default=0.05),
            iterations=_take(gt, "iterations", int, "gossip"),
        )
        _done(gt, "gossip")
    _done(raw, "top level")

    return RunConfig(schema_version=version, out=out, network=network,
                     objective=objective_spec, newton=newton, gossip=gossip,
                     base_dir=path.parent)


def build_network(cfg: RunConfig) -> ConsensusNetwork:
    """Materialize the network spec into a validated ConsensusNetwork."""
    spec = cfg.network
    if spec.kind == "edge_file":
        graph = read_edge_list(cfg.base_dir / spec.edge_file)
    elif spec.kind == "complete":
        graph = complete_graph(spec.n)
    elif spec.kind == "path":
        graph = path_graph(spec.n)
    else:
        graph = cycle_graph(spec.n)
    if spec.weights == "laplacian":
        return laplacian_weights(graph, spec.kappa)
    if spec.weights == "metropolis":
        return metropolis_weights(graph)
    W = read_weight_csv(cfg.base_dir / spec.weight_csv)
    return validate(W, graph)


def build_objective(cfg: RunConfig,
                    net: ConsensusNetwork | None = None) -> PenalizedObjective:
    """Materialize the objective spec against the (built) network."""
    if net is None:
        net = build_network(cfg)
    locs = []
    for k, spec in enumerate(cfg.objective.agents):
        builder = BUILDERS[spec.kind]
        try:
            locs.append(builder(**spec.params))
        except TypeError as exc:
            raise ConfigParse(f"objective.agents[{k}] ({spec.kind}): {exc}") from None
    return PenalizedObjective(net=net, locals=tuple(locs),
                              alpha=cfg.objective.alpha)


def apply_overrides(cfg: RunConfig, mode: str | None = None,
                    seed: int | None = None, trials: int | None = None,
                    iterations: int | None = None, stride: int | None = None,
                    out: str | None = None) -> RunConfig:
    """Return a copy of cfg with CLI overrides applied.

    seed, trials, iterations and stride act on the newton section
    (iterations of the gossip section stay as configured).
    """
    newton = dataclasses.replace(
        cfg.newton,
        **{k: v for k, v in dict(seed=seed, trials=trials, iterations=iterations,
                                 stride=stride).items() if v is not None},
    )
    return dataclasses.replace(cfg, newton=newton, mode=mode or cfg.mode,
                               out=out if out is not None else cfg.out)
