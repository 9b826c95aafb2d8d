"""Config driven orchestration behind the command line interface.

Each mode function takes a parsed RunConfig, performs its work, prints
a compact human readable summary and returns the artifact paths it
wrote.  Artifacts are deterministic for a given config and seed: CSV
bytes depend only on the trajectory, plots carry no timestamps, and no
function here consults the wall clock or the network.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import bounds as bounds_mod
from .config import RunConfig, build_network, build_objective
from .gossip import gossip_run
from .simulator import (
    monte_carlo,
    run,
    write_aggregate_csv,
    write_trace_csv,
)
from .splitting import rate_spectra, reference_solution
from .svgplot import line_chart


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    if not out.is_absolute():
        out = cfg.base_dir / out
    out.mkdir(parents=True, exist_ok=True)
    return out


def cli_validate(cfg: RunConfig) -> dict:
    """Build and validate the configured network; report its shape."""
    net = build_network(cfg)
    info = {
        "n": net.n,
        "edges": len(net.graph.edges),
        "diag_min": net.diag_min,
        "diag_max": net.diag_max,
    }
    print(f"network ok: n={net.n}, edges={len(net.graph.edges)}, "
          f"diagonal in [{net.diag_min:.6g}, {net.diag_max:.6g}]")
    return info


def cli_bounds(cfg: RunConfig) -> list[Path]:
    """Compute every certificate constant; print a table, emit a file."""
    obj = build_objective(cfg)
    eps = cfg.newton.epsilon
    ref = reference_solution(obj)
    from .objective import eval_F
    gap0 = eval_F(obj, np.zeros(obj.n)) - ref.F_star
    pc = bounds_mod.constants_from_objective(obj, eps, gap0)
    strict = cfg.newton.policy == "theorem2"
    rc = bounds_mod.compute_constants(pc, strict=strict)
    rows = [
        ("n", pc.n), ("alpha", pc.alpha), ("epsilon", pc.epsilon),
        ("hess_min", pc.hess_min), ("hess_max", pc.hess_max),
        ("hess_lip", pc.hess_lip), ("diag_min", pc.diag_min),
        ("diag_max", pc.diag_max), ("gap0", pc.gap0),
        ("rho", rc.rho), ("lambda", rc.lam_min), ("Lambda", rc.lam_max),
        ("eps_max", rc.eps_max), ("beta", rc.beta),
        ("gamma1", rc.gamma1), ("gamma2", rc.gamma2),
        ("c1", rc.c1), ("c2", rc.c2),
        ("t_quad_onset", rc.t_quad_onset),
    ]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v!r}")
    print(f"note: {rc.t_quad_note}")
    out = _out_dir(cfg)
    path = out / "bounds.txt"
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for k, v in rows:
            fh.write(f"{k} = {v!r}\n")
        fh.write(f"t_quad_note = {rc.t_quad_note!r}\n")
    print(f"wrote {path}")
    return [path]


def cli_run(cfg: RunConfig) -> list[Path]:
    """Simulate the Newton solver per config; write trace, plot, stats."""
    net = build_network(cfg)
    obj = build_objective(cfg, net)
    nw = cfg.newton
    out = _out_dir(cfg)
    artifacts = []
    tr = run(obj, nw.epsilon, nw.iterations, nw.seed, policy=nw.policy,
             stride=nw.stride, clock=nw.clock)
    trace_path = out / "newton_trace.csv"
    write_trace_csv(tr, trace_path)
    artifacts.append(trace_path)
    print(f"newton: n={obj.n} epsilon={nw.epsilon} iterations={nw.iterations} "
          f"seed={nw.seed}")
    print(f"  F* = {tr.F_star!r}, final rel_err = {tr.final.rel_err:.3e}, "
          f"messages = {tr.final.messages}")
    series = [("async newton", [r.t for r in tr.rows],
               [abs(r.rel_err) for r in tr.rows])]
    if nw.trials > 1:
        mc = monte_carlo(obj, nw.epsilon, nw.iterations, nw.trials, nw.seed,
                         policy=nw.policy, stride=nw.stride, clock=nw.clock)
        agg_path = out / "newton_aggregate.csv"
        write_aggregate_csv(mc, agg_path)
        artifacts.append(agg_path)
        print(f"  {nw.trials} trials: mean final rel_err = "
              f"{float(np.mean(mc.final_rel_err)):.3e}")
        series.append(("trial mean", mc.t, np.abs(mc.mean_rel_err)))
    plot_path = out / "run.svg"
    line_chart(series, plot_path, title="asynchronous Newton",
               xlabel="iteration", ylabel="|F - F*| / F*")
    artifacts.append(plot_path)
    print(f"wrote {', '.join(str(p) for p in artifacts)}")
    return artifacts


def cli_compare(cfg: RunConfig) -> list[Path]:
    """Run Newton and gossip on the same instance; overlay their errors.

    Each method is measured against its own optimum: the penalized
    objective minimum for Newton, the consensus minimum of the local
    sum for gossip.
    """
    net = build_network(cfg)
    obj = build_objective(cfg, net)
    nw, gs = cfg.newton, cfg.gossip
    out = _out_dir(cfg)
    tr_n = run(obj, nw.epsilon, nw.iterations, nw.seed, policy=nw.policy,
               stride=nw.stride, clock=nw.clock)
    tr_g = gossip_run(obj.locals, net.graph, gs.gamma, gs.iterations, nw.seed,
                      stride=nw.stride, clock=nw.clock)
    p_n = out / "newton_trace.csv"
    p_g = out / "gossip_trace.csv"
    write_trace_csv(tr_n, p_n)
    write_trace_csv(tr_g, p_g)
    print(f"newton : F* = {tr_n.F_star!r}, final rel_err = "
          f"{tr_n.final.rel_err:.3e} after {nw.iterations} iterations")
    print(f"gossip : F* = {tr_g.F_star!r}, final rel_err = "
          f"{tr_g.final.rel_err:.3e} after {gs.iterations} iterations")
    plot_path = out / "compare.svg"
    line_chart(
        [
            ("async newton", [r.t for r in tr_n.rows],
             [abs(r.rel_err) for r in tr_n.rows]),
            ("gossip", [r.t for r in tr_g.rows],
             [abs(r.rel_err) for r in tr_g.rows]),
        ],
        plot_path, title="relative error against each method's own optimum",
        xlabel="iteration", ylabel="|F - F*| / F*",
    )
    print(f"wrote {p_n}, {p_g}, {plot_path}")
    return [p_n, p_g, plot_path]
