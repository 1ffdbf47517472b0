"""Cross-checks shared by the oracle tests and the acceptance suite."""

from __future__ import annotations

from dpnlive.encoder import (
    build_base_system,
    build_block_clauses,
    counts_assignment,
    disjunct_constraint,
    iter_branches,
)
from dpnlive.model import Blocking, Dimensioning, Network, mirror_name, mirror_transform
from dpnlive.oracle import Configuration
from dpnlive.oracle import explore, trace_counts


def max_rate(net: Network) -> int:
    rates = [q for t in net.tasks for tr in t.transitions for q in (*tr.consume.values(), *tr.produce.values())]
    return max(rates, default=1)


def mirror_capacities(net: Network, dims: Dimensioning) -> Dimensioning:
    """Capacities that never bind on the mirrored network."""
    slack = max_rate(net)
    caps = {}
    for c in net.channels:
        caps[c.id] = dims[c.id] + slack
        caps[mirror_name(c.id)] = dims[c.id] + slack
    return Dimensioning(caps)


def lift(config: Configuration, dims: Dimensioning) -> Configuration:
    contents = dict(config.contents)
    for cid, n in config.contents:
        contents[mirror_name(cid)] = dims[cid] - n
    return Configuration.of(dict(config.task_state), contents)


def mirror_equivalent(net: Network, dims: Dimensioning, override: Blocking = Blocking.FROM_MODEL,
                      max_configs: int = 200_000) -> tuple[bool, str]:
    plain = explore(net, dims, max_configs=max_configs, override=override, keep_reachable=True)
    mirror = mirror_transform(net, dims)
    mirrored = explore(mirror, mirror_capacities(net, dims), max_configs=max_configs, override=override,
                       keep_reachable=True)
    if plain.truncated or mirrored.truncated:
        return False, "truncated"
    lifted = {lift(c, dims) for c in plain.reachable}
    if len(lifted) != len(plain.reachable):
        return False, "lifting is not injective"
    if lifted != set(mirrored.reachable):
        return False, f"reachable sets differ: {len(lifted)} vs {len(mirrored.reachable)}"
    for cfg in mirrored.reachable:
        for cid in net.channel_ids:
            if cfg.content(cid) + cfg.content(mirror_name(cid)) != dims[cid]:
                return False, f"token conservation broken on {cid}"
    blocked = {lift(b.configuration, dims) for b in plain.blocked}
    if blocked != {b.configuration for b in mirrored.blocked}:
        return False, "blocked sets differ"
    return True, ""


def satisfied_branch(base, clauses, x) -> tuple | None:
    """First enumerated branch containing ``x``, walking only rows that ``x`` satisfies."""
    for chosen, _ in iter_branches(base, clauses, True, lambda st, row: st if row.satisfied_by(x) else None):
        system = base.system.extended(disjunct_constraint(base, d) for d in chosen)
        assert system.satisfied_by(x)
        return chosen
    return None


def bridge_violations(net: Network, dims: Dimensioning, override: Blocking = Blocking.FROM_MODEL,
                      max_configs: int = 200_000, exploration=None) -> list[str]:
    """Reachable counts must be pseudo-states; blocked ones must satisfy some branch."""
    base = build_base_system(net, dims)
    clauses = build_block_clauses(net, override)
    ex = exploration or explore(net, dims, max_configs=max_configs, override=override, keep_reachable=True)
    bad = []
    blocked = {b.configuration for b in ex.blocked}
    for config, trace in ex.reachable.items():
        x = counts_assignment(trace_counts(trace, net, dims))
        if not base.system.satisfied_by(x):
            bad.append(f"{net.name} d={dims.capacities}: counts of {trace} violate the base system")
        if config in blocked and satisfied_branch(base, clauses, x) is None:
            bad.append(f"{net.name} d={dims.capacities}: blocked {config} satisfies no branch")
    return bad
