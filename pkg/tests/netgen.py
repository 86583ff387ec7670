"""Seeded random network generation for fuzz and oracle tests."""

from __future__ import annotations

import random

from endorsenet import Network, WinnerMetric


def _strength(rng: random.Random) -> float:
    s = 0.0
    while s == 0.0:
        s = rng.uniform(-1.0, 1.0)
    return s


def _certainty(rng: random.Random) -> float:
    return 0.0 if rng.random() < 0.05 else rng.uniform(0.0, 1.0)


def random_network(
    rng: random.Random,
    max_nodes: int = 15,
    max_edges: int = 40,
    acyclic: bool = False,
    meta_rate: float = 0.2,
    cluster_rate: float = 0.2,
) -> Network:
    n = rng.randint(1, max_nodes)
    ids = [f"N{i}" for i in range(n)]
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b and (not acyclic or a < b)]
    rng.shuffle(pairs)
    pairs = pairs[: rng.randint(0, min(max_edges, len(pairs), 3 * n))]
    has_in = {b for _, b in pairs}

    net = Network()
    for i, node_id in enumerate(ids):
        intuition = None
        if i not in has_in or rng.random() < 0.3:
            intuition = (rng.uniform(-1.0, 1.0), _certainty(rng))
        net.add_node(node_id, intuition, threshold=rng.uniform(0.0, 2.0))
    for a, b in pairs:
        net.add_edge(ids[a], ids[b], _strength(rng))
    for a, b in pairs:
        if rng.random() < meta_rate:
            pool = [k for k in range(n) if k not in (a, b) and (not acyclic or k < b)]
            for k in rng.sample(pool, min(len(pool), rng.randint(1, 2))):
                net.add_meta(ids[k], ids[a], ids[b], _strength(rng))
    for b in range(n):
        srcs = sorted(a for a, t in pairs if t == b)
        if len(srcs) >= 2 and rng.random() < cluster_rate:
            members = rng.sample(srcs, rng.randint(2, len(srcs)))
            net.add_cluster(
                ids[b],
                [ids[m] for m in members],
                inhibition=rng.uniform(0.0, 1.0),
                metric=rng.choice(list(WinnerMetric)),
            )
    return net
