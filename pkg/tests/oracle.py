"""Reference evaluator written straight from the formulas, sharing no code with the package.

Used as the independent side of oracle-equivalence checks: every node value
is recomputed with explicit relative-certainty and relative-importance lists,
and whole networks are solved by damped global relaxation from a zero start.
"""

from __future__ import annotations


TIE = 1e-12


def sign(x):
    return (x > 0) - (x < 0)


def rel_cert(cs):
    top = max(cs) if cs else 0.0
    return [c / top if top > 0 else 0.0 for c in cs]


def combine(ends, fallback):
    """ends: list of (belief, certainty, support); returns (belief, certainty)."""
    rcs = rel_cert([c for _, c, _ in ends])
    act = [(b, rc, s) for (b, _, s), rc in zip(ends, rcs) if rc > 0]
    den = sum(abs(s) for _, _, s in act)
    if den == 0:
        return fallback
    r = [s / den for _, _, s in act]
    bj = sum(rc * ri * b for (b, rc, _), ri in zip(act, r))
    dis = sum(abs(b * sign(s) - bj) * abs(ri) * rc for (b, rc, s), ri in zip(act, r))
    return bj, min(1.0, max(0.0, 1.0 - dis))


def node_value(net, target, values):
    node = net.nodes[target]
    edges = [e for e in net.edges if e.dst == target]
    if not edges:
        return (node.intuition.belief, node.intuition.certainty)
    supports = {}
    for e in edges:
        metas = [(values[m.endorser], m.strength) for m in e.meta]
        rcs = rel_cert([v[1] for v, _ in metas])
        s = e.base_strength + sum(v[0] * rc * t for (v, t), rc in zip(metas, rcs))
        supports[e.src] = max(-1.0, min(1.0, s))
    for cl in net.clusters:
        if cl.target != target:
            continue
        mem = sorted(cl.members)
        if cl.winner_metric.value == "combined":
            rcs = dict(zip(mem, rel_cert([values[m][1] for m in mem])))
            score = {m: values[m][0] * rcs[m] * abs(supports[m]) for m in mem}
        else:
            score = {m: values[m][0] for m in mem}
        win = mem[0]
        for m in mem[1:]:
            ds, dc = score[m] - score[win], values[m][1] - values[win][1]
            if ds > TIE or (abs(ds) <= TIE and dc > TIE):
                win = m
        factor = 1 - cl.inhibition * max(values[win][0], 0.0)
        for m in mem:
            if m != win:
                supports[m] *= factor
    ends = [(values[e.src][0], values[e.src][1], supports[e.src]) for e in edges]
    fb = (node.intuition.belief, node.intuition.certainty) if node.intuition else (0.0, 0.0)
    return combine(ends, fb)


def global_relaxation(net, alpha=0.5, eps=1e-14, max_iters=100_000):
    """Damped synchronous sweeps over the whole network from a zero start."""
    values = {n: (0.0, 0.0) for n in net.nodes}
    for _ in range(max_iters):
        fresh = {n: node_value(net, n, values) for n in net.nodes}
        residual = 0.0
        for n, (fb, fc) in fresh.items():
            b, c = values[n]
            nb, nc = b + alpha * (fb - b), c + alpha * (fc - c)
            residual = max(residual, abs(nb - b), abs(nc - c))
            values[n] = (nb, nc)
        if residual <= eps:
            break
    return values
