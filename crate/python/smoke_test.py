"""Smoke test for the `lrp` extension module.

Build first, e.g. `maturin develop -m crates/py/Cargo.toml`, then run
`python python/smoke_test.py`.
"""

import math

import lrp


def main():
    b = lrp.Box(1, 64)
    p = lrp.Params(1.0, 1)
    assert b.site_count == 65
    assert b.coords(b.center()) == [32]
    assert abs(p.probability(2) - (1 - math.exp(-0.5))) < 1e-15

    g = lrp.sample_graph(b, p, 7)
    assert g.edge_count >= 64
    assert all(g.has_edge(i, i + 1) for i in range(64))
    again = lrp.Graph.from_bytes(g.to_bytes())
    assert again.edges() == g.edges()
    assert g.to_bytes() == lrp.sample_graph(b, p, 7).to_bytes()

    dist = g.distances(0)
    assert dist[0] == 0 and max(dist) == max(d for d in dist if d is not None)
    assert g.diameter() >= max(dist)

    line = lrp.Box(1, 8)
    assert abs(lrp.rho(line, p, 0, [2, 4]) - 0.75) < 1e-15

    sizes = lrp.ball_growth(b, p, [b.center()], mode="annealed", seed=3, max_steps=2)
    assert sizes[0] == 1 and len(sizes) <= 3
    sizes_q = lrp.ball_growth(b, p, [b.center()], mode="quenched", graph=g)
    assert sum(sizes_q) == b.site_count

    out = lrp.two_ball(b, p, 10, 12, radius=2, graph=g)
    assert out["tau"] == 0

    records = lrp.run_experiment("diameter", '{"n": 32, "trials": 3, "mode": "quenched"}')
    assert len(records) == 3 and all(r["kind"] == "exact" for r in records)

    try:
        lrp.Box(1, 0)
    except ValueError:
        pass
    else:
        raise AssertionError("Box(1, 0) should be rejected")

    print("smoke test passed:", g)


if __name__ == "__main__":
    main()
