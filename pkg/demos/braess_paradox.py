"""Braess's paradox on a four-node diamond.

Six units of demand travel from o to d.  The outer routes o-a-d and
o-b-d each pair a steep arc (cost 1 + 10x) with a flat one (50 + x).
Adding a cheap shortcut a -> b (cost 10 + x) creates a third route that
everyone is tempted to use -- and the selfish equilibrium gets WORSE for
everybody: the common route cost rises from 84 to 1200/13 ~ 92.3.
"""

import numpy as np

import netequil as nq


def solve(net, coefficients, supplies):
    orthant = nq.Box.orthant(1)
    specs = [nq.BPR(alpha=b / a, rho=1.0, theta=a, p=1.0) for a, b in coefficients]
    ops = nq.OperatorSet(
        net,
        [nq.ArcOperator(nq.SeparableLift(s), orthant) for s in specs],
        [nq.FixedSupply((s,)) for s in supplies],
    )
    state, _, reason = nq.run(net, ops, nq.SolverConfig(tol=1e-6, max_iter=100_000))
    assert reason is nq.Termination.CONVERGED
    return state, specs, ops


nodes = ["o", "a", "b", "d"]
outer_arcs = [("o", "a"), ("o", "b"), ("a", "d"), ("b", "d")]
outer_coef = [(1.0, 10.0), (50.0, 1.0), (50.0, 1.0), (1.0, 10.0)]
supplies = [6.0, 0.0, 0.0, -6.0]

# without the shortcut: two symmetric routes split the demand evenly
net0 = nq.Network(nodes, outer_arcs, 1)
state0, specs0, _ = solve(net0, outer_coef, supplies)
cost_oad = specs0[0].value(state0.x[0, 0]) + specs0[2].value(state0.x[2, 0])
print("without the shortcut:")
print(f"  arc flows   = {state0.x[:, 0].round(4)}")
print(f"  route cost  = {cost_oad:.4f}")

# with the shortcut a -> b: a third route o-a-b-d appears
net1 = nq.Network(nodes, outer_arcs + [("a", "b")], 1)
state1, specs1, ops1 = solve(net1, outer_coef + [(10.0, 1.0)], supplies)
x = state1.x[:, 0]
cost_oad = specs1[0].value(x[0]) + specs1[2].value(x[2])
cost_oabd = specs1[0].value(x[0]) + specs1[4].value(x[4]) + specs1[3].value(x[3])
print("\nwith the shortcut:")
print(f"  arc flows   = {x.round(4)}   (the shortcut carries {x[4]:.4f})")
print(f"  route costs = o-a-d: {cost_oad:.4f},  o-a-b-d: {cost_oabd:.4f}")
print(f"  exact common cost 1200/13 = {1200 / 13:.4f}")

# cross-check against an entirely independent method
fw = nq.frank_wolfe_reference(
    net1, specs1, np.array(supplies), iterations=20_000
)
print(f"\nfrank-wolfe agreement: max flow difference {np.abs(fw - state1.x).max():.2e}")
print(
    "adding a road made everyone slower by "
    f"{1200 / 13 - 84:.4f} cost units -- that is the paradox."
)
