"""Directed multigraph with commodities, and the divergence/tension maps.

A network is a finite ordered node set, a finite ordered list of directed
arcs (tail, head) with tail != head, and a finite ordered commodity set.
Parallel arcs are allowed; self-loops are not.  Per-arc quantities live in
R^C with one coordinate per commodity: a flow is an (n_arcs, C) array, a
potential an (n_nodes, C) array, and an arc dual again (n_arcs, C).

Divergence of a flow at a node is outgoing minus incoming flux; tension of
a potential across an arc is head value minus tail value.  The two maps
are negative adjoints of each other:

    sum_i <div_i x, v_i> = -sum_j <x_j, tension_j v>.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError


class Network:
    """Immutable directed multigraph with a commodity set.

    Parameters
    ----------
    nodes : sequence of hashable
        Node identifiers, no duplicates.
    arcs : sequence of (tail, head)
        Directed arcs given by node identifiers.  Parallel arcs are
        allowed; a self-loop raises with a diagnostic naming the arc.
    commodities : sequence of hashable, or int
        Commodity identifiers, or a count k meaning ``range(k)``.
    """

    def __init__(self, nodes, arcs, commodities=1):
        nodes = list(nodes)
        if len(set(nodes)) != len(nodes):
            raise ConfigurationError("duplicate node identifiers")
        if not nodes:
            raise ConfigurationError("node set must be nonempty")
        if isinstance(commodities, (int, np.integer)):
            commodities = list(range(int(commodities)))
        else:
            commodities = list(commodities)
        if len(set(commodities)) != len(commodities):
            raise ConfigurationError("duplicate commodity identifiers")
        if not commodities:
            raise ConfigurationError("commodity set must be nonempty")
        self.nodes = tuple(nodes)
        self.commodities = tuple(commodities)
        self._node_index = {v: i for i, v in enumerate(self.nodes)}

        tails, heads = [], []
        for j, pair in enumerate(arcs):
            tail, head = pair
            for endpoint in (tail, head):
                if endpoint not in self._node_index:
                    raise ConfigurationError(
                        f"arc {j}: endpoint {endpoint!r} is not a declared node"
                    )
            if tail == head:
                raise ConfigurationError(f"arc {j}: self-loop at node {tail!r}")
            tails.append(self._node_index[tail])
            heads.append(self._node_index[head])
        if not tails:
            raise ConfigurationError("arc set must be nonempty")
        self.tails = np.asarray(tails, dtype=np.intp)
        self.heads = np.asarray(heads, dtype=np.intp)
        self.tails.flags.writeable = False
        self.heads.flags.writeable = False
        self.arcs = tuple(
            (self.nodes[t], self.nodes[h]) for t, h in zip(tails, heads)
        )

    @property
    def n_nodes(self):
        return len(self.nodes)

    @property
    def n_arcs(self):
        return len(self.arcs)

    @property
    def n_commodities(self):
        return len(self.commodities)

    def node_index(self, node):
        try:
            return self._node_index[node]
        except KeyError:
            raise ConfigurationError(f"unknown node {node!r}") from None

    def incidence(self, node, arc):
        """Incidence coefficient of `node` on arc index `arc`.

        +1 if the node is the arc's initial node, -1 if its terminal
        node, 0 otherwise.
        """
        i = self.node_index(node)
        if not 0 <= arc < self.n_arcs:
            raise ConfigurationError(f"unknown arc index {arc!r}")
        if self.tails[arc] == i:
            return 1
        if self.heads[arc] == i:
            return -1
        return 0

    # ----- array factories and shape checks -------------------------------

    def zero_flow(self):
        return np.zeros((self.n_arcs, self.n_commodities))

    def zero_potential(self):
        return np.zeros((self.n_nodes, self.n_commodities))

    def zero_arc_dual(self):
        return np.zeros((self.n_arcs, self.n_commodities))

    def check_flow(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_arcs, self.n_commodities):
            raise ConfigurationError(
                f"flow shape {x.shape} does not match "
                f"({self.n_arcs}, {self.n_commodities})"
            )
        return x

    def check_potential(self, v):
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n_nodes, self.n_commodities):
            raise ConfigurationError(
                f"potential shape {v.shape} does not match "
                f"({self.n_nodes}, {self.n_commodities})"
            )
        return v

    # ----- the linear maps -------------------------------------------------

    def divergence(self, x):
        """Per-node net outflow of the flow `x`, an (n_nodes, C) array.

        Accumulates outgoing flux then incoming flux, each in ascending
        arc order, so results are bitwise reproducible across runs.
        """
        x = self.check_flow(x)
        out = np.zeros((self.n_nodes, self.n_commodities))
        np.add.at(out, self.tails, x)
        np.subtract.at(out, self.heads, x)
        return out

    def tension(self, v):
        """Per-arc potential difference head minus tail, an (n_arcs, C) array."""
        v = self.check_potential(v)
        return v[self.heads] - v[self.tails]
