"""Random resistive networks for property tests."""

import random

from fluidlogic.netlist import ComponentDecl, Netlist, Probe, Quantity


def random_network(rng: random.Random, max_nodes: int = 8) -> Netlist:
    """Connected network of hoses, orifices and check valves between sources and a tank."""
    n = rng.randint(3, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    comps = [ComponentDecl("tank", "t", (nodes[0],))]
    n_src = rng.randint(1, 2)
    for k in range(n_src):
        comps.append(ComponentDecl("source", f"s{k}", (nodes[k + 1],), {"pressure": Quantity(rng.uniform(0, 2e5))}))

    def element(i, a, b):
        kind = rng.choice(["hose", "hose", "orifice", "check"])
        if kind == "hose":
            params = {"length": Quantity(rng.uniform(0.01, 1.0)), "diameter": Quantity(rng.uniform(1e-3, 4e-3))}
        elif kind == "orifice":
            params = {"d1": Quantity(rng.uniform(0.5e-3, 4e-3))}
        else:
            params = {"crack": Quantity(rng.uniform(0, 2e4)), "rf": Quantity(rng.uniform(1e6, 1e8))}
        return ComponentDecl(kind, f"e{i}", (a, b), params)

    # spanning tree first so every node is connected, then extra edges
    order = nodes[:]
    rng.shuffle(order)
    i = 0
    for k in range(1, n):
        a, b = order[k], rng.choice(order[:k])
        comps.append(element(i, *rng.sample([a, b], 2)))
        i += 1
    for _ in range(rng.randint(0, n)):
        a, b = rng.sample(nodes, 2)
        comps.append(element(i, a, b))
        i += 1
    return Netlist(comps, [Probe("p", nodes[-1])], [], "random")
