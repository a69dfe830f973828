# %% [markdown]
# # Port graphs and linear paths
#
# A port graph is a set of vertices whose edges attach to numbered ports.
# Ports on one vertex are grouped into pairing classes; following an edge
# into a class and leaving through its partner port traces a linear path.
# For a quantum circuit every qubit wire is one such path.

# %%
from portmatch import Circuit, Gate, build_graph, circuit_to_portgraph, linear_paths, metrics

c = Circuit(2, (Gate("H", (0,)), Gate("CX", (0, 1)), Gate("T", (1,))))
g = circuit_to_portgraph(c)
print(g.num_vertices, "vertices,", g.num_edges, "edges")
for p in linear_paths(g):
    print("path", p.path_id, "vertices", p.vertices, "edges", p.edges)

# %% [markdown]
# Width counts the linear paths and depth is the longest one. On a flat
# graph (no path runs in a circle) width is the number of pairing classes
# minus the number of edges.

# %%
m = metrics(g)
print(m)
assert m.width == sum(len(g.pairing(v)) for v in g.vertices()) - g.num_edges

# %% [markdown]
# Graphs can also be built by hand. Vertices list their ports; edges join
# `(vertex, port)` ends. A port left unconnected is open.

# %%
chain = build_graph([[0, 1], [0, 1], [0, 1]], [((0, 1), (1, 0)), ((1, 1), (2, 0))])
print(metrics(chain), chain.open_ports())
