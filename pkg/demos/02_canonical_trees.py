# %% [markdown]
# # Canonical anchors and string tuples
#
# Rooting a connected graph at a vertex and walking it in a fixed order
# picks one anchor vertex per linear path. Cutting the graph at the
# non-anchor vertices leaves a tree, and reading that tree along each
# path's two halves gives a tuple of `2 * width` strings. Two graphs give
# the same tuple from matching roots exactly when they are isomorphic.

# %%
from portmatch import Circuit, Gate, circuit_to_portgraph, ct_representation, reconstruct

c = Circuit(3, (Gate("CX", (0, 1)), Gate("CX", (1, 2)), Gate("H", (2,))))
g = circuit_to_portgraph(c)
ct = ct_representation(g, 2)
print("anchors", ct.anchors)
# each character encodes one vertex (weight, ports, where the path enters)
print("string lengths", [len(s) for s in ct.strings.strings])

# %% [markdown]
# The tree keeps enough information (addresses and merge labels) to glue
# the original graph back together.

# %%
h = reconstruct(ct)
print(h.num_vertices, h.num_edges, [h.weight(v) for v in h.vertices()])

# %% [markdown]
# Relabelling the vertices does not change the strings, which is what
# lets many patterns share one prefix tree.

# %%
perm = [1, 2, 0]
ct2 = ct_representation(g.relabel(perm), perm[2])
print(ct2.strings == ct.strings)
