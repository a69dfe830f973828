# %% [markdown]
# # Matching circuit patterns
#
# Patterns are compiled once into prefix trees, one per width. A query
# enumerates the subject's anchor lists and looks each one up, so it
# finds every pattern at once.

# %%
from portmatch import TH_CX, Circuit, Gate, circuit_to_portgraph, compile_patterns, find_matches, load, naive_match, save


def circ(q, *gates):
    return circuit_to_portgraph(Circuit(q, tuple(Gate(op, qs) for op, qs in gates)), TH_CX)


subject = circ(3, ("H", (0,)), ("CX", (0, 1)), ("T", (1,)), ("CX", (1, 2)), ("H", (0,)), ("CX", (0, 1)))
patterns = [
    circ(1, ("H", (0,))),
    circ(2, ("CX", (0, 1)), ("T", (1,))),
    circ(2, ("CX", (0, 1)), ("CX", (0, 1))),
    circ(3, ("CX", (0, 1)), ("CX", (1, 2))),
    circ(3, ("T", (1,)), ("CX", (1, 2))),
]
m = compile_patterns(patterns)
for x in find_matches(m, subject):
    print(x.pattern_id, x.vertex_map)

# %% [markdown]
# The answer agrees with checking every pattern on its own.

# %%
slow = sorted((i, x.vertex_map) for i, p in enumerate(patterns) for x in naive_match(p, subject) if x.convex)
print(slow == [(x.pattern_id, x.vertex_map) for x in find_matches(m, subject)])

# %% [markdown]
# Compiled matchers serialize to a versioned, checksummed byte string.

# %%
data = save(m)
print(len(data), "bytes", data[:4])
print(find_matches(load(data), subject) == find_matches(m, subject))
