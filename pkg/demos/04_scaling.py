# %% [markdown]
# # Query time against pattern count
#
# Random width-2 patterns are compiled in sets of growing size and matched
# against one fixed random circuit. The per-pattern loop grows linearly;
# the compiled query levels off once the prefix trees hold most of the
# shapes the subject can offer.

# %%
import time

from portmatch import TH_CX, Subject, circuit_to_portgraph, compile_patterns, find_matches, naive_match, random_circuit

subject = Subject(circuit_to_portgraph(random_circuit(8, 200, TH_CX, seed=1), TH_CX))
pool = []
seed = 0
while len(pool) < 2000:
    p = circuit_to_portgraph(random_circuit(2, 5, TH_CX, seed=seed), TH_CX)
    seed += 1
    if p.is_connected():
        pool.append(p)


def clock(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


# %%
for ell in (10, 100, 1000, 2000):
    m = compile_patterns(pool[:ell])
    find_matches(m, subject)  # warm-up
    tq = min(clock(lambda: find_matches(m, subject)) for _ in range(3))
    tn = clock(lambda: [naive_match(p, subject.graph) for p in pool[:ell]]) if ell <= 1000 else float("nan")
    print(f"l={ell:5d}  query {tq * 1e3:7.1f} ms  naive {tn * 1e3:8.1f} ms")
