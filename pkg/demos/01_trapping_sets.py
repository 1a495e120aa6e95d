"""Walk through a (5,3) trapping set: why it traps bit flipping, and which
super checks release it."""

# %%
from itertools import combinations

from chgldpc import fixtures as fx
from chgldpc.decoders import decode, pbf_step
from chgldpc.trapsets import (critical_number, find_critical_set_cw3, is_harmful,
                              min_critical_set_size, minimal_critical_sets)

ts = fx.ts53().instance()
print("variables", ts.variables, "label", ts.label)
print("degree-2 checks", ts.checks_of_degree(2), "degree-1 checks", ts.checks_of_degree(1))

# %% plain LDPC: every variable in error is a fixed point
plain = fx.ts53()
res = decode(plain.code(), plain.received(), "pbf")
print("plain:", "converged" if res.converged else "stuck", "residual", res.residual_support)
print("smallest failing weight", critical_number(ts))

# %% converting two checks that share no variable
split = fx.ts53((0, 4))
x = split.received()
for it in range(1, 4):
    x = pbf_step(split.code(), x)
    print(f"iteration {it}: still wrong {[int(v) for v in x.nonzero()[0]]}")

# %% which pairs of degree-2 checks work?
good = minimal_critical_sets(ts)
bad = [p for p in combinations(ts.checks_of_degree(2), 2) if p not in good]
print("minimum size", min_critical_set_size(ts))
print("working pairs", good)
print("pairs that leave the set harmful", bad)

# %% the cycle-breaking routine finds one of them
cs = find_critical_set_cw3(ts)
print("cycle breaking picks", cs.checks, "harmful afterwards:", is_harmful(ts, cs.checks))
