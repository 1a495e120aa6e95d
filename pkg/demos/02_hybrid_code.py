"""Build a column-weight-3 circulant code, turn block rows into super
checks and check what that buys."""

# %%
from chgldpc.component import make_bch_31_21, make_repetition
from chgldpc.hybrid import array_layout, harmful_instances, place_rows, rate_report
from chgldpc.tanner import build_permutation_code, layout_girth, search_shifts
from chgldpc.trapsets import enumerate_elementary_ts
from chgldpc.verify import find_min_failure, verify_gec

layout = search_shifts(3, 5, 13, 8, seed=1)
graph = build_permutation_code(layout)
print("shifts", layout.shifts, "girth", layout_girth(layout), "N =", graph.n_var)

# rows of weight 5 need a length-5 component; repetition(5) corrects 2 errors
rep5 = make_repetition(5)
codes = {alpha: place_rows(layout, alpha, rep5) for alpha in (0, 1, 2)}

# %% rates
# a repetition component keeps only one bit in five, so the hybrids here have
# no information left; a length-31 BCH component on a p=31 array code does
for alpha, code in codes.items():
    r = rate_report(code)
    print(f"alpha={alpha}: rate {r.actual_rate} ({float(r.actual_rate):.3f}), bound {r.lower_bound}")
array31 = array_layout(3, 31, 31)
for alpha in (0, 1, 2):
    r = rate_report(place_rows(array31, alpha, make_bch_31_21()))
    print(f"array p=31, alpha={alpha}: rate {float(r.actual_rate):.3f}, bound {float(r.lower_bound):.3f}")

# %% small trapping sets under each placement
sets = enumerate_elementary_ts(graph, 6, 4, period=layout.p)
print(len(sets), "elementary sets with a <= 6, b <= 4")
for alpha, code in codes.items():
    print(f"alpha={alpha}: {len(harmful_instances(code, sets))} remain harmful")

# %% exhaustive and sampled verification
for alpha, target in ((1, 2), (2, 3)):
    rep = verify_gec(codes[alpha], target_weight=target)
    print(f"alpha={alpha}, all weights <= {target}: {rep.verdict}, "
          f"{rep.failure_count} of {rep.patterns_tested} fail")
print("first failure with one super row:", find_min_failure(codes[1]).support)
