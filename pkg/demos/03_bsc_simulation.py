"""Frame error rates on the BSC for the plain code and two hybrids, all fed
the same noise frames."""

# %%
from chgldpc.component import make_repetition
from chgldpc.hybrid import place_rows
from chgldpc.sim import SimConfig, run_sim
from chgldpc.tanner import search_shifts

layout = search_shifts(3, 5, 13, 8, seed=1)
rep5 = make_repetition(5)
alphas = [0.02, 0.04, 0.08]

for alpha_rows in (0, 1, 2):
    code = place_rows(layout, alpha_rows, rep5)
    cfg = SimConfig(code, "pbf", alphas, max_frames=20_000, max_errors=200, seed=7)
    print(f"# super block rows: {alpha_rows}")
    print(run_sim(cfg, workers=4).to_csv())
