"""
Monte Carlo against the closed form
===================================

Every preset is simulated with a million draws per hop and compared to
the analytical outage with a binomial z-score.
"""
import time

from aerolink import McConfig, build_fig2_config, mc_outage, outage_analytical
from aerolink.montecarlo import mc_vs_analytical

cfg = McConfig(samples=1_000_000, master_seed=7)
t0 = time.perf_counter()
for j, key in enumerate(("fig2a", "fig2b", "fig2c", "fig2d")):
    r = mc_vs_analytical(build_fig2_config(key), cfg, stream_key=(j,))
    print(f"{key}: analytical {r.p_analytical:.5e}  simulated {r.p_mc:.5e}  z = {r.z_score:+.2f}  "
          f"{'PASS' if r.passed else 'FAIL'}")
print(f"{time.perf_counter() - t0:.2f} s")

# the estimate does not depend on how the samples are batched or threaded
topo = build_fig2_config("fig2d")
a = mc_outage(topo, McConfig(samples=300_000, master_seed=1))
b = mc_outage(topo, McConfig(samples=300_000, master_seed=1, batch_size=4097, workers=4))
print("\nsame failures with other batching:", a.failures == b.failures, a.failures)
print("analytical:", outage_analytical(topo).p_out, " 95% CI:", (a.ci95_low, a.ci95_high))
