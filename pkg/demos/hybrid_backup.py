"""
RF backup on the air-to-ground hop
==================================

With a hybrid air-to-ground hop the destination takes the stronger of the
optical and RF signals, so the hop fails only when both do.
"""
import dataclasses

import numpy as np

from aerolink import ScenarioConfig, build_fig2_config, outage_analytical

d = np.arange(2500.0, 3501.0, 100.0)
plain = ScenarioConfig()
hybrid = dataclasses.replace(plain, atg_mode="hybrid")
print(f"{'d (m)':>7}{'FSO only':>12}{'hybrid':>12}")
for x in d:
    p0 = outage_analytical(build_fig2_config("fig2b", dataclasses.replace(plain, horizontal_m=x))).p_out
    p1 = outage_analytical(build_fig2_config("fig2b", dataclasses.replace(hybrid, horizontal_m=x))).p_out
    print(f"{x:>7.0f}{p0:>12.3e}{p1:>12.3e}")

# the backup only covers the last hop, so the optical air-to-air hop still caps the chain
