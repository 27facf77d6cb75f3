"""
Outage versus URN altitude
==========================

Raising the relay nodes weakens turbulence (the Hufnagel-Valley profile
decays with height) but lengthens the ground-to-air RF hop. The serial
presets trade one against the other.
"""
import dataclasses

import numpy as np

from aerolink import ScenarioConfig, build_fig2_config, outage_analytical
from aerolink.atmosphere import TurbulenceProfile, hv_cn2, rytov_variance, scintillation_index

profile = TurbulenceProfile()
for h in (50.0, 200.0, 400.0):
    cn2 = hv_cn2(h, profile)
    s2 = scintillation_index(rytov_variance(cn2, profile.wavelength_m, 2500.0, wave="spherical"),
                             wave="spherical")
    print(f"h = {h:5.0f} m   Cn2 = {cn2:.3e}   scintillation index = {s2:.3f}")

h = np.arange(50.0, 401.0, 25.0)


def curve(which, ip_db=0.0):
    s = ScenarioConfig(interference_db=ip_db)
    return np.array([outage_analytical(build_fig2_config(which, dataclasses.replace(s, urn_altitude_m=x))).p_out
                     for x in h])


over = curve("fig2b")
under = {ip: curve("fig2d", ip) for ip in (0.0, 3.0, 5.0)}
print(f"\n{'h_u (m)':>8}{'overlay':>12}" + "".join(f"{'I_P=' + format(ip, 'g') + 'dB':>12}" for ip in under))
for i, x in enumerate(h):
    print(f"{x:>8.0f}{over[i]:>12.3e}" + "".join(f"{u[i]:>12.3e}" for u in under.values()))

print("\noverlay serial minimum near h_u =", h[np.argmin(over)], "m")
