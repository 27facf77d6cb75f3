"""
Fog attenuation from visibility
===============================

Kim's visibility model at 1550 nm against the tabulated fog classes.
"""
import time

from aerolink.atmosphere import FOG_CLASSES, beer_lambert, kim_attenuation

# each fog class lists a visibility and the attenuation it implies
print(f"{'class':<10}{'V (km)':>8}{'table dB/km':>13}{'model dB/km':>13}{'rel err':>10}")
for fog in FOG_CLASSES.values():
    got = kim_attenuation(fog.visibility_km, 1550)
    err = abs(got - fog.attenuation_db_per_km) / fog.attenuation_db_per_km
    print(f"{fog.label:<10}{fog.visibility_km:>8.2f}{fog.attenuation_db_per_km:>13.2f}{got:>13.2f}{err:>10.1e}")

# the model is cheap enough to call inside a sweep
t0 = time.perf_counter()
for _ in range(1000):
    kim_attenuation(1.9, 1550)
print(f"\n{(time.perf_counter() - t0) * 1e3:.2f} us per call")

# transmittance over one km of thin fog, read in dB/km and literally
thin = FOG_CLASSES["thin"].attenuation_db_per_km
print("1 km thin fog, dB reading:     ", float(beer_lambert(thin, 1.0)))
print("1 km thin fog, literal reading:", float(beer_lambert(thin, 1.0, convention="literal")))
