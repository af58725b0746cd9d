"""Period energies of the third-order standing wave.

Both the weighted kinetic period integral and twice the potential period
integral equal pi^2/2 + (3 pi^2/16) eps^2 up to O(eps^3); their difference is
the equipartition residual, which here even lands at fourth order.  The free
second-order coefficients shift nothing below third order.
"""

import numpy as np

from virialwave import (StandingWaveExpansion, equipartition_residual,
                        modified_kinetic_period_integral, potential_period_integral)

target = lambda e: np.pi ** 2 / 2 + 3 * np.pi ** 2 / 16 * e ** 2

print(f"{'eps':>6} {'kinetic':>16} {'potential':>16} {'closed form':>16} {'residual':>12}")
for eps in (0.0, 0.05, 0.1, 0.2):
    exp = StandingWaveExpansion(epsilon=eps)
    em = modified_kinetic_period_integral(exp)
    ep = potential_period_integral(exp)
    print(f"{eps:6.2f} {em:16.10f} {ep:16.10f} {target(eps):16.10f} "
          f"{abs(em - ep):12.3e}")

eps_list = (0.05, 0.1, 0.2)
res = [equipartition_residual(StandingWaveExpansion(epsilon=e)) for e in eps_list]
slope = np.polyfit(np.log(eps_list), np.log(res), 1)[0]
print(f"\nlog-log slope of the equipartition residual: {slope:.2f}")

print("\nfree-coefficient sweep at eps = 0.1 (changes are third order):")
base = modified_kinetic_period_integral(StandingWaveExpansion(epsilon=0.1))
for c in (-1.0, 0.0, 1.0):
    exp = StandingWaveExpansion(epsilon=0.1, A13=c, A33=c, b13=c, b33=c)
    em = modified_kinetic_period_integral(exp)
    print(f"  coeffs = {c:+.0f}: kinetic = {em:.10f}  (shift {em - base:+.2e})")
print(f"  frequency correction: omega(0.1) = {StandingWaveExpansion(epsilon=0.1).omega}")
