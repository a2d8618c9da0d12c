"""
Resolvent norms along the imaginary axis: baseline against delay
================================================================

For an exponentially stable semigroup on Hilbert space, immediate norm
continuity is equivalent to the resolvent norm vanishing along the
imaginary axis. Scanning that norm is therefore a diagnostic: the undelayed
baseline decays like 1/lambda, while the delayed system keeps a plateau.
"""

from thermosemi.core import ModelParams, SystemKind, make_spectrum
from thermosemi.resolvent import mode_resolvent_norm_lb, resolvent_scan
from thermosemi.witness import build_witness_mode

spectrum = make_spectrum("power", coefficient=1.0, exponent=2.0)

# Baseline: each bound is a supremum over modes of an exact per-mode norm.
baseline = ModelParams(kind=SystemKind.NO_DELAY_BASELINE, beta=0.5, alpha=0.5)
print("baseline (no delay), lower bounds for |R(i lambda)|:")
for lam in (1e2, 1e3, 1e4):
    rows = resolvent_scan(baseline, spectrum, [lam], int(1.2 * lam + 50))
    print(
        "  lambda=%8.0f sup=%.3e attained at mode n=%d"
        % (lam, rows[0].sup_lb, rows[0].argmax_n)
    )
print("  decays a full decade per decade: norm-continuous semigroup")
print()

# Delayed counterpart probed at the witness frequencies. The Rayleigh bound
# over a small trial family stays near tau/sqrt(3) = 0.577 no matter how
# far out the frequency is pushed.
delayed = ModelParams(
    kind=SystemKind.DELAY_HYPERBOLIC, beta=0.5, alpha=0.5, a=1.0, tau=1.0, xi=2.0
)
print("delayed stiffness, bounds at the witness frequencies:")
for n in (100, 1000, 10000):
    mu = float(n) ** 2
    wm = build_witness_mode(delayed, mu)
    lb = mode_resolvent_norm_lb(delayed, mu, wm.lam, k_trial=4)
    print("  n=%6d lambda=%12.1f lower bound %.4f" % (n, wm.lam, lb))
print("  stays above 0.9 * tau/sqrt(3) = 0.5196: never norm-continuous")
