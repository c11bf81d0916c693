#!/usr/bin/env python3
"""Regenerates crates/core/tests/data/bounds_reference.csv.

Recomputes every closed-form bound at 50 decimal digits with mpmath and
freezes the nearest-double value. The Rust test suite evaluates the same
formulas in f64 and must agree to 1e-9 relative, so any drift in the
implementation shows up against this table.

Rows: name,p1,p2,p3,value  (parameter meaning depends on the name; unused
parameters are 0). Values are reprs of Python floats, i.e. shortest strings
that round-trip the double.
"""

import os

from mpmath import mp, mpf, exp, ln, log, sqrt, pi, e

mp.dps = 50

OUT = os.path.join(
    os.path.dirname(__file__), "..", "crates", "core", "tests", "data",
    "bounds_reference.csv",
)

EPS_GRID = [
    "0.01", "0.02", "0.05", "0.1", "0.15", "0.2", "0.26", "0.3", "0.35",
    "0.4", "0.45", "0.49",
]
DIMS = [2, 3, 5, 10, 30]

rows = []


def emit(name, p1, p2, p3, value):
    v = float(value)
    if v != v or v in (float("inf"), float("-inf")):
        return
    rows.append(f"{name},{p1},{p2},{p3},{v!r}")


def lnln(x):
    return ln(ln(x))


for es in EPS_GRID:
    eps = mpf(es)
    for d in DIMS:
        df = mpf(d)
        emit("inverse_upper_cube", es, d, 0, 16 * e * df * lnln(8 / eps) / eps)
        emit("inverse_upper_torus", es, d, 0,
             8 * e * df * (lnln(e / eps) + ln(2 * df)) / eps)

        # collected-table entries, all constants at 1
        emit("table_upper_tiny_eps", es, d, 0, df * df * ln(df) / eps)
        emit("table_lower_tiny_eps", es, d, 0, df / (e * eps))
        emit("table_upper_large_eps_sq", es, d, 0,
             ln(df) * ln(1 / eps) / eps**2)
        emit("table_lower_mid_eps_sq", es, d, 0,
             ln(df) / (eps**2 * ln(1 / eps)))
        emit("table_lower_log2d", es, d, 0, log(df, 2) / (8 * eps))
        emit("table_upper_additive_loglog", es, d, 0,
             (df * lnln(1 / eps) + ln(1 / eps)) / eps)
        emit("table_lower_random_baseline", es, d, 0,
             max(ln(1 / eps) / eps, df / (2 * eps)))
        if eps > mpf(1) / 4:
            emit("table_upper_quarter_window", es, d, 0,
                 pi / sqrt(eps - mpf(1) / 4) - 3)
        emit("table_torus_lower_linear", es, d, 0, df / eps)
        emit("table_torus_upper_loglinear", es, d, 0,
             (df * ln(2 * df) + ln(e / eps)) / eps)

        # piecewise best-known upper bound, branch chosen by threshold
        t1 = ln(df) ** 2 / (df * lnln(2 * df))
        t2 = exp(-(df**d))
        if eps >= t1:
            emit("best_known_large_eps", es, d, 0,
                 ln(df) * ln(1 / eps) / eps**2)
        elif eps >= t2:
            emit("best_known_mid_loglog", es, d, 0,
                 df / eps * lnln(1 / eps))
        else:
            emit("best_known_tiny_eps", es, d, 0, df * df * ln(df) / eps)

        # canonical parameters and the literature net cardinality
        gamma = 1 / ln(1 / eps)
        emit("canonical_gamma", es, 0, 0, gamma)
        emit("canonical_delta", es, 0, 0, eps / (4 * e))
        shrunk = eps ** (1 + gamma)
        base = 7 * df * ln(df) * (1 + 1 / gamma) ** d / shrunk
        emit("net_cardinality_cube", es, d, float(gamma),
             base * ln(e / shrunk) ** d)
        emit("net_cardinality_torus", es, d, float(gamma),
             base * (2 * df) ** d)

for n in [9, 12, 40, 100, 1000, 1000000]:
    for d in [2, 3, 5, 10]:
        if mpf(n) / d <= e:
            continue
        df = mpf(d)
        emit("min_dispersion_upper_cube", n, d, 0, df * lnln(mpf(n) / df) / n)
        emit("min_dispersion_upper_torus", n, d, 0,
             df * (lnln(mpf(n) / df) + ln(df)) / n)

for n in [28, 100, 1000, 100000]:
    for ds in ["0.01", "0.1", "0.25", "0.3333333333333333"]:
        delta = mpf(ds)
        if n >= 3:
            emit("random_piercing", n, ds, 0, 3 * ln(mpf(n)) / delta)
        if delta <= mpf(1) / 3 and delta * n >= e:
            emit("two_phase_piercing", n, ds, 0, ln(4 * delta * n) / delta)

for es, gs in [("0.5", "1.4426950408889634"), ("0.3", "0.5"), ("0.1", "1.0")]:
    eps, gamma = mpf(es), mpf(gs)
    emit("delta_for_gamma", es, gs, 0, eps ** (1 + gamma) / 4)

os.makedirs(os.path.dirname(OUT), exist_ok=True)
with open(OUT, "w") as f:
    f.write("name,p1,p2,p3,value\n")
    f.write("\n".join(rows) + "\n")

print(f"wrote {len(rows)} rows to {os.path.normpath(OUT)}")
