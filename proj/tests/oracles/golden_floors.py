#!/usr/bin/env python3
# Copyright 2026 The cpe-workbench Authors
# SPDX-License-Identifier: Apache-2.0
#
# Regenerates the golden values pinned in test_analytic.cpp with 50-digit
# arithmetic. Requires mpmath.

from mpmath import mp, mpf, erfc, sqrt, pi, log

mp.dps = 50
C = mpf("299792458")


def nlms(n, s2):
    return erfc(pi / (n * sqrt(2) * sqrt(s2))) / log(n, 2)


def bwa_var(p, N, s2):
    a, b = mpf(p - 1), mpf(N - p)
    s2 = mpf(s2)
    return s2 / (6 * N * N) * (2 * a**3 + 3 * a**2 + 2 * b**3 + 3 * b**2 + N - 1)


def bwa(n, s2, N):
    acc = mpf(0)
    for p in range(1, N + 1):
        v = bwa_var(p, N, s2)
        if v > 0:
            acc += erfc(pi / (n * sqrt(2) * sqrt(v)))
    return acc / (N * log(n, 2))


def vv(n, s2, N):
    return erfc(pi / (n * sqrt(s2)) * sqrt(mpf(6 * N) / (N * N - 1))) / log(n, 2)


def laser(df, ts):
    return 2 * pi * df * ts


def eepn(df_lo, d, l, lam, ts):
    return df_lo * d * l * pi * lam**2 / (2 * C * ts)


ts = 1 / mpf("28e9")
link = (mpf("17e-6"), mpf("2e6"), mpf("1553e-9"))
rows = {
    "erfc(1)": erfc(1),
    "nlms(4, 0.09)": nlms(4, mpf("0.09")),
    "bwa(4, 1e-2, 15)": bwa(4, mpf("1e-2"), 15),
    "bwa(4, 3e-2, 15)": bwa(4, mpf("3e-2"), 15),
    "vv(4, 1e-2, 15)": vv(4, mpf("1e-2"), 15),
    "vv(16, 1e-3, 15)": vv(16, mpf("1e-3"), 15),
    "laser(200 kHz, 28 GBd)": laser(mpf("2e5"), ts),
    "laser(1 MHz, 100 ps)": laser(mpf("1e6"), mpf("1e-10")),
    "eepn(100 kHz, 2000 km)": eepn(mpf("1e5"), *link, ts),
    "total(tx 0, lo 100 kHz)": laser(mpf("1e5"), ts) + eepn(mpf("1e5"), *link, ts),
    "total(tx 100 kHz, lo 100 kHz)": laser(mpf("2e5"), ts) + eepn(mpf("1e5"), *link, ts),
    "bwa_var(8, 15) / s2": bwa_var(8, 15, 1),
    "bwa_var(1, 15) / s2": bwa_var(1, 15, 1),
}
for name, value in rows.items():
    print(f"{name:32s} {mp.nstr(value, 20)}")
