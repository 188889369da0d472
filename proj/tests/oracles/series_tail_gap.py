#!/usr/bin/env python3
"""Exact size of the K_{1/2} binomial-series truncation tail at h_max = 60.

kappa_p(true)  = -c_r(p+2)  (bilateral kernel of the symbol power)
kappa_p(h_max) = -sum_{h=p+2..h_max, h==p (2)} (-1)^h C(r,h) 2^{r-h} C(h,(h-2-p)/2)

The gap |true - partial| is the irreducible cross-method disagreement of the
series lane at that truncation order; frozen here so the verification battery
can assert the measured number instead of hand-waving.
"""
import mpmath as mp

mp.mp.dps = 40
r = mp.mpf(1) / 2


def c_closed(rr, j):
    if j == 0:
        return mp.gamma(2 * rr + 1) / mp.gamma(rr + 1) ** 2
    return -mp.sin(mp.pi * rr) * mp.gamma(2 * rr + 1) * mp.gamma(j - rr) / (
        mp.pi * mp.gamma(rr + j + 1))


def binom_gen(rr, h):
    out = mp.mpf(1)
    for i in range(h):
        out *= (rr - i) / (i + 1)
    return out


def kappa_partial(p, hmax):
    s = mp.mpf(0)
    h = p + 2
    while h <= hmax:
        s += (-1) ** h * binom_gen(r, h) * 2 ** (r - h) * mp.binomial(h, (h - 2 - p) // 2)
        h += 2
    return -s


for p in (0, 1, 2, 31, 62):
    true = -c_closed(r, p + 2)
    part = kappa_partial(p, 60)
    print(f"p={p:3d}  true={mp.nstr(true, 16):>22}  partial60={mp.nstr(part, 16):>22}"
          f"  gap={mp.nstr(abs(true - part), 6)}")

for hmax in (60, 120, 240, 1000, 10000):
    gap = abs(-c_closed(r, 2) - kappa_partial(0, hmax))
    print(f"hmax={hmax:6d}  gap_at_p0={mp.nstr(gap, 8)}  hmax*gap={mp.nstr(hmax * gap, 6)}")
