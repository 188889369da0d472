#!/usr/bin/env python3
"""Spectral-integral reference values for sqrt of the discrete Laplacian.

Bilateral:  (Delta_Z^r)(j)   = (1/2pi) int_{-pi}^{pi} (2-2cos k)^r e^{-ikj} dk
Half-line:  (Delta_N^r)(n,m) = (2/pi)  int_0^pi (2-2cos t)^r sin((n+1)t) sin((m+1)t) dt
Boundary correction kappa_p = K(n,m), p = n+m, is Hankel; closed form at p=0
for r=1/2: kappa_0 = 4/(15 pi).
"""
import mpmath as mp

mp.mp.dps = 30


def delta_z(r, j):
    f = lambda k: (2 - 2 * mp.cos(k)) ** r * mp.cos(k * j)
    return mp.quad(f, [0, mp.pi]) / mp.pi


def delta_n(r, n, m):
    f = lambda t: (2 - 2 * mp.cos(t)) ** r * mp.sin((n + 1) * t) * mp.sin((m + 1) * t)
    return 2 / mp.pi * mp.quad(f, [0, mp.pi])


def show(name, v):
    print(f"{name} = {mp.nstr(v, 22)}")


r = mp.mpf(1) / 2
show("dz_half_0", delta_z(r, 0))     # 4/pi
show("dz_half_1", delta_z(r, 1))
show("dz_half_2", delta_z(r, 2))
show("dz_half_3", delta_z(r, 3))
show("dn_half_00", delta_n(r, 0, 0))  # 64/(15 pi)
show("dn_half_01", delta_n(r, 0, 1))
show("dn_half_11", delta_n(r, 1, 1))
show("kappa0_half", delta_n(r, 0, 0) - delta_z(r, 0))   # 4/(15 pi)
show("kappa0_closed", 4 / (15 * mp.pi))
show("kappa1_half", delta_n(r, 0, 1) - delta_z(r, 1))
show("kappa2_half", delta_n(r, 1, 1) - delta_z(r, 0))
show("kappa2_half_b", delta_n(r, 0, 2) - delta_z(r, 2))  # Hankel: same as kappa2
show("kappa3_half", delta_n(r, 1, 2) - delta_z(r, 1))

# r = -1/4 bilateral spot values (negative-order lane); substitute k = u^2 to
# tame the integrable endpoint singularity of (2-2cos k)^r ~ k^{2r}
def delta_z_sing(r, j):
    f = lambda u: (2 - 2 * mp.cos(u * u)) ** r * mp.cos(u * u * j) * 2 * u
    return mp.quad(f, [0, mp.sqrt(mp.pi)]) / mp.pi


rm = mp.mpf(-1) / 4
show("dz_m14_0", delta_z_sing(rm, 0))
show("dz_m14_1", delta_z_sing(rm, 1))
show("dz_m14_2", delta_z_sing(rm, 2))

# closed form c_r(j) = -sin(pi r) Gamma(2r+1) Gamma(j-r) / (pi Gamma(r+j+1)),
# valid for j >= 1, non-integer r; and c_r(0) = Gamma(2r+1)/Gamma(r+1)^2
def c_closed(r, j):
    if j == 0:
        return mp.gamma(2 * r + 1) / mp.gamma(r + 1) ** 2
    return -mp.sin(mp.pi * r) * mp.gamma(2 * r + 1) * mp.gamma(j - r) / (
        mp.pi * mp.gamma(r + j + 1))


show("c_closed_half_1", c_closed(r, 1))
show("c_closed_half_2", c_closed(r, 2))
show("c_closed_m14_1", c_closed(rm, 1))
show("c_closed_m14_2", c_closed(rm, 2))

# anisotropic symbol spot values
show("sym_half_at_pi2", (2 - 2 * mp.cos(mp.pi / 2)) ** r)  # sqrt(2)
# h_{(-1,1)} at (pi/3, pi/2): (2-2cos)^(-1) + (2-2cos)^(1)
show("sym_m1p1", (2 - 2 * mp.cos(mp.pi / 3)) ** -1 + (2 - 2 * mp.cos(mp.pi / 2)))

# relative symbol distance used by the r-continuity lane:
# max_k |h_r - h_r'| / |(h_r - i)(h_r' - i)| for r=0.5, r'=0.55 in 1D
def sym_dist(ra, rb):
    def g(k):
        a = (2 - 2 * mp.cos(k)) ** ra
        b = (2 - 2 * mp.cos(k)) ** rb
        return abs(a - b) / abs((a - 1j) * (b - 1j))
    # peak hunt on a fine grid then refine
    best = mp.mpf(0)
    for i in range(1, 4001):
        k = mp.pi * i / 4000
        best = max(best, g(k))
    return best


show("symdist_05_055", sym_dist(mp.mpf("0.5"), mp.mpf("0.55")))
show("symdist_05_06", sym_dist(mp.mpf("0.5"), mp.mpf("0.6")))
