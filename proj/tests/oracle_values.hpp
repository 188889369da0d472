// Frozen reference values for the unit and acceptance tests.  Every constant
// here was produced by an independent oracle (exact combinatorics, closed
// forms, or mpmath high-precision evaluation) by the scripts under
// tests/oracles/ named in the comments; the C++ library must reproduce them.
#pragma once

namespace oracle {

// ---- bilateral walk-count tables (tests/oracles/walk_counts.py) -----------
// exact integer counts: ballot numbers alpha_{h,k} = C(h,k) - C(h,k-1),
// their partial sums beta_{h,p}, and entries of the compression defect
// D_h = R (U+U*)^h J - (U_+ + U_+*)^h (a Hankel matrix of beta values)
inline constexpr long long kAlpha_4_1 = 3;
inline constexpr long long kAlpha_7_3 = 14;
inline constexpr long long kBeta_10_0 = 210;
inline constexpr long long kD4_00 = 4;
inline constexpr long long kD4_02 = 1;
inline constexpr long long kD5_01 = 5;
inline constexpr long long kD5_03 = 1;
inline constexpr long long kD6_00 = 15;
inline constexpr long long kD8_22 = 8;

// integer-order boundary corrections assembled from the D_h tables
// (tests/oracles/walk_counts.py): K_2 = -P_0; K_3, K_4 leading entries
inline constexpr double kK3_00 = -6.0;
inline constexpr double kK3_01 = 1.0;
inline constexpr double kK4_00 = -28.0;
inline constexpr double kK4_01 = 8.0;
inline constexpr double kK4_02 = -1.0;
inline constexpr double kK4_11 = -1.0;

// ---- modified Bessel / heat kernel (tests/oracles/bessel_heat_values.py) --
inline constexpr double kI0_2 = 2.2795853023360673;        // I_0(2)
inline constexpr double kI1_05 = 0.25789430539089632;      // I_1(0.5)
inline constexpr double kI5_23 = 0.020824734274240227;     // I_5(2.3)
inline constexpr double kI30_8 = 7.2530493139288474e-15;   // I_30(8)
inline constexpr double kI0_600_scaled = 0.016290146656305982;   // e^-600 I_0(600)
inline constexpr double kI40_600_scaled = 0.0042913853794460617;  // e^-600 I_40(600)
inline constexpr double kP1_0 = 0.30850832255367104;       // p_1(0)
inline constexpr double kP1_1 = 0.21526928924893766;       // p_1(1)
inline constexpr double kP1_5 = 0.0013297610941881578;     // p_1(5)
inline constexpr double kP01_0 = 0.82693855163432931;      // p_0.1(0)
inline constexpr double kP01_3 = 0.00013679660465418196;   // p_0.1(3)
inline constexpr double kP07_1 = 0.21850759238977552;      // p_0.7(1)
inline constexpr double kP07_2 = 0.070908811981521968;     // p_0.7(2)
inline constexpr double kQ1_00 = 0.21526928924893766;      // q_1(0,0) = p(0)-p(2)
inline constexpr double kQ1_21 = 0.2139395281547495;       // q_1(2,1)
inline constexpr double kQ2_35 = 0.11761910581996611;      // q_2(3,5)
inline constexpr double kSemigroupDiff1_00 = 0.09323903330473338;  // p_1(2)

// ---- square-root kernels (tests/oracles/sqrt_kernel_entries.py) -----------
// bilateral kernel c_r(j) of Delta_Z^r in closed form, and the exact
// half-lattice entries Delta_N^{1/2}(n,m) = c(n-m) - c(n+m+2)
inline constexpr double kCHalf_0 = 1.2732395447351627;     // 4/pi
inline constexpr double kCHalf_1 = -0.42441318157838756;
inline constexpr double kCHalf_2 = -0.084882636315677512;
inline constexpr double kCHalf_3 = -0.036378272706718934;
inline constexpr double kDNHalf_00 = 1.3581221810508402;   // 64/(15 pi)
inline constexpr double kDNHalf_01 = -0.38803490887166863;
inline constexpr double kDNHalf_11 = 1.2934496962388954;
inline constexpr double kKappaHalf_0 = 0.084882636315677512;  // 4/(15 pi)
inline constexpr double kKappaHalf_1 = 0.036378272706718934;
inline constexpr double kKappaHalf_2 = 0.020210151503732741;
inline constexpr double kKappaHalf_3 = 0.012861005502375381;
inline constexpr double kCm14_1 = 0.39344686633869874;     // c_{-1/4}(1)
inline constexpr double kCm14_2 = 0.28103347595621339;     // c_{-1/4}(2)

// ---- series convergence gaps (tests/oracles/series_tail_gap.py) -----------
// kappa_series(1/2, p, h_max=60) vs the exact limit: the partial sum carries
// an O(1/h_max) tail (entries decay ~ h^{-3/2-r}), so the gap floor at
// h_max = 60 sits near 2.6e-3 -- far above any 1e-6 cross-method demand.
inline constexpr double kKappaHalfPartial60_p0 = 0.08231297499275165;
inline constexpr double kSeriesGap60_p0 = 2.5696600e-3;   // +- 1e-9
inline constexpr double kSeriesGap60_p1 = 2.5590100e-3;
inline constexpr double kSeriesGap60_p31 = 2.9234300e-4;
inline constexpr double kSeriesGap60_p62 = 7.7717100e-5;

// ---- conjugate-operator rows (tests/oracles/commutator_rows.py) -----------
// central row of i[Delta, A]: {d=0: +1, d=+-2: -1/2} <-> w(l) = l(4-l)/2;
// central row of ad^2: {d=+-1: +1/2, d=+-3: -1/2} <-> l(4-l)(2-l)/2
inline constexpr double kCommRow_d0 = 1.0;
inline constexpr double kCommRow_d2 = -0.5;
inline constexpr double kComm2Row_d1 = 0.5;
inline constexpr double kComm2Row_d3 = -0.5;
inline constexpr double kHalfCorner_00 = 0.5;   // i[Delta_N, A](0,0)

// ---- half-line spectral prototypes (tests/oracles/mourre_lap_prop_prototype.py)
inline constexpr double kBoundStateE = -0.5;    // Delta_N - 2 P_0, exact
inline constexpr double kResonanceE = 0.00249;  // second low eigenvalue, coarse

// ---- symbol resolvent distances (exact grid oracle, grid = 4000) ----------
inline constexpr double kSymDist_05_055 = 0.031560641690191113;
inline constexpr double kSymDist_05_06 = 0.060259497165137677;

}  // namespace oracle
