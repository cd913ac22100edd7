#pragma once

// Test-only reference data and independent oracles.
//
// High-precision constants were computed with 50-digit decimal arithmetic
// (plain evaluation of the series and closed forms) and frozen here.  The
// golden tables are the published reference values the experiments are
// checked against.

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace oracles {

// --- frozen high-precision values -------------------------------------------

// partial sums of the kernel series at lambda = 1e-3 (N = 50 split points)
inline constexpr double kX1 = 18.65224459246477333292;     // q = 11..34
inline constexpr double kX2 = 0.004498144669411194206588;  // q = 35..50
inline constexpr double kX3 = -18.65674275053401605003;    // q = 1..10
inline constexpr double kX4 = 18.65674273713418452712;     // q = 11..50
inline constexpr double kK50 = -1.33998315229018941e-8;    // K_50(1e-3)
inline constexpr double kK12 = -16.7653366607739167;       // K_12(1e-3)
inline constexpr double kK2 = -2.85498386258431163;        // K_2(1e-3)
inline constexpr double kK2Half = 0.00719187265467440131;  // K_2(0.5)

inline constexpr double kLambdaStar2 = 0.04682032851512192;  // ln 4 / (3 pi^2)
inline constexpr std::array<std::pair<int, double>, 10> kLambdaStarEven{{
    {2, 0.04682032851512192},
    {4, 0.02917685991715097},
    {6, 0.02123581438948403},
    {8, 0.01670771335182873},
    {10, 0.01377780729371442},
    {12, 0.01172546489280952},
    {14, 0.01020712110180703},
    {16, 0.009038026310035481},
    {18, 0.008109926055380807},
    {20, 0.007355158271187853},
}};

inline constexpr double kPhiHalfAlphaTenth = 0.493307149075715144;  // phi(0.5), alpha=0.1
inline constexpr double kPhiMaxAlphaTenth = 0.6697823525955681;     // max phi, alpha=0.1
inline constexpr double kPhiMaxAlphaHundredth = 0.9439482981401191; // max phi, alpha=0.01

inline constexpr double kRhsN2A01T05 = 0.00432987940472669897;   // rhs(2, 0.1, 0.5)
inline constexpr double kRhsN2A01T10 = 0.00765138044998562263;   // rhs(2, 0.1, 1.0)
inline constexpr double kRhsN5A001T03 = 0.0731835580702418562;   // rhs(5, 0.01, 0.3)

// --- golden significance tables ----------------------------------------------

struct SigRow {
    int L;
    const char* m1;
    int f1;
    const char* m2;
    int f2;
    const char* msum;
    int fsum;
    int fs;
    const char* m3;
    int f3;
    const char* m4;
    int f4;
    const char* mdelta;
    int fdelta;
    int fr;
};

// Published reference rows for the two worked summation examples.  The single
// deviation of this implementation is flagged with published_m2_l8 below.
inline const std::vector<SigRow>& sig_rows() {
    static const std::vector<SigRow> rows = {
        {8, "18652239", 6, "44981421", 6, "18656737", 6, 5,
         "18656743", 7, "18656737", 6, "00000006", 0, 0},
        {9, "186522441", 8, "449814458", 7, "186567422", 8, 7,
         "186567428", 8, "186567424", 8, "000000004", 0, 0},
        {10, "1865224455", 9, "4498144699", 8, "1865674269", 8, 8,
         "1865674274", 9, "1865674268", 8, "0000000006", 0, 0},
        {11, "18652244592", 11, "44981446726", 8, "18656742737", 11, 10,
         "18656742750", 11, "18656742736", 10, "00000000014", 1, 0},
        {12, "186522445926", 11, "449814466957", 10, "186567427373", 11, 10,
         "186567427505", 12, "186567427372", 11, "000000000133", 3, 1},
        {13, "1865224459248", 12, "4498144669376", 10, "1865674273715", 12, 11,
         "1865674275054", 12, "1865674273715", 12, "0000000001339", 4, 2},
        {14, "18652244592468", 13, "44981446694089", 11, "18656742737137", 13, 12,
         "18656742750534", 14, "18656742737138", 13, "00000000013396", 4, 3},
    };
    return rows;
}

// Faithful per-operation decimal emulation yields ...20 where the published
// row prints ...21; every nearest-rounding pipeline reproduces ...20.
inline constexpr const char* kFaithfulM2L8 = "44981420";

// --- golden convergence tables -----------------------------------------------

struct NormCell {
    int truncation;
    int steps;           // n, h = 1/n
    bool is_midpoint;
    bool flagged;        // printed "*"
    double norm;         // valid when !flagged
    double gamma;        // printed order entry (paired with the next halving)
};

inline const std::vector<NormCell>& table3() {
    static const std::vector<NormCell> cells = {
        {2, 256, true, false, 0.005001, 2.009},   {2, 512, true, false, 0.001242, 2.002},
        {2, 1024, true, false, 0.000310, 2.000},  {2, 2048, true, false, 0.000078, 1.981},
        {2, 256, false, false, 0.000499, 1.996},  {2, 512, false, false, 0.000125, 1.998},
        {2, 1024, false, false, 0.000031, 1.999}, {2, 2048, false, false, 0.000008, 1.999},
        {3, 256, true, false, 0.003815, 2.002},   {3, 512, true, false, 0.000952, 2.000},
        {3, 1024, true, false, 0.000238, 2.000},  {3, 2048, true, false, 0.000059, 1.989},
        {3, 256, false, false, 0.001171, 1.994},  {3, 512, false, false, 0.000294, 1.998},
        {3, 1024, false, false, 0.000074, 1.999}, {3, 2048, false, false, 0.000018, 2.001},
        {4, 256, true, false, 0.065009, 2.107},   {4, 512, true, false, 0.015090, 2.025},
        {4, 1024, true, false, 0.003707, 2.006},  {4, 2048, true, false, 0.000923, 1.999},
        {4, 256, false, false, 0.002056, 1.987},  {4, 512, false, false, 0.000519, 1.996},
        {4, 1024, false, false, 0.000129, 1.999}, {4, 2048, false, false, 0.000032, 2.000},
        {5, 256, true, false, 0.025682, 2.010},   {5, 512, true, false, 0.006377, 2.002},
        {5, 1024, true, false, 0.001591, 2.000},  {5, 2048, true, false, 0.000398, 1.996},
        {5, 256, false, false, 0.003130, 1.973},  {5, 512, false, false, 0.000797, 1.993},
        {5, 1024, false, false, 0.000200, 1.998}, {5, 2048, false, false, 0.000050, 2.000},
        {10, 256, true, true, 0, 0},              {10, 512, true, true, 0, 0},
        {10, 1024, true, false, 0.137360, 2.212}, {10, 2048, true, false, 0.029650, 2.047},
        {10, 256, false, false, 0.009531, 1.744}, {10, 512, false, false, 0.002845, 1.922},
        {10, 1024, false, false, 0.000751, 1.979},{10, 2048, false, false, 0.000190, 1.995},
        {15, 256, true, true, 0, 0},              {15, 512, true, false, 0.485248, 2.149},
        {15, 1024, true, false, 0.109395, 2.033}, {15, 2048, true, false, 0.026724, 2.008},
        {15, 256, false, false, 0.013378, 1.394}, {15, 512, false, false, 0.005092, 1.719},
        {15, 1024, false, false, 0.001547, 1.910},{15, 2048, false, false, 0.000411, 1.957},
    };
    return cells;
}

inline const std::vector<NormCell>& table4() {
    static const std::vector<NormCell> cells = {
        {2, 256, true, false, 0.006113, 2.009},   {2, 512, true, false, 0.001518, 2.002},
        {2, 1024, true, false, 0.000379, 1.999},  {2, 2048, true, false, 0.000095, 1.985},
        {2, 256, false, false, 0.000402, 1.995},  {2, 512, false, false, 0.000101, 1.998},
        {2, 1024, false, false, 0.000025, 1.992}, {2, 2048, false, false, 0.000006, 1.927},
        {3, 256, true, false, 0.007855, 2.004},   {3, 512, true, false, 0.001958, 2.001},
        {3, 1024, true, false, 0.000489, 2.000},  {3, 2048, true, false, 0.000122, 1.998},
        {3, 256, false, false, 0.006159, 1.875},  {3, 512, false, false, 0.001679, 1.939},
        {3, 1024, false, false, 0.000438, 1.970}, {3, 2048, false, false, 0.000112, 1.985},
        {4, 256, true, false, 0.080125, 2.117},   {4, 512, true, false, 0.018474, 2.027},
        {4, 1024, true, false, 0.004532, 2.006},  {4, 2048, true, false, 0.001128, 2.000},
        {4, 256, false, false, 0.014295, 1.859},  {4, 512, false, false, 0.003940, 1.934},
        {4, 1024, false, false, 0.001031, 1.968}, {4, 2048, false, false, 0.000264, 1.984},
        {5, 256, true, false, 0.051629, 2.022},   {5, 512, true, false, 0.012716, 2.006},
        {5, 1024, true, false, 0.003167, 2.001},  {5, 2048, true, false, 0.000791, 2.000},
        {5, 256, false, false, 0.024140, 1.840},  {5, 512, false, false, 0.006744, 1.928},
        {5, 1024, false, false, 0.001772, 1.966}, {5, 2048, false, false, 0.000453, 1.985},
        {10, 256, true, true, 0, 0},              {10, 512, true, true, 0, 0},
        {10, 1024, true, false, 0.170835, 2.232}, {10, 2048, true, false, 0.036370, 2.052},
        {10, 256, false, false, 0.081670, 1.584}, {10, 512, false, false, 0.027232, 1.849},
        {10, 1024, false, false, 0.007556, 1.945},{10, 2048, false, false, 0.001962, 1.978},
        {15, 256, true, true, 0, 0},              {15, 512, true, true, 0, 0},
        {15, 1024, true, false, 0.2227532, 2.073},{15, 2048, true, false, 0.0529318, 2.018},
        {15, 256, false, false, 0.114747, 1.214}, {15, 512, false, false, 0.049456, 1.637},
        {15, 1024, false, false, 0.015899, 1.874},{15, 2048, false, false, 0.004338, 1.959},
    };
    return cells;
}

// published perturbation-experiment norms (n = 27, N = 2, alpha = 0.1, delta = 1e-3)
inline constexpr double kPertMidExact = 0.0795;
inline constexpr double kPertProdExact = 0.0424;
inline constexpr double kPertMidNoisy = 0.0638;
inline constexpr double kPertProdNoisy = 0.0609;
inline constexpr double kPertMinNoisy = 0.0582;

// --- adaptive quadrature (independent of the closed-form path) ----------------

namespace detail {

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const std::function<double(double)>& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    if (a == b) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = detail::simpson(f, a, b, fa, fm, fb);
    return detail::adapt(f, a, b, fa, fm, fb, whole, tol, 52);
}

}  // namespace oracles
