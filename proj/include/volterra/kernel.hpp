#pragma once

// Truncated heat-conduction kernel: the alternating exponential series
//   K_N(lambda) = sum_{q=1..N} (-1)^(q+1) q^2 exp(-pi^2 q^2 lambda),
// its partial sums, a digit-tracked decimal evaluation, and the smallest
// positive root lambda* that bounds admissible mesh steps from above.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "volterra/sigdec.hpp"

namespace volterra::kernel {

struct KernelSpec {
    int truncation = 1;  // N >= 1; terms are summed in ascending q
};

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void check_spec(const KernelSpec& spec) {
    if (spec.truncation < 1) throw std::invalid_argument("kernel: truncation order must be >= 1");
}

// Plain ascending sum at working precision.  Compensated summation stays off
// so the cancellation behaviour of the series remains observable.
inline double partial_sum(int q_lo, int q_hi, double lambda) {
    if (q_lo < 1 || q_lo > q_hi) throw std::invalid_argument("kernel: bad summation range");
    if (lambda < 0) throw std::domain_error("kernel: negative time lag");
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    double sum = 0.0;
    for (int q = q_lo; q <= q_hi; ++q) {
        const double term = static_cast<double>(q) * q * std::exp(-pi2 * q * q * lambda);
        sum += (q % 2 == 0) ? -term : term;
    }
    return sum;
}

inline double eval(const KernelSpec& spec, double lambda) {
    check_spec(spec);
    return partial_sum(1, spec.truncation, lambda);
}

// K_N(0) = (-1)^(N+1) N(N+1)/2, exact in integer arithmetic.
inline long long value_at_zero(const KernelSpec& spec) {
    check_spec(spec);
    const long long n = spec.truncation;
    const long long mag = n * (n + 1) / 2;
    return (n % 2 == 0) ? -mag : mag;
}

// --- digit-tracked decimal evaluation ---------------------------------------

struct TraceEntry {
    int q = 0;
    sigdec::SigDecimal partial;  // running sum after adding term q
    int valid = 0;               // f measured against the shadow sum
};

struct KernelTrace {
    std::vector<TraceEntry> entries;
};

// One series term evaluated in L-digit decimal arithmetic: pi is rounded to L
// digits, squared and re-rounded, the exponent argument and the q^2 product
// are each rounded once, and exp is correctly rounded at L digits.
inline sigdec::Tracked decimal_term(int q, const sigdec::SigDecimal& pi2_l,
                                    const sigdec::SigDecimal& lambda_l,
                                    const sigdec::Shadow& lambda, int digits,
                                    const sigdec::ShadowContext& ctx) {
    using namespace sigdec;
    const std::int64_t q2 = static_cast<std::int64_t>(q) * q;
    SigDecimal arg = mul_int(pi2_l, q2);
    arg = mul(arg, lambda_l);
    const SigDecimal ex = from_shadow(exp(-to_shadow(arg)), digits);
    SigDecimal term = mul_int(ex, q2);
    Shadow shadow_term = Shadow(q2) * exp(-shadow_pi() * shadow_pi() * q2 * lambda);
    if (q % 2 == 0) {
        term = negate(term);
        shadow_term = -shadow_term;
    }
    return Tracked{term, ctx.round(shadow_term)};
}

// L-digit partial sum over [q_lo, q_hi] with its shadow.
inline sigdec::Tracked partial_sum_decimal(int q_lo, int q_hi, const sigdec::Shadow& lambda,
                                           int digits, const sigdec::ShadowContext& ctx) {
    using namespace sigdec;
    if (q_lo < 1 || q_lo > q_hi) throw std::invalid_argument("kernel: bad summation range");
    const SigDecimal pi_l = from_shadow(shadow_pi(), digits);
    const SigDecimal pi2_l = mul(pi_l, pi_l);
    const SigDecimal lambda_l = from_shadow(lambda, digits);
    Tracked sum{zero(digits), Shadow(0)};
    for (int q = q_lo; q <= q_hi; ++q)
        sum = add(sum, decimal_term(q, pi2_l, lambda_l, lambda, digits, ctx), ctx);
    return sum;
}

inline KernelTrace eval_traced(const KernelSpec& spec, const sigdec::Shadow& lambda,
                               int digits) {
    using namespace sigdec;
    check_spec(spec);
    const ShadowContext ctx(digits);
    const SigDecimal pi_l = from_shadow(shadow_pi(), digits);
    const SigDecimal pi2_l = mul(pi_l, pi_l);
    const SigDecimal lambda_l = from_shadow(lambda, digits);
    KernelTrace trace;
    trace.entries.reserve(spec.truncation);
    Tracked sum{zero(digits), Shadow(0)};
    for (int q = 1; q <= spec.truncation; ++q) {
        sum = add(sum, decimal_term(q, pi2_l, lambda_l, lambda, digits, ctx), ctx);
        trace.entries.push_back(TraceEntry{q, sum.value, sum.value.valid});
    }
    return trace;
}

// --- roots and the induced mesh-step bound ----------------------------------

struct Bracket {
    double lo = 0;
    double hi = 0;
};

// First sign change of K_N on a geometric grid over [lo, hi].
inline std::optional<Bracket> scan_bracket(const KernelSpec& spec, double lo = 1e-6,
                                           double hi = 1.0, double ratio = 1.1) {
    check_spec(spec);
    if (!(lo > 0) || !(hi > lo) || !(ratio > 1)) throw std::invalid_argument("kernel: bad scan grid");
    double a = lo;
    double ka = eval(spec, a);
    if (ka == 0) return Bracket{a, a};
    while (a < hi) {
        const double b = std::min(a * ratio, hi);
        const double kb = eval(spec, b);
        if (ka * kb <= 0) return Bracket{a, b};
        a = b;
        ka = kb;
        if (b >= hi) break;
    }
    return std::nullopt;
}

// Bisection to relative width `tol`; an exact zero hit returns immediately.
inline double find_root(const KernelSpec& spec, Bracket bracket, double tol = 1e-12) {
    check_spec(spec);
    if (spec.truncation == 1)
        throw NoRootError("kernel: K_1 is strictly positive, no root exists");
    double a = bracket.lo, b = bracket.hi;
    double ka = eval(spec, a);
    double kb = eval(spec, b);
    if (ka == 0) return a;
    if (kb == 0) return b;
    if (ka * kb > 0) throw BracketError("kernel: no sign change inside bracket");
    while (b - a > tol * a) {
        const double m = 0.5 * (a + b);
        const double km = eval(spec, m);
        if (km == 0) return m;
        if (ka * km < 0) {
            b = m;
            kb = km;
        } else {
            a = m;
            ka = km;
        }
    }
    return 0.5 * (a + b);
}

// Smallest positive root on the scan grid, if any.  Odd truncation orders
// give a strictly positive kernel, so no root exists for them.
inline std::optional<double> smallest_root(const KernelSpec& spec, double tol = 1e-12) {
    check_spec(spec);
    if (spec.truncation == 1) return std::nullopt;
    const auto bracket = scan_bracket(spec);
    if (!bracket) return std::nullopt;
    return find_root(spec, *bracket, tol);
}

// h_max = 2 lambda*_min; steps below it keep the first-node kernel value
// K_N(h/2) away from zero.  Unbounded (nullopt) when the kernel never
// vanishes.
inline std::optional<double> max_step(const KernelSpec& spec) {
    const auto root = smallest_root(spec);
    if (!root) return std::nullopt;
    return 2.0 * *root;
}

}  // namespace volterra::kernel
