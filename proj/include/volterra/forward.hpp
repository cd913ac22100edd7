#pragma once

// Exact test problem: the reference solution phi(t) = (1-e^(-t/a))/(1-e^(-1/a)) - t,
// the closed-form right-hand side of the convolution equation under it, mesh
// sampling, and the saw-tooth data perturbation.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "volterra/kernel.hpp"

namespace volterra::forward {

struct ReferenceSolution {
    double alpha = 0.1;  // shape parameter, > 0
};

inline double reference_phi(double t, double alpha) {
    if (alpha <= 0) throw std::invalid_argument("forward: alpha must be positive");
    return (1.0 - std::exp(-t / alpha)) / (1.0 - std::exp(-1.0 / alpha)) - t;
}

// The reference solution is concave with phi(0) = phi(1) = 0, so its maximum
// absolute value on [0,1] sits at the single interior critical point.
inline double reference_phi_max(double alpha) {
    if (alpha <= 0) throw std::invalid_argument("forward: alpha must be positive");
    const double tstar = -alpha * std::log(alpha * (1.0 - std::exp(-1.0 / alpha)));
    if (tstar <= 0 || tstar >= 1) return 0.0;
    return std::fabs(reference_phi(tstar, alpha));
}

struct Mesh {
    double step = 0;  // h > 0
    int count = 0;    // n >= 1 nodes; horizon T = n h

    static Mesh unit(int n) {
        if (n < 1) throw std::invalid_argument("forward: node count must be >= 1");
        return Mesh{1.0 / n, n};
    }

    double horizon() const { return step * count; }
    double node(int i) const { return i * step; }              // t_i, i = 1..n
    double midpoint(int i) const { return (i - 0.5) * step; }  // t_{i-1/2}
};

inline void check_mesh(const Mesh& mesh) {
    if (!(mesh.step > 0) || mesh.count < 1) throw std::invalid_argument("forward: bad mesh");
}

enum class Provenance { exact, perturbed };

struct RhsSamples {
    Mesh mesh;
    std::vector<double> values;  // y_i at nodes t_i, i = 1..n
    Provenance provenance = Provenance::exact;
    double delta = 0.0;
};

// Closed form of int_0^t K_N(t-s) phi(s) ds assembled per series term from
//   A = int e^(-b(t-s)) ds           = (1 - e^(-bt))/b
//   B = int e^(-b(t-s)) e^(-s/a) ds  = (e^(-t/a) - e^(-bt))/(b - 1/a)
//   C = int s e^(-b(t-s)) ds         = t/b - (1 - e^(-bt))/b^2
// with the confluent limit B -> t e^(-bt) when b approaches 1/a.
inline double exact_rhs(const kernel::KernelSpec& spec, double alpha, double t) {
    kernel::check_spec(spec);
    if (alpha <= 0) throw std::invalid_argument("forward: alpha must be positive");
    if (t < 0) throw std::domain_error("forward: negative time");
    if (t == 0) return 0.0;
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const double inv_a = 1.0 / alpha;
    const double c1 = 1.0 / (1.0 - std::exp(-inv_a));
    double y = 0.0;
    for (int q = 1; q <= spec.truncation; ++q) {
        const double b = pi2 * q * q;
        const double ebt = std::exp(-b * t);
        const double a_part = -std::expm1(-b * t) / b;
        double b_part;
        if (std::fabs(b - inv_a) < 1e-9 * b) {
            b_part = t * ebt;
        } else {
            b_part = (std::exp(-t * inv_a) - ebt) / (b - inv_a);
        }
        const double c_part = t / b - -std::expm1(-b * t) / (b * b);
        const double term = q * q * (c1 * (a_part - b_part) - c_part);
        y += (q % 2 == 0) ? -term : term;
    }
    return y;
}

inline RhsSamples sample_rhs(const kernel::KernelSpec& spec, double alpha, const Mesh& mesh) {
    check_mesh(mesh);
    RhsSamples out;
    out.mesh = mesh;
    out.values.resize(mesh.count);
    for (int i = 1; i <= mesh.count; ++i)
        out.values[i - 1] = exact_rhs(spec, alpha, mesh.node(i));
    return out;
}

// y_i -> y_i + (-1)^i delta, i = 1..n.
inline RhsSamples perturb_sawtooth(const RhsSamples& samples, double delta) {
    if (delta < 0) throw std::invalid_argument("forward: negative noise amplitude");
    RhsSamples out = samples;
    for (int i = 1; i <= out.mesh.count; ++i)
        out.values[i - 1] += (i % 2 == 0) ? delta : -delta;
    out.provenance = Provenance::perturbed;
    out.delta = delta;
    return out;
}

}  // namespace volterra::forward
