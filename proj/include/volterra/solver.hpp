#pragma once

// Mesh analogues of the convolution equation: the midpoint rule and the
// product integration rule both reduce to lower-triangular Toeplitz systems
// solved by forward substitution.  Error records carry the C_h norm against
// the reference solution and the overflow flag used by the result tables.

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "volterra/forward.hpp"
#include "volterra/kernel.hpp"

namespace volterra::solver {

enum class Scheme { midpoint, product };

inline const char* scheme_name(Scheme s) {
    return s == Scheme::midpoint ? "midpoint" : "product";
}

struct StepRejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct WeightSequence {
    Scheme scheme = Scheme::midpoint;
    kernel::KernelSpec spec;
    double step = 0;
    std::vector<double> lag;  // w_m, m = 0..n-1
};

struct ErrorRecord {
    std::vector<double> pointwise;  // |phi_ref - phi_h| at midpoints
    double norm = 0;                // max over the mesh
    bool overflow = false;          // norm exceeds max |phi_ref| on [0,1]
};

struct MeshSolution {
    forward::Mesh mesh;
    Scheme scheme = Scheme::midpoint;
    kernel::KernelSpec spec;
    std::vector<double> values;  // phi_{i-1/2}, i = 1..n
    std::optional<ErrorRecord> error;
};

// Midpoint lag weights sample the kernel at panel midpoints; product lag
// weights integrate it exactly over one panel per term, in the cancellation-
// free form e^(-b m h) (1 - e^(-b h))/b.
inline WeightSequence build_weights(const kernel::KernelSpec& spec, Scheme scheme,
                                    const forward::Mesh& mesh) {
    kernel::check_spec(spec);
    forward::check_mesh(mesh);
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    const int n = mesh.count;
    const double h = mesh.step;

    if (scheme == Scheme::midpoint) {
        if (const auto bound = kernel::max_step(spec); bound && h >= *bound) {
            throw StepRejected("solver: step " + std::to_string(h) +
                               " rejected, midpoint rule needs h < " + std::to_string(*bound) +
                               " (twice the smallest kernel root)");
        }
    }

    WeightSequence w;
    w.scheme = scheme;
    w.spec = spec;
    w.step = h;
    w.lag.assign(n, 0.0);
    for (int q = 1; q <= spec.truncation; ++q) {
        const double b = pi2 * q * q;
        const double sgn = (q % 2 == 0) ? -1.0 : 1.0;
        const double q2 = static_cast<double>(q) * q;
        if (scheme == Scheme::midpoint) {
            for (int m = 0; m < n; ++m)
                w.lag[m] += sgn * q2 * h * std::exp(-b * (m + 0.5) * h);
        } else {
            const double panel = -std::expm1(-b * h) / b;
            for (int m = 0; m < n; ++m)
                w.lag[m] += sgn * q2 * std::exp(-b * m * h) * panel;
        }
    }

    double wmax = 0;
    for (double v : w.lag) wmax = std::max(wmax, std::fabs(v));
    if (std::fabs(w.lag[0]) < 1e-12 * wmax)
        throw StepRejected("solver: leading weight vanishes, step inadmissible");
    return w;
}

// Forward substitution for the lower-triangular Toeplitz system
//   sum_{m=0}^{i-1} w_m phi_{i-m-1/2} = y_i.
// Inner products accumulate in extended precision; every row divides by w_0.
inline MeshSolution solve_triangular_convolution(const WeightSequence& w,
                                                 const forward::RhsSamples& y) {
    const int n = static_cast<int>(w.lag.size());
    if (n != y.mesh.count || std::fabs(w.step - y.mesh.step) > 1e-15 * y.mesh.step)
        throw std::invalid_argument("solver: weight and sample meshes differ");
    if (w.lag[0] == 0) throw StepRejected("solver: leading weight is zero");
    MeshSolution sol;
    sol.mesh = y.mesh;
    sol.scheme = w.scheme;
    sol.spec = w.spec;
    sol.values.resize(n);
    for (int i = 1; i <= n; ++i) {
        long double acc = y.values[i - 1];
        for (int m = 1; m < i; ++m)
            acc -= static_cast<long double>(w.lag[m]) * sol.values[i - m - 1];
        sol.values[i - 1] = static_cast<double>(acc / w.lag[0]);
    }
    return sol;
}

// Convolution of the lag weights with mesh values: the forward application
// used by residual checks and synthetic right-hand sides.
inline std::vector<double> apply_triangular_convolution(const WeightSequence& w,
                                                        const std::vector<double>& phi) {
    const int n = static_cast<int>(w.lag.size());
    if (static_cast<int>(phi.size()) != n)
        throw std::invalid_argument("solver: value count does not match weights");
    std::vector<double> y(n);
    for (int i = 1; i <= n; ++i) {
        long double acc = 0;
        for (int m = 0; m < i; ++m)
            acc += static_cast<long double>(w.lag[m]) * phi[i - m - 1];
        y[i - 1] = static_cast<double>(acc);
    }
    return y;
}

inline ErrorRecord error_norm(const MeshSolution& sol, double alpha) {
    ErrorRecord rec;
    rec.pointwise.resize(sol.values.size());
    for (int i = 1; i <= sol.mesh.count; ++i) {
        rec.pointwise[i - 1] =
            std::fabs(forward::reference_phi(sol.mesh.midpoint(i), alpha) - sol.values[i - 1]);
        rec.norm = std::max(rec.norm, rec.pointwise[i - 1]);
    }
    rec.overflow = rec.norm > forward::reference_phi_max(alpha);
    return rec;
}

inline MeshSolution solve_with(const kernel::KernelSpec& spec, Scheme scheme, double alpha,
                               const forward::Mesh& mesh) {
    const WeightSequence w = build_weights(spec, scheme, mesh);
    const forward::RhsSamples y = forward::sample_rhs(spec, alpha, mesh);
    MeshSolution sol = solve_triangular_convolution(w, y);
    sol.error = error_norm(sol, alpha);
    return sol;
}

inline MeshSolution solve_midpoint(const kernel::KernelSpec& spec, double alpha,
                                   const forward::Mesh& mesh) {
    return solve_with(spec, Scheme::midpoint, alpha, mesh);
}

inline MeshSolution solve_product(const kernel::KernelSpec& spec, double alpha,
                                  const forward::Mesh& mesh) {
    return solve_with(spec, Scheme::product, alpha, mesh);
}

// log2 of the coarse/fine error ratio under step halving.
inline double convergence_order(double norm_h1, double norm_h2) {
    if (!(norm_h1 > 0) || !(norm_h2 > 0) || !std::isfinite(norm_h1) || !std::isfinite(norm_h2))
        throw std::domain_error("solver: convergence order needs positive finite norms");
    return std::log2(norm_h1 / norm_h2);
}

// Overflow-flagged records have no defined order (tables print "---").
inline std::optional<double> convergence_order(const ErrorRecord& coarse,
                                               const ErrorRecord& fine) {
    if (coarse.overflow || fine.overflow) return std::nullopt;
    if (!(coarse.norm > 0) || !(fine.norm > 0)) return std::nullopt;
    return convergence_order(coarse.norm, fine.norm);
}

}  // namespace volterra::solver
