#pragma once

// Experiment runner: convergence tables over (N, alpha, h) grids, the
// significance-arithmetic tables and per-term kernel trace, the saw-tooth
// perturbation experiment, and the Fibonacci step search.  Everything emits
// deterministic CSV; cell failures are recorded inline, never thrown past
// the table.

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "volterra/forward.hpp"
#include "volterra/kernel.hpp"
#include "volterra/sigdec.hpp"
#include "volterra/solver.hpp"

namespace volterra::lab {

struct ExperimentConfig {
    std::vector<int> truncation_orders{2, 3, 4, 5, 10, 15};
    std::vector<double> alphas{0.1, 0.01};
    std::vector<int> step_counts{256, 512, 1024, 2048};  // n values, h = 1/n
    double delta = 1e-3;
    int digits_lo = 8;
    int digits_hi = 14;
    int perturb_nodes = 27;
    unsigned seed = 0;  // reserved for future randomized experiments
};

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

inline std::string fmt_norm(double v) { return fmt("%.6f", v); }
inline std::string fmt_gamma(const std::optional<double>& g) {
    return g ? fmt("%.3f", *g) : std::string("---");
}
inline std::string fmt_short(double v) { return fmt("%g", v); }

}  // namespace detail

// --- convergence tables ------------------------------------------------------

struct TableCell {
    solver::Scheme scheme = solver::Scheme::midpoint;
    int truncation = 0;
    double alpha = 0;
    int steps = 0;  // n, so h = 1/n
    bool rejected = false;
    double norm = 0;
    bool overflow = false;
    std::optional<double> gamma;  // vs the next halving level
};

struct ConvergenceTable {
    std::vector<TableCell> cells;
};

namespace detail {

struct LadderPoint {
    bool rejected = false;
    double norm = 0;
    bool overflow = false;
};

inline LadderPoint ladder_point(const kernel::KernelSpec& spec, solver::Scheme scheme,
                                double alpha, int n) {
    LadderPoint p;
    try {
        const auto sol = solver::solve_with(spec, scheme, alpha, forward::Mesh::unit(n));
        p.norm = sol.error->norm;
        p.overflow = sol.error->overflow;
    } catch (const solver::StepRejected&) {
        p.rejected = true;
    }
    return p;
}

}  // namespace detail

// One (N, alpha, scheme) ladder plus one extra halving level so the finest
// row still gets its order estimate.
inline ConvergenceTable run_convergence_table(const ExperimentConfig& config,
                                              bool parallel = false) {
    struct Job {
        int truncation;
        double alpha;
        solver::Scheme scheme;
        std::vector<int> ladder;
    };
    std::vector<Job> jobs;
    for (int n_trunc : config.truncation_orders)
        for (double alpha : config.alphas)
            for (auto scheme : {solver::Scheme::midpoint, solver::Scheme::product}) {
                Job j{n_trunc, alpha, scheme, config.step_counts};
                if (!j.ladder.empty()) j.ladder.push_back(2 * j.ladder.back());
                jobs.push_back(std::move(j));
            }

    const auto run_job = [](const Job& job) {
        std::vector<detail::LadderPoint> pts(job.ladder.size());
        for (size_t i = 0; i < job.ladder.size(); ++i)
            pts[i] = detail::ladder_point(kernel::KernelSpec{job.truncation}, job.scheme,
                                          job.alpha, job.ladder[i]);
        return pts;
    };

    std::vector<std::vector<detail::LadderPoint>> results(jobs.size());
    if (parallel) {
        std::vector<std::future<std::vector<detail::LadderPoint>>> futures;
        futures.reserve(jobs.size());
        for (const Job& job : jobs)
            futures.push_back(std::async(std::launch::async, run_job, std::cref(job)));
        for (size_t i = 0; i < jobs.size(); ++i) results[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < jobs.size(); ++i) results[i] = run_job(jobs[i]);
    }

    // rows ordered by (N, alpha, h, scheme): the two schemes interleave
    // within each ladder level, deterministically regardless of scheduling
    ConvergenceTable table;
    const size_t rows = config.step_counts.size();
    for (size_t j = 0; j + 1 < jobs.size(); j += 2) {  // jobs come in scheme pairs
        for (size_t i = 0; i < rows; ++i) {
            for (size_t s = 0; s < 2; ++s) {
                const Job& job = jobs[j + s];
                const auto& pts = results[j + s];
                TableCell cell;
                cell.scheme = job.scheme;
                cell.truncation = job.truncation;
                cell.alpha = job.alpha;
                cell.steps = job.ladder[i];
                cell.rejected = pts[i].rejected;
                cell.norm = pts[i].norm;
                cell.overflow = pts[i].overflow;
                if (!pts[i].rejected && i + 1 < pts.size() &&
                    job.ladder[i + 1] == 2 * job.ladder[i] && !pts[i + 1].rejected) {
                    solver::ErrorRecord coarse, fine;
                    coarse.norm = pts[i].norm;
                    coarse.overflow = pts[i].overflow;
                    fine.norm = pts[i + 1].norm;
                    fine.overflow = pts[i + 1].overflow;
                    cell.gamma = solver::convergence_order(coarse, fine);
                }
                table.cells.push_back(cell);
            }
        }
    }
    return table;
}

inline std::string to_csv(const ConvergenceTable& table) {
    std::string out = "scheme,N,alpha,h,norm,gamma,overflow\n";
    for (const auto& c : table.cells) {
        out += solver::scheme_name(c.scheme);
        out += ',' + std::to_string(c.truncation);
        out += ',' + detail::fmt_short(c.alpha);
        out += ",1/" + std::to_string(c.steps);
        out += ',';
        out += c.rejected ? "rejected" : detail::fmt_norm(c.norm);
        out += ',';
        out += c.rejected ? "---" : detail::fmt_gamma(c.gamma);
        out += ',';
        if (!c.rejected && c.overflow) out += '*';
        out += '\n';
    }
    return out;
}

// --- significance tables ------------------------------------------------------

struct SigTableRow {
    int digits = 8;
    sigdec::SigDecimal x1, x2, x_sum;     // split sums and their rounded total
    sigdec::SigDecimal x3, x4, x_delta;   // head/tail sums and |x4| - |x3|
    int minorant_sum = 0;                 // lower bound on valid digits of the sum
    int minorant_diff = 0;                // lower bound after the cancellation
};

// The two worked summation examples at lambda = 1e-3, N = 50: x1 + x2 with
// differing exponents, |x4| - |x3| with matching leading digits.
inline std::vector<SigTableRow> run_sig_tables(int digits_lo, int digits_hi) {
    using namespace sigdec;
    if (digits_lo < 1 || digits_hi < digits_lo)
        throw std::invalid_argument("lab: bad digit range");
    const Shadow lambda = Shadow(1) / 1000;
    std::vector<SigTableRow> rows;
    for (int L = digits_lo; L <= digits_hi; ++L) {
        const ShadowContext ctx(L);
        SigTableRow row;
        row.digits = L;
        const Tracked x1 = kernel::partial_sum_decimal(11, 34, lambda, L, ctx);
        const Tracked x2 = kernel::partial_sum_decimal(35, 50, lambda, L, ctx);
        const Tracked xs = add(x1, x2, ctx);
        const Tracked x3 = kernel::partial_sum_decimal(1, 10, lambda, L, ctx);
        const Tracked x4 = kernel::partial_sum_decimal(11, 50, lambda, L, ctx);
        Tracked abs3{x3.value, x3.shadow}, abs4{x4.value, x4.shadow};
        abs3.value.sign = std::abs(abs3.value.sign);
        abs4.value.sign = std::abs(abs4.value.sign);
        abs3.shadow = abs(abs3.shadow);
        abs4.shadow = abs(abs4.shadow);
        const Tracked xd = sub(abs4, abs3, ctx);
        row.x1 = x1.value;
        row.x2 = x2.value;
        row.x_sum = xs.value;
        row.x3 = x3.value;
        row.x4 = x4.value;
        row.x_delta = xd.value;
        row.minorant_sum = estimate_f_sum(x1.value.exponent, x1.value.valid,
                                          x2.value.exponent, x2.value.valid);
        row.minorant_diff = estimate_f_diff(x3.value.significand, x3.value.valid,
                                            x4.value.significand, x4.value.valid, L);
        rows.push_back(row);
    }
    return rows;
}

inline std::string sig_digits(const sigdec::SigDecimal& x) {
    std::string m = std::to_string(x.significand);
    m.insert(m.begin(), x.digits - m.size(), '0');
    return m;
}

inline std::string to_csv(const std::vector<SigTableRow>& rows) {
    std::string out = "L,M1,f1,M2,f2,Msum,fsum,f_s,M3,f3,M4,f4,Mdelta,fdelta,f_r\n";
    for (const auto& r : rows) {
        const int p = std::max(r.x3.exponent, r.x4.exponent);
        out += std::to_string(r.digits);
        out += ',' + sig_digits(r.x1) + ',' + std::to_string(r.x1.valid);
        out += ',' + sig_digits(r.x2) + ',' + std::to_string(r.x2.valid);
        out += ',' + sig_digits(r.x_sum) + ',' + std::to_string(r.x_sum.valid);
        out += ',' + std::to_string(r.minorant_sum);
        out += ',' + sig_digits(r.x3) + ',' + std::to_string(r.x3.valid);
        out += ',' + sig_digits(r.x4) + ',' + std::to_string(r.x4.valid);
        out += ',' + sigdec::render_digits_at(r.x_delta, p) + ',' + std::to_string(r.x_delta.valid);
        out += ',' + std::to_string(r.minorant_diff);
        out += '\n';
    }
    return out;
}

inline std::string to_csv(const kernel::KernelTrace& trace) {
    std::string out = "q,partial,f\n";
    for (const auto& e : trace.entries) {
        out += std::to_string(e.q);
        out += ',' + sigdec::to_string(e.partial);
        out += ',' + std::to_string(e.valid);
        out += '\n';
    }
    return out;
}

// --- sample and solution dumps ---------------------------------------------------

inline std::string to_csv(const forward::RhsSamples& samples) {
    std::string out = "i,t_i,y_i,provenance\n";
    const bool exact = samples.provenance == forward::Provenance::exact;
    for (int i = 1; i <= samples.mesh.count; ++i) {
        out += std::to_string(i);
        out += ',' + detail::fmt("%.8f", samples.mesh.node(i));
        out += ',' + detail::fmt("%.12e", samples.values[i - 1]);
        out += ',';
        out += exact ? "exact" : "perturbed(" + detail::fmt_short(samples.delta) + ")";
        out += '\n';
    }
    return out;
}

inline std::string to_csv(const solver::MeshSolution& sol, double alpha) {
    std::string out = "i,t_mid,phi_ref,phi_h,abs_err\n";
    for (int i = 1; i <= sol.mesh.count; ++i) {
        const double t = sol.mesh.midpoint(i);
        const double ref = forward::reference_phi(t, alpha);
        out += std::to_string(i);
        out += ',' + detail::fmt("%.8f", t);
        out += ',' + detail::fmt("%.8f", ref);
        out += ',' + detail::fmt("%.8f", sol.values[i - 1]);
        out += ',' + detail::fmt("%.8f", std::fabs(ref - sol.values[i - 1]));
        out += '\n';
    }
    return out;
}

// --- saw-tooth perturbation experiment -----------------------------------------

struct PerturbedReport {
    forward::Mesh mesh;
    double delta = 0;
    std::vector<double> err_mid_exact, err_prod_exact;
    std::vector<double> err_mid_pert, err_prod_pert, err_min_pert;
    double norm_mid_exact = 0, norm_prod_exact = 0;
    double norm_mid_pert = 0, norm_prod_pert = 0, norm_min_pert = 0;
};

inline PerturbedReport run_perturbed_experiment(const kernel::KernelSpec& spec, double alpha,
                                                int nodes, double delta) {
    const forward::Mesh mesh = forward::Mesh::unit(nodes);
    const auto wm = solver::build_weights(spec, solver::Scheme::midpoint, mesh);
    const auto wp = solver::build_weights(spec, solver::Scheme::product, mesh);
    const auto y = forward::sample_rhs(spec, alpha, mesh);
    const auto y_pert = forward::perturb_sawtooth(y, delta);

    const auto errs = [&](const solver::WeightSequence& w, const forward::RhsSamples& rhs) {
        auto sol = solver::solve_triangular_convolution(w, rhs);
        return solver::error_norm(sol, alpha);
    };
    PerturbedReport rep;
    rep.mesh = mesh;
    rep.delta = delta;
    const auto me = errs(wm, y);
    const auto pe = errs(wp, y);
    const auto mp = errs(wm, y_pert);
    const auto pp = errs(wp, y_pert);
    rep.err_mid_exact = me.pointwise;
    rep.err_prod_exact = pe.pointwise;
    rep.err_mid_pert = mp.pointwise;
    rep.err_prod_pert = pp.pointwise;
    rep.norm_mid_exact = me.norm;
    rep.norm_prod_exact = pe.norm;
    rep.norm_mid_pert = mp.norm;
    rep.norm_prod_pert = pp.norm;
    rep.err_min_pert.resize(mesh.count);
    for (int i = 0; i < mesh.count; ++i) {
        rep.err_min_pert[i] = std::min(rep.err_mid_pert[i], rep.err_prod_pert[i]);
        rep.norm_min_pert = std::max(rep.norm_min_pert, rep.err_min_pert[i]);
    }
    return rep;
}

inline std::string to_csv(const PerturbedReport& rep) {
    std::string out =
        "i,t_mid,eps_mid_exact,eps_prod_exact,eps_mid_perturbed,eps_prod_perturbed,eps_min_perturbed\n";
    for (int i = 1; i <= rep.mesh.count; ++i) {
        out += std::to_string(i);
        out += ',' + detail::fmt("%.8f", rep.mesh.midpoint(i));
        out += ',' + detail::fmt("%.8f", rep.err_mid_exact[i - 1]);
        out += ',' + detail::fmt("%.8f", rep.err_prod_exact[i - 1]);
        out += ',' + detail::fmt("%.8f", rep.err_mid_pert[i - 1]);
        out += ',' + detail::fmt("%.8f", rep.err_prod_pert[i - 1]);
        out += ',' + detail::fmt("%.8f", rep.err_min_pert[i - 1]);
        out += '\n';
    }
    out += "\nquantity,value\n";
    out += "norm_mid_exact," + detail::fmt_norm(rep.norm_mid_exact) + '\n';
    out += "norm_prod_exact," + detail::fmt_norm(rep.norm_prod_exact) + '\n';
    out += "norm_mid_perturbed," + detail::fmt_norm(rep.norm_mid_pert) + '\n';
    out += "norm_prod_perturbed," + detail::fmt_norm(rep.norm_prod_pert) + '\n';
    out += "norm_min_perturbed," + detail::fmt_norm(rep.norm_min_pert) + '\n';
    return out;
}

// --- Fibonacci step search ------------------------------------------------------

struct StepSearchResult {
    int best = 0;                                // chosen n*, so h* = 1/n*
    std::vector<std::pair<int, double>> trials;  // evaluations in performed order
};

// Classical Fibonacci bracketing on the integer grid [lo, hi]; at most
// `max_trials` objective evaluations, repeated points served from cache.
// Returns the best point actually visited.
inline StepSearchResult fibonacci_search_int(const std::function<double(int)>& objective,
                                             int lo, int hi, int max_trials = 10) {
    if (lo > hi || lo < 1) throw std::invalid_argument("lab: bad search range");
    StepSearchResult result;
    std::map<int, double> cache;
    bool budget_hit = false;
    const auto eval_at = [&](int n) {
        if (auto it = cache.find(n); it != cache.end()) return it->second;
        if (static_cast<int>(result.trials.size()) >= max_trials) {
            budget_hit = true;
            return std::numeric_limits<double>::quiet_NaN();
        }
        const double v = objective(n);
        cache.emplace(n, v);
        result.trials.emplace_back(n, v);
        return v;
    };

    if (lo == hi) {
        eval_at(lo);
    } else {
        std::vector<long long> fib{1, 1};
        while (fib.back() < hi - lo + 1) fib.push_back(fib.back() + fib[fib.size() - 2]);
        int k = static_cast<int>(fib.size()) - 1;
        int a = lo, b = hi;
        const auto clampi = [](long long x, int alo, int bhi) {
            return static_cast<int>(std::min<long long>(std::max<long long>(x, alo), bhi));
        };
        int x1 = clampi(a + fib[k - 2] - 1, a, b);
        int x2 = clampi(a + fib[k - 1] - 1, a, b);
        if (x2 == x1) x2 = std::min(x1 + 1, b);
        double f1 = eval_at(x1);
        double f2 = eval_at(x2);
        while (k > 2 && a < b && !budget_hit) {
            if (f1 <= f2) {
                if (x2 > a) b = x2 - 1;
                --k;
                x2 = x1;
                f2 = f1;
                x1 = clampi(a + fib[k - 2] - 1, a, b);
                if (x1 == x2 && x1 > a) --x1;
                f1 = x1 == x2 ? f2 : eval_at(x1);
            } else {
                a = x1 + 1;
                --k;
                x1 = x2;
                f1 = f2;
                x2 = clampi(a + fib[k - 1] - 1, a, b);
                if (x2 == x1 && x2 < b) ++x2;
                f2 = x2 == x1 ? f1 : eval_at(x2);
            }
        }
    }

    double best_val = std::numeric_limits<double>::infinity();
    for (const auto& [n, v] : result.trials) {
        if (v < best_val) {
            best_val = v;
            result.best = n;
        }
    }
    return result;
}

// Step search over n = 1/h: objective is the C_h error norm of the chosen
// scheme on delta-perturbed data (inadmissible steps score +inf).
inline StepSearchResult fibonacci_step_search(const kernel::KernelSpec& spec, double alpha,
                                              double delta, int n_lo, int n_hi,
                                              solver::Scheme scheme = solver::Scheme::product,
                                              int max_trials = 10) {
    const auto objective = [&](int n) {
        try {
            const forward::Mesh mesh = forward::Mesh::unit(n);
            const auto w = solver::build_weights(spec, scheme, mesh);
            const auto y = forward::perturb_sawtooth(forward::sample_rhs(spec, alpha, mesh), delta);
            const auto sol = solver::solve_triangular_convolution(w, y);
            return solver::error_norm(sol, alpha).norm;
        } catch (const solver::StepRejected&) {
            return std::numeric_limits<double>::infinity();
        }
    };
    return fibonacci_search_int(objective, n_lo, n_hi, max_trials);
}

inline std::string to_csv(const StepSearchResult& result) {
    std::string out = "trial,n,norm\n";
    for (size_t i = 0; i < result.trials.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',' + std::to_string(result.trials[i].first);
        out += ',' + detail::fmt_norm(result.trials[i].second);
        out += '\n';
    }
    out += "\nchosen_n," + std::to_string(result.best) + '\n';
    return out;
}

}  // namespace volterra::lab
