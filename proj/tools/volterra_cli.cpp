// Command-line front end.  Every subcommand prints CSV to stdout or --out.
// Real-valued options accept plain decimals, scientific notation, and
// fractions like 1/256.  Exit code 0 on success, 2 on configuration errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "volterra/volterra.hpp"

namespace {

using namespace volterra;

double parse_real(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const double num = std::stod(text.substr(0, slash));
        const double den = std::stod(text.substr(slash + 1));
        if (den == 0) throw CLI::ValidationError("fraction with zero denominator: " + text);
        return num / den;
    }
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw CLI::ValidationError("not a number: " + text);
    return v;
}

sigdec::Shadow parse_real_exact(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos)
        return sigdec::Shadow(text.substr(0, slash)) / sigdec::Shadow(text.substr(slash + 1));
    return sigdec::Shadow(text);
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_real(item));
    if (out.empty()) throw CLI::ValidationError("empty list: " + text);
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    if (out.empty()) throw CLI::ValidationError("empty list: " + text);
    return out;
}

// "256:2048" -> the halving ladder 256, 512, 1024, 2048
std::vector<int> parse_ladder(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) return {std::stoi(text)};
    const int lo = std::stoi(text.substr(0, colon));
    const int hi = std::stoi(text.substr(colon + 1));
    if (lo < 1 || hi < lo) throw CLI::ValidationError("bad ladder: " + text);
    std::vector<int> out;
    for (int n = lo; n <= hi; n *= 2) out.push_back(n);
    return out;
}

// "8..14" -> (8, 14)
std::pair<int, int> parse_range(const std::string& text, const char* sep) {
    const auto pos = text.find(sep);
    if (pos == std::string::npos) {
        const int v = std::stoi(text);
        return {v, v};
    }
    return {std::stoi(text.substr(0, pos)), std::stoi(text.substr(pos + std::strlen(sep)))};
}

int emit(const std::string& csv, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << csv;
        return 0;
    }
    std::ofstream f(out_path);
    if (!f) {
        std::cerr << "cannot open " << out_path << "\n";
        return 2;
    }
    f << csv;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical lab for first-kind Volterra convolution equations with "
                 "truncated heat kernels"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "write CSV to a file instead of stdout")
        ->capture_default_str();

    // kernel ------------------------------------------------------------
    auto* kernel_cmd = app.add_subcommand("kernel", "kernel evaluation and roots");
    kernel_cmd->require_subcommand(1);
    kernel_cmd->fallthrough();

    auto* keval = kernel_cmd->add_subcommand("eval", "evaluate K_N(lambda)");
    keval->fallthrough();
    int keval_n = 50;
    std::string keval_lambda = "1e-3";
    keval->add_option("--n", keval_n, "truncation order N")->capture_default_str();
    keval->add_option("--lambda", keval_lambda, "time lag (decimal or fraction)")
        ->capture_default_str();

    auto* kroot = kernel_cmd->add_subcommand("root", "smallest positive root and step bound");
    kroot->fallthrough();
    int kroot_n = 2;
    kroot->add_option("--n", kroot_n, "truncation order N")->capture_default_str();

    auto* ktrace = kernel_cmd->add_subcommand("trace", "digit-tracked summation trace");
    ktrace->fallthrough();
    int ktrace_n = 12;
    int ktrace_digits = 8;
    std::string ktrace_lambda = "1e-3";
    ktrace->add_option("--n", ktrace_n, "truncation order N")->capture_default_str();
    ktrace->add_option("--lambda", ktrace_lambda, "time lag (decimal or fraction)")
        ->capture_default_str();
    ktrace->add_option("--digits", ktrace_digits, "significand length L")->capture_default_str();

    // sigdec -------------------------------------------------------------
    auto* sigdec_cmd = app.add_subcommand("sigdec", "significance arithmetic tables");
    sigdec_cmd->require_subcommand(1);
    sigdec_cmd->fallthrough();
    auto* stables = sigdec_cmd->add_subcommand("tables", "summation and cancellation tables");
    stables->fallthrough();
    std::string stables_digits = "8..14";
    bool stables_wide = false;
    stables->add_option("--digits", stables_digits, "significand length range, e.g. 8..14")
        ->capture_default_str();
    stables->add_flag("--wide", stables_wide, "allow lengths outside 8..14");

    // solve ----------------------------------------------------------------
    auto* solve_cmd = app.add_subcommand("solve", "solve one mesh problem");
    solve_cmd->fallthrough();
    std::string solve_scheme = "product";
    int solve_n = 2;
    std::string solve_alpha = "0.1";
    int solve_steps = 256;
    solve_cmd->add_option("--scheme", solve_scheme, "midpoint or product")
        ->check(CLI::IsMember({"midpoint", "product"}))
        ->capture_default_str();
    solve_cmd->add_option("--n", solve_n, "truncation order N")->capture_default_str();
    solve_cmd->add_option("--alpha", solve_alpha, "reference shape parameter")
        ->capture_default_str();
    solve_cmd->add_option("--steps", solve_steps, "node count n, h = 1/n")->capture_default_str();

    // table -------------------------------------------------------------
    auto* table_cmd = app.add_subcommand("table", "convergence table over a parameter grid");
    table_cmd->fallthrough();
    std::string table_alphas = "0.1,0.01";
    std::string table_nlist = "2,3,4,5,10,15";
    std::string table_ladder = "256:2048";
    bool table_parallel = false;
    table_cmd->add_option("--alphas", table_alphas, "comma list of alpha values")
        ->capture_default_str();
    table_cmd->add_option("--n-list", table_nlist, "comma list of truncation orders")
        ->capture_default_str();
    table_cmd->add_option("--ladder", table_ladder, "halving ladder lo:hi of node counts")
        ->capture_default_str();
    table_cmd->add_flag("--parallel", table_parallel, "evaluate cells concurrently");

    // perturb ---------------------------------------------------------------
    auto* perturb_cmd = app.add_subcommand("perturb", "saw-tooth perturbation experiment");
    perturb_cmd->fallthrough();
    std::string perturb_delta = "1e-3";
    int perturb_nodes = 27;
    int perturb_n = 2;
    std::string perturb_alpha = "0.1";
    perturb_cmd->add_option("--delta", perturb_delta, "noise amplitude")->capture_default_str();
    perturb_cmd->add_option("--nodes", perturb_nodes, "node count n, h = 1/n")
        ->capture_default_str();
    perturb_cmd->add_option("--n", perturb_n, "truncation order N")->capture_default_str();
    perturb_cmd->add_option("--alpha", perturb_alpha, "reference shape parameter")
        ->capture_default_str();

    // search-step ---------------------------------------------------------
    auto* search_cmd = app.add_subcommand("search-step", "Fibonacci search for the best step");
    search_cmd->fallthrough();
    std::string search_delta = "1e-3";
    std::string search_range = "8:256";
    std::string search_scheme = "product";
    int search_n = 2;
    std::string search_alpha = "0.1";
    int search_trials = 10;
    search_cmd->add_option("--delta", search_delta, "noise amplitude")->capture_default_str();
    search_cmd->add_option("--range", search_range, "node count range lo:hi")
        ->capture_default_str();
    search_cmd->add_option("--scheme", search_scheme, "midpoint or product")
        ->check(CLI::IsMember({"midpoint", "product"}))
        ->capture_default_str();
    search_cmd->add_option("--n", search_n, "truncation order N")->capture_default_str();
    search_cmd->add_option("--alpha", search_alpha, "reference shape parameter")
        ->capture_default_str();
    search_cmd->add_option("--trials", search_trials, "evaluation budget")->capture_default_str();

    try {
        app.parse(argc, argv);

        if (keval->parsed()) {
            const double lambda = parse_real(keval_lambda);
            const double value = kernel::eval({keval_n}, lambda);
            char buf[96];
            std::snprintf(buf, sizeof buf, "N,lambda,value\n%d,%.12g,%.15e\n", keval_n, lambda,
                          value);
            return emit(buf, out_path);
        }
        if (kroot->parsed()) {
            const auto root = kernel::smallest_root({kroot_n});
            const auto bound = kernel::max_step({kroot_n});
            std::string csv = "N,lambda_star,h_max\n";
            char buf[96];
            if (root)
                std::snprintf(buf, sizeof buf, "%d,%.12e,%.12e\n", kroot_n, *root, *bound);
            else
                std::snprintf(buf, sizeof buf, "%d,none,unbounded\n", kroot_n);
            return emit(csv + buf, out_path);
        }
        if (ktrace->parsed()) {
            const auto trace =
                kernel::eval_traced({ktrace_n}, parse_real_exact(ktrace_lambda), ktrace_digits);
            return emit(lab::to_csv(trace), out_path);
        }
        if (stables->parsed()) {
            const auto [lo, hi] = parse_range(stables_digits, "..");
            if (!stables_wide && (lo < 8 || hi > 14))
                throw CLI::ValidationError("--digits outside 8..14 needs --wide");
            return emit(lab::to_csv(lab::run_sig_tables(lo, hi)), out_path);
        }
        if (solve_cmd->parsed()) {
            const double alpha = parse_real(solve_alpha);
            const auto scheme =
                solve_scheme == "midpoint" ? solver::Scheme::midpoint : solver::Scheme::product;
            const auto sol =
                solver::solve_with({solve_n}, scheme, alpha, forward::Mesh::unit(solve_steps));
            return emit(lab::to_csv(sol, alpha), out_path);
        }
        if (table_cmd->parsed()) {
            lab::ExperimentConfig config;
            config.alphas = parse_real_list(table_alphas);
            config.truncation_orders = parse_int_list(table_nlist);
            config.step_counts = parse_ladder(table_ladder);
            return emit(lab::to_csv(lab::run_convergence_table(config, table_parallel)),
                        out_path);
        }
        if (perturb_cmd->parsed()) {
            const auto rep = lab::run_perturbed_experiment(
                {perturb_n}, parse_real(perturb_alpha), perturb_nodes, parse_real(perturb_delta));
            return emit(lab::to_csv(rep), out_path);
        }
        if (search_cmd->parsed()) {
            const auto [lo, hi] = parse_range(search_range, ":");
            const auto scheme =
                search_scheme == "midpoint" ? solver::Scheme::midpoint : solver::Scheme::product;
            const auto res =
                lab::fibonacci_step_search({search_n}, parse_real(search_alpha),
                                           parse_real(search_delta), lo, hi, scheme,
                                           search_trials);
            return emit(lab::to_csv(res), out_path);
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
