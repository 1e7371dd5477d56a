// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "gwsep/bounds.hpp"
#include "gwsep/chebyshev.hpp"
#include "gwsep/datagen.hpp"
#include "gwsep/kernel.hpp"
#include "gwsep/learner.hpp"
#include "gwsep/polynomial.hpp"
#include "gwsep/rng.hpp"
#include "gwsep/separating.hpp"

#ifndef GWSEP_CLI_PATH
#error "GWSEP_CLI_PATH must name the command-line binary"
#endif

using namespace gwsep;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Vector random_in_ball(std::size_t d, Rng& rng)
{
    for (;;) {
        Vector x(d);
        for (auto& v : x) v = rng.uniform(-1.0, 1.0);
        if (norm(x) <= 1.0) return x;
    }
}

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// Truncated feature-map dot product at D = 40 against the closed form.
Outcome kernel_identity()
{
    constexpr int kDegree = 40;
    constexpr int kPairs = 1000;
    const double tol = 2.0 * std::ldexp(1.0, -kDegree);
    const auto start = Clock::now();
    Rng rng(derive_seed(2024, 1));
    double worst = 0.0;
    std::size_t violations = 0;
    for (std::size_t d : {2u, 5u, 10u}) {
        // d = 10 has C(50, 10) ~ 1e10 coordinates; sum it degree slice by degree slice.
        const bool explicit_map = d <= 5;
        std::shared_ptr<const MultiIndexSet> indices;
        if (explicit_map) indices = std::make_shared<const MultiIndexSet>(d, kDegree);
        for (int i = 0; i < kPairs; ++i) {
            const auto x = random_in_ball(d, rng);
            const auto y = random_in_ball(d, rng);
            const double truncated = explicit_map ? truncated_feature_dot(x, y, *indices)
                                                      : truncated_kernel_by_degree(x, y, kDegree);
            const double err = std::abs(truncated - kernel_eval(KernelKind::rational, x, y));
            worst = std::max(worst, err);
            if (err > tol) ++violations;
        }
    }
    const double elapsed = seconds_since(start);
    return {violations == 0 && elapsed < 10.0,
            fmt("max error %.3g (tol %.3g), %zu violations, %.2f s (limit 10 s)", worst, tol, violations, elapsed)};
}

// Chebyshev properties: degree, leading coefficient, |T_n| <= 1 on [-1, 1],
// T_n(z) >= 1 + n^2 (z - 1) for z >= 1, ||T_n|| <= (1 + sqrt 2)^n.
Outcome chebyshev_properties()
{
    constexpr int kMaxN = 20;
    constexpr int kGrid = 200;
    std::size_t violations = 0, checks = 0;
    const ChebyshevTable table(kMaxN);
    for (int n = 0; n <= kMaxN; ++n) {
        const auto& c = table.coefficients(n);
        ++checks;
        if (c.size() != static_cast<std::size_t>(n + 1) || c.back() == 0) ++violations;
        ++checks;
        const WideInt lead = n == 0 ? 1 : static_cast<WideInt>(1) << (n - 1);
        if (c.back() != lead) ++violations;
        for (int k = 0; k < kGrid; ++k) {
            const double z = -1.0 + 2.0 * k / (kGrid - 1);
            ++checks;
            if (std::abs(chebyshev_value(n, z)) > 1.0 + 1e-12) ++violations;
            const double w = 1.0 + 4.0 * k / (kGrid - 1);
            const double tw = chebyshev_value(n, w);
            ++checks;
            if (tw < (1.0 + static_cast<double>(n) * n * (w - 1.0)) * (1.0 - 1e-12)) ++violations;
        }
        // Exact: sum c_k^2 <= (1 + sqrt 2)^{2n} = (3 + 2 sqrt 2)^n. Compare in
        // 50-digit arithmetic on the integer coefficients.
        using Big = boost::multiprecision::cpp_bin_float_50;
        Big sq = 0;
        for (const auto& v : c) {
            const Big b(to_string(v));
            sq += b * b;
        }
        ++checks;
        if (sq > pow(Big(3) + 2 * sqrt(Big(2)), n)) ++violations;
    }
    return {violations == 0, fmt("%zu checks over n <= %d, %zu violations", checks, kMaxN, violations)};
}

// <c, phi(x)> = p(x) and ||c|| <= 2^{deg/2} ||p|| for random sparse polynomials.
Outcome embedding_norm_bound()
{
    using Rational = boost::multiprecision::cpp_rational;
    Rng rng(derive_seed(2024, 3));
    std::size_t eval_violations = 0, bound_violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t d = 1 + rng.below(4);
        SparsePolynomial p(d);
        const int terms = 1 + static_cast<int>(rng.below(15));
        for (int k = 0; k < terms; ++k) {
            Exponent alpha(d, 0);
            const int deg = static_cast<int>(rng.below(9));
            for (int j = 0; j < deg; ++j) ++alpha[rng.below(d)];
            p.add_term(alpha, rng.uniform(-1.0, 1.0));
        }
        const auto c = embed_polynomial(p);
        for (int i = 0; i < 100; ++i) {
            const auto x = random_in_ball(d, rng);
            const double px = p.evaluate(x);
            const double err = std::abs(c.dot_feature_map(x) - px) / std::max(1.0, std::abs(px));
            worst = std::max(worst, err);
            if (err > 1e-8) ++eval_violations;
        }
        // ||c||^2 = sum p_a^2 2^{|a|} / multinomial(a) against 2^deg ||p||^2, in exact
        // rationals so the comparison carries no rounding.
        Rational lhs = 0, rhs = 0;
        for (const auto& [alpha, coeff] : p.terms()) {
            const Rational sq = Rational(coeff) * Rational(coeff);
            boost::multiprecision::cpp_int mult = 1, n = 0;
            for (auto a : alpha) {
                for (unsigned k = 1; k <= a; ++k) {
                    ++n;
                    mult = mult * n / k;
                }
            }
            lhs += sq * Rational(boost::multiprecision::cpp_int(1) << total_degree(alpha)) / Rational(mult);
            rhs += sq;
        }
        rhs *= Rational(boost::multiprecision::cpp_int(1) << p.degree());
        if (lhs > rhs) ++bound_violations;
        if (c.squared_norm() > std::ldexp(p.squared_norm(), p.degree()) * (1.0 + 1e-14)) ++bound_violations;
    }
    return {eval_violations == 0 && bound_violations == 0,
            fmt("max relative evaluation error %.3g (tol 1e-8), %zu evaluation / %zu norm violations", worst,
                eval_violations, bound_violations)};
}

// Per-class separating polynomials on a 3 x 3 group-weak dataset.
Outcome group_weak_certification()
{
    const auto start = Clock::now();
    GenSpec spec;
    spec.kind = SeparabilityKind::group_weak;
    spec.dim = 2;
    spec.classes = 9;
    spec.group_sizes = {3, 3, 3};
    spec.gamma = 0.2;
    spec.samples_per_class = 100;
    spec.band_axis = BandAxis::tangential;
    spec.seed = 1;
    const auto gen = generate(spec);
    const auto seps = separate_all_classes(gen.data, gen.certificate);
    std::size_t failures = 0;
    double min_pos = INFINITY, max_neg = -INFINITY, worst_margin = -INFINITY;
    for (const auto& s : seps) {
        const int expected_degree = ceil_log2(2 * static_cast<std::uint64_t>(s.params.m) + 4) * ceil_sqrt_two_over(0.2);
        const bool ok = s.passed(0.0) && s.polynomial.degree() == expected_degree &&
                        s.params.m == 2 && s.polynomial.log_norm() <= s.params.log_norm_bound();
        if (!ok) ++failures;
        min_pos = std::min(min_pos, s.min_positive);
        max_neg = std::max(max_neg, s.max_negative);
        worst_margin = std::max(worst_margin, s.polynomial.log_norm() - s.params.log_norm_bound());
    }
    const double elapsed = seconds_since(start);
    return {failures == 0 && seps.size() == 9 && elapsed < 60.0,
            fmt("%zu/9 classes fail; min p on class %.3g, max p elsewhere %.3g, "
                "log-norm minus bound <= %.3g, %.2f s (limit 60 s)",
                failures, min_pos, max_neg, worst_margin, elapsed)};
}

// Linear-kernel bandit on strongly separable data against (K-1) floor(4 (R/gamma)^2).
Outcome strong_mistake_bound()
{
    GenSpec spec;
    spec.kind = SeparabilityKind::strong;
    spec.dim = 5;
    spec.classes = 5;
    spec.gamma = 0.3;
    spec.samples_per_class = 200;
    spec.seed = 3;
    const auto gen = generate(spec);
    const double R = 1.0;
    const auto bound = mistake_bound(5, R, 0.3);
    LearnerConfig cfg;
    cfg.classes = 5;
    cfg.kernel = KernelKind::linear;
    double total = 0.0;
    bool deterministic = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto stream = make_stream(gen.data, 20000, seed);
        const auto a = run_protocol(stream, cfg, seed);
        const auto b = run_protocol(make_stream(gen.data, 20000, seed), cfg, seed);
        for (std::size_t t = 0; t < a.steps.size() && deterministic; ++t) {
            deterministic = a.steps[t].y_hat == b.steps[t].y_hat && a.steps[t].y == b.steps[t].y;
        }
        total += static_cast<double>(a.mistakes());
    }
    const double mean = total / 10.0;
    return {max_norm(gen.data) <= R && mean <= static_cast<double>(bound) && deterministic && bound == 176,
            fmt("mean mistakes %.1f over 10 seeds (bound %llu), deterministic=%s", mean,
                static_cast<unsigned long long>(bound), deterministic ? "yes" : "no")};
}

// Rational vs linear kernel on a K = 9, L = 3 grouped dataset.
Outcome desk_reproduction()
{
    const auto start = Clock::now();
    GenSpec spec;
    spec.kind = SeparabilityKind::group_weak;
    spec.dim = 2;
    spec.classes = 9;
    spec.group_sizes = {3, 3, 3};
    spec.gamma = 0.05;
    spec.samples_per_class = 200;
    spec.band_axis = BandAxis::radial;
    spec.seed = 7;
    const auto gen = generate(spec);
    constexpr std::size_t T = 20000;
    double rational = 0.0, linear = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto stream = make_stream(gen.data, T, seed);
        LearnerConfig cfg;
        cfg.classes = 9;
        cfg.kernel = KernelKind::rational;
        rational += static_cast<double>(run_protocol(stream, cfg, seed).mistakes());
        cfg.kernel = KernelKind::linear;
        linear += static_cast<double>(run_protocol(stream, cfg, seed).mistakes());
    }
    rational /= 5.0 * T;
    linear /= 5.0 * T;
    const double elapsed = seconds_since(start);
    return {rational < 0.5 * linear && elapsed < 300.0,
            fmt("rational rate %.1f%%, linear rate %.1f%% (need rational < half), %.1f s (limit 300 s)",
                100 * rational, 100 * linear, elapsed)};
}

// Transformed and comparison margins against a 50-digit reference whose
// ceilings come from integer arithmetic on gamma = a / 1000.
Outcome bounds_table()
{
    using Big = boost::multiprecision::cpp_bin_float_50;
    const std::vector<int> gamma_milli{500, 200, 100, 50, 20};
    const std::vector<std::pair<int, int>> LK{{2, 9}, {3, 9}, {3, 16}, {4, 32}};
    auto smallest = [](auto pred) {
        int k = 0;
        while (!pred(k)) ++k;
        return k;
    };
    auto rel = [](double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    double worst = 0.0;
    std::size_t points = 0, ordered = 0, order_violations = 0;
    for (int a : gamma_milli) {
        const double gamma = a / 1000.0;
        const int s = smallest([&](int k) { return k >= 1 && 1LL * k * k * a >= 2000; });
        const int s2 = smallest([&](int k) { return k >= 1 && (1LL << k) * a >= 2000; });
        for (auto [L, K] : LK) {
            ++points;
            const int r = smallest([&](int k) { return (1LL << k) >= 2 * L + 2; });
            const int r1 = smallest([&](int k) { return (1LL << k) >= 2 * K - 2; });
            const int q = smallest([&](int k) { return (1LL << (4 * k)) >= 4 * K - 3; });
            const int r2 = 2 * q + 1;

            const Big rs = Big(r) * s;
            const Big ref_ours = log(pow(Big(840) * rs, -rs / 2) / (Big(9) * sqrt(Big(L))));
            const Big rs1 = Big(r1) * s;
            const Big ref_g1 = log(pow(Big(376) * rs1, -rs1 / 2) / (Big(2) * sqrt(Big(K))));
            const Big base2 = pow(Big(2), s2 + 1) * r2 * (K - 1) * (4 * s2 + 2);
            const Big ref_g2 = log(pow(base2, -(Big(s2) + Big(0.5)) * r2 * (K - 1)) /
                                   (Big(4) * sqrt(Big(K)) * (4 * K - 5) * pow(Big(2), K - 1)));

            const auto ours = transformed_margin(gamma, L);
            const auto theirs = bpstwz_margins(gamma, K);
            worst = std::max({worst, rel(ours.log_gamma_prime, static_cast<double>(ref_ours)),
                              rel(theirs.log_gamma1, static_cast<double>(ref_g1)),
                              rel(theirs.log_gamma2, static_cast<double>(ref_g2))});
            if (r < r1) {
                ++ordered;
                if (!(ours.log_gamma_prime > theirs.log_gamma1)) ++order_violations;
            }
        }
    }
    return {worst <= 1e-10 && order_violations == 0 && points == 20,
            fmt("%zu grid points, max relative log error %.3g (tol 1e-10); ours > gamma_1 at %zu/%zu points with "
                "smaller r",
                points, worst, ordered - order_violations, ordered)};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs every subcommand twice with identical flags and compares the outputs byte for byte.
Outcome cli_determinism()
{
    const fs::path root = fs::temp_directory_path() / "gwsep_acceptance_cli";
    fs::remove_all(root);
    const std::string cli = GWSEP_CLI_PATH;
    std::size_t compared = 0, differing = 0, failed_commands = 0;
    std::string first_problem;

    auto pass = [&](const fs::path& dir, const std::string& data_dir) {
        fs::create_directories(dir);
        const std::string d = dir.string();
        const std::vector<std::string> commands{
            "gen-data --kind group-weak --K 9 --groups 3,3,3 --gamma 0.2 --samples 60 --seed 5 --band-axis tangential --out " + d + "/gen",
            "run --data " + data_dir + "/dataset.csv --kernel rational --T 3000 --seed 4 --out " + d + "/trace.csv --state " + d + "/state.json",
            "run --data " + data_dir + "/dataset.csv --algorithm perceptron --kernel linear --T 3000 --seed 4 --out " + d + "/ptrace.csv",
            "contour --state " + (root / "a").string() + "/state.json --grid 25 --class 2 --out " + d + "/contour.csv",
            "certify --data " + data_dir + "/dataset.csv --certificate " + data_dir + "/certificate.json --out " + d + "/cert.json",
            "bounds --grid --out " + d + "/bounds.csv",
            "sweep --config " + root.string() + "/sweep.json --out " + d + "/sweep",
        };
        for (const auto& c : commands) {
            const std::string line = "\"" + cli + "\" " + c + " > /dev/null 2>&1";
            if (std::system(line.c_str()) != 0) {
                ++failed_commands;
                if (first_problem.empty()) first_problem = "command failed: " + c;
            }
        }
    };

    {
        fs::create_directories(root);
        std::ofstream cfg(root / "sweep.json");
        cfg << R"({"data": {"kind": "group-weak", "K": 4, "group_sizes": [2, 2], "gamma": 0.1,
                  "samples_per_class": 40, "seed": 3},
                  "run": {"kernels": ["rational", "linear"], "T": 1500, "seeds": [1, 2]}})";
    }
    // Both passes read the dataset generated by the first one so the
    // downstream subcommands see identical inputs.
    const std::string data_dir = (root / "a" / "gen").string();
    pass(root / "a", data_dir);
    pass(root / "b", data_dir);

    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), root / "a");
        const auto other = root / "b" / rel;
        ++compared;
        if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
            ++differing;
            if (first_problem.empty()) first_problem = "differs: " + rel.string();
        }
    }
    fs::remove_all(root);
    return {failed_commands == 0 && differing == 0 && compared >= 12,
            fmt("%zu output files compared across 7 subcommand invocations, %zu differ, %zu commands failed%s%s",
                compared, differing, failed_commands, first_problem.empty() ? "" : "; ", first_problem.c_str())};
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"kernel identity (D = 40, d in {2, 5, 10})", kernel_identity},
        {"Chebyshev properties (n <= 20)", chebyshev_properties},
        {"embedding norm bound (50 polynomials)", embedding_norm_bound},
        {"group-weak certification (d = 2, L = 3, K = 9, gamma = 0.2)", group_weak_certification},
        {"strong-separability mistake bound (K = 5, gamma = 0.3)", strong_mistake_bound},
        {"desk reproduction (K = 9, L = 3, gamma = 0.05)", desk_reproduction},
        {"bounds table (20-point grid)", bounds_table},
        {"CLI determinism", cli_determinism},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome out;
        try {
            out = check();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::cout << (out.passed ? "PASS " : "FAIL ") << name << ": " << out.detail << std::endl;
        if (!out.passed) ++failures;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
    return failures == 0 ? 0 : 1;
}
