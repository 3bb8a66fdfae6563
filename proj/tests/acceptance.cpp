// Acceptance suite: one PASS/FAIL line per criterion.

#include "fbl/cli.hpp"
#include "fbl/fblnorm.hpp"
#include "fbl/lifting.hpp"
#include "fbl/report.hpp"
#include "fbl/verify.hpp"
#include "oracles.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace fbl;
using nlohmann::json;

namespace {

constexpr std::uint64_t kSeed = 0;
constexpr double kSlack = 1e-9;

struct Outcome {
    bool passed = true;
    std::string detail;
    json report;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::mt19937_64 stream(std::uint64_t tag)
{
    return std::mt19937_64(kSeed * 1000003 + tag);
}

// 1. δ_E is an isometry: unit vectors reach ≥ 0.995 and no tuple exceeds 1.
Outcome isometry()
{
    const auto start = Clock::now();
    Outcome out;
    out.report = json::array();
    double worst_bound = 2.0, worst_tuple = 0.0;
    auto rng = stream(1);
    std::normal_distribution<double> normal;
    for (const char* text : {"l1:4", "l2:4", "linf:4"}) {
        const Space space = parse_space(text);
        for (int i = 0; i < 20; ++i) {
            Vector x = Vector::zero(4);
            for (std::size_t j = 0; j < 4; ++j) x[j] = normal(rng);
            const double nx = norm(space, x);
            for (std::size_t j = 0; j < 4; ++j) x[j] /= nx;
            SearchConfig config{.tuple_size = 4, .restarts = 200, .seed = kSeed + std::uint64_t(i)};
            double max_ratio = 0.0;
            const NormEstimate est = fbl_lower_bound(
                HomExpr::delta(x), space, config,
                [&](std::span<const Functional>, double obj, double c) {
                    max_ratio = std::max(max_ratio, obj / c);
                });
            worst_bound = std::min(worst_bound, est.lower_bound);
            worst_tuple = std::max(worst_tuple, max_ratio);
            out.report.push_back(to_json(est));
        }
    }
    const double elapsed = seconds_since(start);
    out.passed = worst_bound >= 0.995 && worst_tuple <= 1.0 + kSlack && elapsed < 30.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "min lower bound %.6f, max tuple ratio %.12f, %.1fs", worst_bound,
                  worst_tuple, elapsed);
    out.detail = buf;
    return out;
}

// 2. ‖ |δ_a| ∨ |δ_b| ‖ = 2 on FBL[l1^2].
Outcome two_generators()
{
    Outcome out;
    const Space space = parse_space("l1:2");
    const HomExpr f = parse_expr("|d(1,0)| v |d(0,1)|");
    const NormEstimate est = fbl_lower_bound(f, space, {.tuple_size = 2, .restarts = 200, .seed = kSeed});
    const std::vector<std::size_t> support{1, 2};
    const UpperBound upper = upper_bound_finite_coords(f, space, support, 2);
    // Explicit tuple (e_a*, e_b*): objective 2 over constraint 1.
    const FunctionalTuple explicit_tuple(space, {Functional{1, 0}, Functional{0, 1}});
    const double explicit_ratio =
        tuple_objective(f, space, explicit_tuple.functionals()) / explicit_tuple.constraint();
    out.passed = est.lower_bound >= 1.999 && est.lower_bound <= 2.0 + kSlack && upper.certified &&
                 upper.value == 2.0 && explicit_ratio == 2.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "search %.6f, explicit tuple %.1f, certified upper %.1f",
                  est.lower_bound, explicit_ratio, upper.value);
    out.detail = buf;
    out.report = {{"estimate", to_json(est)}, {"upper", to_json(upper)}};
    return out;
}

// 3. d = 1: search agrees with max(|f(1)|, |f(-1)|).
Outcome dimension_one()
{
    Outcome out;
    out.report = json::array();
    auto rng = stream(3);
    std::normal_distribution<double> normal;
    const Space space = parse_space("l2:1");
    double worst_rel = 0.0, worst_excess = -1.0;
    for (int i = 0; i < 50; ++i) {
        const double plus = normal(rng);
        const double minus = normal(rng);
        // f(t) = plus * t^+ + minus * (-t)^+
        const HomExpr f = HomExpr::add(
            {HomExpr::scale(plus, HomExpr::pos(HomExpr::delta(Vector{1.0}))),
             HomExpr::scale(minus, HomExpr::pos(HomExpr::scale(-1.0, HomExpr::delta(Vector{1.0}))))});
        const double exact = oracle::norm_dim1(plus, minus);
        double max_ratio = 0.0;
        const NormEstimate est = fbl_lower_bound(
            f, space, {.tuple_size = 4, .restarts = 200, .seed = kSeed + std::uint64_t(i)},
            [&](std::span<const Functional>, double obj, double c) { max_ratio = std::max(max_ratio, obj / c); });
        worst_rel = std::max(worst_rel, std::abs(est.lower_bound - exact) / exact);
        worst_excess = std::max(worst_excess, max_ratio - exact);
        out.report.push_back({{"f_plus", plus}, {"f_minus", minus}, {"lower_bound", est.lower_bound}});
    }
    out.passed = worst_rel <= 1e-3 && worst_excess <= kSlack;
    char buf[160];
    std::snprintf(buf, sizeof buf, "max relative gap %.3e, max tuple excess %.3e", worst_rel, worst_excess);
    out.detail = buf;
    return out;
}

// 4. Lifting construction at d = 6.
Outcome lifting_suite()
{
    const auto start = Clock::now();
    Outcome out;
    out.report = json::array();
    std::string detail;
    for (const char* text : {"l1:6", "l2:6", "linf:6"}) {
        const LiftingSystem system(parse_space(text));
        const CheckReport bio = check_biorthogonal(system);
        const CheckReport disjoint = check_disjoint(system, 10'000, kSeed);
        const CheckReport beta = check_beta_T(system, 1000, kSeed);
        const CheckReport span = check_normspan_batch(
            system, 100, {.tuple_size = 4, .restarts = 20, .local_steps = 4, .seed = kSeed});
        const bool ok = bio.passed() && bio.worst_slack == 0.0 && disjoint.passed() &&
                        disjoint.worst_slack == 0.0 && beta.passed() && span.passed();
        out.passed = out.passed && ok;
        detail += std::string(text) + (ok ? " ok" : " FAILED") + " (" +
                  std::to_string(span.instances) + " tuples); ";
        for (const auto* r : {&bio, &disjoint, &beta, &span}) out.report.push_back(r->to_json());
    }
    const double elapsed = seconds_since(start);
    out.passed = out.passed && elapsed < 120.0;
    out.detail = detail + std::to_string(elapsed) + "s";
    return out;
}

// 5. Truncation tail bound.
Outcome tail_bound()
{
    Outcome out;
    out.report = json::array();
    double worst = 1.0;
    std::size_t searched = 0, positive = 0, zero_checked = 0;
    for (const char* text : {"l1:6", "l2:6", "linf:6"}) {
        const LiftingSystem system(parse_space(text));
        for (std::size_t n = 1; n <= 6; ++n) {
            for (std::size_t k = 0; n + k <= 6; ++k) {
                const CheckReport r =
                    check_freenorm(system, n, k, {.tuple_size = 4, .restarts = 100, .seed = kSeed});
                if (n + k < 6) {
                    const double bound = oracle::pow2_tail(n + k);
                    const double best = r.details.at("best_lower_bound").get<double>();
                    out.passed = out.passed && r.passed() && best <= bound + kSlack;
                    worst = std::min(worst, bound - best);
                    ++searched;
                    if (best > 0.0) ++positive;
                } else {
                    out.passed = out.passed && r.passed() && r.instances == 1000 && r.worst_slack == 0.0;
                    ++zero_checked;
                }
                out.report.push_back(r.to_json());
            }
        }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%zu searched pairs (%zu with positive lower bound, min slack %.3e), %zu exact-zero pairs",
                  searched, positive, worst, zero_checked);
    out.detail = buf;
    return out;
}

// 6. Sign-averaging inequality.
Outcome lemma44()
{
    Outcome out;
    const CheckReport r = check_lemma44_batch({.instances = 10'000, .max_l = 6, .max_dim = 8, .seed = kSeed});
    const std::size_t cross = r.details.at("l1_cross_checks").get<std::size_t>();
    out.passed = r.passed() && r.instances == 10'000 && cross > 0;
    out.detail = std::to_string(r.instances) + " instances, " + std::to_string(r.failure_count) +
                 " failures, " + std::to_string(cross) + " l1 cross-checks, worst slack " +
                 std::to_string(r.worst_slack);
    out.report = r.to_json();
    return out;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"1 isometry of delta_E", isometry},
        {"2 exact norm of |d_a| v |d_b| on l1^2", two_generators},
        {"3 dimension-one closed form", dimension_one},
        {"4 lattice-lifting suite at d=6", lifting_suite},
        {"5 truncation tail bound", tail_bound},
        {"6 sign-averaging inequality", lemma44},
    };

    bool all = true;
    std::vector<std::string> first_run;
    for (const auto& [name, run] : criteria) {
        const Outcome o = run();
        all = all && o.passed;
        first_run.push_back(o.report.dump());
        std::printf("[%s] criterion %s: %s\n", o.passed ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }

    // 7. Re-run everything and compare serialized reports, plus the CLI path.
    bool identical = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        identical = identical && criteria[i].second().report.dump() == first_run[i];
    }
    const std::vector<std::vector<std::string>> jobs = {
        {"norm", "--space", "l1:2", "--expr", "|d(1,0)| v |d(0,1)|", "--k", "2", "--seed", "0"},
        {"lemma44", "--space", "l2:8", "--instances", "2000", "--seed", "0"},
        {"lift-verify", "--space", "l2:4", "--seed", "0", "--restarts", "5", "--vectors", "5"},
    };
    for (const auto& job : jobs) {
        std::ostringstream a, b, sink;
        fbl::cli::run(job, a, sink);
        fbl::cli::run(job, b, sink);
        identical = identical && fbl::cli::strip_timestamp(a.str()) == fbl::cli::strip_timestamp(b.str());
    }
    all = all && identical;
    std::printf("[%s] criterion 7 determinism: %s\n", identical ? "PASS" : "FAIL",
                identical ? "byte-identical reports (timestamp excluded)" : "reports differ");
    return all ? 0 : 1;
}
