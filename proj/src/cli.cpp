#include "fbl/cli.hpp"

#include "fbl/errors.hpp"
#include "fbl/fblnorm.hpp"
#include "fbl/lifting.hpp"
#include "fbl/report.hpp"
#include "fbl/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <thread>

namespace fbl::cli {

using nlohmann::json;

namespace {

struct JobSpec {
    std::string space = "";
    std::string expr = "";
    std::size_t k = 4;
    std::size_t restarts = 200;
    std::size_t local_steps = 4;
    std::uint64_t seed = 0;
    std::size_t instances = 10'000;
    std::size_t vectors = 100;
    std::size_t tail_restarts = 100;
    std::size_t l = 6;
    std::string mseq = "pow2";
    std::string ramp = "linear";
    std::string out_path;
    std::size_t threads = 0;
};

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::size_t worker_threads(std::size_t requested)
{
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

LiftParams lift_params(const JobSpec& job)
{
    if (job.ramp != "linear") throw ConfigError("unsupported ramp '" + job.ramp + "'");
    return LiftParams::from_rule(job.mseq);
}

SearchConfig search_config(const JobSpec& job)
{
    SearchConfig config;
    config.tuple_size = job.k;
    config.restarts = job.restarts;
    config.local_steps = job.local_steps;
    config.seed = job.seed;
    config.threads = worker_threads(job.threads);
    return config;
}

struct Outcome {
    json report;
    int code = kPass;
    std::string summary;
};

Outcome cmd_norm(const JobSpec& job)
{
    const Space space = parse_space(job.space);
    const HomExpr f = parse_expr(job.expr, lift_params(job));
    const NormEstimate estimate = fbl_lower_bound(f, space, search_config(job));
    json report = to_json(estimate);
    report["command"] = "norm";
    report["space"] = space.to_string();
    report["expr"] = to_string(f);
    report["k"] = job.k;
    report["local_steps"] = job.local_steps;
    return {std::move(report), kPass,
            "norm: lower bound " + std::to_string(estimate.lower_bound) + " after " +
                std::to_string(estimate.evaluations) + " evaluations"};
}

Outcome cmd_lift_verify(const JobSpec& job)
{
    const LiftingSystem system(parse_space(job.space), lift_params(job));
    const SearchConfig config = search_config(job);
    const std::size_t d = system.dim();

    std::vector<CheckReport> parts;
    parts.push_back(check_biorthogonal(system));
    parts.push_back(check_disjoint(system, job.instances, job.seed));
    parts.push_back(check_beta_T(system, 1000, job.seed));
    parts.push_back(check_normspan_batch(system, job.vectors, config));
    SearchConfig tail_config = config;
    tail_config.restarts = job.tail_restarts;
    std::vector<CheckReport> tails;
    for (std::size_t n = 1; n <= d; ++n) {
        for (std::size_t k = 0; n + k <= d; ++k) {
            tails.push_back(check_freenorm(system, n, k, tail_config));
        }
    }
    parts.push_back(merge_reports("freenorm", tails, job.seed));

    CheckReport combined = merge_reports("lift-verify", parts, job.seed);
    combined.config = {{"space", system.space().to_string()},
                       {"mseq", system.params().to_string()},
                       {"ramp", job.ramp},
                       {"k", job.k},
                       {"restarts", job.restarts},
                       {"tail_restarts", job.tail_restarts},
                       {"local_steps", job.local_steps},
                       {"instances", job.instances},
                       {"vectors", job.vectors}};
    std::string summary = "lift-verify:";
    for (const auto& p : parts) summary += " " + p.check + (p.passed() ? "=pass" : "=FAIL");
    return {combined.to_json(), combined.passed() ? kPass : kCheckFailure, summary};
}

Outcome cmd_lemma44(const JobSpec& job)
{
    Lemma44Batch batch;
    batch.instances = job.instances;
    batch.max_l = job.l;
    batch.seed = job.seed;
    if (!job.space.empty()) batch.space = parse_space(job.space);
    const CheckReport report = check_lemma44_batch(batch);
    return {report.to_json(), report.passed() ? kPass : kCheckFailure,
            "lemma44: " + std::to_string(report.instances) + " instances, " +
                std::to_string(report.failure_count) + " failures"};
}

void add_search_flags(CLI::App* cmd, JobSpec& job)
{
    cmd->add_option("--k", job.k, "tuple size (1..24)");
    cmd->add_option("--restarts", job.restarts, "random restarts");
    cmd->add_option("--local-steps", job.local_steps, "improvement sweeps per step size");
    cmd->add_option("--threads", job.threads, "worker threads, 0 = all cores");
}

void add_common_flags(CLI::App* cmd, JobSpec& job)
{
    cmd->add_option("--seed", job.seed, "random seed");
    cmd->add_option("--out", job.out_path, "write the JSON report here instead of stdout");
}

void add_lift_flags(CLI::App* cmd, JobSpec& job)
{
    cmd->add_option("--mseq", job.mseq, "M sequence: pow2 | custom:m1,m2,...");
    cmd->add_option("--ramp", job.ramp, "ramp family: linear");
}

} // namespace

std::string strip_timestamp(const std::string& report_json)
{
    json j = json::parse(report_json);
    j.erase("timestamp");
    return j.dump(2);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    JobSpec job;
    CLI::App app{"Free Banach lattice workbench"};
    app.require_subcommand(1);

    auto* norm_cmd = app.add_subcommand("norm", "lower-bound the FBL norm of an expression");
    norm_cmd->add_option("--space", job.space, "space, e.g. l2:4")->required();
    norm_cmd->add_option("--expr", job.expr, "lattice expression")->required();
    add_search_flags(norm_cmd, job);
    add_lift_flags(norm_cmd, job);
    add_common_flags(norm_cmd, job);

    auto* lift_cmd = app.add_subcommand("lift-verify", "verify the lattice-lifting construction");
    lift_cmd->add_option("--space", job.space, "space, e.g. l2:6")->required();
    lift_cmd->add_option("--instances", job.instances, "Gaussian samples for disjointness");
    lift_cmd->add_option("--vectors", job.vectors, "coefficient vectors for the span inequality");
    lift_cmd->add_option("--tail-restarts", job.tail_restarts, "restarts for the truncation tail check");
    add_search_flags(lift_cmd, job);
    add_lift_flags(lift_cmd, job);
    add_common_flags(lift_cmd, job);

    auto* lemma_cmd = app.add_subcommand("lemma44", "batch-check the sign-averaging inequality");
    lemma_cmd->add_option("--space", job.space, "fixed space (random l_p spaces if omitted)");
    lemma_cmd->add_option("--instances", job.instances, "random instances");
    lemma_cmd->add_option("--l", job.l, "maximum tuple length");
    add_common_flags(lemma_cmd, job);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        out << json{{"error", "config"}, {"message", e.what()}}.dump(2) << "\n";
        err << "fblbench: " << e.what() << "\n";
        return kConfigError;
    }

    constexpr std::size_t kLiftRestarts = 20;
    if (lift_cmd->parsed() && lift_cmd->get_option("--restarts")->count() == 0) {
        job.restarts = kLiftRestarts;
    }

    Outcome outcome;
    try {
        if (norm_cmd->parsed()) {
            outcome = cmd_norm(job);
        } else if (lift_cmd->parsed()) {
            outcome = cmd_lift_verify(job);
        } else {
            outcome = cmd_lemma44(job);
        }
    } catch (const ParseError& e) {
        out << json{{"error", "parse"}, {"message", e.message()}, {"offset", e.offset()}}.dump(2)
            << "\n";
        err << "fblbench: parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const std::invalid_argument& e) {
        // ConfigError and DimensionError.
        out << json{{"error", "config"}, {"message", e.what()}}.dump(2) << "\n";
        err << "fblbench: configuration error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NonFiniteError& e) {
        out << json{{"error", "config"}, {"message", e.what()}}.dump(2) << "\n";
        err << "fblbench: " << e.what() << "\n";
        return kConfigError;
    }

    outcome.report["timestamp"] = utc_timestamp();
    const std::string text = outcome.report.dump(2) + "\n";
    if (job.out_path.empty()) {
        out << text;
    } else {
        std::ofstream file(job.out_path);
        if (!file) {
            err << "fblbench: cannot write " << job.out_path << "\n";
            return kConfigError;
        }
        file << text;
    }
    err << outcome.summary << "\n";
    return outcome.code;
}

} // namespace fbl::cli
