#include "fbl/cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
    json report() const { return json::parse(out); }
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = fbl::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("norm command")
{
    const Result two = run({"norm", "--space", "l1:2", "--expr", "|d(1,0)| v |d(0,1)|", "--k", "2",
                            "--restarts", "200", "--seed", "0"});
    CHECK(two.code == fbl::cli::kPass);
    CHECK(double(two.report()["lower_bound"]) >= 1.999);
    CHECK(two.report().contains("timestamp"));
    CHECK_FALSE(two.err.empty());

    const Result delta = run({"norm", "--space", "l2:3", "--expr", "d(1,0,0)"});
    CHECK(delta.code == fbl::cli::kPass);
    CHECK(double(delta.report()["lower_bound"]) >= 0.999);
    CHECK(double(delta.report()["lower_bound"]) <= 1.0 + 1e-9);
}

TEST_CASE("norm command errors")
{
    const Result malformed = run({"norm", "--space", "l2:3", "--expr", "d(1,"});
    CHECK(malformed.code == fbl::cli::kParseError);
    CHECK(malformed.report()["error"] == "parse");
    CHECK(malformed.report()["offset"] == 4);

    CHECK(run({"norm", "--space", "l7", "--expr", "d(1)"}).code == fbl::cli::kParseError);
    CHECK(run({"norm", "--space", "l2:2", "--expr", "d(1,0,0)"}).code == fbl::cli::kConfigError);
    CHECK(run({"norm", "--space", "l2:2", "--expr", "d(1,0) + d(1,0,0)"}).code == fbl::cli::kParseError);
    CHECK(run({"norm", "--space", "l2:2", "--expr", "d(1,0)", "--k", "30"}).code == fbl::cli::kConfigError);
    CHECK(run({"norm", "--space", "l2:2", "--expr", "f(1)", "--ramp", "cubic"}).code == fbl::cli::kConfigError);
    CHECK(run({"norm", "--space", "l2:2", "--bogus"}).code == fbl::cli::kConfigError);
    CHECK(run({"norm", "--expr", "d(1)"}).code == fbl::cli::kConfigError);
    CHECK(run({}).code == fbl::cli::kConfigError);
}

TEST_CASE("lift-verify command")
{
    const Result ok = run({"lift-verify", "--space", "l2:4", "--seed", "0", "--instances", "500",
                           "--vectors", "5", "--tail-restarts", "10"});
    CHECK(ok.code == fbl::cli::kPass);
    const json r = ok.report();
    CHECK(r["passed"] == true);
    CHECK(r["failures"].empty());
    std::vector<std::string> names;
    for (const auto& part : r["details"]["reports"]) names.push_back(part["check"]);
    for (const char* name : {"biorthogonal", "disjoint", "normspan", "freenorm"}) {
        CHECK(std::find(names.begin(), names.end(), name) != names.end());
    }

    const Result harmonic = run({"lift-verify", "--space", "l2:6", "--mseq", "harmonic"});
    CHECK(harmonic.code == fbl::cli::kConfigError);
    CHECK(harmonic.report()["error"] == "config");
    CHECK(run({"lift-verify", "--space", "l2:6", "--mseq", "custom:2,4"}).code == fbl::cli::kConfigError);
}

TEST_CASE("lemma44 command")
{
    const Result ok = run({"lemma44", "--space", "l2:8", "--instances", "1000", "--seed", "0"});
    CHECK(ok.code == fbl::cli::kPass);
    CHECK(ok.report()["instances"] == 1000);

    const Result empty = run({"lemma44", "--instances", "0"});
    CHECK(empty.code == fbl::cli::kPass);
    CHECK(empty.report()["instances"] == 0);
    CHECK(empty.report()["failures"].empty());

    CHECK(run({"lemma44", "--l", "30"}).code == fbl::cli::kConfigError);
}

TEST_CASE("reports are reproducible and can go to a file")
{
    const std::vector<std::string> job = {"lemma44", "--instances", "300", "--seed", "11"};
    const std::vector<std::string> threaded = {"norm", "--space", "linf:3", "--expr", "|d(1,1,0)| ^ d(0,1,1)",
                                               "--restarts", "8", "--threads", "3", "--seed", "2"};
    const std::vector<std::string> serial = {"norm", "--space", "linf:3", "--expr", "|d(1,1,0)| ^ d(0,1,1)",
                                             "--restarts", "8", "--threads", "1", "--seed", "2"};
    CHECK(fbl::cli::strip_timestamp(run(job).out) == fbl::cli::strip_timestamp(run(job).out));
    CHECK(fbl::cli::strip_timestamp(run(threaded).out) == fbl::cli::strip_timestamp(run(serial).out));
    CHECK(fbl::cli::strip_timestamp(run(job).out).find("timestamp") == std::string::npos);

    const auto path = std::filesystem::temp_directory_path() / "fblbench_test_report.json";
    std::filesystem::remove(path);
    auto to_file = job;
    to_file.insert(to_file.end(), {"--out", path.string()});
    const Result written = run(to_file);
    CHECK(written.code == fbl::cli::kPass);
    CHECK(written.out.empty());
    std::ifstream file(path);
    std::stringstream text;
    text << file.rdbuf();
    CHECK(fbl::cli::strip_timestamp(text.str()) == fbl::cli::strip_timestamp(run(job).out));
    std::filesystem::remove(path);
}
