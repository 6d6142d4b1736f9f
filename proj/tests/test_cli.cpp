#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include <sys/wait.h>

using json = nlohmann::ordered_json;

namespace {

const std::string kCli = WEBCLUST_CLI_PATH;
const std::string kFixture = std::string(WEBCLUST_DATA_DIR) + "/table1.seq";

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

RunResult run(const std::string& args) {
    std::string out_path = "cli_stdout.tmp", err_path = "cli_stderr.tmp";
    std::string command = kCli + " " + args + " >" + out_path + " 2>" + err_path;
    int status = std::system(command.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

}  // namespace

TEST_CASE("stats: json document with metadata and the fixture numbers") {
    auto r = run("stats --input " + kFixture);
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);  // throws (failing the test) on bad JSON
    CHECK(doc["metadata"]["tool"] == "webclust");
    CHECK(doc["metadata"]["command"] == "stats");
    CHECK(doc["metadata"]["inputs"]["input_digest"].get<std::string>().starts_with(
        "fnv1a64:"));
    CHECK(doc["stats"]["num_sessions"] == 13);
    CHECK(doc["stats"]["num_categories"] == 17);
    CHECK(doc["stats"]["avg_visits"].get<double>() == 53.0 / 13.0);
}

TEST_CASE("stats: csv is a header row plus one data row") {
    auto r = run("stats --input " + kFixture + " --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out == "num_sessions,avg_visits,num_categories,length_min,length_max\n"
                   "13,4.076923076923077,17,1,13\n");
}

TEST_CASE("tolerance: golden clusters at p=0.5") {
    auto r = run("tolerance --input " + kFixture + " --p 0.5");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    json expected = json::array(
        {{1, 5, 7, 11, 13}, {2}, {3}, {4}, {6, 8}, {9}, {10}, {12}});
    CHECK(doc["clusters"] == expected);
    CHECK(doc["threshold"] == 0.5);
    CHECK(doc["classes"].size() == 13);
}

TEST_CASE("tolerance: identical page sets merge even at p=1.0") {
    auto r = run("tolerance --input " + kFixture + " --p 1.0");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["clusters"][0] == json::array({1, 5, 7, 11, 13}));
}

TEST_CASE("tolerance: out-of-range threshold is a usage error") {
    CHECK(run("tolerance --input " + kFixture + " --p 1.5").exit_code == 1);
    CHECK(run("tolerance --input " + kFixture + " --p 0").exit_code == 1);
}

TEST_CASE("tolerance: csv form and matrix dump") {
    auto r = run("tolerance --input " + kFixture + " --format csv --dump-matrix sim.tmp");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.starts_with("item_id,tolerance_class,cluster_id\n1,1 5 7 11 13,1\n"));

    auto matrix = slurp("sim.tmp");
    std::remove("sim.tmp");
    CHECK(matrix.starts_with("i,j,similarity\n"));
    // 13 items -> 78 unordered pairs plus the header
    CHECK(std::count(matrix.begin(), matrix.end(), '\n') == 79);
}

TEST_CASE("fcm: default run emits weights, centers, memberships and clusters") {
    auto r = run("fcm --input " + kFixture);
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["metadata"]["config"]["alpha"] == 0.5);
    CHECK(doc["metadata"]["config"]["seed"] == 42);
    CHECK(doc["weights"]["method"] == "uniform");
    CHECK(doc["converged"].is_boolean());
    CHECK(doc["iterations"].get<int>() >= 1);
    CHECK(doc["centers"].size() == doc["memberships"][0].size());
    CHECK(doc["memberships"].size() == 13);
    CHECK(doc["objective_trace"].size() == doc["iterations"].get<std::size_t>());
    CHECK(doc["clusters"].is_array());
}

TEST_CASE("fcm: alpha 0 runs the hard assignment step") {
    auto r = run("fcm --input " + kFixture + " --alpha 0");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["metadata"]["config"]["alpha"] == 0.0);
}

TEST_CASE("fcm: gain-ratio weighting zeroes never-visited categories") {
    auto r = run("fcm --input " + kFixture + " --weights gain_ratio");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    auto weights = doc["weights"]["weights"].get<std::vector<double>>();
    REQUIRE(weights.size() == 17);
    CHECK(weights[10] == 0.0);  // category 11 never occurs in the fixture
    CHECK(weights[0] > 0.0);
    CHECK(doc["weights"]["method"] == "gain_ratio");
}

TEST_CASE("fcm: csv form is the hardened assignment table") {
    auto r = run("fcm --input " + kFixture + " --format csv");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.starts_with("item_id,cluster_id\n1,"));
    CHECK(run("fcm --input " + kFixture + " --format csv --emit-memberships").exit_code ==
          1);
}

TEST_CASE("fcm: domain errors in parameters are usage errors") {
    CHECK(run("fcm --input " + kFixture + " --m 1").exit_code == 1);
    CHECK(run("fcm --input " + kFixture + " --beta 1").exit_code == 1);
    CHECK(run("fcm --input " + kFixture + " --alpha 1.2").exit_code == 1);
    CHECK(run("fcm --input " + kFixture + " --epsilon 0").exit_code == 1);
    CHECK(run("fcm --input " + kFixture + " --weights bogus").exit_code == 1);
}

TEST_CASE("eval: a partition against itself is all ones") {
    REQUIRE(run("tolerance --input " + kFixture + " --output eval_self.tmp").exit_code ==
            0);
    auto r = run("eval --clusters eval_self.tmp --labels eval_self.tmp");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["purity"] == 1.0);
    CHECK(doc["inverse_purity"] == 1.0);
    CHECK(doc["purity_f"] == 1.0);
    CHECK(doc["n"] == 13);
    std::remove("eval_self.tmp");
}

TEST_CASE("eval: json clusters against csv labels, with pair detail") {
    REQUIRE(run("tolerance --input " + kFixture + " --p 0.5 --output ej.tmp").exit_code ==
            0);
    REQUIRE(run("tolerance --input " + kFixture +
                " --p 0.3 --format csv --output ec.tmp")
                .exit_code == 0);
    auto r = run("eval --clusters ej.tmp --labels ec.tmp --with-pairs");
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["purity"] == 1.0);  // p=0.5 clusters refine the p=0.3 ones
    CHECK(doc["pairs"].is_array());
    CHECK(!doc["pairs"].empty());

    auto csv = run("eval --clusters ej.tmp --labels ec.tmp --format csv");
    REQUIRE(csv.exit_code == 0);
    CHECK(csv.out.starts_with("purity,inverse_purity,purity_f,n\n1,"));
    CHECK(run("eval --clusters ej.tmp --labels ec.tmp --format csv --with-pairs")
              .exit_code == 1);
    std::remove("ej.tmp");
    std::remove("ec.tmp");
}

TEST_CASE("eval: universe mismatch exits 2 naming the ids") {
    spit("u_a.tmp", "{\"clusters\": [[1,2,3]]}");
    spit("u_b.tmp", "{\"clusters\": [[1,2],[9]]}");
    auto r = run("eval --clusters u_a.tmp --labels u_b.tmp");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("3") != std::string::npos);
    CHECK(r.err.find("9") != std::string::npos);
    std::remove("u_a.tmp");
    std::remove("u_b.tmp");
}

TEST_CASE("eval: a bare json array of clusters is accepted") {
    spit("bare.tmp", "[[1,2],[3]]");
    auto r = run("eval --clusters bare.tmp --labels bare.tmp");
    CHECK(r.exit_code == 0);
    std::remove("bare.tmp");
}

TEST_CASE("parse errors exit 2 with line context") {
    // with the builtin dictionary every data line must be all-integer
    spit("bad.tmp", "1 2\n1 junk\n");
    auto r = run("stats --dict msnbc --input bad.tmp");
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);

    // in embedded mode the junk line reads as a dictionary candidate, so the
    // complaint is about the missing data rows — still an input error
    spit("bad2.tmp", "a b\n1 junk\n");
    CHECK(run("stats --input bad2.tmp").exit_code == 2);
    std::remove("bad.tmp");
    std::remove("bad2.tmp");
}

TEST_CASE("usage errors exit 1") {
    CHECK(run("stats").exit_code == 1);                      // missing --input
    CHECK(run("stats --input no_such_file.seq").exit_code == 1);
    CHECK(run("").exit_code == 1);                           // subcommand required
    CHECK(run("frobnicate").exit_code == 1);
}

TEST_CASE("--version and --help exit 0") {
    auto v = run("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("0.1.0") != std::string::npos);
    CHECK(run("--help").exit_code == 0);
}

TEST_CASE("config file: json and toml both feed defaults, flags win") {
    spit("cfg.json", "{\"fcm\": {\"alpha\": 0.25, \"weights\": \"info_gain\"}}");
    auto r = run("--config cfg.json fcm --input " + kFixture);
    REQUIRE(r.exit_code == 0);
    auto doc = json::parse(r.out);
    CHECK(doc["metadata"]["config"]["alpha"] == 0.25);
    CHECK(doc["metadata"]["config"]["weights"] == "info_gain");

    spit("cfg.toml", "[fcm]\nalpha = 0.75\n");
    auto t = run("--config cfg.toml fcm --input " + kFixture + " --alpha 0.9");
    REQUIRE(t.exit_code == 0);
    CHECK(json::parse(t.out)["metadata"]["config"]["alpha"] == 0.9);

    spit("cfg_bad.json", "{\"fcm\": {\"no_such_option\": 1}}");
    CHECK(run("--config cfg_bad.json fcm --input " + kFixture).exit_code == 1);

    spit("cfg_syntax.json", "{broken");
    CHECK(run("--config cfg_syntax.json fcm --input " + kFixture).exit_code == 1);

    std::remove("cfg.json");
    std::remove("cfg.toml");
    std::remove("cfg_bad.json");
    std::remove("cfg_syntax.json");
}

TEST_CASE("verbose notes go to stderr, never stdout") {
    auto r = run("-v fcm --input " + kFixture);
    REQUIRE(r.exit_code == 0);
    CHECK(!r.err.empty());
    CHECK(json::parse(r.out).contains("metadata"));
}

TEST_CASE("every subcommand is byte-deterministic across runs and thread counts") {
    struct Case {
        const char* name;
        std::string args;
        bool threaded;
    };
    std::vector<Case> cases{
        {"stats", "stats --input " + kFixture, true},
        {"tolerance", "tolerance --input " + kFixture + " --p 0.5", true},
        {"fcm", "fcm --input " + kFixture + " --weights gain_ratio", true},
    };
    for (const auto& c : cases) {
        auto a = run(c.args + " --threads 1");
        auto b = run(c.args + " --threads 1");
        auto d = run(c.args + " --threads 8");
        REQUIRE(a.exit_code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out == d.out);
        CHECK(!a.out.empty());
    }
    // eval has no threading; still byte-stable across runs
    spit("det.tmp", "[[1,2],[3]]");
    auto a = run("eval --clusters det.tmp --labels det.tmp");
    auto b = run("eval --clusters det.tmp --labels det.tmp");
    CHECK(a.out == b.out);
    std::remove("det.tmp");
}

TEST_CASE("--output writes the same bytes the terminal would get") {
    auto direct = run("tolerance --input " + kFixture);
    auto filed = run("tolerance --input " + kFixture + " --output out.tmp");
    REQUIRE(filed.exit_code == 0);
    CHECK(filed.out.empty());
    CHECK(slurp("out.tmp") == direct.out);
    std::remove("out.tmp");
}
