#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

#include <mginf/cli.hpp>

#include "helpers.hpp"

using test_util::check_close;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliResult r;
    r.code = mginf::run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    return cells;
}

// first data row whose leading cell matches
std::vector<std::string> find_row(const std::string& csv, const std::string& key) {
    for (const auto& line : lines_of(csv)) {
        const auto cells = cells_of(line);
        if (!cells.empty() && cells[0] == key) return cells;
    }
    FAIL("row not found: " << key);
    return {};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    REQUIRE(f.good());
    f << content;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kKnotFile = "/tmp/mginf_cli_knots.csv";

}  // namespace

TEST_CASE("eval G emits the service cdf with the atom at zero") {
    const CliResult r = run({"eval", "--target", "G"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 102);  // header + 101 grid points
    CHECK(lines[0] == "t,value");
    const auto row0 = cells_of(lines[1]);
    CHECK(row0[0] == "0");
    check_close(std::stod(row0[1]), 0.36787944117144233, 1e-12);

    const CliResult again = run({"eval", "--target", "G"});
    CHECK(again.out == r.out);  // byte-identical rerun
}

TEST_CASE("eval B in both methods reports the sup difference") {
    const CliResult r = run({"eval", "--target", "B", "--method", "both"});
    REQUIRE(r.code == 0);
    const auto row = find_row(r.out, "1");
    REQUIRE(row.size() == 3);
    check_close(std::stod(row[1]), 0.56244575248823614, 1e-10);
    check_close(std::stod(row[2]), 0.56244575248823614, 1e-3);
    const auto footer = find_row(r.out, "footer");
    REQUIRE(footer.size() == 3);
    CHECK(footer[1] == "sup_diff");
    CHECK(std::stod(footer[2]) < 1e-3);
}

TEST_CASE("eval bounds reproduces the Erlang limit row") {
    const CliResult r = run({"eval", "--target", "bounds", "--rho", "0.69314718055994531", "--t-max", "2",
                             "--steps", "3"});
    REQUIRE(r.code == 0);
    const auto row = find_row(r.out, "1");
    REQUIRE(row.size() == 4);
    check_close(std::stod(row[2]), 0.26424111765711536, 1e-9);
    check_close(std::stod(row[3]), -std::expm1(-1.0), 1e-12);
}

TEST_CASE("eval R starts at exactly one") {
    const CliResult r = run({"eval", "--target", "R", "--method", "both"});
    REQUIRE(r.code == 0);
    const auto row = find_row(r.out, "0");
    CHECK(row[1] == "1");
    CHECK(row[2] == "1");
}

TEST_CASE("eval on a tabulated law uses the general route") {
    write_file(kKnotFile, "t,beta\n0,-0.2\n1,0.1\n3,0.05\n");
    const CliResult closed = run({"eval", "--target", "B", "--beta-table", kKnotFile, "--method", "closed"});
    CHECK(closed.code == 2);
    CHECK(closed.err.find("closed") != std::string::npos);

    const CliResult general = run({"eval", "--target", "G", "--beta-table", kKnotFile, "--t-max", "2", "--steps",
                                   "5"});
    REQUIRE(general.code == 0);
    check_close(std::stod(find_row(general.out, "0.5")[1]), 0.46467140781240488, 1e-8);
}

TEST_CASE("eval density grid skips the origin") {
    const CliResult r = run({"eval", "--target", "g", "--t-max", "1", "--steps", "11"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    REQUIRE(lines.size() == 11);  // header + 10 rows, t = 0 omitted
    CHECK(cells_of(lines[1])[0] == "0.1");
}

TEST_CASE("moments of the busy period and cycle use the recursion") {
    const CliResult b = run({"moments", "--which", "B", "--n-max", "2"});
    REQUIRE(b.code == 0);
    const auto row1 = find_row(b.out, "1");
    check_close(std::stod(row1[1]), std::expm1(1.0), 1e-10);
    CHECK(row1[2] == "recursion");
    check_close(std::stod(find_row(b.out, "2")[1]), 9.34154854094321, 1e-8);

    const CliResult z = run({"moments", "--which", "Z", "--n-max", "1"});
    REQUIRE(z.code == 0);
    check_close(std::stod(find_row(z.out, "1")[1]), std::exp(1.0), 1e-10);

    CHECK(run({"moments", "--which", "B", "--method", "quadrature"}).code == 2);
}

TEST_CASE("service moments expose all three methods") {
    const CliResult quad = run({"moments", "--which", "T", "--n-max", "2"});
    REQUIRE(quad.code == 0);
    const auto row = find_row(quad.out, "2");
    check_close(std::stod(row[1]), 2.5550092682245, 1e-7);
    CHECK(row[2] == "quadrature");
    check_close(std::stod(row[3]), 0.0, 10.0);  // lower bound column present
    REQUIRE(row.size() == 5);

    const CliResult series = run({"moments", "--which", "T", "--rho", "0.5", "--method", "series", "--n-max", "2"});
    REQUIRE(series.code == 0);
    const auto srow = find_row(series.out, "2");
    check_close(std::stod(srow[1]), 1.13192715679061, 1e-6);
    CHECK(srow[2] == "series");
    CHECK(std::stoi(srow[3]) > 0);  // truncation column

    const CliResult disc =
        run({"moments", "--which", "T", "--method", "discretized", "--m", "2048", "--n-max", "2"});
    REQUIRE(disc.code == 0);
    check_close(std::stod(find_row(disc.out, "2")[1]), 2.55549759971318, 1e-8);
}

TEST_CASE("series moments outside their scope are usage errors") {
    const CliResult hot = run({"moments", "--which", "T", "--method", "series"});
    CHECK(hot.code == 2);
    CHECK(hot.err.find("ln 2") != std::string::npos);
    const CliResult tab =
        run({"moments", "--which", "T", "--method", "series", "--beta-table", kKnotFile});
    CHECK(tab.code == 2);
    CHECK(tab.err.find("constant") != std::string::npos);
}

TEST_CASE("parameter surface flags are mutually exclusive where ambiguous") {
    CHECK(run({"peaks", "--eta", "0.1", "--beta", "0.2"}).code == 2);
    CHECK(run({"peaks", "--eta", "0.1", "--p", "0.3"}).code == 2);
    CHECK(run({"peaks", "--beta", "0.1", "--beta-table", kKnotFile}).code == 2);
}

TEST_CASE("peaks agree between CSV and JSON encodings") {
    const CliResult csv = run({"peaks"});
    REQUIRE(csv.code == 0);
    const CliResult json_run = run({"--format", "json", "peaks"});
    REQUIRE(json_run.code == 0);
    const auto doc = nlohmann::json::parse(json_run.out);
    for (const auto& row : doc["rows"]) {
        const std::string name = row[0].get<std::string>();
        const double json_value = row[1].get<double>();
        const double csv_value = std::stod(find_row(csv.out, name)[1]);
        CHECK(csv_value == json_value);
    }
    check_close(std::stod(find_row(csv.out, "pi")[1]), 0.53788284273999024, 1e-12);
    check_close(std::stod(find_row(csv.out, "pi_prime")[1]), 0.26894142136999512, 1e-12);
    check_close(std::stod(find_row(csv.out, "pi_parametric")[1]), 0.53788284273999024, 1e-12);
}

TEST_CASE("simulate reports summary statistics and is reproducible") {
    const std::vector<std::string> args{"simulate", "--n-cycles", "2000", "--seed", "42"};
    const CliResult r = run(args);
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["seed_echo"].get<std::uint64_t>() == 42);
    CHECK(doc["n_cycles"].get<std::size_t>() == 2000);
    check_close(doc["model_atom"].get<double>(), 0.36787944117144233, 1e-12);
    check_close(doc["atom_fraction_B"].get<double>(), doc["model_atom"].get<double>(), 0.04);
    check_close(doc["empirical_mean_B"].get<double>(), doc["model_mean_B"].get<double>(), 0.2);
    CHECK(doc["ks_B"].get<double>() < doc["dkw_99"].get<double>());
    CHECK(doc["ks_Z"].get<double>() < doc["dkw_99"].get<double>());

    const CliResult again = run(args);
    CHECK(again.out == r.out);
}

TEST_CASE("simulate with a degenerate law reports a pure atom") {
    const CliResult r = run({"simulate", "--beta", "-1", "--n-cycles", "500", "--seed", "1"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["atom_fraction_B"].get<double>() == 1.0);
}

TEST_CASE("simulate dumps samples and renewal counts to files") {
    const std::string prefix = "/tmp/mginf_cli_dump";
    const std::vector<std::string> args{"simulate", "--n-cycles",    "300", "--seed", "9",
                                        "--replications", "3",       "--dump-prefix", prefix};
    REQUIRE(run(args).code == 0);
    const std::string busy = read_file(prefix + "_busy.txt");
    CHECK(lines_of(busy).size() == 300);
    const std::string renewal = read_file(prefix + "_renewal.csv");
    const auto rlines = lines_of(renewal);
    CHECK(rlines[0] == "replication,t,count");
    CHECK(rlines.size() == 1 + 3 * 11);  // default grid has 11 time points

    REQUIRE(run(args).code == 0);
    CHECK(read_file(prefix + "_busy.txt") == busy);  // byte-identical rerun
}

TEST_CASE("simulate renewal summary starts at count one") {
    const CliResult r = run({"simulate", "--n-cycles", "50", "--seed", "4", "--replications", "5"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.contains("renewal"));
    CHECK(doc["renewal"]["mean_counts"][0].get<double>() == 1.0);
    CHECK(doc["renewal"]["model"][0].get<double>() == 1.0);
}

TEST_CASE("environment variable provides the default seed") {
    ::setenv("MGINF_SEED", "123", 1);
    const CliResult env_run = run({"simulate", "--n-cycles", "10"});
    REQUIRE(env_run.code == 0);
    CHECK(nlohmann::json::parse(env_run.out)["seed_echo"].get<std::uint64_t>() == 123);

    const CliResult flag_run = run({"simulate", "--n-cycles", "10", "--seed", "9"});
    CHECK(nlohmann::json::parse(flag_run.out)["seed_echo"].get<std::uint64_t>() == 9);

    ::setenv("MGINF_SEED", "not-a-number", 1);
    CHECK(run({"simulate", "--n-cycles", "10"}).code == 2);
    ::unsetenv("MGINF_SEED");
}

TEST_CASE("validate passes on the canonical law and is deterministic") {
    const CliResult r = run({"--format", "json", "validate", "--seed", "1"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["overall_pass"].get<bool>());
    CHECK(doc["budget"].get<std::string>() == "quick");
    const auto& checks = doc["checks"];
    REQUIRE(checks.size() > 10);
    for (std::size_t i = 1; i < checks.size(); ++i)
        CHECK(checks[i - 1]["name"].get<std::string>() < checks[i]["name"].get<std::string>());
    bool found_flag = false;
    for (const auto& flag : doc["paper_flags"])
        if (flag["site"].get<std::string>() == "renewal_closed_last_term") {
            found_flag = true;
            CHECK(std::abs(flag["printed_value"].get<double>() - flag["computed_value"].get<double>()) > 1e-6);
        }
    CHECK(found_flag);

    const CliResult csv = run({"validate", "--seed", "1"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.find("riccati_residual_max") != std::string::npos);
    // CSV and JSON carry identical numeric values
    for (const auto& check : checks) {
        const auto row = find_row(csv.out, check["name"].get<std::string>());
        CHECK(std::stod(row[2]) == check["lhs"].get<double>());
    }

    const CliResult again = run({"validate", "--seed", "1"});
    CHECK(again.out == csv.out);
}

TEST_CASE("validate full budget passes the Monte Carlo suite") {
    const CliResult r = run({"--format", "json", "validate", "--budget", "full", "--seed", "42", "--n-cycles"});
    CHECK(r.code == 2);  // stray flag is rejected

    const CliResult full = run({"--format", "json", "validate", "--budget", "full", "--seed", "42"});
    REQUIRE(full.code == 0);
    const auto doc = nlohmann::json::parse(full.out);
    CHECK(doc["overall_pass"].get<bool>());
    bool has_mc = false;
    for (const auto& check : doc["checks"])
        if (check["kind"].get<std::string>() == "monte-carlo") has_mc = true;
    CHECK(has_mc);
}

TEST_CASE("validate rejects parameters outside the admissible band") {
    CHECK(run({"validate", "--eta", "10"}).code == 2);
    CHECK(run({"validate", "--budget", "sometimes"}).code == 2);
}

TEST_CASE("validate on a tabulated law runs the numeric-only suite") {
    const CliResult r = run({"--format", "json", "validate", "--beta-table", kKnotFile, "--seed", "2"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["overall_pass"].get<bool>());
}

TEST_CASE("output lands in the requested file") {
    const std::string path = "/tmp/mginf_cli_out.csv";
    const CliResult direct = run({"eval", "--target", "G", "--steps", "5"});
    const CliResult filed = run({"--out", path, "eval", "--target", "G", "--steps", "5"});
    REQUIRE(filed.code == 0);
    CHECK(filed.out.empty());
    CHECK(read_file(path) == direct.out);
}

TEST_CASE("sweep emits the long-format table") {
    const CliResult r = run({"sweep", "--rho-list", "0.5,1", "--eta-list", "0"});
    REQUIRE(r.code == 0);
    const auto lines = lines_of(r.out);
    CHECK(lines[0] == "lambda,rho,eta,quantity,value");
    CHECK(lines.size() == 1 + 2 * 7);
    bool found = false;
    for (const auto& line : lines) {
        const auto cells = cells_of(line);
        if (cells.size() == 5 && cells[1] == "1" && cells[3] == "pi") {
            check_close(std::stod(cells[4]), 0.53788284273999024, 1e-12);
            found = true;
        }
    }
    CHECK(found);
    CHECK(run({"sweep", "--eta-list", "9"}).code == 2);  // outside the band
}

TEST_CASE("usage surface") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"eval", "--target", "X"}).code == 2);
    CHECK(run({"eval", "--steps", "1"}).code == 2);
    CHECK(run({"eval", "--t-max", "-1"}).code == 2);
    CHECK(run({"--format", "yaml", "peaks"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"eval", "--beta-table", "/tmp/definitely_missing_knots.csv"}).code == 2);
}

TEST_CASE("non-convergent requests exit with the numeric code") {
    // just below the rho < ln 2 series gate, the term ratio sits at 1 - 1e-9
    // and the tail bound cannot reach tolerance within the term budget
    const CliResult r = run({"moments", "--which", "T", "--method", "series", "--rho", "0.693147180", "--n-max", "1"});
    CHECK(r.code == 4);
    CHECK(!r.err.empty());
}
