#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "aqc/validate.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = AQC_CLI_PATH;

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

fs::path make_workdir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("aqc_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("count subcommand writes schema-complete reports") {
    const fs::path dir = make_workdir("count");
    write_file(dir / "instance.txt", "n=4\nmarked=0,3,7,9,12\n");

    const std::string base = "count --instance " + (dir / "instance.txt").string() +
                             " --m 4 --seed 3 --out " + (dir / "out").string();
    REQUIRE(run_cli(base) == 0);

    const auto result = nlohmann::json::parse(slurp(dir / "out" / "result.json"));
    REQUIRE(result.contains("alpha_hat"));
    REQUIRE(result["alpha_hat"].contains("value"));
    REQUIRE(result["alpha_hat"]["m"] == 4);
    REQUIRE(result["alpha_hat"]["bits"].size() == 5);
    REQUIRE(result["ledger"]["per_stage"].size() == 4);
    REQUIRE(result["ledger"]["total"].get<double>() > 0.0);
    REQUIRE(result["stages"].size() == 4);
    for (const auto& st : result["stages"]) {
        REQUIRE(st.contains("eta"));
        REQUIRE(st.contains("raw_phase"));
        REQUIRE(st.contains("qX"));
        REQUIRE(st.contains("qY"));
        REQUIRE(st.contains("R"));
        REQUIRE(st.contains("ideal_phase"));
        REQUIRE(st.contains("achieved_arg"));
    }

    SECTION("stage records stream as JSON lines") {
        std::ifstream jsonl(dir / "out" / "stages.jsonl");
        std::string line;
        int rows = 0;
        nlohmann::json last;
        while (std::getline(jsonl, line)) {
            last = nlohmann::json::parse(line);
            ++rows;
        }
        REQUIRE(rows == 5);  // four stages plus the summary line
        REQUIRE(last.contains("alpha_hat"));
        REQUIRE(last.contains("bits"));
        REQUIRE(last.contains("epsilon"));
    }

    SECTION("identical config and seed reproduce byte-identical outputs") {
        REQUIRE(run_cli("count --instance " + (dir / "instance.txt").string() +
                        " --m 4 --seed 3 --out " + (dir / "out2").string()) == 0);
        REQUIRE(slurp(dir / "out" / "result.json") == slurp(dir / "out2" / "result.json"));
        REQUIRE(slurp(dir / "out" / "stages.jsonl") == slurp(dir / "out2" / "stages.jsonl"));
    }

    SECTION("different seed changes the sampled frequencies") {
        REQUIRE(run_cli("count --instance " + (dir / "instance.txt").string() +
                        " --m 4 --seed 4 --out " + (dir / "out3").string()) == 0);
        REQUIRE(slurp(dir / "out" / "stages.jsonl") != slurp(dir / "out3" / "stages.jsonl"));
    }
}

TEST_CASE("count subcommand exit codes") {
    const fs::path dir = make_workdir("codes");
    write_file(dir / "instance.txt", "n=3\nmarked=5\n");

    SECTION("missing instance file") {
        REQUIRE(run_cli("count --instance " + (dir / "nope.txt").string() + " --out " +
                        (dir / "o").string()) == 1);
    }
    SECTION("malformed instance file") {
        write_file(dir / "bad.txt", "n=oops\nmarked=1\n");
        REQUIRE(run_cli("count --instance " + (dir / "bad.txt").string() + " --out " +
                        (dir / "o").string()) == 1);
    }
    SECTION("guard violation") {
        REQUIRE(run_cli("count --instance " + (dir / "instance.txt").string() +
                        " --m 30 --out " + (dir / "o").string()) == 2);
    }
    SECTION("invalid marked set") {
        write_file(dir / "heavy.txt", "n=3\nmarked=0,1,2,3\n");
        REQUIRE(run_cli("count --instance " + (dir / "heavy.txt").string() + " --out " +
                        (dir / "o").string()) == 2);
    }
}

TEST_CASE("config file with flag overrides") {
    const fs::path dir = make_workdir("config");
    write_file(dir / "instance.txt", "n=3\nmarked=5\n");
    write_file(dir / "run.cfg", "instance=" + (dir / "instance.txt").string() +
                                    "\nm=3\nseed=9\nout=" + (dir / "cfg_out").string() + "\n");

    REQUIRE(run_cli("count --config " + (dir / "run.cfg").string()) == 0);
    const auto from_cfg = nlohmann::json::parse(slurp(dir / "cfg_out" / "result.json"));
    REQUIRE(from_cfg["alpha_hat"]["m"] == 3);

    REQUIRE(run_cli("count --config " + (dir / "run.cfg").string() + " --m 4 --out " +
                    (dir / "cfg_out2").string()) == 0);
    const auto overridden = nlohmann::json::parse(slurp(dir / "cfg_out2" / "result.json"));
    REQUIRE(overridden["alpha_hat"]["m"] == 4);
}

TEST_CASE("scaling subcommand") {
    const fs::path dir = make_workdir("scaling");

    SECTION("writes the sweep and its slope") {
        REQUIRE(run_cli("scaling --m-lo 4 --m-hi 12 --out " + dir.string()) == 0);
        std::ifstream csv(dir / "scaling.csv");
        std::string header;
        std::getline(csv, header);
        REQUIRE(header == "m,epsilon,T_total");
        int rows = 0;
        std::string line;
        double prev_total = 0.0;
        while (std::getline(csv, line)) {
            ++rows;
            const auto c1 = line.find(','), c2 = line.find(',', line.find(',') + 1);
            REQUIRE(c1 != std::string::npos);
            const double total = std::stod(line.substr(c2 + 1));
            REQUIRE(total > prev_total);
            prev_total = total;
        }
        REQUIRE(rows == 9);
    }

    SECTION("byte-identical across reruns") {
        REQUIRE(run_cli("scaling --m-lo 4 --m-hi 8 --out " + (dir / "a").string()) == 0);
        REQUIRE(run_cli("scaling --m-lo 4 --m-hi 8 --out " + (dir / "b").string()) == 0);
        REQUIRE(slurp(dir / "a" / "scaling.csv") == slurp(dir / "b" / "scaling.csv"));
    }

    SECTION("degenerate range exits with the guard code") {
        REQUIRE(run_cli("scaling --m-lo 4 --m-hi 4 --out " + dir.string()) == 2);
    }
}

TEST_CASE("validate subcommand") {
    REQUIRE(run_cli("validate --level fast") == 0);
}

TEST_CASE("a sabotaged schedule fails the schedule-sum suite") {
    const auto good = aqc::schedule_sum_suite([](double th) { return aqc::schedule_weights(th); });
    REQUIRE(good.passed);

    const auto mutated = aqc::schedule_sum_suite([](double th) {
        auto w = aqc::schedule_weights(th);
        w.s3 = -w.s3;  // injected sign flip
        return w;
    });
    REQUIRE_FALSE(mutated.passed);
}
