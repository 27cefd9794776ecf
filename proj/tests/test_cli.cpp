// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dpu::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path tmp(const std::string& name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST_CASE("dse prints the selected scheme") {
    const auto r = run({"--format", "csv", "dse", "--bwf", "32", "--bww", "16"});
    CHECK(r.code == 0);
    CHECK(r.out.find("32,16,4,64,32,64,256,256,256,1") != std::string::npos);
    const auto grid = run({"--format", "json", "dse"});
    CHECK(nlohmann::json::parse(grid.out).size() == 16);
}

TEST_CASE("paper-check passes") {
    const auto r = run({"paper-check"});
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("all checks passed") != std::string::npos);
}

TEST_CASE("exit codes") {
    auto r = run({"schedule", "missing.txt"});
    CHECK(r.code == 1);
    CHECK(r.err.find("missing.txt") != std::string::npos);

    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"dse", "--nope"}).code == 2);
    CHECK(run({"--format", "xml", "dse"}).code == 2);
    CHECK(run({"cascade", "--bubble", "2-5"}).code == 2);
    CHECK(run({"schedule"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    CHECK(run({"dse", "--help"}).code == 0);

    r = run({"schedule", "--builtin", "mobilenet_v1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("DWC") != std::string::npos);
    CHECK(run({"schedule", "--builtin", "mobilenet_v1", "--pe", "6", "--dwc", "2"}).code == 0);
    CHECK(run({"schedule", "--builtin", "mobilenet_v1", "--pe", "8", "--dwc", "1"}).code == 1);
}

TEST_CASE("every subcommand renders every format") {
    const std::vector<std::vector<std::string>> cmds = {
        {"dse"},
        {"buffers"},
        {"layer", "--ih", "224", "--iw", "224", "--ic", "3", "--oc", "64", "--k", "7", "--s", "2"},
        {"layer", "--kind", "dwc", "--ic", "32", "--oc", "32"},
        {"cascade", "--iters", "8", "--bubble", "1:4", "--bubble", "3:9"},
        {"dwc"},
        {"emulate", "--random", "--ih", "6", "--iw", "5", "--ic", "20", "--oc", "9"},
        {"emulate", "--random", "--kind", "dwc", "--ic", "24", "--k", "5", "--s", "2"},
        {"emulate", "--random", "--dwc-path", "--ic", "7", "--oc", "5"},
        {"schedule", "--builtin", "resnet50", "--low-channel", "--batch", "4"},
        {"report", "--builtin", "resnet50", "--pe", "4"},
        {"paper-check"},
    };
    for (const auto& cmd : cmds)
        for (const char* fmt : {"text", "csv", "json"}) {
            std::vector<std::string> args{"--format", fmt};
            args.insert(args.end(), cmd.begin(), cmd.end());
            const auto r = run(args);
            INFO(cmd.front() << " " << fmt << ": " << r.err);
            CHECK(r.code == 0);
            CHECK_FALSE(r.out.empty());
            if (std::string(fmt) == "json") CHECK(nlohmann::json::parse(r.out).is_structured());
        }
}

TEST_CASE("report flags conv1") {
    const auto r = run({"--format", "json", "report", "--builtin", "resnet50"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["lowest_utilization_conv"] == "conv1");
}

TEST_CASE("random emulation is reproducible from the seed") {
    auto tensor_for = [](const std::string& seed) {
        const auto p = tmp("dpu_cli_out_" + seed + ".txt");
        const auto r = run({"--seed", seed, "emulate", "--random", "--ic", "10", "--oc", "6", "--out-tensor", p.string()});
        REQUIRE(r.code == 0);
        auto s = slurp(p);
        std::filesystem::remove(p);
        return s;
    };
    CHECK(tensor_for("5") == tensor_for("5"));
    CHECK(tensor_for("5") != tensor_for("6"));
    CHECK(run({"--seed", "9", "emulate", "--random"}).out == run({"--seed", "9", "emulate", "--random"}).out);
}

TEST_CASE("emulate reads tensor files") {
    const auto in = tmp("dpu_cli_in.txt"), w = tmp("dpu_cli_w.txt"), b = tmp("dpu_cli_b.txt"), o = tmp("dpu_cli_o.txt");
    std::ofstream(in) << "1,2,2,1,0\n1\n2\n3\n4\n";
    std::ofstream(w) << "1,1,1,1,0\n3\n";
    std::ofstream(b) << "1\n";
    const auto r = run({"emulate", "--input", in.string(), "--weights", w.string(), "--bias", b.string(), "--act",
                        "identity", "--shift", "0", "--out-tensor", o.string()});
    CHECK(r.code == 0);
    CHECK(slurp(o) == "1,2,2,1,0\n4\n7\n10\n13\n");
    CHECK(run({"emulate", "--input", in.string()}).code == 2);
    for (const auto& p : {in, w, b, o}) std::filesystem::remove(p);
}

TEST_CASE("config and output file flags") {
    const auto cfg = tmp("dpu_cli_cfg.txt");
    std::ofstream(cfg) << "dpu.n_pe = 8\ndpu.pe_kinds = dwc, conv, conv, conv, conv, conv, conv, conv\n";
    const auto r = run({"--config", cfg.string(), "config"});
    CHECK(r.code == 1);
    CHECK(r.out.find("dwc limits design to 6PE") != std::string::npos);
    CHECK(run({"config"}).code == 0);
    CHECK(run({"--config", "/nonexistent/cfg", "config"}).code == 1);

    std::ofstream(cfg) << "dpu.n_pe = 4\ndpu.pe_kinds = conv, conv, conv, conv\ndpu.low_channel.enabled = true\n";
    const auto out = tmp("dpu_cli_report.csv");
    CHECK(run({"--config", cfg.string(), "--format", "csv", "--out", out.string(), "report", "--builtin",
               "resnet50"})
              .code == 0);
    const auto csv = slurp(out);
    CHECK(csv.rfind("name,kind,engine", 0) == 0);
    CHECK(csv.find("conv1,conv,low_channel") != std::string::npos);
    std::filesystem::remove(out);
    std::filesystem::remove(cfg);
}

TEST_CASE("cascade trace export") {
    const auto p = tmp("dpu_cli_trace.csv");
    const auto r = run({"cascade", "--iters", "2", "--bubble", "2:5", "--trace-csv", p.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("utilization 1.0000") != std::string::npos);
    const auto trace = slurp(p);
    CHECK(trace.rfind("cycle,core0,core1,core2,core3\n", 0) == 0);
    CHECK(trace.find("5,write_blocked,write_blocked,stall_injected,compute") != std::string::npos);
    std::filesystem::remove(p);
}
