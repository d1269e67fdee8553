// jscmd: multiple-description joint source-channel decoding simulator.
//
//   jscmd run --config exp.json --out results.csv [--threads 4]
//   jscmd check-monge --rho 0.9 --cells 21
//   jscmd selftest
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jscmd/harness.hpp"
#include "jscmd/map_decoder.hpp"
#include "jscmd/oracles.hpp"
#include "jscmd/serialization.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

int cmd_run(const std::string& config_path, const std::string& out_path,
            const std::vector<std::string>& decoders,
            std::uint64_t seed, bool seed_set, unsigned threads,
            const std::string& dump_codebook) {
    jscmd::ExperimentConfig cfg =
        jscmd::config_from_json(read_file(config_path));
    if (!decoders.empty()) cfg.decoders = decoders;
    if (seed_set) cfg.base_seed = seed;
    jscmd::validate_config(cfg);

    if (!dump_codebook.empty()) {
        auto cb = jscmd::build_2dsq(cfg.codebook.l1, cfg.codebook.spread,
                                    jscmd::GaussMarkovSource{},
                                    cfg.codebook.cell_width);
        write_file(dump_codebook, jscmd::codebook_to_json(cb));
    }

    auto rows = jscmd::run_experiment(cfg, threads);
    write_file(out_path, jscmd::emit_csv(rows));

    std::size_t infeasible = 0;
    for (const auto& row : rows) infeasible += row.infeasible;
    std::cerr << "wrote " << rows.size() << " rows to " << out_path;
    if (infeasible > 0)
        std::cerr << " (" << infeasible << " infeasible decodes skipped)";
    std::cerr << "\n";
    return 0;
}

int cmd_check_monge(double rho, std::size_t cells, bool exhaustive) {
    if (cells < 2) throw std::runtime_error("--cells must be >= 2");
    jscmd::GaussMarkovSource src{rho};
    // Uniform cells over the default span, matching the simulator's
    // codebook layout.
    std::vector<double> boundaries(cells + 1);
    boundaries.front() = -std::numeric_limits<double>::infinity();
    boundaries.back() = std::numeric_limits<double>::infinity();
    double w = cells > 2 ? 7.0 / static_cast<double>(cells - 2) : 1.0;
    double first = -0.5 * static_cast<double>(cells - 2) * w;
    for (std::size_t j = 1; j < cells; ++j)
        boundaries[j] = first + static_cast<double>(j - 1) * w;

    auto model = jscmd::derive_markov_model(src, boundaries);
    auto res = jscmd::check_monge(model, exhaustive);
    if (res.holds) {
        std::cout << "monge: holds (rho=" << rho << ", cells=" << cells
                  << ")\n";
        return 0;
    }
    std::cout << "monge: violated at a=" << res.a << " a'=" << res.a2
              << " b=" << res.b << " b'=" << res.b2 << "\n";
    return 2;
}

int cmd_selftest(int instances, std::uint64_t seed) {
    using jscmd::oracle::SuiteResult;
    bool ok = true;
    auto report = [&](const char* name, const SuiteResult& res) {
        std::cout << (res.ok() ? "[PASS] " : "[FAIL] ") << name << ": "
                  << res.instances << " instances, max |diff| = "
                  << res.max_abs_diff << "\n";
        ok = ok && res.ok();
    };
    report("map vs exhaustive search",
           jscmd::oracle::run_map_suite(instances, seed));
    report("forward-backward vs exhaustive marginals",
           jscmd::oracle::run_mmse_suite(instances, seed));
    report("hmm joint map vs exhaustive search",
           jscmd::oracle::run_hmm_suite(instances, seed));
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"joint source-channel multiple description decoding"};
    app.require_subcommand(1);

    std::string config_path, out_path, dump_codebook;
    std::vector<std::string> decoders;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    auto* run = app.add_subcommand("run", "run a simulation grid");
    run->add_option("--config", config_path, "experiment JSON")->required();
    run->add_option("--out", out_path, "output CSV path")->required();
    run->add_option("--decoders", decoders,
                    "override the config's decoder list")
        ->delimiter(',');
    auto* seed_opt =
        run->add_option("--seed", seed, "override the config's base seed");
    run->add_option("--threads", threads, "worker threads (default 1)");
    run->add_option("--dump-codebook", dump_codebook,
                    "also write the codebook JSON here");

    double rho = 0.9;
    std::size_t cells = 21;
    bool exhaustive = false;
    auto* monge = app.add_subcommand(
        "check-monge", "test the fast-path condition for a Gaussian source");
    monge->add_option("--rho", rho, "correlation coefficient")->required();
    monge->add_option("--cells", cells, "central codebook size")->required();
    monge->add_flag("--exhaustive", exhaustive, "scan every quadruple");

    int instances = 60;
    std::uint64_t selftest_seed = 7;
    auto* selftest =
        app.add_subcommand("selftest", "run the randomized oracle suites");
    selftest->add_option("--instances", instances, "instances per suite");
    selftest->add_option("--seed", selftest_seed, "suite seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, out_path, decoders, seed,
                           seed_opt->count() > 0, threads, dump_codebook);
        if (monge->parsed()) return cmd_check_monge(rho, cells, exhaustive);
        if (selftest->parsed()) return cmd_selftest(instances, selftest_seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
