#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ffspec/errors.hpp"
#include "ffspec/io.hpp"
#include "ffspec/scenario.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"Far-field operator spectra and phaseless retrieval scenarios"};
    app.require_subcommand(1);

    std::string config;
    std::string output_dir;
    bool use_corpus = false;
    int jobs = 0;
    auto* run = app.add_subcommand("run", "Run a scenario config or the bundled corpus");
    auto* config_opt = run->add_option("--config", config, "Scenario JSON file")->check(CLI::ExistingFile);
    auto* corpus_opt = run->add_flag("--corpus", use_corpus, "Run every bundled scenario");
    config_opt->excludes(corpus_opt);
    run->add_option("--output-dir", output_dir, "Output directory");
    run->add_option("--jobs", jobs, "Threads for the numerical kernels")->check(CLI::PositiveNumber);

    std::string dump_dir;
    auto* corpus = app.add_subcommand("corpus", "List the bundled scenarios or write them as config files");
    corpus->add_option("--dump", dump_dir, "Write one <name>.json per scenario into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*corpus) {
            for (const auto& j : ffspec::scenario::corpus()) {
                const auto name = j["name"].get<std::string>();
                if (dump_dir.empty()) {
                    std::cout << name << '\n';
                } else {
                    ffspec::io::write_json(j, fs::path(dump_dir) / (name + ".json"));
                }
            }
            return 0;
        }

#ifdef _OPENMP
        if (jobs > 0) omp_set_num_threads(jobs);
#endif
        if (use_corpus) {
            return ffspec::scenario::run_corpus(output_dir.empty() ? fs::path("ffspec-out") : fs::path(output_dir), std::cout);
        }
        if (config.empty()) {
            std::cerr << "run: give --config <file> or --corpus\n";
            return 1;
        }
        return ffspec::scenario::run_file(config, output_dir, std::cout, std::cerr);
    } catch (const ffspec::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
