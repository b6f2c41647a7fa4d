// Command-line front end: parses a model document, runs the requested
// analysis, and emits a JSON or text report.

#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pypl/model_io.hpp"

namespace {

struct Flags {
    std::vector<std::string> files;
    std::string out;
    std::string format = "json";
    std::string lex;
    std::size_t jobs = 1;
    bool seed_set = false, starts_set = false, tol_res_set = false, tol_dedup_set = false;
    std::uint64_t seed = 0;
    std::size_t starts = 32;
    double tol_residual = 1e-9;
    double tol_dedup = 1e-6;
};

pypl::json run_one(const std::string& command, const std::string& path, const Flags& flags) {
    pypl::ModelDocument doc = pypl::parse_model_file(path);
    if (flags.seed_set) doc.options.seed = flags.seed;
    if (flags.starts_set) doc.options.starts = flags.starts;
    if (flags.tol_res_set) doc.options.tol_residual = flags.tol_residual;
    if (flags.tol_dedup_set) doc.options.tol_dedup = flags.tol_dedup;
    if (flags.lex == "ascending") doc.options.lex = pypl::LexOrder::ascending;
    if (flags.lex == "descending") doc.options.lex = pypl::LexOrder::descending;
    return pypl::run(command, doc);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"poly-power-law reaction network analyzer"};
    app.require_subcommand(1);

    Flags flags;
    const std::vector<std::string> commands = {"analyze",   "canonical",  "star-msc",
                                               "indices",   "decompose",  "equilibria",
                                               "stability", "robustness", "all"};
    for (const std::string& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("files", flags.files, "model JSON files")->required()->expected(-1);
        sub->add_option("--seed", flags.seed)->each([&](const std::string&) {
            flags.seed_set = true;
        });
        sub->add_option("--starts", flags.starts)->each([&](const std::string&) {
            flags.starts_set = true;
        });
        sub->add_option("--tol-residual", flags.tol_residual)->each([&](const std::string&) {
            flags.tol_res_set = true;
        });
        sub->add_option("--tol-dedup", flags.tol_dedup)->each([&](const std::string&) {
            flags.tol_dedup_set = true;
        });
        sub->add_option("--jobs", flags.jobs);
        sub->add_option("--format", flags.format)
            ->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--lex", flags.lex)->check(CLI::IsMember({"ascending", "descending"}));
        sub->add_option("--out", flags.out, "write the report here instead of stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    int exit_code = 0;
    pypl::json report;
    try {
        if (flags.files.size() == 1) {
            report = run_one(command, flags.files[0], flags);
        } else {
            std::vector<std::future<pypl::json>> futures;
            std::size_t jobs = std::max<std::size_t>(1, flags.jobs);
            for (std::size_t i = 0; i < flags.files.size(); ++i) {
                futures.push_back(std::async(jobs > 1 ? std::launch::async
                                                      : std::launch::deferred,
                                             run_one, command, flags.files[i], flags));
            }
            report = pypl::json::object();
            for (std::size_t i = 0; i < flags.files.size(); ++i)
                report[flags.files[i]] = futures[i].get();
        }
    } catch (const pypl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!flags.out.empty()) {
        file.open(flags.out);
        if (!file) {
            std::cerr << "error: cannot write " << flags.out << "\n";
            return 1;
        }
        os = &file;
    }
    if (flags.format == "text")
        pypl::render_text(report, *os);
    else
        *os << report.dump(2) << "\n";
    return exit_code;
}
