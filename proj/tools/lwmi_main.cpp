#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lwmi/lwmi.hpp"

namespace {

struct CliOptions {
    std::string file;
    std::string method = "auto";
    std::uint64_t mc_samples = 0; // 0: take the problem file's value
    bool seed_set = false;
    std::uint64_t seed = 0;
    unsigned grid_resolution = 0; // 0: take the problem file's value
    bool breakdown = false;
    unsigned threads = 0; // 0: all hardware threads
};

void add_common_flags(CLI::App* cmd, CliOptions& o) {
    cmd->add_option("file", o.file, "problem file (JSON)")->required();
    cmd->add_option("--method", o.method, "backend: exact, mc, auto or oracle")
        ->check(CLI::IsMember({"exact", "mc", "auto", "oracle"}));
    cmd->add_option("--mc-samples", o.mc_samples, "Monte Carlo sample count");
    cmd->add_option("--seed", o.seed, "Monte Carlo seed")->each([&](const std::string&) {
        o.seed_set = true;
    });
    cmd->add_option("--grid-resolution", o.grid_resolution, "oracle cells per axis");
    cmd->add_flag("--breakdown", o.breakdown, "include the per-assignment breakdown");
    cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
}

unsigned effective_threads(unsigned flag_value) {
    // The WMI_THREADS environment variable overrides the flag.
    if (const char* env = std::getenv("WMI_THREADS")) {
        std::string s(env);
        try {
            std::size_t pos = 0;
            unsigned long v = std::stoul(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return static_cast<unsigned>(v);
        } catch (const std::exception&) {
            throw lwmi::input_error("WMI_THREADS must be a non-negative integer, got '" + s + "'");
        }
    }
    return flag_value;
}

lwmi::Backend backend_of(const std::string& method) {
    if (method == "exact") return lwmi::Backend::Exact;
    if (method == "mc") return lwmi::Backend::Mc;
    if (method == "auto") return lwmi::Backend::Auto;
    throw lwmi::input_error("unknown --method '" + method + "' (exact, mc, auto or oracle)");
}

int run_query(const std::string& forced_query, const CliOptions& cli) {
    lwmi::Problem p = lwmi::load_problem_file(cli.file);
    if (!forced_query.empty()) p.query = forced_query;
    if (cli.method == "oracle")
        p.query = "oracle"; // flag spelling of the oracle subcommand
    else
        p.backend = backend_of(cli.method);
    if (cli.mc_samples != 0) p.mc.samples = cli.mc_samples;
    if (cli.seed_set) p.mc.seed = cli.seed;
    if (cli.grid_resolution != 0) p.oracle_resolution = cli.grid_resolution;

    lwmi::EngineOptions opts = lwmi::engine_options(p, effective_threads(cli.threads));

    const auto t0 = std::chrono::steady_clock::now();
    lwmi::Json out;
    int exit_code = 0;

    if (p.query == "wmi" || p.query == "wmc") {
        lwmi::IntegrationResult res = lwmi::compute_wmi(p, opts);
        out = lwmi::result_to_json(res, cli.breakdown);
    } else if (p.query == "validate-pdf") {
        lwmi::PdfValidation pv = lwmi::validate_pdf(p.weight, opts);
        out["value"] = lwmi::value_to_json(pv.mass);
        out["method"] = pv.method == lwmi::Method::Exact ? "exact" : "mc";
        if (pv.method == lwmi::Method::Mc) {
            out["stderr"] = pv.stderr_;
            out["seed"] = p.mc.seed;
            out["samples"] = p.mc.samples;
        }
        lwmi::IdentityCheck c{"pdf", lwmi::detail::value_str(pv.mass), "1", pv.is_pdf};
        out["checks"] = lwmi::checks_to_json({c});
        if (!pv.is_pdf) exit_code = 3;
    } else if (p.query == "factorize") {
        lwmi::Factorization f = lwmi::factorize(p.weight, opts);
        out["value"] = lwmi::value_to_json(f.mass);
        out["method"] = f.method == lwmi::Method::Exact ? "exact" : "mc";
        if (f.method == lwmi::Method::Mc) {
            out["seed"] = p.mc.seed;
            out["samples"] = p.mc.samples;
        }
        out["factorization"] = lwmi::factorization_report(f);
    } else if (p.query == "check-identities") {
        lwmi::IdentityReport rep = lwmi::check_identities(p, opts);
        out = lwmi::result_to_json(rep.result, cli.breakdown);
        out["checks"] = lwmi::checks_to_json(rep.checks);
        if (!rep.all_pass()) exit_code = 3;
    } else if (p.query == "oracle") {
        double v = lwmi::grid_oracle(p.formula, p.weight, p.oracle_resolution,
                                     lwmi::detail::resolve_threads(opts.threads));
        out["value"] = v;
        out["method"] = "oracle";
        out["resolution"] = p.oracle_resolution;
    } else {
        throw lwmi::input_error("unknown query '" + p.query + "'");
    }

    const auto t1 = std::chrono::steady_clock::now();
    out["elapsed_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    std::cout << out.dump() << "\n";
    return exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted model counting and integration over formula solution sets"};
    app.require_subcommand(1);

    CliOptions cli;
    struct Sub {
        const char* name;
        const char* desc;
        const char* query; // "" = honor the problem file's query field
    };
    const Sub subs[] = {
        {"compute", "run the problem file's query (default wmi)", ""},
        {"validate-pdf", "check that the weight has total mass 1", "validate-pdf"},
        {"factorize", "split a pdf weight into marginal and conditionals", "factorize"},
        {"check-identities", "run the internal consistency identities", "check-identities"},
        {"oracle", "midpoint-rule grid estimate", "oracle"},
    };
    for (const auto& s : subs) add_common_flags(app.add_subcommand(s.name, s.desc), cli);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // --help exits 0; any usage error is an input error (exit 1).
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        for (const auto& s : subs)
            if (app.get_subcommand(s.name)->parsed()) return run_query(s.query, cli);
        std::cerr << "error: no subcommand\n";
        return 1;
    } catch (const lwmi::capacity_error& e) {
        lwmi::Json out{{"error", e.what()}};
        std::cout << out.dump() << "\n";
        std::cerr << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const lwmi::backend_unavailable& e) {
        lwmi::Json out{{"error", e.what()}};
        std::cout << out.dump() << "\n";
        std::cerr << "backend error: " << e.what() << "\n";
        return 2;
    } catch (const lwmi::input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
