#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bkmoments/config.hpp"
#include "bkmoments/extrapolation.hpp"
#include "bkmoments/oracle.hpp"
#include "bkmoments/propagator.hpp"

namespace bkm::cli {
namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string shortest(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) {
        if (!cur.empty()) parts.push_back(cur);
    }
    return parts;
}

int parse_int(const std::string& s, const char* what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InvalidArgument(std::string("invalid ") + what + " '" + s + "'");
    }
    return v;
}

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        double v = std::stod(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidArgument(std::string("invalid ") + what + " '" + s + "'");
}

MultiIndex parse_alpha(const std::string& s, std::size_t dim) {
    std::vector<int> entries;
    for (const auto& p : split(s, ',')) entries.push_back(parse_int(p, "alpha entry"));
    if (entries.size() != dim) {
        throw InvalidArgument("--alpha needs " + std::to_string(dim) + " comma-separated entries, got '" + s + "'");
    }
    return make_multi_index(entries);
}

std::string alpha_field(const MultiIndex& alpha) {
    std::string s;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(alpha[i]);
    }
    return alpha.size() > 1 ? "\"" + s + "\"" : s;
}

struct ModelSource {
    std::string config_path;
    std::string preset;

    void add_to(CLI::App* app) {
        auto* c = app->add_option("--config", config_path, "Model config file (JSON)");
        auto* p = app->add_option("--preset", preset, "Built-in model with default parameters: ou | vdp");
        c->excludes(p);
    }

    ModelConfig load() const {
        if (!config_path.empty()) return load_model_config(config_path);
        if (!preset.empty()) return model_config_from_preset_name(preset);
        throw InvalidArgument("one of --config or --preset is required");
    }
};

struct OracleOptions {
    int cutoff = 15;
    std::optional<double> dt;
    std::uint64_t paths = 1'000'000;
    std::uint64_t seed = 7;
};

struct OracleValue {
    double value = 0.0;
    double std_error = 0.0;
    bool has_std_error = false;
};

OracleValue evaluate_oracle(const std::string& kind, const ModelConfig& cfg, const MultiIndex& alpha, double horizon,
                            const OracleOptions& opt) {
    if (kind.rfind("value:", 0) == 0) return {parse_double(kind.substr(6), "oracle value")};
    if (kind == "closed_form") {
        const auto* ou = cfg.preset ? std::get_if<OuParams>(&*cfg.preset) : nullptr;
        if (!ou) throw InvalidArgument("closed_form oracle is only available for the ou preset");
        return {ou_closed_form(ou->gamma, ou->sigma, ou->x_ini, horizon, alpha[0])};
    }
    if (kind == "ode") {
        OdeOracleConfig c;
        c.cutoff = opt.cutoff;
        c.dt = opt.dt.value_or(1e-6);
        c.horizon = horizon;
        return {ode_oracle(cfg.compile(), alpha, c)};
    }
    if (kind == "mc") {
        McOracleConfig c;
        c.paths = opt.paths;
        c.dt = opt.dt.value_or(1e-3);
        c.seed = opt.seed;
        auto est = mc_oracle(cfg.model, cfg.origin, alpha, horizon, c);
        return {est.mean, est.std_error, true};
    }
    throw InvalidArgument("unknown oracle '" + kind + "' (expected closed_form, ode, mc or value:<real>)");
}

void add_oracle_flags(CLI::App* app, OracleOptions& opt) {
    app->add_option("--cutoff", opt.cutoff, "ODE oracle lattice cutoff (states with n_d < cutoff)")
        ->check(CLI::PositiveNumber);
    app->add_option("--dt", opt.dt, "Oracle time step (default 1e-6 for ode, 1e-3 for mc)")
        ->check(CLI::PositiveNumber);
    app->add_option("--paths", opt.paths, "Monte Carlo path count")->check(CLI::PositiveNumber);
    app->add_option("--seed", opt.seed, "Monte Carlo seed");
}

int numeric_failure(std::ostream& err, const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
}

// ---- estimate ---------------------------------------------------------------

struct EstimateCmd {
    ModelSource source;
    std::string method = "implicit2";
    int steps = 0;
    double horizon = 0.0;
    std::string alpha;
    bool two_hop = false;
    double prune = 0.0;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("estimate", "Estimate one shifted moment E[(X(T)-x_ini)^alpha]");
        source.add_to(app);
        app->add_option("--method", method, "explicit1 | explicit2 | implicit1 | implicit2")->capture_default_str();
        app->add_option("--steps", steps, "Step count M")->required()->check(CLI::PositiveNumber);
        app->add_option("--horizon", horizon, "Horizon T")->required()->check(CLI::PositiveNumber);
        app->add_option("--alpha", alpha, "Moment order, comma separated (e.g. 1,1)")->required();
        app->add_flag("--two-hop-denominator", two_hop, "Keep the denominator on the two-hop resolvent term");
        app->add_option("--prune", prune, "Drop weights below this magnitude (approximate)")
            ->check(CLI::NonNegativeNumber);
    }

    int execute(std::ostream& out, std::ostream& err) const {
        const ModelConfig cfg = source.load();
        RunPlan plan;
        plan.horizon = horizon;
        plan.steps = steps;
        plan.alpha = parse_alpha(alpha, cfg.model.dimension);
        plan.scheme = {parse_scheme(method), two_hop};
        plan.prune_threshold = prune;
        const Generator g = cfg.compile();
        double estimate = 0.0;
        try {
            estimate = run(g, plan);
        } catch (const NumericalError& e) {
            return numeric_failure(err, e);
        }
        out << method << ',' << steps << ',' << shortest(horizon) << ',' << alpha_field(plan.alpha) << ','
            << fmt17(estimate) << '\n';
        return kExitOk;
    }
};

// ---- sweep ------------------------------------------------------------------

struct SweepCmd {
    ModelSource source;
    std::string methods = "explicit1,explicit2,implicit1,implicit2";
    std::string steps;
    double horizon = 0.0;
    std::string alpha;
    std::string extrapolate = "none";
    std::string pairing = "minus-one";
    std::string oracle = "value:0";
    bool oracle_given = false;
    std::string out_path;
    bool two_hop = false;
    double prune = 0.0;
    OracleOptions oracle_opts;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("sweep", "Run several methods and step counts and write a CSV");
        source.add_to(app);
        app->add_option("--method", methods, "Comma-separated methods")->capture_default_str();
        app->add_option("--steps", steps, "Comma-separated step counts M")->required();
        app->add_option("--horizon", horizon, "Horizon T")->required()->check(CLI::PositiveNumber);
        app->add_option("--alpha", alpha, "Moment order, comma separated")->required();
        app->add_option("--extrapolate", extrapolate, "none | order1 | order2")
            ->check(CLI::IsMember({"none", "order1", "order2"}))
            ->capture_default_str();
        app->add_option("--pairing", pairing,
                        "Extrapolation partner: minus-one (M-1, M) or previous (preceding M in the list)")
            ->check(CLI::IsMember({"minus-one", "previous"}))
            ->capture_default_str();
        app->add_option_function<std::string>(
            "--oracle",
            [this](const std::string& v) {
                oracle = v;
                oracle_given = true;
            },
            "closed_form | ode | mc | value:<real>");
        app->add_option("--out", out_path, "Output CSV path ('-' for stdout)")->required();
        app->add_flag("--two-hop-denominator", two_hop, "Keep the denominator on the two-hop resolvent term");
        app->add_option("--prune", prune, "Drop weights below this magnitude (approximate)")
            ->check(CLI::NonNegativeNumber);
        add_oracle_flags(app, oracle_opts);
    }

    int execute(std::ostream& out, std::ostream& err) const {
        const ModelConfig cfg = source.load();
        const MultiIndex a = parse_alpha(alpha, cfg.model.dimension);
        std::vector<SchemeKind> kinds;
        for (const auto& m : split(methods, ',')) kinds.push_back(parse_scheme(m));
        std::sort(kinds.begin(), kinds.end());
        kinds.erase(std::unique(kinds.begin(), kinds.end()), kinds.end());
        std::vector<int> ms;
        for (const auto& m : split(steps, ',')) {
            const int v = parse_int(m, "step count");
            if (v < 1) throw InvalidArgument("step counts must be positive");
            ms.push_back(v);
        }
        std::sort(ms.begin(), ms.end());
        ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
        if (kinds.empty() || ms.empty()) throw InvalidArgument("sweep needs at least one method and one M");
        const int order = extrapolate == "order1" ? 1 : extrapolate == "order2" ? 2 : 0;

        int status = kExitOk;
        std::optional<double> oracle_value;
        if (oracle_given) {
            try {
                oracle_value = evaluate_oracle(oracle, cfg, a, horizon, oracle_opts).value;
            } catch (const NumericalError& e) {
                err << "oracle failed: " << e.what() << "\n";
                status = kExitNumerical;
            } catch (const Error& e) {
                err << "oracle failed: " << e.what() << "\n";
                status = kExitUsage;
            }
        }

        const Generator g = cfg.compile();
        std::ostringstream csv;
        csv << "method,M,estimate,extrapolated,oracle,abs_error,abs_error_extrapolated\n";
        for (auto kind : kinds) {
            std::map<int, std::optional<double>> cache;
            auto estimate_at = [&](int m) -> std::optional<double> {
                if (auto it = cache.find(m); it != cache.end()) return it->second;
                RunPlan plan;
                plan.horizon = horizon;
                plan.steps = m;
                plan.alpha = a;
                plan.scheme = {kind, two_hop};
                plan.prune_threshold = prune;
                std::optional<double> v;
                try {
                    v = run(g, plan);
                } catch (const NumericalError& e) {
                    err << scheme_name(kind) << " M=" << m << ": " << e.what() << "\n";
                    status = kExitNumerical;
                }
                return cache[m] = v;
            };
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const int m = ms[i];
                const auto est = estimate_at(m);
                std::optional<double> extra;
                if (order && est) {
                    const int partner = pairing == "previous" ? (i ? ms[i - 1] : 0) : m - 1;
                    if (partner >= 1) {
                        if (auto prev = estimate_at(partner)) extra = bkm::extrapolate({*prev, *est, partner, m}, order);
                    }
                }
                csv << scheme_name(kind) << ',' << m << ',' << (est ? fmt17(*est) : "") << ','
                    << (extra ? fmt17(*extra) : "") << ',' << (oracle_value ? fmt17(*oracle_value) : "") << ','
                    << (est && oracle_value ? fmt17(std::abs(*est - *oracle_value)) : "") << ','
                    << (extra && oracle_value ? fmt17(std::abs(*extra - *oracle_value)) : "") << '\n';
            }
        }

        if (out_path == "-") {
            out << csv.str();
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw InvalidArgument("cannot write '" + out_path + "'");
            file << csv.str();
        }
        return status;
    }
};

// ---- oracle -----------------------------------------------------------------

struct OracleCmd {
    ModelSource source;
    std::string kind;
    double horizon = 0.0;
    std::string alpha;
    int order = 0;
    OracleOptions opts;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("oracle", "Evaluate a reference value");
        source.add_to(app);
        app->add_option("--kind", kind, "closed_form | ode | mc")
            ->required()
            ->check(CLI::IsMember({"closed_form", "ode", "mc"}));
        app->add_option("--horizon", horizon, "Horizon T")->required()->check(CLI::NonNegativeNumber);
        app->add_option("--alpha", alpha, "Moment order, comma separated");
        app->add_option("--order", order, "Closed-form moment order (1 or 2); same as --alpha for D = 1");
        add_oracle_flags(app, opts);
    }

    int execute(std::ostream& out, std::ostream& err) const {
        const ModelConfig cfg = source.load();
        MultiIndex a;
        if (!alpha.empty()) {
            a = parse_alpha(alpha, cfg.model.dimension);
        } else if (order > 0 && cfg.model.dimension == 1) {
            a = MultiIndex{order};
        } else {
            throw InvalidArgument("--alpha is required");
        }
        OracleValue v;
        try {
            v = evaluate_oracle(kind, cfg, a, horizon, opts);
        } catch (const NumericalError& e) {
            return numeric_failure(err, e);
        }
        out << fmt17(v.value);
        if (v.has_std_error) out << ',' << fmt17(v.std_error);
        out << '\n';
        return kExitOk;
    }
};

// ---- events / export-config / extrapolate -----------------------------------

struct EventsCmd {
    ModelSource source;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("events", "Print the compiled event table");
        source.add_to(app);
    }

    int execute(std::ostream& out, std::ostream&) const {
        out << format_event_table(source.load().compile());
        return kExitOk;
    }
};

struct ExportCmd {
    ModelSource source;
    std::string out_path = "-";

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("export-config", "Write a model config with explicit polynomials");
        source.add_to(app);
        app->add_option("--out", out_path, "Output path ('-' for stdout)")->capture_default_str();
    }

    int execute(std::ostream& out, std::ostream&) const {
        const std::string text = model_config_to_json(source.load()).dump(2) + "\n";
        if (out_path == "-") {
            out << text;
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw InvalidArgument("cannot write '" + out_path + "'");
            file << text;
        }
        return kExitOk;
    }
};

struct ExtrapolateCmd {
    int order = 1;
    int steps1 = 0;
    int steps2 = 0;
    double estimate1 = 0.0;
    double estimate2 = 0.0;

    void attach(CLI::App& root) {
        auto* app = root.add_subcommand("extrapolate", "Combine estimates at two step counts");
        app->add_option("--order", order, "Convergence order of the scheme (1 or 2)")
            ->check(CLI::IsMember({1, 2}))
            ->capture_default_str();
        app->add_option("--steps1", steps1, "First step count")->required()->check(CLI::PositiveNumber);
        app->add_option("--estimate1", estimate1, "Estimate at the first step count")->required();
        app->add_option("--steps2", steps2, "Second step count")->required()->check(CLI::PositiveNumber);
        app->add_option("--estimate2", estimate2, "Estimate at the second step count")->required();
    }

    int execute(std::ostream& out, std::ostream&) const {
        out << fmt17(bkm::extrapolate({estimate1, estimate2, steps1, steps2}, order)) << '\n';
        return kExitOk;
    }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Moments of polynomial SDEs via backward Kolmogorov lattice walks", "bkmoments"};
    app.require_subcommand(1);
    EstimateCmd estimate;
    SweepCmd sweep;
    OracleCmd oracle;
    EventsCmd events;
    ExportCmd export_cfg;
    ExtrapolateCmd extrapolate;
    estimate.attach(app);
    sweep.attach(app);
    oracle.attach(app);
    events.attach(app);
    export_cfg.attach(app);
    extrapolate.attach(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitUsage;
    }

    try {
        auto* sub = app.get_subcommands().front();
        const std::string name = sub->get_name();
        if (name == "estimate") return estimate.execute(out, err);
        if (name == "sweep") return sweep.execute(out, err);
        if (name == "oracle") return oracle.execute(out, err);
        if (name == "events") return events.execute(out, err);
        if (name == "export-config") return export_cfg.execute(out, err);
        if (name == "extrapolate") return extrapolate.execute(out, err);
    } catch (const NumericalError& e) {
        return numeric_failure(err, e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace bkm::cli
