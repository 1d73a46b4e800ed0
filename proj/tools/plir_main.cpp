// plir: partially law-invariant risk measures.
//
// Subcommands:
//   eval         evaluate a registered risk functional on a finite fixture
//                or Gaussian model
//   frontier     sweep rho_beta over portfolio weights and write CSVs
//   verify       run the randomized property suites
//   finite-check run the finite-space invariance checks on a support-set
//                fixture
//
// Exit codes: 0 success, 1 property violation, 2 configuration or usage
// error, 3 numerical failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "plir/errors.hpp"
#include "plir/finite_rep.hpp"
#include "plir/io.hpp"
#include "plir/portfolio.hpp"
#include "plir/verify.hpp"

namespace {

using nlohmann::json;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    bool quiet = false;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw plir::InputError(path + ": cannot open config");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw plir::InputError(path + ": " + e.what());
    }
}

// Flags take precedence over config values; config values over defaults.
template <typename T>
void fill_from_config(const CLI::Option* opt, const json& cfg, const char* key, T& value) {
    if (opt->count() > 0) return;  // explicitly set on the command line
    if (cfg.contains(key)) value = cfg[key].get<T>();
}

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---- eval ------------------------------------------------------------

struct EvalOpts {
    std::string risk;
    std::string input;
    std::string gaussian;  // "m=..,sigma=.." or "m1=..,m2=..,s1=..,s2=..,c=.."
    double pi1 = 1.0;
};

std::map<std::string, double> parse_kv(const std::string& spec) {
    std::map<std::string, double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("gaussian spec entry '" + item + "' is not key=value");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

// "rho:<alpha>:<beta>" -> (alpha, beta)
std::optional<std::pair<double, double>> parse_rho_name(const std::string& name) {
    if (name.rfind("rho:", 0) != 0) return std::nullopt;
    const auto sep = name.find(':', 4);
    if (sep == std::string::npos)
        throw std::invalid_argument("risk '" + name + "': expected rho:<alpha>:<beta>");
    return std::make_pair(std::stod(name.substr(4, sep - 4)), std::stod(name.substr(sep + 1)));
}

int cmd_eval(const GlobalOpts& g, const EvalOpts& opts) {
    if (opts.risk.empty()) throw std::invalid_argument("eval: --risk is required");
    const auto rho_params = parse_rho_name(opts.risk);

    if (!opts.input.empty()) {
        auto [space, x] = plir::load_space_and_rv(opts.input);
        if (rho_params) {
            const plir::RhoResult r = plir::rho_beta_discrete_detail(
                x, space, plir::Level(rho_params->first),
                plir::UncertaintyLevel(rho_params->second));
            if (g.quiet)
                std::cout << format_g(r.value) << "\n";
            else
                std::cout << "value = " << format_g(r.value)
                          << "\nargmin_x = " << format_g(r.argmin_x) << "\n";
            return 0;
        }
        const plir::ScalarRisk rho = plir::make_scalar_risk(opts.risk);
        const double value = rho(plir::distribution_of(x, space));
        std::cout << (g.quiet ? format_g(value) : "value = " + format_g(value)) << "\n";
        return 0;
    }

    if (!opts.gaussian.empty()) {
        const auto kv = parse_kv(opts.gaussian);
        if (rho_params) {
            auto need = [&](const char* k) {
                if (!kv.count(k))
                    throw std::invalid_argument(std::string("gaussian spec: missing ") + k);
                return kv.at(k);
            };
            const plir::GaussianPair model(need("m1"), need("m2"), need("s1"), need("s2"),
                                           need("c"));
            const plir::Weights w(opts.pi1, 1.0 - opts.pi1);
            const plir::RhoResult r =
                plir::rho_beta_gaussian(model, w, plir::Level(rho_params->first),
                                        plir::UncertaintyLevel(rho_params->second));
            if (g.quiet)
                std::cout << format_g(r.value) << "\n";
            else
                std::cout << "value = " << format_g(r.value)
                          << "\nargmin_x = " << format_g(r.argmin_x) << "\n";
            return 0;
        }
        if (!kv.count("m") || !kv.count("sigma"))
            throw std::invalid_argument("gaussian spec: expected m=..,sigma=..");
        const double m = kv.at("m");
        const double sd = kv.at("sigma");
        if (!(sd >= 0.0)) throw std::invalid_argument("gaussian spec: sigma must be >= 0");
        double value = 0.0;
        if (opts.risk == "mean") {
            value = m;
        } else if (opts.risk.rfind("es:", 0) == 0) {
            value = plir::es_gaussian(m, sd, plir::Level(std::stod(opts.risk.substr(3))));
        } else if (opts.risk.rfind("er:", 0) == 0) {
            const double beta = std::stod(opts.risk.substr(3));
            if (beta < 0.0) throw std::invalid_argument("er: beta must be >= 0");
            value = m + 0.5 * beta * sd * sd;  // log-moment of a Gaussian
        } else {
            throw std::invalid_argument("unknown risk functional: " + opts.risk);
        }
        std::cout << (g.quiet ? format_g(value) : "value = " + format_g(value)) << "\n";
        return 0;
    }

    throw std::invalid_argument("eval: provide --input or --gaussian");
}

// ---- frontier --------------------------------------------------------

int cmd_frontier(const GlobalOpts& g, const json& cfg) {
    if (!cfg.contains("model")) throw std::invalid_argument("frontier: config needs 'model'");
    const json& jm = cfg["model"];
    auto model_with = [&](double m2, double s2) {
        return plir::GaussianPair(jm.value("m1", 0.0), m2, jm.value("sigma1", 0.1), s2,
                                  jm.value("c", 0.0));
    };
    const double base_m2 = jm.value("m2", 0.0);
    const double base_s2 = jm.value("sigma2", 0.1);
    const plir::Level alpha(cfg.value("alpha", 0.95));
    const int grid = cfg.value("grid", 41);
    const double refine_tol = cfg.value("refine_tol", 1e-4);
    const std::string prefix = cfg.value("out_prefix", std::string("frontier"));
    std::filesystem::create_directories(g.out_dir);

    auto emit = [&](const std::string& tag, const std::vector<plir::SweepRow>& rows,
                    const std::vector<plir::OptimizerRow>& opt, const char* key) {
        std::ostringstream sweep_text, opt_text;
        plir::write_sweep_csv(sweep_text, rows, key);
        plir::write_optimizer_csv(opt_text, opt, key);
        const std::string sweep_path = g.out_dir + "/" + prefix + tag + "_sweep.csv";
        const std::string opt_path = g.out_dir + "/" + prefix + tag + "_optimizers.csv";
        plir::write_file_atomic(sweep_path, sweep_text.str());
        plir::write_file_atomic(opt_path, opt_text.str());
        if (!g.quiet) std::cout << "wrote " << sweep_path << "\nwrote " << opt_path << "\n";
    };

    if (cfg.contains("sigma2_list")) {
        // vary sigma2 at fixed beta
        const plir::UncertaintyLevel beta(cfg.value("beta", 0.95));
        std::vector<plir::SweepRow> rows;
        std::vector<plir::OptimizerRow> optimizers;
        for (double s2 : cfg["sigma2_list"].get<std::vector<double>>()) {
            const plir::GaussianPair model = model_with(base_m2, s2);
            plir::SweepSpec spec(model, alpha, {beta});
            spec.grid = grid;
            spec.refine_tol = refine_tol;
            for (plir::SweepRow r : plir::sweep(spec)) {
                r.beta = s2;  // key column is sigma2 in this mode
                rows.push_back(r);
            }
            const double star = plir::argmin_weight(model, alpha, beta, refine_tol, grid);
            const double rho_star =
                plir::rho_beta_gaussian(model, plir::Weights(star, 1.0 - star), alpha, beta)
                    .value;
            optimizers.push_back({s2, star, rho_star});
        }
        emit("", rows, optimizers, "sigma2");
        return 0;
    }

    if (!cfg.contains("beta_list") || cfg["beta_list"].empty())
        throw std::invalid_argument("frontier: config needs a non-empty 'beta_list'");
    std::vector<plir::UncertaintyLevel> betas;
    for (double b : cfg["beta_list"].get<std::vector<double>>())
        betas.push_back(plir::UncertaintyLevel(b));

    std::vector<double> m2_list = {base_m2};
    if (cfg.contains("m2_list")) m2_list = cfg["m2_list"].get<std::vector<double>>();

    for (double m2 : m2_list) {
        const plir::GaussianPair model = model_with(m2, base_s2);
        plir::SweepSpec spec(model, alpha, betas);
        spec.grid = grid;
        spec.refine_tol = refine_tol;
        const std::vector<plir::SweepRow> rows = plir::sweep(spec);
        std::vector<plir::OptimizerRow> optimizers;
        for (const plir::UncertaintyLevel& beta : betas) {
            const double star = plir::argmin_weight(model, alpha, beta, refine_tol, grid);
            const double rho_star =
                plir::rho_beta_gaussian(model, plir::Weights(star, 1.0 - star), alpha, beta)
                    .value;
            optimizers.push_back({beta.beta, star, rho_star});
        }
        const std::string tag =
            m2_list.size() == 1 ? std::string() : "_m2_" + format_g(m2);
        emit(tag, rows, optimizers, "beta");
    }
    return 0;
}

// ---- verify ----------------------------------------------------------

int cmd_verify(const GlobalOpts& g, const std::string& suite, int instances) {
    std::vector<std::string> selected;
    if (suite == "all")
        selected = plir::suite_names();
    else
        selected.push_back(suite);

    bool any_failure = false;
    json summary = json::array();
    for (const std::string& name : selected) {
        const plir::SuiteResult res = plir::run_suite(name, g.seed, instances);
        any_failure = any_failure || !res.passed();
        json entry;
        entry["suite"] = res.name;
        entry["checks"] = res.checks;
        entry["failures"] = res.failures;
        entry["witnesses"] = res.notes;
        summary.push_back(entry);
        if (!g.quiet)
            std::cout << res.name << ": " << (res.checks - res.failures) << "/" << res.checks
                      << " checks passed\n";
        for (const std::string& note : res.notes) std::cerr << "  witness: " << note << "\n";
    }
    std::cout << summary.dump(2) << "\n";
    return any_failure ? 1 : 0;
}

// ---- finite-check ----------------------------------------------------

json field_to_json(const plir::FieldRV& f) {
    json j;
    j["M"] = f.rows;
    j["N"] = f.cols;
    j["x"] = f.v;
    return j;
}

int cmd_finite_check(const GlobalOpts& g, const std::string& input, int trials) {
    auto [space, support] = plir::load_support_set(input);
    json report;
    report["input"] = input;
    report["vertices"] = support.vertices.size();

    const plir::InvarianceReport inv = plir::check_g_law_invariance(support, space, g.seed);
    report["partial_invariance"] = {{"structural", inv.structural},
                                    {"behavioral", inv.behavioral},
                                    {"sampled_permutations", inv.sampled}};
    if (inv.witness) {
        report["partial_invariance"]["witness"] = {
            {"x", field_to_json(inv.witness->x)},
            {"y", field_to_json(inv.witness->y)},
            {"rho_x", inv.witness->rho_x},
            {"rho_y", inv.witness->rho_y}};
    }

    const plir::StrongReport strong = plir::check_strong_invariance(support, space, trials, g.seed);
    report["strong_invariance"] = {{"invariant", strong.invariant}};
    if (strong.witness) {
        report["strong_invariance"]["witness"] = {
            {"x", field_to_json(strong.witness->x)},
            {"y", field_to_json(strong.witness->y)},
            {"z", field_to_json(*strong.witness->z)},
            {"rho_zx", strong.witness->rho_x},
            {"rho_zy", strong.witness->rho_y}};
    }

    std::vector<plir::Axis> partitions = {plir::Axis::Columns};
    if (space.uniform_row_marginal()) partitions.push_back(plir::Axis::Rows);
    const std::vector<bool> multi = plir::check_multi_source(support, space, partitions, g.seed);
    report["multi_source"] = json::array();
    for (std::size_t i = 0; i < multi.size(); ++i)
        report["multi_source"].push_back(
            {{"partition", partitions[i] == plir::Axis::Columns ? "columns" : "rows"},
             {"invariant", static_cast<bool>(multi[i])}});

    std::cout << report.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"partially law-invariant risk measures"};
    app.require_subcommand(1);

    GlobalOpts g;
    auto* cfg_opt = app.add_option("--config", g.config_path, "JSON config file")
                        ->envname("PLIR_CONFIG");
    auto* seed_opt = app.add_option("--seed", g.seed, "RNG seed")->envname("PLIR_SEED");
    auto* out_opt = app.add_option("--out", g.out_dir, "output directory")->envname("PLIR_OUT");
    app.add_flag("--quiet", g.quiet, "minimal output")->envname("PLIR_QUIET");

    EvalOpts eval_opts;
    CLI::App* eval = app.add_subcommand("eval", "evaluate a risk functional");
    eval->fallthrough();
    auto* risk_opt = eval->add_option("--risk", eval_opts.risk,
                                      "mean | es:<a> | er:<b> | rho:<a>:<b>");
    eval->add_option("--input", eval_opts.input, "finite fixture (JSON: M,N,p,x)");
    eval->add_option("--gaussian", eval_opts.gaussian,
                     "m=..,sigma=.. or m1=..,m2=..,s1=..,s2=..,c=..");
    eval->add_option("--pi1", eval_opts.pi1, "weight on the first asset (rho only)");

    CLI::App* frontier = app.add_subcommand("frontier", "portfolio frontier sweeps");
    frontier->fallthrough();

    std::string suite = "all";
    int instances = 0;
    CLI::App* verify = app.add_subcommand("verify", "run property suites");
    verify->fallthrough();
    verify->add_option("--suite", suite, "coherence|invariance|oracle|adjustments|strong|all");
    verify->add_option("--instances", instances, "instance count (0 = suite default)");

    std::string fc_input;
    int fc_trials = 10000;
    CLI::App* finite = app.add_subcommand("finite-check", "support-set invariance checks");
    finite->fallthrough();
    finite->add_option("--input", fc_input, "support-set fixture (JSON)")->required();
    finite->add_option("--trials", fc_trials, "random trials for the strong check");

    try {
        app.parse(argc, argv);
        const json cfg = load_config(g.config_path);
        fill_from_config(seed_opt, cfg, "seed", g.seed);
        fill_from_config(out_opt, cfg, "out", g.out_dir);
        (void)cfg_opt;

        if (*eval) {
            fill_from_config(risk_opt, cfg, "risk", eval_opts.risk);
            return cmd_eval(g, eval_opts);
        }
        if (*frontier) return cmd_frontier(g, cfg);
        if (*verify) {
            if (suite != "all") {
                const auto& names = plir::suite_names();
                if (std::find(names.begin(), names.end(), suite) == names.end())
                    throw std::invalid_argument("unknown suite: " + suite);
            }
            return cmd_verify(g, suite, instances);
        }
        if (*finite) return cmd_finite_check(g, fc_input, fc_trials);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const plir::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const plir::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
