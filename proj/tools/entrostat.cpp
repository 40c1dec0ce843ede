// entrostat: statistical mechanics of bipartite entanglement for Haar-random
// states.  Closed-form branches, purity moments, samplers, and the finite-N
// Coulomb-gas minimizer, exposed as reproducible CSV/JSON commands.

#include <CLI11.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "entrostat/analytic.hpp"
#include "entrostat/coulomb.hpp"
#include "entrostat/moments.hpp"
#include "entrostat/sampling.hpp"
#include "entrostat/stats.hpp"
#include "entrostat/verify.hpp"

using json = nlohmann::json;
using namespace entrostat;

namespace {

constexpr const char* kVersion = "0.1.0";

// Shortest round-trip representation, locale independent.
std::string num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

struct Output {
    std::string path;       // empty = stdout
    std::string format;     // csv | json
    json meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void emit() const {
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::runtime_error("cannot open output file: " + path);
            os = &file;
        }
        if (format == "json") {
            json doc;
            doc["meta"] = meta;
            doc["columns"] = columns;
            doc["rows"] = json::array();
            for (const auto& r : rows) doc["rows"].push_back(r);
            *os << doc.dump(2) << "\n";
            return;
        }
        *os << "# " << meta.dump() << "\n";
        for (std::size_t c = 0; c < columns.size(); ++c)
            *os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
        for (const auto& r : rows) {
            for (std::size_t c = 0; c < r.size(); ++c)
                *os << r[c] << (c + 1 < r.size() ? "," : "\n");
        }
    }
};

json base_meta(const std::string& command, std::uint64_t seed, int workers,
               const json& params) {
    json meta;
    meta["tool"] = "entrostat";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["seed"] = seed;
    meta["workers"] = workers;
    meta["params"] = params;
    return meta;
}

void write_sidecar(const std::string& out_path, const json& summary) {
    if (out_path.empty()) {
        std::cout << "# summary " << summary.dump() << "\n";
        return;
    }
    std::ofstream f(out_path + ".summary.json");
    f << summary.dump(2) << "\n";
}

int cmd_phase_diagram(double beta_min, double beta_max, int points,
                      const std::string& branch, Output& out) {
    if (beta_min >= beta_max || points < 2) {
        std::cerr << "phase-diagram: invalid beta range\n";
        return 2;
    }
    out.columns = {"beta", "branch", "m", "delta", "mu", "u", "s", "beta_f", "alpha",
                   "branch_id"};
    auto add_stable = [&](double beta) {
        auto [p, id, ev] = analytic::stable_branch(beta);
        const ThermoPoint tp = beta >= 0.0 ? analytic::thermo(p, id.tag)
                                           : analytic::thermo_negative_stable(beta);
        out.rows.push_back({num(beta), "stable", num(p.m_center), num(p.delta), num(ev.mu),
                            num(tp.u), num(tp.s), num(tp.beta_f),
                            std::to_string(tp.alpha), branch_name(id.tag)});
    };
    auto add_meta = [&](double beta) {
        if (beta >= 0.0) return;
        auto [p, id] = analytic::metastable_branch(beta);
        const ThermoPoint tp = analytic::thermo(p, id.tag);
        out.rows.push_back({num(beta), "metastable", num(p.m_center), num(p.delta), num(0.0),
                            num(tp.u), num(tp.s), num(tp.beta_f),
                            std::to_string(tp.alpha), branch_name(id.tag)});
    };
    for (int i = 0; i < points; ++i) {
        const double beta = beta_min + (beta_max - beta_min) * i / (points - 1);
        if (branch == "stable" || branch == "both") add_stable(beta);
        if (branch == "metastable" || branch == "both") add_meta(beta);
    }
    out.emit();
    return 0;
}

int cmd_density(double beta, const std::string& branch_kind, int grid_points, Output& out) {
    if (grid_points < 2) {
        std::cerr << "density: grid_points must be >= 2\n";
        return 2;
    }
    SupportParams p(1.0, 1.0, beta);
    Branch tag = Branch::Semicircle;
    try {
        if (branch_kind == "stable") {
            auto [pp, id, ev] = analytic::stable_branch(beta);
            p = pp;
            tag = id.tag;
        } else if (branch_kind == "metastable") {
            auto [pp, id] = analytic::metastable_branch(beta);
            p = pp;
            tag = id.tag;
        } else {
            std::cerr << "density: branch must be stable or metastable\n";
            return 2;
        }
    } catch (const DomainError& e) {
        std::cerr << "density: " << e.what() << "\n";
        return 2;
    }
    out.meta["branch_id"] = branch_name(tag);
    out.meta["support"] = {p.a(), p.b()};
    bool edge_divergence = false;
    out.columns = {"lambda", "rho"};
    std::vector<std::pair<double, double>> vals;
    for (int i = 0; i < grid_points; ++i) {
        const double lam = p.a() + (p.b() - p.a()) * i / (grid_points - 1.0);
        const double rho = analytic::density_of_eigenvalues(tag, p, lam);
        vals.emplace_back(lam, rho);
    }
    // divergent endpoints are replaced by the last finite interior value
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (!std::isfinite(vals[i].second)) {
            edge_divergence = true;
            const std::size_t j = i == 0 ? 1 : i - 1;
            vals[i].second = vals[j].second;
        }
    }
    out.meta["edge_divergence"] = edge_divergence;
    for (const auto& [lam, rho] : vals) out.rows.push_back({num(lam), num(rho)});
    out.emit();
    return 0;
}

int cmd_moments(const std::string& mode, int n, int m, std::optional<double> x,
                std::optional<double> beta, std::optional<double> t3,
                std::optional<double> t4, Output& out) {
    json result;
    try {
        if (mode == "pure-exact") {
            result["K1"] = moments::pure_first_moment(n, m);
            result["K2"] = moments::pure_second_cumulant(n, m);
            result["formula"] = {"K1 = (N+M)/(NM+1)",
                                 "K2 = 2(N^2-1)(M^2-1)/((1+NM)^2(2+NM)(3+NM))"};
        } else if (mode == "pure-asymptotic") {
            for (int k = 1; k <= 4; ++k)
                result["K" + std::to_string(k)] = moments::pure_cumulant_asymptotic(k, n);
            result["formula"] = "K_k = 2^{k+1}/N^{3k-2} (3k-3)!/(2k)!";
        } else if (mode == "mixed-exact") {
            if (!x) {
                std::cerr << "moments: mixed-exact requires --x\n";
                return 2;
            }
            result["M1"] = moments::mixed_first_moment(*x, n, m);
            result["formula"] = "M1 = M(N^2-1)x/(N^2M^2-1) + N(M^2-1)/(N^2M^2-1)";
            if (t3 && t4) {
                result["K2"] = moments::mixed_second_cumulant(*x, n, m, *t3, *t4);
                result["K2_formula"] = "second cumulant at beta=0 with supplied invariants";
            }
        } else if (mode == "gaussian") {
            if (!x) {
                std::cerr << "moments: gaussian requires --x\n";
                return 2;
            }
            result["M1"] = moments::gaussian_first_moment(*x, n, m);
            result["formula"] = "M1 ~ 1/N + x/M";
        } else if (mode == "high-temp") {
            if (!x || !beta || !t3 || !t4) {
                std::cerr << "moments: high-temp requires --x --beta --t3 --t4\n";
                return 2;
            }
            result["M1"] = moments::high_temp_first_moment(*x, *beta, n, m, *t3, *t4);
            result["formula"] = "M1(x,beta) ~ M1(x,0) - beta K2(x,0)";
        } else {
            std::cerr << "moments: unknown mode " << mode << "\n";
            return 2;
        }
    } catch (const DomainError& e) {
        std::cerr << "moments: " << e.what() << "\n";
        return 2;
    }
    json doc;
    doc["meta"] = out.meta;
    doc["result"] = result;
    if (out.path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream f(out.path);
        f << doc.dump(2) << "\n";
    }
    return 0;
}

void spectra_to_rows(const std::vector<Spectrum>& spectra, Output& out) {
    if (spectra.empty()) return;
    for (std::size_t c = 0; c < spectra.front().size(); ++c)
        out.columns.push_back("lambda" + std::to_string(c + 1));
    for (const auto& s : spectra) {
        std::vector<std::string> row;
        row.reserve(s.size());
        for (double v : s.values()) row.push_back(num(v));
        out.rows.push_back(row);
    }
}

int cmd_sample(const std::string& kind, int n, int m, int l, long long samples, int bins,
               double beta_scaled, std::uint64_t seed, int workers, Output& out) {
    json summary;
    try {
        if (kind == "haar-spectrum") {
            const BipartiteDims dims(n, m);
            sampling::CounterRng rng({seed, 0});
            std::vector<Spectrum> spectra;
            spectra.reserve(samples);
            double sum = 0.0, sumsq = 0.0;
            for (long long s = 0; s < samples; ++s) {
                spectra.push_back(sampling::reduced_spectrum(dims, rng));
                const double p = purity(spectra.back());
                sum += p;
                sumsq += p * p;
            }
            const double mean = sum / samples;
            const double var = (sumsq - samples * mean * mean) / (samples - 1);
            summary["mean_purity"] = mean;
            summary["var_purity"] = var;
            summary["expected_K1"] = moments::pure_first_moment(n, m);
            summary["expected_K2"] = moments::pure_second_cumulant(n, m);
            summary["mean_z"] = (mean - moments::pure_first_moment(n, m)) /
                                std::sqrt(var / samples);
            spectra_to_rows(spectra, out);
        } else if (kind == "simplex") {
            sampling::CounterRng rng({seed, 0});
            std::vector<Spectrum> spectra;
            spectra.reserve(samples);
            double sum = 0.0;
            for (long long s = 0; s < samples; ++s) {
                spectra.push_back(sampling::simplex_uniform(l, rng));
                sum += spectra.back()[0] * l;  // any fixed coordinate by symmetry
            }
            summary["coordinate_mean_rescaled"] = sum / samples;
            summary["expected"] = 1.0;
            spectra_to_rows(spectra, out);
        } else if (kind == "purified") {
            const BipartiteDims dims(n, m);
            const auto ens =
                sampling::purified_mixed_ensemble(dims, samples, bins, {seed, 0}, workers);
            json j;
            j["edges"] = ens.edges;
            j["counts"] = ens.counts;
            j["mean_x"] = ens.mean_x;
            j["mean_piA"] = ens.mean_piA;
            j["var_piA"] = ens.var_piA;
            j["mean_t3"] = ens.mean_t3;
            j["mean_t4"] = ens.mean_t4;
            json doc;
            doc["meta"] = out.meta;
            doc["ensemble"] = j;
            if (out.path.empty()) {
                std::cout << doc.dump(2) << "\n";
            } else {
                std::ofstream f(out.path);
                f << doc.dump(2) << "\n";
            }
            return 0;
        } else if (kind == "mcmc") {
            const auto spectra =
                sampling::canonical_mcmc_collect(n, beta_scaled, samples, {seed, 0});
            std::vector<double> pooled;
            for (const auto& s : spectra)
                for (double v : s.values()) pooled.push_back(v * n);
            if (beta_scaled == 0.0) {
                const double d = stats::ks_statistic(pooled, [](double xx) {
                    if (xx <= 0.0) return 0.0;
                    if (xx >= 4.0) return 1.0;
                    const double r = std::sqrt(xx / 4.0);
                    return 2.0 / kPi * (std::asin(r) + r * std::sqrt(1.0 - xx / 4.0));
                });
                const double gate =
                    stats::ks_critical_one_sample(static_cast<double>(pooled.size())) +
                    1.0 / n;
                summary["ks_vs_wishart"] = d;
                summary["ks_gate"] = gate;
                summary["ks_pass"] = d < gate;
            }
            double sum = 0.0;
            for (const auto& s : spectra) sum += purity(s);
            summary["mean_purity"] = sum / spectra.size();
            spectra_to_rows(spectra, out);
        } else {
            std::cerr << "sample: unknown kind " << kind << "\n";
            return 2;
        }
    } catch (const DomainError& e) {
        std::cerr << "sample: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "sample: " << e.what() << "\n";
        return 3;
    }
    out.emit();
    write_sidecar(out.path, summary);
    return 0;
}

int cmd_minimize(int n, std::optional<double> beta, const std::string& sweep,
                 const std::string& profile, Output& out) {
    out.columns = {"beta", "basin", "beta_f", "lambda_max", "converged", "iterations"};
    bool any_failure = false;
    auto add = [&](double b, const char* basin, const coulomb::MinimizationResult& r) {
        out.rows.push_back({num(b), basin, num(r.beta_f), num(r.spectrum.largest()),
                            r.converged ? "1" : "0", std::to_string(r.iterations)});
        if (!r.converged) any_failure = true;
    };
    try {
        if (!profile.empty()) {
            double lo, hi, step;
            if (std::sscanf(profile.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
                step <= 0.0) {
                std::cerr << "minimize: --profile expects lo:hi:step\n";
                return 2;
            }
            if (!beta) {
                std::cerr << "minimize: --profile requires --beta\n";
                return 2;
            }
            std::vector<double> grid;
            for (double mu = lo; mu <= hi + 1e-12; mu += step) grid.push_back(mu);
            const auto prof = coulomb::profile_fixed_max(n, *beta, grid);
            out.columns = {"mu", "beta_f", "reliable"};
            for (const auto& [mu, bf] : prof)
                out.rows.push_back({num(mu), num(bf), mu < 2.0 / n ? "0" : "1"});
            out.emit();
            return 0;
        }
        if (!sweep.empty()) {
            double lo, hi, step;
            if (std::sscanf(sweep.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
                step <= 0.0) {
                std::cerr << "minimize: --beta-sweep expects lo:hi:step\n";
                return 2;
            }
            std::vector<double> grid;
            for (double b = lo; b <= hi + 1e-12; b += step) grid.push_back(b);
            const auto curve = coulomb::max_eigenvalue_curve(n, grid);
            out.columns = {"beta", "basin", "beta_f", "lambda_max"};
            for (const auto& r : curve) {
                out.rows.push_back(
                    {num(r.beta), "typical", num(r.beta_f_typical), num(r.lambda_max_typical)});
                out.rows.push_back({num(r.beta), "separable", num(r.beta_f_separable),
                                    num(r.lambda_max_separable)});
            }
            // bracket the stability swap from grid points where both basins
            // exist and the free-energy gap changes sign
            out.meta["crossing"] = nullptr;
            for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
                const auto &a = curve[i], &b = curve[i + 1];
                const bool two_a =
                    std::abs(a.lambda_max_typical - a.lambda_max_separable) > 0.15;
                const bool two_b =
                    std::abs(b.lambda_max_typical - b.lambda_max_separable) > 0.15;
                const double da = a.beta_f_typical - a.beta_f_separable;
                const double db = b.beta_f_typical - b.beta_f_separable;
                if (two_a && two_b && da * db < 0.0) {
                    try {
                        out.meta["crossing"] =
                            coulomb::locate_crossing(n, a.beta, b.beta, 1e-3);
                    } catch (const BracketError&) {
                    }
                    break;
                }
            }
            out.emit();
            return 0;
        }
        if (!beta) {
            std::cerr << "minimize: provide --beta or --beta-sweep\n";
            return 2;
        }
        const auto bp = coulomb::minimize_both_basins(n, *beta);
        add(*beta, "typical", bp.typical);
        add(*beta, "separable", bp.separable);
    } catch (const DomainError& e) {
        std::cerr << "minimize: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        out.emit();
        std::cerr << "minimize: " << e.what() << "\n";
        return 3;
    }
    out.emit();
    return any_failure ? 3 : 0;
}

int cmd_verify(const std::string& suite, const std::string& budget, std::uint64_t seed,
               int workers, const std::string& out_path) {
    std::vector<verify::CheckResult> results;
    try {
        results = verify::run(verify::parse_suite(suite), verify::parse_budget(budget), seed,
                              workers);
    } catch (const DomainError& e) {
        std::cerr << "verify: " << e.what() << "\n";
        return 2;
    }
    json rep = json::array();
    bool all_pass = true;
    for (const auto& r : results) {
        rep.push_back({{"id", r.id},
                       {"description", r.description},
                       {"pass", r.pass},
                       {"measured", r.measured},
                       {"target", r.target},
                       {"tol", r.tol},
                       {"seconds", r.seconds},
                       {"note", r.note}});
        all_pass = all_pass && r.pass;
    }
    json doc;
    doc["suite"] = suite;
    doc["budget"] = budget;
    doc["seed"] = seed;
    doc["all_pass"] = all_pass;
    doc["checks"] = rep;
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream f(out_path);
        f << doc.dump(2) << "\n";
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"statistical mechanics of bipartite entanglement toolkit"};
    app.fallthrough();  // global flags may follow the subcommand
    app.set_config("--config", "", "flat key=value configuration file");

    std::uint64_t seed = 20240817;
    int workers = 1;
    std::string out_path, format = "csv";
    app.add_option("--seed", seed, "RNG seed");
    app.add_option("--workers", workers, "worker threads")->envname("ENTROSTAT_WORKERS");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    // phase-diagram
    auto* pd = app.add_subcommand("phase-diagram", "thermodynamic branches over a beta grid");
    double pd_min = -5.0, pd_max = 5.0;
    int pd_points = 101;
    std::string pd_branch = "both";
    pd->add_option("--beta-min", pd_min);
    pd->add_option("--beta-max", pd_max);
    pd->add_option("--points", pd_points);
    pd->add_option("--branch", pd_branch)->check(CLI::IsMember({"stable", "metastable", "both"}));

    // density
    auto* de = app.add_subcommand("density", "eigenvalue density on the branch support");
    double de_beta = 0.0;
    int de_grid = 201;
    std::string de_branch = "stable";
    de->add_option("--beta", de_beta)->required();
    de->add_option("--branch", de_branch)->check(CLI::IsMember({"stable", "metastable"}));
    de->add_option("--grid-points", de_grid);

    // moments
    auto* mo = app.add_subcommand("moments", "purity moments and cumulants");
    std::string mo_mode;
    int mo_n = 2, mo_m = 2;
    double mo_x = -1.0, mo_beta = 0.0, mo_t3 = -1.0, mo_t4 = -1.0;
    mo->add_option("--mode", mo_mode)
        ->required()
        ->check(CLI::IsMember({"pure-exact", "pure-asymptotic", "mixed-exact", "gaussian",
                               "high-temp"}));
    mo->add_option("--n", mo_n);
    mo->add_option("--m", mo_m);
    mo->add_option("--x", mo_x);
    mo->add_option("--beta", mo_beta);
    mo->add_option("--t3", mo_t3);
    mo->add_option("--t4", mo_t4);

    // sample
    auto* sa = app.add_subcommand("sample", "random-state and Coulomb-gas samplers");
    std::string sa_kind;
    int sa_n = 4, sa_m = 4, sa_l = 8, sa_bins = 40;
    long long sa_samples = 1000;
    double sa_beta_scaled = 0.0;
    sa->add_option("--kind", sa_kind)
        ->required()
        ->check(CLI::IsMember({"haar-spectrum", "simplex", "purified", "mcmc"}));
    sa->add_option("--n", sa_n);
    sa->add_option("--m", sa_m);
    sa->add_option("--l", sa_l);
    sa->add_option("--samples", sa_samples);
    sa->add_option("--bins", sa_bins);
    sa->add_option("--beta-scaled", sa_beta_scaled);

    // minimize
    auto* mi = app.add_subcommand("minimize", "finite-N free-energy minimization");
    int mi_n = 30;
    double mi_beta_val = 0.0;
    bool mi_has_beta = false;
    std::string mi_sweep, mi_profile;
    mi->add_option("--n", mi_n)->required();
    auto* mi_beta_opt = mi->add_option("--beta", mi_beta_val);
    mi->add_option("--beta-sweep", mi_sweep, "lo:hi:step");
    mi->add_option("--profile", mi_profile, "mu grid lo:hi:step (requires --beta)");

    // verify
    auto* ve = app.add_subcommand("verify", "invariant and acceptance suites");
    std::string ve_suite = "all", ve_budget = "quick";
    ve->add_option("--suite", ve_suite)
        ->check(CLI::IsMember({"analytic", "moments", "sampling", "coulomb", "all"}));
    ve->add_option("--budget", ve_budget)->check(CLI::IsMember({"quick", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors exit 2
    }
    mi_has_beta = mi_beta_opt->count() > 0;

    if (workers < 1) workers = 1;

    auto make_output = [&](const std::string& command, const json& params) {
        Output out;
        out.path = out_path;
        out.format = format;
        out.meta = base_meta(command, seed, workers, params);
        return out;
    };

    try {
        if (pd->parsed()) {
            auto out = make_output("phase-diagram", {{"beta_min", pd_min},
                                                     {"beta_max", pd_max},
                                                     {"points", pd_points},
                                                     {"branch", pd_branch}});
            return cmd_phase_diagram(pd_min, pd_max, pd_points, pd_branch, out);
        }
        if (de->parsed()) {
            auto out = make_output("density", {{"beta", de_beta},
                                               {"branch", de_branch},
                                               {"grid_points", de_grid}});
            return cmd_density(de_beta, de_branch, de_grid, out);
        }
        if (mo->parsed()) {
            auto out = make_output("moments", {{"mode", mo_mode}, {"n", mo_n}, {"m", mo_m}});
            return cmd_moments(mo_mode, mo_n, mo_m,
                               mo_x >= 0.0 ? std::optional<double>(mo_x) : std::nullopt,
                               std::optional<double>(mo_beta),
                               mo_t3 >= 0.0 ? std::optional<double>(mo_t3) : std::nullopt,
                               mo_t4 >= 0.0 ? std::optional<double>(mo_t4) : std::nullopt,
                               out);
        }
        if (sa->parsed()) {
            auto out = make_output("sample", {{"kind", sa_kind},
                                              {"n", sa_n},
                                              {"m", sa_m},
                                              {"l", sa_l},
                                              {"samples", sa_samples},
                                              {"bins", sa_bins},
                                              {"beta_scaled", sa_beta_scaled}});
            return cmd_sample(sa_kind, sa_n, sa_m, sa_l, sa_samples, sa_bins, sa_beta_scaled,
                              seed, workers, out);
        }
        if (mi->parsed()) {
            auto out = make_output("minimize", {{"n", mi_n},
                                                {"beta_sweep", mi_sweep},
                                                {"profile", mi_profile}});
            return cmd_minimize(mi_n,
                                mi_has_beta ? std::optional<double>(mi_beta_val)
                                            : std::nullopt,
                                mi_sweep, mi_profile, out);
        }
        if (ve->parsed()) {
            return cmd_verify(ve_suite, ve_budget, seed, workers, out_path);
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    std::cout << app.help();
    return 2;
}
