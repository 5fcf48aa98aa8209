#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "frbe/config.hpp"
#include "frbe/covariance.hpp"
#include "frbe/diagnostics.hpp"
#include "frbe/errors.hpp"
#include "frbe/io.hpp"
#include "frbe/parallel.hpp"
#include "frbe/simulate.hpp"
#include "frbe/specfun.hpp"
#include "frbe/version.hpp"

namespace {

using nlohmann::json;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::string run_id;
    int threads = 0;
    std::vector<std::string> overrides;
};

/// Reader for one subcommand's section of the `run` object. Every accessor
/// records its key; finish() rejects keys that no accessor claimed, so typos
/// in option names fail loudly instead of silently using defaults.
class OptionBlock {
public:
    OptionBlock(const json& run, const std::string& name)
        : prefix_("run." + name),
          obj_(run.contains(name) ? run.at(name) : json::object()) {
        if (!obj_.is_object()) throw frbe::ConfigError(prefix_, "must be an object");
    }

    double number(const char* key, double fallback) {
        claim(key);
        if (!obj_.contains(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_number()) throw frbe::ConfigError(path(key), "must be a number");
        return v.get<double>();
    }

    int integer(const char* key, int fallback) {
        claim(key);
        if (!obj_.contains(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_number_integer()) throw frbe::ConfigError(path(key), "must be an integer");
        return v.get<int>();
    }

    bool boolean(const char* key, bool fallback) {
        claim(key);
        if (!obj_.contains(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_boolean()) throw frbe::ConfigError(path(key), "must be a boolean");
        return v.get<bool>();
    }

    std::string text(const char* key, const std::string& fallback) {
        claim(key);
        if (!obj_.contains(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_string()) throw frbe::ConfigError(path(key), "must be a string");
        return v.get<std::string>();
    }

    std::vector<double> number_list(const char* key, std::vector<double> fallback) {
        claim(key);
        if (!obj_.contains(key)) return fallback;
        const json& v = obj_.at(key);
        if (!v.is_array()) throw frbe::ConfigError(path(key), "must be an array of numbers");
        std::vector<double> out;
        out.reserve(v.size());
        for (const json& item : v) {
            if (!item.is_number())
                throw frbe::ConfigError(path(key), "must be an array of numbers");
            out.push_back(item.get<double>());
        }
        return out;
    }

    bool has(const char* key) const { return obj_.contains(key); }

    void finish() const {
        for (const auto& [key, value] : obj_.items())
            if (std::find(claimed_.begin(), claimed_.end(), key) == claimed_.end())
                throw frbe::ConfigError(prefix_ + "." + key, "unknown option");
    }

private:
    std::string path(const char* key) const { return prefix_ + "." + key; }
    void claim(const char* key) { claimed_.emplace_back(key); }

    std::string prefix_;
    json obj_;
    std::vector<std::string> claimed_;
};

/// Collects the files a run produces and writes the shared metadata sidecar.
/// The sidecar embeds the resolved configuration, its hash, and the library
/// version; none of the content depends on wall-clock state, so re-running an
/// unchanged configuration reproduces every byte.
class OutputSet {
public:
    OutputSet(const CommonArgs& args, const json& resolved_doc, std::string subcommand)
        : dir_(args.out_dir),
          run_id_(args.run_id.empty() ? frbe::config_hash(resolved_doc) : args.run_id),
          doc_(resolved_doc),
          subcommand_(std::move(subcommand)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw frbe::ConfigError("out", "cannot create output directory '" + dir_.string() +
                                               "': " + ec.message());
    }

    const std::string& run_id() const { return run_id_; }

    std::string file(const std::string& suffix) {
        const std::string name = run_id_ + suffix;
        files_.push_back(name);
        return (dir_ / name).string();
    }

    void write_meta(json extra = json::object()) {
        json meta;
        meta["config"] = doc_;
        meta["config_hash"] = frbe::config_hash(doc_);
        meta["files"] = files_;
        meta["run_id"] = run_id_;
        meta["subcommand"] = subcommand_;
        meta["version"] = frbe::version_string;
        for (auto& [key, value] : extra.items()) meta[key] = std::move(value);
        const std::string path = (dir_ / (run_id_ + ".meta.json")).string();
        frbe::write_text_file(path, meta.dump(2) + "\n");
        report(path);
    }

    void report(const std::string& path) const { std::cout << "wrote " << path << "\n"; }

private:
    std::filesystem::path dir_;
    std::string run_id_;
    json doc_;
    std::string subcommand_;
    std::vector<std::string> files_;
};

Eigen::VectorXd lattice_t_grid(const frbe::LatticeConfig& lat) {
    return frbe::linspace(lat.t_min, lat.t_max, lat.t_steps);
}

Eigen::VectorXd lattice_x_grid(const frbe::LatticeConfig& lat) {
    return frbe::linspace(lat.x_min, lat.x_max, lat.x_steps);
}

const char* field_kind_name(frbe::FieldKind kind) {
    switch (kind) {
        case frbe::FieldKind::limit_cyclic: return "limit_cyclic";
        case frbe::FieldKind::limit_origin: return "limit_origin";
        case frbe::FieldKind::prelimit: return "prelimit";
    }
    return "unknown";
}

int cmd_simulate(const CommonArgs& args, const frbe::ExperimentConfig& cfg) {
    OptionBlock opt(cfg.run, "simulate");
    const double epsilon = opt.number("epsilon", 0.0);
    const double rho3 = opt.number("rho3", 1.0);
    opt.finish();
    if (epsilon < 0.0 || !std::isfinite(epsilon))
        throw frbe::ConfigError("run.simulate.epsilon", "must be a finite value >= 0");

    const frbe::FrequencyGrid grid =
        frbe::make_grid(cfg.grid.delta, cfg.grid.n_modes, cfg.grid.offset);
    const frbe::NoiseDraw noise = frbe::draw_noise(grid, cfg.seeds.base_seed);
    const Eigen::VectorXd t_grid = lattice_t_grid(cfg.lattice);
    const Eigen::VectorXd x_grid = lattice_x_grid(cfg.lattice);
    const bool origin = cfg.spectrum.has_origin_component();

    frbe::FieldSample sample;
    if (epsilon > 0.0) {
        const frbe::ScalingParams scaling = frbe::make_scaling(
            origin ? frbe::ScalingCase::origin : frbe::ScalingCase::cyclic, rho3, cfg.model,
            cfg.spectrum);
        sample = frbe::simulate_prelimit_field(cfg.model, cfg.spectrum, cfg.kernel, grid, noise,
                                               scaling, epsilon, t_grid, x_grid);
    } else if (origin) {
        sample = frbe::simulate_limit_origin(cfg.model, cfg.spectrum, cfg.kernel, grid, noise,
                                             t_grid, x_grid);
    } else {
        sample = frbe::simulate_limit_cyclic(cfg.model, cfg.spectrum, cfg.kernel, grid, noise,
                                             t_grid, x_grid);
    }

    OutputSet out(args, cfg.raw, "simulate");
    const std::string csv = out.file(".csv");
    frbe::write_field_csv(csv, sample);
    out.report(csv);
    json extra;
    extra["field_kind"] = field_kind_name(sample.provenance.field_kind);
    extra["seed"] = sample.provenance.seed;
    extra["tail_fraction"] = sample.provenance.tail_fraction;
    out.write_meta(std::move(extra));
    return 0;
}

int cmd_covariance(const CommonArgs& args, const frbe::ExperimentConfig& cfg) {
    OptionBlock opt(cfg.run, "covariance");
    const double t_ref = opt.number("t_ref", 1.0);
    const double x_ref = opt.number("x_ref", 20.0);
    const bool surface = opt.boolean("surface", true);
    const int surface_t_steps = opt.integer("surface_t_steps", 21);
    const int surface_x_steps = opt.integer("surface_x_steps", 21);
    const bool spatial = opt.boolean("spatial", true);
    const std::vector<double> x_refs = opt.number_list("x_refs", {1.0, 5.0});
    std::vector<double> nus = opt.number_list("nus", {});
    const double x_lag_min = opt.number("x_lag_min", -30.0);
    const double x_lag_max = opt.number("x_lag_max", 30.0);
    const int x_lag_steps = opt.integer("x_lag_steps", 121);
    const bool temporal = opt.boolean("temporal", true);
    const double t_fix = opt.number("t_fix", 0.1);
    const double t2_min = opt.number("t2_min", 0.1);
    const double t2_max = opt.number("t2_max", 100.0);
    const int t2_steps = opt.integer("t2_steps", 100);
    const double x_point = opt.number("x_point", 20.0);
    const double abs_tol = opt.number("abs_tol", 1e-8);
    const bool emit_gnuplot = opt.boolean("emit_gnuplot", false);
    opt.finish();
    if (nus.empty()) nus.push_back(cfg.kernel.nu);

    const bool origin = cfg.spectrum.has_origin_component();
    const frbe::CovarianceCase cc =
        origin ? frbe::CovarianceCase::origin : frbe::CovarianceCase::cyclic;
    const int threads = frbe::resolve_threads(args.threads);

    auto cov = [&](double t, double x, double t2, double x2, const frbe::KernelSpec& ks) {
        frbe::CovarianceQuery q;
        q.t = t;
        q.x = x;
        q.t2 = t2;
        q.x2 = x2;
        q.covariance_case = cc;
        return origin ? frbe::covariance_limit_origin(cfg.model, cfg.spectrum, ks, q, abs_tol)
                      : frbe::covariance_limit_cyclic(cfg.model, cfg.spectrum, ks, q, abs_tol);
    };

    OutputSet out(args, cfg.raw, "covariance");
    std::vector<std::string> csv_names;

    if (surface) {
        const Eigen::VectorXd t2 = frbe::linspace(t_ref, cfg.lattice.t_max, surface_t_steps);
        const Eigen::VectorXd x2 =
            frbe::linspace(cfg.lattice.x_min, cfg.lattice.x_max, surface_x_steps);
        Eigen::MatrixXd values(t2.size(), x2.size());
        frbe::parallel_for(static_cast<std::size_t>(values.size()), threads, [&](std::size_t f) {
            const Eigen::Index i = static_cast<Eigen::Index>(f) / x2.size();
            const Eigen::Index k = static_cast<Eigen::Index>(f) % x2.size();
            values(i, k) = cov(t_ref, x_ref, t2[i], x2[k], cfg.kernel);
        });
        const std::string path = out.file("_surface.csv");
        frbe::write_surface_csv(path, t2, x2, values);
        out.report(path);
        csv_names.push_back(path);
    }

    if (spatial) {
        const Eigen::VectorXd lags = frbe::linspace(x_lag_min, x_lag_max, x_lag_steps);
        std::vector<frbe::SliceSeries> series;
        for (double nu : nus) {
            frbe::KernelSpec ks = cfg.kernel;
            ks.nu = nu;
            for (double xr : x_refs) {
                frbe::SliceSeries s;
                s.label = "xref=" + frbe::format_double(xr) + ";nu=" + frbe::format_double(nu);
                s.arg.assign(lags.data(), lags.data() + lags.size());
                s.value.resize(s.arg.size());
                frbe::parallel_for(s.arg.size(), threads, [&](std::size_t i) {
                    s.value[i] = cov(t_ref, xr, t_ref, s.arg[i], ks);
                });
                series.push_back(std::move(s));
            }
        }
        const std::string path = out.file("_spatial.csv");
        frbe::write_slices_csv(path, series);
        out.report(path);
        csv_names.push_back(path);
    }

    if (temporal) {
        const Eigen::VectorXd t2 = frbe::linspace(t2_min, t2_max, t2_steps);
        frbe::SliceSeries s;
        s.label = "t=" + frbe::format_double(t_fix) + ";x=" + frbe::format_double(x_point);
        s.arg.assign(t2.data(), t2.data() + t2.size());
        s.value.resize(s.arg.size());
        frbe::parallel_for(s.arg.size(), threads, [&](std::size_t i) {
            s.value[i] = cov(t_fix, x_point, s.arg[i], x_point, cfg.kernel);
        });
        const std::string path = out.file("_temporal.csv");
        frbe::write_slices_csv(path, {s});
        out.report(path);
        csv_names.push_back(path);
    }

    if (emit_gnuplot) {
        std::string script = "set datafile separator ','\nset key autotitle columnheader\n";
        for (const std::string& name : csv_names) {
            const std::string base = std::filesystem::path(name).filename().string();
            script += "# " + base + "\n";
        }
        if (spatial)
            script += "plot '" + out.run_id() +
                      "_spatial.csv' using 1:2:(column(3)) with lines title 'spatial slices'\n";
        if (temporal)
            script += "replot '" + out.run_id() + "_temporal.csv' using 1:2 with lines\n";
        const std::string path = out.file(".gp");
        frbe::write_text_file(path, script);
        out.report(path);
    }

    json extra;
    extra["covariance_case"] = origin ? "origin" : "cyclic";
    out.write_meta(std::move(extra));
    return 0;
}

int cmd_converge(const CommonArgs& args, const frbe::ExperimentConfig& cfg) {
    OptionBlock opt(cfg.run, "converge");
    const std::vector<double> eps_list =
        opt.number_list("eps_list", {1.0, 0.5, 0.25, 0.125, 0.0625});
    const double t = opt.number("t", 1.0);
    const double x = opt.number("x", 20.0);
    const double rho3 = opt.number("rho3", 1.0);
    const int mc_seeds = opt.integer("mc_seeds", 0);
    opt.finish();
    if (eps_list.empty())
        throw frbe::ConfigError("run.converge.eps_list", "must not be empty");
    for (double e : eps_list)
        if (!(e >= 0.0) || !std::isfinite(e))
            throw frbe::ConfigError("run.converge.eps_list",
                                    "entries must be finite values >= 0");
    if (mc_seeds < 0 || mc_seeds == 1)
        throw frbe::ConfigError("run.converge.mc_seeds", "must be 0 or at least 2");

    const bool origin = cfg.spectrum.has_origin_component();
    const frbe::ScalingParams scaling = frbe::make_scaling(
        origin ? frbe::ScalingCase::origin : frbe::ScalingCase::cyclic, rho3, cfg.model,
        cfg.spectrum);
    const frbe::FrequencyGrid grid =
        frbe::make_grid(cfg.grid.delta, cfg.grid.n_modes, cfg.grid.offset);
    const int threads = frbe::resolve_threads(args.threads);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    std::vector<std::vector<double>> rows;
    for (double eps : eps_list) {
        const double gap = frbe::mean_square_gap(cfg.model, cfg.spectrum, cfg.kernel, grid,
                                                 scaling, eps, t, x);
        double mc_mean = nan;
        double mc_se = nan;
        if (mc_seeds >= 2) {
            if (eps == 0.0) {
                mc_mean = 0.0;
                mc_se = 0.0;
            } else {
                const frbe::GapMonteCarlo mc = frbe::mc_mean_square_gap(
                    cfg.model, cfg.spectrum, cfg.kernel, grid, scaling, eps, t, x, mc_seeds,
                    cfg.seeds.base_seed, threads);
                mc_mean = mc.mean;
                mc_se = mc.std_err;
            }
        }
        rows.push_back({eps, gap, mc_mean, mc_se});
    }

    OutputSet out(args, cfg.raw, "converge");
    const std::string path = out.file("_converge.csv");
    frbe::write_table_csv(path, {"eps", "gap_quadrature", "gap_mc", "mc_std_err"}, rows);
    out.report(path);
    json extra;
    extra["scaling_case"] = origin ? "origin" : "cyclic";
    extra["mc_seeds"] = mc_seeds;
    out.write_meta(std::move(extra));
    return 0;
}

json estimate_json(const frbe::EstimateSE& e) {
    json out;
    out["estimate"] = e.estimate;
    out["std_err"] = e.std_err;
    out["degenerate"] = e.degenerate;
    return out;
}

const char* verdict_name(frbe::DependenceVerdict v) {
    switch (v) {
        case frbe::DependenceVerdict::LRD: return "LRD";
        case frbe::DependenceVerdict::SRD: return "SRD";
        case frbe::DependenceVerdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

int cmd_diagnostics(const CommonArgs& args, const frbe::ExperimentConfig& cfg) {
    OptionBlock opt(cfg.run, "diagnostics");
    const double t0 = opt.number("t0", 1.0);
    const double x0 = opt.number("x0", 0.0);
    const std::vector<double> T_list = opt.number_list("T_list", {10.0, 100.0, 1000.0});
    const std::vector<double> H_list = opt.number_list("H_list", {5.0, 10.0, 20.0, 35.0, 50.0});
    const double growth_factor = opt.number("growth_factor", 5.0);
    const double cauchy_tol = opt.number("cauchy_tol", 1e-6);
    const bool empirical = opt.boolean("empirical", false);
    opt.finish();

    frbe::HolderReport holder =
        frbe::holder_exponents_matern(cfg.model, cfg.kernel, cfg.spectrum);

    if (empirical) {
        if (cfg.lattice.t_steps < 11 && cfg.lattice.x_steps < 11)
            throw frbe::ConfigError(
                "lattice", "empirical estimation needs at least 11 steps on the t or x axis");
        const bool origin = cfg.spectrum.has_origin_component();
        const frbe::FrequencyGrid grid =
            frbe::make_grid(cfg.grid.delta, cfg.grid.n_modes, cfg.grid.offset);
        const auto ensemble = frbe::simulate_ensemble(
            origin ? frbe::FieldKind::limit_origin : frbe::FieldKind::limit_cyclic, cfg.model,
            cfg.spectrum, cfg.kernel, grid, cfg.seeds.base_seed, cfg.seeds.ensemble_size,
            lattice_t_grid(cfg.lattice), lattice_x_grid(cfg.lattice),
            frbe::resolve_threads(args.threads));
        if (cfg.lattice.t_steps >= 11)
            holder.empirical_gamma_t =
                frbe::estimate_holder_from_samples(ensemble, frbe::Axis::time);
        if (cfg.lattice.x_steps >= 11)
            holder.empirical_gamma_x =
                frbe::estimate_holder_from_samples(ensemble, frbe::Axis::space);
    }

    const frbe::DependenceReport dep = frbe::dependence_probe(
        cfg.model, cfg.spectrum, cfg.kernel, t0, x0, T_list, H_list, growth_factor, cauchy_tol);

    json holder_doc;
    holder_doc["eta_star"] = holder.eta_star;
    holder_doc["eta_tilde_star"] =
        holder.eta_tilde_star ? json(*holder.eta_tilde_star) : json(nullptr);
    holder_doc["gamma_t_sup"] = holder.gamma_t_sup;
    holder_doc["theta"] = holder.theta;
    holder_doc["theta_star"] = holder.theta_star ? json(*holder.theta_star) : json(nullptr);
    holder_doc["empirical_gamma_t"] =
        holder.empirical_gamma_t ? estimate_json(*holder.empirical_gamma_t) : json(nullptr);
    holder_doc["empirical_gamma_x"] =
        holder.empirical_gamma_x ? estimate_json(*holder.empirical_gamma_x) : json(nullptr);

    json dep_doc;
    dep_doc["time_partial_integrals"] = json::array();
    for (const auto& [T, v] : dep.time_partial_integrals)
        dep_doc["time_partial_integrals"].push_back({T, v});
    dep_doc["space_partial_integrals"] = json::array();
    for (const auto& [H, v] : dep.space_partial_integrals)
        dep_doc["space_partial_integrals"].push_back({H, v});
    dep_doc["verdict_time"] = verdict_name(dep.verdict_time);
    dep_doc["verdict_space"] = verdict_name(dep.verdict_space);
    dep_doc["time_growth_exponent"] = dep.time_growth_exponent;
    dep_doc["space_tail_exponent"] = dep.space_tail_exponent;

    OutputSet out(args, cfg.raw, "diagnostics");
    const std::string holder_path = out.file("_holder.json");
    frbe::write_text_file(holder_path, holder_doc.dump(2) + "\n");
    out.report(holder_path);
    const std::string dep_path = out.file("_dependence.json");
    frbe::write_text_file(dep_path, dep_doc.dump(2) + "\n");
    out.report(dep_path);
    out.write_meta();
    return 0;
}

std::vector<double> range_points(OptionBlock& opt, const char* list_key, const char* min_key,
                                 const char* max_key, const char* points_key,
                                 const char* scale_key, double def_min, double def_max,
                                 int def_points, const std::string& def_scale,
                                 const std::string& prefix) {
    if (opt.has(list_key)) {
        std::vector<double> given = opt.number_list(list_key, {});
        opt.number(min_key, def_min);
        opt.number(max_key, def_max);
        opt.integer(points_key, def_points);
        opt.text(scale_key, def_scale);
        return given;
    }
    const double lo = opt.number(min_key, def_min);
    const double hi = opt.number(max_key, def_max);
    const int n = opt.integer(points_key, def_points);
    const std::string scale = opt.text(scale_key, def_scale);
    opt.number_list(list_key, {});
    if (n < 0) throw frbe::ConfigError(prefix + "." + points_key, "must be >= 0");
    if (scale != "log" && scale != "linear")
        throw frbe::ConfigError(prefix + "." + scale_key, "must be \"log\" or \"linear\"");
    if (n > 0 && !(lo <= hi))
        throw frbe::ConfigError(prefix + "." + min_key, "range minimum exceeds maximum");
    if (scale == "log" && n > 0 && !(lo > 0.0))
        throw frbe::ConfigError(prefix + "." + min_key,
                                "log-spaced ranges need a positive minimum");
    std::vector<double> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        pts.push_back(scale == "log" ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f);
    }
    return pts;
}

int cmd_specfun_table(const CommonArgs& args) {
    std::ifstream in(args.config_path);
    if (!in)
        throw frbe::ConfigError("config",
                                "cannot open configuration file '" + args.config_path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw frbe::ConfigError("config", std::string("invalid JSON: ") + e.what());
    }
    for (const auto& [key, value] : frbe::parse_override_tokens(args.overrides))
        frbe::apply_override(doc, key, value);
    if (!doc.is_object()) throw frbe::ConfigError("config", "configuration root must be an object");
    json run = doc.contains("run") ? doc.at("run") : json::object();
    if (!run.is_object()) throw frbe::ConfigError("run", "must be an object");

    OptionBlock opt(run, "specfun_table");
    const std::vector<double> betas = opt.number_list(
        "beta_list", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
    const std::vector<double> s_values =
        range_points(opt, "s_list", "s_min", "s_max", "s_points", "s_scale", 1e-3, 1e4, 60,
                     "log", "run.specfun_table");
    const std::vector<double> nus = opt.number_list("nu_list", {0.5, 1.5});
    const std::vector<double> z_values =
        range_points(opt, "z_list", "z_min", "z_max", "z_points", "z_scale", 0.1, 10.0, 40,
                     "linear", "run.specfun_table");
    opt.finish();

    for (double b : betas)
        if (!(b > 0.0) || b > 1.0 || !std::isfinite(b))
            throw frbe::ConfigError("run.specfun_table.beta_list",
                                    "entries must lie in (0, 1]");
    for (double s : s_values)
        if (!(s >= 0.0) || !std::isfinite(s))
            throw frbe::ConfigError("run.specfun_table.s_list",
                                    "entries must be finite values >= 0");
    for (double nu : nus)
        if (!std::isfinite(nu))
            throw frbe::ConfigError("run.specfun_table.nu_list", "entries must be finite");
    for (double z : z_values)
        if (!(z > 0.0) || !std::isfinite(z))
            throw frbe::ConfigError("run.specfun_table.z_list", "entries must be > 0");

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> ml_rows;
    for (double b : betas)
        for (double s : s_values) {
            const double value = frbe::mittag_leffler_neg(b, s).value;
            if (b < 1.0)
                ml_rows.push_back({b, s, value, frbe::mittag_leffler_lower(b, s),
                                   frbe::mittag_leffler_upper(b, s), 1.0});
            else
                ml_rows.push_back({b, s, value, nan, nan, 0.0});
        }
    std::vector<std::vector<double>> bessel_rows;
    for (double nu : nus)
        for (double z : z_values) bessel_rows.push_back({nu, z, frbe::bessel_k(nu, z)});

    OutputSet out(args, doc, "specfun-table");
    const std::string ml_path = out.file("_mittag_leffler.csv");
    frbe::write_table_csv(ml_path,
                          {"beta", "s", "value", "lower_bound", "upper_bound",
                           "bound_applicable"},
                          ml_rows);
    out.report(ml_path);
    const std::string bessel_path = out.file("_bessel_k.csv");
    frbe::write_table_csv(bessel_path, {"nu", "z", "value"}, bessel_rows);
    out.report(bessel_path);
    out.write_meta();
    return 0;
}

void add_common_options(CLI::App* sub, CommonArgs& args) {
    sub->add_option("--config", args.config_path, "experiment configuration JSON file")
        ->required();
    sub->add_option("--out", args.out_dir, "output directory (default: current directory)");
    sub->add_option("--run-id", args.run_id,
                    "basename for output files (default: the config hash)");
    sub->add_option("--threads", args.threads,
                    "worker threads (0: FRBE_THREADS env var, then hardware)");
    sub->allow_extras();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional Riesz-Bessel limit fields: simulation, covariance quadrature, "
                 "convergence and dependence diagnostics"};
    app.require_subcommand(1);
    CommonArgs args;

    CLI::App* sim =
        app.add_subcommand("simulate", "draw one field realization on the (t, x) lattice");
    CLI::App* cov =
        app.add_subcommand("covariance", "tabulate the limit covariance surface and slices");
    CLI::App* con = app.add_subcommand(
        "converge", "tabulate the mean-square pre-limit/limit gap along an epsilon schedule");
    CLI::App* diag = app.add_subcommand(
        "diagnostics", "report Holder orders and dependence-range evidence");
    CLI::App* spec = app.add_subcommand(
        "specfun-table", "dump Mittag-Leffler and Bessel-K evaluation tables");
    for (CLI::App* sub : {sim, cov, con, diag, spec}) add_common_options(sub, args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << "config error: invalid command line\n";
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    args.overrides = sub->remaining();

    try {
        if (sub == spec) return cmd_specfun_table(args);
        const frbe::ExperimentConfig cfg =
            frbe::ExperimentConfig::load(args.config_path, args.overrides);
        if (sub == sim) return cmd_simulate(args, cfg);
        if (sub == cov) return cmd_covariance(args, cfg);
        if (sub == con) return cmd_converge(args, cfg);
        return cmd_diagnostics(args, cfg);
    } catch (const frbe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}
