#include "acbound/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "acbound/bounds.hpp"
#include "acbound/classifiers.hpp"
#include "acbound/lb_family.hpp"
#include "acbound/margin.hpp"
#include "acbound/mc.hpp"
#include "acbound/rng.hpp"
#include "acbound/serialize.hpp"

namespace acbound {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// config parsing (strict: unknown keys are errors)

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) { ok = true; break; }
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T require(const json& j, const std::string& where, const char* key) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": bad value for '" + std::string(key) + "'");
    }
}

template <typename T>
T optional_or(const json& j, const std::string& where, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": bad value for '" + std::string(key) + "'");
    }
}

struct LambdaGridSpec {
    enum class Kind { range, cell_excess_multiples };
    Kind kind = Kind::range;
    double min = 0.0;
    double max = 0.0;
    int points = 0;
    std::string scale = "linear";
    std::vector<double> multiples;

    std::vector<double> materialize(const LowerBoundFamily& fam) const {
        std::vector<double> grid;
        if (kind == Kind::cell_excess_multiples) {
            for (double k : multiples) grid.push_back(k * fam.cell_excess);
        } else if (scale == "linear") {
            for (int i = 0; i < points; ++i)
                grid.push_back(points == 1 ? min : min + (max - min) * i / (points - 1));
        } else {
            const double lr = std::log(max / min);
            for (int i = 0; i < points; ++i)
                grid.push_back(points == 1 ? min : min * std::exp(lr * i / (points - 1)));
        }
        if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("run.lambda: grid must be ascending");
        return grid;
    }
};

struct HolderFamilySpec {
    double beta = 1.0;
    double L = 1.0;
    double c5 = 1.0;
};

struct ExperimentConfig {
    FamilyParams family;
    std::optional<HolderFamilySpec> family_holder; // q derived from delta/alpha/beta/c5
    ClassifierSpec classifier;
    struct Run {
        std::vector<long> n_list{512};
        long m = 1000;
        LambdaGridSpec lambda;
        int sigma_subset_size = 10;
        std::uint64_t master_seed = 1;
        int workers = 1;
    } run;
    struct Verify {
        std::optional<double> C_M;
        int t_points = 100;
    } verify;
    struct Fit {
        double r_prime = 0.0;
        bool n_rate = false;
    } fit;
};

FamilyParams parse_family(const json& j, std::optional<HolderFamilySpec>& holder) {
    reject_unknown(j, "family",
                   {"d", "q", "delta", "alpha", "C", "c2", "code_mode", "min_hamming", "code_budget",
                    "code_seed", "holder"});
    FamilyParams p;
    p.d = require<int>(j, "family", "d");
    p.delta = require<double>(j, "family", "delta");
    p.alpha = require<double>(j, "family", "alpha");
    p.C = require<double>(j, "family", "C");
    p.c2 = require<double>(j, "family", "c2");
    p.code_mode = optional_or<std::string>(j, "family", "code_mode", "exhaustive");
    p.min_hamming = optional_or<int>(j, "family", "min_hamming", -1);
    p.code_budget = optional_or<long>(j, "family", "code_budget", 200000);
    p.code_seed = optional_or<std::uint64_t>(j, "family", "code_seed", 0x5eedULL);
    if (j.contains("holder")) {
        const auto& h = j.at("holder");
        reject_unknown(h, "family.holder", {"beta", "L", "c5"});
        HolderFamilySpec spec;
        spec.beta = require<double>(h, "family.holder", "beta");
        spec.L = require<double>(h, "family.holder", "L");
        spec.c5 = require<double>(h, "family.holder", "c5");
        holder = spec;
        p.q = holder_q(p.delta, p.alpha, spec.beta, spec.c5);
        if (j.contains("q")) throw ConfigError("family: give either 'q' or 'holder', not both");
    } else {
        p.q = require<int>(j, "family", "q");
    }
    return p;
}

ClassifierSpec parse_classifier(const json& j) {
    reject_unknown(j, "classifier", {"kind", "net"});
    const auto kind = require<std::string>(j, "classifier", "kind");
    if (kind == "class_erm") {
        if (j.contains("net")) throw ConfigError("classifier: 'net' is only valid for net_erm");
        return ClassifierSpec::class_erm();
    }
    if (kind != "net_erm") throw ConfigError("classifier.kind: expected 'class_erm' or 'net_erm'");
    if (!j.contains("net")) return ClassifierSpec::net_erm_family();
    const auto& nj = j.at("net");
    reject_unknown(nj, "classifier.net", {"kind", "beta", "L", "epsilon", "schedule"});
    const auto net_kind = optional_or<std::string>(nj, "classifier.net", "kind", "family");
    if (net_kind == "family") return ClassifierSpec::net_erm_family();
    if (net_kind != "holder") throw ConfigError("classifier.net.kind: expected 'family' or 'holder'");
    const double beta = require<double>(nj, "classifier.net", "beta");
    const double L = require<double>(nj, "classifier.net", "L");
    double epsilon = optional_or<double>(nj, "classifier.net", "epsilon", 0.0);
    double schedule_r = 0.0;
    if (nj.contains("schedule")) {
        reject_unknown(nj.at("schedule"), "classifier.net.schedule", {"r"});
        schedule_r = require<double>(nj.at("schedule"), "classifier.net.schedule", "r");
    }
    if (epsilon <= 0.0 && schedule_r <= 0.0)
        throw ConfigError("classifier.net: holder nets need 'epsilon' or 'schedule.r'");
    return ClassifierSpec::net_erm_holder(beta, L, epsilon, schedule_r);
}

LambdaGridSpec parse_lambda(const json& j) {
    LambdaGridSpec spec;
    if (j.contains("kind") && j.at("kind") == "cell_excess_multiples") {
        reject_unknown(j, "run.lambda", {"kind", "ks"});
        spec.kind = LambdaGridSpec::Kind::cell_excess_multiples;
        spec.multiples = require<std::vector<double>>(j, "run.lambda", "ks");
        if (spec.multiples.empty()) throw ConfigError("run.lambda.ks: empty grid");
        return spec;
    }
    reject_unknown(j, "run.lambda", {"min", "max", "points", "scale"});
    spec.min = require<double>(j, "run.lambda", "min");
    spec.max = require<double>(j, "run.lambda", "max");
    spec.points = require<int>(j, "run.lambda", "points");
    spec.scale = optional_or<std::string>(j, "run.lambda", "scale", "linear");
    if (spec.scale != "linear" && spec.scale != "geometric")
        throw ConfigError("run.lambda.scale: expected 'linear' or 'geometric'");
    if (spec.points < 1) throw ConfigError("run.lambda.points: must be >= 1");
    if (!(spec.min > 0.0) || spec.max < spec.min) throw ConfigError("run.lambda: need 0 < min <= max");
    return spec;
}

ExperimentConfig parse_config(const json& j) {
    reject_unknown(j, "config", {"family", "classifier", "run", "verify", "fit"});
    ExperimentConfig cfg;
    if (!j.contains("family")) throw ConfigError("config: missing 'family'");
    cfg.family = parse_family(j.at("family"), cfg.family_holder);
    if (j.contains("classifier")) cfg.classifier = parse_classifier(j.at("classifier"));
    if (j.contains("run")) {
        const auto& r = j.at("run");
        reject_unknown(r, "run", {"n_list", "m", "lambda", "sigma_subset_size", "master_seed", "workers"});
        cfg.run.n_list = require<std::vector<long>>(r, "run", "n_list");
        if (cfg.run.n_list.empty()) throw ConfigError("run.n_list: empty");
        for (long n : cfg.run.n_list)
            if (n < 1) throw ConfigError("run.n_list: entries must be >= 1");
        cfg.run.m = require<long>(r, "run", "m");
        if (cfg.run.m < 1) throw ConfigError("run.m: must be >= 1");
        if (!r.contains("lambda")) throw ConfigError("run: missing 'lambda'");
        cfg.run.lambda = parse_lambda(r.at("lambda"));
        cfg.run.sigma_subset_size = optional_or<int>(r, "run", "sigma_subset_size", 10);
        if (cfg.run.sigma_subset_size < 1) throw ConfigError("run.sigma_subset_size: must be >= 1");
        cfg.run.master_seed = optional_or<std::uint64_t>(r, "run", "master_seed", 1);
        cfg.run.workers = optional_or<int>(r, "run", "workers", 1);
        if (cfg.run.workers < 1) throw ConfigError("run.workers: must be >= 1");
    }
    if (j.contains("verify")) {
        const auto& v = j.at("verify");
        reject_unknown(v, "verify", {"C_M", "t_points"});
        if (v.contains("C_M")) cfg.verify.C_M = require<double>(v, "verify", "C_M");
        cfg.verify.t_points = optional_or<int>(v, "verify", "t_points", 100);
    }
    if (j.contains("fit")) {
        const auto& f = j.at("fit");
        reject_unknown(f, "fit", {"r_prime", "n_rate"});
        cfg.fit.r_prime = optional_or<double>(f, "fit", "r_prime", 0.0);
        cfg.fit.n_rate = optional_or<bool>(f, "fit", "n_rate", false);
    }
    // Env override for the master seed.
    if (const char* env = std::getenv("ACBOUND_SEED")) {
        cfg.run.master_seed = std::strtoull(env, nullptr, 10);
    }
    return cfg;
}

json load_config_json(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        const std::string path_expr = kv.substr(0, eq);
        const std::string value = kv.substr(eq + 1);
        json* node = &j;
        std::stringstream ss(path_expr);
        std::string part;
        std::vector<std::string> parts;
        while (std::getline(ss, part, '.')) parts.push_back(part);
        if (parts.empty()) throw ConfigError("--set: empty key");
        for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::exception&) {
            parsed = value; // plain string
        }
        (*node)[parts.back()] = parsed;
    }
    return j;
}

// ---------------------------------------------------------------------------
// output helpers

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

class OutputDir {
public:
    explicit OutputDir(std::string dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

    void write(const std::string& name, const std::string& content) {
        const fs::path path = fs::path(dir_) / name;
        const fs::path tmp = path.string() + ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + path.string());
            out << content;
        }
        fs::rename(tmp, path);
        char hash[20];
        std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(fnv1a64(content)));
        checksums_[name] = {content.size(), hash};
    }

    // manifest.json is written last, after every other artifact succeeded
    void finalize_manifest(const json& config_echo, double wall_seconds) {
        json manifest;
        manifest["version"] = kVersion;
        manifest["config"] = config_echo;
        manifest["wall_clock_seconds"] = wall_seconds;
        json outputs = json::object();
        for (const auto& [name, info] : checksums_)
            outputs[name] = {{"bytes", info.first}, {"fnv1a64", info.second}};
        manifest["outputs"] = std::move(outputs);
        write("manifest.json", manifest.dump(2) + "\n");
    }

private:
    std::string dir_;
    std::map<std::string, std::pair<std::size_t, std::string>> checksums_;
};

// ---------------------------------------------------------------------------
// subcommands

int cmd_family(const std::string& mode, const json& raw, OutputDir& out, double& wall) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = parse_config(raw);
    const LowerBoundFamily fam = build_family(cfg.family);
    out.write("family.json", family_to_json(fam).dump(2) + "\n");
    int exit_code = 0;
    if (mode == "verify") {
        const double target_C_M =
            cfg.verify.C_M.value_or(fam.C * std::pow(2.0 / fam.c2, fam.alpha));
        std::optional<HolderSpec> holder;
        if (cfg.family_holder) holder = HolderSpec{cfg.family_holder->beta, cfg.family_holder->L};
        const FamilyReport report =
            verify_family(fam, MarginSpec::make(fam.alpha, target_C_M), holder);
        json rj = report_to_json(report);
        rj["target_C_M"] = target_C_M;
        rj["family_C_M"] = fam.C * std::pow(2.0 / fam.c2, fam.alpha);
        out.write("verify.json", rj.dump(2) + "\n");
        exit_code = report.verdict ? 0 : 1;
    }
    wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return exit_code;
}

std::string estimates_csv(const std::vector<ACEstimate>& estimates) {
    std::string csv = "family_id,sigma_index,n,lambda,m,exceed_count,p_hat,ci_lo,ci_hi\n";
    auto row = [&](const ACEstimate& est, int sigma_index, std::size_t si_or_worst, std::size_t li,
                   bool worst) {
        const long count = worst ? est.exceed[est.worst_sigma(li)][li] : est.exceed[si_or_worst][li];
        const auto ci = stats::clopper_pearson(count, est.m);
        csv += est.family_id;
        csv += ',' + std::to_string(sigma_index);
        csv += ',' + std::to_string(est.n);
        csv += ',' + fmt17(est.lambda_grid[li]);
        csv += ',' + std::to_string(est.m);
        csv += ',' + std::to_string(count);
        csv += ',' + fmt17(static_cast<double>(count) / static_cast<double>(est.m));
        csv += ',' + fmt17(ci.lo);
        csv += ',' + fmt17(ci.hi);
        csv += '\n';
    };
    for (const auto& est : estimates) {
        for (std::size_t si = 0; si < est.sigma_indices.size(); ++si)
            for (std::size_t li = 0; li < est.lambda_grid.size(); ++li)
                row(est, est.sigma_indices[si], si, li, false);
        // worst-case rows carry sigma_index = -1
        for (std::size_t li = 0; li < est.lambda_grid.size(); ++li) row(est, -1, 0, li, true);
    }
    return csv;
}

std::vector<ACEstimate> run_all(const ExperimentConfig& cfg, const LowerBoundFamily& fam) {
    const std::vector<int> subset = default_sigma_subset(fam, cfg.run.sigma_subset_size);
    const std::vector<double> grid = cfg.run.lambda.materialize(fam);
    std::vector<ACEstimate> estimates;
    for (long n : cfg.run.n_list)
        estimates.push_back(run_ac(fam, subset, cfg.classifier, n, cfg.run.m, grid,
                                   cfg.run.master_seed, cfg.run.workers));
    return estimates;
}

int cmd_ac_run(const json& raw, OutputDir& out, double& wall) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = parse_config(raw);
    const LowerBoundFamily fam = build_family(cfg.family);
    const auto estimates = run_all(cfg, fam);
    out.write("ac_estimates.csv", estimates_csv(estimates));
    wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return 0;
}

// Rebuild per-(n, sigma) tallies from ac_estimates.csv.
std::vector<ACEstimate> estimates_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path + " (run 'ac run' first)");
    std::string line;
    if (!std::getline(in, line)) throw ConfigError(path + ": empty file");
    std::map<long, ACEstimate> by_n;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 9) throw ConfigError(path + ": malformed row");
        const int sigma_index = std::stoi(fields[1]);
        if (sigma_index < 0) continue; // worst-case rows are derived, not stored
        const long n = std::stol(fields[2]);
        const double lambda = std::stod(fields[3]);
        const long m = std::stol(fields[4]);
        const long count = std::stol(fields[5]);
        auto& est = by_n[n];
        est.family_id = fields[0];
        est.n = n;
        est.m = m;
        if (est.sigma_indices.empty() || est.sigma_indices.back() != sigma_index) {
            est.sigma_indices.push_back(sigma_index);
            est.exceed.emplace_back();
        }
        if (est.sigma_indices.size() == 1) est.lambda_grid.push_back(lambda);
        est.exceed.back().push_back(count);
    }
    std::vector<ACEstimate> result;
    for (auto& [n, est] : by_n) result.push_back(std::move(est));
    return result;
}

int cmd_ac_fit(const json& raw, const std::string& out_dir, OutputDir& out, double& wall) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = parse_config(raw);
    const LowerBoundFamily fam = build_family(cfg.family);
    const auto estimates = estimates_from_csv((fs::path(out_dir) / "ac_estimates.csv").string());
    if (estimates.empty()) throw ConfigError("ac_estimates.csv holds no estimates");

    std::string rates = "kind,slope,intercept,r2,n_points,alpha,r_prime\n";
    json fit_detail;
    fit_detail["family_id"] = fam.id;
    auto emit = [&](const RateFit& fit) {
        rates += fit.kind + ',' + fmt17(fit.slope) + ',' + fmt17(fit.intercept) + ',' + fmt17(fit.r2) +
                 ',' + std::to_string(fit.points.size()) + ',' + fmt17(fam.alpha) + ',' +
                 fmt17(cfg.fit.r_prime) + '\n';
        json pj = json::array();
        for (const auto& [x, y] : fit.points) pj.push_back({x, y});
        fit_detail["fits"].push_back({{"kind", fit.kind},
                                      {"slope", fit.slope},
                                      {"intercept", fit.intercept},
                                      {"r2", fit.r2},
                                      {"points", pj},
                                      {"excluded", fit.excluded}});
    };

    for (const auto& est : estimates) {
        try {
            emit(fit_lambda_exponent(est, fam.alpha));
        } catch (const std::exception& e) {
            fit_detail["skipped"].push_back({{"kind", "lambda_exponent"}, {"n", est.n}, {"reason", e.what()}});
        }
    }
    if (estimates.size() >= 3) {
        for (std::size_t li = 0; li < estimates.front().lambda_grid.size(); ++li) {
            try {
                emit(fit_concentration_slope(estimates, li, fam.alpha));
            } catch (const std::exception& e) {
                fit_detail["skipped"].push_back(
                    {{"kind", "concentration_slope"}, {"lambda_index", li}, {"reason", e.what()}});
            }
        }
    }
    if (cfg.fit.n_rate) {
        // Mean excess is exactly reconstructible when the lambda grid is the
        // full excess lattice {k*aw : k = 1..b}: E[excess] = aw * sum_k p(k).
        bool lattice = cfg.run.lambda.kind == LambdaGridSpec::Kind::cell_excess_multiples &&
                       static_cast<long>(cfg.run.lambda.multiples.size()) == fam.b;
        if (lattice)
            for (long k = 0; k < fam.b; ++k)
                lattice = lattice && cfg.run.lambda.multiples[k] == static_cast<double>(k + 1);
        if (!lattice) {
            fit_detail["skipped"].push_back(
                {{"kind", "n_rate"},
                 {"reason", "lambda grid is not the full cell-excess lattice 1..b"}});
        } else {
            std::vector<std::pair<double, double>> means;
            for (const auto& est : estimates) {
                double worst_mean = 0.0;
                for (std::size_t si = 0; si < est.sigma_indices.size(); ++si) {
                    double mean = 0.0;
                    for (std::size_t li = 0; li < est.lambda_grid.size(); ++li)
                        mean += fam.cell_excess * static_cast<double>(est.exceed[si][li]) /
                                static_cast<double>(est.m);
                    worst_mean = std::max(worst_mean, mean);
                }
                means.emplace_back(static_cast<double>(est.n), worst_mean);
            }
            std::vector<std::string> warnings;
            try {
                emit(fit_n_rate(means, fam.alpha, cfg.fit.r_prime, &warnings));
                fit_detail["n_rate_theory_slope"] = n_rate_theory(fam.alpha, cfg.fit.r_prime);
            } catch (const std::exception& e) {
                fit_detail["skipped"].push_back({{"kind", "n_rate"}, {"reason", e.what()}});
            }
            fit_detail["warnings"] = warnings;
        }
    }
    out.write("rates.csv", rates);
    out.write("fit.json", fit_detail.dump(2) + "\n");
    wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return 0;
}

int cmd_oracle_fano(long instances, int support, int hypotheses, std::uint64_t seed, OutputDir& out,
                    double& wall) {
    const auto t0 = std::chrono::steady_clock::now();
    if (support > 10 || hypotheses > 3) throw ConfigError("oracle fano: enumeration too large");
    if (hypotheses < 2) throw ConfigError("oracle fano: need M >= 2");
    Xoshiro256pp rng(seed);
    json report;
    report["instances"] = json::array();
    bool all_pass = true;
    for (long i = 0; i < instances; ++i) {
        std::vector<FiniteMeasure> Q;
        for (int q = 0; q <= hypotheses; ++q) {
            // Dirichlet(1,...,1) via normalized exponentials
            std::vector<double> w(support);
            double sum = 0.0;
            for (auto& wi : w) {
                wi = -std::log(rng.uniform01());
                sum += wi;
            }
            double acc = 0.0;
            for (std::size_t k = 0; k + 1 < w.size(); ++k) {
                w[k] /= sum;
                acc += w[k];
            }
            w.back() = 1.0 - acc; // exact normalization
            Q.push_back(FiniteMeasure::make(std::move(w)));
        }
        const auto res = fano_oracle_verify(Q);
        all_pass = all_pass && res.pass;
        report["instances"].push_back({{"chi", res.chi},
                                       {"p_star_min", res.p_star_min},
                                       {"bound", res.bound},
                                       {"pass", res.pass},
                                       {"vacuous", res.vacuous}});
    }
    report["all_pass"] = all_pass;
    out.write("oracle.json", report.dump(2) + "\n");
    wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return all_pass ? 0 : 1;
}

int cmd_oracle_fixedpoint(double kappa, double rho, const std::vector<double>& n_list,
                          const std::vector<double>& t_list, long grid_points, OutputDir& out,
                          double& wall) {
    const auto t0 = std::chrono::steady_clock::now();
    json report;
    report["kappa"] = kappa;
    report["rho"] = rho;
    report["instances"] = json::array();
    bool all_pass = true;
    const PowerForm D2 = class_erm_diameter_form(kappa, 1.0);
    for (double n : n_list) {
        const PowerForm phi = class_erm_complexity_form(kappa, rho, n, 1.0);
        for (double t : t_list) {
            const double bisect = sigma_n_t(D2, phi, t, n);
            const double grid = sigma_n_t_grid(D2, phi, t, n, grid_points);
            const double rel = std::abs(bisect - grid) / std::max(bisect, grid);
            const bool pass = rel <= 1e-4;
            all_pass = all_pass && pass;
            report["instances"].push_back(
                {{"n", n}, {"t", t}, {"bisection", bisect}, {"grid", grid}, {"rel_diff", rel}, {"pass", pass}});
        }
    }
    report["all_pass"] = all_pass;
    out.write("oracle.json", report.dump(2) + "\n");
    wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return all_pass ? 0 : 1;
}

int cmd_oracle_net_entropy(int d, double beta, double L, const std::vector<double>& eps_list,
                           OutputDir& out, double& wall) {
    const auto t0 = std::chrono::steady_clock::now();
    if (eps_list.size() < 2) throw ConfigError("oracle net-entropy: need at least 2 epsilons");
    std::vector<double> xs, ys;
    json points = json::array();
    for (double eps : eps_list) {
        const auto net = build_holder_net(d, beta, L, eps, /*materialize_budget=*/1);
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(net.log_cardinality));
        points.push_back({{"epsilon", eps}, {"log_cardinality", net.log_cardinality}});
    }
    const auto fit = stats::linear_fit(xs, ys);
    const double target = static_cast<double>(d) / beta;
    const bool pass = std::abs(fit.slope - target) <= 0.3 * target;
    json report;
    report["d"] = d;
    report["beta"] = beta;
    report["L"] = L;
    report["points"] = std::move(points);
    report["slope"] = fit.slope;
    report["target"] = target;
    report["pass"] = pass;
    out.write("oracle.json", report.dump(2) + "\n");
    wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return pass ? 0 : 1;
}

} // namespace

int cli_main(const std::vector<std::string>& args) {
    CLI::App app{"accuracy-confidence bounds toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config) cmd->add_option("-c,--config", config_path, "JSON config file")->required();
        cmd->add_option("-o,--out", out_dir, "output directory");
        cmd->add_option("--set", overrides, "dotted-path config overrides, key=value");
    };

    auto* family = app.add_subcommand("family", "build or verify a lower-bound family");
    auto* family_build = family->add_subcommand("build", "construct the family and write family.json");
    auto* family_verify = family->add_subcommand("verify", "build, then run every construction check");
    add_common(family_build, true);
    add_common(family_verify, true);
    family->require_subcommand(1);

    auto* ac = app.add_subcommand("ac", "accuracy-confidence experiments");
    auto* ac_run = ac->add_subcommand("run", "Monte Carlo AC estimation; writes ac_estimates.csv");
    auto* ac_fit = ac->add_subcommand("fit", "exponent fits from ac_estimates.csv; writes rates.csv/fit.json");
    add_common(ac_run, true);
    add_common(ac_fit, true);
    ac->require_subcommand(1);

    auto* oracle = app.add_subcommand("oracle", "independent verification oracles");
    auto* fano = oracle->add_subcommand("fano", "brute-force Fano lemma check on random instances");
    long fano_instances = 50;
    int fano_support = 6;
    int fano_hypotheses = 2;
    std::uint64_t fano_seed = 1;
    fano->add_option("--instances", fano_instances, "number of random instances");
    fano->add_option("--support", fano_support, "support size (<= 10)");
    fano->add_option("--hypotheses", fano_hypotheses, "M (2 or 3)");
    fano->add_option("--seed", fano_seed, "instance stream seed");
    add_common(fano, false);

    auto* fixedpoint = oracle->add_subcommand("fixedpoint", "bisection vs grid-scan fixed point check");
    double fp_kappa = 2.0, fp_rho = 0.5;
    std::vector<double> fp_n{100, 10000, 1000000};
    std::vector<double> fp_t{0.5, 2.0, 8.0};
    long fp_points = 1000000;
    fixedpoint->add_option("--kappa", fp_kappa, "margin parameter kappa");
    fixedpoint->add_option("--rho", fp_rho, "entropy exponent rho");
    fixedpoint->add_option("--n", fp_n, "sample sizes");
    fixedpoint->add_option("--t", fp_t, "confidence parameters");
    fixedpoint->add_option("--points", fp_points, "grid points");
    add_common(fixedpoint, false);

    auto* net_entropy = oracle->add_subcommand("net-entropy", "measured entropy exponent of holder nets");
    int ne_d = 1;
    double ne_beta = 1.0, ne_L = 1.0;
    std::vector<double> ne_eps{0.4, 0.2, 0.1, 0.05};
    net_entropy->add_option("--d", ne_d, "dimension");
    net_entropy->add_option("--beta", ne_beta, "smoothness");
    net_entropy->add_option("--L", ne_L, "Hoelder constant");
    net_entropy->add_option("--eps", ne_eps, "epsilon list");
    add_common(net_entropy, false);
    oracle->require_subcommand(1);

    std::vector<const char*> argv;
    argv.push_back("acbound");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        OutputDir out(out_dir);
        double wall = 0.0;
        int code = 0;
        json config_echo = json::object();
        if (family_build->parsed() || family_verify->parsed()) {
            config_echo = load_config_json(config_path, overrides);
            code = cmd_family(family_build->parsed() ? "build" : "verify", config_echo, out, wall);
        } else if (ac_run->parsed()) {
            config_echo = load_config_json(config_path, overrides);
            code = cmd_ac_run(config_echo, out, wall);
        } else if (ac_fit->parsed()) {
            config_echo = load_config_json(config_path, overrides);
            code = cmd_ac_fit(config_echo, out_dir, out, wall);
        } else if (fano->parsed()) {
            config_echo = {{"instances", fano_instances}, {"support", fano_support},
                           {"hypotheses", fano_hypotheses}, {"seed", fano_seed}};
            code = cmd_oracle_fano(fano_instances, fano_support, fano_hypotheses, fano_seed, out, wall);
        } else if (fixedpoint->parsed()) {
            config_echo = {{"kappa", fp_kappa}, {"rho", fp_rho}, {"n", fp_n}, {"t", fp_t},
                           {"points", fp_points}};
            code = cmd_oracle_fixedpoint(fp_kappa, fp_rho, fp_n, fp_t, fp_points, out, wall);
        } else if (net_entropy->parsed()) {
            config_echo = {{"d", ne_d}, {"beta", ne_beta}, {"L", ne_L}, {"eps", ne_eps}};
            code = cmd_oracle_net_entropy(ne_d, ne_beta, ne_L, ne_eps, out, wall);
        }
        out.finalize_manifest(config_echo, wall);
        return code;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace acbound
