// Batch front-end: validate groups, build partitions, estimate the limit-set
// dimension, run Fourier-decay and uncertainty-principle scans, and emit
// CSV/JSON artifacts for plotting.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "schottky/fup.hpp"
#include "schottky/fup_defaults.hpp"
#include "schottky/group_io.hpp"
#include "schottky/measure.hpp"
#include "schottky/oscillatory.hpp"
#include "schottky/scan.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace schottky;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Common {
    std::string group_path;
    std::string out = "out";
    std::uint64_t seed = 0;
    int threads = 1;
    std::uint64_t budget = kDefaultWordBudget;
    bool recompute = false;
};

void add_common(CLI::App* cmd, Common& c, bool needs_group = true) {
    auto* g = cmd->add_option("--group", c.group_path, "group config JSON");
    if (needs_group) g->required();
    cmd->add_option("--out", c.out, "output directory (env SCHOTTKY_LAB_OUT overrides)");
    cmd->add_option("--seed", c.seed, "random seed recorded in the manifest");
    cmd->add_option("--threads", c.threads, "worker count (results are independent of it)");
    cmd->add_option("--budget", c.budget, "word-count budget for tree searches");
    cmd->add_flag("--recompute", c.recompute, "recompute the dimension instead of reading the delta report");
}

fs::path out_dir(const Common& c) {
    const char* env = std::getenv("SCHOTTKY_LAB_OUT");
    fs::path dir = env && *env ? fs::path(env) : fs::path(c.out);
    fs::create_directories(dir);
    return dir;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + p.string());
    out << text;
}

void write_manifest(const fs::path& dir, const std::string& command, const Common& c,
                    const json& params, double wall_seconds) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["group"] = c.group_path;
    m["seed"] = c.seed;
    m["threads"] = c.threads;
    m["budget"] = c.budget;
    m["params"] = params;
    m["wall_time_s"] = wall_seconds;
    m["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
    write_text(dir / (command + "_manifest.json"), m.dump(2) + "\n");
}

std::string scan_csv(const ScanResult& s) {
    std::ostringstream os;
    os << "parameter,value,predicted\n";
    for (const auto& p : s.points)
        os << fmt(p.parameter) << ',' << fmt(p.value) << ','
           << fmt(s.amplitude * std::pow(p.parameter, s.exponent_hat)) << '\n';
    return os.str();
}

json scan_fit_json(const ScanResult& s) {
    json j;
    j["exponent_hat"] = s.exponent_hat;
    j["amplitude"] = s.amplitude;
    j["r2"] = s.r2;
    j["window"] = json::array({s.window_lo, s.window_hi});
    j["window_points"] = s.window_points;
    return j;
}

double load_delta_hat(const SchottkyData& data, const Common& c, const fs::path& dir,
                      double tau, double tol) {
    const fs::path path = dir / "delta_report.json";
    if (!c.recompute) {
        std::ifstream in(path);
        if (!in)
            throw PreconditionError("no delta report in " + dir.string() +
                                    "; run the delta command first or pass --recompute");
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.contains("delta_hat"))
            throw PreconditionError("unreadable delta report " + path.string());
        return j["delta_hat"].get<double>();
    }
    return estimate_delta(data, tau, tol, false, c.budget).delta_hat;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- commands -------------------------------------------------------------

int cmd_validate(const Common& c, bool bands) {
    const SchottkyData data = load_group(c.group_path);
    const ValidationReport report = validate(data);
    for (const auto& chk : report.checks)
        std::cout << (chk.passed ? "pass  " : "FAIL  ") << chk.name << "  defect=" << chk.defect
                  << (chk.detail.empty() ? "" : "  (" + chk.detail + ")") << "\n";
    if (bands && report.passed()) {
        const LemmaBands b = lemma_bands(data, 5, 2000, 10, c.seed);
        std::cout << "contraction_max    " << b.contraction_max << "\n"
                  << "parent_child_min   " << b.parent_child_min << "\n"
                  << "concat_band        [" << b.concat_min << ", " << b.concat_max << "]\n"
                  << "reversal_band      [" << b.reversal_min << ", " << b.reversal_max << "]\n"
                  << "separation_min     " << b.separation_min << "\n"
                  << "derivative_bracket [" << b.derivative_lo << ", " << b.derivative_hi << "]\n";
    }
    std::cout << (report.passed() ? "group valid" : "group INVALID") << "\n";
    return report.passed() ? 0 : 1;
}

int cmd_partition(const Common& c, double tau) {
    const auto t0 = Clock::now();
    const SchottkyData data = load_group(c.group_path);
    const Partition Z = build_partition(data, tau, c.budget);
    std::ostringstream os;
    os << "word,lo,hi,size\n";
    for (const auto& m : Z.members)
        os << m.word.str() << ',' << fmt(m.interval.lo) << ',' << fmt(m.interval.hi) << ','
           << fmt(m.interval.size()) << '\n';
    const fs::path dir = out_dir(c);
    write_text(dir / "partition.csv", os.str());
    write_manifest(dir, "partition", c, json{{"tau", tau}}, seconds_since(t0));
    std::cout << "partition: " << Z.size() << " words -> " << (dir / "partition.csv") << "\n";
    return 0;
}

int cmd_delta(const Common& c, double tau, double tol) {
    const auto t0 = Clock::now();
    const SchottkyData data = load_group(c.group_path);
    const DeltaReport rep = estimate_delta(data, tau, tol, true, c.budget);
    json j;
    j["tau_grid"] = rep.tau_grid;
    j["delta_by_tau"] = rep.delta_by_tau;
    j["lambda_residuals"] = rep.lambda_residuals;
    j["lambda_samples"] = json::array();
    for (const auto& [s, lambda] : rep.lambda_samples)
        j["lambda_samples"].push_back(json::array({s, lambda}));
    j["delta_hat"] = rep.delta_hat;
    j["oracle_delta"] = rep.oracle_delta;
    j["tol"] = rep.tol;
    const fs::path dir = out_dir(c);
    write_text(dir / "delta_report.json", j.dump(2) + "\n");
    write_manifest(dir, "delta", c, json{{"tau", tau}, {"tol", tol}}, seconds_since(t0));
    std::cout << "delta_hat=" << rep.delta_hat << "  oracle=" << rep.oracle_delta
              << "  |diff|=" << std::abs(rep.delta_hat - rep.oracle_delta) << "\n";
    return 0;
}

int cmd_measure(const Common& c, double tau, double tol) {
    const auto t0 = Clock::now();
    const SchottkyData data = load_group(c.group_path);
    const fs::path dir = out_dir(c);
    const double delta = load_delta_hat(data, c, dir, tau, tol);
    const DiscreteMeasure mu = build_measure(data, tau, delta, c.budget);
    std::ostringstream os;
    os << "word,center,mass\n";
    for (size_t i = 0; i < mu.atoms.size(); ++i)
        os << mu.partition[i].word.str() << ',' << fmt(mu.atoms[i].center) << ','
           << fmt(mu.atoms[i].mass) << '\n';
    write_text(dir / "measure.csv", os.str());
    write_manifest(dir, "measure", c, json{{"tau", tau}, {"delta", delta}}, seconds_since(t0));
    std::cout << "measure: " << mu.atoms.size() << " atoms, total mass " << mu.total_mass()
              << "\n";
    return 0;
}

int cmd_fourier(const Common& c, double xi_min, double xi_max, int xi_points, int block) {
    const auto t0 = Clock::now();
    const SchottkyData data = load_group(c.group_path);
    const fs::path dir = out_dir(c);
    const double delta = load_delta_hat(data, c, dir, 1e-4, 1e-5);
    const PhasePair pp = default_fourier_phase(data);
    const FourierScan scan =
        fourier_scan(data, delta, pp, log_grid(xi_min, xi_max, xi_points), c.threads, c.budget,
                     block);
    write_text(dir / "fourier_scan.csv", scan_csv(scan.scan));
    json j = scan_fit_json(scan.scan);
    j["epsilon1_hat"] = scan.epsilon1_hat;
    j["block"] = block;
    j["delta_hat"] = delta;
    j["taus"] = scan.taus;
    write_text(dir / "fourier_fit.json", j.dump(2) + "\n");
    write_manifest(dir, "fourier", c,
                   json{{"xi_min", xi_min}, {"xi_max", xi_max}, {"xi_points", xi_points},
                        {"block", block}, {"delta", delta}},
                   seconds_since(t0));
    std::cout << "fourier: epsilon1_hat=" << scan.epsilon1_hat << "  r2=" << scan.scan.r2
              << "  window=[" << scan.scan.window_lo << ", " << scan.scan.window_hi << "]\n";
    return 0;
}

int cmd_expsum(const Common& c, double tau, double xi, int k, double epsilon2, int eta_points,
               int chains, int samples, double jwindow) {
    const auto t0 = Clock::now();
    const SchottkyData data = load_group(c.group_path);
    const fs::path dir = out_dir(c);
    const double delta = load_delta_hat(data, c, dir, 1e-4, 1e-5);
    // a frequency pins the resolution through the proof-regime coupling
    if (xi > 0) tau = tau_for_frequency(xi, k);
    const Partition Z = build_partition(data, tau, c.budget);
    const double n_scale = std::pow(tau, -delta);

    Rng rng(c.seed);
    const std::vector<double> etas =
        log_grid(std::pow(tau, -0.25), jwindow * std::pow(tau, -0.5), eta_points);
    std::vector<double> mean_abs(etas.size(), 0.0);
    int used = 0;
    double box_slope = 0;
    for (int t = 0; t < chains; ++t) {
        const std::vector<Word> chain = sample_chain(data, Z, k, rng);
        std::vector<LinkValues> zetas;
        bool ok = true;
        for (int j = 1; j <= k && ok; ++j) {
            try {
                zetas.push_back(link_derivatives(Z, chain, j));
            } catch (const NoAdmissibleWordsError&) {
                ok = false;
            }
        }
        if (!ok) continue;
        if (used == 0) {
            std::vector<ScanPoint> pts;
            for (const double s : log_grid(tau, std::pow(tau, 1.0 / 8), 15))
                pts.push_back({s, box_dim_statistic(zetas[0], s, n_scale)});
            box_slope = fit_power_law(pts, 0.0, 0.5).exponent_hat;
        }
        for (size_t i = 0; i < etas.size(); ++i)
            mean_abs[i] += std::abs(exponential_sum(zetas, etas[i], n_scale));
        ++used;
    }
    if (used == 0) throw NoAdmissibleWordsError("expsum: no usable chains sampled");
    for (double& v : mean_abs) v /= used;

    const double fraction = regular_chain_fraction(Z, delta, k, epsilon2, samples, c.seed);
    const Word first_word = Z[0].word;
    std::vector<ScanPoint> tpts;
    for (const double s : log_grid(tau, 1.0, 12))
        tpts.push_back({s, triple_count_statistic(data, Z, delta, first_word, s)});
    const double triple_slope = fit_power_law(tpts, 0.0, 0.5).exponent_hat;

    std::ostringstream os;
    os << "eta,mean_abs_sum\n";
    for (size_t i = 0; i < etas.size(); ++i)
        os << fmt(etas[i]) << ',' << fmt(mean_abs[i]) << '\n';
    write_text(dir / "expsum.csv", os.str());
    json j;
    j["tau"] = tau;
    j["xi"] = xi > 0 ? json(xi) : json(nullptr);
    j["k"] = k;
    j["epsilon2"] = epsilon2;
    j["delta_hat"] = delta;
    j["n_partition"] = Z.size();
    j["chains_used"] = used;
    j["regular_fraction"] = fraction;
    j["box_dim_slope"] = box_slope;
    j["triple_count_slope"] = triple_slope;
    j["epsilon1_formula"] = fourier_exponent_formula(epsilon2, k, delta);
    write_text(dir / "expsum.json", j.dump(2) + "\n");
    write_manifest(dir, "expsum", c,
                   json{{"tau", tau}, {"k", k}, {"epsilon2", epsilon2},
                        {"eta_points", eta_points}, {"chains", chains}, {"samples", samples},
                        {"jwindow", jwindow}},
                   seconds_since(t0));
    std::cout << "expsum: regular_fraction=" << fraction << "  box_dim_slope=" << box_slope
              << "  triple_count_slope=" << triple_slope << "\n";
    return 0;
}

int cmd_fup(const Common& c, double h_min, double h_max, int h_points) {
    const auto t0 = Clock::now();
    const SchottkyData data = load_group(c.group_path);
    const fs::path dir = out_dir(c);
    const double delta = load_delta_hat(data, c, dir, 1e-4, 1e-5);
    const KernelSpec ks = default_hyperbolic_kernel(data);
    const FupScan scan = fup_scan(data, delta, ks, log_grid(h_min, h_max, h_points), c.threads,
                                  c.budget);
    write_text(dir / "fup_scan.csv", scan_csv(scan.scan));
    json j;
    j["h_grid"] = json::array();
    j["norms"] = json::array();
    for (const auto& p : scan.scan.points) {
        j["h_grid"].push_back(p.parameter);
        j["norms"].push_back(p.value);
    }
    j["schur_bounds"] = scan.schur_bounds;
    j["beta_hat"] = scan.beta_hat;
    j["r2"] = scan.scan.r2;
    j["delta_hat"] = delta;
    j["taus"] = scan.taus;
    j["sizes"] = scan.sizes;
    j["c_bound"] = ks.c_bound;
    write_text(dir / "fup_report.json", j.dump(2) + "\n");
    write_manifest(dir, "fup", c,
                   json{{"h_min", h_min}, {"h_max", h_max}, {"h_points", h_points}},
                   seconds_since(t0));
    std::cout << "fup: beta_hat=" << scan.beta_hat << "  r2=" << scan.scan.r2 << "\n";
    return 0;
}

int cmd_lebesgue_fup(const Common& c, double h_min, double h_max, int h_points, double rho,
                     std::uint64_t grid_budget) {
    const auto t0 = Clock::now();
    const SchottkyData data = load_group(c.group_path);
    const fs::path dir = out_dir(c);
    const double delta = load_delta_hat(data, c, dir, 1e-4, 1e-5);
    const KernelSpec ks = default_hyperbolic_kernel(data);
    const FupScan scan = lebesgue_fup_scan(data, ks, log_grid(h_min, h_max, h_points), rho,
                                           c.threads, grid_budget, c.budget);
    write_text(dir / "lebesgue_fup_scan.csv", scan_csv(scan.scan));
    json j;
    j["h_grid"] = json::array();
    j["norms"] = json::array();
    for (const auto& p : scan.scan.points) {
        j["h_grid"].push_back(p.parameter);
        j["norms"].push_back(p.value);
    }
    j["beta_hat"] = scan.beta_hat;
    j["r2"] = scan.scan.r2;
    j["rho"] = rho;
    j["delta_hat"] = delta;
    write_text(dir / "lebesgue_fup_report.json", j.dump(2) + "\n");
    write_manifest(dir, "lebesgue-fup", c,
                   json{{"h_min", h_min}, {"h_max", h_max}, {"h_points", h_points},
                        {"rho", rho}, {"grid_budget", grid_budget}},
                   seconds_since(t0));
    std::cout << "lebesgue-fup: beta_hat=" << scan.beta_hat << "  rho=" << rho << "\n";
    return 0;
}

// ---- report: aggregate and re-validate emitted artifacts -------------------

struct FileCheck {
    std::string file;
    bool ok = true;
    std::string detail;
};

json load_json_file(const fs::path& p) {
    std::ifstream in(p);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("unparseable JSON: " + p.string());
    return j;
}

FileCheck check_partition_csv(const fs::path& dir, const SchottkyData* data) {
    FileCheck fc{"partition.csv"};
    std::ifstream in(dir / "partition.csv");
    std::string line;
    std::getline(in, line);
    if (line != "word,lo,hi,size") {
        fc.ok = false;
        fc.detail = "bad header";
        return fc;
    }
    double tau = 0;
    try {
        tau = load_json_file(dir / "partition_manifest.json")["params"]["tau"].get<double>();
    } catch (const std::exception&) {
        fc.ok = false;
        fc.detail = "missing manifest tau";
        return fc;
    }
    std::vector<Word> words;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string w, lo, hi, size;
        std::getline(ls, w, ',');
        std::getline(ls, lo, ',');
        std::getline(ls, hi, ',');
        std::getline(ls, size, ',');
        const Word word = Word::parse(w);
        words.push_back(word);
        if (std::abs(std::stod(hi) - std::stod(lo) - std::stod(size)) > 1e-12) {
            fc.ok = false;
            fc.detail = "size mismatch at " + w;
            return fc;
        }
        if (std::stod(size) > tau) {
            fc.ok = false;
            fc.detail = "member larger than tau: " + w;
            return fc;
        }
    }
    if (data) {
        const Partition Z = build_partition(*data, tau);
        if (Z.size() != words.size()) {
            fc.ok = false;
            fc.detail = "member count differs from a rebuild";
            return fc;
        }
        for (size_t i = 0; i < words.size(); ++i)
            if (!(words[i] == Z[i].word)) {
                fc.ok = false;
                fc.detail = "word set differs from a rebuild";
                return fc;
            }
        for (const auto& m : Z.members)
            if (m.word.length() > 1 &&
                interval_of(*data, m.word.parent()).size() <= tau) {
                fc.ok = false;
                fc.detail = "non-maximal member " + m.word.str();
                return fc;
            }
    }
    fc.detail = std::to_string(words.size()) + " rows";
    return fc;
}

FileCheck check_measure_csv(const fs::path& dir) {
    FileCheck fc{"measure.csv"};
    std::ifstream in(dir / "measure.csv");
    std::string line;
    std::getline(in, line);
    if (line != "word,center,mass") {
        fc.ok = false;
        fc.detail = "bad header";
        return fc;
    }
    double total = 0;
    size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string w, center, mass;
        std::getline(ls, w, ',');
        std::getline(ls, center, ',');
        std::getline(ls, mass, ',');
        const double m = std::stod(mass);
        if (m < 0) {
            fc.ok = false;
            fc.detail = "negative mass";
            return fc;
        }
        total += m;
        ++rows;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        fc.ok = false;
        fc.detail = "total mass " + std::to_string(total);
        return fc;
    }
    fc.detail = std::to_string(rows) + " atoms, unit mass";
    return fc;
}

FileCheck check_scan_json(const fs::path& dir, const std::string& name,
                          const std::vector<std::string>& required) {
    FileCheck fc{name};
    try {
        const json j = load_json_file(dir / name);
        for (const auto& key : required)
            if (!j.contains(key)) {
                fc.ok = false;
                fc.detail = "missing field " + key;
                return fc;
            }
        if (j.contains("r2")) {
            const double r2 = j["r2"].get<double>();
            if (!(r2 >= 0 && r2 <= 1.0 + 1e-12)) {
                fc.ok = false;
                fc.detail = "r2 out of range";
                return fc;
            }
        }
        if (j.contains("h_grid") && j.contains("norms") &&
            j["h_grid"].size() != j["norms"].size()) {
            fc.ok = false;
            fc.detail = "grid/norms length mismatch";
            return fc;
        }
    } catch (const std::exception& e) {
        fc.ok = false;
        fc.detail = e.what();
    }
    return fc;
}

int cmd_report(const Common& c) {
    const fs::path dir = out_dir(c);
    SchottkyData data;
    bool have_group = false;
    if (!c.group_path.empty()) {
        data = load_group(c.group_path);
        have_group = true;
    }
    std::vector<FileCheck> checks;
    auto exists = [&](const char* f) { return fs::exists(dir / f); };
    if (exists("partition.csv"))
        checks.push_back(check_partition_csv(dir, have_group ? &data : nullptr));
    if (exists("measure.csv")) checks.push_back(check_measure_csv(dir));
    if (exists("delta_report.json"))
        checks.push_back(check_scan_json(dir, "delta_report.json",
                                         {"tau_grid", "delta_by_tau", "delta_hat",
                                          "oracle_delta"}));
    if (exists("fourier_fit.json"))
        checks.push_back(
            check_scan_json(dir, "fourier_fit.json", {"exponent_hat", "epsilon1_hat", "r2"}));
    if (exists("fup_report.json"))
        checks.push_back(check_scan_json(dir, "fup_report.json",
                                         {"h_grid", "norms", "schur_bounds", "beta_hat",
                                          "delta_hat"}));
    if (exists("lebesgue_fup_report.json"))
        checks.push_back(check_scan_json(dir, "lebesgue_fup_report.json",
                                         {"h_grid", "norms", "beta_hat", "rho", "delta_hat"}));
    if (exists("expsum.json"))
        checks.push_back(check_scan_json(dir, "expsum.json",
                                         {"regular_fraction", "box_dim_slope",
                                          "triple_count_slope"}));
    if (checks.empty()) {
        std::cerr << "report: no artifacts found in " << dir << "\n";
        return 1;
    }
    json out;
    out["checked"] = json::array();
    bool all_ok = true;
    for (const auto& fc : checks) {
        std::cout << (fc.ok ? "ok    " : "FAIL  ") << fc.file
                  << (fc.detail.empty() ? "" : "  (" + fc.detail + ")") << "\n";
        out["checked"].push_back(json{{"file", fc.file}, {"ok", fc.ok}, {"detail", fc.detail}});
        all_ok = all_ok && fc.ok;
    }
    out["all_ok"] = all_ok;
    write_text(dir / "report.json", out.dump(2) + "\n");
    return all_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for Schottky limit sets"};
    app.require_subcommand(1);

    Common c;
    bool bands = false;
    double tau = 0.05, tol = 1e-5;
    double xi_min = 10, xi_max = 1e4;
    int xi_points = 33, block = 24;
    double h_min = 1e-4, h_max = 1e-1;
    int h_points = 13;
    double rho = 0.9;
    std::uint64_t grid_budget = kDefaultGridBudget;
    double epsilon2 = 0.4, jwindow = 10, xi = 0;
    int k = 2, eta_points = 25, chains = 8, samples = 512;

    auto* v = app.add_subcommand("validate", "check the group axioms");
    add_common(v, c);
    v->add_flag("--bands", bands, "also print empirical interval-lemma bands");

    auto* p = app.add_subcommand("partition", "enumerate a resolution partition");
    add_common(p, c);
    p->add_option("--tau", tau, "resolution");

    auto* d = app.add_subcommand("delta", "estimate the limit-set dimension");
    add_common(d, c);
    d->add_option("--tau", tau, "finest resolution of the refinement ladder")->default_val(1e-4);
    d->add_option("--tol", tol, "Cauchy tolerance across refinements");

    auto* me = app.add_subcommand("measure", "build the discrete boundary measure");
    add_common(me, c);
    me->add_option("--tau", tau, "resolution")->default_val(1e-3);
    me->add_option("--tol", tol, "dimension tolerance when recomputing");

    auto* f = app.add_subcommand("fourier", "modulus-decay scan of the measure transform");
    add_common(f, c);
    f->add_option("--xi-min", xi_min, "lowest frequency");
    f->add_option("--xi-max", xi_max, "highest frequency");
    f->add_option("--xi-points", xi_points, "grid size");
    f->add_option("--block", block, "rms block size per grid point");

    auto* e = app.add_subcommand("expsum", "exponential-sum and chain statistics");
    add_common(e, c);
    e->add_option("--tau", tau, "partition resolution")->default_val(1e-6);
    e->add_option("--xi", xi, "frequency; overrides --tau via the proof-regime coupling");
    e->add_option("--k", k, "chain length");
    e->add_option("--epsilon2", epsilon2, "regularity window knob in (0,1)");
    e->add_option("--eta-points", eta_points, "frequency grid size");
    e->add_option("--chains", chains, "sampled chains");
    e->add_option("--samples", samples, "chains sampled for the regularity fraction");
    e->add_option("--jwindow", jwindow, "upper window constant for eta");

    auto* u = app.add_subcommand("fup", "uncertainty operator norms on the measure");
    add_common(u, c);
    u->add_option("--h-min", h_min, "smallest h");
    u->add_option("--h-max", h_max, "largest h");
    u->add_option("--h-points", h_points, "grid size");

    auto* l = app.add_subcommand("lebesgue-fup", "uncertainty operator on thickened supports");
    add_common(l, c);
    l->add_option("--h-min", h_min, "smallest h")->default_val(3e-3);
    l->add_option("--h-max", h_max, "largest h");
    l->add_option("--h-points", h_points, "grid size")->default_val(10);
    l->add_option("--rho", rho, "thickening exponent in (0,1)");
    l->add_option("--grid-budget", grid_budget, "max grid points");

    auto* r = app.add_subcommand("report", "validate and aggregate emitted artifacts");
    add_common(r, c, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (v->parsed()) return cmd_validate(c, bands);
        if (p->parsed()) return cmd_partition(c, tau);
        if (d->parsed()) return cmd_delta(c, tau, tol);
        if (me->parsed()) return cmd_measure(c, tau, tol);
        if (f->parsed()) return cmd_fourier(c, xi_min, xi_max, xi_points, block);
        if (e->parsed()) return cmd_expsum(c, tau, xi, k, epsilon2, eta_points, chains,
                                           samples, jwindow);
        if (u->parsed()) return cmd_fup(c, h_min, h_max, h_points);
        if (l->parsed()) return cmd_lebesgue_fup(c, h_min, h_max, h_points, rho, grid_budget);
        if (r->parsed()) return cmd_report(c);
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RefineError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
