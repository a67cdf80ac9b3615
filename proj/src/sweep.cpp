#include "dce/sweep.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <json.hpp>
#include <set>
#include <sstream>
#include <thread>

#include "dce/errors.hpp"

namespace dce {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("key '" + key + "': not a number: '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    int out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        throw ConfigError("key '" + key + "': not an integer: '" + v + "'");
    return out;
}

std::string num(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
    const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    for (auto& t : pool) t.join();
}

const char* yes(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_mode(const ModeIndex& m) { return fmt::format("{}-{}-{}", m.nx, m.ny, m.nz); }

ModeIndex parse_mode(const std::string& s) {
    auto parts = split(s, s.find(',') != std::string::npos ? ',' : '-');
    if (parts.size() != 3) throw ConfigError("mode must be three integers, got '" + s + "'");
    return ModeIndex(to_int("mode", parts[0]), to_int("mode", parts[1]), to_int("mode", parts[2]));
}

SweepConfig SweepConfig::parse(const std::string& text) {
    SweepConfig c;
    std::set<std::string> seen;
    std::stringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(fmt::format("line {}: expected key = value", lineno));
        const std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");
        if (v.empty()) throw ConfigError("key '" + key + "' has no value");

        if (key == "condition") {
            auto r = resonance_from_string(v);
            if (!r) throw ConfigError("unknown condition '" + v + "'");
            c.condition = *r;
        } else if (key == "mode_k") c.mode_k = parse_mode(v);
        else if (key == "mode_j") c.mode_j = parse_mode(v);
        else if (key == "omega_c_min") c.omega_c_min = to_double(key, v);
        else if (key == "omega_c_max") c.omega_c_max = to_double(key, v);
        else if (key == "omega_c_count") c.omega_c_count = to_int(key, v);
        else if (key == "omega_c_scale") {
            if (v == "linear") c.omega_c_scale = GridScale::Linear;
            else if (v == "log") c.omega_c_scale = GridScale::Log;
            else throw ConfigError("omega_c_scale must be linear or log");
        } else if (key == "omega_g") {
            c.omega_g.clear();
            for (auto& s : split(v, ',')) c.omega_g.push_back(to_double(key, s));
        } else if (key == "kappa") c.kappa = to_double(key, v);
        else if (key == "h_plus") c.h_plus = to_double(key, v);
        else if (key == "epsilon") c.epsilon = to_double(key, v);
        else if (key == "T") c.T = to_double(key, v);
        else if (key == "chi_T") c.chi_T = to_double(key, v);
        else if (key == "detune") c.detune = to_double(key, v);
        else if (key == "tol_rel") c.tol_rel = to_double(key, v);
        else if (key == "tol_abs") c.tol_abs = to_double(key, v);
        else if (key == "max_step") c.max_step = to_double(key, v);
        else if (key == "n_max") c.n_max = to_int(key, v);
        else if (key == "samples") c.samples = to_int(key, v);
        else if (key == "output") c.output = v;
        else if (key == "validity_threshold") c.validity_threshold = to_double(key, v);
        else throw ConfigError("unknown key '" + key + "'");
    }
    c.validate();
    return c;
}

SweepConfig SweepConfig::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string SweepConfig::serialize() const {
    std::string s;
    auto put = [&](const char* k, const std::string& v) { s += fmt::format("{} = {}\n", k, v); };
    put("condition", to_string(condition));
    put("mode_k", fmt::format("{},{},{}", mode_k.nx, mode_k.ny, mode_k.nz));
    if (mode_j) put("mode_j", fmt::format("{},{},{}", mode_j->nx, mode_j->ny, mode_j->nz));
    put("omega_c_min", num(omega_c_min));
    put("omega_c_max", num(omega_c_max));
    put("omega_c_count", std::to_string(omega_c_count));
    put("omega_c_scale", omega_c_scale == GridScale::Log ? "log" : "linear");
    std::vector<std::string> g;
    for (double v : omega_g) g.push_back(num(v));
    put("omega_g", fmt::format("{}", fmt::join(g, ", ")));
    if (kappa) put("kappa", num(*kappa));
    if (h_plus) put("h_plus", num(*h_plus));
    put("epsilon", num(epsilon));
    if (T) put("T", num(*T));
    if (chi_T) put("chi_T", num(*chi_T));
    put("detune", num(detune));
    put("tol_rel", num(tol_rel));
    put("tol_abs", num(tol_abs));
    put("max_step", num(max_step));
    put("n_max", std::to_string(n_max));
    put("samples", std::to_string(samples));
    put("output", output);
    put("validity_threshold", num(validity_threshold));
    return s;
}

void SweepConfig::validate() const {
    ResonanceCondition(condition, mode_k, mode_j);
    if (omega_c_count < 2) throw ConfigError("omega_c_count must be >= 2");
    if (omega_c_min < 0 || omega_c_max < omega_c_min) throw ConfigError("need 0 <= omega_c_min <= omega_c_max");
    if (omega_c_scale == GridScale::Log && omega_c_min <= 0) throw ConfigError("log grid needs omega_c_min > 0");
    if (omega_g.empty()) throw ConfigError("omega_g list is empty");
    for (double g : omega_g)
        if (g < 0) throw ConfigError("omega_g values must be >= 0");
    if (kappa && h_plus) throw ConfigError("give kappa or h_plus, not both");
    if (kappa && *kappa < 0) throw ConfigError("kappa must be >= 0");
    if (h_plus && (*h_plus < 0 || *h_plus >= CavityConfig::kMaxStrain)) throw ConfigError("h_plus must be in [0, 0.1)");
    if (epsilon < 0 || epsilon >= 1) throw ConfigError("epsilon must be in [0, 1)");
    if (T && chi_T) throw ConfigError("give T or chi_T, not both");
    if (T && *T < 0) throw ConfigError("T must be >= 0");
    if (chi_T && *chi_T < 0) throw ConfigError("chi_T must be >= 0");
    if (detune <= -1) throw ConfigError("detune must be > -1");
    if (n_max < 1) throw ConfigError("n_max must be >= 1");
    if (samples < 4) throw ConfigError("samples must be >= 4");
    if (!(validity_threshold > 0)) throw ConfigError("validity_threshold must be > 0");
    IntegrationSpec probe;
    probe.rel_tol = tol_rel;
    probe.abs_tol = tol_abs;
    probe.max_step = max_step;
    probe.validate();
}

std::vector<double> SweepConfig::omega_c_grid() const {
    std::vector<double> v(omega_c_count);
    for (int i = 0; i < omega_c_count; ++i) {
        const double f = static_cast<double>(i) / (omega_c_count - 1);
        v[i] = omega_c_scale == GridScale::Log ? omega_c_min * std::pow(omega_c_max / omega_c_min, f)
                                               : omega_c_min + f * (omega_c_max - omega_c_min);
    }
    return v;
}

double SweepConfig::strain(double Wg) const {
    if (kappa) return source_amplitude(*kappa, Wg);
    return h_plus.value_or(0.0);
}

namespace {

struct Point {
    double Wc, Wg;
};

std::vector<Point> points(const SweepConfig& c) {
    std::vector<Point> p;
    const auto grid = c.omega_c_grid();
    for (double g : c.omega_g)
        for (double w : grid) p.push_back({w, g});
    return p;
}

// Fills the analytic columns; returns the tuned cavity when the row is usable.
std::optional<CavityConfig> analytic_row(const SweepConfig& c, Point pt, RunRecord& r) {
    r.condition = c.condition;
    r.mode_k = c.mode_k;
    r.mode_j = c.mode_j;
    r.Omega_c = pt.Wc;
    r.Omega_g = pt.Wg;
    r.epsilon = c.epsilon;
    r.h_plus = c.strain(pt.Wg);
    try {
        r.L = tune_cavity_length(c.condition, pt.Wc, pt.Wg, c.mode_k, c.mode_j);
    } catch (const NoSolution&) {
        r.status = "no_solution";
        return std::nullopt;
    }
    std::optional<CavityConfig> cav;
    try {
        cav = cubic_cavity(r.L, c.epsilon, pt.Wc, r.h_plus, pt.Wg);
    } catch (const ConfigError&) {
        r.status = "invalid_parameters";
        return std::nullopt;
    }
    r.omega_k0 = mode_frequencies(c.mode_k, *cav).omega0;
    if (c.mode_j) r.omega_j0 = mode_frequencies(*c.mode_j, *cav).omega0;
    r.flags = validity_flags(*cav, r.L, c.validity_threshold);
    ResonanceCondition cond(c.condition, c.mode_k, c.mode_j);
    try {
        r.chi = chi_rate(cond, *cav);
    } catch (const NotOnResonance&) {
        r.status = "overlapping_resonance";
        return std::nullopt;
    }
    r.degenerate = is_degenerate(cond, *cav);
    if (c.T) r.T = *c.T;
    else if (c.chi_T) r.T = r.chi > 0 ? *c.chi_T / r.chi : 0.0;
    r.N_analytic = particle_number_analytic(r.chi, r.T);
    return cav;
}

}  // namespace

std::vector<RunRecord> cmd_rates(const SweepConfig& c, int threads) {
    c.validate();
    const auto pts = points(c);
    std::vector<RunRecord> rows(pts.size());
    parallel_for(pts.size(), threads, [&](std::size_t i) { analytic_row(c, pts[i], rows[i]); });
    return rows;
}

std::vector<RunRecord> cmd_validate(const SweepConfig& c, int threads) {
    c.validate();
    const auto pts = points(c);
    std::vector<RunRecord> rows(pts.size());
    parallel_for(pts.size(), threads, [&](std::size_t i) {
        RunRecord& r = rows[i];
        const auto t0 = std::chrono::steady_clock::now();
        auto cav = analytic_row(c, pts[i], r);
        if (!cav) return;
        if (!(r.T > 0)) {
            r.status = "no_time";
            return;
        }
        CavityConfig run = *cav;
        if (c.detune != 0.0) {
            run = cubic_cavity(r.L * (1.0 + c.detune), c.epsilon, r.Omega_c, r.h_plus, r.Omega_g);
            r.status = "detuned";
        }
        int n_max = std::max(c.n_max, c.mode_k.nz);
        if (c.mode_j) n_max = std::max(n_max, c.mode_j->nz);
        IntegrationSpec spec;
        spec.basis = ModeBasis::column(c.mode_k, n_max);
        spec.rel_tol = c.tol_rel;
        spec.abs_tol = c.tol_abs;
        spec.max_step = c.max_step;
        spec.t_final = r.T;
        try {
            const auto times = sample_grid(r.T, c.samples);
            const auto states = integrate_sampled(spec, run, times);
            std::vector<double> N;
            for (const auto& s : states) N.push_back(particle_number(s, spec.basis, c.mode_k));
            r.numeric = true;
            r.N_numeric = N.back();
            if (c.mode_j) r.N_numeric_j = particle_number(states.back(), spec.basis, *c.mode_j);
            r.unitarity_defect = max_unitarity_defect(states.back());
            r.numeric_rate = growth_rate(times, N);
            r.rel_dev = r.N_analytic > 0 ? std::abs(r.N_numeric - r.N_analytic) / r.N_analytic
                                         : std::abs(r.N_numeric - r.N_analytic);
        } catch (const Error& e) {
            r.status = "integration_failed";
        }
        r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });
    return rows;
}

FigureData cmd_figure(const SweepConfig& c, int threads) {
    c.validate();
    if (c.condition == Resonance::Mechanical || c.condition == Resonance::GwOnly)
        throw ConfigError("figure needs a sideband or sum condition");
    if (!c.kappa || !(*c.kappa > 0)) throw ConfigError("figure needs kappa > 0");
    if (!(c.epsilon > 0)) throw ConfigError("figure needs epsilon > 0");
    std::vector<double> gs = c.omega_g;
    std::sort(gs.begin(), gs.end());
    const auto grid = c.omega_c_grid();
    FigureData d;
    d.curves.resize(gs.size());
    // per curve, per grid point: chi/(eps kappa) or NaN when unsolvable
    std::vector<std::vector<double>> value(gs.size(), std::vector<double>(grid.size(), NAN));
    std::vector<std::vector<double>> len(gs.size(), std::vector<double>(grid.size(), NAN));
    std::vector<std::vector<char>> ok(gs.size(), std::vector<char>(grid.size(), 0));
    parallel_for(gs.size() * grid.size(), threads, [&](std::size_t idx) {
        const std::size_t gi = idx / grid.size(), ci = idx % grid.size();
        RunRecord r;
        if (analytic_row(c, {grid[ci], gs[gi]}, r)) {
            value[gi][ci] = r.chi / (c.epsilon * *c.kappa);
            len[gi][ci] = r.L;
            ok[gi][ci] = r.flags.long_wavelength_ok;
        }
    });
    for (std::size_t gi = 0; gi < gs.size(); ++gi) {
        auto& cv = d.curves[gi];
        cv.Omega_g = gs[gi];
        for (std::size_t ci = 0; ci < grid.size(); ++ci) {
            if (std::isnan(value[gi][ci])) continue;
            cv.Omega_c.push_back(grid[ci]);
            cv.L.push_back(len[gi][ci]);
            cv.chi_over_eps_kappa.push_back(value[gi][ci]);
            cv.valid.push_back(ok[gi][ci]);
        }
    }
    for (std::size_t gi = 0; gi + 1 < gs.size(); ++gi) {
        FigureSummary s{gs[gi], gs[gi + 1], 0, 0};
        for (std::size_t ci = 0; ci < grid.size(); ++ci) {
            if (!ok[gi][ci] || !ok[gi + 1][ci]) continue;
            ++s.compared;
            if (!(value[gi + 1][ci] > value[gi][ci])) ++s.violations;
        }
        d.summary.push_back(s);
    }
    return d;
}

std::string cmd_tune(const TuneArgs& a) {
    if (a.kappa && a.h_plus) throw ConfigError("give kappa or h_plus, not both");
    ResonanceCondition cond(a.condition, a.mode_k, a.mode_j);
    const double h = a.kappa ? source_amplitude(*a.kappa, a.Omega_g) : a.h_plus.value_or(0.0);
    const double L = tune_cavity_length(a.condition, a.Omega_c, a.Omega_g, a.mode_k, a.mode_j);
    const auto cav = cubic_cavity(L, a.epsilon, a.Omega_c, h, a.Omega_g);
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["command"] = "tune";
    j["condition"] = to_string(a.condition);
    j["mode_k"] = format_mode(a.mode_k);
    j["mode_j"] = a.mode_j ? nlohmann::ordered_json(format_mode(*a.mode_j)) : nlohmann::ordered_json(nullptr);
    j["Omega_c"] = a.Omega_c;
    j["Omega_g"] = a.Omega_g;
    j["epsilon"] = a.epsilon;
    j["h_plus"] = h;
    j["kappa"] = a.kappa ? nlohmann::ordered_json(*a.kappa) : nlohmann::ordered_json(nullptr);
    j["L"] = L;
    j["omega_k0"] = mode_frequencies(a.mode_k, cav).omega0;
    j["omega_j0"] = a.mode_j ? nlohmann::ordered_json(mode_frequencies(*a.mode_j, cav).omega0)
                             : nlohmann::ordered_json(nullptr);
    std::string status = "ok";
    double chi = 0;
    try {
        chi = chi_rate(cond, cav);
    } catch (const NotOnResonance&) {
        status = "overlapping_resonance";
    }
    j["chi"] = chi;
    j["degenerate"] = is_degenerate(cond, cav);
    j["Q_min"] = a.Omega_g > 0 ? nlohmann::ordered_json(sideband_quality_factor(a.Omega_c, a.Omega_g))
                               : nlohmann::ordered_json(nullptr);
    const auto f = validity_flags(cav, L, a.validity_threshold);
    j["validity_threshold"] = a.validity_threshold;
    j["long_wavelength_ok"] = f.long_wavelength_ok;
    j["weak_drive_ok"] = f.weak_drive_ok;
    j["status"] = status;
    return j.dump(2) + "\n";
}

namespace {

std::string common_cells(const RunRecord& r) {
    return fmt::format("{},{},{},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g},{:.12g}",
                       to_string(r.condition), format_mode(r.mode_k), r.mode_j ? format_mode(*r.mode_j) : "",
                       r.Omega_c, r.Omega_g, r.epsilon, r.h_plus, r.L, r.omega_k0, r.omega_j0, r.chi, r.T,
                       r.N_analytic);
}

constexpr const char* kCommonHeader =
    "condition,mode_k,mode_j,Omega_c,Omega_g,epsilon,h_plus,L,omega_k0,omega_j0,chi,T,N_analytic";

}  // namespace

std::string rates_csv(const std::vector<RunRecord>& rows) {
    std::string s = std::string(kCommonHeader) + ",degenerate,long_wavelength_ok,weak_drive_ok,status\n";
    for (const auto& r : rows)
        s += fmt::format("{},{},{},{},{}\n", common_cells(r), yes(r.degenerate), yes(r.flags.long_wavelength_ok),
                         yes(r.flags.weak_drive_ok), r.status);
    return s;
}

std::string validate_csv(const std::vector<RunRecord>& rows) {
    std::string s = std::string(kCommonHeader) +
                    ",N_numeric,N_numeric_j,rel_dev,numeric_rate,rate_ratio,unitarity_defect,degenerate,"
                    "long_wavelength_ok,weak_drive_ok,status\n";
    for (const auto& r : rows) {
        const double ratio = r.chi > 0 ? r.numeric_rate / r.chi : 0.0;
        s += fmt::format("{},{:.12g},{:.12g},{:.6g},{:.12g},{:.6g},{:.3e},{},{},{},{}\n", common_cells(r),
                         r.N_numeric, r.N_numeric_j, r.rel_dev, r.numeric_rate, ratio, r.unitarity_defect,
                         yes(r.degenerate), yes(r.flags.long_wavelength_ok), yes(r.flags.weak_drive_ok), r.status);
    }
    return s;
}

std::string records_json(const std::string& command, const SweepConfig& cfg, const std::vector<RunRecord>& rows) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["command"] = command;
    nlohmann::ordered_json conf = nlohmann::ordered_json::object();
    std::stringstream ss(cfg.serialize());
    std::string line;
    while (std::getline(ss, line)) {
        const auto eq = line.find('=');
        conf[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    j["config"] = conf;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json o;
        o["condition"] = to_string(r.condition);
        o["mode_k"] = format_mode(r.mode_k);
        o["mode_j"] = r.mode_j ? nlohmann::ordered_json(format_mode(*r.mode_j)) : nlohmann::ordered_json(nullptr);
        o["Omega_c"] = r.Omega_c;
        o["Omega_g"] = r.Omega_g;
        o["epsilon"] = r.epsilon;
        o["h_plus"] = r.h_plus;
        o["L"] = r.L;
        o["omega_k0"] = r.omega_k0;
        o["omega_j0"] = r.omega_j0;
        o["chi"] = r.chi;
        o["T"] = r.T;
        o["N_analytic"] = r.N_analytic;
        if (r.numeric) {
            o["N_numeric"] = r.N_numeric;
            o["N_numeric_j"] = r.N_numeric_j;
            o["rel_dev"] = r.rel_dev;
            o["numeric_rate"] = r.numeric_rate;
            o["unitarity_defect"] = r.unitarity_defect;
        }
        o["degenerate"] = r.degenerate;
        o["long_wavelength_ok"] = r.flags.long_wavelength_ok;
        o["weak_drive_ok"] = r.flags.weak_drive_ok;
        o["status"] = r.status;
        j["records"].push_back(o);
    }
    return j.dump(2) + "\n";
}

std::string curve_csv(const FigureCurve& c) {
    std::string s = "Omega_c,L,chi_over_eps_kappa,valid\n";
    for (std::size_t i = 0; i < c.Omega_c.size(); ++i)
        s += fmt::format("{:.12g},{:.12g},{:.12g},{}\n", c.Omega_c[i], c.L[i], c.chi_over_eps_kappa[i], yes(c.valid[i]));
    return s;
}

std::string summary_csv(const FigureData& d) {
    std::string s = "Omega_g_low,Omega_g_high,compared,violations,higher_dominates\n";
    for (const auto& x : d.summary)
        s += fmt::format("{:.12g},{:.12g},{},{},{}\n", x.Omega_g_low, x.Omega_g_high, x.compared, x.violations,
                         yes(x.compared > 0 && x.violations == 0));
    return s;
}

}  // namespace dce
