#include "onsflow/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace onsflow {

namespace {

struct RawEntry {
    std::string value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

class Entries {
  public:
    explicit Entries(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": expected 'section.key = value', got '" + line + "'");
            const std::string key = trim(line.substr(0, eq));
            const std::string val = trim(line.substr(eq + 1));
            if (key.empty() || val.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
            if (map_.count(key))
                throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" +
                                  key + "'");
            map_[key] = RawEntry{val, lineno, false};
        }
    }

    bool has(const std::string& key) const { return map_.count(key) != 0; }

    std::string str(const std::string& key, const std::string& fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.used = true;
        return it->second.value;
    }

    std::string required_str(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) throw ConfigError("missing required key '" + key + "'");
        it->second.used = true;
        return it->second.value;
    }

    double num(const std::string& key, double fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.used = true;
        return to_num(key, it->second);
    }

    double required_num(const std::string& key) {
        auto it = map_.find(key);
        if (it == map_.end()) throw ConfigError("missing required key '" + key + "'");
        it->second.used = true;
        return to_num(key, it->second);
    }

    long long integer(const std::string& key, long long fallback) {
        auto it = map_.find(key);
        if (it == map_.end()) return fallback;
        it->second.used = true;
        const double v = to_num(key, it->second);
        if (v != std::floor(v))
            throw ConfigError("key '" + key + "' (line " + std::to_string(it->second.line) +
                              "): expected an integer, got '" + it->second.value + "'");
        return static_cast<long long>(v);
    }

    long long required_integer(const std::string& key) {
        if (!has(key)) throw ConfigError("missing required key '" + key + "'");
        return integer(key, 0);
    }

    void reject_unused() const {
        for (const auto& [key, e] : map_)
            if (!e.used)
                throw ConfigError("unknown key '" + key + "' at line " + std::to_string(e.line));
    }

  private:
    static double to_num(const std::string& key, const RawEntry& e) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(e.value, &pos);
        } catch (...) {
            pos = 0;
        }
        if (pos != e.value.size())
            throw ConfigError("key '" + key + "' (line " + std::to_string(e.line) +
                              "): expected a number, got '" + e.value + "'");
        return v;
    }

    std::map<std::string, RawEntry> map_;
};

void fail_key(const std::string& key, const std::string& why) {
    throw ConfigError("invalid value for '" + key + "': " + why);
}

}  // namespace

std::vector<DefectSpec> parse_defect_list(const std::string& text) {
    std::vector<DefectSpec> out;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        DefectSpec d;
        double kd = 0.0;
        if (std::sscanf(item.c_str(), "%lf:%lf:%lf:%lf", &kd, &d.cx, &d.cy, &d.theta0) != 4)
            throw ConfigError("ic.defects: expected 'k:cx:cy:theta0', got '" + item + "'");
        d.k = static_cast<int>(kd);
        out.push_back(d);
    }
    return out;
}

SimConfig parse_config(const std::string& text) {
    Entries e(text);
    SimConfig cfg;

    const std::string model = e.required_str("model");
    if (model == "chns")
        cfg.model = ModelKind::Chns;
    else if (model == "el")
        cfg.model = ModelKind::El;
    else
        fail_key("model", "expected 'chns' or 'el', got '" + model + "'");

    const std::string scheme = e.str("scheme", "cn");
    if (scheme == "cn")
        cfg.scheme = SchemeKind::CN;
    else if (scheme == "bdf2")
        cfg.scheme = SchemeKind::BDF2;
    else
        fail_key("scheme", "expected 'cn' or 'bdf2', got '" + scheme + "'");

    cfg.grid.nx = static_cast<int>(e.required_integer("grid.nx"));
    cfg.grid.ny = static_cast<int>(e.required_integer("grid.ny"));
    cfg.grid.lx = e.num("grid.lx", 1.0);
    cfg.grid.ly = e.num("grid.ly", 1.0);
    const std::string bcx = e.str("grid.bc_x", "periodic");
    if (bcx != "periodic") fail_key("grid.bc_x", "only 'periodic' is supported");
    const std::string bcy = e.str("grid.bc_y", "periodic");
    if (bcy == "periodic")
        cfg.grid.bc_y = Bc::Periodic;
    else if (bcy == "wall")
        cfg.grid.bc_y = Bc::Wall;
    else
        fail_key("grid.bc_y", "expected 'periodic' or 'wall', got '" + bcy + "'");
    try {
        cfg.grid.validate();
    } catch (const ContractError& err) {
        throw ConfigError(std::string("grid.*: ") + err.what());
    }

    cfg.dt = e.required_num("time.dt");
    if (!(cfg.dt > 0.0)) fail_key("time.dt", "must be positive");
    cfg.t_end = e.required_num("time.t_end");
    if (!(cfg.t_end >= cfg.dt)) fail_key("time.t_end", "must be >= time.dt");

    const double default_T = cfg.t_end;
    if (cfg.model == ModelKind::Chns) {
        cfg.chns.rho = e.num("params.rho", 1.0);
        cfg.chns.eta = e.num("params.eta", 1.0);
        cfg.chns.mobility = e.num("params.mobility", 0.01);
        cfg.chns.eps = e.num("params.eps", 0.01);
        cfg.chns.gamma0 = e.num("params.gamma0", 0.0);
        cfg.chns.T = e.num("params.T", default_T);
        try {
            cfg.chns.validate();
        } catch (const ContractError& err) {
            throw ConfigError(std::string("params.*: ") + err.what());
        }
    } else {
        cfg.el.rho = e.num("params.rho", 1.0);
        cfg.el.eta = e.num("params.eta", 1.0);
        cfg.el.mobility = e.num("params.mobility", 1.0);
        cfg.el.K = e.num("params.K", 0.01);
        cfg.el.eps = e.num("params.eps", 0.1);
        cfg.el.a = e.num("params.a", 1.0);
        cfg.el.gamma0 = e.num("params.gamma0", 0.0);
        cfg.el.T = e.num("params.T", default_T);
        try {
            cfg.el.validate();
        } catch (const ContractError& err) {
            throw ConfigError(std::string("params.*: ") + err.what());
        }
    }

    cfg.ic.preset = e.required_str("ic.preset");
    static const std::set<std::string> chns_presets{"equilibrium", "coarsening", "ostwald",
                                                    "smooth"};
    static const std::set<std::string> el_presets{"uniform", "smooth", "defects"};
    const auto& allowed = (cfg.model == ModelKind::Chns) ? chns_presets : el_presets;
    if (!allowed.count(cfg.ic.preset)) fail_key("ic.preset", "unknown preset '" + cfg.ic.preset + "'");
    cfg.ic.seed = static_cast<unsigned long long>(e.integer("ic.seed", 0));
    cfg.ic.slope = e.num("ic.slope", 0.9);
    cfg.ic.noise = e.num("ic.noise", 1e-3);
    cfg.ic.mean = e.num("ic.mean", 0.0);
    cfg.ic.amp = e.num("ic.amp", 0.1);
    cfg.ic.vortex = e.num("ic.vortex", 0.0);
    cfg.ic.velocity = e.str("ic.velocity", cfg.ic.vortex != 0.0 ? "vortex" : "zero");
    if (cfg.ic.velocity != "zero" && cfg.ic.velocity != "vortex" && cfg.ic.velocity != "stokes")
        fail_key("ic.velocity", "expected 'zero', 'vortex', or 'stokes'");
    cfg.ic.defects = e.str("ic.defects", "");
    if (!cfg.ic.defects.empty()) parse_defect_list(cfg.ic.defects);  // validate now

    cfg.output.snapshot_interval = e.num("output.snapshot_interval", 0.0);
    if (cfg.output.snapshot_interval < 0.0) fail_key("output.snapshot_interval", "must be >= 0");
    cfg.output.series_interval = static_cast<int>(e.integer("output.series_interval", 1));
    if (cfg.output.series_interval < 1) fail_key("output.series_interval", "must be >= 1");
    cfg.output.snapshot_format = e.str("output.snapshot_format", "csv");
    if (cfg.output.snapshot_format != "csv" && cfg.output.snapshot_format != "vtk")
        fail_key("output.snapshot_format", "expected 'csv' or 'vtk'");

    cfg.solver.rel_tol = e.num("solver.rel_tol", 1e-10);
    cfg.solver.abs_tol = e.num("solver.abs_tol", 1e-14);
    cfg.solver.max_iter = static_cast<int>(e.integer("solver.max_iter", 10000));
    try {
        cfg.solver.validate();
    } catch (const ContractError& err) {
        throw ConfigError(std::string("solver.*: ") + err.what());
    }

    e.reject_unused();
    return cfg;
}

SimConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string SimConfig::echo() const {
    std::ostringstream out;
    char buf[128];
    auto put = [&](const std::string& key, const std::string& val) {
        out << key << " = " << val << "\n";
    };
    auto putn = [&](const std::string& key, double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        put(key, buf);
    };
    put("model", model == ModelKind::Chns ? "chns" : "el");
    put("scheme", scheme == SchemeKind::CN ? "cn" : "bdf2");
    put("grid.nx", std::to_string(grid.nx));
    put("grid.ny", std::to_string(grid.ny));
    putn("grid.lx", grid.lx);
    putn("grid.ly", grid.ly);
    put("grid.bc_x", "periodic");
    put("grid.bc_y", grid.bc_y == Bc::Wall ? "wall" : "periodic");
    putn("time.dt", dt);
    putn("time.t_end", t_end);
    if (model == ModelKind::Chns) {
        putn("params.rho", chns.rho);
        putn("params.eta", chns.eta);
        putn("params.mobility", chns.mobility);
        putn("params.eps", chns.eps);
        putn("params.gamma0", chns.gamma0);
        putn("params.T", chns.T);
    } else {
        putn("params.rho", el.rho);
        putn("params.eta", el.eta);
        putn("params.mobility", el.mobility);
        putn("params.K", el.K);
        putn("params.eps", el.eps);
        putn("params.a", el.a);
        putn("params.gamma0", el.gamma0);
        putn("params.T", el.T);
    }
    put("ic.preset", ic.preset);
    put("ic.seed", std::to_string(ic.seed));
    putn("ic.slope", ic.slope);
    putn("ic.noise", ic.noise);
    putn("ic.mean", ic.mean);
    putn("ic.amp", ic.amp);
    putn("ic.vortex", ic.vortex);
    put("ic.velocity", ic.velocity);
    if (!ic.defects.empty()) put("ic.defects", ic.defects);
    putn("output.snapshot_interval", output.snapshot_interval);
    put("output.series_interval", std::to_string(output.series_interval));
    put("output.snapshot_format", output.snapshot_format);
    putn("solver.rel_tol", solver.rel_tol);
    putn("solver.abs_tol", solver.abs_tol);
    put("solver.max_iter", std::to_string(solver.max_iter));
    return out.str();
}

}  // namespace onsflow
