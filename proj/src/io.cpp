#include "circ/io.hpp"

#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace circ {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const char* block) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) known = true;
        if (!known)
            throw std::invalid_argument(std::string("parse_config: unknown key \"") + item.key() +
                                        "\" in " + block);
    }
}

double get_num(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw std::invalid_argument(std::string("parse_config: ") + key + " must be a number");
    return obj[key].get<double>();
}

long get_int(const json& obj, const char* key, long fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer())
        throw std::invalid_argument(std::string("parse_config: ") + key + " must be an integer");
    return obj[key].get<long>();
}

std::uint64_t fnv1a(const unsigned char* data, std::size_t n) {
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string sidecar_path(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
        return path + ".json";
    return path.substr(0, dot) + ".json";
}

json grid_to_json(const GridSpec& g) {
    return json{{"n_r", g.n_r},
                {"n_z", g.n_z},
                {"r_max", g.r_max},
                {"z_min", g.z_min},
                {"z_max", g.z_max},
                {"beta", g.beta},
                {"z_boundary", g.z_boundary == ZBoundary::periodic ? "periodic" : "dirichlet"}};
}

GridSpec grid_from_json(const json& obj) {
    reject_unknown_keys(obj, {"n_r", "n_z", "r_max", "z_min", "z_max", "beta", "z_boundary"},
                        "grid");
    GridSpec g;
    g.n_r = static_cast<int>(get_int(obj, "n_r", g.n_r));
    g.n_z = static_cast<int>(get_int(obj, "n_z", g.n_z));
    g.r_max = get_num(obj, "r_max", g.r_max);
    g.z_min = get_num(obj, "z_min", g.z_min);
    g.z_max = get_num(obj, "z_max", g.z_max);
    g.beta = get_num(obj, "beta", g.beta);
    if (obj.contains("z_boundary")) {
        const std::string s = obj["z_boundary"].get<std::string>();
        if (s == "periodic")
            g.z_boundary = ZBoundary::periodic;
        else if (s == "dirichlet")
            g.z_boundary = ZBoundary::dirichlet;
        else
            throw std::invalid_argument("parse_config: z_boundary must be periodic or dirichlet");
    }
    return g;
}

json params_to_json(const FlowParams& p) {
    return json{{"A", p.A},           {"gamma", p.gamma},       {"nu1", p.nu1},
                {"nu2", p.nu2},       {"rho_bar0", p.rho_bar0}, {"M0", p.M0}};
}

FlowParams params_from_json(const json& obj) {
    reject_unknown_keys(obj, {"A", "gamma", "nu1", "nu2", "rho_bar0", "M0"}, "params");
    FlowParams p;
    p.A = get_num(obj, "A", p.A);
    p.gamma = get_num(obj, "gamma", p.gamma);
    p.nu1 = get_num(obj, "nu1", p.nu1);
    p.nu2 = get_num(obj, "nu2", p.nu2);
    p.rho_bar0 = get_num(obj, "rho_bar0", p.rho_bar0);
    p.M0 = get_num(obj, "M0", p.M0);
    return p;
}

const char* kComponentNames[4] = {"phi", "v_r", "v_theta", "v_z"};

}  // namespace

void RunConfig::validate() const {
    params.validate();
    grid.validate();
    control.validate();
    outputs.validate();
    if (!ic.zero) {
        if (!(ic.bump.amplitude >= 0.0))
            throw std::invalid_argument("RunConfig: ic amplitude >= 0 required");
        if (!(ic.bump.sigma_r > 0.0 && ic.bump.sigma_z > 0.0))
            throw std::invalid_argument("RunConfig: ic widths must be positive");
    }
    if (mode == RunMode::sweep && epsilons.empty())
        throw std::invalid_argument("RunConfig: sweep requires a non-empty epsilons list");
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("parse_config: ") + e.what());
    }
    if (!doc.is_object()) throw std::invalid_argument("parse_config: top level must be an object");
    reject_unknown_keys(doc, {"mode", "params", "grid", "control", "ic", "outputs", "epsilons"},
                        "top level");

    RunConfig cfg;
    if (doc.contains("mode")) {
        const std::string m = doc["mode"].get<std::string>();
        if (m == "evolve")
            cfg.mode = RunMode::evolve;
        else if (m == "steady_check")
            cfg.mode = RunMode::steady_check;
        else if (m == "sweep")
            cfg.mode = RunMode::sweep;
        else if (m == "convergence")
            cfg.mode = RunMode::convergence;
        else if (m == "residual")
            cfg.mode = RunMode::residual;
        else
            throw std::invalid_argument("parse_config: unknown mode \"" + m + "\"");
    }
    if (doc.contains("params")) cfg.params = params_from_json(doc["params"]);
    if (doc.contains("grid")) cfg.grid = grid_from_json(doc["grid"]);
    if (doc.contains("control")) {
        const json& c = doc["control"];
        reject_unknown_keys(c, {"cfl_safety", "t_end", "max_steps"}, "control");
        cfg.control.cfl_safety = get_num(c, "cfl_safety", cfg.control.cfl_safety);
        cfg.control.t_end = get_num(c, "t_end", cfg.control.t_end);
        cfg.control.max_steps = get_int(c, "max_steps", cfg.control.max_steps);
    }
    if (doc.contains("ic")) {
        const json& c = doc["ic"];
        reject_unknown_keys(c, {"zero", "amplitude", "r0", "z0", "sigma_r", "sigma_z", "components"},
                            "ic");
        if (c.contains("zero")) cfg.ic.zero = c["zero"].get<bool>();
        cfg.ic.bump.amplitude = get_num(c, "amplitude", cfg.ic.bump.amplitude);
        cfg.ic.bump.r0 = get_num(c, "r0", cfg.ic.bump.r0);
        cfg.ic.bump.z0 = get_num(c, "z0", cfg.ic.bump.z0);
        cfg.ic.bump.sigma_r = get_num(c, "sigma_r", cfg.ic.bump.sigma_r);
        cfg.ic.bump.sigma_z = get_num(c, "sigma_z", cfg.ic.bump.sigma_z);
        if (c.contains("components")) {
            cfg.ic.bump.mask = {false, false, false, false};
            for (const auto& name : c["components"]) {
                const std::string s = name.get<std::string>();
                bool found = false;
                for (int k = 0; k < 4; ++k)
                    if (s == kComponentNames[k]) {
                        cfg.ic.bump.mask[k] = true;
                        found = true;
                    }
                if (!found)
                    throw std::invalid_argument("parse_config: unknown ic component \"" + s + "\"");
            }
        }
    }
    if (doc.contains("outputs")) {
        const json& c = doc["outputs"];
        reject_unknown_keys(
            c, {"directory", "snapshot_every", "diag_every", "contamination_threshold"},
            "outputs");
        if (c.contains("directory")) cfg.outputs.directory = c["directory"].get<std::string>();
        cfg.outputs.snapshot_every =
            static_cast<int>(get_int(c, "snapshot_every", cfg.outputs.snapshot_every));
        cfg.outputs.diag_every = static_cast<int>(get_int(c, "diag_every", cfg.outputs.diag_every));
        cfg.outputs.contamination_threshold =
            get_num(c, "contamination_threshold", cfg.outputs.contamination_threshold);
    }
    if (doc.contains("epsilons")) {
        cfg.epsilons.clear();
        for (const auto& e : doc["epsilons"]) cfg.epsilons.push_back(e.get<double>());
    }
    cfg.control.diag_every = cfg.outputs.diag_every;
    cfg.validate();
    return cfg;
}

std::string dump_config(const RunConfig& cfg) {
    static const char* mode_names[] = {"evolve", "steady_check", "sweep", "convergence",
                                       "residual"};
    json ic;
    if (cfg.ic.zero) {
        ic = json{{"zero", true}};
    } else {
        json comps = json::array();
        for (int k = 0; k < 4; ++k)
            if (cfg.ic.bump.mask[k]) comps.push_back(kComponentNames[k]);
        ic = json{{"amplitude", cfg.ic.bump.amplitude}, {"r0", cfg.ic.bump.r0},
                  {"z0", cfg.ic.bump.z0},               {"sigma_r", cfg.ic.bump.sigma_r},
                  {"sigma_z", cfg.ic.bump.sigma_z},     {"components", comps}};
    }
    json doc{{"mode", mode_names[static_cast<int>(cfg.mode)]},
             {"params", params_to_json(cfg.params)},
             {"grid", grid_to_json(cfg.grid)},
             {"control",
              {{"cfl_safety", cfg.control.cfl_safety},
               {"t_end", cfg.control.t_end},
               {"max_steps", cfg.control.max_steps}}},
             {"ic", ic},
             {"outputs",
              {{"directory", cfg.outputs.directory},
               {"snapshot_every", cfg.outputs.snapshot_every},
               {"diag_every", cfg.outputs.diag_every},
               {"contamination_threshold", cfg.outputs.contamination_threshold}}},
             {"epsilons", cfg.epsilons}};
    return doc.dump(2);
}

std::string format_double(double x) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp);
    }
    fs::rename(tmp, path);
}

namespace {

const char* kSeriesColumns =
    "step,t,dt,e_L2,d_L2,e_grad,d_time,e_z1,e_z2,diss_z1,diss_z2,e_tD,e_press,diss_press,"
    "a1,a2,a3,phi_h2,v_h3,n_inst,n_integrand,thm_integrand,dt2,bmon,"
    "int_d_L2,int_d_time,int_z1,int_z2,int_press,int_n,int_thm,int_a1,int_a2,int_a3";

std::vector<double> report_values(const TimeSeries& s, std::size_t i) {
    const EnergyReport& r = s.reports[i];
    return {r.e_L2,        r.d_L2,     r.e_grad,        r.d_time,      r.e_z1,
            r.e_z2,        r.diss_z1,  r.diss_z2,       r.e_tD,        r.e_press,
            r.diss_press,  r.a1,       r.a2,            r.a3,          r.phi_h2,
            r.v_h3,        r.n_inst,   r.n_integrand,   r.thm_integrand, r.dt2,
            r.bmon,        s.int_d_L2[i], s.int_d_time[i], s.int_z1[i], s.int_z2[i],
            s.int_press[i], s.int_n[i], s.int_thm[i],    s.int_a1[i],   s.int_a2[i],
            s.int_a3[i]};
}

double parse_double(const std::string& tok, const std::string& where) {
    double x = 0.0;
    const char* b = tok.data();
    const char* e = b + tok.size();
    auto res = std::from_chars(b, e, x);
    if (res.ec != std::errc{} || res.ptr != e)
        throw std::runtime_error("read_timeseries: bad number \"" + tok + "\" in " + where);
    return x;
}

}  // namespace

void write_timeseries(const TimeSeries& series, const std::string& path) {
    std::string out(kSeriesColumns);
    out += "\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        out += std::to_string(series.step[i]) + "," + format_double(series.t[i]) + "," +
               format_double(series.dt[i]);
        for (double v : report_values(series, i)) out += "," + format_double(v);
        out += "\n";
    }
    write_text_atomic(path, out);
}

TimeSeries read_timeseries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_timeseries: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != kSeriesColumns)
        throw std::runtime_error("read_timeseries: unexpected header in " + path);
    TimeSeries s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> tok;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            tok.push_back(line.substr(pos, comma == std::string::npos ? comma : comma - pos));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (tok.size() != 34)
            throw std::runtime_error("read_timeseries: wrong column count in " + path);
        s.step.push_back(std::stol(tok[0]));
        s.t.push_back(parse_double(tok[1], path));
        s.dt.push_back(parse_double(tok[2], path));
        double v[31];
        for (int k = 0; k < 31; ++k) v[k] = parse_double(tok[3 + k], path);
        EnergyReport r;
        r.e_L2 = v[0]; r.d_L2 = v[1]; r.e_grad = v[2]; r.d_time = v[3];
        r.e_z1 = v[4]; r.e_z2 = v[5]; r.diss_z1 = v[6]; r.diss_z2 = v[7];
        r.e_tD = v[8]; r.e_press = v[9]; r.diss_press = v[10];
        r.a1 = v[11]; r.a2 = v[12]; r.a3 = v[13];
        r.phi_h2 = v[14]; r.v_h3 = v[15]; r.n_inst = v[16];
        r.n_integrand = v[17]; r.thm_integrand = v[18]; r.dt2 = v[19]; r.bmon = v[20];
        s.reports.push_back(r);
        s.int_d_L2.push_back(v[21]); s.int_d_time.push_back(v[22]);
        s.int_z1.push_back(v[23]); s.int_z2.push_back(v[24]); s.int_press.push_back(v[25]);
        s.int_n.push_back(v[26]); s.int_thm.push_back(v[27]);
        s.int_a1.push_back(v[28]); s.int_a2.push_back(v[29]); s.int_a3.push_back(v[30]);
    }
    return s;
}

void write_snapshot(const State& state, double t, const FlowParams& params,
                    const std::string& path) {
    const Grid& g = state.grid();
    const std::size_t n = g.size();
    std::vector<unsigned char> payload(4 * n * sizeof(double));
    // x86-64 doubles are already little-endian; raw copy in component order
    for (int c = 0; c < 4; ++c)
        std::memcpy(payload.data() + c * n * sizeof(double), state.component(c).v.data(),
                    n * sizeof(double));

    json side{{"grid", grid_to_json(g.spec)},
              {"params", params_to_json(params)},
              {"t", t},
              {"components", {"phi", "v_r", "v_theta", "v_z"}},
              {"checksum_fnv1a64", fnv1a(payload.data(), payload.size())}};
    write_text_atomic(sidecar_path(path), side.dump(2));
    write_text_atomic(path,
                      std::string(reinterpret_cast<const char*>(payload.data()), payload.size()));
}

SnapshotData read_snapshot(const std::string& path, const Grid& grid) {
    std::ifstream side_in(sidecar_path(path));
    if (!side_in) throw std::runtime_error("read_snapshot: missing sidecar for " + path);
    json side = json::parse(side_in);
    const GridSpec stored = grid_from_json(side.at("grid"));
    if (!(stored == grid.spec))
        throw std::runtime_error(
            "read_snapshot: grid mismatch, file has " + std::to_string(stored.n_r) + "x" +
            std::to_string(stored.n_z) + ", expected " + std::to_string(grid.spec.n_r) + "x" +
            std::to_string(grid.spec.n_z));

    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_snapshot: cannot open " + path);
    std::vector<unsigned char> payload((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
    const std::size_t n = grid.size();
    if (payload.size() != 4 * n * sizeof(double))
        throw std::runtime_error("read_snapshot: payload size mismatch in " + path);
    if (fnv1a(payload.data(), payload.size()) != side.at("checksum_fnv1a64").get<std::uint64_t>())
        throw std::runtime_error("read_snapshot: checksum mismatch in " + path);

    SnapshotData out{State(grid), side.at("t").get<double>(), params_from_json(side.at("params"))};
    for (int c = 0; c < 4; ++c)
        std::memcpy(out.state.component(c).v.data(), payload.data() + c * n * sizeof(double),
                    n * sizeof(double));
    return out;
}

}  // namespace circ
