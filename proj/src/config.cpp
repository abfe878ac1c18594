#include "gspde/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gspde {

namespace {

struct TomlValue {
    enum class Type { string, boolean, number, array };
    Type type = Type::number;
    std::string str;
    bool b = false;
    double num = 0.0;
    std::vector<double> arr;
    bool used = false;
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_quote = !in_quote;
        if (line[i] == '#' && !in_quote) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& s, const std::string& key) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, found '" + s + "'");
    }
    if (used != s.size()) throw ConfigError(key + ": expected a number, found '" + s + "'");
    return v;
}

TomlValue parse_value(const std::string& raw, const std::string& key) {
    TomlValue v;
    const std::string s = trim(raw);
    if (s.empty()) throw ConfigError(key + ": empty value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw ConfigError(key + ": unterminated string literal");
        v.type = TomlValue::Type::string;
        v.str = s.substr(1, s.size() - 2);
        return v;
    }
    if (s == "true" || s == "false") {
        v.type = TomlValue::Type::boolean;
        v.b = (s == "true");
        return v;
    }
    if (s.front() == '[') {
        if (s.back() != ']') throw ConfigError(key + ": unterminated array");
        v.type = TomlValue::Type::array;
        std::string body = s.substr(1, s.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            v.arr.push_back(parse_number(item, key));
        }
        return v;
    }
    v.type = TomlValue::Type::number;
    v.num = parse_number(s, key);
    v.str = s; // kept verbatim so 64-bit seeds round-trip exactly
    return v;
}

class KeyTable {
public:
    std::map<std::string, TomlValue> values;

    const TomlValue* find(const std::string& key) {
        auto it = values.find(key);
        if (it == values.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    double number(const std::string& key, double fallback) {
        const TomlValue* v = find(key);
        if (!v) return fallback;
        if (v->type != TomlValue::Type::number)
            throw ConfigError(key + ": expected a number");
        return v->num;
    }

    int integer(const std::string& key, int fallback) {
        const double d = number(key, fallback);
        const int i = static_cast<int>(d);
        if (static_cast<double>(i) != d) throw ConfigError(key + ": expected an integer");
        return i;
    }

    std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
        const TomlValue* v = find(key);
        if (!v) return fallback;
        if (v->type != TomlValue::Type::number || v->num < 0)
            throw ConfigError(key + ": expected a non-negative integer");
        char* end = nullptr;
        const std::uint64_t exact = std::strtoull(v->str.c_str(), &end, 10);
        if (end && *end == '\0') return exact;
        return static_cast<std::uint64_t>(v->num);
    }

    bool boolean(const std::string& key, bool fallback) {
        const TomlValue* v = find(key);
        if (!v) return fallback;
        if (v->type != TomlValue::Type::boolean)
            throw ConfigError(key + ": expected true or false");
        return v->b;
    }

    std::string str(const std::string& key, const std::string& fallback) {
        const TomlValue* v = find(key);
        if (!v) return fallback;
        if (v->type != TomlValue::Type::string) throw ConfigError(key + ": expected a string");
        return v->str;
    }

    std::vector<double> array(const std::string& key, const std::vector<double>& fallback) {
        const TomlValue* v = find(key);
        if (!v) return fallback;
        if (v->type != TomlValue::Type::array) throw ConfigError(key + ": expected an array");
        return v->arr;
    }

    std::vector<int> int_array(const std::string& key, const std::vector<int>& fallback) {
        const TomlValue* v = find(key);
        if (!v) {
            return fallback;
        }
        if (v->type != TomlValue::Type::array) throw ConfigError(key + ": expected an array");
        std::vector<int> out;
        for (double d : v->arr) {
            const int i = static_cast<int>(d);
            if (static_cast<double>(i) != d)
                throw ConfigError(key + ": expected integer entries");
            out.push_back(i);
        }
        return out;
    }
};

const std::vector<std::string> kSections = {"grid", "integrator", "noise", "initial",
                                            "experiment"};

} // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    KeyTable table;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": malformed section");
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const auto& s : kSections) known = known || s == section;
            if (!known)
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown section [" +
                                  section + "]");
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty() || section.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": key outside any section");
        const std::string path = section + "." + key;
        if (table.values.count(path))
            throw ConfigError(path + ": duplicate key");
        table.values[path] = parse_value(line.substr(eq + 1), path);
    }

    RunConfig rc;
    ExperimentConfig& cfg = rc.experiment;

    cfg.base.dim = table.integer("grid.dim", 2);
    cfg.base.galerkin_cutoff = table.integer("grid.cutoff", 8);

    cfg.base.dt = table.number("integrator.dt", 1e-3);
    cfg.base.t_end = table.number("integrator.t_end", 1.0);
    cfg.base.nu = table.number("integrator.nu", 0.1);
    const std::string scheme = table.str("integrator.scheme", "euler");
    if (scheme == "euler")
        cfg.base.scheme = Scheme::explicit_euler;
    else if (scheme == "exponential")
        cfg.base.scheme = Scheme::exponential_euler;
    else
        throw ConfigError("integrator.scheme: expected \"euler\" or \"exponential\", found \"" +
                          scheme + "\"");
    cfg.base.nonlinearity = table.boolean("integrator.nonlinearity", true);
    const std::string conv = table.str("integrator.convolution", "auto");
    if (conv == "auto")
        cfg.base.convolution = ConvolutionPath::automatic;
    else if (conv == "direct")
        cfg.base.convolution = ConvolutionPath::direct;
    else if (conv == "fft")
        cfg.base.convolution = ConvolutionPath::fft;
    else
        throw ConfigError("integrator.convolution: expected \"auto\", \"direct\" or \"fft\"");
    cfg.base.m_max = table.integer("integrator.m_max", 3);
    cfg.base.record_fields = table.boolean("integrator.record_fields", false);

    const std::string kind = table.str("noise.kind", "multiplicative");
    NoiseModel::Kind nk;
    if (kind == "additive")
        nk = NoiseModel::Kind::additive;
    else if (kind == "multiplicative" || kind == "linear_multiplicative")
        nk = NoiseModel::Kind::linear_multiplicative;
    else
        throw ConfigError("noise.kind: expected \"additive\" or \"multiplicative\", found \"" +
                          kind + "\"");
    const int n_modes = table.integer("noise.n_modes", 16);
    if (n_modes < 0) throw ConfigError("noise.n_modes: expected >= 0, found " +
                                       std::to_string(n_modes));
    const double c0 = table.number("noise.c0", 0.1);
    if (c0 < 0.0) throw ConfigError("noise.c0: expected >= 0");
    const double q = table.number("noise.decay_q", 1.0);
    if (!(q > 0.5))
        throw ConfigError("noise.decay_q: square-summability requires q > 0.5, found " +
                          std::to_string(q));
    const int s = table.integer("noise.smoothing_order", 1);
    if (s < 0) throw ConfigError("noise.smoothing_order: expected >= 0");
    cfg.base.noise = NoiseModel::make(nk, n_modes, c0, q, s);
    cfg.base.seed = table.u64("noise.seed", 42);

    cfg.initial.type = table.str("initial.type", "zero");
    cfg.initial.amplitude = table.number("initial.amplitude", 1.0);
    cfg.initial.alpha = table.number("initial.alpha", 3.5);
    cfg.initial.kmax = table.integer("initial.kmax", cfg.base.galerkin_cutoff);
    const std::vector<int> wave = table.int_array("initial.wave", {1, 0, 0});
    if (wave.size() > 3) throw ConfigError("initial.wave: expected at most 3 components");
    cfg.initial.wave = Wave{0, 0, 0};
    for (std::size_t i = 0; i < wave.size(); ++i) cfg.initial.wave[i] = wave[i];
    if (cfg.initial.type != "zero" && cfg.initial.type != "taylor_green" &&
        cfg.initial.type != "single_mode" && cfg.initial.type != "spectrum")
        throw ConfigError("initial.type: expected zero|taylor_green|single_mode|spectrum, found \"" +
                          cfg.initial.type + "\"");

    rc.experiment_name = table.str("experiment.name", "");
    cfg.levels = table.int_array("experiment.levels", {cfg.base.galerkin_cutoff});
    cfg.n_paths = table.integer("experiment.n_paths", 32);
    cfg.M = table.number("experiment.M", 2.0);
    cfg.t = table.number("experiment.t", cfg.base.t_end);
    cfg.base_rung = table.integer("experiment.base_rung", 2);
    cfg.ladder_rungs = table.int_array("experiment.ladder_rungs", {2, 3, 4});
    cfg.theta = table.number("experiment.theta", 0.0);
    cfg.deltas = table.array("experiment.deltas", {0.2, 0.1, 0.05, 0.025});
    cfg.m_sweep = table.array("experiment.m_sweep", {1.1, 1.5, 2.0, 4.0});
    cfg.R = table.number("experiment.R", 1.3);
    cfg.output_dir = table.str("experiment.output_dir", "out");
    cfg.gates.cauchy_decay_ratio = table.number("experiment.cauchy_decay_ratio", 0.9);
    cfg.gates.cauchy_floor = table.number("experiment.cauchy_floor", 1e-8);
    cfg.gates.uniform_bound_ratio = table.number("experiment.uniform_bound_ratio", 1.5);
    cfg.gates.equicontinuity_ratio = table.number("experiment.equicontinuity_ratio", 0.75);
    cfg.gates.equicontinuity_final_ratio =
        table.number("experiment.equicontinuity_final_ratio", 0.1);
    cfg.gates.divergence_fraction_max = table.number("experiment.divergence_fraction_max", 0.1);

    for (const auto& [key, value] : table.values)
        if (!value.used) throw ConfigError(key + ": unknown key");

    cfg.validate();
    return rc;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_config_text(text, path);
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string num_list(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += num(v[i]);
    }
    return out + "]";
}

std::string int_list(const std::vector<int>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(v[i]);
    }
    return out + "]";
}

} // namespace

std::string canonical_toml(const RunConfig& rc) {
    const ExperimentConfig& cfg = rc.experiment;
    std::string out;
    out += "[grid]\n";
    out += "dim = " + std::to_string(cfg.base.dim) + "\n";
    out += "cutoff = " + std::to_string(cfg.base.galerkin_cutoff) + "\n";
    out += "\n[integrator]\n";
    out += "dt = " + num(cfg.base.dt) + "\n";
    out += "t_end = " + num(cfg.base.t_end) + "\n";
    out += "nu = " + num(cfg.base.nu) + "\n";
    out += std::string("scheme = ") +
           (cfg.base.scheme == Scheme::explicit_euler ? "\"euler\"" : "\"exponential\"") + "\n";
    out += std::string("nonlinearity = ") + (cfg.base.nonlinearity ? "true" : "false") + "\n";
    const char* conv = cfg.base.convolution == ConvolutionPath::automatic ? "auto"
                       : cfg.base.convolution == ConvolutionPath::direct  ? "direct"
                                                                          : "fft";
    out += std::string("convolution = \"") + conv + "\"\n";
    out += "m_max = " + std::to_string(cfg.base.m_max) + "\n";
    out += std::string("record_fields = ") + (cfg.base.record_fields ? "true" : "false") + "\n";
    out += "\n[noise]\n";
    out += std::string("kind = ") +
           (cfg.base.noise.kind == NoiseModel::Kind::additive ? "\"additive\""
                                                              : "\"multiplicative\"") +
           "\n";
    out += "n_modes = " + std::to_string(cfg.base.noise.n_modes) + "\n";
    out += "c0 = " + num(cfg.base.noise.c0) + "\n";
    out += "decay_q = " + num(cfg.base.noise.decay_q) + "\n";
    out += "smoothing_order = " + std::to_string(cfg.base.noise.smoothing_order) + "\n";
    char seed_buf[32];
    std::snprintf(seed_buf, sizeof seed_buf, "%" PRIu64, cfg.base.seed);
    out += std::string("seed = ") + seed_buf + "\n";
    out += "\n[initial]\n";
    out += "type = \"" + cfg.initial.type + "\"\n";
    out += "amplitude = " + num(cfg.initial.amplitude) + "\n";
    out += "alpha = " + num(cfg.initial.alpha) + "\n";
    out += "kmax = " + std::to_string(cfg.initial.kmax) + "\n";
    out += "wave = [" + std::to_string(cfg.initial.wave[0]) + ", " +
           std::to_string(cfg.initial.wave[1]) + ", " + std::to_string(cfg.initial.wave[2]) +
           "]\n";
    out += "\n[experiment]\n";
    if (!rc.experiment_name.empty()) out += "name = \"" + rc.experiment_name + "\"\n";
    out += "levels = " + int_list(cfg.levels) + "\n";
    out += "n_paths = " + std::to_string(cfg.n_paths) + "\n";
    out += "M = " + num(cfg.M) + "\n";
    out += "t = " + num(cfg.t) + "\n";
    out += "base_rung = " + std::to_string(cfg.base_rung) + "\n";
    out += "ladder_rungs = " + int_list(cfg.ladder_rungs) + "\n";
    out += "theta = " + num(cfg.theta) + "\n";
    out += "deltas = " + num_list(cfg.deltas) + "\n";
    out += "m_sweep = " + num_list(cfg.m_sweep) + "\n";
    out += "R = " + num(cfg.R) + "\n";
    out += "output_dir = \"" + cfg.output_dir + "\"\n";
    out += "cauchy_decay_ratio = " + num(cfg.gates.cauchy_decay_ratio) + "\n";
    out += "cauchy_floor = " + num(cfg.gates.cauchy_floor) + "\n";
    out += "uniform_bound_ratio = " + num(cfg.gates.uniform_bound_ratio) + "\n";
    out += "equicontinuity_ratio = " + num(cfg.gates.equicontinuity_ratio) + "\n";
    out += "equicontinuity_final_ratio = " + num(cfg.gates.equicontinuity_final_ratio) + "\n";
    out += "divergence_fraction_max = " + num(cfg.gates.divergence_fraction_max) + "\n";
    return out;
}

std::string config_hash_hex(const std::string& canonical_text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

} // namespace gspde
