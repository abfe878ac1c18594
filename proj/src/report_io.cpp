#include "gspde/report_io.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>

namespace gspde {

namespace {

using nlohmann::json;

std::string full_digits(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell_label(const ReportCell& cell) {
    std::string out;
    for (std::size_t i = 0; i < cell.labels.size(); ++i) {
        if (i) out += ",";
        out += cell.labels[i].first + "=" + full_digits(cell.labels[i].second);
    }
    return out;
}

json report_to_json(const ExperimentReport& rep) {
    json j;
    j["experiment"] = rep.kind;
    j["pass"] = rep.pass;
    j["config_hash"] = rep.config_hash;
    j["master_seed"] = rep.master_seed;
    j["path_seeds"] = rep.path_seeds;
    j["dt"] = rep.dt;
    j["levels"] = rep.levels;
    j["n_paths"] = rep.n_paths;
    j["diverged_paths"] = rep.diverged_paths;
    j["gates"] = rep.gates;
    j["scalars"] = rep.scalars;
    j["series"] = rep.series;
    j["notes"] = rep.notes;
    json cells = json::array();
    for (const ReportCell& c : rep.cells) {
        json labels;
        for (const auto& [k, v] : c.labels) labels[k] = v;
        cells.push_back(json{{"labels", labels},
                             {"mean", c.mean},
                             {"std_error", c.std_error},
                             {"count", c.count}});
    }
    j["cells"] = cells;
    return j;
}

} // namespace

std::string report_json_text(const ExperimentReport& rep) {
    return report_to_json(rep).dump(2) + "\n";
}

std::string tables_csv_text(const ExperimentReport& rep) {
    std::string out = "experiment,cell,mean,std_error,count\n";
    for (const ReportCell& c : rep.cells) {
        out += rep.kind + ",\"" + cell_label(c) + "\"," + full_digits(c.mean) + "," +
               full_digits(c.std_error) + "," + std::to_string(c.count) + "\n";
    }
    return out;
}

void print_summary(std::ostream& os, const ExperimentReport& rep) {
    os << "experiment: " << rep.kind << "\n";
    os << "paths: " << rep.n_paths << " (diverged " << rep.diverged_paths << ")  dt: " << rep.dt
       << "  seed: " << rep.master_seed << "\n";
    if (!rep.config_hash.empty()) os << "config: " << rep.config_hash << "\n";
    if (!rep.cells.empty()) {
        os << std::left << std::setw(34) << "cell" << std::right << std::setw(16) << "mean"
           << std::setw(14) << "std_error" << std::setw(8) << "count" << "\n";
        for (const ReportCell& c : rep.cells) {
            os << std::left << std::setw(34) << cell_label(c) << std::right << std::setw(16)
               << std::setprecision(6) << std::scientific << c.mean << std::setw(14)
               << c.std_error << std::setw(8) << c.count << "\n";
        }
        os.unsetf(std::ios::scientific);
    }
    for (const auto& [name, values] : rep.series) {
        os << name << ":";
        for (double v : values) os << " " << std::setprecision(6) << v;
        os << "\n";
    }
    for (const std::string& n : rep.notes) os << "note: " << n << "\n";
    os << "result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
}

std::string norms_csv_text(const TrajectoryRecord& rec) {
    std::string out = "t";
    for (int m = 0; m <= rec.m_max; ++m) out += ",m" + std::to_string(m);
    out += "\n";
    for (std::size_t i = 0; i < rec.steps(); ++i) {
        out += full_digits(rec.times[i]);
        for (int m = 0; m <= rec.m_max; ++m) out += "," + full_digits(rec.norm_sq(i, m));
        out += "\n";
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!os) throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

namespace {

std::optional<std::string> diff_json(const json& a, const json& b, const std::string& path) {
    if (a.type() != b.type()) return path.empty() ? "/" : path;
    if (a.is_object()) {
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key())) return path + "/" + it.key();
            if (auto d = diff_json(it.value(), b.at(it.key()), path + "/" + it.key())) return d;
        }
        for (auto it = b.begin(); it != b.end(); ++it)
            if (!a.contains(it.key())) return path + "/" + it.key();
        return std::nullopt;
    }
    if (a.is_array()) {
        if (a.size() != b.size()) return path + "/size";
        for (std::size_t i = 0; i < a.size(); ++i)
            if (auto d = diff_json(a[i], b[i], path + "/" + std::to_string(i))) return d;
        return std::nullopt;
    }
    if (a != b) return path.empty() ? "/" : path;
    return std::nullopt;
}

} // namespace

std::optional<std::string> first_json_difference(const std::string& a, const std::string& b) {
    if (a == b) return std::nullopt;
    json ja, jb;
    try {
        ja = json::parse(a);
        jb = json::parse(b);
    } catch (const json::parse_error&) {
        return std::string("/(unparseable)");
    }
    auto d = diff_json(ja, jb, "");
    if (!d) return std::string("/(formatting)");
    return d;
}

} // namespace gspde
