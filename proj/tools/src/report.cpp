#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "chowla_cli/cli.hpp"
#include "json.hpp"

namespace chowla_cli {

std::string format_sig12(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0.000000000000";
    // Fixed notation carrying 12 significant digits: the decimal count is
    // pinned by the magnitude, not a constant.
    int mag = static_cast<int>(std::floor(std::log10(std::abs(v))));
    int decimals = 11 - mag;
    if (decimals < 0) decimals = 0;
    if (decimals > 30) decimals = 30;
    char buf[80];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string render(const ReportValue& v) {
    struct {
        std::string operator()(std::uint64_t u) const { return std::to_string(u); }
        std::string operator()(std::int64_t i) const { return std::to_string(i); }
        std::string operator()(double d) const { return format_sig12(d); }
        std::string operator()(const std::string& s) const { return s; }
    } visitor;
    return std::visit(visitor, v);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string emit_csv(const RunReport& r) {
    std::string out = "section,key,value\n";
    for (const auto& row : r.rows) {
        out += csv_field(row.section);
        out += ',';
        out += csv_field(row.key);
        out += ',';
        out += csv_field(render(row.value));
        out += '\n';
    }
    return out;
}

std::string emit_json(const RunReport& r) {
    nlohmann::ordered_json root = nlohmann::ordered_json::object();
    for (const auto& row : r.rows) {
        if (!root.contains(row.section)) root[row.section] = nlohmann::ordered_json::object();
        std::visit([&](const auto& v) { root[row.section][row.key] = v; }, row.value);
    }
    return root.dump(2) + "\n";
}

}  // namespace

std::string emit_report(const RunReport& r, const std::string& format) {
    if (format == "csv") return emit_csv(r);
    if (format == "json") return emit_json(r);
    throw std::invalid_argument("emit_report: format must be 'csv' or 'json'");
}

void write_report(const std::string& bytes, const std::string& out_path) {
    if (out_path == "-") {
        if (std::fwrite(bytes.data(), 1, bytes.size(), stdout) != bytes.size())
            throw std::runtime_error("write_report: short write to stdout");
        std::fflush(stdout);
        return;
    }
    namespace fs = std::filesystem;
    fs::path target(out_path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("write_report: cannot open '" + tmp.string() + "'");
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        f.flush();
        if (!f) throw std::runtime_error("write_report: write failed for '" + tmp.string() + "'");
    }
    // rename within one directory is atomic: readers see the old report or
    // the complete new one, never a prefix.
    fs::rename(tmp, target);
}

}  // namespace chowla_cli
