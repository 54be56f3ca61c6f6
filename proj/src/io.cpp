#include "fibtrace/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "fibtrace/error.hpp"

namespace fibtrace {

#ifndef FIBTRACE_VERSION
#define FIBTRACE_VERSION "dev"
#endif

const char* toolkit_version() { return FIBTRACE_VERSION; }

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

namespace {

std::string cell(const nlohmann::json& v) {
    if (v.is_number_float()) return format_real(v.get<double>());
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    if (v.is_null()) return "";
    return v.dump();
}

// nlohmann writes nan/inf as null; keep them readable
nlohmann::json sanitize(const nlohmann::json& v) {
    if (v.is_number_float() && !std::isfinite(v.get<double>())) return format_real(v.get<double>());
    if (v.is_object() || v.is_array()) {
        nlohmann::json out = v.is_object() ? nlohmann::json::object() : nlohmann::json::array();
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (v.is_object())
                out[it.key()] = sanitize(it.value());
            else
                out.push_back(sanitize(*it));
        }
        return out;
    }
    return v;
}

void flatten(const std::string& prefix, const nlohmann::json& v, std::ostream& os) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) flatten(prefix.empty() ? it.key() : prefix + "." + it.key(), it.value(), os);
        return;
    }
    os << "# " << prefix << " = ";
    if (v.is_array()) {
        bool first = true;
        for (const auto& e : v) {
            if (!first) os << ';';
            os << cell(e);
            first = false;
        }
    } else {
        os << cell(v);
    }
    os << '\n';
}

}  // namespace

void write_json(std::ostream& os, const Document& d) {
    nlohmann::json j;
    j["tool"] = "fibtrace";
    j["version"] = toolkit_version();
    j["command"] = d.command;
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : d.config) cfg[k] = v;
    j["config"] = cfg;
    j["summary"] = d.summary;
    if (!d.table.columns.empty()) {
        j["columns"] = d.table.columns;
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& r : d.table.rows) rows.push_back(r);
        j["rows"] = rows;
    }
    os << sanitize(j).dump(2) << '\n';
}

void write_csv(std::ostream& os, const Document& d) {
    os << "# fibtrace " << toolkit_version() << '\n';
    os << "# command = " << d.command << '\n';
    nlohmann::json cfg = nlohmann::json::object();
    for (const auto& [k, v] : d.config) cfg[k] = v;
    flatten("config", cfg, os);
    flatten("summary", d.summary, os);
    for (std::size_t i = 0; i < d.table.columns.size(); ++i) os << (i ? "," : "") << d.table.columns[i];
    if (!d.table.columns.empty()) os << '\n';
    for (const auto& r : d.table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
        os << '\n';
    }
}

void write_document(const std::string& path, const Document& d) {
    bool csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
    if (path.empty() || path == "-") {
        write_json(std::cout, d);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + path);
    if (csv)
        write_csv(f, d);
    else
        write_json(f, d);
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace fibtrace
