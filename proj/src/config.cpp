#include "fibtrace/config.hpp"
#include "fibtrace/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>

namespace fibtrace {

namespace {
std::string path_of(const std::string& key) { return key; }

double parse_real(const std::string& key, const std::string& s) {
    std::string t = boost::algorithm::trim_copy(s);
    double v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError("invalid config: " + key + " is not a finite number ('" + s + "')");
    return v;
}

long parse_integer(const std::string& key, const std::string& s) {
    std::string t = boost::algorithm::trim_copy(s);
    long v = 0;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || p != t.data() + t.size())
        throw ConfigError("invalid config: " + key + " is not an integer ('" + s + "')");
    return v;
}
}  // namespace

RunConfig RunConfig::from_string(const std::string& ini) {
    RunConfig c;
    std::istringstream in(ini);
    try {
        boost::property_tree::ini_parser::read_ini(in, c.tree_);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(std::string("invalid config file: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return from_string(ss.str());
}

void RunConfig::set(const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like section.key=value: " + assignment);
    set(boost::algorithm::trim_copy(assignment.substr(0, eq)), boost::algorithm::trim_copy(assignment.substr(eq + 1)));
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (key.find('.') == std::string::npos) throw ConfigError("override key needs a section: " + key);
    tree_.put(path_of(key), value);
}

bool RunConfig::has(const std::string& key) const { return tree_.get_optional<std::string>(path_of(key)).has_value(); }

std::string RunConfig::raw(const std::string& key) const { return *tree_.get_optional<std::string>(path_of(key)); }

double RunConfig::real(const std::string& key, double def) {
    double v = has(key) ? parse_real(key, raw(key)) : def;
    resolved_[key] = v;
    return v;
}

long RunConfig::integer(const std::string& key, long def) {
    long v = has(key) ? parse_integer(key, raw(key)) : def;
    resolved_[key] = v;
    return v;
}

bool RunConfig::flag(const std::string& key, bool def) {
    bool v = def;
    if (has(key)) {
        std::string s = boost::algorithm::to_lower_copy(boost::algorithm::trim_copy(raw(key)));
        if (s == "true" || s == "1" || s == "yes" || s == "on")
            v = true;
        else if (s == "false" || s == "0" || s == "no" || s == "off")
            v = false;
        else
            throw ConfigError("invalid config: " + key + " is not a boolean ('" + s + "')");
    }
    resolved_[key] = v;
    return v;
}

std::string RunConfig::text(const std::string& key, const std::string& def) {
    std::string v = has(key) ? boost::algorithm::trim_copy(raw(key)) : def;
    resolved_[key] = v;
    return v;
}

std::vector<double> RunConfig::reals(const std::string& key, const std::vector<double>& def) {
    std::vector<double> v = def;
    if (has(key)) {
        v.clear();
        std::vector<std::string> parts;
        std::string s = raw(key);
        boost::algorithm::split(parts, s, boost::algorithm::is_any_of(","));
        for (const auto& p : parts)
            if (!boost::algorithm::trim_copy(p).empty()) v.push_back(parse_real(key, p));
        if (v.empty()) throw ConfigError("invalid config: " + key + " is an empty list");
    }
    resolved_[key] = v;
    return v;
}

double RunConfig::real_at_least(const std::string& key, double def, double lo) {
    double v = real(key, def);
    if (!(v >= lo)) throw ConfigError("invalid config: " + key + " must be >= " + format_real(lo) + " (got " + format_real(v) + ")");
    return v;
}

double RunConfig::real_in(const std::string& key, double def, double lo, double hi) {
    double v = real(key, def);
    if (!(v >= lo && v <= hi))
        throw ConfigError("invalid config: " + key + " must lie in [" + format_real(lo) + ", " + format_real(hi) +
                          "] (got " + format_real(v) + ")");
    return v;
}

long RunConfig::integer_in(const std::string& key, long def, long lo, long hi) {
    long v = integer(key, def);
    if (v < lo || v > hi)
        throw ConfigError("invalid config: " + key + " must lie in [" + format_real(lo) + ", " + format_real(hi) +
                          "] (got " + format_real(v) + ")");
    return v;
}

std::vector<std::string> RunConfig::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [sec, body] : tree_)
        for (const auto& [k, v] : body) {
            std::string key = sec + "." + k;
            if (!resolved_.count(key)) out.push_back(key);
        }
    return out;
}

}  // namespace fibtrace
