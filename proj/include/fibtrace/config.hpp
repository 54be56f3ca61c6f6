#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include "json.hpp"

namespace fibtrace {

// invalid or missing configuration; the message names the offending field
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// INI-style config with [sections]. Every value read through a getter is
// recorded, so the resolved configuration can be written next to results.
class RunConfig {
public:
    RunConfig() = default;
    static RunConfig from_file(const std::string& path);
    static RunConfig from_string(const std::string& ini);

    // "section.key=value"
    void set(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    double real(const std::string& key, double def);
    long integer(const std::string& key, long def);
    bool flag(const std::string& key, bool def);
    std::string text(const std::string& key, const std::string& def);
    std::vector<double> reals(const std::string& key, const std::vector<double>& def);
    bool has(const std::string& key) const;

    // range checks that throw ConfigError naming the field
    double real_at_least(const std::string& key, double def, double lo);
    double real_in(const std::string& key, double def, double lo, double hi);
    long integer_in(const std::string& key, long def, long lo, long hi);

    const std::map<std::string, nlohmann::json>& resolved() const { return resolved_; }
    std::vector<std::string> unused_keys() const;

    std::string command;
    std::uint64_t seed = 1;

private:
    std::string raw(const std::string& key) const;
    boost::property_tree::ptree tree_;
    std::map<std::string, nlohmann::json> resolved_;
};

}  // namespace fibtrace
