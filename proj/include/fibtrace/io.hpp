#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace fibtrace {

// shortest round-trip decimal form, '.' separator regardless of locale
std::string format_real(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
    void add(std::vector<nlohmann::json> row) { rows.push_back(std::move(row)); }
};

// one output file: header (tool version, command, resolved config), a summary
// object and an optional table
struct Document {
    std::string command;
    std::map<std::string, nlohmann::json> config;
    nlohmann::json summary = nlohmann::json::object();
    Table table;
};

const char* toolkit_version();

void write_json(std::ostream& os, const Document& d);
// summary and config go into '#' comment lines above the table
void write_csv(std::ostream& os, const Document& d);

// picks the format from the extension (.csv, otherwise JSON); "-" or "" is stdout
void write_document(const std::string& path, const Document& d);

}  // namespace fibtrace
