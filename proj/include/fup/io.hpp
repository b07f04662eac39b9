#pragma once

#include "fup/covers.hpp"
#include "fup/schottky.hpp"

#include <json.hpp>

namespace fup {

using json = nlohmann::json;

/// {r, intervals: [[a,b],...], generators: [[[a,b],[c,d]],...]}
json schottky_to_json(const SchottkyData& data);
SchottkyData schottky_from_json(const json& j);

/// {intervals: [[a,b],...], weights?: [...]}
json cover_to_json(const IntervalCover& cover, const std::vector<double>* weights = nullptr);
IntervalCover cover_from_json(const json& j, std::vector<double>* weights = nullptr);

/// Parses a file; throws InputError on missing files or malformed JSON.
json read_json_file(const std::string& path);

}  // namespace fup
