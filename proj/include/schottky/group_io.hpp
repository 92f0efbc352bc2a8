#pragma once

#include <string>

#include "schottky/schottky.hpp"

namespace schottky {

// Group config schema:
//   {"name": "...", "r": 2,
//    "intervals": [[lo,hi], ... 2r entries],
//    "generators": [[[a,b],[c,d]], ... r or 2r entries]}
// When only r generators are given, the second half is derived as inverses.
SchottkyData load_group(const std::string& path);
SchottkyData group_from_json_text(const std::string& text);

std::string group_to_json_text(const SchottkyData& data);
void save_group(const SchottkyData& data, const std::string& path);

} // namespace schottky
