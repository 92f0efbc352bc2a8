#include "schottky/group_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace schottky {

using nlohmann::json;

namespace {

MobiusTransform matrix_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
        throw ConfigError("group config: generator must be a 2x2 matrix");
    return MobiusTransform(j[0][0].get<double>(), j[0][1].get<double>(),
                           j[1][0].get<double>(), j[1][1].get<double>());
}

json matrix_to_json(const MobiusTransform& g) {
    return json::array({json::array({g.a, g.b}), json::array({g.c, g.d})});
}

} // namespace

SchottkyData group_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("group config: ") + e.what());
    }
    SchottkyData data;
    try {
        data.r = j.at("r").get<int>();
        data.name = j.value("name", "");
        for (const auto& ij : j.at("intervals"))
            data.intervals.emplace_back(ij.at(0).get<double>(), ij.at(1).get<double>());
        if (data.intervals.size() != static_cast<size_t>(2 * data.r))
            throw ConfigError("group config: expected 2r intervals");
        const auto& gens = j.at("generators");
        for (const auto& gj : gens) data.generators.push_back(matrix_from_json(gj));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("group config: ") + e.what());
    }
    if (data.generators.size() == static_cast<size_t>(data.r)) {
        for (int a = 1; a <= data.r; ++a)
            data.generators.push_back(data.generators[a - 1].inverse());
    }
    if (data.generators.size() != static_cast<size_t>(2 * data.r))
        throw ConfigError("group config: expected r or 2r generators");
    return data;
}

SchottkyData load_group(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("group config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return group_from_json_text(buf.str());
}

std::string group_to_json_text(const SchottkyData& data) {
    json j;
    if (!data.name.empty()) j["name"] = data.name;
    j["r"] = data.r;
    j["intervals"] = json::array();
    for (const auto& I : data.intervals) j["intervals"].push_back(json::array({I.lo, I.hi}));
    j["generators"] = json::array();
    for (const auto& g : data.generators) j["generators"].push_back(matrix_to_json(g));
    return j.dump(2) + "\n";
}

void save_group(const SchottkyData& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("group config: cannot write " + path);
    out << group_to_json_text(data);
}

} // namespace schottky
