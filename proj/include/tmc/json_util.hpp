#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tmc/errors.hpp"
#include "tmc/grid.hpp"

namespace tmc {

using json = nlohmann::json;

namespace jsonio {

inline std::string key_path(const std::string& path, const std::string& key) { return path + "." + key; }
inline std::string index_path(const std::string& path, size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline const json& field(const json& j, const std::string& key, const std::string& path)
{
    if (!j.is_object()) throw InputError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(path + ": missing key '" + key + "'");
    return *it;
}

inline const json& array_at(const json& j, const std::string& path)
{
    if (!j.is_array()) throw InputError(path + ": expected an array");
    return j;
}

inline long long as_int(const json& j, const std::string& path)
{
    if (!j.is_number_integer()) throw InputError(path + ": expected an integer");
    return j.get<long long>();
}

inline int int_field(const json& j, const std::string& key, const std::string& path, int lo = 0)
{
    long long v = as_int(field(j, key, path), key_path(path, key));
    if (v < lo || v > 1000000) throw InputError(key_path(path, key) + ": value " + std::to_string(v) + " out of range");
    return static_cast<int>(v);
}

inline bool bool_field(const json& j, const std::string& key, const std::string& path, bool dflt)
{
    if (!j.is_object()) throw InputError(path + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) return dflt;
    if (!it->is_boolean()) throw InputError(key_path(path, key) + ": expected a boolean");
    return it->get<bool>();
}

inline std::string as_string(const json& j, const std::string& path)
{
    if (!j.is_string()) throw InputError(path + ": expected a string");
    return j.get<std::string>();
}

inline Coord as_coord(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2) throw InputError(path + ": expected [row, col]");
    return {static_cast<int>(as_int(j[0], index_path(path, 0))), static_cast<int>(as_int(j[1], index_path(path, 1)))};
}

inline Edge as_edge(const json& j, const std::string& path)
{
    if (!j.is_array() || j.size() != 2) throw InputError(path + ": expected [[r,c],[r,c]]");
    Coord a = as_coord(j[0], index_path(path, 0));
    Coord b = as_coord(j[1], index_path(path, 1));
    if (!adjacent(a, b)) throw InputError(path + ": endpoints are not adjacent");
    return Edge(a, b);
}

inline EdgeSet as_edge_set(const json& j, const std::string& path)
{
    array_at(j, path);
    EdgeSet out;
    for (size_t i = 0; i < j.size(); ++i) out.insert(as_edge(j[i], index_path(path, i)));
    return out;
}

inline std::vector<Coord> as_coord_list(const json& j, const std::string& path)
{
    array_at(j, path);
    std::vector<Coord> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(as_coord(j[i], index_path(path, i)));
    return out;
}

inline Dir as_dir(const json& j, const std::string& path)
{
    Dir d;
    if (!parse_dir(as_string(j, path), d)) throw InputError(path + ": unknown direction '" + j.get<std::string>() + "'");
    return d;
}

inline json coord_json(Coord p) { return json::array({p.row, p.col}); }
inline json edge_json(const Edge& e) { return json::array({coord_json(e.a), coord_json(e.b)}); }

inline json edge_set_json(const EdgeSet& es)
{
    json a = json::array();
    for (const Edge& e : es) a.push_back(edge_json(e));
    return a;
}

inline json coord_list_json(const std::vector<Coord>& ps)
{
    json a = json::array();
    for (Coord p : ps) a.push_back(coord_json(p));
    return a;
}

inline json transform_json(const D4Transform& t) { return json{{"rotation", t.rotation}, {"reflected", t.reflected}}; }

inline D4Transform as_transform(const json& j, const std::string& path)
{
    D4Transform t;
    t.rotation = int_field(j, "rotation", path);
    if (t.rotation % 90 || t.rotation >= 360) throw InputError(key_path(path, "rotation") + ": must be 0, 90, 180 or 270");
    t.reflected = bool_field(j, "reflected", path, false);
    return t;
}

inline json parse_text(const std::string& text, const std::string& origin)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ": " + e.what());
    }
}

} // namespace jsonio
} // namespace tmc
