#pragma once

#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "floc/profile.hpp"

namespace floc {

using Json = nlohmann::ordered_json;

// Rationals travel as strings ("3", "-3", "13/12") so round-trips stay exact.
inline Json rat_to_json(const Rat& r) { return rat_str(r); }

inline Rat rat_from_json(const Json& j) {
    if (j.is_number_integer()) return Rat((long long)j);
    if (j.is_string()) {
        auto r = parse_rat(j.get<std::string>());
        if (r) return *r;
    }
    throw std::invalid_argument("expected a rational (integer or \"num/den\" string)");
}

inline Json profile_to_json(const Profile& a) { return Json(a); }

inline Profile profile_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("profile must be an array of vertex indices");
    Profile a;
    for (const Json& e : j) {
        if (!e.is_number_integer()) throw std::invalid_argument("profile entries must be integers");
        a.push_back((int)e);
    }
    return a;
}

inline Json lottery_to_json(const Lottery& f) {
    Json out = Json::array();
    for (auto& [v, p] : f.mass) out.push_back(Json::array({v, rat_to_json(p)}));
    return out;
}

inline Lottery lottery_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("lottery must be an array of [vertex, prob]");
    Lottery f;
    for (const Json& e : j) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("lottery entry must be [vertex, prob]");
        f.add((int)e[0], rat_from_json(e[1]));
    }
    return f;
}

// Spaces serialize by construction recipe, not by distance matrix: a circle is
// its size, a graph its edge list. Edges carry split numerator/denominator so
// the JSON stays tool-friendly.
inline Json space_to_json(const MetricSpace& s) {
    Json out;
    out["kind"] = kind_name(s.kind());
    if (s.kind() == SpaceKind::Circle) {
        out["m"] = s.circle_size();
        return out;
    }
    out["n"] = s.size();
    Json es = Json::array();
    for (const Edge& e : s.edges())
        es.push_back(Json::array({e.u, e.v, (long long)(Int)rat_num(e.len),
                                  (long long)(Int)rat_den(e.len)}));
    out["edges"] = std::move(es);
    return out;
}

inline MetricSpace space_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("space JSON needs a \"kind\"");
    std::string kind = j["kind"];
    if (kind == "circle") return make_circle((int)j.at("m"));
    if (kind != "graph") throw std::invalid_argument("unknown space kind: " + kind);
    std::vector<Edge> es;
    for (const Json& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 4)
            throw std::invalid_argument("edge must be [u, v, len_num, len_den]");
        es.push_back({(int)e[0], (int)e[1], Rat(Int((long long)e[2]), Int((long long)e[3]))});
    }
    return make_graph((int)j.at("n"), es);
}

// Graph file loader. JSON form: {"n": 6, "edges": [[u, v, len_num, len_den], ...]}.
// Plain-text fallback: first token is the vertex count, then one edge per
// line as "u v len" with len an integer or num/den fraction.
inline MetricSpace load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw std::invalid_argument("empty graph file: " + path);
    if (text[first] == '{') {
        Json j = Json::parse(text);
        j["kind"] = "graph";
        return space_from_json(j);
    }
    std::istringstream is(text);
    int n = 0;
    if (!(is >> n)) throw std::invalid_argument("graph file must start with the vertex count");
    std::vector<Edge> es;
    int u, v;
    std::string len;
    while (is >> u >> v >> len) {
        auto r = parse_rat(len);
        if (!r) throw std::invalid_argument("bad edge length: " + len);
        es.push_back({u, v, *r});
    }
    if (!is.eof()) throw std::invalid_argument("trailing garbage in graph file: " + path);
    return make_graph(n, es);
}

// Structural schema checker covering the subset the published report schemas
// use: type, const, enum, required, properties, additionalProperties (bool),
// items (one schema for all elements), minItems, pattern (full match).
// Returns human-readable violations; empty means the instance conforms.
inline void schema_errors_rec(const Json& schema, const Json& value, const std::string& path,
                              std::vector<std::string>& out) {
    auto fail = [&](const std::string& msg) { out.push_back(path + ": " + msg); };
    if (schema.contains("type")) {
        auto matches = [&](const std::string& t) {
            if (t == "object") return value.is_object();
            if (t == "array") return value.is_array();
            if (t == "string") return value.is_string();
            if (t == "integer") return value.is_number_integer();
            if (t == "number") return value.is_number();
            if (t == "boolean") return value.is_boolean();
            if (t == "null") return value.is_null();
            return false;
        };
        const Json& ty = schema["type"];
        bool ok = ty.is_array() ? std::any_of(ty.begin(), ty.end(),
                                              [&](const Json& t) { return matches(t); })
                                : matches(ty.get<std::string>());
        if (!ok) {
            fail("expected type " + ty.dump() + ", got " + std::string(value.type_name()));
            return;  // the remaining keywords assume the type held
        }
    }
    if (schema.contains("const") && value != schema["const"])
        fail("expected constant " + schema["const"].dump() + ", got " + value.dump());
    if (schema.contains("enum")) {
        const Json& en = schema["enum"];
        if (std::none_of(en.begin(), en.end(), [&](const Json& e) { return e == value; }))
            fail("value " + value.dump() + " not in enum " + en.dump());
    }
    if (schema.contains("pattern") && value.is_string()) {
        std::regex re(schema["pattern"].get<std::string>());
        if (!std::regex_match(value.get<std::string>(), re))
            fail("string " + value.dump() + " does not match " + schema["pattern"].dump());
    }
    if (value.is_object()) {
        if (schema.contains("required"))
            for (const Json& k : schema["required"])
                if (!value.contains(k.get<std::string>()))
                    fail("missing required key \"" + k.get<std::string>() + "\"");
        const Json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (props && props->contains(it.key())) {
                schema_errors_rec((*props)[it.key()], it.value(), path + "/" + it.key(), out);
            } else if (schema.contains("additionalProperties") &&
                       schema["additionalProperties"] == false) {
                fail("unexpected key \"" + it.key() + "\"");
            }
        }
    }
    if (value.is_array()) {
        if (schema.contains("minItems") && value.size() < (size_t)schema["minItems"])
            fail("array has " + std::to_string(value.size()) + " items, needs at least " +
                 schema["minItems"].dump());
        if (schema.contains("items")) {
            size_t i = 0;
            for (const Json& e : value)
                schema_errors_rec(schema["items"], e, path + "/" + std::to_string(i++), out);
        }
    }
}

inline std::vector<std::string> schema_errors(const Json& schema, const Json& value) {
    std::vector<std::string> out;
    schema_errors_rec(schema, value, "$", out);
    return out;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open JSON file: " + path);
    return Json::parse(in);
}

}  // namespace floc
