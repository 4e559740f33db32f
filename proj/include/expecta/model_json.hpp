#pragma once

/// @file model_json.hpp
/// The model document format: a JSON object carrying the proposition list,
/// the world list with truth assignments, and one measure of any of the four
/// classes. Rationals travel as strings "a" or "a/b"; mass keys are
/// comma-joined world ids.

#include "expecta/measures.hpp"
#include "expecta/rational.hpp"
#include "expecta/space.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace expecta {

struct ParsedModel {
    SpacePtr space;
    UncertaintyModel model;
};

namespace detail {

inline Rat rat_from_json(const nlohmann::json& j, const std::string& where) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    throw ModelError(where + ": rationals must be strings like \"3/4\" (or integers)");
}

inline std::map<std::string, std::size_t> world_index_map(const AtomSpace& space) {
    std::map<std::string, std::size_t> out;
    for (std::size_t w = 0; w < space.world_count(); ++w) out[space.world_id(w)] = w;
    return out;
}

inline SpacePtr space_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ModelError("model space must be a JSON object");
    if (!j.contains("props") || !j.at("props").is_array())
        throw ModelError("model space needs a \"props\" array");
    if (!j.contains("worlds") || !j.at("worlds").is_array())
        throw ModelError("model space needs a \"worlds\" array");
    std::vector<std::string> props;
    for (const auto& p : j.at("props")) {
        if (!p.is_string()) throw ModelError("proposition names must be strings");
        props.push_back(p.get<std::string>());
    }
    std::vector<World> worlds;
    for (const auto& wj : j.at("worlds")) {
        if (!wj.is_object() || !wj.contains("id") || !wj.at("id").is_string())
            throw ModelError("each world needs a string \"id\"");
        World world;
        world.id = wj.at("id").get<std::string>();
        const auto assign = wj.value("assign", nlohmann::json::object());
        if (!assign.is_object())
            throw ModelError("world '" + world.id + "': \"assign\" must be an object");
        for (const auto& [name, value] : assign.items()) {
            if (!value.is_boolean())
                throw ModelError("world '" + world.id + "': assignment of '" + name +
                                 "' must be a boolean");
            std::size_t index = props.size();
            for (std::size_t k = 0; k < props.size(); ++k)
                if (props[k] == name) index = k;
            if (index == props.size())
                throw ModelError("world '" + world.id + "' assigns unknown proposition '" + name +
                                 "'");
            if (value.get<bool>()) world.assign |= std::uint64_t(1) << index;
        }
        for (std::size_t k = 0; k < props.size(); ++k)
            if (!assign.contains(props[k]))
                throw ModelError("world '" + world.id + "' is missing an assignment for '" +
                                 props[k] + "'");
        worlds.push_back(std::move(world));
    }
    return std::make_shared<const AtomSpace>(std::move(props), std::move(worlds));
}

inline std::vector<Rat> world_values_from_json(const AtomSpace& space, const nlohmann::json& j,
                                               const std::string& where) {
    if (!j.is_object()) throw ModelError(where + " must map world ids to rationals");
    const auto index = world_index_map(space);
    std::vector<Rat> values(space.world_count(), Rat(0));
    for (const auto& [id, value] : j.items()) {
        const auto it = index.find(id);
        if (it == index.end()) throw ModelError(where + ": unknown world id '" + id + "'");
        values[it->second] = rat_from_json(value, where + "[" + id + "]");
    }
    return values;
}

inline WorldSet world_set_from_key(const AtomSpace& space, const std::string& key) {
    const auto index = world_index_map(space);
    WorldSet set = 0;
    std::size_t start = 0;
    if (key.empty()) return 0;
    while (start <= key.size()) {
        const std::size_t comma = key.find(',', start);
        const std::string id =
            key.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto it = index.find(id);
        if (it == index.end())
            throw ModelError("mass key '" + key + "': unknown world id '" + id + "'");
        const WorldSet bit = WorldSet(1) << it->second;
        if (set & bit) throw ModelError("mass key '" + key + "': world id '" + id + "' repeats");
        set |= bit;
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return set;
}

inline UncertaintyModel measure_from_json(const SpacePtr& space, const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
        throw ModelError("measure needs a string \"type\"");
    const std::string type = j.at("type").get<std::string>();
    if (type == "probability") {
        if (!j.contains("values")) throw ModelError("probability measure needs \"values\"");
        return ProbabilityMeasure(unchecked, space,
                                  world_values_from_json(*space, j.at("values"), "values"));
    }
    if (type == "credal") {
        if (!j.contains("measures") || !j.at("measures").is_array())
            throw ModelError("credal measure needs a \"measures\" array");
        std::vector<ProbabilityMeasure> measures;
        for (const auto& mj : j.at("measures"))
            measures.emplace_back(unchecked, space,
                                  world_values_from_json(*space, mj, "measures entry"));
        return CredalSet(unchecked, space, std::move(measures));
    }
    if (type == "mass") {
        if (!j.contains("masses") || !j.at("masses").is_object())
            throw ModelError("mass measure needs a \"masses\" object");
        std::map<WorldSet, Rat> masses;
        for (const auto& [key, value] : j.at("masses").items()) {
            const WorldSet set = world_set_from_key(*space, key);
            if (masses.count(set))
                throw ModelError("mass key '" + key + "' repeats an earlier subset");
            masses[set] = rat_from_json(value, "masses[" + key + "]");
        }
        return MassFunction(unchecked, space, std::move(masses));
    }
    if (type == "possibility") {
        if (!j.contains("values")) throw ModelError("possibility measure needs \"values\"");
        return PossibilityMeasure(unchecked, space,
                                  world_values_from_json(*space, j.at("values"), "values"));
    }
    throw ModelError("unknown measure type '" + type +
                     "' (expected probability, credal, mass, or possibility)");
}

}  // namespace detail

/// Parses a model document without validating measure axioms. Structural
/// problems (malformed JSON, unknown ids, bad rationals) still throw.
inline ParsedModel parse_model_unchecked(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model document is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ModelError("model document must be a JSON object");
    auto space = detail::space_from_json(j);
    if (!j.contains("measure")) throw ModelError("model document needs a \"measure\"");
    auto model = detail::measure_from_json(space, j.at("measure"));
    return ParsedModel{std::move(space), std::move(model)};
}

/// Parses and validates a model document; rejects axiom violations with the
/// validate_model report in the error message.
inline ParsedModel parse_model(const std::string& text) {
    auto parsed = parse_model_unchecked(text);
    const auto violations = validate_model(parsed.model);
    if (!violations.empty()) throw ModelError("invalid model; " + describe(violations));
    return parsed;
}

namespace detail {

inline nlohmann::json space_to_json(const AtomSpace& space) {
    nlohmann::json j;
    j["props"] = space.props();
    nlohmann::json worlds = nlohmann::json::array();
    for (std::size_t w = 0; w < space.world_count(); ++w) {
        nlohmann::json wj;
        wj["id"] = space.world_id(w);
        nlohmann::json assign;
        for (std::size_t k = 0; k < space.prop_count(); ++k)
            assign[space.props()[k]] = space.truth(w, k);
        wj["assign"] = std::move(assign);
        worlds.push_back(std::move(wj));
    }
    j["worlds"] = std::move(worlds);
    return j;
}

inline std::string world_set_key(const AtomSpace& space, WorldSet set) {
    std::string key;
    for (std::size_t w = 0; w < space.world_count(); ++w) {
        if (!contains(set, w)) continue;
        if (!key.empty()) key += ',';
        key += space.world_id(w);
    }
    return key;
}

inline nlohmann::json world_values_to_json(const AtomSpace& space, const std::vector<Rat>& values) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t w = 0; w < space.world_count(); ++w)
        j[space.world_id(w)] = to_string(values[w]);
    return j;
}

inline nlohmann::json measure_to_json(const AtomSpace& space, const UncertaintyModel& model) {
    nlohmann::json j;
    if (const auto* mu = std::get_if<ProbabilityMeasure>(&model)) {
        j["type"] = "probability";
        j["values"] = world_values_to_json(space, mu->values());
    } else if (const auto* credal = std::get_if<CredalSet>(&model)) {
        j["type"] = "credal";
        nlohmann::json list = nlohmann::json::array();
        for (const auto& mu2 : credal->measures())
            list.push_back(world_values_to_json(space, mu2.values()));
        j["measures"] = std::move(list);
    } else if (const auto* mass = std::get_if<MassFunction>(&model)) {
        j["type"] = "mass";
        nlohmann::json masses = nlohmann::json::object();
        for (const auto& [set, value] : mass->masses())
            masses[world_set_key(space, set)] = to_string(value);
        j["masses"] = std::move(masses);
    } else if (const auto* poss = std::get_if<PossibilityMeasure>(&model)) {
        j["type"] = "possibility";
        j["values"] = world_values_to_json(space, poss->values());
    }
    return j;
}

}  // namespace detail

/// Model document JSON for a space/measure pair. Deterministic: worlds keep
/// space order, object keys serialize sorted.
inline nlohmann::json model_to_json(const SpacePtr& space, const UncertaintyModel& model) {
    nlohmann::json j = detail::space_to_json(*space);
    j["measure"] = detail::measure_to_json(*space, model);
    return j;
}

inline std::string serialize_model(const SpacePtr& space, const UncertaintyModel& model) {
    return model_to_json(space, model).dump(2);
}

}  // namespace expecta
