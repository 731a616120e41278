#pragma once

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace testsupport {

using nlohmann::json;

// Structural validator for the draft-07 subset the shipped schemas use:
// type, properties, required, items, enum, minimum.
inline void validate_into(const json& schema, const json& value, const std::string& path,
                          std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const std::string t = schema["type"].get<std::string>();
        bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                  (t == "string" && value.is_string()) ||
                  (t == "boolean" && value.is_boolean()) ||
                  (t == "integer" && value.is_number_integer()) ||
                  (t == "number" && value.is_number());
        if (!ok) {
            errors.push_back(path + ": expected type " + t);
            return;
        }
    }
    if (schema.contains("enum")) {
        bool found = false;
        for (const auto& e : schema["enum"])
            if (e == value) {
                found = true;
                break;
            }
        if (!found) errors.push_back(path + ": value not in enum");
    }
    if (schema.contains("minimum") && value.is_number()) {
        if (value.get<double>() < schema["minimum"].get<double>())
            errors.push_back(path + ": below minimum");
    }
    if (schema.contains("required") && value.is_object())
        for (const auto& r : schema["required"])
            if (!value.contains(r.get<std::string>()))
                errors.push_back(path + ": missing required key " + r.get<std::string>());
    if (schema.contains("properties") && value.is_object())
        for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
            if (value.contains(it.key()))
                validate_into(it.value(), value.at(it.key()), path + "." + it.key(), errors);
    if (schema.contains("items") && value.is_array())
        for (std::size_t i = 0; i < value.size(); ++i)
            validate_into(schema["items"], value[i], path + "[" + std::to_string(i) + "]",
                          errors);
}

inline std::vector<std::string> validate(const json& schema, const json& value) {
    std::vector<std::string> errors;
    validate_into(schema, value, "$", errors);
    return errors;
}

} // namespace testsupport
