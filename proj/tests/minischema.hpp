#pragma once

// Small JSON Schema checker used to pin the shipped schemas against the
// tool's actual output. Supports the subset the schemas use: type, enum,
// properties, required, additionalProperties (bool or schema), items,
// minItems, maxItems, minimum, maximum, exclusiveMinimum,
// exclusiveMaximum, oneOf, and $ref into #/$defs.

#include <cstddef>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

namespace minischema {

class Validator {
public:
    explicit Validator(nlohmann::json schema) : root_(std::move(schema)) {}

    bool validate(const nlohmann::json& value, std::string& error) const {
        error.clear();
        return check(root_, value, "$", error);
    }

private:
    nlohmann::json root_;

    const nlohmann::json& resolve(const nlohmann::json& schema) const {
        if (schema.is_object() && schema.contains("$ref")) {
            const std::string ref = schema.at("$ref").get<std::string>();
            const std::string prefix = "#/$defs/";
            if (ref.rfind(prefix, 0) != 0) {
                throw std::runtime_error("unsupported $ref: " + ref);
            }
            return root_.at("$defs").at(ref.substr(prefix.size()));
        }
        return schema;
    }

    static bool fail(std::string& error, const std::string& path, const std::string& message) {
        error = path + ": " + message;
        return false;
    }

    static bool type_matches(const std::string& type, const nlohmann::json& v) {
        if (type == "object") return v.is_object();
        if (type == "array") return v.is_array();
        if (type == "string") return v.is_string();
        if (type == "number") return v.is_number();
        if (type == "integer") return v.is_number_integer();
        if (type == "boolean") return v.is_boolean();
        if (type == "null") return v.is_null();
        return false;
    }

    bool check(const nlohmann::json& raw, const nlohmann::json& v, const std::string& path,
               std::string& error) const {
        const nlohmann::json& schema = resolve(raw);
        if (schema.is_boolean()) {
            return schema.get<bool>() || fail(error, path, "schema forbids any value");
        }

        if (schema.contains("oneOf")) {
            std::size_t hits = 0;
            for (const auto& branch : schema.at("oneOf")) {
                std::string scratch;
                if (check(branch, v, path, scratch)) ++hits;
            }
            if (hits != 1) {
                return fail(error, path,
                            "oneOf matched " + std::to_string(hits) + " branches, expected 1");
            }
        }

        if (schema.contains("type")) {
            const auto& type = schema.at("type");
            bool ok = false;
            if (type.is_string()) {
                ok = type_matches(type.get<std::string>(), v);
            } else {
                for (const auto& t : type) {
                    if (type_matches(t.get<std::string>(), v)) {
                        ok = true;
                        break;
                    }
                }
            }
            if (!ok) return fail(error, path, "type mismatch, expected " + type.dump());
        }

        if (schema.contains("enum")) {
            bool ok = false;
            for (const auto& candidate : schema.at("enum")) {
                if (candidate == v) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return fail(error, path, "value not in enum " + schema.at("enum").dump());
        }

        if (v.is_number()) {
            const double x = v.get<double>();
            if (schema.contains("minimum") && x < schema.at("minimum").get<double>()) {
                return fail(error, path, "below minimum");
            }
            if (schema.contains("maximum") && x > schema.at("maximum").get<double>()) {
                return fail(error, path, "above maximum");
            }
            if (schema.contains("exclusiveMinimum") &&
                x <= schema.at("exclusiveMinimum").get<double>()) {
                return fail(error, path, "not above exclusiveMinimum");
            }
            if (schema.contains("exclusiveMaximum") &&
                x >= schema.at("exclusiveMaximum").get<double>()) {
                return fail(error, path, "not below exclusiveMaximum");
            }
        }

        if (v.is_object()) {
            if (schema.contains("required")) {
                for (const auto& name : schema.at("required")) {
                    if (!v.contains(name.get<std::string>())) {
                        return fail(error, path,
                                    "missing required property " + name.get<std::string>());
                    }
                }
            }
            const nlohmann::json empty_object = nlohmann::json::object();
            const auto& props =
                schema.contains("properties") ? schema.at("properties") : empty_object;
            for (const auto& [name, value] : v.items()) {
                const std::string child_path = path + "." + name;
                if (props.contains(name)) {
                    if (!check(props.at(name), value, child_path, error)) return false;
                } else if (schema.contains("additionalProperties")) {
                    const auto& extra = schema.at("additionalProperties");
                    if (extra.is_boolean()) {
                        if (!extra.get<bool>()) {
                            return fail(error, child_path, "unexpected property");
                        }
                    } else if (!check(extra, value, child_path, error)) {
                        return false;
                    }
                }
            }
        }

        if (v.is_array()) {
            if (schema.contains("minItems") &&
                v.size() < schema.at("minItems").get<std::size_t>()) {
                return fail(error, path, "fewer items than minItems");
            }
            if (schema.contains("maxItems") &&
                v.size() > schema.at("maxItems").get<std::size_t>()) {
                return fail(error, path, "more items than maxItems");
            }
            if (schema.contains("items")) {
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const std::string child_path = path + "[" + std::to_string(i) + "]";
                    if (!check(schema.at("items"), v[i], child_path, error)) return false;
                }
            }
        }

        return true;
    }
};

inline Validator load_validator(const std::string& schema_path) {
    std::ifstream in(schema_path);
    if (!in) throw std::runtime_error("cannot open schema: " + schema_path);
    nlohmann::json schema = nlohmann::json::parse(in);
    return Validator(std::move(schema));
}

} // namespace minischema
