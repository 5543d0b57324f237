#pragma once

// Deterministic JSON rendering: insertion-ordered objects, doubles printed as
// plain decimals with 17 significant digits so that parse -> re-render is
// byte-identical.

#include <cstdio>
#include <string>

#include <json.hpp>

namespace mbounds {

using ordered_json = nlohmann::ordered_json;

namespace detail {

inline void render_value(const ordered_json& v, std::string& out, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
    const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
    switch (v.type()) {
        case ordered_json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in + ordered_json(it.key()).dump() + ": ";
                render_value(it.value(), out, indent, depth + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case ordered_json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& item : v) {
                if (!first) out += ",\n";
                first = false;
                out += pad_in;
                render_value(item, out, indent, depth + 1);
            }
            out += "\n" + pad + "]";
            return;
        }
        case ordered_json::value_t::number_float: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
            out += buf;
            return;
        }
        default:
            out += v.dump();
            return;
    }
}

} // namespace detail

inline std::string render_json(const ordered_json& v) {
    std::string out;
    detail::render_value(v, out, 2, 0);
    out += "\n";
    return out;
}

} // namespace mbounds
