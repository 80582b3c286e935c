#include "lrace/render.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace lrace {

std::string format_double(double x) {
    std::array<char, 64> buf;
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (const char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char esc[8];
                    std::snprintf(esc, sizeof esc, "\\u%04x", ch);
                    out += esc;
                } else {
                    out += ch;
                }
        }
    }
    return out;
}

void JsonWriter::element_prefix() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!first_in_scope_.empty()) {
        if (!first_in_scope_.back()) {
            raw(",");
        }
        first_in_scope_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    element_prefix();
    raw("{");
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    raw("}");
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    element_prefix();
    raw("[");
    first_in_scope_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    raw("]");
    first_in_scope_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
    element_prefix();
    raw("\"");
    raw(json_escape(name));
    raw("\":");
    after_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double x) {
    if (!std::isfinite(x)) {
        return null();
    }
    element_prefix();
    raw(format_double(x));
    return *this;
}

JsonWriter& JsonWriter::value(int x) { return value(static_cast<long long>(x)); }

JsonWriter& JsonWriter::value(long long x) {
    element_prefix();
    raw(std::to_string(x));
    return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t x) {
    element_prefix();
    raw(std::to_string(x));
    return *this;
}

JsonWriter& JsonWriter::value(bool b) {
    element_prefix();
    raw(b ? "true" : "false");
    return *this;
}

JsonWriter& JsonWriter::value(std::string_view s) {
    element_prefix();
    raw("\"");
    raw(json_escape(s));
    raw("\"");
    return *this;
}

JsonWriter& JsonWriter::null() {
    element_prefix();
    raw("null");
    return *this;
}

}  // namespace lrace
