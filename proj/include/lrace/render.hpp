#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lrace {

/// Locale-independent shortest form at 17 significant digits; the same
/// value always renders to the same bytes, which is what makes command
/// output byte-stable across runs.
std::string format_double(double x);

/// Minimal streaming JSON writer with a fixed, caller-controlled field
/// order. Doubles are rendered by format_double; non-finite values become
/// null (JSON has no nan/inf).
class JsonWriter {
public:
    explicit JsonWriter(std::string* out) : out_(out) {}

    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(std::string_view name);
    JsonWriter& value(double x);
    JsonWriter& value(int x);
    JsonWriter& value(long long x);
    JsonWriter& value(std::uint64_t x);
    JsonWriter& value(bool b);
    JsonWriter& value(std::string_view s);
    JsonWriter& null();

private:
    void element_prefix();
    void raw(std::string_view s) { out_->append(s); }

    std::string* out_;
    std::vector<bool> first_in_scope_;
    bool after_key_ = false;
};

std::string json_escape(std::string_view s);

}  // namespace lrace
