#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lwmi/errors.hpp"
#include "lwmi/rational.hpp"

namespace lwmi {

using Json = nlohmann::json;

namespace detail {

// SAX handler that stores every float-looking number as its raw token
// string, so "0.1" survives as the exact rational 1/10 instead of the
// nearest double. Integers stay integers.
class ExactJsonSax : public nlohmann::json_sax<Json> {
  public:
    Json root;

    bool null() override { return add(Json(nullptr)); }
    bool boolean(bool v) override { return add(Json(v)); }
    bool number_integer(number_integer_t v) override { return add(Json(v)); }
    bool number_unsigned(number_unsigned_t v) override { return add(Json(v)); }
    bool number_float(number_float_t, const string_t& raw) override { return add(Json(raw)); }
    bool string(string_t& v) override { return add(Json(v)); }
    bool binary(binary_t&) override { throw input_error("binary values are not valid here"); }

    bool start_object(std::size_t) override {
        open(Json::object());
        return true;
    }
    bool key(string_t& k) override {
        key_ = k;
        return true;
    }
    bool end_object() override {
        stack_.pop_back();
        return true;
    }
    bool start_array(std::size_t) override {
        open(Json::array());
        return true;
    }
    bool end_array() override {
        stack_.pop_back();
        return true;
    }

    bool parse_error(std::size_t position, const std::string&,
                     const nlohmann::detail::exception& ex) override {
        throw input_error("JSON syntax error at byte " + std::to_string(position) + ": " + ex.what());
    }

  private:
    std::vector<Json*> stack_;
    std::string key_;

    bool add(Json v) {
        slot() = std::move(v);
        return true;
    }

    void open(Json v) {
        Json& j = slot();
        j = std::move(v);
        stack_.push_back(&j);
    }

    Json& slot() {
        if (stack_.empty()) return root;
        Json& top = *stack_.back();
        if (top.is_object()) return top[key_];
        top.push_back(Json(nullptr));
        return top.back();
    }
};

} // namespace detail

inline Json parse_json_exact(std::string_view text) {
    detail::ExactJsonSax sax;
    Json::sax_parse(text, &sax);
    return std::move(sax.root);
}

// Numeric fields accept integers or strings; strings may be "p/q",
// decimal or scientific, all parsed exactly.
inline Rat json_to_rat(const Json& v, const std::string& where) {
    if (v.is_string()) return rat_parse(v.get_ref<const std::string&>());
    if (v.is_number_integer()) return Rat(Int(v.get<std::int64_t>()));
    if (v.is_number_unsigned()) return Rat(Int(v.get<std::uint64_t>()));
    if (v.is_number_float()) return Rat(v.get<double>());
    throw input_error(where + ": expected a number or numeric string");
}

inline std::uint64_t json_to_uint(const Json& v, const std::string& where) {
    Rat r = json_to_rat(v, where);
    if (r < 0 || rat_den(r) != 1)
        throw input_error(where + ": expected a non-negative integer");
    Int n = rat_num(r);
    if (n > Int(UINT64_MAX)) throw input_error(where + ": value too large");
    return n.convert_to<std::uint64_t>();
}

} // namespace lwmi
