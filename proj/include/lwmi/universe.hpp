#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lwmi/errors.hpp"
#include "lwmi/rational.hpp"

namespace lwmi {

struct RealVarDecl {
    std::string name;
    Rat lower;
    Rat upper;
};

// Declares the variables a problem ranges over: an ordered list of
// Boolean names and an ordered list of real names with rational box
// bounds. Formulas, weights and results all index into one Universe.
class Universe {
  public:
    Universe() = default;

    Universe(std::vector<std::string> bools, std::vector<RealVarDecl> reals)
        : bools_(std::move(bools)), reals_(std::move(reals)) {
        for (std::size_t i = 0; i < bools_.size(); ++i) {
            if (!bool_index_.emplace(bools_[i], i).second)
                throw input_error("duplicate boolean variable '" + bools_[i] + "'");
        }
        for (std::size_t i = 0; i < reals_.size(); ++i) {
            if (bool_index_.count(reals_[i].name))
                throw input_error("variable '" + reals_[i].name + "' declared as both boolean and real");
            if (!real_index_.emplace(reals_[i].name, i).second)
                throw input_error("duplicate real variable '" + reals_[i].name + "'");
            if (reals_[i].lower >= reals_[i].upper)
                throw input_error("real variable '" + reals_[i].name + "' needs lower < upper");
        }
    }

    std::size_t num_bools() const { return bools_.size(); }
    std::size_t num_reals() const { return reals_.size(); }

    const std::vector<std::string>& bool_names() const { return bools_; }
    const std::vector<RealVarDecl>& reals() const { return reals_; }

    const std::string& bool_name(std::size_t i) const { return bools_[i]; }
    const RealVarDecl& real(std::size_t i) const { return reals_[i]; }

    int find_bool(const std::string& name) const {
        auto it = bool_index_.find(name);
        return it == bool_index_.end() ? -1 : static_cast<int>(it->second);
    }
    int find_real(const std::string& name) const {
        auto it = real_index_.find(name);
        return it == real_index_.end() ? -1 : static_cast<int>(it->second);
    }

    // Volume of the bounding box, Prod_i (upper_i - lower_i).
    Rat box_volume() const {
        Rat v = 1;
        for (const auto& r : reals_) v *= r.upper - r.lower;
        return v;
    }

    bool same_shape(const Universe& o) const {
        if (bools_ != o.bools_ || reals_.size() != o.reals_.size()) return false;
        for (std::size_t i = 0; i < reals_.size(); ++i)
            if (reals_[i].name != o.reals_[i].name || reals_[i].lower != o.reals_[i].lower ||
                reals_[i].upper != o.reals_[i].upper)
                return false;
        return true;
    }

  private:
    std::vector<std::string> bools_;
    std::vector<RealVarDecl> reals_;
    std::map<std::string, std::size_t> bool_index_;
    std::map<std::string, std::size_t> real_index_;
};

using UniversePtr = std::shared_ptr<const Universe>;

// One total truth assignment to the Boolean variables.
class Assignment {
  public:
    Assignment() = default;
    explicit Assignment(std::vector<bool> bits) : bits_(std::move(bits)) {}

    // Enumeration order is lexicographic with true before false:
    // index 0 is all-true, the last index is all-false.
    static Assignment from_lex_index(std::size_t m, std::uint64_t index) {
        std::vector<bool> bits(m);
        for (std::size_t j = 0; j < m; ++j)
            bits[j] = ((index >> (m - 1 - j)) & 1u) == 0;
        return Assignment(std::move(bits));
    }

    std::uint64_t lex_index() const {
        std::uint64_t idx = 0;
        for (std::size_t j = 0; j < bits_.size(); ++j)
            idx = (idx << 1) | (bits_[j] ? 0u : 1u);
        return idx;
    }

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i]; }
    void set(std::size_t i, bool v) { bits_[i] = v; }

    // Compact form used in breakdowns and reports: "TF" etc., "-" if empty.
    std::string to_string() const {
        if (bits_.empty()) return "-";
        std::string s;
        s.reserve(bits_.size());
        for (bool b : bits_) s += b ? 'T' : 'F';
        return s;
    }

    bool operator==(const Assignment& o) const { return bits_ == o.bits_; }
    bool operator<(const Assignment& o) const { return bits_ < o.bits_; }

  private:
    std::vector<bool> bits_;
};

using RatPoint = std::vector<Rat>;

} // namespace lwmi
