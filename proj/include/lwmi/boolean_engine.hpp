#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "lwmi/formula.hpp"

namespace lwmi {

// ===========================================================================
// Boolean-side machinery: model enumeration, weighted model counting by
// pruned recursion, and the same quantity as a literal table sum. The two
// counting routes are kept deliberately independent so they can check each
// other.
// ===========================================================================

inline constexpr unsigned BOOL_ENUM_CAP = 24;  // enumeration over 2^M assignments
inline constexpr unsigned BOOL_TABLE_CAP = 20; // dense weight tables

// Per-variable weights for the positive and negative literal.
struct LiteralWeights {
    std::vector<std::pair<Rat, Rat>> w; // (weight of var=true, weight of var=false)

    explicit LiteralWeights(std::vector<std::pair<Rat, Rat>> weights) : w(std::move(weights)) {
        for (const auto& [wt, wf] : w)
            if (wt < 0 || wf < 0) throw input_error("literal weights must be non-negative");
    }
};

// Weight function over total assignments: either a dense table indexed by
// lexicographic assignment index, or the product closure of literal
// weights, w(b) = prod_i (b_i ? w_i_true : w_i_false).
class AssignmentWeight {
  public:
    static AssignmentWeight from_table(std::size_t num_vars, std::vector<Rat> table) {
        if (num_vars > BOOL_TABLE_CAP)
            throw capacity_error("dense weight tables stop at " + std::to_string(BOOL_TABLE_CAP) +
                                 " variables, got " + std::to_string(num_vars));
        if (table.size() != (std::size_t(1) << num_vars))
            throw input_error("weight table needs exactly 2^M entries");
        for (const auto& v : table)
            if (v < 0) throw input_error("assignment weights must be non-negative");
        AssignmentWeight w;
        w.num_vars_ = num_vars;
        w.data_ = std::move(table);
        return w;
    }

    static AssignmentWeight from_literals(LiteralWeights lw) {
        AssignmentWeight w;
        w.num_vars_ = lw.w.size();
        w.data_ = std::move(lw);
        return w;
    }

    std::size_t num_vars() const { return num_vars_; }

    Rat operator()(const Assignment& b) const {
        if (const auto* table = std::get_if<std::vector<Rat>>(&data_))
            return (*table)[b.lex_index()];
        const auto& lw = std::get<LiteralWeights>(data_);
        Rat p = 1;
        for (std::size_t i = 0; i < num_vars_; ++i) p *= b[i] ? lw.w[i].first : lw.w[i].second;
        return p;
    }

  private:
    AssignmentWeight() = default;
    std::size_t num_vars_ = 0;
    std::variant<std::vector<Rat>, LiteralWeights> data_;
};

namespace detail {

inline void require_enum_capacity(std::size_t m, unsigned cap) {
    if (m > cap)
        throw capacity_error("enumeration over 2^" + std::to_string(m) +
                             " assignments exceeds the cap of 2^" + std::to_string(cap));
}

template <class Callback>
void for_each_completion(std::vector<std::optional<bool>>& vals, std::size_t from, Callback&& cb) {
    const std::size_t m = vals.size();
    std::size_t j = from;
    while (j < m && vals[j]) ++j;
    if (j == m) {
        Assignment b{std::vector<bool>(m)};
        for (std::size_t i = 0; i < m; ++i) b.set(i, *vals[i]);
        cb(b);
        return;
    }
    for (bool v : {true, false}) {
        vals[j] = v;
        for_each_completion(vals, j + 1, cb);
        vals[j].reset();
    }
}

template <class Callback>
void enumerate_rec(const Formula& f, std::vector<std::optional<bool>>& vals, std::size_t depth,
                   Callback&& cb) {
    if (f.is_false()) return;
    if (!f.mentions_bools()) {
        // Decided (or purely real) early: every completion is a model.
        for_each_completion(vals, 0, cb);
        return;
    }
    vals[depth] = true;
    enumerate_rec(f.condition(vals), vals, depth + 1, cb);
    vals[depth] = false;
    enumerate_rec(f.condition(vals), vals, depth + 1, cb);
    vals[depth].reset();
}

} // namespace detail

// Streams the models of f in lexicographic order (true sorts before
// false). For a propositional formula these are its total models; when
// real atoms are present they are the assignments whose conditioned
// real formula is not FALSE, i.e. the Boolean halves of partial models.
template <class Callback>
void for_each_model(const Formula& f, Callback&& cb, unsigned cap = BOOL_ENUM_CAP) {
    const std::size_t m = f.universe()->num_bools();
    detail::require_enum_capacity(m, cap);
    std::vector<std::optional<bool>> vals(m);
    detail::enumerate_rec(f, vals, 0, cb);
}

inline std::vector<Assignment> enumerate_models(const Formula& f, unsigned cap = BOOL_ENUM_CAP) {
    std::vector<Assignment> out;
    for_each_model(f, [&](const Assignment& b) { out.push_back(b); }, cap);
    return out;
}

// Weighted model count by pruned recursion over the variable order, with
// the closed-form product shortcut once the formula is decided:
// remaining variables contribute prod_i (w_i_true + w_i_false).
inline Rat wmc(const Formula& f, const LiteralWeights& lw, unsigned cap = BOOL_ENUM_CAP) {
    const std::size_t m = f.universe()->num_bools();
    detail::require_enum_capacity(m, cap);
    if (lw.w.size() != m) throw input_error("literal weight count does not match the universe");
    if (f.mentions_atoms()) throw input_error("weighted model counting expects a propositional formula");

    std::function<Rat(const Formula&, std::size_t)> go = [&](const Formula& g,
                                                             std::size_t depth) -> Rat {
        if (g.is_false()) return 0;
        if (!g.mentions_bools()) {
            Rat p = 1;
            for (std::size_t i = depth; i < m; ++i) p *= lw.w[i].first + lw.w[i].second;
            return p;
        }
        std::vector<std::optional<bool>> vals(m);
        vals[depth] = true;
        Rat t = go(g.condition(vals), depth + 1);
        vals[depth] = false;
        Rat e = go(g.condition(vals), depth + 1);
        return lw.w[depth].first * t + lw.w[depth].second * e;
    };
    return go(f, 0);
}

// The same count as an explicit sum against the counting measure: walk
// every assignment, test membership, add its weight. No pruning, no
// shortcuts; this is the cross-check for wmc.
inline Rat lwmc(const Formula& f, const AssignmentWeight& w, unsigned cap = BOOL_ENUM_CAP) {
    const std::size_t m = f.universe()->num_bools();
    detail::require_enum_capacity(m, cap);
    if (w.num_vars() != m) throw input_error("weight arity does not match the universe");
    if (f.mentions_atoms()) throw input_error("weighted model counting expects a propositional formula");

    Rat acc = 0;
    const RatPoint no_reals;
    for (std::uint64_t i = 0; i < (std::uint64_t(1) << m); ++i) {
        Assignment b = Assignment::from_lex_index(m, i);
        if (f.interpret(b, no_reals)) acc += w(b);
    }
    return acc;
}

} // namespace lwmi
