#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lwmi/errors.hpp"
#include "lwmi/json_exact.hpp"
#include "lwmi/polynomial.hpp"
#include "lwmi/universe.hpp"

namespace lwmi {

// ===========================================================================
// Quantifier-free formulas over Boolean variables and polynomial atoms.
//
// Every comparison is normalized to a single shape, poly <= 0, with the
// polynomial scaled so its leading coefficient has absolute value 1:
//   lhs <  rhs   ->  lhs - rhs <= 0   (the boundary is a null set)
//   lhs >= rhs   ->  rhs - lhs <= 0
//   lhs >  rhs   ->  rhs - lhs <= 0
// Equality atoms are rejected: they denote null sets and integrate to 0.
//
// Connectives are n-ary and flattened; TRUE/FALSE absorb on construction.
// No other simplification happens, so parse and serialize round-trip
// byte-identically on normalized trees.
// ===========================================================================

class Formula {
  public:
    enum class Kind { True, False, BoolVar, Atom, Not, And, Or };

    struct Node {
        Kind kind;
        int var = -1;          // BoolVar
        Polynomial poly;       // Atom: poly <= 0
        std::vector<Formula> kids;

        explicit Node(Kind k) : kind(k), poly(0) {}
    };

    Formula() = default;

    Kind kind() const { return node_->kind; }
    bool is_true() const { return kind() == Kind::True; }
    bool is_false() const { return kind() == Kind::False; }
    int bool_index() const { return node_->var; }
    const Polynomial& atom_poly() const { return node_->poly; }
    const std::vector<Formula>& kids() const { return node_->kids; }
    const UniversePtr& universe() const { return uni_; }

    bool valid() const { return node_ != nullptr; }

    // ---- construction ----

    static Formula make_true(UniversePtr u) { return leaf(Kind::True, std::move(u)); }
    static Formula make_false(UniversePtr u) { return leaf(Kind::False, std::move(u)); }

    static Formula bool_var(UniversePtr u, std::size_t index) {
        if (index >= u->num_bools()) throw input_error("boolean variable index out of range");
        Formula f = leaf(Kind::BoolVar, std::move(u));
        const_cast<Node*>(f.node_.get())->var = static_cast<int>(index);
        return f;
    }

    // Builds an atom "poly <= 0". Scale-normalizes, and folds atoms with a
    // constant polynomial to TRUE/FALSE.
    static Formula atom(UniversePtr u, const Polynomial& poly) {
        if (poly.nvars() != u->num_reals())
            throw input_error("atom polynomial has the wrong number of variables");
        if (poly.total_degree() == 0)
            return poly.constant_term() <= 0 ? make_true(std::move(u)) : make_false(std::move(u));
        Formula f = leaf(Kind::Atom, std::move(u));
        const_cast<Node*>(f.node_.get())->poly = poly.scale_normalized();
        return f;
    }

    static Formula negate(const Formula& a) {
        if (a.is_true()) return make_false(a.uni_);
        if (a.is_false()) return make_true(a.uni_);
        Formula f = leaf(Kind::Not, a.uni_);
        const_cast<Node*>(f.node_.get())->kids.push_back(a);
        return f;
    }

    static Formula conj(UniversePtr u, const std::vector<Formula>& args) {
        return nary(Kind::And, std::move(u), args);
    }
    static Formula disj(UniversePtr u, const std::vector<Formula>& args) {
        return nary(Kind::Or, std::move(u), args);
    }

    static Formula conj2(const Formula& a, const Formula& b) { return conj(a.uni_, {a, b}); }
    static Formula disj2(const Formula& a, const Formula& b) { return disj(a.uni_, {a, b}); }

    // ---- inspection ----

    bool mentions_bools() const {
        if (kind() == Kind::BoolVar) return true;
        for (const auto& k : kids())
            if (k.mentions_bools()) return true;
        return false;
    }

    bool mentions_atoms() const {
        if (kind() == Kind::Atom) return true;
        for (const auto& k : kids())
            if (k.mentions_atoms()) return true;
        return false;
    }

    // Distinct atom polynomials in first-occurrence order.
    std::vector<Polynomial> collect_atoms() const {
        std::vector<Polynomial> out;
        collect_atoms_into(out);
        return out;
    }

    bool all_atoms_linear() const {
        if (kind() == Kind::Atom) return node_->poly.is_linear();
        for (const auto& k : kids())
            if (!k.all_atoms_linear()) return false;
        return true;
    }

    // ---- semantics ----

    bool interpret(const Assignment& b, const RatPoint& x) const {
        switch (kind()) {
            case Kind::True: return true;
            case Kind::False: return false;
            case Kind::BoolVar: return b[static_cast<std::size_t>(node_->var)];
            case Kind::Atom: return node_->poly.eval(x) <= 0;
            case Kind::Not: return !kids()[0].interpret(b, x);
            case Kind::And:
                for (const auto& k : kids())
                    if (!k.interpret(b, x)) return false;
                return true;
            case Kind::Or:
                for (const auto& k : kids())
                    if (k.interpret(b, x)) return true;
                return false;
        }
        return false;
    }

    bool interpret_double(const Assignment& b, const std::vector<double>& x) const {
        switch (kind()) {
            case Kind::True: return true;
            case Kind::False: return false;
            case Kind::BoolVar: return b[static_cast<std::size_t>(node_->var)];
            case Kind::Atom: return node_->poly.eval_double(x) <= 0;
            case Kind::Not: return !kids()[0].interpret_double(b, x);
            case Kind::And:
                for (const auto& k : kids())
                    if (!k.interpret_double(b, x)) return false;
                return true;
            case Kind::Or:
                for (const auto& k : kids())
                    if (k.interpret_double(b, x)) return true;
                return false;
        }
        return false;
    }

    // Substitutes truth values for a subset of the Boolean variables and
    // re-absorbs constants. Entries left empty stay symbolic.
    Formula condition(const std::vector<std::optional<bool>>& vals) const {
        switch (kind()) {
            case Kind::True:
            case Kind::False:
            case Kind::Atom:
                return *this;
            case Kind::BoolVar: {
                auto v = vals[static_cast<std::size_t>(node_->var)];
                if (!v) return *this;
                return *v ? make_true(uni_) : make_false(uni_);
            }
            case Kind::Not:
                return negate(kids()[0].condition(vals));
            case Kind::And:
            case Kind::Or: {
                std::vector<Formula> cs;
                cs.reserve(kids().size());
                for (const auto& k : kids()) cs.push_back(k.condition(vals));
                return kind() == Kind::And ? conj(uni_, cs) : disj(uni_, cs);
            }
        }
        return *this;
    }

    Formula condition(const Assignment& b) const {
        std::vector<std::optional<bool>> vals(uni_->num_bools());
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = b[i];
        return condition(vals);
    }

    // Negation normal form: negations pushed down to literals. Atoms are
    // not rewritten (pointwise semantics preserved exactly).
    Formula nnf() const { return nnf_impl(false); }

    // ---- serialization ----

    Json to_json() const {
        switch (kind()) {
            case Kind::True: return Json{{"op", "true"}};
            case Kind::False: return Json{{"op", "false"}};
            case Kind::BoolVar:
                return Json{{"var", uni_->bool_name(static_cast<std::size_t>(node_->var))}};
            case Kind::Atom: {
                Json j;
                j["op"] = "le";
                j["lhs"] = poly_to_json(node_->poly, *uni_);
                j["rhs"] = Json{{"const", "0"}};
                return j;
            }
            case Kind::Not:
            case Kind::And:
            case Kind::Or: {
                Json j;
                j["op"] = kind() == Kind::Not ? "not" : (kind() == Kind::And ? "and" : "or");
                Json args = Json::array();
                for (const auto& k : kids()) args.push_back(k.to_json());
                j["args"] = std::move(args);
                return j;
            }
        }
        return {};
    }

    std::string serialize() const { return to_json().dump(); }

    bool operator==(const Formula& o) const {
        if (node_ == o.node_) return true;
        if (kind() != o.kind()) return false;
        switch (kind()) {
            case Kind::True:
            case Kind::False: return true;
            case Kind::BoolVar: return node_->var == o.node_->var;
            case Kind::Atom: return node_->poly == o.node_->poly;
            default: break;
        }
        if (kids().size() != o.kids().size()) return false;
        for (std::size_t i = 0; i < kids().size(); ++i)
            if (!(kids()[i] == o.kids()[i])) return false;
        return true;
    }
    bool operator!=(const Formula& o) const { return !(*this == o); }

    static Json poly_to_json(const Polynomial& p, const Universe& u);

  private:
    std::shared_ptr<const Node> node_;
    UniversePtr uni_;

    static Formula leaf(Kind k, UniversePtr u) {
        Formula f;
        f.node_ = std::make_shared<Node>(k);
        f.uni_ = std::move(u);
        return f;
    }

    static Formula nary(Kind k, UniversePtr u, const std::vector<Formula>& args) {
        const bool is_and = k == Kind::And;
        std::vector<Formula> flat;
        for (const auto& a : args) {
            if (a.is_true()) {
                if (!is_and) return make_true(std::move(u));
                continue;
            }
            if (a.is_false()) {
                if (is_and) return make_false(std::move(u));
                continue;
            }
            if (a.kind() == k)
                flat.insert(flat.end(), a.kids().begin(), a.kids().end());
            else
                flat.push_back(a);
        }
        if (flat.empty()) return is_and ? make_true(std::move(u)) : make_false(std::move(u));
        if (flat.size() == 1) return flat[0];
        Formula f = leaf(k, std::move(u));
        const_cast<Node*>(f.node_.get())->kids = std::move(flat);
        return f;
    }

    void collect_atoms_into(std::vector<Polynomial>& out) const {
        if (kind() == Kind::Atom) {
            for (const auto& p : out)
                if (p == node_->poly) return;
            out.push_back(node_->poly);
            return;
        }
        for (const auto& k : kids()) k.collect_atoms_into(out);
    }

    Formula nnf_impl(bool negated) const {
        switch (kind()) {
            case Kind::True: return negated ? make_false(uni_) : *this;
            case Kind::False: return negated ? make_true(uni_) : *this;
            case Kind::BoolVar:
            case Kind::Atom: return negated ? negate(*this) : *this;
            case Kind::Not: return kids()[0].nnf_impl(!negated);
            case Kind::And:
            case Kind::Or: {
                std::vector<Formula> cs;
                cs.reserve(kids().size());
                for (const auto& k : kids()) cs.push_back(k.nnf_impl(negated));
                const bool as_and = (kind() == Kind::And) != negated;
                return as_and ? conj(uni_, cs) : disj(uni_, cs);
            }
        }
        return *this;
    }
};

// ===========================================================================
// Parsing
// ===========================================================================

namespace detail {

inline Rat const_from_json(const Json& j, const char* where) {
    if (!j.is_object() || !j.contains("const"))
        throw input_error(std::string(where) + ": expected a constant");
    return json_to_rat(j.at("const"), where);
}

// Arithmetic expression over the real variables -> Polynomial.
inline Polynomial parse_poly_expr(const Json& j, const Universe& u) {
    const std::size_t n = u.num_reals();
    if (!j.is_object()) throw input_error("expression must be a JSON object");

    if (j.contains("var")) {
        const std::string& name = j.at("var").get_ref<const std::string&>();
        int r = u.find_real(name);
        if (r >= 0) return Polynomial::variable(n, static_cast<std::size_t>(r));
        if (u.find_bool(name) >= 0)
            throw input_error("boolean variable '" + name + "' used in arithmetic");
        throw input_error("unknown variable '" + name + "'");
    }
    if (j.contains("const")) return Polynomial::constant(n, json_to_rat(j.at("const"), "const"));

    if (!j.contains("op")) throw input_error("expression object needs \"op\", \"var\" or \"const\"");
    const std::string& op = j.at("op").get_ref<const std::string&>();
    auto args = [&]() -> const Json& {
        if (!j.contains("args") || !j.at("args").is_array() || j.at("args").empty())
            throw input_error("operator '" + op + "' needs a non-empty \"args\" array");
        return j.at("args");
    };

    if (op == "add") {
        Polynomial acc(n);
        for (const auto& a : args()) acc += parse_poly_expr(a, u);
        return acc;
    }
    if (op == "mul") {
        Polynomial acc = Polynomial::constant(n, 1);
        for (const auto& a : args()) acc *= parse_poly_expr(a, u);
        return acc;
    }
    if (op == "neg") {
        if (args().size() != 1) throw input_error("neg takes exactly one argument");
        return parse_poly_expr(args()[0], u).negated();
    }
    if (op == "pow") {
        if (args().size() != 2) throw input_error("pow takes exactly two arguments");
        Rat e = const_from_json(args()[1], "pow exponent");
        if (e < 0 || rat_den(e) != 1)
            throw input_error("pow exponent must be a non-negative integer constant");
        return parse_poly_expr(args()[0], u).pow(rat_num(e).convert_to<unsigned>());
    }
    throw input_error("unknown arithmetic operator '" + op + "'");
}

} // namespace detail

inline Formula parse_formula_json(const Json& j, const UniversePtr& u) {
    if (!j.is_object()) throw input_error("formula must be a JSON object");

    if (j.contains("var")) {
        const std::string& name = j.at("var").get_ref<const std::string&>();
        int b = u->find_bool(name);
        if (b >= 0) return Formula::bool_var(u, static_cast<std::size_t>(b));
        if (u->find_real(name) >= 0)
            throw input_error("real variable '" + name + "' used as a formula");
        throw input_error("unknown variable '" + name + "'");
    }

    if (!j.contains("op")) throw input_error("formula object needs \"op\" or \"var\"");
    const std::string& op = j.at("op").get_ref<const std::string&>();

    if (op == "true") return Formula::make_true(u);
    if (op == "false") return Formula::make_false(u);

    if (op == "le" || op == "lt" || op == "ge" || op == "gt" || op == "eq") {
        if (op == "eq")
            throw input_error("equality atoms are rejected: {x : lhs = rhs} is a null set and "
                              "integrates to zero; use inequalities");
        if (!j.contains("lhs") || !j.contains("rhs"))
            throw input_error("comparison '" + op + "' needs \"lhs\" and \"rhs\"");
        Polynomial l = detail::parse_poly_expr(j.at("lhs"), *u);
        Polynomial r = detail::parse_poly_expr(j.at("rhs"), *u);
        // le/lt keep lhs-rhs; ge/gt flip. Strictness is dropped either way.
        Polynomial diff = (op == "le" || op == "lt") ? l - r : r - l;
        return Formula::atom(u, diff);
    }

    if (op == "and" || op == "or" || op == "not") {
        if (!j.contains("args") || !j.at("args").is_array())
            throw input_error("connective '" + op + "' needs an \"args\" array");
        std::vector<Formula> kids;
        for (const auto& a : j.at("args")) kids.push_back(parse_formula_json(a, u));
        if (op == "not") {
            if (kids.size() != 1) throw input_error("not takes exactly one argument");
            return Formula::negate(kids[0]);
        }
        return op == "and" ? Formula::conj(u, kids) : Formula::disj(u, kids);
    }
    throw input_error("unknown formula operator '" + op + "'");
}

inline Formula parse_formula(std::string_view text, const UniversePtr& u) {
    return parse_formula_json(parse_json_exact(text), u);
}

inline Json Formula::poly_to_json(const Polynomial& p, const Universe& u) {
    auto const_node = [](const Rat& c) { return Json{{"const", rat_to_string(c)}}; };
    if (p.is_zero()) return const_node(Rat(0));

    std::vector<Json> terms;
    for (const auto& [exps, coeff] : p.terms()) {
        std::vector<Json> factors;
        if (coeff != 1) factors.push_back(const_node(coeff));
        for (std::size_t jv = 0; jv < exps.size(); ++jv) {
            if (exps[jv] == 0) continue;
            Json var{{"var", u.real(jv).name}};
            if (exps[jv] == 1)
                factors.push_back(std::move(var));
            else
                factors.push_back(Json{{"op", "pow"},
                                       {"args", Json::array({std::move(var), const_node(Rat(exps[jv]))})}});
        }
        if (factors.empty())
            terms.push_back(const_node(coeff)); // pure constant term with coeff == 1
        else if (factors.size() == 1)
            terms.push_back(std::move(factors[0]));
        else
            terms.push_back(Json{{"op", "mul"}, {"args", factors}});
    }
    if (terms.size() == 1) return terms[0];
    return Json{{"op", "add"}, {"args", terms}};
}

} // namespace lwmi
