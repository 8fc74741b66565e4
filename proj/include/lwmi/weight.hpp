#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lwmi/formula.hpp"

namespace lwmi {

// ===========================================================================
// Weight functions w(b, x): arithmetic over the real variables plus "ite"
// nodes whose conditions are formulas (and may mention Boolean variables).
// Conditioning on a Boolean assignment collapses the ite conditions that
// become decided; what remains is a piecewise polynomial in x.
// ===========================================================================

class WeightSpec {
  public:
    enum class Kind { Const, RealVar, Add, Mul, Pow, Ite };

    struct Node {
        Kind kind;
        Rat c;                       // Const
        int var = -1;                // RealVar
        unsigned exp = 0;            // Pow
        std::vector<WeightSpec> kids; // Add/Mul: operands; Pow: [base]; Ite: [then, else]
        Formula cond;                // Ite

        explicit Node(Kind k) : kind(k) {}
    };

    WeightSpec() = default;

    Kind kind() const { return node_->kind; }
    const Rat& value() const { return node_->c; }
    int var_index() const { return node_->var; }
    unsigned exponent() const { return node_->exp; }
    const std::vector<WeightSpec>& kids() const { return node_->kids; }
    const Formula& cond() const { return node_->cond; }
    const UniversePtr& universe() const { return uni_; }
    bool valid() const { return node_ != nullptr; }

    // ---- construction ----

    static WeightSpec constant(UniversePtr u, const Rat& c) {
        WeightSpec w = leaf(Kind::Const, std::move(u));
        w.mut()->c = c;
        return w;
    }
    static WeightSpec real_var(UniversePtr u, std::size_t j) {
        if (j >= u->num_reals()) throw input_error("real variable index out of range");
        WeightSpec w = leaf(Kind::RealVar, std::move(u));
        w.mut()->var = static_cast<int>(j);
        return w;
    }
    static WeightSpec add(UniversePtr u, std::vector<WeightSpec> kids) {
        if (kids.empty()) throw input_error("add needs at least one operand");
        if (kids.size() == 1) return kids[0];
        WeightSpec w = leaf(Kind::Add, std::move(u));
        w.mut()->kids = std::move(kids);
        return w;
    }
    static WeightSpec mul(UniversePtr u, std::vector<WeightSpec> kids) {
        if (kids.empty()) throw input_error("mul needs at least one operand");
        if (kids.size() == 1) return kids[0];
        WeightSpec w = leaf(Kind::Mul, std::move(u));
        w.mut()->kids = std::move(kids);
        return w;
    }
    static WeightSpec pow(const WeightSpec& base, unsigned k) {
        WeightSpec w = leaf(Kind::Pow, base.uni_);
        w.mut()->exp = k;
        w.mut()->kids = {base};
        return w;
    }
    static WeightSpec ite(const Formula& cond, const WeightSpec& t, const WeightSpec& e) {
        if (cond.is_true()) return t;
        if (cond.is_false()) return e;
        WeightSpec w = leaf(Kind::Ite, t.uni_);
        w.mut()->cond = cond;
        w.mut()->kids = {t, e};
        return w;
    }
    static WeightSpec scaled(const WeightSpec& w, const Rat& c) {
        return mul(w.uni_, {constant(w.uni_, c), w});
    }

    // ---- evaluation ----

    Rat eval(const Assignment& b, const RatPoint& x) const {
        switch (kind()) {
            case Kind::Const: return node_->c;
            case Kind::RealVar: return x[static_cast<std::size_t>(node_->var)];
            case Kind::Add: {
                Rat s = 0;
                for (const auto& k : kids()) s += k.eval(b, x);
                return s;
            }
            case Kind::Mul: {
                Rat p = 1;
                for (const auto& k : kids()) p *= k.eval(b, x);
                return p;
            }
            case Kind::Pow: {
                Rat base = kids()[0].eval(b, x), p = 1;
                for (unsigned i = 0; i < node_->exp; ++i) p *= base;
                return p;
            }
            case Kind::Ite:
                return node_->cond.interpret(b, x) ? kids()[0].eval(b, x) : kids()[1].eval(b, x);
        }
        return 0;
    }

    double eval_double(const Assignment& b, const std::vector<double>& x) const {
        switch (kind()) {
            case Kind::Const: return rat_to_double(node_->c);
            case Kind::RealVar: return x[static_cast<std::size_t>(node_->var)];
            case Kind::Add: {
                double s = 0;
                for (const auto& k : kids()) s += k.eval_double(b, x);
                return s;
            }
            case Kind::Mul: {
                double p = 1;
                for (const auto& k : kids()) p *= k.eval_double(b, x);
                return p;
            }
            case Kind::Pow: {
                double base = kids()[0].eval_double(b, x), p = 1;
                for (unsigned i = 0; i < node_->exp; ++i) p *= base;
                return p;
            }
            case Kind::Ite:
                return node_->cond.interpret_double(b, x) ? kids()[0].eval_double(b, x)
                                                          : kids()[1].eval_double(b, x);
        }
        return 0;
    }

    // ---- conditioning ----

    WeightSpec condition(const Assignment& b) const {
        switch (kind()) {
            case Kind::Const:
            case Kind::RealVar: return *this;
            case Kind::Add:
            case Kind::Mul: {
                std::vector<WeightSpec> cs;
                cs.reserve(kids().size());
                for (const auto& k : kids()) cs.push_back(k.condition(b));
                return kind() == Kind::Add ? add(uni_, std::move(cs)) : mul(uni_, std::move(cs));
            }
            case Kind::Pow: return pow(kids()[0].condition(b), node_->exp);
            case Kind::Ite: {
                Formula c = node_->cond.condition(b);
                if (c.is_true()) return kids()[0].condition(b);
                if (c.is_false()) return kids()[1].condition(b);
                return ite(c, kids()[0].condition(b), kids()[1].condition(b));
            }
        }
        return *this;
    }

    // ---- structure ----

    unsigned degree_bound() const {
        switch (kind()) {
            case Kind::Const: return 0;
            case Kind::RealVar: return 1;
            case Kind::Add:
            case Kind::Ite: {
                unsigned d = 0;
                for (const auto& k : kids()) d = std::max(d, k.degree_bound());
                return d;
            }
            case Kind::Mul: {
                unsigned d = 0;
                for (const auto& k : kids()) d += k.degree_bound();
                return d;
            }
            case Kind::Pow: return node_->exp * kids()[0].degree_bound();
        }
        return 0;
    }

    void collect_guard_atoms(std::vector<Polynomial>& out) const {
        if (kind() == Kind::Ite) {
            for (const auto& p : node_->cond.collect_atoms()) {
                bool seen = false;
                for (const auto& q : out)
                    if (q == p) { seen = true; break; }
                if (!seen) out.push_back(p);
            }
        }
        for (const auto& k : kids()) k.collect_guard_atoms(out);
    }

    bool guards_all_linear() const {
        if (kind() == Kind::Ite && !node_->cond.all_atoms_linear()) return false;
        for (const auto& k : kids())
            if (!k.guards_all_linear()) return false;
        return true;
    }

    // ---- piecewise-polynomial view ----
    //
    // After conditioning on b, the weight equals a finite sum
    //   w_b(x) = sum_i [x satisfies guard_i] * poly_i(x)
    // with real-only guards. Additions concatenate piece lists; products
    // cross-combine them.

    struct Piece {
        Formula guard;   // real-only
        Polynomial poly;
    };

    std::vector<Piece> pieces(const Assignment& b) const {
        return condition(b).pieces_impl();
    }

    // ---- serialization ----

    Json to_json() const {
        switch (kind()) {
            case Kind::Const: return Json{{"const", rat_to_string(node_->c)}};
            case Kind::RealVar: return Json{{"var", uni_->real(static_cast<std::size_t>(node_->var)).name}};
            case Kind::Add:
            case Kind::Mul: {
                Json args = Json::array();
                for (const auto& k : kids()) args.push_back(k.to_json());
                return Json{{"op", kind() == Kind::Add ? "add" : "mul"}, {"args", std::move(args)}};
            }
            case Kind::Pow:
                return Json{{"op", "pow"},
                            {"args", Json::array({kids()[0].to_json(),
                                                  Json{{"const", std::to_string(node_->exp)}}})}};
            case Kind::Ite:
                return Json{{"op", "ite"},
                            {"cond", node_->cond.to_json()},
                            {"then", kids()[0].to_json()},
                            {"else", kids()[1].to_json()}};
        }
        return {};
    }

    std::string serialize() const { return to_json().dump(); }

    // Recognizes the literal-product shape: a product with one factor per
    // Boolean variable, each an ite on a bare variable with constant arms.
    // Returns per-variable (true-weight, false-weight) pairs.
    std::optional<std::vector<std::pair<Rat, Rat>>> try_literal_product() const {
        const std::size_t m = uni_->num_bools();
        std::vector<std::pair<Rat, Rat>> w(m);
        std::vector<bool> seen(m, false);
        std::vector<const WeightSpec*> factors;
        if (kind() == Kind::Mul)
            for (const auto& k : kids()) factors.push_back(&k);
        else
            factors.push_back(this);
        if (factors.size() != m) return std::nullopt;
        for (const auto* f : factors) {
            if (f->kind() != Kind::Ite) return std::nullopt;
            const Formula& c = f->cond();
            if (c.kind() != Formula::Kind::BoolVar) return std::nullopt;
            auto idx = static_cast<std::size_t>(c.bool_index());
            if (seen[idx]) return std::nullopt;
            if (f->kids()[0].kind() != Kind::Const || f->kids()[1].kind() != Kind::Const)
                return std::nullopt;
            seen[idx] = true;
            w[idx] = {f->kids()[0].value(), f->kids()[1].value()};
        }
        return w;
    }

  private:
    std::shared_ptr<const Node> node_;
    UniversePtr uni_;

    static WeightSpec leaf(Kind k, UniversePtr u) {
        WeightSpec w;
        w.node_ = std::make_shared<Node>(k);
        w.uni_ = std::move(u);
        return w;
    }

    Node* mut() { return const_cast<Node*>(node_.get()); }

    std::vector<Piece> pieces_impl() const {
        const std::size_t n = uni_->num_reals();
        Formula top = Formula::make_true(uni_);
        switch (kind()) {
            case Kind::Const:
                if (node_->c == 0) return {};
                return {{top, Polynomial::constant(n, node_->c)}};
            case Kind::RealVar:
                return {{top, Polynomial::variable(n, static_cast<std::size_t>(node_->var))}};
            case Kind::Add: {
                std::vector<Piece> out;
                for (const auto& k : kids()) {
                    auto ps = k.pieces_impl();
                    out.insert(out.end(), std::make_move_iterator(ps.begin()),
                               std::make_move_iterator(ps.end()));
                }
                return out;
            }
            case Kind::Mul: {
                std::vector<Piece> acc = {{top, Polynomial::constant(n, 1)}};
                for (const auto& k : kids()) acc = cross(acc, k.pieces_impl());
                return acc;
            }
            case Kind::Pow: {
                std::vector<Piece> acc = {{top, Polynomial::constant(n, 1)}};
                auto base = kids()[0].pieces_impl();
                for (unsigned i = 0; i < node_->exp; ++i) acc = cross(acc, base);
                return acc;
            }
            case Kind::Ite: {
                std::vector<Piece> out;
                for (auto& p : kids()[0].pieces_impl())
                    out.push_back({Formula::conj2(node_->cond, p.guard), std::move(p.poly)});
                Formula nc = Formula::negate(node_->cond);
                for (auto& p : kids()[1].pieces_impl())
                    out.push_back({Formula::conj2(nc, p.guard), std::move(p.poly)});
                return out;
            }
        }
        return {};
    }

    static std::vector<Piece> cross(const std::vector<Piece>& a, const std::vector<Piece>& b) {
        std::vector<Piece> out;
        out.reserve(a.size() * b.size());
        for (const auto& pa : a)
            for (const auto& pb : b) {
                Formula g = pa.guard == pb.guard ? pa.guard : Formula::conj2(pa.guard, pb.guard);
                if (g.is_false()) continue;
                Polynomial q = pa.poly * pb.poly;
                if (q.is_zero()) continue;
                out.push_back({std::move(g), std::move(q)});
            }
        return out;
    }
};

// ===========================================================================
// Parsing (same arithmetic grammar as formula atoms, plus ite)
// ===========================================================================

inline WeightSpec parse_weight_json(const Json& j, const UniversePtr& u) {
    if (!j.is_object()) throw input_error("weight must be a JSON object");

    if (j.contains("var")) {
        const std::string& name = j.at("var").get_ref<const std::string&>();
        int r = u->find_real(name);
        if (r >= 0) return WeightSpec::real_var(u, static_cast<std::size_t>(r));
        if (u->find_bool(name) >= 0)
            throw input_error("boolean variable '" + name +
                              "' used in weight arithmetic; wrap it in an ite condition");
        throw input_error("unknown variable '" + name + "'");
    }
    if (j.contains("const")) return WeightSpec::constant(u, json_to_rat(j.at("const"), "const"));

    if (!j.contains("op")) throw input_error("weight object needs \"op\", \"var\" or \"const\"");
    const std::string& op = j.at("op").get_ref<const std::string&>();

    if (op == "ite") {
        if (!j.contains("cond") || !j.contains("then") || !j.contains("else"))
            throw input_error("ite needs \"cond\", \"then\" and \"else\"");
        return WeightSpec::ite(parse_formula_json(j.at("cond"), u),
                               parse_weight_json(j.at("then"), u),
                               parse_weight_json(j.at("else"), u));
    }

    auto args = [&]() -> const Json& {
        if (!j.contains("args") || !j.at("args").is_array() || j.at("args").empty())
            throw input_error("operator '" + op + "' needs a non-empty \"args\" array");
        return j.at("args");
    };

    if (op == "add" || op == "mul") {
        std::vector<WeightSpec> kids;
        for (const auto& a : args()) kids.push_back(parse_weight_json(a, u));
        return op == "add" ? WeightSpec::add(u, std::move(kids)) : WeightSpec::mul(u, std::move(kids));
    }
    if (op == "neg") {
        if (args().size() != 1) throw input_error("neg takes exactly one argument");
        return WeightSpec::scaled(parse_weight_json(args()[0], u), Rat(-1));
    }
    if (op == "pow") {
        if (args().size() != 2) throw input_error("pow takes exactly two arguments");
        Rat e = detail::const_from_json(args()[1], "pow exponent");
        if (e < 0 || rat_den(e) != 1)
            throw input_error("pow exponent must be a non-negative integer constant");
        return WeightSpec::pow(parse_weight_json(args()[0], u), rat_num(e).convert_to<unsigned>());
    }
    throw input_error("unknown weight operator '" + op + "'");
}

inline WeightSpec parse_weight(std::string_view text, const UniversePtr& u) {
    return parse_weight_json(parse_json_exact(text), u);
}

} // namespace lwmi
