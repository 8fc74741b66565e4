#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "lwmi/wmi.hpp"

namespace lwmi {

// ===========================================================================
// Problem files and result objects.
//
// {
//   "booleans": ["b1", ...],
//   "reals":    [{"name": "x", "lower": 0, "upper": "5/2"}, ...],
//   "formula":  <formula expression>,
//   "weight":   <weight expression>,
//   "query":    "wmi" | "wmc" | "validate-pdf" | "factorize" | "check-identities",
//   "mc":       {"samples": 1000000, "seed": 42},
//   "oracle":   {"resolution": 1000}
// }
//
// query, mc and oracle are optional. Numbers anywhere may be JSON numbers
// or strings; either way they are read exactly.
// ===========================================================================

inline Problem load_problem_json(const Json& j) {
    if (!j.is_object()) throw input_error("problem file must be a JSON object");

    std::vector<std::string> bools;
    if (j.contains("booleans")) {
        if (!j.at("booleans").is_array()) throw input_error("\"booleans\" must be an array of names");
        for (const auto& b : j.at("booleans")) {
            if (!b.is_string()) throw input_error("\"booleans\" must be an array of names");
            bools.push_back(b.get<std::string>());
        }
    }

    std::vector<RealVarDecl> reals;
    if (j.contains("reals")) {
        if (!j.at("reals").is_array()) throw input_error("\"reals\" must be an array");
        for (const auto& r : j.at("reals")) {
            if (!r.is_object() || !r.contains("name") || !r.contains("lower") || !r.contains("upper"))
                throw input_error("each real needs \"name\", \"lower\" and \"upper\"");
            reals.push_back({r.at("name").get<std::string>(),
                             json_to_rat(r.at("lower"), "lower bound"),
                             json_to_rat(r.at("upper"), "upper bound")});
        }
    }

    Problem p;
    p.universe = std::make_shared<Universe>(std::move(bools), std::move(reals));

    if (!j.contains("formula")) throw input_error("problem file needs a \"formula\"");
    p.formula = parse_formula_json(j.at("formula"), p.universe);

    if (!j.contains("weight")) throw input_error("problem file needs a \"weight\"");
    p.weight = parse_weight_json(j.at("weight"), p.universe);

    if (j.contains("query")) {
        const std::string q = j.at("query").get<std::string>();
        if (q != "wmi" && q != "wmc" && q != "validate-pdf" && q != "factorize" &&
            q != "check-identities")
            throw input_error("unknown query '" + q + "'");
        p.query = q;
    }
    if (j.contains("mc")) {
        const Json& mc = j.at("mc");
        if (!mc.is_object()) throw input_error("\"mc\" must be an object");
        if (mc.contains("samples")) p.mc.samples = json_to_uint(mc.at("samples"), "mc samples");
        if (mc.contains("seed")) p.mc.seed = json_to_uint(mc.at("seed"), "mc seed");
    }
    if (j.contains("oracle")) {
        const Json& o = j.at("oracle");
        if (!o.is_object()) throw input_error("\"oracle\" must be an object");
        if (o.contains("resolution"))
            p.oracle_resolution =
                static_cast<unsigned>(json_to_uint(o.at("resolution"), "oracle resolution"));
    }

    // Reject blatantly signed weights up front. The weight only has to be
    // non-negative where it contributes, i.e. on the solution set of the
    // formula; the samplers re-check every contributing point they draw.
    detail::spot_check_nonnegative_on(p.formula, p.weight);
    return p;
}

inline Problem load_problem_text(std::string_view text) {
    return load_problem_json(parse_json_exact(text));
}

inline Problem load_problem_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open problem file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_problem_text(ss.str());
}

inline Json value_to_json(const Value& v) {
    return v.exact ? Json(rat_to_string(v.rat)) : Json(v.approx);
}

inline Json breakdown_to_json(const std::vector<BreakdownEntry>& entries, Method method) {
    Json b = Json::object();
    for (const auto& e : entries) {
        Json item;
        item["value"] = value_to_json(e.value);
        if (method == Method::Mc) item["stderr"] = e.stderr_;
        b[e.b.to_string()] = std::move(item);
    }
    return b;
}

inline Json result_to_json(const IntegrationResult& r, bool include_breakdown) {
    Json out;
    out["value"] = value_to_json(r.value);
    out["method"] = r.method == Method::Exact ? "exact" : "mc";
    if (r.method == Method::Mc) {
        out["stderr"] = r.stderr_;
        out["seed"] = r.seed;
        out["samples"] = r.samples;
    }
    if (include_breakdown) out["breakdown"] = breakdown_to_json(r.breakdown, r.method);
    return out;
}

inline Json checks_to_json(const std::vector<IdentityCheck>& checks) {
    Json arr = Json::array();
    for (const auto& c : checks) {
        Json j;
        j["name"] = c.name;
        j["lhs"] = c.lhs;
        j["rhs"] = c.rhs;
        j["pass"] = c.pass;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace lwmi
