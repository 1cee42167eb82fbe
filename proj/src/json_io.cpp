#include "opforge/json_io.hpp"

namespace opforge {

namespace {

int parse_deg(const std::string& key) {
    try {
        size_t used = 0;
        int n = std::stoi(key, &used);
        if (used != key.size()) throw ParseError("bad degree key '" + key + "'");
        return n;
    } catch (const std::invalid_argument&) {
        throw ParseError("bad degree key '" + key + "'");
    } catch (const std::out_of_range&) {
        throw ParseError("degree key out of range '" + key + "'");
    }
}

} // namespace

Json matrix_to_json(const RationalMatrix& m) {
    Json out = Json::array();
    for (const auto& t : m.triplets()) out.push_back({t.row, t.col, rat_str(t.val)});
    return out;
}

RationalMatrix matrix_from_json(const Json& j, int rows, int cols) {
    if (!j.is_array()) throw ParseError("matrix entry list must be an array");
    std::vector<Triplet> ts;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 3 || !e[0].is_number_integer() ||
            !e[1].is_number_integer() || !e[2].is_string())
            throw ParseError("matrix triplet must be [row, col, \"p/q\"]");
        ts.push_back({e[0].get<int>(), e[1].get<int>(), rat_parse(e[2].get<std::string>())});
    }
    try {
        return RationalMatrix::from_triplets(rows, cols, ts);
    } catch (const ShapeMismatch& ex) {
        throw ParseError(std::string("bad matrix data: ") + ex.what());
    }
}

Json complex_to_json(const ChainComplex& X) {
    Json dims = Json::object(), diff = Json::object();
    for (const auto& [n, d] : X.dims()) dims[std::to_string(n)] = d;
    for (const auto& [n, dn] : X.diffs()) diff[std::to_string(n)] = matrix_to_json(dn);
    Json out{{"dims", dims}, {"diff", diff}};
    Json labels = Json::object(), weights = Json::object();
    for (const auto& [n, d] : X.dims()) {
        if (!X.labels(n).empty()) labels[std::to_string(n)] = X.labels(n);
        if (!X.weights(n).empty()) weights[std::to_string(n)] = X.weights(n);
    }
    if (!labels.empty()) out["labels"] = labels;
    if (!weights.empty()) out["weights"] = weights;
    return out;
}

ChainComplex complex_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("dims"))
        throw ParseError("complex JSON needs a 'dims' object");
    std::map<int, int> dims;
    for (const auto& [key, v] : j.at("dims").items()) {
        if (!v.is_number_integer() || v.get<int>() < 0)
            throw ParseError("dimension at degree " + key + " must be a nonnegative integer");
        dims[parse_deg(key)] = v.get<int>();
    }
    auto dim_at = [&](int n) {
        auto it = dims.find(n);
        return it == dims.end() ? 0 : it->second;
    };
    std::map<int, RationalMatrix> diffs;
    if (j.contains("diff")) {
        for (const auto& [key, v] : j.at("diff").items()) {
            int n = parse_deg(key);
            diffs[n] = matrix_from_json(v, dim_at(n - 1), dim_at(n));
        }
    }
    std::map<int, std::vector<std::string>> labels;
    if (j.contains("labels")) {
        for (const auto& [key, v] : j.at("labels").items())
            labels[parse_deg(key)] = v.get<std::vector<std::string>>();
    }
    std::map<int, std::vector<int>> weights;
    if (j.contains("weights")) {
        for (const auto& [key, v] : j.at("weights").items())
            weights[parse_deg(key)] = v.get<std::vector<int>>();
    }
    // shape and d∘d violations surface as ShapeMismatch / NotAComplex directly
    return ChainComplex::build(std::move(dims), std::move(diffs), std::move(labels),
                               std::move(weights));
}

Json sym_module_to_json(const SymModule& M) {
    Json comps = Json::object();
    for (int n : M.arities()) {
        const SymArity& an = M.arity(n);
        Json gens = Json::array();
        for (const auto& g : an.gens) {
            Json per = Json::object();
            for (const auto& [d, m] : g) per[std::to_string(d)] = matrix_to_json(m);
            gens.push_back(per);
        }
        comps[std::to_string(n)] = Json{{"complex", complex_to_json(an.cx)}, {"generators", gens}};
    }
    return Json{{"max_arity", M.max_arity()}, {"components", comps}};
}

SymModule sym_module_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("max_arity") || !j.contains("components"))
        throw ParseError("Sigma-module JSON needs 'max_arity' and 'components'");
    std::map<int, SymArity> comp;
    for (const auto& [key, v] : j.at("components").items()) {
        int n = parse_deg(key);
        if (n < 0) throw ParseError("negative arity in Sigma-module JSON");
        SymArity an;
        an.cx = complex_from_json(v.at("complex"));
        int ng = n >= 2 ? n - 1 : 0;
        if (v.contains("generators")) {
            const Json& gl = v.at("generators");
            if ((int)gl.size() != ng)
                throw ParseError("arity " + key + " needs " + std::to_string(ng) +
                                 " transposition generators, got " + std::to_string(gl.size()));
            for (const Json& per : gl) {
                std::map<int, RationalMatrix> g;
                for (const auto& [dk, m] : per.items()) {
                    int d = parse_deg(dk);
                    int dim = an.cx.dim(d);
                    g[d] = matrix_from_json(m, dim, dim);
                }
                an.gens.push_back(std::move(g));
            }
        } else if (ng > 0) {
            throw ParseError("arity " + key + " is missing its 'generators' array");
        }
        comp[n] = std::move(an);
    }
    return SymModule(j.at("max_arity").get<int>(), std::move(comp));
}

} // namespace opforge
