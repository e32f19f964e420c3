#include "quantopos/serialize.hpp"

#include <algorithm>

namespace quantopos {

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat matrix_from_json_array(const Json& rows, Eigen::Index dim) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) {
        throw ParseError("matrix: wrong row count");
    }
    Mat m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        if (!rows[r].is_array() || static_cast<Eigen::Index>(rows[r].size()) != dim) {
            throw ParseError("matrix: wrong column count");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            const Json& cell = rows[r][c];
            if (!cell.is_array() || cell.size() != 2) {
                throw ParseError("matrix: entries must be [re, im] pairs");
            }
            m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return m;
}

Json context_poset_to_json(const ObservableSet& obs, const ContextPoset& poset,
                           bool include_bases) {
    Json doc;
    doc["schema"] = "quantopos-poset-v1";
    doc["dim"] = obs.dim;
    Json contexts = Json::array();
    for (size_t v = 0; v < poset.size(); ++v) {
        Json c;
        c["index"] = v;
        c["name"] = poset.names[v];
        c["rank"] = poset.contexts[v].rank();
        c["classicize"] = context_label(obs, poset.classical_of[v]);
        if (include_bases) {
            Json basis = Json::array();
            for (const Mat& b : poset.contexts[v].basis) basis.push_back(matrix_to_json(b));
            c["basis"] = std::move(basis);
        }
        contexts.push_back(std::move(c));
    }
    doc["contexts"] = std::move(contexts);

    Json pairs = Json::array();
    for (auto [u, v] : poset.poset_view().strict_pairs()) {
        pairs.push_back(Json::array({u, v}));
    }
    doc["order_pairs"] = std::move(pairs);
    doc["core"] = poset.core_of;
    doc["bottom"] = poset.bottom;
    return doc;
}

ContextPoset context_poset_from_json(const ObservableSet& obs, const Json& doc,
                                     const Tolerance& tol) {
    if (!doc.is_object() || doc.value("schema", "") != "quantopos-poset-v1" ||
        !doc.contains("contexts")) {
        throw ParseError("context poset: unrecognized document");
    }
    ContextPoset poset;
    poset.classical_objects = enumerate_commutative_subsets(obs, tol);
    for (const Json& c : doc["contexts"]) {
        if (!c.contains("basis")) {
            throw ParseError("context poset: document has no basis data, cannot reload");
        }
        StarAlgebra alg;
        alg.dim = obs.dim;
        for (const Json& b : c["basis"]) {
            alg.basis.push_back(matrix_from_json_array(b, obs.dim));
        }
        alg.commutative = true;
        if (auto why = validate_star_algebra(alg, tol)) {
            throw ParseError("context poset: stored context invalid: " + *why);
        }
        poset.contexts.push_back(std::move(alg));
        poset.names.push_back(c["name"].get<std::string>());
    }
    size_t n = poset.contexts.size();
    poset.bottom = doc["bottom"].get<size_t>();
    poset.core_of = doc["core"].get<std::vector<size_t>>();

    poset.leq.assign(n, std::vector<bool>(n, false));
    for (size_t u = 0; u < n; ++u) {
        for (size_t v = 0; v < n; ++v) {
            poset.leq[u][v] = span_leq(poset.contexts[u], poset.contexts[v], tol);
        }
    }
    poset.classical_of.resize(n);
    poset.quantize_of.assign(poset.classical_objects.size(), 0);
    for (size_t v = 0; v < n; ++v) {
        poset.classical_of[v] = classicize(obs, poset.contexts[v], 1.0, tol);
    }
    for (size_t ci = 0; ci < poset.classical_objects.size(); ++ci) {
        StarAlgebra alg = quantize(obs, poset.classical_objects[ci], 1.0, tol);
        bool found = false;
        for (size_t v = 0; v < n && !found; ++v) {
            if (span_equal(alg, poset.contexts[v], tol)) {
                poset.quantize_of[ci] = v;
                found = true;
            }
        }
        if (!found) throw ParseError("context poset: stored poset misses a quantize image");
    }
    if (auto why = validate_context_poset(poset, tol)) {
        throw ParseError("context poset: reloaded poset invalid: " + *why);
    }
    return poset;
}

std::string context_poset_to_dot(const ContextPoset& poset) {
    std::string out = "digraph contexts {\n";
    for (size_t v = 0; v < poset.size(); ++v) {
        out += "  \"" + poset.names[v] + "\";\n";
    }
    for (auto [u, v] : poset.poset_view().cover_pairs()) {
        out += "  \"" + poset.names[u] + "\" -> \"" + poset.names[v] + "\";\n";
    }
    for (size_t v = 0; v < poset.size(); ++v) {
        if (poset.core_of[v] != v) {
            out += "  \"" + poset.names[v] + "\" -> \"" + poset.names[poset.core_of[v]] +
                   "\" [style=dashed];\n";
        }
    }
    out += "}\n";
    return out;
}

Json topology_to_json(const CoreTopology& top, const SheafClassifier& cls) {
    Json doc;
    doc["schema"] = "quantopos-topology-v1";
    Json covering = Json::object();
    for (size_t v = 0; v < top.poset.size(); ++v) {
        Json sieves = Json::array();
        for (size_t i = 0; i < top.omega.sieves[v].size(); ++i) {
            if (!top.J.covers(v, i)) continue;
            Json members = Json::array();
            for (size_t u = 0; u < top.poset.size(); ++u) {
                if (top.omega.sieves[v][i].members.test(u)) members.push_back(top.poset.label(u));
            }
            sieves.push_back(std::move(members));
        }
        covering[top.poset.label(v)] = std::move(sieves);
    }
    doc["covering_sieves"] = std::move(covering);

    Json omega_sizes = Json::object();
    Json classifier_sizes = Json::object();
    Json core = Json::object();
    for (size_t v = 0; v < top.poset.size(); ++v) {
        omega_sizes[top.poset.label(v)] = top.omega.pre.fiber_size(v);
        classifier_sizes[top.poset.label(v)] = cls.sub.pre.fiber_size(v);
        core[top.poset.label(v)] = top.poset.label(top.core[v]);
    }
    doc["omega_sizes"] = std::move(omega_sizes);
    doc["sheaf_classifier_sizes"] = std::move(classifier_sizes);
    doc["core"] = std::move(core);
    return doc;
}

Json presheaf_to_json(const Presheaf& p) {
    Json doc;
    doc["schema"] = "quantopos-presheaf-v1";
    Json fibers = Json::object();
    for (size_t v = 0; v < p.objects(); ++v) {
        fibers[p.poset.label(v)] = p.elems[v];
    }
    doc["fibers"] = std::move(fibers);
    Json restrictions = Json::array();
    for (size_t v = 0; v < p.objects(); ++v) {
        for (size_t u = 0; u < p.objects(); ++u) {
            if (u == v || !p.poset.leq(u, v)) continue;
            Json entry;
            entry["from"] = p.poset.label(v);
            entry["to"] = p.poset.label(u);
            Json map = Json::object();
            for (uint32_t e = 0; e < p.fiber_size(v); ++e) {
                map[p.elems[v][e]] = p.elems[u][p.restricted(v, u, e)];
            }
            entry["map"] = std::move(map);
            restrictions.push_back(std::move(entry));
        }
    }
    doc["restrictions"] = std::move(restrictions);
    return doc;
}

Presheaf presheaf_from_json(const FinitePoset& poset, const Json& doc) {
    if (!doc.is_object() || !doc.contains("fibers")) {
        throw ParseError("presheaf: document needs a fibers object");
    }
    auto object_index = [&](const std::string& label) -> size_t {
        for (size_t v = 0; v < poset.size(); ++v) {
            if (poset.label(v) == label) return v;
        }
        throw ParseError("presheaf: unknown poset object '" + label + "'");
    };

    Presheaf p;
    p.poset = poset;
    p.elems.resize(poset.size());
    p.res.assign(poset.size(), std::vector<std::vector<uint32_t>>(poset.size()));

    for (const auto& [label, fiber] : doc["fibers"].items()) {
        size_t v = object_index(label);
        if (!fiber.is_array()) throw ParseError("presheaf: fiber of '" + label + "' not an array");
        for (const Json& e : fiber) p.elems[v].push_back(e.get<std::string>());
        std::vector<std::string> sorted = p.elems[v];
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw ParseError("presheaf: duplicate element label in fiber '" + label + "'");
        }
    }
    for (size_t v = 0; v < poset.size(); ++v) {
        for (uint32_t e = 0; e < p.fiber_size(v); ++e) p.res[v][v].push_back(e);
    }
    auto element_index = [&](size_t v, const std::string& label) -> uint32_t {
        for (uint32_t e = 0; e < p.fiber_size(v); ++e) {
            if (p.elems[v][e] == label) return e;
        }
        throw ParseError("presheaf: unknown element '" + label + "' at " + poset.label(v));
    };
    if (doc.contains("restrictions")) {
        for (const Json& entry : doc["restrictions"]) {
            size_t v = object_index(entry.at("from").get<std::string>());
            size_t u = object_index(entry.at("to").get<std::string>());
            if (u == v || !poset.leq(u, v)) {
                throw ParseError("presheaf: restriction edge is not a strict order pair");
            }
            std::vector<uint32_t> table(p.fiber_size(v), UINT32_MAX);
            for (const auto& [from_label, to_label] : entry.at("map").items()) {
                table[element_index(v, from_label)] =
                    element_index(u, to_label.get<std::string>());
            }
            for (uint32_t e = 0; e < p.fiber_size(v); ++e) {
                if (table[e] == UINT32_MAX) {
                    throw ParseError("presheaf: restriction map misses element '" +
                                     p.elems[v][e] + "'");
                }
            }
            p.res[v][u] = std::move(table);
        }
    }
    if (auto why = validate_presheaf(p)) throw ParseError("presheaf: " + *why);
    return p;
}

std::string dump_json(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace quantopos
