#include "quantopos/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace quantopos {

namespace {

using Json = nlohmann::json;

Mat matrix_from_json(const Json& rows, Eigen::Index dim, const std::string& where) {
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim) {
        throw ParseError(where + ": expected " + std::to_string(dim) + " matrix rows");
    }
    Mat m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        const Json& row = rows[r];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim) {
            throw ParseError(where + ": expected " + std::to_string(dim) + " entries per row");
        }
        for (Eigen::Index c = 0; c < dim; ++c) {
            const Json& cell = row[c];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                !cell[1].is_number()) {
                throw ParseError(where + ": matrix entries must be [re, im] pairs");
            }
            m(r, c) = Complex(cell[0].get<double>(), cell[1].get<double>());
        }
    }
    return m;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("scenario must be a JSON object");

    Scenario sc;
    if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<int>() < 1) {
        throw ParseError("scenario: dim must be a positive integer");
    }
    sc.observables.dim = doc["dim"].get<int>();

    if (doc.contains("tolerance")) {
        if (!doc["tolerance"].is_number() || doc["tolerance"].get<double>() <= 0) {
            throw ParseError("scenario: tolerance must be a positive number");
        }
        sc.tolerance.base = doc["tolerance"].get<double>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) throw ParseError("scenario: seed must be an integer");
        sc.seed = doc["seed"].get<uint64_t>();
    }

    if (!doc.contains("observables") || !doc["observables"].is_array() ||
        doc["observables"].empty()) {
        throw ParseError("observables must be nonempty");
    }
    for (const Json& entry : doc["observables"]) {
        if (!entry.is_object() || !entry.contains("label") || !entry["label"].is_string() ||
            !entry.contains("matrix")) {
            throw ParseError("each observable needs a label and a matrix");
        }
        Observable o;
        o.label = entry["label"].get<std::string>();
        o.matrix = matrix_from_json(entry["matrix"], sc.observables.dim,
                                    "observable '" + o.label + "'");
        sc.observables.entries.push_back(std::move(o));
    }
    validate_observable_set(sc.observables, sc.tolerance);

    if (doc.contains("extra_contexts")) {
        if (!doc["extra_contexts"].is_array()) {
            throw ParseError("extra_contexts must be an array");
        }
        for (const Json& entry : doc["extra_contexts"]) {
            if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string() ||
                !entry.contains("generators") || !entry["generators"].is_array()) {
                throw ParseError("each extra context needs a name and a generator list");
            }
            NamedGenerators g;
            g.name = entry["name"].get<std::string>();
            for (const Json& gen : entry["generators"]) {
                g.generators.push_back(matrix_from_json(gen, sc.observables.dim,
                                                        "extra context '" + g.name + "'"));
            }
            for (size_t i = 0; i < g.generators.size(); ++i) {
                for (size_t j = i + 1; j < g.generators.size(); ++j) {
                    double scale = std::max(frobenius(g.generators[i]), frobenius(g.generators[j]));
                    if (frobenius(commutator(g.generators[i], g.generators[j])) >=
                        sc.tolerance.at(scale)) {
                        throw NonCommutingGenerators("extra context '" + g.name +
                                                     "' has non-commuting generators");
                    }
                }
            }
            sc.extra_contexts.push_back(std::move(g));
        }
    }

    if (doc.contains("k_values")) {
        if (!doc["k_values"].is_array()) throw ParseError("k_values must be an array");
        for (const Json& k : doc["k_values"]) {
            if (!k.is_number()) throw ParseError("k_values entries must be numbers");
            double value = k.get<double>();
            if (value == 0.0) throw ParseError("k_values must not contain 0");
            sc.k_values.push_back(value);
        }
    }
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario_text(buffer.str());
}

uint64_t fnv1a_hash(const std::string& text) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace quantopos
