#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "quantopos/serialize.hpp"
#include "quantopos/suite.hpp"

namespace fs = std::filesystem;
using namespace quantopos;

namespace {

struct GlobalOptions {
    std::optional<double> tolerance;
    std::optional<uint64_t> seed;
    std::string cache_dir;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file '" + path + "'");
    out << text;
}

Scenario load(const std::string& path, const GlobalOptions& global) {
    Scenario sc = parse_scenario_text(read_file(path));
    if (global.tolerance) sc.tolerance.base = *global.tolerance;
    if (global.seed) sc.seed = *global.seed;
    return sc;
}

std::string cache_directory(const GlobalOptions& global) {
    if (!global.cache_dir.empty()) return global.cache_dir;
    if (const char* env = std::getenv("QUANTOPOS_CACHE")) return env;
    return {};
}

// Poset artifacts are cached under a content hash of the scenario plus the
// effective tolerance.
ContextPoset build_poset_cached(const std::string& path, const Scenario& sc,
                                const GlobalOptions& global) {
    std::string dir = cache_directory(global);
    std::string key;
    if (!dir.empty()) {
        std::string content = read_file(path);
        uint64_t h = fnv1a_hash(content + "|tol=" + std::to_string(sc.tolerance.base) + "|v1");
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
        key = std::string(dir) + "/" + buf + ".poset.json";
        if (fs::exists(key)) {
            try {
                Json doc = Json::parse(read_file(key));
                return context_poset_from_json(sc.observables, doc, sc.tolerance);
            } catch (const std::exception&) {
                // stale or damaged cache entry; fall through and rebuild
            }
        }
    }
    ContextPoset poset = build_context_poset(sc.observables, sc.extra_contexts, 1.0, sc.tolerance);
    if (!key.empty()) {
        fs::create_directories(dir);
        write_file(key, dump_json(context_poset_to_json(sc.observables, poset, true)));
    }
    return poset;
}

void print_contexts(const Scenario& sc, const ContextPoset& poset) {
    std::cout << "contexts (" << poset.size() << "):\n";
    for (size_t v = 0; v < poset.size(); ++v) {
        std::cout << "  [" << v << "] " << poset.names[v] << "  rank " << poset.contexts[v].rank()
                  << "  classicize -> " << context_label(sc.observables, poset.classical_of[v])
                  << "  core -> " << poset.names[poset.core_of[v]] << "\n";
    }
    std::cout << "order pairs:";
    for (auto [u, v] : poset.poset_view().strict_pairs()) {
        std::cout << " " << poset.names[u] << "<" << poset.names[v];
    }
    std::cout << "\nproper category:";
    for (const CommutativeContext& c : proper_category(poset)) {
        std::cout << " " << context_label(sc.observables, c);
    }
    std::cout << "\ncore fixpoints:";
    for (size_t v : core_fixed_contexts(poset)) std::cout << " " << poset.names[v];
    std::cout << "\n";
}

void print_topology(const CoreTopology& top, const SheafClassifier& cls) {
    for (size_t v = 0; v < top.poset.size(); ++v) {
        std::cout << top.poset.label(v) << ": |Omega| = " << top.omega.pre.fiber_size(v)
                  << ", |Omega_j| = " << cls.sub.pre.fiber_size(v) << ", covering sieves:";
        for (size_t i = 0; i < top.omega.sieves[v].size(); ++i) {
            if (top.J.covers(v, i)) std::cout << " " << top.omega.pre.elems[v][i];
        }
        std::cout << "\n";
    }
}

int run_check(const std::string& path, const GlobalOptions& global,
              const std::string& report_path) {
    Scenario sc = load(path, global);
    ContextPoset poset = build_poset_cached(path, sc, global);
    SuiteReport report = run_suite(sc, poset);
    for (const CheckResult& c : report.checks) {
        std::printf("[%s] %s (%.1f ms)\n", c.status.c_str(), c.name.c_str(), c.wall_ms);
        for (const std::string& w : c.witnesses) std::printf("    %s\n", w.c_str());
    }
    if (!report_path.empty()) {
        write_file(report_path, dump_json(report_to_json(report)));
    }
    std::printf("%s\n", report.pass() ? "all checks passed" : "CHECKS FAILED");
    return report.pass() ? 0 : 1;
}

int run_export(const std::string& path, const GlobalOptions& global, const std::string& artifact,
               const std::string& format, const std::string& out_path,
               const std::string& presheaf_path) {
    Scenario sc = load(path, global);
    ContextPoset poset = build_poset_cached(path, sc, global);

    std::string payload;
    if (artifact == "poset") {
        if (format == "graph") {
            payload = context_poset_to_dot(poset);
        } else {
            payload = dump_json(context_poset_to_json(sc.observables, poset, false));
        }
    } else if (artifact == "topology") {
        if (format == "graph") throw UnknownArtifact("graph format is only defined for the poset");
        CoreTopology top = make_core_topology(poset.poset_view(), poset.core_of);
        payload = dump_json(topology_to_json(top, sheaf_classifier(top)));
    } else if (artifact == "presheaf") {
        if (format == "graph") throw UnknownArtifact("graph format is only defined for the poset");
        if (presheaf_path.empty()) {
            throw UnknownArtifact("presheaf export needs --presheaf <file>");
        }
        Presheaf p = presheaf_from_json(poset.poset_view(), Json::parse(read_file(presheaf_path)));
        payload = dump_json(presheaf_to_json(p));
    } else if (artifact == "report") {
        if (format == "graph") throw UnknownArtifact("graph format is only defined for the poset");
        SuiteReport report = run_suite(sc, poset);
        payload = dump_json(report_to_json(report));
    } else {
        throw UnknownArtifact("unknown artifact '" + artifact + "'");
    }

    if (out_path.empty()) {
        std::cout << payload;
    } else {
        write_file(out_path, payload);
    }
    return 0;
}

int run_sheafify(const std::string& path, const GlobalOptions& global,
                 const std::string& presheaf_path, const std::string& out_path) {
    Scenario sc = load(path, global);
    ContextPoset poset = build_poset_cached(path, sc, global);
    FinitePoset view = poset.poset_view();
    CoreTopology top = make_core_topology(view, poset.core_of);

    Presheaf p = presheaf_from_json(view, Json::parse(read_file(presheaf_path)));
    SheafVerdict before = is_sheaf(p, top);
    Presheaf sheafified = sheafify(p, top.core_map);
    SheafVerdict after = is_sheaf(sheafified, top);

    std::cout << "input is " << (before.sheaf() ? "already a sheaf" : "not a sheaf")
              << "; sheafification " << (after.sheaf() ? "is a sheaf" : "FAILED") << "\n";
    std::string payload = dump_json(presheaf_to_json(sheafified));
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        write_file(out_path, payload);
    }
    return after.sheaf() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite model of quantization-induced topologies and sheaves"};
    app.require_subcommand(1);

    GlobalOptions global;
    double tolerance_flag = 0;
    uint64_t seed_flag = 0;
    auto* tol_opt = app.add_option("--tolerance", tolerance_flag, "numerical tolerance base");
    auto* seed_opt = app.add_option("--seed", seed_flag, "seed for sampled checks");
    app.add_option("--cache-dir", global.cache_dir, "poset cache directory");

    std::string scenario_path, report_path, presheaf_path, out_path;
    std::string artifact = "poset", format = "structured";

    CLI::App* contexts = app.add_subcommand("contexts", "build and print the context poset");
    contexts->add_option("scenario", scenario_path)->required();

    CLI::App* topology = app.add_subcommand("topology", "print the quantization topology tables");
    topology->add_option("scenario", scenario_path)->required();

    CLI::App* check = app.add_subcommand("check", "run the full property suite");
    check->add_option("scenario", scenario_path)->required();
    check->add_option("--report", report_path, "write the canonical report JSON here");

    CLI::App* sheafify_cmd = app.add_subcommand("sheafify", "sheafify a presheaf file");
    sheafify_cmd->add_option("scenario", scenario_path)->required();
    sheafify_cmd->add_option("presheaf", presheaf_path)->required();
    sheafify_cmd->add_option("-o,--out", out_path);

    CLI::App* export_cmd = app.add_subcommand("export", "export a computed artifact");
    export_cmd->add_option("scenario", scenario_path)->required();
    export_cmd->add_option("--artifact", artifact, "poset | topology | presheaf | report");
    export_cmd->add_option("--format", format, "structured | graph");
    export_cmd->add_option("--presheaf", presheaf_path, "input presheaf for presheaf export");
    export_cmd->add_option("-o,--out", out_path);

    CLI11_PARSE(app, argc, argv);
    if (tol_opt->count()) global.tolerance = tolerance_flag;
    if (seed_opt->count()) global.seed = seed_flag;

    try {
        if (contexts->parsed()) {
            Scenario sc = load(scenario_path, global);
            ContextPoset poset = build_poset_cached(scenario_path, sc, global);
            print_contexts(sc, poset);
            return 0;
        }
        if (topology->parsed()) {
            Scenario sc = load(scenario_path, global);
            ContextPoset poset = build_poset_cached(scenario_path, sc, global);
            CoreTopology top = make_core_topology(poset.poset_view(), poset.core_of);
            print_topology(top, sheaf_classifier(top));
            return 0;
        }
        if (check->parsed()) return run_check(scenario_path, global, report_path);
        if (sheafify_cmd->parsed()) {
            return run_sheafify(scenario_path, global, presheaf_path, out_path);
        }
        if (export_cmd->parsed()) {
            if (format != "structured" && format != "graph") {
                throw UnknownArtifact("unknown format '" + format + "'");
            }
            return run_export(scenario_path, global, artifact, format, out_path, presheaf_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
