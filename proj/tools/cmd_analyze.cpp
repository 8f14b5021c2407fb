#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "common.hpp"
#include "qve/structure.hpp"

namespace qve::cli {

namespace {

// A solution is either a bare JSON array or a report file with a
// "solution" field.
Vector load_solution(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open solution file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(ss.str());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("solution file: invalid JSON: ") + e.what());
    }
    const nlohmann::json* arr = nullptr;
    if (doc.is_array())
        arr = &doc;
    else if (doc.is_object() && doc.contains("solution") && doc["solution"].is_array())
        arr = &doc["solution"];
    else
        throw InputError("solution file: expected an array or a report with a solution field");
    if (static_cast<int>(arr->size()) != n)
        throw InputError("solution file: length does not match the problem dimension");
    Vector x;
    x.reserve(arr->size());
    for (const auto& v : *arr) {
        if (!v.is_number()) throw InputError("solution file: entries must be numbers");
        x.push_back(v.get<double>());
    }
    return x;
}

} // namespace

int run_analyze(int argc, char** argv) {
    CLI::App app{"criticality and reducibility structure of a problem"};
    app.name("qve analyze");
    std::string input, generate_spec, solution_path;
    bool renormalize = false;
    app.add_option("--input", input, "problem file (JSON)");
    app.add_option("--generate", generate_spec, "family,n,lambda,seed instead of a file");
    app.add_option("--solution", solution_path,
                   "check this solution's minimality certificate");
    app.add_flag("--renormalize", renormalize, "rescale inputs violating a + b(e,e) = e");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    const QveProblem p = resolve_problem(input, generate_spec, renormalize);
    const structure::StructureReport rep = structure::classify(p);

    std::printf("%s, rho=%s, %s\n", structure::criticality_name(rep.criticality),
                fmt(rep.rho_r).c_str(), rep.irreducible ? "irreducible" : "reducible");
    if (!rep.irreducible) {
        std::printf("components: %zu\n", rep.components.size());
        for (std::size_t c = 0; c < rep.components.size(); ++c) {
            std::printf("component %zu:", c);
            for (int v : rep.components[c]) std::printf(" %d", v);
            std::printf("\n");
        }
    }

    if (!solution_path.empty()) {
        const Vector x = load_solution(solution_path, p.dim());
        const auto verdict = structure::certify_minimal(p, x, 1e-8);
        std::printf("minimality: %s\n", linalg::mmatrix_class_name(verdict.cls));
    }
    return kExitOk;
}

int run_generate(int argc, char** argv) {
    CLI::App app{"write a generated problem instance to a file"};
    app.name("qve generate");
    std::string family = "random_mbt";
    int n = 1;
    double lambda = 0.0;
    std::uint64_t seed = 0;
    std::string output;
    app.add_option("--family", family, "random_mbt|scalar|block_triangular")->required();
    app.add_option("--n", n, "problem dimension")->required();
    app.add_option("--lambda", lambda, "family parameter");
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--output", output, "destination file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    const instances::GeneratorSpec spec{instances::family_from_name(family), n, lambda, seed};
    const QveProblem p = instances::generate(spec);
    nlohmann::json meta;
    meta["family"] = family;
    meta["lambda"] = lambda;
    meta["seed"] = seed;
    instances::save_problem(p, output, meta.dump());
    return kExitOk;
}

} // namespace qve::cli
