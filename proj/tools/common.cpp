#include "common.hpp"

#include "qve/errors.hpp"

namespace qve::cli {

instances::GeneratorSpec parse_generate_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        parts.push_back(text.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (parts.size() != 4)
        throw InputError("--generate wants family,n,lambda,seed (e.g. scalar,1,0.25,0)");
    instances::GeneratorSpec spec;
    spec.family = instances::family_from_name(parts[0]);
    try {
        spec.n = std::stoi(parts[1]);
        spec.lambda = std::stod(parts[2]);
        spec.seed = std::stoull(parts[3]);
    } catch (const std::exception&) {
        throw InputError("--generate: cannot parse '" + text + "'");
    }
    return spec;
}

QveProblem resolve_problem(const std::string& input_path, const std::string& generate_spec,
                           bool renormalize) {
    if (input_path.empty() == generate_spec.empty())
        throw InputError("exactly one of --input and --generate is required");
    if (!input_path.empty()) return instances::load_problem(input_path, renormalize);
    return instances::generate(parse_generate_spec(generate_spec));
}

} // namespace qve::cli
