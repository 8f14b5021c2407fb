#include "qve/instances.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qve/errors.hpp"
#include "qve/linalg.hpp"

namespace qve::instances {

using nlohmann::json;

const char* family_name(Family f) {
    switch (f) {
        case Family::random_mbt: return "random_mbt";
        case Family::scalar: return "scalar";
        case Family::block_triangular: return "block_triangular";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    if (name == "random_mbt") return Family::random_mbt;
    if (name == "scalar") return Family::scalar;
    if (name == "block_triangular") return Family::block_triangular;
    throw InputError("unknown instance family: " + name);
}

QveProblem generate(const GeneratorSpec& spec) {
    switch (spec.family) {
        case Family::random_mbt: return generate_random_mbt(spec);
        case Family::scalar: return generate_scalar(spec);
        case Family::block_triangular: return generate_block_triangular(spec);
    }
    throw InputError("unknown instance family");
}

namespace {

// Scale the rows [lo, hi) of b0 by 1/K and derive a on those rows as
// 1 - row_sum of the scaled tensor, so a + b(e,e) = e holds to the last
// bit of the summation the evaluator itself performs.
void scale_block(BilinearTensor& b, Vector& a, int lo, int hi, double k) {
    const int n = b.dim();
    for (int i = lo; i < hi; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j)
            for (int kk = 0; kk < n; ++kk) {
                const double v = b.at(i, j, kk) / k;
                b.set(i, j, kk, v);
                row += v;
            }
        a[i] = std::max(0.0, 1.0 - row);
    }
}

double block_max_row_sum(const BilinearTensor& b, int lo, int hi) {
    const Vector s = b.row_sums();
    double best = 0.0;
    for (int i = lo; i < hi; ++i) best = std::max(best, s[i]);
    return best;
}

BilinearTensor raw_random_tensor(int n, std::uint64_t seed) {
    BilinearTensor b(n);
    Prng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) b.set(i, j, k, rng.next_unit());
    return b;
}

// Unscaled tensor of the block_triangular family: tail rows are confined
// to tail columns (draws for forbidden entries are skipped, not burned),
// and head-internal entries are boosted so the head block has critical
// inflation headroom of its own.
BilinearTensor raw_block_tensor(int n, std::uint64_t seed, int head_dim) {
    BilinearTensor b(n);
    Prng rng(seed);
    constexpr double kHeadBoost = 3.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (i >= head_dim && (j < head_dim || k < head_dim)) continue;
                double v = rng.next_unit();
                if (i < head_dim && j < head_dim && k < head_dim) v *= kHeadBoost;
                b.set(i, j, k, v);
            }
    return b;
}

double block_spectral_radius(const Matrix& r, int lo, int hi) {
    Matrix block(hi - lo, hi - lo);
    for (int i = lo; i < hi; ++i)
        for (int j = lo; j < hi; ++j) block(i - lo, j - lo) = r(i, j);
    return linalg::spectral_radius(block);
}

Matrix mean_matrix_of(const BilinearTensor& b) {
    const Vector e = ones(b.dim());
    return b.right_matrix(e) + b.left_matrix(e);
}

} // namespace

QveProblem generate_random_mbt(const GeneratorSpec& spec) {
    if (spec.n < 1) throw InputError("random_mbt: n must be >= 1");
    if (spec.lambda < 0.0) throw InputError("random_mbt: lambda must be nonnegative");
    BilinearTensor b = raw_random_tensor(spec.n, spec.seed);
    const double k = block_max_row_sum(b, 0, spec.n) + spec.lambda;
    Vector a(static_cast<std::size_t>(spec.n), 0.0);
    scale_block(b, a, 0, spec.n, k);
    return QveProblem(std::move(a), std::move(b));
}

QveProblem generate_scalar(const GeneratorSpec& spec) {
    if (spec.n != 1) throw InputError("scalar: n must be 1");
    if (!(spec.lambda > 0.0 && spec.lambda < 1.0))
        throw InputError("scalar: lambda must lie in (0,1)");
    BilinearTensor b(1);
    b.set(0, 0, 0, 1.0 - spec.lambda);
    return QveProblem(Vector{spec.lambda}, std::move(b));
}

QveProblem generate_block_triangular(const GeneratorSpec& spec) {
    if (spec.n < 2) throw InputError("block_triangular: n must be >= 2");
    if (spec.lambda < 0.0) throw InputError("block_triangular: lambda must be nonnegative");
    const int tail_dim = (spec.n + 1) / 2;
    const int head_dim = spec.n - tail_dim;
    BilinearTensor b = raw_block_tensor(spec.n, spec.seed, head_dim);

    const Matrix r0 = mean_matrix_of(b);
    const double head_crit =
        block_spectral_radius(r0, 0, head_dim) - block_max_row_sum(b, 0, head_dim);
    if (head_crit <= 0.0)
        throw NumericError("block_triangular: head block has no supercritical headroom");

    Vector a(static_cast<std::size_t>(spec.n), 0.0);
    const double k_head = block_max_row_sum(b, 0, head_dim) + 0.5 * head_crit;
    const double k_tail = block_max_row_sum(b, head_dim, spec.n) + spec.lambda;
    scale_block(b, a, 0, head_dim, k_head);
    scale_block(b, a, head_dim, spec.n, k_tail);
    return QveProblem(std::move(a), std::move(b));
}

double random_mbt_critical_lambda(int n, std::uint64_t seed) {
    const BilinearTensor b = raw_random_tensor(n, seed);
    return linalg::spectral_radius(mean_matrix_of(b)) - block_max_row_sum(b, 0, n);
}

double block_triangular_tail_critical_lambda(int n, std::uint64_t seed) {
    const int tail_dim = (n + 1) / 2;
    const int head_dim = n - tail_dim;
    const BilinearTensor b = raw_block_tensor(n, seed, head_dim);
    return block_spectral_radius(mean_matrix_of(b), head_dim, n) -
           block_max_row_sum(b, head_dim, n);
}

namespace {

QveProblem problem_from_json(const json& doc, bool renormalize) {
    if (!doc.is_object()) throw InputError("problem file: top level must be an object");
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw InputError("problem file: missing integer field n");
    const int n = doc["n"].get<int>();
    if (n < 1) throw InputError("problem file: n must be >= 1");

    if (!doc.contains("a") || !doc["a"].is_array() || doc["a"].size() != static_cast<std::size_t>(n))
        throw InputError("problem file: a must be an array of length n");
    Vector a;
    a.reserve(static_cast<std::size_t>(n));
    for (const auto& v : doc["a"]) {
        if (!v.is_number()) throw InputError("problem file: a entries must be numbers");
        const double ai = v.get<double>();
        if (ai < 0.0 || !std::isfinite(ai))
            throw InputError("problem file: negative a coefficient");
        a.push_back(ai);
    }

    BilinearTensor b(n);
    if (!doc.contains("b") || !doc["b"].is_array())
        throw InputError("problem file: b must be an array of [i,j,k,value] rows");
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& row : doc["b"]) {
        if (!row.is_array() || row.size() != 4)
            throw InputError("problem file: each b row must be [i,j,k,value]");
        for (int f = 0; f < 3; ++f)
            if (!row[f].is_number_integer())
                throw InputError("problem file: b indices must be integers");
        const int i = row[0].get<int>(), j = row[1].get<int>(), k = row[2].get<int>();
        if (i < 0 || i >= n || j < 0 || j >= n || k < 0 || k >= n)
            throw InputError("problem file: b index out of range");
        if (!seen.insert({i, j, k}).second)
            throw InputError("problem file: duplicate b entry");
        if (!row[3].is_number()) throw InputError("problem file: b value must be a number");
        const double v = row[3].get<double>();
        if (v < 0.0) throw InputError("problem file: negative b coefficient");
        b.set(i, j, k, v);
    }

    if (renormalize) {
        // Algorithm-2-style rescaling: divide b by the worst row total and
        // re-derive a, instead of silently accepting a broken model.
        const Vector s = b.row_sums();
        double k_scale = 0.0;
        for (int i = 0; i < n; ++i) k_scale = std::max(k_scale, a[i] + s[i]);
        if (k_scale <= 0.0) throw InputError("problem file: cannot renormalize all-zero data");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    if (b.at(i, j, k) != 0.0) b.set(i, j, k, b.at(i, j, k) / k_scale);
        const Vector scaled = b.row_sums();
        for (int i = 0; i < n; ++i) a[i] = std::max(0.0, 1.0 - scaled[i]);
    }
    return QveProblem(std::move(a), std::move(b));
}

json problem_to_json(const QveProblem& p, const std::string& meta_json_text) {
    json doc;
    doc["n"] = p.dim();
    doc["a"] = p.a();
    json triples = json::array();
    const int n = p.dim();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double v = p.b().at(i, j, k);
                if (v != 0.0) triples.push_back(json::array({i, j, k, v}));
            }
    doc["b"] = std::move(triples);
    if (!meta_json_text.empty()) doc["meta"] = json::parse(meta_json_text);
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write file: " + path);
    out << text;
    if (!out) throw InputError("write failed: " + path);
}

} // namespace

QveProblem load_problem(const std::string& path, bool renormalize) {
    return problem_from_json_text(read_file(path), renormalize);
}

QveProblem problem_from_json_text(const std::string& text, bool renormalize) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("problem file: invalid JSON: ") + e.what());
    }
    return problem_from_json(doc, renormalize);
}

void save_problem(const QveProblem& p, const std::string& path,
                  const std::string& meta_json_text) {
    write_file(path, problem_to_json_text(p, meta_json_text));
}

std::string problem_to_json_text(const QveProblem& p, const std::string& meta_json_text) {
    return problem_to_json(p, meta_json_text).dump(2) + "\n";
}

std::string report_to_json_text(const solvers::SolverReport& rep) {
    json doc;
    doc["solver"] = rep.solver;
    doc["solution"] = rep.solution;
    doc["iterations"] = rep.iterations;
    doc["residual_history"] = rep.residual_history;
    doc["status"] = solvers::status_name(rep.status);
    doc["minimality"] =
        rep.minimality ? json(linalg::mmatrix_class_name(rep.minimality->cls)) : json(nullptr);
    return doc.dump(2) + "\n";
}

void save_report(const solvers::SolverReport& rep, const std::string& path) {
    write_file(path, report_to_json_text(rep));
}

} // namespace qve::instances
