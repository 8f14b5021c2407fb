#include "qve/structure.hpp"

#include <algorithm>
#include <cmath>

#include "qve/errors.hpp"

namespace qve::structure {

const char* criticality_name(Criticality c) {
    switch (c) {
        case Criticality::subcritical: return "subcritical";
        case Criticality::critical: return "critical";
        case Criticality::supercritical: return "supercritical";
    }
    return "?";
}

Criticality criticality_of(double rho) {
    if (std::abs(rho - 1.0) <= kCritTol) return Criticality::critical;
    return rho < 1.0 ? Criticality::subcritical : Criticality::supercritical;
}

StructureReport classify(const QveProblem& p) {
    const Matrix r = p.mean_matrix();
    StructureReport rep;
    rep.components = linalg::scc_partition(linalg::BoolMatrix::nonzero_pattern(r));
    rep.irreducible = rep.components.size() == 1;
    rep.rho_r = linalg::spectral_radius(r);
    rep.criticality = criticality_of(rep.rho_r);
    return rep;
}

namespace {

QveProblem permute_problem(const QveProblem& p, const std::vector<int>& perm) {
    const int n = p.dim();
    Vector a(static_cast<std::size_t>(n));
    BilinearTensor b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = p.a()[perm[i]];
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const double v = p.b().at(perm[i], perm[j], perm[k]);
                if (v != 0.0) b.set(i, j, k, v);
            }
    }
    const ProblemKind kind = p.stochastic() ? ProblemKind::stochastic : ProblemKind::substochastic;
    return QveProblem(std::move(a), std::move(b), kind);
}

QveProblem restrict_tail(const QveProblem& permuted, int head_dim) {
    const int n = permuted.dim();
    const int m = n - head_dim;
    Vector a(static_cast<std::size_t>(m));
    BilinearTensor b(m);
    for (int i = 0; i < m; ++i) {
        a[i] = permuted.a()[head_dim + i];
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                const double v = permuted.b().at(head_dim + i, head_dim + j, head_dim + k);
                if (v != 0.0) b.set(i, j, k, v);
            }
    }
    const ProblemKind kind =
        permuted.stochastic() ? ProblemKind::stochastic : ProblemKind::substochastic;
    return QveProblem(std::move(a), std::move(b), kind);
}

} // namespace

ReducedProblem split_reducible(const QveProblem& p) {
    const auto comps = linalg::scc_partition(
        linalg::BoolMatrix::nonzero_pattern(p.mean_matrix()));
    if (comps.size() < 2)
        throw InputError("split_reducible: R is irreducible, nothing to split");

    std::vector<int> perm;
    perm.reserve(static_cast<std::size_t>(p.dim()));
    for (const auto& comp : comps) perm.insert(perm.end(), comp.begin(), comp.end());

    QveProblem permuted = permute_problem(p, perm);
    const int head_dim = p.dim() - static_cast<int>(comps.back().size());
    QveProblem tail = restrict_tail(permuted, head_dim);
    return ReducedProblem{std::move(perm), head_dim, std::move(permuted), std::move(tail)};
}

Vector back_substitute(const ReducedProblem& rp, const Vector& x2,
                       const InnerSolver& inner_solver) {
    const int n = rp.permuted.dim();
    const int m = rp.head_dim;
    const int tail_dim = n - m;
    require_dim(static_cast<int>(x2.size()) == tail_dim, "back_substitute");
    if (m < 1) throw InputError("back_substitute: head block is empty");

    // y = Q^T x2, padded to full length.
    Vector y(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < tail_dim; ++i) y[m + i] = x2[i];

    // T_y = I_M - [b(.,y)]_hh - [b(y,.)]_hh
    const Matrix left = rp.permuted.b().left_matrix(y);
    const Matrix right = rp.permuted.b().right_matrix(y);
    Matrix t = Matrix::identity(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) t(i, j) -= left(i, j) + right(i, j);

    if (linalg::mmatrix_classify(t).cls != linalg::MmatrixClass::nonsingular_m)
        throw StructureError("back_substitute: T_{x2} is not a nonsingular M-matrix; "
                             "the x* > 0 assumption does not hold");

    // a_y = T^{-1} (a_1 + [b(y,y)]_head)
    const Vector byy = rp.permuted.b().apply(y, y);
    Vector rhs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) rhs[i] = rp.permuted.a()[i] + byy[i];
    Vector a_head = linalg::linear_solve(t, rhs);

    // b_y(u,v) = T^{-1} [b(P^T u, P^T v)]_head: head-restricted tensor with
    // T^{-1} applied across the output index.
    Matrix cols(m, m * m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            for (int i = 0; i < m; ++i) cols(i, j * m + k) = rp.permuted.b().at(i, j, k);
    Matrix solved = linalg::linear_solve(t, std::move(cols));

    BilinearTensor b_head(m);
    for (int i = 0; i < m; ++i) {
        // M-matrix inverses are nonnegative; sweep tiny negative roundoff.
        if (a_head[i] < 0.0) {
            if (a_head[i] < -1e-12) throw StructureError("back_substitute: negative a_y entry");
            a_head[i] = 0.0;
        }
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                double v = solved(i, j * m + k);
                if (v < 0.0) {
                    if (v < -1e-12) throw StructureError("back_substitute: negative b_y entry");
                    v = 0.0;
                }
                b_head.set(i, j, k, v);
            }
    }

    QveProblem head(std::move(a_head), std::move(b_head), ProblemKind::substochastic);
    const Vector x1 = inner_solver(head);

    Vector assembled(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) assembled[rp.permutation[i]] = x1[i];
    for (int i = 0; i < tail_dim; ++i) assembled[rp.permutation[m + i]] = x2[i];
    return assembled;
}

linalg::MmatrixVerdict certify_minimal(const QveProblem& p, const Vector& x,
                                       double residual_tol) {
    require_dim(static_cast<int>(x.size()) == p.dim(), "certify_minimal");
    if (inf_norm(p.residual(x)) > residual_tol)
        throw InputError("certify_minimal: x is not a solution within tolerance");
    for (double xi : x)
        if (xi <= 0.0) throw InputError("certify_minimal: x must be strictly positive");
    return linalg::mmatrix_classify(p.jacobian(x));
}

} // namespace qve::structure
