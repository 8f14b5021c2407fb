#include "qve/problem.hpp"

#include <cmath>

namespace qve {

QveProblem::QveProblem(Vector a, BilinearTensor b, ProblemKind kind)
    : a_(std::move(a)), b_(std::move(b)) {
    const int n = b_.dim();
    if (static_cast<int>(a_.size()) != n)
        throw InputError("a and b disagree on the problem dimension");
    for (double ai : a_)
        if (ai < 0.0 || !std::isfinite(ai))
            throw InputError("a must be nonnegative and finite");

    const Vector row = b_.row_sums();
    double defect = 0.0;     // max over i of a_i + (b(e,e))_i - 1
    double shortfall = 0.0;  // max over i of 1 - a_i - (b(e,e))_i
    for (int i = 0; i < n; ++i) {
        const double total = a_[i] + row[i];
        defect = std::max(defect, total - 1.0);
        shortfall = std::max(shortfall, 1.0 - total);
    }
    stochastic_ = defect <= kStochasticTol && shortfall <= kStochasticTol;
    if (kind == ProblemKind::stochastic && !stochastic_)
        throw InputError("a + b(e,e) = e violated beyond tolerance; "
                         "pass --renormalize to rescale the input");
    if (kind == ProblemKind::substochastic && defect > kStochasticTol)
        throw InputError("a + b(e,e) <= e violated beyond tolerance");
}

Matrix QveProblem::mean_matrix() const {
    const Vector e = ones(dim());
    return b_.right_matrix(e) + b_.left_matrix(e);
}

Vector QveProblem::residual(const Vector& x) const {
    require_dim(static_cast<int>(x.size()) == dim(), "residual");
    Vector bxx = b_.apply(x, x);
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - a_[i] - bxx[i];
    return r;
}

Matrix QveProblem::jacobian(const Vector& x) const {
    require_dim(static_cast<int>(x.size()) == dim(), "jacobian");
    Matrix j = Matrix::identity(dim());
    j -= b_.right_matrix(x);
    j -= b_.left_matrix(x);
    return j;
}

QveProblem QveProblem::with_variant(VariantKind kind) const {
    if (kind == VariantKind::original) return *this;
    const ProblemKind pk = stochastic_ ? ProblemKind::stochastic : ProblemKind::substochastic;
    return QveProblem(a_, b_.variant(kind), pk);
}

} // namespace qve
