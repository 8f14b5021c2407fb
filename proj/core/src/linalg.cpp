#include "qve/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "qve/errors.hpp"

namespace qve::linalg {

namespace {

constexpr double kMachineEps = 2.2e-16;

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) throw InputError(std::string(what) + ": matrix must be square");
}

// One pass of power iteration with l1 normalization. Returns true on
// convergence; val/vec hold the current estimate either way.
bool power_iterate(const Matrix& m, double& val, Vector& vec) {
    const int n = m.rows();
    Vector v(static_cast<std::size_t>(n), 1.0 / n);
    for (int it = 0; it < kMaxEigIters; ++it) {
        Vector w = m.apply(v);
        const double s = l1_norm(w);
        if (s == 0.0) {
            // v is annihilated: spectral radius 0 along this direction.
            val = 0.0;
            vec = v;
            return true;
        }
        for (double& x : w) x /= s;
        double diff = 0.0;
        for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(w[i] - v[i]));
        v = std::move(w);
        if (diff <= kEigTol) {
            val = s;
            vec = std::move(v);
            return true;
        }
    }
    val = 0.0;
    vec = std::move(v);
    return false;
}

EigenPair dominant_pair(const Matrix& m) {
    require_square(m, "perron");
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            if (m(i, j) < 0.0) throw InputError("perron: matrix must be nonnegative");

    double val = 0.0;
    Vector vec;
    if (!power_iterate(m, val, vec)) {
        // Near-tied moduli (periodic classes). Shift separates the dominant
        // eigenvalue without moving the eigenvectors of a nonnegative matrix.
        const double delta = m.inf_norm() * 1e-3;
        Matrix shifted = m;
        for (int i = 0; i < m.rows(); ++i) shifted(i, i) += delta;
        if (!power_iterate(shifted, val, vec))
            throw NumericError("power iteration did not converge within max_eig_iters");
        val -= delta;
    }
    for (double x : vec)
        if (x <= 0.0)
            throw StructureError("power iteration collapsed to a nonpositive entry; "
                                 "matrix is reducible, pre-screen with scc_partition");
    return EigenPair{val, std::move(vec)};
}

} // namespace

const char* mmatrix_class_name(MmatrixClass c) {
    switch (c) {
        case MmatrixClass::nonsingular_m: return "nonsingular_M";
        case MmatrixClass::singular_m: return "singular_M";
        case MmatrixClass::not_m: return "not_M";
    }
    return "?";
}

EigenPair perron_right(const Matrix& m) { return dominant_pair(m); }

EigenPair perron_left(const Matrix& m) { return dominant_pair(m.transposed()); }

double spectral_radius(const Matrix& m) {
    require_square(m, "spectral_radius");
    const auto comps = scc_partition(BoolMatrix::nonzero_pattern(m));
    double rho = 0.0;
    for (const auto& comp : comps) {
        if (comp.size() == 1) {
            rho = std::max(rho, m(comp[0], comp[0]));
            continue;
        }
        Matrix block(static_cast<int>(comp.size()), static_cast<int>(comp.size()));
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (std::size_t j = 0; j < comp.size(); ++j)
                block(static_cast<int>(i), static_cast<int>(j)) = m(comp[i], comp[j]);
        rho = std::max(rho, dominant_pair(block).value);
    }
    return rho;
}

namespace {

struct Svd {
    Matrix u;     // n x n, columns for truncated modes left as zero
    Vector sigma; // descending
    Matrix v;     // n x n, m = u * diag(sigma) * v^T
};

// One-sided Jacobi: rotate column pairs of a working copy until all pairs
// are numerically orthogonal; singular values are the column norms.
Svd svd_jacobi(const Matrix& m) {
    require_square(m, "svd");
    const int n = m.rows();
    Matrix a = m;
    Matrix v = Matrix::identity(n);
    const int max_sweeps = 60;
    const double ortho_tol = 1e-15;

    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        converged = true;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < n; ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (app == 0.0 || aqq == 0.0) continue;
                if (std::abs(apq) <= ortho_tol * std::sqrt(app * aqq)) continue;
                converged = false;
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (int i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
    }
    if (!converged) throw NumericError("jacobi svd did not converge");

    Svd out{Matrix(n, n), Vector(static_cast<std::size_t>(n), 0.0), Matrix(n, n)};
    std::vector<int> order(static_cast<std::size_t>(n));
    Vector norms(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += a(i, j) * a(i, j);
        norms[j] = std::sqrt(s);
    }
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int x, int y) { return norms[x] > norms[y]; });
    for (int jj = 0; jj < n; ++jj) {
        const int j = order[jj];
        out.sigma[jj] = norms[j];
        for (int i = 0; i < n; ++i) {
            out.v(i, jj) = v(i, j);
            out.u(i, jj) = norms[j] > 0.0 ? a(i, j) / norms[j] : 0.0;
        }
    }
    return out;
}

} // namespace

Matrix pseudo_inverse_apply(const Matrix& m, const Matrix& x) {
    require_square(m, "pseudo_inverse_apply");
    require_dim(m.cols() == x.rows(), "pseudo_inverse_apply");
    const int n = m.rows();
    const Svd f = svd_jacobi(m);
    const double cutoff = n * kMachineEps * (f.sigma.empty() ? 0.0 : f.sigma[0]);
    // m^+ x = v * diag(1/sigma) * u^T * x over the retained modes
    Matrix ut_x(n, x.cols());
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < x.cols(); ++c) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += f.u(i, r) * x(i, c);
            ut_x(r, c) = acc;
        }
    Matrix out(n, x.cols());
    for (int r = 0; r < n; ++r) {
        if (f.sigma[r] <= cutoff) continue;
        const double inv = 1.0 / f.sigma[r];
        for (int i = 0; i < n; ++i) {
            const double vir = f.v(i, r) * inv;
            for (int c = 0; c < x.cols(); ++c) out(i, c) += vir * ut_x(r, c);
        }
    }
    return out;
}

MmatrixVerdict mmatrix_classify(const Matrix& z) {
    require_square(z, "mmatrix_classify");
    const int n = z.rows();
    double s = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) s = std::max(s, z(i, i));

    Matrix b(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                b(i, i) = s - z(i, i);
            } else {
                if (z(i, j) > 1e-14)
                    throw InputError("mmatrix_classify: positive off-diagonal entry, not a Z-matrix");
                b(i, j) = std::max(0.0, -z(i, j));
            }
        }

    MmatrixVerdict verdict;
    verdict.shift = s;
    verdict.rho_offdiag = spectral_radius(b);
    const double band = kMmatrixTol * std::abs(s);
    if (std::abs(verdict.rho_offdiag - s) <= band)
        verdict.cls = MmatrixClass::singular_m;
    else if (verdict.rho_offdiag < s)
        verdict.cls = MmatrixClass::nonsingular_m;
    else
        verdict.cls = MmatrixClass::not_m;
    return verdict;
}

BoolMatrix BoolMatrix::nonzero_pattern(const Matrix& m) {
    BoolMatrix p(m.rows());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) p.set(i, j, m(i, j) != 0.0);
    return p;
}

std::vector<std::vector<int>> scc_partition(const BoolMatrix& pattern) {
    const int n = pattern.dim();

    // Iterative Tarjan.
    std::vector<int> idx(n, -1), low(n, 0), comp_of(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;
    int comp_count = 0;

    struct Frame { int node; int child; };
    for (int root = 0; root < n; ++root) {
        if (idx[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        idx[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.child < n) {
                const int w = f.child++;
                if (!pattern.at(f.node, w) || w == f.node) continue;
                if (idx[w] == -1) {
                    idx[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.node] = std::min(low[f.node], idx[w]);
                }
            } else {
                if (low[f.node] == idx[f.node]) {
                    while (true) {
                        const int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp_of[w] = comp_count;
                        if (w == f.node) break;
                    }
                    ++comp_count;
                }
                const int done = f.node;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().node] = std::min(low[frames.back().node], low[done]);
            }
        }
    }

    // Members per component, ascending inside each.
    std::vector<std::vector<int>> members(static_cast<std::size_t>(comp_count));
    for (int v = 0; v < n; ++v) members[static_cast<std::size_t>(comp_of[v])].push_back(v);

    // Condensation edges, then Kahn's algorithm picking the available
    // component with the smallest member first. Edges run earlier -> later
    // in the emitted order, which is exactly block upper triangular.
    std::vector<std::vector<bool>> edge(static_cast<std::size_t>(comp_count),
                                        std::vector<bool>(static_cast<std::size_t>(comp_count), false));
    std::vector<int> indeg(static_cast<std::size_t>(comp_count), 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!pattern.at(i, j)) continue;
            const int ci = comp_of[i], cj = comp_of[j];
            if (ci != cj && !edge[ci][cj]) {
                edge[ci][cj] = true;
                ++indeg[cj];
            }
        }

    std::vector<int> ready;
    for (int c = 0; c < comp_count; ++c)
        if (indeg[c] == 0) ready.push_back(c);
    auto smallest_member_first = [&](int x, int y) { return members[x][0] < members[y][0]; };

    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(comp_count));
    while (!ready.empty()) {
        const auto it = std::min_element(ready.begin(), ready.end(), smallest_member_first);
        const int c = *it;
        ready.erase(it);
        out.push_back(members[static_cast<std::size_t>(c)]);
        for (int d = 0; d < comp_count; ++d)
            if (edge[c][d] && --indeg[d] == 0) ready.push_back(d);
    }
    return out;
}

namespace {

// GEPP factor-and-solve on a block of right-hand sides stored as columns.
Matrix gepp(Matrix a, Matrix rhs) {
    require_square(a, "linear_solve");
    require_dim(a.rows() == rhs.rows(), "linear_solve");
    const int n = a.rows();
    const double pivot_floor = n * kMachineEps * a.inf_norm();

    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) <= pivot_floor)
            throw NumericError("linear_solve: matrix is singular to working precision");
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
            for (int j = 0; j < rhs.cols(); ++j) std::swap(rhs(col, j), rhs(piv, j));
        }
        const double inv = 1.0 / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            const double factor = a(r, col) * inv;
            if (factor == 0.0) continue;
            a(r, col) = 0.0;
            for (int j = col + 1; j < n; ++j) a(r, j) -= factor * a(col, j);
            for (int j = 0; j < rhs.cols(); ++j) rhs(r, j) -= factor * rhs(col, j);
        }
    }
    for (int col = n - 1; col >= 0; --col) {
        const double inv = 1.0 / a(col, col);
        for (int j = 0; j < rhs.cols(); ++j) {
            double acc = rhs(col, j);
            for (int k = col + 1; k < n; ++k) acc -= a(col, k) * rhs(k, j);
            rhs(col, j) = acc * inv;
        }
    }
    return rhs;
}

} // namespace

Vector linear_solve(Matrix a, Vector rhs) {
    const int n = a.rows();
    Matrix r(n, 1);
    for (int i = 0; i < n; ++i) r(i, 0) = rhs[i];
    Matrix x = gepp(std::move(a), std::move(r));
    Vector out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[i] = x(i, 0);
    return out;
}

Matrix linear_solve(Matrix a, Matrix rhs) { return gepp(std::move(a), std::move(rhs)); }

} // namespace qve::linalg
