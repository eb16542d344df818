#include "afrac/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "afrac/error.hpp"
#include "afrac/simd.hpp"
#include "axis_apply.hpp"

namespace afrac {

namespace {

constexpr int kStallWindow = 500;
constexpr int kMaxIterations = 100000;

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

double CsrMatrix::entry(std::size_t r, std::size_t c) const {
    const auto b = cols.begin() + row_ptr[r], e = cols.begin() + row_ptr[r + 1];
    const auto it = std::lower_bound(b, e, static_cast<std::int32_t>(c));
    return (it != e && *it == static_cast<std::int32_t>(c)) ? vals[it - cols.begin()] : 0.0;
}

const CsrMatrix& LinearSystem::matrix() const {
    require(matrix_.has_value(), "system was assembled matrix-free");
    return *matrix_;
}

void LinearSystem::apply(const double* x, double* y, int threads) const {
    const auto& k = simd::active();
    const std::size_t n = size();
    if (matrix_) {
        k.csr_spmv(n, matrix_->row_ptr.data(), matrix_->cols.data(), matrix_->vals.data(), x, y);
        return;
    }
    if (dim_ == 1) {
        std::fill(y, y + n, 0.0);
        const std::vector<std::uint8_t> all(n, 1);
        k.toeplitz(band_x_.data(), x, n, all.data(), y);
        return;
    }
    const GridFunction& g = *layout_;
    std::vector<double> in(g.size(), 0.0), out(g.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) in[node_of_[i]] = x[i];
    detail::axis_apply(in.data(), g.mask().data(), g.nx(), g.ny(), band_x_, band_y_, out.data(), threads);
    for (std::size_t i = 0; i < n; ++i) y[i] = out[node_of_[i]];
}

LinearSystem assemble(const Domain& dom, const SpectralMeasure& a, double s, double h, bool build_matrix,
                      Normalization norm, int threads) {
    require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    require(h > 0.0, "h must be positive");
    require(a.dimension() == 2 && a.axis_aligned(),
            "grid solver supports atoms on the coordinate axes only; use pointwise evaluation for other measures");
    LinearSystem sys;
    sys.dim_ = 2;
    sys.s_ = s;
    sys.h_ = h;
    sys.coeffs_ = a.axis_coefficients();
    require(sys.coeffs_[0] > 0.0 && sys.coeffs_[1] > 0.0, "degenerate measure: both axes need positive weight");
    sys.layout_.emplace(GridFunction::covering(dom, h));
    const GridFunction& g = *sys.layout_;
    require(g.interior_count() >= 10, "fewer than 10 interior nodes; refine h");

    sys.system_of_.assign(g.size(), -1);
    for (std::size_t k = 0; k < g.size(); ++k)
        if (g.interior(k)) {
            sys.system_of_[k] = static_cast<std::int64_t>(sys.node_of_.size());
            sys.node_of_.push_back(k);
        }
    const int nx = g.nx(), ny = g.ny(), nmax = std::max(nx, ny);
    const double base = 2.0 * normalization_constant(s, norm) * std::pow(h, -2.0 * s);
    sys.band_x_ = line_band(s, nmax, base * sys.coeffs_[0]);
    sys.band_y_ = line_band(s, nmax, base * sys.coeffs_[1]);
    (void)threads;

    if (!build_matrix) return sys;
    // interior counts per grid line decide the fill
    std::vector<std::size_t> row_count(ny, 0), col_count(nx, 0);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            if (g.interior(i, j)) {
                ++row_count[j];
                ++col_count[i];
            }
    std::size_t nnz = 0;
    for (auto c : row_count) nnz += c * c;
    for (auto c : col_count) nnz += c * c;
    nnz -= sys.size();
    if (nnz > kMaxMatrixEntries) return sys;

    CsrMatrix m;
    m.row_ptr.reserve(sys.size() + 1);
    m.row_ptr.push_back(0);
    m.cols.reserve(nnz);
    m.vals.reserve(nnz);
    std::vector<std::pair<std::int32_t, double>> entries;
    for (std::size_t r = 0; r < sys.size(); ++r) {
        const std::size_t node = sys.node_of_[r];
        const int i = static_cast<int>(node % nx), j = static_cast<int>(node / nx);
        entries.clear();
        double diag = 0.0;
        for (int ii = 0; ii < nx; ++ii) {
            if (!g.interior(ii, j)) continue;
            const double v = sys.band_x_[nmax - 1 + (ii - i)];
            if (ii == i) diag += v;
            else entries.emplace_back(static_cast<std::int32_t>(sys.system_of_[g.index(ii, j)]), v);
        }
        for (int jj = 0; jj < ny; ++jj) {
            if (!g.interior(i, jj)) continue;
            const double v = sys.band_y_[nmax - 1 + (jj - j)];
            if (jj == j) diag += v;
            else entries.emplace_back(static_cast<std::int32_t>(sys.system_of_[g.index(i, jj)]), v);
        }
        entries.emplace_back(static_cast<std::int32_t>(r), diag);
        std::sort(entries.begin(), entries.end());
        for (const auto& [c, v] : entries) {
            m.cols.push_back(c);
            m.vals.push_back(v);
        }
        m.row_ptr.push_back(static_cast<std::int64_t>(m.cols.size()));
    }
    sys.matrix_ = std::move(m);
    return sys;
}

LinearSystem assemble_interval(double lo, double hi, double s, double h, Normalization norm) {
    require(s > 0.0 && s < 1.0, "s must lie in (0,1)");
    require(hi > lo && h > 0.0, "need lo < hi and h > 0");
    const double cells = (hi - lo) / h;
    const long n_cells = std::lround(cells);
    require(std::abs(cells - n_cells) < 1e-9 * std::max(1.0, cells), "h must divide the interval length");
    require(n_cells - 1 >= 10, "fewer than 10 interior nodes; refine h");
    LinearSystem sys;
    sys.dim_ = 1;
    sys.s_ = s;
    sys.h_ = h;
    sys.coeffs_ = {1.0, 0.0};
    const std::size_t n = static_cast<std::size_t>(n_cells - 1);
    for (std::size_t k = 0; k < n; ++k) {
        sys.node_of_.push_back(k);
        sys.system_of_.push_back(static_cast<std::int64_t>(k));
        sys.xs_.push_back(lo + h * static_cast<double>(k + 1));
    }
    const double scale = 2.0 * normalization_constant(s, norm) * std::pow(h, -2.0 * s);
    sys.band_x_ = line_band(s, static_cast<int>(n), scale);
    if (n * n <= kMaxMatrixEntries) {
        CsrMatrix m;
        m.row_ptr.push_back(0);
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                m.cols.push_back(static_cast<std::int32_t>(c));
                m.vals.push_back(sys.band_x_[n - 1 + c - r]);
            }
            m.row_ptr.push_back(static_cast<std::int64_t>(m.cols.size()));
        }
        sys.matrix_ = std::move(m);
    }
    return sys;
}

std::vector<double> conjugate_gradient(const LinearSystem& sys, const std::vector<double>& b, double lin_tol,
                                       SolveStats* stats, int threads) {
    require(lin_tol > 0.0 && lin_tol < 1.0, "lin_tol must lie in (0,1)");
    require(b.size() == sys.size(), "right-hand side has the wrong length");
    for (double v : b) require(std::isfinite(v), "right-hand side must be finite");
    const auto& k = simd::active();
    const std::size_t n = b.size();
    std::vector<double> x(n, 0.0), r = b, p = b, ap(n);
    double rr = k.dot(r.data(), r.data(), n);
    const double bnorm = std::sqrt(rr);
    int it = 0;
    if (bnorm > 0.0) {
        double checkpoint = bnorm;
        while (std::sqrt(rr) > lin_tol * bnorm) {
            if (it >= kMaxIterations) throw NumericalError("conjugate gradients hit the iteration cap");
            sys.apply(p.data(), ap.data(), threads);
            const double pap = k.dot(p.data(), ap.data(), n);
            if (!(pap > 0.0)) throw NumericalError("operator is not positive definite on the search direction");
            const double alpha = rr / pap;
            k.axpy(alpha, p.data(), x.data(), n);
            k.axpy(-alpha, ap.data(), r.data(), n);
            const double rr_new = k.dot(r.data(), r.data(), n);
            k.xpay(r.data(), rr_new / rr, p.data(), n);
            rr = rr_new;
            ++it;
            if (it % kStallWindow == 0) {
                if (std::sqrt(rr) > 0.1 * checkpoint)
                    throw NumericalError("conjugate gradients stalled (residual not reduced 10x in 500 iterations)");
                checkpoint = std::sqrt(rr);
            }
        }
    }
    if (stats) {
        std::vector<double> res(n);
        sys.apply(x.data(), res.data(), threads);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += (b[i] - res[i]) * (b[i] - res[i]);
        stats->residual = bnorm > 0.0 ? std::sqrt(acc) / bnorm : 0.0;
        stats->iterations = it;
    }
    return x;
}

GridFunction solve(const LinearSystem& sys, const GridFunction& g, double lin_tol, SolveStats* stats, int threads) {
    require(sys.dimension() == 2, "grid solve needs a 2D system");
    const GridFunction& lay = sys.layout();
    require(g.nx() == lay.nx() && g.ny() == lay.ny() && g.h() == lay.h(), "right-hand side grid does not match");
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> b(sys.size());
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = g.at(sys.node_of()[k]);
    SolveStats local;
    const std::vector<double> x = conjugate_gradient(sys, b, lin_tol, &local, threads);
    GridFunction u = lay.like();
    for (std::size_t k = 0; k < x.size(); ++k) u.set(sys.node_of()[k], x[k]);
    local.wall_time_ms = elapsed_ms(t0);
    if (stats) *stats = local;
    return u;
}

Solution solve_problem(const Domain& dom, double s, const std::function<double(Vec2)>& g, double h,
                       const SolveOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const LinearSystem sys = assemble(dom, opt.measure, s, h, true, opt.normalization, opt.threads);
    GridFunction rhs = sys.layout().like();
    const GridFunction& lay = sys.layout();
    for (std::size_t k : sys.node_of()) {
        const int i = static_cast<int>(k % lay.nx()), j = static_cast<int>(k / lay.nx());
        rhs.set(k, g(lay.node(i, j)));
    }
    Solution out{sys.layout().like(), {}, dom.describe(), s, h};
    out.u = solve(sys, rhs, opt.lin_tol, &out.stats, opt.threads);
    out.stats.wall_time_ms = elapsed_ms(t0);
    out.u.s_tag = s;
    return out;
}

IntervalSolution solve_interval(double lo, double hi, double s, const std::function<double(double)>& g, double h,
                                double lin_tol, Normalization norm) {
    const auto t0 = std::chrono::steady_clock::now();
    const LinearSystem sys = assemble_interval(lo, hi, s, h, norm);
    IntervalSolution out;
    out.x = sys.interval_nodes();
    std::vector<double> b(out.x.size());
    for (std::size_t k = 0; k < b.size(); ++k) b[k] = g(out.x[k]);
    out.u = conjugate_gradient(sys, b, lin_tol, &out.stats);
    out.stats.wall_time_ms = elapsed_ms(t0);
    return out;
}

}  // namespace afrac
