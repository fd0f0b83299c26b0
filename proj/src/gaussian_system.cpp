// SPDX-License-Identifier: Apache-2.0

#include "m21/gaussian_system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace m21 {

namespace {

constexpr double kPsdTol = 1e-10;
constexpr long double kSingularTol = 1e-12L;
constexpr long double kDegenerateTol = 1e-10L;

// The Schur arithmetic runs in extended precision: conditional variances can
// be tiny differences of near-equal correlations, and the extra mantissa bits
// keep the oracle comfortably inside its 1e-9 contract.
using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

double log2_2pie() { return std::log2(2.0 * std::numbers::pi * std::numbers::e); }

LMatrix submatrix(const LMatrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
    LMatrix out(rows.size(), cols.size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols.size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(rows[i], cols[j]);
    return out;
}

/// 0.5 * log2 det of a symmetric PSD matrix; throws when singular.
double half_log2_det(const LMatrix& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<LMatrix> es(m);
    const long double scale = std::max<long double>(1.0L, es.eigenvalues().maxCoeff());
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const long double lambda = es.eigenvalues()(i);
        if (lambda <= kSingularTol * scale) throw SingularCovariance("singular covariance");
        acc += std::log2(lambda);
    }
    return static_cast<double>(0.5L * acc);
}

struct ConditionalCov {
    LMatrix sigma;
    bool degenerate = false;
};

ConditionalCov conditional_cov(const LMatrix& cov, const std::vector<int>& a,
                               const std::vector<int>& c) {
    ConditionalCov out;
    LMatrix saa = submatrix(cov, a, a);
    if (c.empty()) {
        out.sigma = std::move(saa);
        return out;
    }
    LMatrix sac = submatrix(cov, a, c);
    LMatrix scc = submatrix(cov, c, c);
    Eigen::SelfAdjointEigenSolver<LMatrix> es(scc);
    const long double scale = std::max<long double>(1.0L, es.eigenvalues().maxCoeff());
    LVector inv_l = es.eigenvalues();
    for (Eigen::Index i = 0; i < inv_l.size(); ++i) {
        if (es.eigenvalues()(i) <= kDegenerateTol * scale) {
            inv_l(i) = 0.0L;  // pseudo-inverse direction
            out.degenerate = true;
        } else {
            inv_l(i) = 1.0L / es.eigenvalues()(i);
        }
    }
    LMatrix pinv = es.eigenvectors() * inv_l.asDiagonal() * es.eigenvectors().transpose();
    out.sigma = saa - sac * pinv * sac.transpose();
    return out;
}

}  // namespace

int GaussianSystem::add_variable(const std::string& name, double variance) {
    return add_variable(name, variance, {});
}

int GaussianSystem::add_variable(const std::string& name, double variance,
                                 const std::vector<std::pair<std::string, double>>& cross_cov) {
    for (const auto& l : labels_)
        if (l == name) throw std::invalid_argument("duplicate variable label \"" + name + "\"");
    const int n = dim();
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n + 1, n + 1);
    next.topLeftCorner(n, n) = cov_;
    next(n, n) = variance;
    for (const auto& [other, cval] : cross_cov) {
        const int j = index_of(other);
        next(n, j) = cval;
        next(j, n) = cval;
    }
    cov_ = std::move(next);
    labels_.push_back(name);
    return n;
}

int GaussianSystem::add_combination(const std::string& name,
                                    const std::vector<std::pair<std::string, double>>& terms,
                                    double extra_noise_var) {
    for (const auto& l : labels_)
        if (l == name) throw std::invalid_argument("duplicate variable label \"" + name + "\"");
    const int n = dim();
    Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
    for (const auto& [other, coef] : terms) a(index_of(other)) += coef;
    Eigen::VectorXd cross = cov_ * a;
    const double var = a.dot(cross) + extra_noise_var;
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n + 1, n + 1);
    next.topLeftCorner(n, n) = cov_;
    next(n, n) = var;
    next.block(n, 0, 1, n) = cross.transpose();
    next.block(0, n, n, 1) = cross;
    cov_ = std::move(next);
    labels_.push_back(name);
    return n;
}

int GaussianSystem::index_of(const std::string& name) const {
    for (int i = 0; i < dim(); ++i)
        if (labels_[static_cast<size_t>(i)] == name) return i;
    throw std::invalid_argument("unknown variable label \"" + name + "\"");
}

ValidationReport GaussianSystem::validate() const {
    ValidationReport rep;
    std::set<std::string> seen;
    for (const auto& l : labels_)
        if (!seen.insert(l).second) rep.violations.push_back("duplicate label " + l);
    if (dim() > 0) {
        const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-12) rep.violations.push_back("covariance not symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov_);
        if (es.eigenvalues().minCoeff() < -kPsdTol * std::max(1.0, es.eigenvalues().maxCoeff()))
            rep.violations.push_back("covariance has a negative eigenvalue");
    }
    return rep;
}

double gaussian_entropy(const GaussianSystem& sys, std::span<const std::string> vars) {
    std::vector<int> idx;
    idx.reserve(vars.size());
    for (const auto& v : vars) idx.push_back(sys.index_of(v));
    LMatrix sigma(idx.size(), idx.size());
    for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j)
            sigma(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = sys.covariance()(idx[i], idx[j]);
    return 0.5 * static_cast<double>(idx.size()) * log2_2pie() + half_log2_det(sigma);
}

MiResult gaussian_mi(const GaussianSystem& sys, std::span<const std::string> a,
                     std::span<const std::string> b, std::span<const std::string> c) {
    std::set<std::string> cset(c.begin(), c.end());
    std::vector<std::string> a2, b2;
    for (const auto& v : a)
        if (!cset.count(v)) a2.push_back(v);
    for (const auto& v : b)
        if (!cset.count(v)) b2.push_back(v);
    MiResult res;
    if (a2.empty() || b2.empty()) return res;

    std::set<std::string> aset(a2.begin(), a2.end());
    for (const auto& v : b2)
        if (aset.count(v)) {
            res.bits = std::numeric_limits<double>::infinity();
            return res;
        }

    // Work on the correlation-normalized submatrix of the involved variables.
    // Mutual information is invariant under per-variable scaling, and unit
    // diagonals keep the Schur subtractions well conditioned when variances
    // spread over many orders of magnitude.
    std::vector<int> global;
    std::vector<int> ia, ib, iab, ic;
    auto local_of = [&](const std::string& v) {
        const int g = sys.index_of(v);
        for (size_t i = 0; i < global.size(); ++i)
            if (global[i] == g) return static_cast<int>(i);
        global.push_back(g);
        return static_cast<int>(global.size()) - 1;
    };
    for (const auto& v : a2) ia.push_back(local_of(v));
    for (const auto& v : b2) ib.push_back(local_of(v));
    iab = ia;
    iab.insert(iab.end(), ib.begin(), ib.end());
    for (const auto& v : cset) ic.push_back(local_of(v));

    const Eigen::MatrixXd& cov = sys.covariance();
    const int n = static_cast<int>(global.size());
    LVector scale(n);
    for (int i = 0; i < n; ++i) {
        const long double var = cov(global[static_cast<size_t>(i)], global[static_cast<size_t>(i)]);
        scale(i) = var > 0.0L ? 1.0L / std::sqrt(var) : 1.0L;
    }
    LMatrix corr(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            corr(i, j) = static_cast<long double>(cov(global[static_cast<size_t>(i)], global[static_cast<size_t>(j)])) *
                         scale(i) * scale(j);

    ConditionalCov ca = conditional_cov(corr, ia, ic);
    ConditionalCov cb = conditional_cov(corr, ib, ic);
    ConditionalCov cab = conditional_cov(corr, iab, ic);
    res.degenerate_conditioning = ca.degenerate || cb.degenerate || cab.degenerate;

    const double ha = half_log2_det(ca.sigma);
    const double hb = half_log2_det(cb.sigma);
    double hab;
    try {
        hab = half_log2_det(cab.sigma);
    } catch (const SingularCovariance&) {
        // A and B are a.s. linearly dependent given C.
        res.bits = std::numeric_limits<double>::infinity();
        return res;
    }
    // The scaling terms cancel between h(A|C) + h(B|C) and h(A,B|C).
    res.bits = ha + hb - hab;
    return res;
}

GaussianSystem make_channel_system(const StandardChannel& ch) {
    GaussianSystem sys;
    for (int i = 1; i <= ch.K; ++i) sys.add_variable("x" + std::to_string(i), ch.power(i));
    for (int r = 1; r <= ch.K; ++r) sys.add_variable("n" + std::to_string(r), ch.noise_var(r));
    std::vector<std::pair<std::string, double>> y1_terms = {{"x1", 1.0}, {"n1", 1.0}};
    for (int j = 2; j <= ch.K; ++j) y1_terms.emplace_back("x" + std::to_string(j), ch.cross_gain(j));
    sys.add_combination("y1", y1_terms);
    for (int i = 2; i <= ch.K; ++i)
        sys.add_combination("y" + std::to_string(i),
                            {{"x" + std::to_string(i), 1.0}, {"n" + std::to_string(i), 1.0}});
    return sys;
}

}  // namespace m21
