// SPDX-License-Identifier: Apache-2.0

#include "m21/monte_carlo.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "m21/philox.hpp"

namespace m21 {

McEstimate mc_entropy(const GaussianSystem& sys, std::span<const std::string> vars,
                      const McConfig& cfg) {
    if (cfg.samples < 1000) throw std::invalid_argument("McConfig.samples must be >= 1000");

    std::vector<int> idx;
    for (const auto& v : vars) idx.push_back(sys.index_of(v));
    const int d = static_cast<int>(idx.size());
    Eigen::MatrixXd sigma(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sigma(i, j) = sys.covariance()(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    const double scale = std::max(1.0, es.eigenvalues().maxCoeff());
    double log2det = 0.0;
    for (int i = 0; i < d; ++i) {
        if (es.eigenvalues()(i) <= 1e-12 * scale) throw SingularCovariance("singular covariance");
        log2det += std::log2(es.eigenvalues()(i));
    }
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success) throw SingularCovariance("covariance not positive definite");
    const Eigen::MatrixXd L = llt.matrixL();

    const double const_term = 0.5 * d * std::log2(2.0 * std::numbers::pi) + 0.5 * log2det;
    const double inv_2ln2 = 0.5 / std::numbers::ln2;

    NormalStream normals(cfg.seed);
    Eigen::VectorXd g(d), x(d);
    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t s = 0; s < cfg.samples; ++s) {
        const std::uint64_t base = static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(d);
        for (int j = 0; j < d; ++j) g(j) = normals(base + static_cast<std::uint64_t>(j));
        x = L * g;
        const Eigen::VectorXd y = llt.solve(x);
        const double neg_log2_p = const_term + inv_2ln2 * x.dot(y);
        sum += neg_log2_p;
        sum_sq += neg_log2_p * neg_log2_p;
    }

    McEstimate est;
    est.samples = cfg.samples;
    est.seed = cfg.seed;
    const double n = static_cast<double>(cfg.samples);
    est.value_bits = sum / n;
    const double var = std::max(0.0, sum_sq / n - est.value_bits * est.value_bits);
    est.std_error = std::sqrt(var / n);
    return est;
}

}  // namespace m21
