// SPDX-License-Identifier: Apache-2.0
//
// Named jointly-Gaussian scalar variables with exact covariance algebra:
// differential entropy and (conditional) mutual information via Schur
// complements.  This is the primary verification path for every closed-form
// rate and genie identity in the toolkit.

#ifndef M21_GAUSSIAN_SYSTEM_HPP
#define M21_GAUSSIAN_SYSTEM_HPP

#include <Eigen/Dense>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "m21/channel.hpp"

namespace m21 {

struct SingularCovariance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class GaussianSystem {
   public:
    /// Adds a variable independent of everything added so far.
    int add_variable(const std::string& name, double variance);

    /// Adds a variable with explicit covariances against existing variables
    /// (unlisted covariances are zero).  The caller is responsible for
    /// keeping the matrix positive semidefinite.
    int add_variable(const std::string& name, double variance,
                     const std::vector<std::pair<std::string, double>>& cross_cov);

    /// Adds an exact linear combination of existing variables plus an
    /// optional fresh independent noise term folded in.
    int add_combination(const std::string& name,
                        const std::vector<std::pair<std::string, double>>& terms,
                        double extra_noise_var = 0.0);

    int dim() const { return static_cast<int>(labels_.size()); }
    const Eigen::MatrixXd& covariance() const { return cov_; }
    const std::vector<std::string>& labels() const { return labels_; }
    int index_of(const std::string& name) const;  // throws on unknown label

    ValidationReport validate() const;  // symmetry, PSD within tolerance, unique labels

   private:
    std::vector<std::string> labels_;
    Eigen::MatrixXd cov_{0, 0};
};

/// 0.5*log2((2*pi*e)^d det Sigma) in bits.  Throws SingularCovariance when
/// the subset covariance is singular.
double gaussian_entropy(const GaussianSystem& sys, std::span<const std::string> vars);

struct MiResult {
    double bits = 0.0;
    bool degenerate_conditioning = false;  // pseudo-inverse fallback was used
};

/// Conditional mutual information I(A;B|C) via Schur complements.
/// Variables shared with C are dropped (they carry no information once
/// conditioned on); overlap between A and B yields +infinity.
MiResult gaussian_mi(const GaussianSystem& sys, std::span<const std::string> a,
                     std::span<const std::string> b, std::span<const std::string> c = {});

/// Joint system of a standard channel: inputs x1..xK, noises n1..nK,
/// outputs y1..yK.
GaussianSystem make_channel_system(const StandardChannel& ch);

}  // namespace m21

#endif
