#pragma once

#include "tauthresh/sym_matrix.hpp"

#include <string>

namespace tauthresh {

enum class EstimatorKind { rho_star, rho_hat, identity };

EstimatorKind estimator_kind_from_string(const std::string& s);
std::string to_string(EstimatorKind kind);

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::rho_star;
    double alpha = 0.0; // >= 0

    void validate() const;
};

// rho_star: sine(threshold(tau_hat)); rho_hat: threshold(sine(tau_hat));
// identity ignores tau_hat.
CorrelationMatrix estimate(const CorrelationMatrix& tau_hat, const EstimatorSpec& spec, int n,
                           int p_dim);

// population relation rho = sin(pi tau / 2)
CorrelationMatrix population_rho_from_tau(const CorrelationMatrix& tau);

} // namespace tauthresh
