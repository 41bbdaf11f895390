#include "tauthresh/estimators.hpp"

#include "tauthresh/errors.hpp"
#include "tauthresh/linalg.hpp"

namespace tauthresh {

EstimatorKind estimator_kind_from_string(const std::string& s) {
    if (s == "rho-star") return EstimatorKind::rho_star;
    if (s == "rho-hat") return EstimatorKind::rho_hat;
    if (s == "identity") return EstimatorKind::identity;
    throw DomainError("unknown estimator kind: " + s);
}

std::string to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::rho_star: return "rho-star";
        case EstimatorKind::rho_hat: return "rho-hat";
        case EstimatorKind::identity: return "identity";
    }
    throw DomainError("invalid estimator kind");
}

void EstimatorSpec::validate() const {
    if (alpha < 0.0) throw DomainError("estimator alpha must be nonnegative");
}

CorrelationMatrix estimate(const CorrelationMatrix& tau_hat, const EstimatorSpec& spec, int n,
                           int p_dim) {
    spec.validate();
    if (n < 2 || p_dim < 2) throw DomainError("estimate requires n >= 2 and p >= 2");
    switch (spec.kind) {
        case EstimatorKind::identity:
            return CorrelationMatrix::identity(tau_hat.dim());
        case EstimatorKind::rho_star:
            return sine_transform(threshold_operator(tau_hat, spec.alpha, n, p_dim));
        case EstimatorKind::rho_hat:
            return threshold_operator(sine_transform(tau_hat), spec.alpha, n, p_dim);
    }
    throw DomainError("invalid estimator kind");
}

CorrelationMatrix population_rho_from_tau(const CorrelationMatrix& tau) {
    return sine_transform(tau);
}

} // namespace tauthresh
