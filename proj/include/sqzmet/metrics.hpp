// metrics.hpp — variance bounds and squeezing-improvement measures

#pragma once

#include <optional>
#include <stdexcept>

#include "sqzmet/qfi.hpp"

namespace sqzmet {

/// The QFIM has no inverse at this point; phi and mu are not jointly
/// identifiable there.
class SingularQfimError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kSingularDeterminant = 1e-14;

struct EstimationMetrics {
    double delta_ind{0.0};  // 1/F_mu + 1/F_phi
    double delta_sim{0.0};  // Tr(F^{-1}) / 2
    double ratio_r{0.0};    // delta_ind / delta_sim
    std::optional<double> f_phi_imp;
    std::optional<double> f_mu_imp;
};

inline EstimationMetrics variance_bounds(const Qfim2& q) {
    const double det = q.determinant();
    if (!(det > kSingularDeterminant)) throw SingularQfimError("variance_bounds: singular QFIM");
    if (!(q.f_phi > 0.0 && q.f_mu > 0.0)) throw std::invalid_argument("variance_bounds: diagonal must be positive");
    EstimationMetrics m;
    m.delta_ind = 1.0 / q.f_mu + 1.0 / q.f_phi;
    m.delta_sim = 0.5 * (q.f_mu + q.f_phi) / det;
    m.ratio_r = 2.0 * det / (q.f_mu * q.f_phi);
    return m;
}

struct Improvements {
    double f_phi_imp{0.0};
    double f_mu_imp{0.0};
};

/// F(config) - F(config at r = 0) for both diagonal QFIM entries.
inline Improvements improvements(const PhysicalConfig& config, QfiMethod method = QfiMethod::spectral) {
    const auto squeezed = qfim(config, method);
    const auto reference = qfim(config.with_r(0.0), method);
    return Improvements{squeezed.f_phi - reference.f_phi, squeezed.f_mu - reference.f_mu};
}

/// Bounds plus improvements in one record.
inline EstimationMetrics estimation_metrics(const PhysicalConfig& config, QfiMethod method = QfiMethod::spectral) {
    auto m = variance_bounds(qfim(config, method));
    const auto imp = improvements(config, method);
    m.f_phi_imp = imp.f_phi_imp;
    m.f_mu_imp = imp.f_mu_imp;
    return m;
}

}  // namespace sqzmet
