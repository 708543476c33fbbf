#ifndef ADAPTPS_FAMILY_HPP
#define ADAPTPS_FAMILY_HPP

#include "adaptps/types.hpp"

#include <string>

namespace adaptps {

enum class FamilyKind { Gaussian, Poisson, Bernoulli };

FamilyKind parse_family(const std::string& text);
std::string to_string(FamilyKind kind);

/// Exponential-family response with its canonical link.
/// Dispersion is estimated for Gaussian and fixed at 1 otherwise.
struct Family {
    FamilyKind kind = FamilyKind::Gaussian;

    static Family gaussian() { return {FamilyKind::Gaussian}; }
    static Family poisson() { return {FamilyKind::Poisson}; }
    static Family bernoulli() { return {FamilyKind::Bernoulli}; }

    bool estimate_dispersion() const { return kind == FamilyKind::Gaussian; }

    double inv_link(double eta) const;
    double link(double mu) const;
    double variance(double mu) const;  ///< nu(mu)

    Vector inv_link(const Vector& eta) const;

    /// Scaled deviance contribution sum_i w_i d(y_i, mu_i).
    double deviance(const Vector& y, const Vector& mu, const Vector& weights) const;

    /// Throws std::invalid_argument when a response value is outside the
    /// family's support (counts for Poisson, {0,1} for Bernoulli).
    void validate_response(const Vector& y) const;

    /// Conventional starting predictor on the full linear-predictor scale.
    Vector initial_eta(const Vector& y) const;
};

}  // namespace adaptps

#endif
