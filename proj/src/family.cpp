#include "adaptps/family.hpp"

#include <cmath>
#include <stdexcept>

namespace adaptps {

namespace {
constexpr double kEtaClamp = 30.0;

double safe_log(double v) { return std::log(std::max(v, 1e-300)); }
}  // namespace

FamilyKind parse_family(const std::string& text) {
    if (text == "gaussian") return FamilyKind::Gaussian;
    if (text == "poisson") return FamilyKind::Poisson;
    if (text == "bernoulli") return FamilyKind::Bernoulli;
    throw std::invalid_argument("unknown family '" + text + "'");
}

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::Gaussian: return "gaussian";
        case FamilyKind::Poisson: return "poisson";
        case FamilyKind::Bernoulli: return "bernoulli";
    }
    return "gaussian";
}

double Family::inv_link(double eta) const {
    switch (kind) {
        case FamilyKind::Gaussian: return eta;
        case FamilyKind::Poisson: return std::exp(std::min(eta, kEtaClamp));
        case FamilyKind::Bernoulli: {
            const double e = std::exp(std::clamp(eta, -kEtaClamp, kEtaClamp));
            return e / (1.0 + e);
        }
    }
    return eta;
}

double Family::link(double mu) const {
    switch (kind) {
        case FamilyKind::Gaussian: return mu;
        case FamilyKind::Poisson: return safe_log(mu);
        case FamilyKind::Bernoulli: return safe_log(mu) - safe_log(1.0 - mu);
    }
    return mu;
}

double Family::variance(double mu) const {
    switch (kind) {
        case FamilyKind::Gaussian: return 1.0;
        case FamilyKind::Poisson: return std::max(mu, 1e-10);
        case FamilyKind::Bernoulli: return std::max(mu * (1.0 - mu), 1e-10);
    }
    return 1.0;
}

Vector Family::inv_link(const Vector& eta) const {
    Vector mu(eta.size());
    for (Index i = 0; i < eta.size(); ++i) mu[i] = inv_link(eta[i]);
    return mu;
}

double Family::deviance(const Vector& y, const Vector& mu, const Vector& weights) const {
    double dev = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
        const double w = weights.size() ? weights[i] : 1.0;
        switch (kind) {
            case FamilyKind::Gaussian: {
                const double r = y[i] - mu[i];
                dev += w * r * r;
                break;
            }
            case FamilyKind::Poisson: {
                double term = -(y[i] - mu[i]);
                if (y[i] > 0.0) term += y[i] * (safe_log(y[i]) - safe_log(mu[i]));
                dev += 2.0 * w * term;
                break;
            }
            case FamilyKind::Bernoulli: {
                double term = 0.0;
                if (y[i] > 0.0) term -= y[i] * safe_log(mu[i]);
                if (y[i] < 1.0) term -= (1.0 - y[i]) * safe_log(1.0 - mu[i]);
                dev += 2.0 * w * term;
                break;
            }
        }
    }
    return dev;
}

void Family::validate_response(const Vector& y) const {
    for (Index i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i]))
            throw std::invalid_argument("response contains a non-finite value");
        switch (kind) {
            case FamilyKind::Gaussian: break;
            case FamilyKind::Poisson:
                if (y[i] < 0.0 || std::abs(y[i] - std::round(y[i])) > 1e-8)
                    throw std::invalid_argument(
                        "poisson responses must be non-negative integers");
                break;
            case FamilyKind::Bernoulli:
                if (y[i] != 0.0 && y[i] != 1.0)
                    throw std::invalid_argument("bernoulli responses must be 0 or 1");
                break;
        }
    }
}

Vector Family::initial_eta(const Vector& y) const {
    Vector eta(y.size());
    for (Index i = 0; i < y.size(); ++i) {
        switch (kind) {
            case FamilyKind::Gaussian: eta[i] = y[i]; break;
            case FamilyKind::Poisson: eta[i] = std::log(y[i] + 0.5); break;
            case FamilyKind::Bernoulli: {
                const double p = (y[i] + 0.5) / 2.0;
                eta[i] = std::log(p / (1.0 - p));
                break;
            }
        }
    }
    return eta;
}

}  // namespace adaptps
