#ifndef ADAPTPS_IO_ARTIFACT_HPP
#define ADAPTPS_IO_ARTIFACT_HPP

#include "adaptps/io/config.hpp"
#include "adaptps/model.hpp"

#include <string>

namespace adaptps {

/// The JSON fit artifact: resolved configuration, coefficients, variance
/// parameters, effective dimensions, convergence record and the posterior
/// Cholesky factor that prediction intervals need.
struct FitArtifact {
    int format_version = 1;
    ModelConfig config;  ///< fully resolved (domains pinned)
    ModelFit fit;
    std::vector<ComponentTag> tags;
    Index n_obs = 0;
};

void write_artifact(const std::string& path, const FitArtifact& artifact);
FitArtifact read_artifact(const std::string& path);

}  // namespace adaptps

#endif
