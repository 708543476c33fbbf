#ifndef ADAPTPS_MODEL_HPP
#define ADAPTPS_MODEL_HPP

#include "adaptps/dataset.hpp"
#include "adaptps/family.hpp"
#include "adaptps/mmtransform.hpp"
#include "adaptps/penalty.hpp"
#include "adaptps/precision.hpp"
#include "adaptps/sop.hpp"

#include <memory>
#include <string>
#include <vector>

namespace adaptps {

/// Full model description: marginal bases, adaptivity and family.
struct ModelSpec {
    AdaptivePenaltySpec penalty;
    Family family;

    int n_dims() const { return penalty.n_dims(); }
    void validate() const { penalty.validate(); }
};

/// Data-independent machinery, built once per specification and shared by
/// concurrent fits.
struct ModelParts {
    ModelSpec spec;
    Transforms transforms;
    PrecisionModel precision;
};

ModelParts build_model_parts(const ModelSpec& spec);

/// A fitted model together with what prediction needs.
struct ModelFit {
    ModelSpec spec;
    FitResult result;
    std::vector<std::array<double, 2>> domain;  ///< training box per dimension
};

/// Fits the model to the dataset, using the array-structured path on full
/// grids and dense designs otherwise.
ModelFit fit_model(const ModelSpec& spec, const GridDataset& data,
                   const FitControl& control = FitControl());

struct PredictionTable {
    Matrix x;
    Vector eta_hat, mu_hat, se_eta, lower, upper;
};

/// Pointwise predictions with (level) intervals on the link scale mapped
/// through the inverse link. Points outside the training box are rejected;
/// offending row indices are listed in the error message.
PredictionTable predict(const ModelFit& fit, const Matrix& new_x, double level = 0.95);

}  // namespace adaptps

#endif
