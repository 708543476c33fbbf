#ifndef ADAPTPS_DATASET_HPP
#define ADAPTPS_DATASET_HPP

#include "adaptps/types.hpp"

#include <vector>

namespace adaptps {

/// Observations with 1-3 covariates, either scattered rows or a complete
/// Cartesian grid. When the rows form a full grid the dataset is reordered
/// into grid order (first covariate fastest) so array algorithms apply.
struct GridDataset {
    Matrix x;       ///< n x K covariates
    Vector y;       ///< responses
    Vector offset;  ///< optional, size 0 or n

    bool is_grid = false;
    std::vector<Vector> axes;  ///< per-dimension sorted unique values (grid only)

    Index n() const { return y.size(); }
    int n_dims() const { return static_cast<int>(x.cols()); }
};

/// Detects a complete grid: every combination of the per-dimension unique
/// values present exactly once. On success reorders rows into grid order and
/// fills `axes`.
void detect_grid(GridDataset& data);

}  // namespace adaptps

#endif
