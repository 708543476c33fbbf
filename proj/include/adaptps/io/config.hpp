#ifndef ADAPTPS_IO_CONFIG_HPP
#define ADAPTPS_IO_CONFIG_HPP

#include "adaptps/io/csv.hpp"
#include "adaptps/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace adaptps {

struct DimensionConfig {
    std::string column;
    int d = 12;
    int degree = 3;
    int q = 2;
    AdaptivityMode mode = AdaptivityMode::Full;
    std::array<int, 3> p = {5, 5, 5};
    std::optional<double> x_min, x_max;  ///< default: data range
};

/// Flat key-value model configuration; dimension keys are dim1.*, dim2.*,
/// dim3.*. Any key may be overridden by the same-named CLI flag.
struct ModelConfig {
    FamilyKind family = FamilyKind::Gaussian;
    std::string response = "y";
    std::string offset_column;  ///< used as-is
    std::string trials_column;  ///< log(trials) becomes the offset
    std::vector<DimensionConfig> dims;
    int psi_degree = 3;
    FitControl control;

    void validate() const;
};

/// Parses `key = value` lines ('#' starts a comment). Unknown keys are
/// rejected.
ModelConfig parse_model_config(const std::map<std::string, std::string>& kv);
ModelConfig load_model_config(const std::string& path);
std::map<std::string, std::string> read_key_values(const std::string& path);

/// Applies one `key=value` override onto the raw map.
void set_key(std::map<std::string, std::string>& kv, const std::string& key,
             const std::string& value);

/// Resolves the model spec against data columns (fills unspecified domains
/// from the observed ranges).
ModelSpec resolve_spec(const ModelConfig& config, const CsvTable& data);

/// Resolves the spec without data; unspecified domains default to [0, 1]
/// (penalty matrices do not depend on the domain).
ModelSpec resolve_spec_without_data(const ModelConfig& config);

/// Extracts the dataset named by the config from a CSV table.
GridDataset extract_dataset(const ModelConfig& config, const CsvTable& data);

}  // namespace adaptps

#endif
