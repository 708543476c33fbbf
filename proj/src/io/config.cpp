#include "adaptps/io/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace adaptps {

namespace {

std::string trimmed(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

int to_int(const std::string& key, const std::string& v) {
    try {
        size_t used = 0;
        const int out = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: key '" + key + "' expects an integer, got '" + v +
                                    "'");
    }
}

double to_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double out = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw std::invalid_argument("config: key '" + key + "' expects a number, got '" + v +
                                    "'");
    return out;
}

std::array<int, 3> to_p_list(const std::string& key, const std::string& v) {
    std::array<int, 3> p = {1, 1, 1};
    std::vector<int> vals;
    std::string field;
    std::istringstream ss(v);
    while (std::getline(ss, field, ',')) vals.push_back(to_int(key, trimmed(field)));
    if (vals.empty()) throw std::invalid_argument("config: key '" + key + "' is empty");
    if (vals.size() == 1) {
        p.fill(vals[0]);
    } else if (vals.size() <= 3) {
        for (size_t i = 0; i < vals.size(); ++i) p[i] = vals[i];
        for (size_t i = vals.size(); i < 3; ++i) p[i] = vals.back();
    } else {
        throw std::invalid_argument("config: key '" + key + "' takes at most 3 values");
    }
    return p;
}

}  // namespace

void ModelConfig::validate() const {
    if (dims.empty() || dims.size() > 3)
        throw std::invalid_argument("config: 1 to 3 dimensions must be declared");
    if (response.empty()) throw std::invalid_argument("config: response column is required");
    if (!offset_column.empty() && !trials_column.empty())
        throw std::invalid_argument("config: offset and trials are mutually exclusive");
    for (const DimensionConfig& dim : dims)
        if (dim.column.empty())
            throw std::invalid_argument("config: every dimension needs a column name");
    control.validate();
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    Index lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not of the form key = value");
        kv[trimmed(line.substr(0, eq))] = trimmed(line.substr(eq + 1));
    }
    return kv;
}

void set_key(std::map<std::string, std::string>& kv, const std::string& key,
             const std::string& value) {
    kv[key] = value;
}

ModelConfig parse_model_config(const std::map<std::string, std::string>& kv) {
    ModelConfig cfg;
    int max_dim = 0;
    for (const auto& [key, value] : kv) {
        if (key.rfind("dim", 0) == 0 && key.size() > 4 && key[4] == '.') {
            const int d = key[3] - '0';
            if (d < 1 || d > 3)
                throw std::invalid_argument("config: unknown dimension in key '" + key + "'");
            max_dim = std::max(max_dim, d);
        }
    }
    cfg.dims.resize(std::max(max_dim, 0));

    for (const auto& [key, value] : kv) {
        if (key == "family") {
            cfg.family = parse_family(value);
        } else if (key == "response") {
            cfg.response = value;
        } else if (key == "offset") {
            cfg.offset_column = value;
        } else if (key == "trials") {
            cfg.trials_column = value;
        } else if (key == "psi_degree") {
            cfg.psi_degree = to_int(key, value);
        } else if (key == "control.max_outer_iter") {
            cfg.control.max_outer_iter = to_int(key, value);
        } else if (key == "control.max_pirls_iter") {
            cfg.control.max_pirls_iter = to_int(key, value);
        } else if (key == "control.rel_tol") {
            cfg.control.rel_tol = to_double(key, value);
        } else if (key == "control.initial_variance") {
            cfg.control.initial_variance = to_double(key, value);
        } else if (key == "control.variance_floor_ratio") {
            cfg.control.variance_floor_ratio = to_double(key, value);
        } else if (key.rfind("dim", 0) == 0 && key.size() > 4 && key[4] == '.') {
            DimensionConfig& dim = cfg.dims[static_cast<size_t>(key[3] - '1')];
            const std::string field = key.substr(5);
            if (field == "column") dim.column = value;
            else if (field == "d") dim.d = to_int(key, value);
            else if (field == "degree") dim.degree = to_int(key, value);
            else if (field == "q") dim.q = to_int(key, value);
            else if (field == "mode") dim.mode = parse_adaptivity_mode(value);
            else if (field == "p") dim.p = to_p_list(key, value);
            else if (field == "min") dim.x_min = to_double(key, value);
            else if (field == "max") dim.x_max = to_double(key, value);
            else throw std::invalid_argument("config: unknown key '" + key + "'");
        } else {
            throw std::invalid_argument("config: unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

ModelConfig load_model_config(const std::string& path) {
    return parse_model_config(read_key_values(path));
}

namespace {

ModelSpec make_spec(const ModelConfig& config, const CsvTable* data) {
    ModelSpec spec;
    for (size_t k = 0; k < config.dims.size(); ++k) {
        const DimensionConfig& dim = config.dims[k];
        BasisSpec b;
        b.d = dim.d;
        b.degree = dim.degree;
        b.q = dim.q;
        if (dim.x_min && dim.x_max) {
            b.x_min = *dim.x_min;
            b.x_max = *dim.x_max;
        } else if (data) {
            const Vector& col = data->column(dim.column);
            b.x_min = dim.x_min.value_or(col.minCoeff());
            b.x_max = dim.x_max.value_or(col.maxCoeff());
        } else {
            b.x_min = dim.x_min.value_or(0.0);
            b.x_max = dim.x_max.value_or(1.0);
        }
        spec.penalty.dims.push_back(b);
        spec.penalty.modes.push_back(dim.mode);
        spec.penalty.p.push_back(dim.p);
    }
    spec.penalty.psi_degree = config.psi_degree;
    spec.family = Family{config.family};
    spec.validate();
    return spec;
}

}  // namespace

ModelSpec resolve_spec(const ModelConfig& config, const CsvTable& data) {
    return make_spec(config, &data);
}

ModelSpec resolve_spec_without_data(const ModelConfig& config) {
    return make_spec(config, nullptr);
}

GridDataset extract_dataset(const ModelConfig& config, const CsvTable& data) {
    config.validate();
    for (const DimensionConfig& dim : config.dims)
        if (!data.has_column(dim.column))
            throw std::invalid_argument("data: missing covariate column '" + dim.column + "'");
    if (!data.has_column(config.response))
        throw std::invalid_argument("data: missing response column '" + config.response + "'");

    GridDataset ds;
    ds.x.resize(data.n_rows(), static_cast<Index>(config.dims.size()));
    for (size_t k = 0; k < config.dims.size(); ++k)
        ds.x.col(static_cast<Index>(k)) = data.column(config.dims[k].column);
    ds.y = data.column(config.response);
    if (!config.offset_column.empty()) {
        if (!data.has_column(config.offset_column))
            throw std::invalid_argument("data: missing offset column '" + config.offset_column +
                                        "'");
        ds.offset = data.column(config.offset_column);
    } else if (!config.trials_column.empty()) {
        if (!data.has_column(config.trials_column))
            throw std::invalid_argument("data: missing trials column '" + config.trials_column +
                                        "'");
        const Vector& trials = data.column(config.trials_column);
        if ((trials.array() <= 0.0).any())
            throw std::invalid_argument("data: trial counts must be positive");
        ds.offset = trials.array().log();
    }
    detect_grid(ds);
    return ds;
}

}  // namespace adaptps
