#include "adaptps/io/artifact.hpp"
#include "adaptps/io/config.hpp"
#include "adaptps/io/csv.hpp"
#include "adaptps/io/matrix_market.hpp"
#include "adaptps/model.hpp"
#include "adaptps/simlab.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace adaptps;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;
constexpr int kExitNoConvergence = 3;

// Config keys that may be overridden by same-named CLI flags; flags win.
const std::vector<std::string> kConfigKeys = {
    "family", "response", "offset", "trials", "psi_degree",
    "control.max_outer_iter", "control.max_pirls_iter", "control.rel_tol",
    "control.initial_variance", "control.variance_floor_ratio",
    "dim1.column", "dim1.d", "dim1.degree", "dim1.q", "dim1.mode", "dim1.p",
    "dim1.min", "dim1.max",
    "dim2.column", "dim2.d", "dim2.degree", "dim2.q", "dim2.mode", "dim2.p",
    "dim2.min", "dim2.max",
    "dim3.column", "dim3.d", "dim3.degree", "dim3.q", "dim3.mode", "dim3.p",
    "dim3.min", "dim3.max"};

struct ConfigOverrides {
    std::map<std::string, std::string> values;
};

void add_config_flags(CLI::App* cmd, ConfigOverrides& ov) {
    for (const std::string& key : kConfigKeys)
        cmd->add_option_function<std::string>(
            "--" + key, [&ov, key](const std::string& v) { ov.values[key] = v; },
            "override config key " + key);
}

ModelConfig load_config_with_overrides(const std::string& path, const ConfigOverrides& ov) {
    std::map<std::string, std::string> kv =
        path.empty() ? std::map<std::string, std::string>{} : read_key_values(path);
    for (const auto& [k, v] : ov.values) set_key(kv, k, v);
    return parse_model_config(kv);
}

int cmd_fit(const std::string& data_path, const std::string& config_path,
            const std::string& out_path, const ConfigOverrides& ov) {
    const ModelConfig config = load_config_with_overrides(config_path, ov);
    const CsvTable table = read_csv(data_path);
    const GridDataset data = extract_dataset(config, table);
    const ModelSpec spec = resolve_spec(config, table);

    ModelFit fit = fit_model(spec, data, config.control);

    FitArtifact artifact;
    artifact.config = config;
    for (size_t k = 0; k < artifact.config.dims.size(); ++k) {
        artifact.config.dims[k].x_min = spec.penalty.dims[k].x_min;
        artifact.config.dims[k].x_max = spec.penalty.dims[k].x_max;
    }
    artifact.n_obs = data.n();
    const ModelParts parts = build_model_parts(spec);
    for (Index l = 0; l < parts.precision.n_components(); ++l)
        artifact.tags.push_back(parts.precision.tag(l));
    artifact.fit = std::move(fit);
    write_artifact(out_path, artifact);

    if (!artifact.fit.result.diagnostic.empty())
        std::cerr << "warning: " << artifact.fit.result.diagnostic << "\n";
    std::cout << "fit: n=" << data.n() << (data.is_grid ? " (grid)" : " (scattered)")
              << " components=" << artifact.tags.size()
              << " deviance=" << artifact.fit.result.deviance
              << " ed_total=" << artifact.fit.result.ed_total
              << " caic=" << artifact.fit.result.caic
              << " converged=" << (artifact.fit.result.converged ? "yes" : "no") << "\n";
    return artifact.fit.result.converged ? kExitOk : kExitNoConvergence;
}

Matrix prediction_points(const FitArtifact& artifact, const std::string& points_path,
                         const std::string& grid_spec) {
    if (!points_path.empty()) {
        const CsvTable table = read_csv(points_path);
        Matrix x(table.n_rows(), static_cast<Index>(artifact.config.dims.size()));
        for (size_t k = 0; k < artifact.config.dims.size(); ++k) {
            const std::string& col = artifact.config.dims[k].column;
            if (!table.has_column(col))
                throw std::invalid_argument("points: missing covariate column '" + col + "'");
            x.col(static_cast<Index>(k)) = table.column(col);
        }
        return x;
    }
    // Regular grid "n1xn2[xn3]" over the training box.
    std::vector<int> counts;
    std::string field;
    std::istringstream ss(grid_spec);
    while (std::getline(ss, field, 'x')) counts.push_back(std::stoi(field));
    if (counts.size() != artifact.config.dims.size())
        throw std::invalid_argument("grid: expected " +
                                    std::to_string(artifact.config.dims.size()) +
                                    " extents in '" + grid_spec + "'");
    Index total = 1;
    for (int c : counts) {
        if (c < 1) throw std::invalid_argument("grid: extents must be >= 1");
        total *= c;
    }
    Matrix x(total, static_cast<Index>(counts.size()));
    std::vector<int> idx(counts.size(), 0);
    for (Index row = 0; row < total; ++row) {
        for (size_t k = 0; k < counts.size(); ++k) {
            const auto& box = artifact.fit.domain[k];
            const double f = counts[k] == 1 ? 0.5
                                            : static_cast<double>(idx[k]) /
                                                  static_cast<double>(counts[k] - 1);
            x(row, static_cast<Index>(k)) = box[0] + f * (box[1] - box[0]);
        }
        for (size_t k = 0; k < counts.size(); ++k) {
            if (++idx[k] < counts[k]) break;
            idx[k] = 0;
        }
    }
    return x;
}

int cmd_predict(const std::string& fit_path, const std::string& points_path,
                const std::string& grid_spec, const std::string& out_path, double level) {
    const FitArtifact artifact = read_artifact(fit_path);
    const Matrix x = prediction_points(artifact, points_path, grid_spec);
    const PredictionTable pred = predict(artifact.fit, x, level);

    CsvTable table;
    for (size_t k = 0; k < artifact.config.dims.size(); ++k) {
        table.columns.push_back(artifact.config.dims[k].column);
        table.data.push_back(pred.x.col(static_cast<Index>(k)));
    }
    table.columns.insert(table.columns.end(),
                         {"eta_hat", "mu_hat", "se_eta", "lower", "upper"});
    table.data.insert(table.data.end(),
                      {pred.eta_hat, pred.mu_hat, pred.se_eta, pred.lower, pred.upper});
    write_csv(out_path, table);
    std::cout << "predict: " << pred.eta_hat.size() << " rows -> " << out_path << "\n";
    return kExitOk;
}

int cmd_simulate(const std::string& scenario_text, int n, double s, const std::string& family,
                 int R, std::uint64_t seed, const std::string& methods_text,
                 const std::string& out_path, int threads, bool with_timing,
                 const ReplicateSettings& base) {
    Scenario sc;
    sc.id = parse_scenario(scenario_text);
    sc.n = n;
    sc.s = s;
    sc.family = parse_family(family);
    sc.seed = seed;

    std::vector<SimMethod> methods;
    std::string field;
    std::istringstream ss(methods_text);
    while (std::getline(ss, field, ',')) methods.push_back(parse_method(field));

    ReplicateSettings settings = base;
    settings.threads = threads;
    const ReplicateReport report = run_replicates(sc, R, methods, seed, settings);

    // Wall-clock timings are inherently non-reproducible, so the column is
    // opt-in; without it the report is byte-identical across reruns.
    CsvTable table;
    table.columns = {"scenario", "method", "replicate", "seed", "n", "s", "mse", "log_mse",
                     "converged", "failed", "ed_total", "outer_iterations"};
    if (with_timing) table.columns.push_back("fit_seconds");
    const Index rows = static_cast<Index>(report.rows.size());
    std::vector<Vector> cols(table.columns.size(), Vector(rows));
    for (Index i = 0; i < rows; ++i) {
        const ReplicateRow& row = report.rows[static_cast<size_t>(i)];
        cols[0][i] = static_cast<double>(static_cast<int>(sc.id)) + 1;
        cols[1][i] = row.method == SimMethod::Standard ? 0 : 1;
        cols[2][i] = row.replicate;
        cols[3][i] = static_cast<double>(row.seed);
        cols[4][i] = sc.n;
        cols[5][i] = sc.s;
        cols[6][i] = row.mse;
        cols[7][i] = row.log_mse;
        cols[8][i] = row.converged ? 1 : 0;
        cols[9][i] = row.failed ? 1 : 0;
        cols[10][i] = row.ed_total;
        cols[11][i] = row.outer_iterations;
        if (with_timing) cols[12][i] = row.fit_seconds;
    }
    table.data = cols;
    write_csv(out_path, table);

    for (const MethodSummary& m : report.summaries)
        std::cout << "simulate: " << to_string(m.method) << " median(MSE)=" << m.median_mse
                  << " [" << m.q1_mse << ", " << m.q3_mse << "]"
                  << " median(logMSE)=" << m.median_log_mse
                  << " median(s)=" << m.median_seconds << " failed=" << m.n_failed << "/"
                  << m.n_rows << "\n";
    return kExitOk;
}

int cmd_dump_penalty(const std::string& config_path, const std::string& out_dir,
                     const ConfigOverrides& ov) {
    const ModelConfig config = load_config_with_overrides(config_path, ov);
    const ModelSpec spec = resolve_spec_without_data(config);
    const std::vector<PenaltyComponent> components = adaptive_components(spec.penalty);

    std::filesystem::create_directories(out_dir);
    nlohmann::json manifest = nlohmann::json::array();
    for (const PenaltyComponent& c : components) {
        std::ostringstream name;
        name << "penalty_dim" << c.dimension_tag + 1 << "_" << c.index << ".mtx";
        const std::string file = (std::filesystem::path(out_dir) / name.str()).string();
        write_matrix_market(file, c.matrix);
        manifest.push_back({{"file", name.str()},
                            {"dimension", c.dimension_tag + 1},
                            {"index", c.index},
                            {"rows", c.matrix.rows()},
                            {"cols", c.matrix.cols()}});
    }
    const std::string manifest_path =
        (std::filesystem::path(out_dir) / "manifest.json").string();
    std::ofstream out(manifest_path);
    if (!out) throw std::invalid_argument("dump-penalty: cannot write '" + manifest_path + "'");
    out << manifest.dump(1) << "\n";
    std::cout << "dump-penalty: wrote " << components.size() << " component(s) to " << out_dir
              << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"anisotropic locally adaptive P-spline smoothing"};
    app.require_subcommand(1);

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit a model to CSV data");
    std::string data_path, config_path, out_path = "fit.json";
    ConfigOverrides fit_ov;
    fit_cmd->add_option("--data", data_path, "input CSV")->required();
    fit_cmd->add_option("--config", config_path, "flat key=value model config");
    fit_cmd->add_option("--out", out_path, "output fit artifact (JSON)");
    add_config_flags(fit_cmd, fit_ov);

    // predict
    auto* predict_cmd = app.add_subcommand("predict", "evaluate a fitted model");
    std::string fit_path, points_path, grid_spec, pred_out = "predictions.csv";
    double level = 0.95;
    predict_cmd->add_option("--fit", fit_path, "fit artifact")->required();
    predict_cmd->add_option("--points", points_path, "CSV of prediction points");
    predict_cmd->add_option("--grid", grid_spec, "regular grid, e.g. 50x50");
    predict_cmd->add_option("--out", pred_out, "output CSV");
    predict_cmd->add_option("--level", level, "interval level (default 0.95)");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "run scenario replicates");
    std::string scenario = "I", sim_family = "gaussian", methods = "standard,adaptive-full";
    std::string sim_out = "replicates.csv";
    int n = 300, R = 250, threads = 1;
    double s = 0.0;
    bool with_timing = false;
    std::uint64_t seed = 1;
    ReplicateSettings settings;
    sim_cmd->add_option("--scenario", scenario, "I, II or III")->required();
    sim_cmd->add_option("--n", n, "sample size");
    sim_cmd->add_option("--s", s, "Gaussian noise level");
    sim_cmd->add_option("--family", sim_family, "gaussian or bernoulli");
    sim_cmd->add_option("--R", R, "number of replicates");
    sim_cmd->add_option("--seed", seed, "base seed");
    sim_cmd->add_option("--methods", methods, "comma list: standard,adaptive-full");
    sim_cmd->add_option("--out", sim_out, "output CSV");
    sim_cmd->add_option("--threads", threads, "replicate-level parallelism");
    sim_cmd->add_flag("--with-timing", with_timing,
                      "add the (non-reproducible) fit_seconds column");
    sim_cmd->add_option("--d", settings.d, "marginal basis dimension");
    sim_cmd->add_option("--q", settings.q, "penalty order");
    sim_cmd->add_option("--p", settings.p, "smoothing-parameter basis dimension");
    sim_cmd->add_option("--psi-degree", settings.psi_degree,
                        "degree of the smoothing-parameter basis");
    sim_cmd->add_option("--max-outer", settings.control.max_outer_iter, "outer iteration cap");

    // dump-penalty
    auto* dump_cmd = app.add_subcommand("dump-penalty", "export penalty components");
    std::string dump_config, dump_dir = "penalty";
    ConfigOverrides dump_ov;
    dump_cmd->add_option("--config", dump_config, "flat key=value model config");
    dump_cmd->add_option("--out-dir", dump_dir, "output directory");
    add_config_flags(dump_cmd, dump_ov);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*fit_cmd) return cmd_fit(data_path, config_path, out_path, fit_ov);
        if (*predict_cmd) {
            if (points_path.empty() == grid_spec.empty())
                throw std::invalid_argument("predict: give exactly one of --points or --grid");
            return cmd_predict(fit_path, points_path, grid_spec, pred_out, level);
        }
        if (*sim_cmd)
            return cmd_simulate(scenario, n, s, sim_family, R, seed, methods, sim_out, threads,
                                with_timing, settings);
        if (*dump_cmd) return cmd_dump_penalty(dump_config, dump_dir, dump_ov);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInput;
}
