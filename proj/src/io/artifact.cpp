#include "adaptps/io/artifact.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace adaptps {

namespace {

using nlohmann::json;

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

Vector vector_from_json(const json& arr) {
    Vector v(static_cast<Index>(arr.size()));
    for (size_t i = 0; i < arr.size(); ++i) v[static_cast<Index>(i)] = arr[i].get<double>();
    return v;
}

json config_to_json(const ModelConfig& cfg) {
    json dims = json::array();
    for (const DimensionConfig& dim : cfg.dims) {
        json d;
        d["column"] = dim.column;
        d["d"] = dim.d;
        d["degree"] = dim.degree;
        d["q"] = dim.q;
        d["mode"] = to_string(dim.mode);
        d["p"] = {dim.p[0], dim.p[1], dim.p[2]};
        if (dim.x_min) d["min"] = *dim.x_min;
        if (dim.x_max) d["max"] = *dim.x_max;
        dims.push_back(d);
    }
    json j;
    j["family"] = to_string(cfg.family);
    j["response"] = cfg.response;
    if (!cfg.offset_column.empty()) j["offset"] = cfg.offset_column;
    if (!cfg.trials_column.empty()) j["trials"] = cfg.trials_column;
    j["psi_degree"] = cfg.psi_degree;
    j["dims"] = dims;
    j["control"] = {{"max_outer_iter", cfg.control.max_outer_iter},
                    {"max_pirls_iter", cfg.control.max_pirls_iter},
                    {"rel_tol", cfg.control.rel_tol},
                    {"initial_variance", cfg.control.initial_variance},
                    {"variance_floor_ratio", cfg.control.variance_floor_ratio}};
    return j;
}

ModelConfig config_from_json(const json& j) {
    ModelConfig cfg;
    cfg.family = parse_family(j.at("family").get<std::string>());
    cfg.response = j.at("response").get<std::string>();
    if (j.contains("offset")) cfg.offset_column = j["offset"].get<std::string>();
    if (j.contains("trials")) cfg.trials_column = j["trials"].get<std::string>();
    cfg.psi_degree = j.at("psi_degree").get<int>();
    for (const json& d : j.at("dims")) {
        DimensionConfig dim;
        dim.column = d.at("column").get<std::string>();
        dim.d = d.at("d").get<int>();
        dim.degree = d.at("degree").get<int>();
        dim.q = d.at("q").get<int>();
        dim.mode = parse_adaptivity_mode(d.at("mode").get<std::string>());
        for (int i = 0; i < 3; ++i) dim.p[i] = d.at("p")[i].get<int>();
        if (d.contains("min")) dim.x_min = d["min"].get<double>();
        if (d.contains("max")) dim.x_max = d["max"].get<double>();
        cfg.dims.push_back(dim);
    }
    const json& c = j.at("control");
    cfg.control.max_outer_iter = c.at("max_outer_iter").get<int>();
    cfg.control.max_pirls_iter = c.at("max_pirls_iter").get<int>();
    cfg.control.rel_tol = c.at("rel_tol").get<double>();
    cfg.control.initial_variance = c.at("initial_variance").get<double>();
    cfg.control.variance_floor_ratio = c.at("variance_floor_ratio").get<double>();
    return cfg;
}

}  // namespace

void write_artifact(const std::string& path, const FitArtifact& artifact) {
    const FitResult& r = artifact.fit.result;
    json j;
    j["format_version"] = artifact.format_version;
    j["config"] = config_to_json(artifact.config);
    j["coefficients"] = {{"theta", vector_to_json(r.theta)},
                         {"beta", vector_to_json(r.beta)},
                         {"alpha", vector_to_json(r.alpha)}};
    json variances = json::array();
    for (Index l = 0; l < r.sigma2.size(); ++l) {
        const ComponentTag& tag = artifact.tags[static_cast<size_t>(l)];
        variances.push_back({{"dimension", tag.dimension + 1},
                             {"index", tag.index},
                             {"sigma2", r.sigma2[l]}});
    }
    j["variances"] = variances;
    j["phi"] = r.phi;
    j["eds"] = {{"per_component", vector_to_json(r.ed_per_component)},
                {"fixed", r.ed_fixed},
                {"total", r.ed_total}};
    j["deviance"] = r.deviance;
    j["caic"] = r.caic;
    j["convergence"] = {{"outer_iterations", r.outer_iterations},
                        {"pirls_iterations", r.pirls_iterations},
                        {"converged", r.converged}};
    json domain = json::array();
    for (const auto& box : artifact.fit.domain) domain.push_back({box[0], box[1]});
    j["domain"] = domain;
    j["n_obs"] = artifact.n_obs;

    // Lower Cholesky factor of the penalized coefficient matrix, packed
    // row-major; phi * C^{-1} is the interval covariance.
    const Matrix& L = r.coef_chol;
    json chol = json::array();
    for (Index i = 0; i < L.rows(); ++i)
        for (Index k = 0; k <= i; ++k) chol.push_back(L(i, k));
    j["posterior"] = {{"n_coef", L.rows()},
                      {"n_fixed", r.n_fixed},
                      {"n_random", r.n_random},
                      {"chol_lower", std::move(chol)}};

    std::ofstream out(path);
    if (!out) throw std::invalid_argument("artifact: cannot write '" + path + "'");
    out << j.dump(1) << "\n";
    if (!out) throw std::runtime_error("artifact: write to '" + path + "' failed");
}

FitArtifact read_artifact(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("artifact: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument("artifact: '" + path + "' is not valid JSON: " + e.what());
    }

    FitArtifact art;
    art.format_version = j.at("format_version").get<int>();
    if (art.format_version != 1)
        throw std::invalid_argument("artifact: unsupported format version");
    art.config = config_from_json(j.at("config"));
    art.n_obs = j.value("n_obs", 0);

    FitResult& r = art.fit.result;
    r.theta = vector_from_json(j.at("coefficients").at("theta"));
    r.beta = vector_from_json(j.at("coefficients").at("beta"));
    r.alpha = vector_from_json(j.at("coefficients").at("alpha"));
    r.sigma2.resize(static_cast<Index>(j.at("variances").size()));
    Index l = 0;
    for (const json& v : j.at("variances")) {
        art.tags.push_back({v.at("dimension").get<int>() - 1, v.at("index").get<int>()});
        r.sigma2[l++] = v.at("sigma2").get<double>();
    }
    r.phi = j.at("phi").get<double>();
    r.ed_per_component = vector_from_json(j.at("eds").at("per_component"));
    r.ed_fixed = j.at("eds").at("fixed").get<double>();
    r.ed_total = j.at("eds").at("total").get<double>();
    r.deviance = j.at("deviance").get<double>();
    r.caic = j.at("caic").get<double>();
    r.converged = j.at("convergence").at("converged").get<bool>();
    r.outer_iterations = j.at("convergence").at("outer_iterations").get<int>();
    r.pirls_iterations = j.at("convergence").at("pirls_iterations").get<int>();
    r.n_obs = art.n_obs;

    const json& post = j.at("posterior");
    const Index nc = post.at("n_coef").get<Index>();
    r.n_fixed = post.at("n_fixed").get<Index>();
    r.n_random = post.at("n_random").get<Index>();
    r.coef_chol = Matrix::Zero(nc, nc);
    const json& chol = post.at("chol_lower");
    size_t at = 0;
    for (Index i = 0; i < nc; ++i)
        for (Index k = 0; k <= i; ++k) r.coef_chol(i, k) = chol.at(at++).get<double>();

    // Rebuild the prediction-side spec from the stored config + domains.
    const json& domain = j.at("domain");
    for (size_t k = 0; k < art.config.dims.size(); ++k) {
        art.config.dims[k].x_min = domain.at(k).at(0).get<double>();
        art.config.dims[k].x_max = domain.at(k).at(1).get<double>();
        art.fit.domain.push_back({*art.config.dims[k].x_min, *art.config.dims[k].x_max});
    }
    art.fit.spec = resolve_spec_without_data(art.config);
    return art;
}

}  // namespace adaptps
