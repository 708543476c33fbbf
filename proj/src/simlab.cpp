#include "adaptps/simlab.hpp"

#include "adaptps/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace adaptps {

ScenarioId parse_scenario(const std::string& text) {
    if (text == "I" || text == "1") return ScenarioId::I;
    if (text == "II" || text == "2") return ScenarioId::II;
    if (text == "III" || text == "3") return ScenarioId::III;
    throw std::invalid_argument("unknown scenario '" + text + "' (expected I, II or III)");
}

std::string to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::I: return "I";
        case ScenarioId::II: return "II";
        case ScenarioId::III: return "III";
    }
    return "I";
}

SimMethod parse_method(const std::string& text) {
    if (text == "standard") return SimMethod::Standard;
    if (text == "adaptive-full" || text == "adaptive") return SimMethod::AdaptiveFull;
    throw std::invalid_argument("unknown method '" + text +
                                "' (expected standard or adaptive-full)");
}

std::string to_string(SimMethod m) {
    return m == SimMethod::Standard ? "standard" : "adaptive-full";
}

void Scenario::validate() const {
    if (n < 10) throw std::invalid_argument("Scenario: n must be >= 10");
    if (id == ScenarioId::I) {
        if (family != FamilyKind::Gaussian)
            throw std::invalid_argument("Scenario I is Gaussian-only");
        return;
    }
    if (family == FamilyKind::Gaussian) {
        const bool ok = (id == ScenarioId::II) ? (s == 0.1 || s == 0.5)
                                               : (s == 0.5 || s == 2.0);
        if (!ok)
            throw std::invalid_argument(
                "Scenario " + to_string(id) + ": published noise levels are " +
                (id == ScenarioId::II ? "0.1 and 0.5" : "0.5 and 2"));
    } else if (family != FamilyKind::Bernoulli) {
        throw std::invalid_argument("Scenarios accept Gaussian or Bernoulli responses");
    }
}

double true_surface(ScenarioId id, double x1, double x2) {
    switch (id) {
        case ScenarioId::I:
        case ScenarioId::II: {
            const double a = x1 / 2.2 - 0.2;
            const double b = x2 / 50.0;
            return std::exp(-15.0 * (a * a + b * b));
        }
        case ScenarioId::III: {
            const double d = x1 - 0.6;
            return 1.9 * (1.45 + std::exp(x1) * std::sin(13.0 * d * d)) * std::exp(-x2) *
                   std::sin(7.0 * x2);
        }
    }
    return 0.0;
}

SimDataset gen_dataset(const Scenario& sc) {
    sc.validate();
    double lo1 = 0.0, hi1 = 1.0, lo2 = 0.0, hi2 = 1.0;
    if (sc.id == ScenarioId::II) {
        lo1 = -5.0; hi1 = 1.5;
        lo2 = -50.0; hi2 = 150.0;
    }

    SimDataset out;
    out.data.x.resize(sc.n, 2);
    out.data.y.resize(sc.n);
    out.eta_true.resize(sc.n);

    Philox cov_rng(sc.seed, 0);  // stream 0: covariates
    for (int i = 0; i < sc.n; ++i) {
        out.data.x(i, 0) = cov_rng.uniform(lo1, hi1);
        out.data.x(i, 1) = cov_rng.uniform(lo2, hi2);
        out.eta_true[i] = true_surface(sc.id, out.data.x(i, 0), out.data.x(i, 1));
    }

    Philox noise_rng(sc.seed, 1);  // stream 1: response noise
    if (sc.family == FamilyKind::Gaussian) {
        double s = sc.s;
        if (sc.id == ScenarioId::I)
            s = std::abs(out.eta_true.minCoeff() - out.eta_true.maxCoeff()) / 4.0;
        out.s_used = s;
        for (int i = 0; i < sc.n; ++i)
            out.data.y[i] = out.eta_true[i] + noise_rng.normal(0.0, s);
    } else {
        out.p_true.resize(sc.n);
        for (int i = 0; i < sc.n; ++i) {
            // Scenario II rescales the surface to control the signal-to-noise
            // ratio before the logistic map.
            const double lin = (sc.id == ScenarioId::II) ? 6.0 * out.eta_true[i] - 3.0
                                                         : out.eta_true[i];
            const double pr = 1.0 / (1.0 + std::exp(-lin));
            out.p_true[i] = pr;
            out.data.y[i] = noise_rng.bernoulli(pr) ? 1.0 : 0.0;
        }
    }
    return out;
}

double mse(const Vector& fitted, const SimDataset& truth, FamilyKind family) {
    const Vector& target = (family == FamilyKind::Bernoulli) ? truth.p_true : truth.eta_true;
    if (fitted.size() != target.size())
        throw std::invalid_argument("mse: fitted values must match the sample size");
    return (fitted - target).squaredNorm() / static_cast<double>(target.size());
}

namespace {

ModelSpec scenario_model(const SimDataset& ds, SimMethod method,
                         const ReplicateSettings& st, FamilyKind family) {
    ModelSpec spec;
    for (int k = 0; k < 2; ++k) {
        BasisSpec b;
        b.x_min = ds.data.x.col(k).minCoeff();
        b.x_max = ds.data.x.col(k).maxCoeff();
        b.d = st.d;
        b.degree = st.degree;
        b.q = st.q;
        spec.penalty.dims.push_back(b);
    }
    const AdaptivityMode mode =
        method == SimMethod::Standard ? AdaptivityMode::None : AdaptivityMode::Full;
    spec.penalty.modes = {mode, mode};
    spec.penalty.p = {{st.p, st.p, st.p}, {st.p, st.p, st.p}};
    spec.penalty.psi_degree = st.psi_degree;
    spec.family = Family{family};
    return spec;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const size_t k = v.size();
    return (k % 2) ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
}

double quartile_of(std::vector<double> v, double f) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const double pos = f * static_cast<double>(v.size() - 1);
    const size_t i = static_cast<size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return (i + 1 < v.size()) ? v[i] * (1.0 - frac) + v[i + 1] * frac : v[i];
}

}  // namespace

ReplicateReport run_replicates(const Scenario& sc, int R, const std::vector<SimMethod>& methods,
                               std::uint64_t base_seed, const ReplicateSettings& settings) {
    sc.validate();
    if (R < 1) throw std::invalid_argument("run_replicates: R must be >= 1");
    if (methods.empty()) throw std::invalid_argument("run_replicates: no methods given");

    ReplicateReport report;
    report.scenario = sc;
    report.rows.resize(static_cast<size_t>(R) * methods.size());

    auto run_one = [&](int r) {
        Scenario local = sc;
        local.seed = base_seed + static_cast<std::uint64_t>(r);
        const SimDataset ds = gen_dataset(local);
        for (size_t mi = 0; mi < methods.size(); ++mi) {
            ReplicateRow row;
            row.replicate = r;
            row.method = methods[mi];
            row.seed = local.seed;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const ModelSpec spec = scenario_model(ds, methods[mi], settings, sc.family);
                const ModelFit fit = fit_model(spec, ds.data, settings.control);
                const PredictionTable pred = predict(fit, ds.data.x);
                const Vector& fitted =
                    (sc.family == FamilyKind::Bernoulli) ? pred.mu_hat : pred.eta_hat;
                row.mse = mse(fitted, ds, sc.family);
                row.log_mse = std::log(row.mse);
                row.converged = fit.result.converged;
                row.ed_total = fit.result.ed_total;
                row.outer_iterations = fit.result.outer_iterations;
            } catch (const std::exception&) {
                row.failed = true;
                row.mse = std::numeric_limits<double>::quiet_NaN();
                row.log_mse = row.mse;
            }
            row.fit_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            report.rows[static_cast<size_t>(r) * methods.size() + mi] = row;
        }
    };

    const int threads = std::max(1, settings.threads);
    if (threads == 1) {
        for (int r = 0; r < R; ++r) run_one(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&]() {
                for (int r = next.fetch_add(1); r < R; r = next.fetch_add(1)) run_one(r);
            });
        for (auto& th : pool) th.join();
    }

    for (SimMethod m : methods) {
        MethodSummary s;
        s.method = m;
        std::vector<double> mses, logs, secs;
        for (const ReplicateRow& row : report.rows) {
            if (row.method != m) continue;
            ++s.n_rows;
            if (row.failed) {
                ++s.n_failed;
                continue;
            }
            mses.push_back(row.mse);
            logs.push_back(row.log_mse);
            secs.push_back(row.fit_seconds);
        }
        s.median_mse = median_of(mses);
        s.q1_mse = quartile_of(mses, 0.25);
        s.q3_mse = quartile_of(mses, 0.75);
        s.median_log_mse = median_of(logs);
        s.median_seconds = median_of(secs);
        report.summaries.push_back(s);
    }
    return report;
}

}  // namespace adaptps
