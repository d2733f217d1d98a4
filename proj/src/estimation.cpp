#include "phasortrack/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>

namespace phasortrack {

namespace {

// dOmega_u/dOmega0 per component: 1 for the fundamental and the
// interharmonics, l for harmonic l.
double omega0_chain_factor(const ComponentKey& key) {
    return key.kind == ComponentKey::Kind::Harmonic ? static_cast<double>(key.index) : 1.0;
}

// dOmega_u/dOmegac per component: k for interharmonic k, 0 otherwise.
double omegac_chain_factor(const ComponentKey& key) {
    return key.kind == ComponentKey::Kind::Interharmonic ? static_cast<double>(key.index) : 0.0;
}

void require_determined(std::size_t n_samples, std::size_t n_components) {
    if (n_samples < n_components)
        throw UnderdeterminedModelError("segment of " + std::to_string(n_samples) +
                                        " samples cannot determine " +
                                        std::to_string(n_components) + " components");
}

// Shared single pass: model evaluation, residual, loss, and (optionally)
// the full gradient. Component accumulation follows the canonical grid
// order so the model samples match synthesize() exactly.
double loss_and_gradient(const ComplexSignal& segment, const ModelParams& params,
                         const ModelStructure& structure, GradientVector* grad) {
    const std::size_t m = segment.size();
    require_determined(m, structure.component_count());

    const auto grid = frequency_grid(params, structure);
    const std::size_t n_comp = grid.size();

    std::vector<std::vector<cplx>> carriers(n_comp, std::vector<cplx>(m));
    std::vector<cplx> model(m, cplx{0.0, 0.0});
    for (std::size_t u = 0; u < n_comp; ++u) {
        detail::fill_carrier(carriers[u], grid[u].second);
        const cplx c = params.phasors.at(grid[u].first);
        for (std::size_t n = 0; n < m; ++n) model[n] += c * carriers[u][n];
    }

    std::vector<cplx> residual(m);
    double sum_sq = 0.0;
    for (std::size_t n = 0; n < m; ++n) {
        residual[n] = segment.samples[n] - model[n];
        sum_sq += std::norm(residual[n]);
    }
    const double j = sum_sq / (2.0 * static_cast<double>(m));

    if (grad) {
        grad->d_omega0 = 0.0;
        grad->d_omegac = 0.0;
        grad->d_phasors.clear();
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t u = 0; u < n_comp; ++u) {
            // S_u = sum_n conj(r[n]) e^{j w_u n};  D_u adds the chain-rule factor n.
            cplx s{0.0, 0.0};
            cplx d{0.0, 0.0};
            for (std::size_t n = 0; n < m; ++n) {
                const cplx t = std::conj(residual[n]) * carriers[u][n];
                s += t;
                d += static_cast<double>(n) * t;
            }
            const ComponentKey& key = grid[u].first;
            grad->d_phasors[key] = -inv_m * std::conj(s);
            const double freq_term = inv_m * std::imag(params.phasors.at(key) * d);
            grad->d_omega0 += omega0_chain_factor(key) * freq_term;
            grad->d_omegac += omegac_chain_factor(key) * freq_term;
        }
    }
    return j;
}

bool all_finite(const GradientVector& g) {
    if (!std::isfinite(g.d_omega0) || !std::isfinite(g.d_omegac)) return false;
    for (const auto& [key, v] : g.d_phasors)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

// Diagonal preconditioner scales for the frequency coordinates; the raw
// dJ/dOmega gradients carry a chain-rule factor of n (up to M-1) that the
// phasor gradients lack.
struct FreqPreconditioner {
    double omega0_divisor = 1.0;
    double omegac_divisor = 1.0;

    static FreqPreconditioner make(std::size_t m, const ModelStructure& structure, bool enabled) {
        FreqPreconditioner p;
        if (!enabled) return p;
        double sum_n_sq = 0.0;
        for (std::size_t n = 0; n < m; ++n) sum_n_sq += static_cast<double>(n) * static_cast<double>(n);
        // s = mean(n^2); a single-sample segment would give 0.
        const double s = sum_n_sq > 0.0 ? sum_n_sq / static_cast<double>(m) : 1.0;
        double k_mean_sq = 1.0;
        if (!structure.interharmonic_indices.empty()) {
            double sum_k_sq = 0.0;
            for (int k : structure.interharmonic_indices) sum_k_sq += static_cast<double>(k) * k;
            k_mean_sq = sum_k_sq / static_cast<double>(structure.interharmonic_indices.size());
        }
        p.omega0_divisor = s;
        p.omegac_divisor = s * k_mean_sq;
        return p;
    }
};

} // namespace

void validate(const EstimatorConfig& config) {
    if (!std::isfinite(config.alpha) || !(config.alpha > 0.0))
        throw ModelError("estimator alpha must be positive and finite");
    if (config.max_iters < 1) throw ModelError("estimator max_iters must be at least 1");
    if (!std::isfinite(config.rel_tol) || config.rel_tol < 0.0)
        throw ModelError("estimator rel_tol must be non-negative");
}

double grad_norm(const GradientVector& g) {
    double acc = g.d_omega0 * g.d_omega0 + g.d_omegac * g.d_omegac;
    for (const auto& [key, v] : g.d_phasors) acc += std::norm(v);
    return std::sqrt(acc);
}

double loss(const ComplexSignal& segment, const ModelParams& params,
            const ModelStructure& structure) {
    return loss_and_gradient(segment, params, structure, nullptr);
}

GradientVector gradient(const ComplexSignal& segment, const ModelParams& params,
                        const ModelStructure& structure) {
    GradientVector g;
    loss_and_gradient(segment, params, structure, &g);
    return g;
}

PhasorMap solve_phasors_ls(const ComplexSignal& segment, double omega0, double omegac,
                           const ModelStructure& structure) {
    ModelParams probe;
    probe.omega0 = omega0;
    probe.omegac = omegac;
    const auto grid = frequency_grid(probe, structure);
    const std::size_t n_comp = grid.size();
    const std::size_t m = segment.size();
    require_determined(m, n_comp);

    for (std::size_t a = 0; a < n_comp; ++a)
        for (std::size_t b = a + 1; b < n_comp; ++b)
            if (std::abs(grid[a].second - grid[b].second) < 1e-9)
                throw RankDeficiencyError("components " + grid[a].first.name() + " and " +
                                          grid[b].first.name() +
                                          " collapse onto the same frequency");

    std::vector<double> omegas(n_comp);
    for (std::size_t u = 0; u < n_comp; ++u) omegas[u] = grid[u].second;
    const Eigen::MatrixXcd v = build_vandermonde(omegas, m);
    Eigen::VectorXcd x(static_cast<Eigen::Index>(m));
    for (std::size_t n = 0; n < m; ++n) x(static_cast<Eigen::Index>(n)) = segment.samples[n];

    // Normal equations; the Gram matrix is small (L x L) and well
    // conditioned for distinct frequencies at these segment lengths.
    const Eigen::MatrixXcd gram = v.adjoint() * v;
    const Eigen::VectorXcd rhs = v.adjoint() * x;
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw RankDeficiencyError("model columns are numerically rank deficient");
    const Eigen::VectorXcd c = llt.solve(rhs);

    PhasorMap phasors;
    for (std::size_t u = 0; u < n_comp; ++u)
        phasors[grid[u].first] = c(static_cast<Eigen::Index>(u));
    return phasors;
}

EstimationTrace fit_segment(const ComplexSignal& segment, const ModelParams& init,
                            const ModelStructure& structure, const EstimatorConfig& config) {
    validate(segment);
    validate(init, structure);
    validate(config);
    require_determined(segment.size(), structure.component_count());

    const auto precond =
        FreqPreconditioner::make(segment.size(), structure, config.freq_precondition);

    EstimationTrace trace;
    trace.loss_history.reserve(static_cast<std::size_t>(config.max_iters));
    ModelParams params = init;

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        double j;
        GradientVector g;
        try {
            if (config.mode == FitMode::ConcentratedGd)
                params.phasors = solve_phasors_ls(segment, params.omega0, params.omegac, structure);
            j = loss_and_gradient(segment, params, structure, &g);
        } catch (const FrequencyRangeError& e) {
            throw DivergenceError(std::string("frequencies escaped the valid band: ") + e.what(),
                                  iter);
        } catch (const RankDeficiencyError& e) {
            throw DivergenceError(std::string("frequencies collapsed during descent: ") + e.what(),
                                  iter);
        }
        if (!std::isfinite(j) || !all_finite(g))
            throw DivergenceError("non-finite loss or gradient", iter);

        trace.loss_history.push_back(j);
        if (iter > 1) {
            const double prev = trace.loss_history[trace.loss_history.size() - 2];
            const double rel_decrease = (prev - j) / std::max(prev, 1e-30);
            if (rel_decrease < config.rel_tol) {
                trace.converged_early = true;
                break;
            }
        }

        if (config.mode == FitMode::JointGd)
            for (auto& [key, c] : params.phasors) c -= config.alpha * g.d_phasors.at(key);
        params.omega0 -= config.alpha * g.d_omega0 / precond.omega0_divisor;
        params.omegac -= config.alpha * g.d_omegac / precond.omegac_divisor;
    }

    if (config.mode == FitMode::ConcentratedGd) {
        try {
            params.phasors = solve_phasors_ls(segment, params.omega0, params.omegac, structure);
        } catch (const Error& e) {
            throw DivergenceError(std::string("final phasor solve failed: ") + e.what(),
                                  static_cast<int>(trace.loss_history.size()));
        }
    }

    trace.final_params = std::move(params);
    trace.iterations_run = static_cast<int>(trace.loss_history.size());
    return trace;
}

GradientVector fd_gradient(const ComplexSignal& segment, const ModelParams& params,
                           const ModelStructure& structure, double freq_step,
                           double phasor_step) {
    if (!(freq_step > 0.0) || !(phasor_step > 0.0))
        throw ModelError("finite-difference steps must be positive");

    const auto central = [&](auto&& mutate, double h) {
        ModelParams up = params;
        ModelParams down = params;
        mutate(up, h);
        mutate(down, -h);
        return (loss(segment, up, structure) - loss(segment, down, structure)) / (2.0 * h);
    };

    GradientVector g;
    g.d_omega0 = central([](ModelParams& p, double h) { p.omega0 += h; }, freq_step);
    g.d_omegac = central([](ModelParams& p, double h) { p.omegac += h; }, freq_step);
    for (const auto& [key, c] : params.phasors) {
        const double re = central(
            [&key](ModelParams& p, double h) { p.phasors.at(key) += cplx{h, 0.0}; }, phasor_step);
        const double im = central(
            [&key](ModelParams& p, double h) { p.phasors.at(key) += cplx{0.0, h}; }, phasor_step);
        g.d_phasors[key] = cplx{re, im};
    }
    return g;
}

} // namespace phasortrack
