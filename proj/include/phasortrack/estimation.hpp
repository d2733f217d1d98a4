#ifndef PHASORTRACK_ESTIMATION_HPP
#define PHASORTRACK_ESTIMATION_HPP

#include <vector>

#include "phasortrack/signal_model.hpp"

namespace phasortrack {

enum class FitMode {
    JointGd,        // simultaneous gradient step on omega0, omegac, and all phasors
    ConcentratedGd, // phasors solved exactly each iteration, gradient step on frequencies only
};

struct EstimatorConfig {
    double alpha = 0.1;    // learning rate
    int max_iters = 350;   // iteration budget
    FitMode mode = FitMode::JointGd;
    double rel_tol = 1e-12; // early stop once the relative loss decrease falls below this
    bool freq_precondition = true;
};

void validate(const EstimatorConfig& config);

/// Gradient of the mean-squared loss. Phasor entries are the complex
/// numbers whose real/imaginary parts are the partials with respect to
/// the phasor's real/imaginary parts, so c - alpha*g is a plain
/// coordinate-wise descent step.
struct GradientVector {
    double d_omega0 = 0.0;
    double d_omegac = 0.0;
    PhasorMap d_phasors;
};

/// Euclidean norm over all gradient coordinates.
double grad_norm(const GradientVector& g);

struct EstimationTrace {
    std::vector<double> loss_history; // one entry per completed iteration
    ModelParams final_params;
    int iterations_run = 0;
    bool converged_early = false;
};

/// J = 1/(2M) * sum_n |x[n] - model[n]|^2
double loss(const ComplexSignal& segment, const ModelParams& params,
            const ModelStructure& structure);

/// Exact gradient of `loss` at `params`.
GradientVector gradient(const ComplexSignal& segment, const ModelParams& params,
                        const ModelStructure& structure);

/// Closed-form least-squares phasors at fixed frequencies: the minimizer
/// of |x - V C|^2 over C. Throws RankDeficiencyError if two model
/// frequencies coincide within 1e-9 rad/sample.
PhasorMap solve_phasors_ls(const ComplexSignal& segment, double omega0, double omegac,
                           const ModelStructure& structure);

/// Runs gradient descent from `init`. The loss logged for iteration i is
/// the value at the parameters that iteration steps from, so the trace
/// starts at the initial loss and the final entry is the converged value.
EstimationTrace fit_segment(const ComplexSignal& segment, const ModelParams& init,
                            const ModelStructure& structure, const EstimatorConfig& config);

/// Central finite-difference approximation of `gradient`; the validation
/// oracle for the analytic gradients.
GradientVector fd_gradient(const ComplexSignal& segment, const ModelParams& params,
                           const ModelStructure& structure, double freq_step = 1e-6,
                           double phasor_step = 1e-7);

} // namespace phasortrack

#endif // PHASORTRACK_ESTIMATION_HPP
