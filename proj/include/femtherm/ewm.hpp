#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "femtherm/models.hpp"
#include "femtherm/series.hpp"

namespace femtherm {

struct EwmParams {
    double tau_s = 0.0;
    double dt_s = 0.0;
    double alpha = 1.0;  // 1 - exp(-dt/tau), in (0, 1]
    double span = 1.0;   // 2/alpha - 1
};

/// alpha = 1 - exp(-dt/tau). Throws on non-positive inputs.
double alpha_from(double tau_s, double dt_s);
double span_from(double alpha);
EwmParams ewm_params(double tau_s, double dt_s);

/// Position and length (in grid steps) of a hole in the input grid.
struct EwmGap {
    std::size_t index;       // output index following the gap
    std::int64_t steps;      // missing grid steps skipped (>= 1 extra)
};

/// Weight-normalized exponential weighted mean:
///   y_t = sum_i x_{t-i} (1-a)^i / sum_i (1-a)^i
/// computed recursively. The first output equals the first input. NaN inputs
/// yield NaN outputs; the accumulated state decays past them without reset.
std::vector<double> ewm(std::span<const double> x, double alpha);

/// Gap-aware variant for sparse rows: state decays by (1-a)^k across a
/// k-step timestamp gap. Gap sites are reported through `gaps` when given.
std::vector<double> ewm(std::span<const double> x, std::span<const std::int64_t> timestamps,
                        std::int64_t dt_s, double alpha, std::vector<EwmGap>* gaps = nullptr);

/// Evaluates a static model on (EWM(G), EWM(WS)); the smoothing is applied to
/// the input signals only, never to the output temperature. T_a is untouched
/// by construction since models predict the over-temperature.
Prediction dynamicize(const ModelCoefficients& coeffs, const OverTempSeries& s,
                      const EwmParams& params);

}  // namespace femtherm
