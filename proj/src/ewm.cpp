#include "femtherm/ewm.hpp"

#include <cmath>
#include <stdexcept>

namespace femtherm {

double alpha_from(double tau_s, double dt_s) {
    if (tau_s <= 0.0) throw std::invalid_argument("alpha_from: tau must be > 0");
    if (dt_s <= 0.0) throw std::invalid_argument("alpha_from: dt must be > 0");
    return 1.0 - std::exp(-dt_s / tau_s);
}

double span_from(double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("span_from: alpha must be in (0, 1]");
    return 2.0 / alpha - 1.0;
}

EwmParams ewm_params(double tau_s, double dt_s) {
    EwmParams p;
    p.tau_s = tau_s;
    p.dt_s = dt_s;
    p.alpha = alpha_from(tau_s, dt_s);
    p.span = span_from(p.alpha);
    return p;
}

namespace {

// Weight-normalized mean kept in incremental form: with total weight
// W_t = (1-a) W_{t-1} + 1, the update y += (x - y)/W_t equals the explicit
// weighted sum and is an exact fixed point on constant input.
struct EwmState {
    double mean = 0.0;
    double weight = 0.0;  // sum of decayed weights of seen samples

    void decay(double beta, std::int64_t steps) {
        weight *= steps == 1 ? beta : std::pow(beta, static_cast<double>(steps));
    }

    double push(double x) {
        weight += 1.0;
        if (weight == 1.0)
            mean = x;
        else
            mean += (x - mean) / weight;
        return mean;
    }
};

}  // namespace

std::vector<double> ewm(std::span<const double> x, double alpha) {
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("ewm: alpha must be in (0, 1]");
    if (x.empty()) throw std::invalid_argument("ewm: empty series");
    const double beta = 1.0 - alpha;
    std::vector<double> out(x.size());
    EwmState st;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0) st.decay(beta, 1);
        out[i] = is_missing(x[i]) ? missing() : st.push(x[i]);
    }
    return out;
}

std::vector<double> ewm(std::span<const double> x, std::span<const std::int64_t> timestamps,
                        std::int64_t dt_s, double alpha, std::vector<EwmGap>* gaps) {
    if (x.size() != timestamps.size())
        throw std::invalid_argument("ewm: values and timestamps lengths differ");
    if (dt_s <= 0) throw std::invalid_argument("ewm: dt must be positive");
    if (!(alpha > 0.0) || alpha > 1.0)
        throw std::invalid_argument("ewm: alpha must be in (0, 1]");
    if (x.empty()) throw std::invalid_argument("ewm: empty series");
    const double beta = 1.0 - alpha;
    std::vector<double> out(x.size());
    EwmState st;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i > 0) {
            const std::int64_t steps = (timestamps[i] - timestamps[i - 1]) / dt_s;
            if (steps > 1 && gaps) gaps->push_back({i, steps - 1});
            st.decay(beta, steps);
        }
        out[i] = is_missing(x[i]) ? missing() : st.push(x[i]);
    }
    return out;
}

Prediction dynamicize(const ModelCoefficients& coeffs, const OverTempSeries& s,
                      const EwmParams& params) {
    if (s.empty()) throw std::invalid_argument("dynamicize: empty series");
    const auto g_ewm = ewm(s.g_poa, s.timestamps, s.dt_seconds, params.alpha);
    const auto ws_ewm = ewm(s.ws, s.timestamps, s.dt_seconds, params.alpha);
    Prediction pred;
    pred.timestamps = s.timestamps;
    pred.t_over = predict(coeffs, g_ewm, ws_ewm);
    pred.model = coeffs.kind();
    pred.variant = Variant::ewm;
    return pred;
}

}  // namespace femtherm
