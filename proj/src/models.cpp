#include "femtherm/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "femtherm/series.hpp"

namespace femtherm {

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::ross: return "ross";
        case ModelKind::sandia: return "sandia";
        case ModelKind::faiman: return "faiman";
        case ModelKind::wm1: return "wm1";
        case ModelKind::wm2: return "wm2";
    }
    return "?";
}

ModelKind model_from_string(const std::string& name) {
    for (ModelKind k : all_models())
        if (name == to_string(k)) return k;
    throw std::invalid_argument("unknown model: " + name);
}

std::vector<ModelKind> all_models() {
    return {ModelKind::wm1, ModelKind::wm2, ModelKind::ross, ModelKind::sandia,
            ModelKind::faiman};
}

const char* to_string(Variant v) {
    switch (v) {
        case Variant::fixed: return "static";
        case Variant::ewm: return "ewm";
        case Variant::fem: return "fem";
    }
    return "?";
}

ModelKind ModelCoefficients::kind() const {
    switch (value.index()) {
        case 0: return ModelKind::ross;
        case 1: return ModelKind::sandia;
        case 2: return ModelKind::faiman;
        case 3: return ModelKind::wm1;
        default: return ModelKind::wm2;
    }
}

void ModelCoefficients::validate() const {
    std::visit(
        [](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, RossCoeffs>) {
                if (c.k <= 0.0) throw std::invalid_argument("ross: k must be > 0");
            } else if constexpr (std::is_same_v<T, SandiaCoeffs>) {
                if (!std::isfinite(c.a) || !std::isfinite(c.b))
                    throw std::invalid_argument("sandia: coefficients must be finite");
            } else if constexpr (std::is_same_v<T, FaimanCoeffs>) {
                if (c.u0 <= 0.0) throw std::invalid_argument("faiman: U0 must be > 0");
                if (c.u1 < 0.0) throw std::invalid_argument("faiman: U1 must be >= 0");
            } else if constexpr (std::is_same_v<T, Wm1Coeffs>) {
                if (c.k <= 0.0) throw std::invalid_argument("wm1: k must be > 0");
                if (c.d <= 0.0) throw std::invalid_argument("wm1: d must be > 0");
            } else {
                if (c.k <= 0.0) throw std::invalid_argument("wm2: k must be > 0");
                if (c.ws_cap <= 0.0) throw std::invalid_argument("wm2: ws_cap must be > 0");
                if (c.k - c.k_w * c.ws_cap < 0.0)
                    throw std::invalid_argument(
                        "wm2: k - k_W*ws_cap must be >= 0 (negative T_o at the cap)");
            }
        },
        value);
}

double predict_ross(double g, const RossCoeffs& c) {
    if (is_missing(g)) return missing();
    return c.k * g;
}

double predict_sandia(double g, double ws, const SandiaCoeffs& c) {
    if (is_missing(g) || is_missing(ws)) return missing();
    return g * std::exp(c.a + c.b * ws);
}

double predict_faiman(double g, double ws, const FaimanCoeffs& c) {
    if (is_missing(g) || is_missing(ws)) return missing();
    const double denom = c.u0 + c.u1 * ws;
    if (denom <= 0.0) throw std::domain_error("faiman: U0 + U1*WS must be > 0");
    return g / denom;
}

double predict_wm1(double g, double ws, const Wm1Coeffs& c) {
    if (is_missing(g) || is_missing(ws)) return missing();
    return c.k * g * std::exp(-ws / c.d);
}

double predict_wm2(double g, double ws, const Wm2Coeffs& c) {
    if (is_missing(g) || is_missing(ws)) return missing();
    return g * (c.k - c.k_w * std::min(ws, c.ws_cap));
}

double predict_point(const ModelCoefficients& coeffs, double g, double ws) {
    return std::visit(
        [&](const auto& c) -> double {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, RossCoeffs>)
                return predict_ross(g, c);
            else if constexpr (std::is_same_v<T, SandiaCoeffs>)
                return predict_sandia(g, ws, c);
            else if constexpr (std::is_same_v<T, FaimanCoeffs>)
                return predict_faiman(g, ws, c);
            else if constexpr (std::is_same_v<T, Wm1Coeffs>)
                return predict_wm1(g, ws, c);
            else
                return predict_wm2(g, ws, c);
        },
        coeffs.value);
}

std::vector<double> predict(const ModelCoefficients& coeffs, std::span<const double> g,
                            std::span<const double> ws) {
    if (g.size() != ws.size())
        throw std::invalid_argument("predict: G and WS lengths differ");
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = predict_point(coeffs, g[i], ws[i]);
    return out;
}

Wm1Coeffs sandia_to_wm1(const SandiaCoeffs& c) {
    if (c.b >= 0.0)
        throw std::domain_error("sandia_to_wm1: b must be < 0 (no convective cooling)");
    return {std::exp(c.a), -1.0 / c.b};
}

SandiaCoeffs wm1_to_sandia(const Wm1Coeffs& c) {
    if (c.k <= 0.0 || c.d <= 0.0)
        throw std::domain_error("wm1_to_sandia: k and d must be > 0");
    return {std::log(c.k), -1.0 / c.d};
}

}  // namespace femtherm
