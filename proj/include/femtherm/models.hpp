#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace femtherm {

enum class ModelKind { ross, sandia, faiman, wm1, wm2 };

const char* to_string(ModelKind kind);
ModelKind model_from_string(const std::string& name);
std::vector<ModelKind> all_models();

// Over-temperature forms. All predict T_o in K from G (W/m2) and WS (m/s):
//   Ross    T_o = k * G
//   Sandia  T_o = G * exp(a + b*WS)
//   Faiman  T_o = G / (U0 + U1*WS)
//   WM1     T_o = k * G * exp(-WS/d)
//   WM2     T_o = G * (k - k_W * min(WS, ws_cap))
struct RossCoeffs {
    double k = 0.0;  // K/(W/m2)
};
struct SandiaCoeffs {
    double a = 0.0;  // dimensionless
    double b = 0.0;  // s/m
};
struct FaimanCoeffs {
    double u0 = 0.0;  // W/(m2*K)
    double u1 = 0.0;  // W*s/(m3*K)
};
struct Wm1Coeffs {
    double k = 0.0;  // K/(W/m2)
    double d = 0.0;  // m/s
};
struct Wm2Coeffs {
    double k = 0.0;       // K/(W/m2)
    double k_w = 0.0;     // K*s/(W*m)
    double ws_cap = 8.0;  // m/s
};

struct FitProvenance {
    std::string dataset_id;
    std::string method;
    std::size_t n_samples = 0;
    bool fallback_applied = false;        // e.g. Faiman outlier replacement
    std::vector<std::string> warnings;
};

struct ModelCoefficients {
    std::variant<RossCoeffs, SandiaCoeffs, FaimanCoeffs, Wm1Coeffs, Wm2Coeffs> value;
    FitProvenance provenance;

    ModelKind kind() const;
    void validate() const;  // throws on out-of-range parameters
};

double predict_ross(double g, const RossCoeffs& c);
double predict_sandia(double g, double ws, const SandiaCoeffs& c);
double predict_faiman(double g, double ws, const FaimanCoeffs& c);
double predict_wm1(double g, double ws, const Wm1Coeffs& c);
double predict_wm2(double g, double ws, const Wm2Coeffs& c);

/// Pointwise evaluation. Missing G gives a missing output; missing WS gives a
/// missing output for wind-aware models (never silently treated as calm).
double predict_point(const ModelCoefficients& coeffs, double g, double ws);

std::vector<double> predict(const ModelCoefficients& coeffs, std::span<const double> g,
                            std::span<const double> ws);

/// Exact translation k = e^a, d = -1/b; requires b < 0.
Wm1Coeffs sandia_to_wm1(const SandiaCoeffs& c);
SandiaCoeffs wm1_to_sandia(const Wm1Coeffs& c);

enum class Variant { fixed, ewm, fem };
const char* to_string(Variant v);

struct Prediction {
    std::vector<std::int64_t> timestamps;
    std::vector<double> t_over;  // K
    ModelKind model = ModelKind::ross;
    Variant variant = Variant::fixed;
};

}  // namespace femtherm
