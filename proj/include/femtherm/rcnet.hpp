#pragma once

#include <string>
#include <vector>

namespace femtherm {

/// One material layer of a module cross-section. R/C values are per unit
/// area of the layer itself; A_eq enters only the mass column.
struct LayerSpec {
    std::string name;
    double thickness_m = 0.0;          // L
    double conductivity = 0.0;         // lambda, W/(m*K)
    double density = 0.0;              // rho, kg/m3
    double specific_heat = 0.0;        // c_p, J/(kg*K)
    double area_m2 = 1.0;              // A_eq

    void validate() const;
};

struct LayerRc {
    double r_eq = 0.0;   // K/(W/m2)
    double c_eq = 0.0;   // J/(K*m2)
    double tau0_s = 0.0; // r_eq * c_eq
    double mass_kg = 0.0;
};

/// r = L/lambda, c = rho*c_p*L, tau0 = r*c, mass = rho*A*L.
LayerRc layer_rc(const LayerSpec& layer);

/// Heat flows from the cell plane out through the front and back stacks in
/// parallel; an air film sits in series on each surface.
struct LayerStack {
    std::vector<LayerSpec> front_layers;  // outermost first
    std::vector<LayerSpec> back_layers;   // innermost first
    LayerSpec front_air_film;
    LayerSpec back_air_film;
    std::string name;
};

struct RcSummary {
    struct Row {
        std::string name;
        double r_eq = 0.0;    // K/(W/m2)
        double c_eq = 0.0;    // J/(K*m2)
        double tau0_s = 0.0;
        double mass_kg = 0.0;
    };
    std::vector<Row> front_layers;
    std::vector<Row> back_layers;
    Row front_air;
    Row back_air;
    Row total_front;      // series sum of front layers, no air
    Row total_back;
    Row total_front_air;  // front + front air film
    Row total_back_air;
    Row total;            // parallel(front, back), no air
    Row total_air;        // parallel(front+air, back+air)
    bool include_air = true;

    /// Overall time constant actually in effect (total_air when air films
    /// are included, total otherwise).
    double overall_tau0_s() const { return include_air ? total_air.tau0_s : total.tau0_s; }
};

double parallel_r(double r_front, double r_back);

/// Per-side series totals, then the front/back parallel combination.
/// Side tau0 is r_side * c_side (not a sum of layer tau0 values).
RcSummary stack_summary(const LayerStack& stack, bool include_air);

/// Air layer whose thickness reproduces a requested film resistance:
/// L = r_target * lambda_air.
LayerSpec air_film_for_target(double r_target, double lambda_air = 0.023,
                              double density = 1.23, double specific_heat = 1000.0,
                              double area_m2 = 1.6);

}  // namespace femtherm
