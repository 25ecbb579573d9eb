#include "femtherm/rcnet.hpp"

#include <stdexcept>

namespace femtherm {

void LayerSpec::validate() const {
    if (thickness_m < 0.0) throw std::invalid_argument(name + ": thickness must be >= 0");
    if (conductivity <= 0.0) throw std::invalid_argument(name + ": conductivity must be > 0");
    if (density <= 0.0) throw std::invalid_argument(name + ": density must be > 0");
    if (specific_heat <= 0.0) throw std::invalid_argument(name + ": specific heat must be > 0");
    if (area_m2 <= 0.0) throw std::invalid_argument(name + ": area must be > 0");
}

LayerRc layer_rc(const LayerSpec& layer) {
    layer.validate();
    LayerRc rc;
    rc.r_eq = layer.thickness_m / layer.conductivity;
    rc.c_eq = layer.density * layer.specific_heat * layer.thickness_m;
    rc.tau0_s = rc.r_eq * rc.c_eq;
    rc.mass_kg = layer.density * layer.area_m2 * layer.thickness_m;
    return rc;
}

double parallel_r(double r_front, double r_back) {
    if (r_front <= 0.0 || r_back <= 0.0)
        throw std::invalid_argument("parallel combination needs positive resistances");
    return r_front * r_back / (r_front + r_back);
}

namespace {

RcSummary::Row as_row(const std::string& name, const LayerRc& rc) {
    return {name, rc.r_eq, rc.c_eq, rc.tau0_s, rc.mass_kg};
}

RcSummary::Row side_total(const std::string& name, const std::vector<RcSummary::Row>& rows) {
    RcSummary::Row total{name, 0.0, 0.0, 0.0, 0.0};
    for (const auto& r : rows) {
        total.r_eq += r.r_eq;
        total.c_eq += r.c_eq;
        total.mass_kg += r.mass_kg;
    }
    total.tau0_s = total.r_eq * total.c_eq;
    return total;
}

RcSummary::Row in_series(const std::string& name, const RcSummary::Row& a,
                         const RcSummary::Row& b) {
    RcSummary::Row out{name, a.r_eq + b.r_eq, a.c_eq + b.c_eq, 0.0, a.mass_kg + b.mass_kg};
    out.tau0_s = out.r_eq * out.c_eq;
    return out;
}

RcSummary::Row in_parallel(const std::string& name, const RcSummary::Row& f,
                           const RcSummary::Row& b) {
    RcSummary::Row out{name, parallel_r(f.r_eq, b.r_eq), f.c_eq + b.c_eq, 0.0,
                       f.mass_kg + b.mass_kg};
    out.tau0_s = out.r_eq * out.c_eq;
    return out;
}

}  // namespace

RcSummary stack_summary(const LayerStack& stack, bool include_air) {
    if (stack.front_layers.empty()) throw std::invalid_argument("stack has no front layers");
    if (stack.back_layers.empty()) throw std::invalid_argument("stack has no back layers");

    RcSummary s;
    s.include_air = include_air;
    for (const auto& layer : stack.front_layers)
        s.front_layers.push_back(as_row(layer.name, layer_rc(layer)));
    for (const auto& layer : stack.back_layers)
        s.back_layers.push_back(as_row(layer.name, layer_rc(layer)));
    s.front_air = as_row(stack.front_air_film.name, layer_rc(stack.front_air_film));
    s.back_air = as_row(stack.back_air_film.name, layer_rc(stack.back_air_film));

    s.total_front = side_total("Total_front", s.front_layers);
    s.total_back = side_total("Total_back", s.back_layers);
    s.total_front_air = in_series("Total_front+air", s.total_front, s.front_air);
    s.total_back_air = in_series("Total_back+air", s.total_back, s.back_air);
    s.total = in_parallel("Total", s.total_front, s.total_back);
    s.total_air = in_parallel("Total_air", s.total_front_air, s.total_back_air);
    // Frame mass already counted once per side; parallel rows keep the plain sum.
    return s;
}

LayerSpec air_film_for_target(double r_target, double lambda_air, double density,
                              double specific_heat, double area_m2) {
    if (r_target < 0.0) throw std::invalid_argument("target film resistance must be >= 0");
    LayerSpec film;
    film.name = "Air film";
    film.thickness_m = r_target * lambda_air;
    film.conductivity = lambda_air;
    film.density = density;
    film.specific_heat = specific_heat;
    film.area_m2 = area_m2;
    return film;
}

}  // namespace femtherm
