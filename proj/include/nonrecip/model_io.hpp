#pragma once

#include <string>
#include <variant>

#include "nonrecip/gauge.hpp"
#include "nonrecip/lattice.hpp"

namespace nonrecip {

// Model files hold either the 1D chain schema
//   {"M":int,"N":int,"tR":[c..],"tL":[c..],"long_range":[{"i","j","m","tR","tL"}..],
//    "boundary":"obc"|"pbc"}
// or the 2D schema {"Mx":int,"Ny":int,"tR":c,"tL":c,"tU":c,"tD":c,"t1":c,"t2":c},
// where c is a real number or a two-element [re, im] array.
using AnyModel = std::variant<LatticeModel1D, LatticeModel2D>;

LatticeModel1D parse_model_1d(const std::string& json_text);
LatticeModel2D parse_model_2d(const std::string& json_text);
AnyModel load_model(const std::string& path); // throws Error(SchemaError) with diagnostics

std::string format_double(double v);   // %.12g, deterministic
std::string format_json(const GaugeReport& report);

} // namespace nonrecip
