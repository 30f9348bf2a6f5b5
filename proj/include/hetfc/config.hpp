#pragma once

#include <string>

#include <json.hpp>

#include "hetfc/dgp.hpp"
#include "hetfc/population.hpp"
#include "hetfc/selection.hpp"

namespace hetfc {

using Json = nlohmann::json;

// Config documents ("kind" selects the family; unknown keys are rejected):
//   innovations: {"kind":"normal"} | {"kind":"t","nu":5}
//              | {"kind":"symgamma","xi":0.5}
//   volatility:  {"kind":"garch","phi0":..,"phi":[..],"psi":[..]}
//              | {"kind":"gjr", ..., "lambda":[..]}
//              | {"kind":"apgarch", ..., "mu":..}
//              | {"kind":"sv","a0":..,"a":[..],"v_var":..}
//              | {"kind":"constant","sigma2":..}
//   filter:      {"ar":[..],"ma":[..],"trunc_tol":1e-12}
//                with x_t = sum ar_i x_{t-i} + eps_t + sum ma_j eps_{t-j}
//   dgp:         {"filter":.., "volatility":.., "innovations":.., "burn_in":0}
// All parse failures raise ConfigError naming the offending field.
InnovationDist innovations_from_json(const Json& j);
VolatilityModel volatility_from_json(const Json& j);
LinearFilter filter_from_json(const Json& j);
DgpSpec dgp_from_json(const Json& j);

Json to_json(const InnovationDist& d);
Json to_json(const VolatilityModel& v);
Json to_json(const LinearFilter& f);
Json to_json(const DgpSpec& d);

Json to_json(const PopulationMoments& m);
PopulationMoments population_from_json(const Json& j);

Json load_json_file(const std::string& path);

}  // namespace hetfc
