#include "hetfc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hetfc/errors.hpp"

namespace hetfc {

namespace {

[[noreturn]] void fail(const std::string& ctx, const std::string& what) {
  throw ConfigError(ctx + ": " + what);
}

void check_keys(const Json& j, const std::string& ctx, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(ctx, "expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(ctx, "unknown field '" + it.key() + "'");
}

double get_number(const Json& j, const std::string& ctx, const std::string& key) {
  if (!j.contains(key)) fail(ctx, "missing field '" + key + "'");
  if (!j[key].is_number()) fail(ctx, "field '" + key + "' must be a number");
  return j[key].get<double>();
}

double get_number_or(const Json& j, const std::string& ctx, const std::string& key,
                     double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(ctx, "field '" + key + "' must be a number");
  return j[key].get<double>();
}

std::vector<double> get_vector(const Json& j, const std::string& ctx, const std::string& key,
                               bool required) {
  if (!j.contains(key)) {
    if (required) fail(ctx, "missing field '" + key + "'");
    return {};
  }
  if (!j[key].is_array()) fail(ctx, "field '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) fail(ctx, "field '" + key + "' must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string get_string(const Json& j, const std::string& ctx, const std::string& key) {
  if (!j.contains(key)) fail(ctx, "missing field '" + key + "'");
  if (!j[key].is_string()) fail(ctx, "field '" + key + "' must be a string");
  return j[key].get<std::string>();
}

// Constructor-level std::invalid_argument becomes a ConfigError with context.
template <class F>
auto lift(const std::string& ctx, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    fail(ctx, e.what());
  } catch (const ModelError& e) {
    fail(ctx, e.what());
  }
}

}  // namespace

InnovationDist innovations_from_json(const Json& j) {
  const std::string ctx = "innovations";
  check_keys(j, ctx, {"kind", "nu", "xi"});
  const std::string kind = get_string(j, ctx, "kind");
  if (kind == "normal") return InnovationDist::std_normal();
  if (kind == "t")
    return lift(ctx, [&] { return InnovationDist::normalized_t(get_number(j, ctx, "nu")); });
  if (kind == "symgamma")
    return lift(ctx, [&] { return InnovationDist::sym_gamma(get_number(j, ctx, "xi")); });
  fail(ctx, "unknown kind '" + kind + "' (expected normal, t or symgamma)");
}

VolatilityModel volatility_from_json(const Json& j) {
  const std::string ctx = "volatility";
  if (!j.is_object() || !j.contains("kind")) fail(ctx, "missing field 'kind'");
  const std::string kind = get_string(j, ctx, "kind");
  if (kind == "garch") {
    check_keys(j, ctx, {"kind", "phi0", "phi", "psi"});
    return lift(ctx, [&] {
      return VolatilityModel::garch(get_number(j, ctx, "phi0"), get_vector(j, ctx, "phi", true),
                                    get_vector(j, ctx, "psi", false));
    });
  }
  if (kind == "gjr") {
    check_keys(j, ctx, {"kind", "phi0", "phi", "lambda", "psi"});
    return lift(ctx, [&] {
      return VolatilityModel::gjr_garch(
          get_number(j, ctx, "phi0"), get_vector(j, ctx, "phi", true),
          get_vector(j, ctx, "lambda", true), get_vector(j, ctx, "psi", false));
    });
  }
  if (kind == "apgarch") {
    check_keys(j, ctx, {"kind", "phi0", "phi", "lambda", "psi", "mu"});
    return lift(ctx, [&] {
      return VolatilityModel::ap_garch(
          get_number(j, ctx, "phi0"), get_vector(j, ctx, "phi", true),
          get_vector(j, ctx, "lambda", false), get_vector(j, ctx, "psi", false),
          get_number(j, ctx, "mu"));
    });
  }
  if (kind == "sv") {
    check_keys(j, ctx, {"kind", "a0", "a", "v_var"});
    return lift(ctx, [&] {
      return VolatilityModel::sv(get_number(j, ctx, "a0"), get_vector(j, ctx, "a", true),
                                 get_number(j, ctx, "v_var"));
    });
  }
  if (kind == "constant") {
    check_keys(j, ctx, {"kind", "sigma2"});
    return lift(ctx, [&] { return VolatilityModel::constant(get_number(j, ctx, "sigma2")); });
  }
  fail(ctx, "unknown kind '" + kind + "'");
}

LinearFilter filter_from_json(const Json& j) {
  const std::string ctx = "filter";
  check_keys(j, ctx, {"ar", "ma", "trunc_tol"});
  return lift(ctx, [&] {
    return LinearFilter::from_arma(get_vector(j, ctx, "ar", false),
                                   get_vector(j, ctx, "ma", false),
                                   get_number_or(j, ctx, "trunc_tol", 1e-12));
  });
}

DgpSpec dgp_from_json(const Json& j) {
  const std::string ctx = "dgp";
  check_keys(j, ctx, {"filter", "volatility", "innovations", "burn_in"});
  DgpSpec d;
  if (j.contains("filter")) d.filter = filter_from_json(j["filter"]);
  if (!j.contains("volatility")) fail(ctx, "missing field 'volatility'");
  d.volatility = volatility_from_json(j["volatility"]);
  d.innovations =
      j.contains("innovations") ? innovations_from_json(j["innovations"]) : InnovationDist();
  const double burn = get_number_or(j, ctx, "burn_in", 0.0);
  if (burn < 0) fail(ctx, "burn_in must be >= 0");
  d.burn_in = static_cast<std::size_t>(burn);
  return d;
}

Json to_json(const InnovationDist& d) {
  switch (d.kind()) {
    case InnovationKind::StdNormal: return Json{{"kind", "normal"}};
    case InnovationKind::NormalizedT: return Json{{"kind", "t"}, {"nu", d.nu()}};
    case InnovationKind::SymGamma: return Json{{"kind", "symgamma"}, {"xi", d.xi()}};
  }
  return {};
}

Json to_json(const VolatilityModel& v) {
  switch (v.kind()) {
    case VolatilityKind::Constant:
      return Json{{"kind", "constant"}, {"sigma2", v.constant_sigma2()}};
    case VolatilityKind::Sv:
      return Json{{"kind", "sv"}, {"a0", v.sv_a0()}, {"a", v.sv_a()}, {"v_var", v.sv_v_var()}};
    case VolatilityKind::ApGarch: {
      bool zero_lambda = true;
      for (double l : v.lambda()) zero_lambda = zero_lambda && l == 0.0;
      if (v.power() == 2.0 && zero_lambda)
        return Json{{"kind", "garch"}, {"phi0", v.phi0()}, {"phi", v.phi()}, {"psi", v.psi()}};
      if (v.power() == 2.0)
        return Json{{"kind", "gjr"}, {"phi0", v.phi0()}, {"phi", v.phi()},
                    {"lambda", v.lambda()}, {"psi", v.psi()}};
      return Json{{"kind", "apgarch"}, {"phi0", v.phi0()}, {"phi", v.phi()},
                  {"lambda", v.lambda()}, {"psi", v.psi()}, {"mu", v.power()}};
    }
  }
  return {};
}

Json to_json(const LinearFilter& f) {
  return Json{{"ar", f.ar()}, {"ma", f.ma()}, {"trunc_tol", f.truncation_tolerance()}};
}

Json to_json(const DgpSpec& d) {
  return Json{{"filter", to_json(d.filter)},
              {"volatility", to_json(d.volatility)},
              {"innovations", to_json(d.innovations)},
              {"burn_in", d.burn_in}};
}

namespace {

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty()) fail(ctx, "expected a non-empty matrix");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  Matrix m(rows, cols);
  for (std::size_t a = 0; a < rows; ++a) {
    if (j[a].size() != cols) fail(ctx, "ragged matrix");
    for (std::size_t b = 0; b < cols; ++b) m(a, b) = j[a][b].get<double>();
  }
  return m;
}

Json matrices_to_json(const std::vector<Matrix>& ms) {
  Json out = Json::array();
  for (const auto& m : ms) out.push_back(matrix_to_json(m));
  return out;
}

std::vector<Matrix> matrices_from_json(const Json& j, const std::string& ctx) {
  std::vector<Matrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m, ctx));
  return out;
}

}  // namespace

Json to_json(const PopulationMoments& m) {
  return Json{{"lags", m.spec.lags},
              {"horizon", m.spec.horizon},
              {"n_long", m.n_long},
              {"seed", m.seed},
              {"sigma2_err", m.sigma2_err},
              {"beta", m.beta},
              {"f_h", m.f_h},
              {"R", matrix_to_json(m.R)},
              {"R_se", matrix_to_json(m.R_se)},
              {"L", matrices_to_json(m.L)},
              {"L_se", matrices_to_json(m.L_se)},
              {"Lstar", matrices_to_json(m.Lstar)},
              {"Lstar_se", matrices_to_json(m.Lstar_se)},
              {"Ltilde", matrices_to_json(m.Ltilde)},
              {"cross", matrices_to_json(m.cross)},
              {"etilde_prod", m.etilde_prod},
              {"etilde_prod_analytic", m.etilde_prod_analytic},
              {"g_tilde_se", m.g_tilde_se}};
}

PopulationMoments population_from_json(const Json& j) {
  const std::string ctx = "population";
  PopulationMoments m;
  try {
    m.spec.lags = j.at("lags").get<std::vector<int>>();
    m.spec.horizon = j.at("horizon").get<int>();
    m.n_long = j.at("n_long").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.sigma2_err = j.at("sigma2_err").get<double>();
    m.beta = j.at("beta").get<std::vector<double>>();
    m.f_h = j.at("f_h").get<double>();
    m.R = matrix_from_json(j.at("R"), ctx);
    m.R_se = matrix_from_json(j.at("R_se"), ctx);
    m.L = matrices_from_json(j.at("L"), ctx);
    m.L_se = matrices_from_json(j.at("L_se"), ctx);
    m.Lstar = matrices_from_json(j.at("Lstar"), ctx);
    m.Lstar_se = matrices_from_json(j.at("Lstar_se"), ctx);
    m.Ltilde = matrices_from_json(j.at("Ltilde"), ctx);
    m.cross = matrices_from_json(j.at("cross"), ctx);
    m.etilde_prod = j.at("etilde_prod").get<std::vector<double>>();
    m.etilde_prod_analytic = j.at("etilde_prod_analytic").get<std::vector<double>>();
    m.g_tilde_se = j.at("g_tilde_se").get<double>();
  } catch (const Json::exception& e) {
    fail(ctx, e.what());
  }
  return m;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

}  // namespace hetfc
