#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hetfc/autocov.hpp"
#include "hetfc/config.hpp"
#include "hetfc/errors.hpp"
#include "hetfc/experiments.hpp"
#include "hetfc/population.hpp"
#include "hetfc/selection.hpp"

namespace py = pybind11;
using namespace hetfc;

namespace {

DgpSpec dgp_from_pyjson(const std::string& dgp_json) {
  return dgp_from_json(Json::parse(dgp_json));
}

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

std::vector<double> to_vector(py::array_t<double, py::array::c_style | py::array::forcecast> a) {
  const auto r = a.unchecked<1>();
  std::vector<double> v(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) v[static_cast<std::size_t>(i)] = r(i);
  return v;
}

py::list matrix_to_py(const Matrix& m) {
  py::list rows;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    py::list row;
    for (std::size_t j = 0; j < m.cols(); ++j) row.append(m(i, j));
    rows.append(row);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_hetforecast, m) {
  m.doc() = "Linear-process simulation with conditionally heteroscedastic errors, "
            "direct multi-step least-squares prediction and model selection";

  py::register_exception<ConfigError>(m, "HetfcConfigError");
  py::register_exception<ModelError>(m, "HetfcModelError");

  m.def(
      "simulate",
      [](const std::string& dgp_json, std::size_t n, std::uint64_t seed) {
        const DgpSpec dgp = dgp_from_pyjson(dgp_json);
        RngStream stream(seed);
        const PathBundle path = simulate_path(dgp, n, stream);
        py::dict out;
        out["x"] = to_array(path.x);
        out["eps"] = to_array(path.eps);
        out["sigma2"] = to_array(path.sigma2);
        return out;
      },
      py::arg("dgp_json"), py::arg("n"), py::arg("seed") = 12345,
      "Simulate a path; dgp_json is the same JSON document the CLI accepts.");

  m.def(
      "arma_to_ma",
      [](const std::vector<double>& ar, const std::vector<double>& ma, double tol) {
        return LinearFilter::from_arma(ar, ma, tol).coeffs();
      },
      py::arg("ar"), py::arg("ma"), py::arg("trunc_tol") = 1e-12,
      "Truncated MA(inf) coefficients of the ARMA filter.");

  m.def(
      "autocovariance",
      [](const std::vector<double>& ar, const std::vector<double>& ma, double sigma2,
         std::size_t max_lag) {
        const LinearFilter f = LinearFilter::from_arma(ar, ma);
        std::vector<double> g(max_lag + 1);
        for (std::size_t j = 0; j <= max_lag; ++j) g[j] = f.autocovariance(sigma2, j);
        return g;
      },
      py::arg("ar"), py::arg("ma"), py::arg("sigma2"), py::arg("max_lag"));

  m.def(
      "fit",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
         const std::vector<int>& lags, int h) {
        SubsetSpec spec;
        spec.lags = lags;
        spec.horizon = h;
        const std::vector<double> xv = to_vector(x);
        const FitResult f = hetfc::fit(xv, spec);
        py::dict out;
        out["beta"] = to_array(f.beta);
        out["cond"] = f.cond;
        out["rows"] = f.rows;
        out["prediction"] = predict(f, xv);
        return out;
      },
      py::arg("x"), py::arg("lags"), py::arg("h") = 1,
      "Direct h-step least-squares fit of a subset AR model; returns the "
      "coefficients and the prediction of x_{n+h}.");

  m.def(
      "score_candidates",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
         const std::vector<std::vector<int>>& candidates, int h, double cn_exponent) {
        const std::vector<double> xv = to_vector(x);
        std::vector<SubsetSpec> specs;
        for (const auto& lags : candidates) {
          SubsetSpec s;
          s.lags = lags;
          s.horizon = h;
          specs.push_back(std::move(s));
        }
        const ScoreAllResult r = score_all(xv, specs, h, cn_exponent);
        py::list rows;
        for (const auto& s : r.scores) {
          py::dict row;
          row["J"] = s.spec.lags;
          row["ok"] = s.ok;
          if (s.ok) {
            row["sigma2_hat"] = s.sigma2_hat;
            row["g_hat"] = s.g_hat;
            row["mric"] = s.mric;
            row["aic"] = s.aic;
            row["bic"] = s.bic;
          } else {
            row["reason"] = s.failure;
          }
          rows.append(row);
        }
        py::dict out;
        out["candidates"] = rows;
        out["argmin_mric"] = r.scores[r.argmin_mric].spec.lags;
        out["argmin_aic"] = r.scores[r.argmin_aic].spec.lags;
        out["argmin_bic"] = r.scores[r.argmin_bic].spec.lags;
        return out;
      },
      py::arg("x"), py::arg("candidates"), py::arg("h") = 1,
      py::arg("cn_exponent") = 0.6,
      "MRIC / AIC / BIC scores for candidate lag sets on one series.");

  m.def(
      "population_mspe",
      [](const std::string& dgp_json, const std::vector<int>& lags, int h,
         std::size_t n_long, std::uint64_t seed) {
        const DgpSpec dgp = dgp_from_pyjson(dgp_json);
        SubsetSpec spec;
        spec.lags = lags;
        spec.horizon = h;
        const PopulationMoments pm = estimate_moments(dgp, spec, n_long, seed);
        py::dict out;
        out["g_tilde"] = second_order_mspe(pm);
        out["g_tilde_se"] = pm.g_tilde_se;
        out["f_h"] = pm.f_h;
        out["beta"] = to_array(pm.beta);
        out["R"] = matrix_to_py(pm.R);
        if (spec.contiguous()) {
          const MspeDecomposition d = decompose(pm);
          out["complexity"] = d.complexity;
          out["heteroscedasticity"] = d.heteroscedasticity;
          out["misspecification"] = d.misspecification;
        }
        return out;
      },
      py::arg("dgp_json"), py::arg("lags"), py::arg("h") = 1,
      py::arg("n_long") = 500'000, py::arg("seed") = 12345,
      "Population second-order MSPE of a candidate under a DGP, with the "
      "complexity / heteroscedasticity / misspecification split for AR(k).");

  m.def(
      "sample_autocov",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x, std::size_t k,
         bool h_step, int h) {
        const std::vector<double> xv = to_vector(x);
        const SampleAutocovMatrix r = sample_autocov(
            xv, k, h_step ? AutocovVariant::HStep : AutocovVariant::Plain, h);
        py::dict out;
        out["matrix"] = matrix_to_py(r.entries);
        out["min_eigenvalue"] = min_eigenvalue(r);
        return out;
      },
      py::arg("x"), py::arg("k"), py::arg("h_step") = false, py::arg("h") = 1);

  m.def(
      "negative_moment_sweep",
      [](const std::string& dgp_json, std::size_t k, double q,
         const std::vector<std::size_t>& n_grid, std::size_t reps, std::uint64_t seed,
         std::size_t workers) {
        const DgpSpec dgp = dgp_from_pyjson(dgp_json);
        const NegativeMomentSweep s =
            negative_moment_sweep(dgp, k, q, n_grid, reps, seed, workers);
        py::list rows;
        for (const auto& r : s.rows) {
          py::dict row;
          row["n"] = r.n;
          row["mean"] = r.mean;
          row["se"] = r.se;
          row["nonfinite"] = r.nonfinite;
          rows.append(row);
        }
        py::dict out;
        out["rows"] = rows;
        out["loglog_slope"] = s.loglog_slope;
        out["last_first_ratio"] = s.last_first_ratio;
        return out;
      },
      py::arg("dgp_json"), py::arg("k"), py::arg("q"), py::arg("n_grid"),
      py::arg("reps") = 200, py::arg("seed") = 12345, py::arg("workers") = 0);

  m.attr("__version__") = []() {
    return std::string("0.1.0");
  }();
}
