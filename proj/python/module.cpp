#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "betarec/serialize.hpp"
#include "betarec/expansion.hpp"

namespace py = pybind11;
using namespace betarec;
using json_io::json;

namespace {

py::object to_py(const json& doc) { return py::module_::import("json").attr("loads")(doc.dump()); }

BetaContext context(const std::string& beta, long precision) {
  if (precision < 64) throw Error(ErrorKind::InvalidArgument, "precision must be at least 64 bits");
  ContextConfig cfg;
  cfg.min_precision = precision;
  cfg.max_precision = std::max<mpfr_prec_t>(cfg.max_precision, precision);
  return BetaContext::parse(beta, cfg);
}

OrbitView orbit(const BetaContext& ctx, const std::optional<std::string>& x,
                const std::optional<std::string>& digits) {
  if (x.has_value() == digits.has_value()) throw Error(ErrorKind::InvalidArgument, "give exactly one of x, digits");
  return x ? OrbitView::from_rational(ctx, parse_rational(*x)) : OrbitView::from_digits(ctx, Word::parse(*digits));
}

CantorPlan plan(const BetaContext& ctx, const std::string& r_hat, const std::string& r, const std::string& delta,
                std::size_t K, std::optional<std::size_t> N, std::optional<std::size_t> M) {
  PlanOptions o;
  o.N = N;
  o.M = M;
  return make_plan(ctx, parse_rational(r_hat), parse_rational(r), parse_rational(delta), K, o);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Beta-expansions, recurrence exponents and the Cantor construction";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> storage;
  storage.call_once_and_store_result([&] { return py::object(py::exception<Error>(m, "BetaError", PyExc_ValueError)); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = storage.get_stored();
      py::object obj = type(e.what());
      obj.attr("kind") = error_kind_name(e.kind());
      PyErr_SetObject(type.ptr(), obj.ptr());
    }
  });

  constexpr long kPrec = 128;
  auto beta = py::arg("beta") = "2";
  auto prec = py::arg("precision") = kPrec;

  m.def("expand", [](const std::string& x, std::size_t n, const std::string& b, long p) {
    return expand_rational(parse_rational(x), context(b, p), n).to_string();
  }, py::arg("x"), py::arg("n"), beta, prec);

  m.def("eps_star", [](std::size_t n, const std::string& b, long p) { return context(b, p).eps_star(n).to_string(); },
        py::arg("n"), beta, prec);

  m.def("approx_beta", [](std::size_t N, const std::string& b, long p) {
    auto ctx = context(b, p);
    return to_py(json_io::to_json(approximate_beta(ctx, N).value(p)));
  }, py::arg("N"), beta, prec);

  m.def("is_admissible", [](const std::string& w, const std::string& b, long p) {
    return is_admissible(Word::parse(w), context(b, p));
  }, py::arg("word"), beta, prec);

  m.def("count_admissible", [](std::size_t n, const std::string& b, long p) {
    return py::int_(py::str(count_admissible(context(b, p), n).get_str()));
  }, py::arg("n"), beta, prec);

  m.def("full_scan", [](std::size_t n, const std::string& b, long p) {
    return to_py(json_io::to_json(full_window_check(context(b, p), n)));
  }, py::arg("n"), beta, prec);

  m.def("exponents", [](std::size_t N, const std::optional<std::string>& x, const std::optional<std::string>& digits,
                        const std::string& b, long p) {
    auto ctx = context(b, p);
    return to_py(json_io::to_json(estimate_exponents(orbit(ctx, x, digits), N)));
  }, py::arg("N"), py::arg("x") = py::none(), py::arg("digits") = py::none(), beta, prec);

  m.def("returns", [](const std::string& x, std::size_t K, bool monotone, const std::string& b, long p) {
    auto ctx = context(b, p);
    OrbitView v = OrbitView::from_rational(ctx, parse_rational(x));
    return to_py(json_io::to_json(extract_returns(v, K, monotone, 0), v));
  }, py::arg("x"), py::arg("K"), py::arg("monotone") = false, beta, prec);

  m.def("cantor_plan", [](const std::string& r_hat, const std::string& r, const std::string& delta, std::size_t K,
                          std::optional<std::size_t> N, std::optional<std::size_t> M, const std::string& b, long p) {
    return to_py(json_io::to_json(plan(context(b, p), r_hat, r, delta, K, N, M)));
  }, py::arg("r_hat"), py::arg("r"), py::arg("delta") = "1/10", py::arg("K") = 6, py::arg("N") = py::none(),
     py::arg("M") = py::none(), beta, prec);

  m.def("cantor_sample", [](const std::string& r_hat, const std::string& r, std::size_t depth, std::uint64_t seed,
                            const std::string& delta, std::size_t K, const std::string& b, long p) {
    CantorPlan pl = plan(context(b, p), r_hat, r, delta, K, std::nullopt, std::nullopt);
    return sample_point(pl, seed, depth).prefix(depth).to_string();
  }, py::arg("r_hat"), py::arg("r"), py::arg("depth"), py::arg("seed") = 0, py::arg("delta") = "1/10",
     py::arg("K") = 6, beta, prec);

  m.def("cantor_measure", [](const std::string& r_hat, const std::string& r, const std::string& prefix,
                             const std::string& delta, std::size_t K, const std::string& b, long p) {
    CantorPlan pl = plan(context(b, p), r_hat, r, delta, K, std::nullopt, std::nullopt);
    const mpq_class mu = measure(pl, Word::parse(prefix));
    py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(py::int_(py::str(mu.get_num().get_str())), py::int_(py::str(mu.get_den().get_str())));
  }, py::arg("r_hat"), py::arg("r"), py::arg("prefix"), py::arg("delta") = "1/10", py::arg("K") = 6, beta, prec);

  m.def("dim_series", [](const std::string& r_hat, const std::string& r, const std::string& delta, std::size_t K,
                         const std::string& b, long p) {
    CantorPlan pl = plan(context(b, p), r_hat, r, delta, K, std::nullopt, std::nullopt);
    return to_py(json_io::to_json(local_dimension_series(pl, pl.K())));
  }, py::arg("r_hat"), py::arg("r"), py::arg("delta") = "1/10", py::arg("K") = 6, beta, prec);

  m.def("dim_R", [](double r_hat, double r) { return dim_R(r_hat, r).value; }, py::arg("r_hat"), py::arg("r"),
        "Dimension of the set with exponents (r_hat, r); r may be math.inf. Zero in the countable regime.");
  m.def("dim_uniform", [](double r_hat) { return dim_uniform(r_hat).value; }, py::arg("r_hat"));
  m.def("maximizer", [](double r_hat) {
    const Exponent e = maximizer(r_hat);
    return e.infinite ? std::numeric_limits<double>::infinity() : e.value;
  }, py::arg("r_hat"));
}
