#include "betarec/serialize.hpp"

#include <mpfr.h>

#include <cmath>

namespace betarec::json_io {

namespace {

json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

json int_strings(const std::vector<std::int64_t>& v) {
  json out = json::array();
  for (auto x : v) out.push_back(std::to_string(x));
  return out;
}

json mpz_strings(const std::vector<mpz_class>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(decimal(x));
  return out;
}

}  // namespace

std::string decimal(mpfr_srcptr v) {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.17Rg", v);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

std::string decimal(const mpz_class& z) { return z.get_str(); }

std::string decimal(const mpq_class& q) { return q.get_str(); }

json to_json(const Word& w) { return w.to_string(); }

json to_json(const BoundedReal& v) {
  return json{{"lower", decimal(v.lower())}, {"upper", decimal(v.upper())}, {"center", v.center()}};
}

json to_json(const Exponent& e) {
  return json{{"infinite", e.infinite}, {"value", e.infinite ? json(nullptr) : json(e.value)}};
}

json to_json(const RecurrenceSeries& s) {
  json v = json::array();
  for (double x : s.v) v.push_back(number_or_null(x));
  return json{{"v", v},
              {"lower_bounds", s.lower_bounds},
              {"period", s.period ? json(*s.period) : json(nullptr)}};
}

json to_json(const ExponentEstimate& e) {
  return json{{"r", to_json(e.r)},
              {"r_hat", to_json(e.r_hat)},
              {"N", e.N},
              {"window_begin", e.window_begin},
              {"series", to_json(e.series)}};
}

json to_json(const ReturnProfile& p, const OrbitView& x) {
  json entries = json::array();
  for (std::size_t k = 0; k < p.size(); ++k) {
    json e{{"k", k + 1},
           {"n", p.n[k]},
           {"m", p.m[k]},
           {"t", p.t[k]},
           {"distance", to_json(p.distance[k])}};
    try {
      e["form"] = prefix_form_name(classify_prefix(x, k + 1, p));
      e["form_error"] = nullptr;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::FormViolation) throw;
      e["form"] = nullptr;
      e["form_error"] = err.what();
    }
    entries.push_back(std::move(e));
  }
  return json{{"monotone", p.monotone}, {"truncated", p.truncated}, {"entries", entries}};
}

json to_json(const NMChoice& c) {
  return json{{"N", c.N},
              {"M", c.M},
              {"beta_N", to_json(c.beta_N.value(128))},
              {"count", decimal(c.count)},
              {"margin", number_or_null(c.margin)}};
}

json beta_json(const BetaContext& ctx) {
  return json{{"label", ctx.label()}, {"value", to_json(ctx.value(128))}};
}

json to_json(const CantorPlan& plan) {
  return json{{"r_hat", decimal(plan.r_hat)},
              {"r", decimal(plan.r)},
              {"delta", decimal(plan.delta)},
              {"beta", beta_json(plan.beta)},
              {"beta_N", to_json(plan.beta_N.value(128))},
              {"N", plan.N},
              {"M", plan.M},
              {"K", plan.K()},
              {"n", int_strings(plan.n)},
              {"m", int_strings(plan.m)},
              {"ell", int_strings(plan.ell)},
              {"p", int_strings(plan.p)},
              {"t", int_strings(plan.t)},
              {"q", int_strings(plan.q)},
              {"shift", plan.shift},
              {"offset", std::to_string(plan.offset)},
              {"inequality_holds", plan.inequality_holds},
              {"full_blocks", decimal(plan.blocks->count())}};
}

json to_json(const LevelCounts& c) {
  return json{{"u", to_json(c.u)},
              {"full_blocks", decimal(c.full_blocks)},
              {"m_set", decimal(c.m_set)},
              {"D", mpz_strings(c.D)},
              {"G", mpz_strings(c.G)}};
}

json to_json(const BoxCount& b) {
  json rows = json::array();
  for (std::size_t i = 0; i < b.n.size(); ++i) {
    rows.push_back(json{{"n", b.n[i]}, {"log_count", b.log_count[i]}});
  }
  return json{{"slope", b.slope}, {"ci_lower", b.ci_lower}, {"ci_upper", b.ci_upper}, {"points", rows}};
}

json to_json(const DimReport& r) {
  json series = json::array();
  for (std::size_t k = 0; k < r.series.size(); ++k) {
    json row{{"k", k + 1},
             {"series", decimal(r.series[k])},
             {"series_value", r.series_values[k]},
             {"mu_log_ratio", {{"lower", r.mu_log_ratios[k].lower}, {"upper", r.mu_log_ratios[k].upper}}},
             {"n_over_m", r.n_over_m[k]},
             {"m_growth", k == 0 ? json(nullptr) : json(r.m_growth[k - 1])}};
    series.push_back(std::move(row));
  }
  json out{{"formula_value", r.formula_value},
           {"countable", r.countable},
           {"delta", r.delta},
           {"levels", series}};
  out["boxcount"] = r.boxcount ? to_json(*r.boxcount) : json(nullptr);
  return out;
}

json to_json(const FullWindowReport& r) {
  return json{{"holds", r.holds},
              {"cylinders", r.cylinders},
              {"full", r.full},
              {"longest_nonfull_run", r.longest_nonfull_run},
              {"first_violation", r.first_violation ? json(*r.first_violation) : json(nullptr)}};
}

json to_json(const Cylinder& c) {
  return json{{"word", to_json(c.word)},
              {"left", to_json(c.left)},
              {"length", to_json(c.length)},
              {"full", c.full}};
}

json to_json(const Error& e) {
  return json{{"error", {{"kind", error_kind_name(e.kind())}, {"message", e.what()}}}};
}

}  // namespace betarec::json_io
