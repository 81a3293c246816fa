#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "betarec/beta_context.hpp"
#include "betarec/cantor.hpp"
#include "betarec/orbit.hpp"
#include "betarec/recurrence.hpp"

namespace betarec {

/// A dimension value; countable marks the parameter region where the set is
/// countable (value 0).
struct DimValue {
  double value = 0.0;
  bool countable = false;
};

/// (r - (1 + r) r_hat) / ((1 + r)(r - r_hat)); 0 at r = infinity and on the
/// boundary r_hat = r / (1 + r); countable above it. At r = 0 the value is
/// the limit 1 when r_hat = 0.
DimValue dim_R(double r_hat, const Exponent& r);
DimValue dim_R(double r_hat, double r);
/// Exact value; throws CountableRegime above the boundary.
mpq_class dim_R_exact(const mpq_class& r_hat, const mpq_class& r);

/// ((1 - r_hat) / (1 + r_hat))^2 for r_hat <= 1, countable above.
DimValue dim_uniform(double r_hat);
mpq_class dim_uniform_exact(const mpq_class& r_hat);

/// r* = 2 r_hat / (1 - r_hat), the argmax of r -> dim_R(r_hat, r); +infinity at 1.
Exponent maximizer(double r_hat);

struct RatioBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// sum_{j <= k-1} (n_{j+1} - m_j) / m_k for k = 1..k_max (index k - 1).
std::vector<mpq_class> dimension_series(const std::vector<std::int64_t>& n,
                                        const std::vector<std::int64_t>& m, std::size_t k_max);

struct BoxCount {
  double slope = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  std::vector<std::size_t> n;
  std::vector<double> log_count;  // natural log of the cylinder count at order n
};

struct DimReport {
  double formula_value = 0.0;
  bool countable = false;
  double delta = 0.0;
  std::vector<mpq_class> series;  // index k - 1
  std::vector<double> series_values;
  /// log mu(I_{m_k}) / log |I_{m_k}| with |I_{m_k}| in [beta^-(m_k + N), beta^-m_k].
  std::vector<RatioBounds> mu_log_ratios;
  std::vector<double> n_over_m;  // n_k / m_k
  std::vector<double> m_growth;  // m_k / m_{k-1}, k >= 2
  std::optional<BoxCount> boxcount;
};

/// Exact series, mu ratios along the canonical branch and limit checks.
DimReport local_dimension_series(const CantorPlan& plan, std::size_t k_max);

struct BoxCountOptions {
  std::size_t bootstrap = 200;
  double confidence = 0.95;
  std::uint64_t seed = 0;
};

/// Least-squares slope of log(distinct order-n cylinders) against n log beta
/// for n in [n_lo, n_hi], with a bootstrap percentile interval over points.
BoxCount boxcount(const std::vector<OrbitView>& points, const BetaContext& ctx, std::size_t n_lo,
                  std::size_t n_hi, BoxCountOptions options = {});

/// Same slope from the exact number of order-n cylinders meeting the part of
/// E_N under the canonical level-1 block; the interval is slope +- 1.96 SE.
BoxCount construction_boxcount(const CantorPlan& plan, std::size_t n_lo, std::size_t n_hi);

/// Exact natural log of the order-n cylinder count used by construction_boxcount.
double construction_log_count(const CantorPlan& plan, std::size_t n);

}  // namespace betarec
