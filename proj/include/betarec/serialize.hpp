#pragma once

#include <json.hpp>

#include "betarec/beta_context.hpp"
#include "betarec/bounded_real.hpp"
#include "betarec/cantor.hpp"
#include "betarec/dimension.hpp"
#include "betarec/error.hpp"
#include "betarec/language.hpp"
#include "betarec/orbit.hpp"
#include "betarec/recurrence.hpp"
#include "betarec/word.hpp"

/// JSON documents for the library types. Exact integers and rationals are
/// strings; digit strings are comma-separated.
namespace betarec::json_io {

using json = nlohmann::ordered_json;

/// Decimal text of an MPFR value with 17 significant digits.
std::string decimal(mpfr_srcptr v);
std::string decimal(const mpz_class& z);
std::string decimal(const mpq_class& q);

json to_json(const Word& w);
json to_json(const BoundedReal& v);
json to_json(const Exponent& e);
json to_json(const RecurrenceSeries& s);
json to_json(const ExponentEstimate& e);
/// Profile with the per-entry prefix form ("overlap", "borrow", "carry") or
/// the form-violation message.
json to_json(const ReturnProfile& p, const OrbitView& x);
json to_json(const NMChoice& c);
json to_json(const CantorPlan& plan);
json to_json(const LevelCounts& c);
json to_json(const DimReport& r);
json to_json(const BoxCount& b);
json to_json(const FullWindowReport& r);
json to_json(const Cylinder& c);
json to_json(const Error& e);
json beta_json(const BetaContext& ctx);

}  // namespace betarec::json_io
