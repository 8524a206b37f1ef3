#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "periodfn/criteria.hpp"
#include "periodfn/period.hpp"

namespace periodfn::cli {

using Json = nlohmann::ordered_json;

/// 12 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string num(double v);

/// v rounded to 12 significant digits, or null when not finite.
Json jnum(double v);
Json jnums(const std::vector<double>& v);

/// `c,T,dTdc,err` with a header row.
std::string period_csv(const PeriodTable& table);

/// `x,K` on a uniform grid of `points` values over [xmin, xmax] followed by
/// `#` comment lines with the refined roots inside that range.
std::string scan_csv(const CriterionEvaluation& eval, const SignReport& report, double xmin,
                     double xmax, int points);

}  // namespace periodfn::cli
