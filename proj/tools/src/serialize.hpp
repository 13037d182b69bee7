#pragma once

#include <string>

#include "genum/conditioning.hpp"
#include "genum/criterion.hpp"
#include "genum/logdomain.hpp"
#include "genum/optimizer.hpp"
#include "genum/synthlab.hpp"
#include "genum/twolevel.hpp"
#include "json.hpp"

namespace genum::cli {

using nlohmann::json;

json to_json(const CostBreakdown& c);
json to_json(const LogMapping& m);
json to_json(const GlobalHistogram& h);
json to_json(const ConditioningReport& r, const DataSet& d);

/// Throws Error(InvalidSpec) on unknown kinds, missing or mistyped fields.
GeneratorSpec generator_spec_from_json(const json& j);
json to_json(const GeneratorSpec& s);

/// Header lower,upper,count,density then one row per interval.
std::string plot_csv(const GlobalHistogram& h);

}  // namespace genum::cli
