#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "adha/automaton.hpp"
#include "adha/membership.hpp"

namespace adha::io {

using Json = nlohmann::ordered_json;

Json to_json(const Polytope& p);
Json to_json(const AffineDynamics& d);
Json to_json(const PwaTrajectory& f);
Json to_json(const Adha& h);

/// Parsers throw DataError on malformed input.
Polytope polytope_from_json(const Json& j, int dim = -1);
PwaTrajectory trajectory_from_json(const Json& j);
Adha adha_from_json(const Json& j);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

/// CSV with header `t,x1,...,xn`.
TimeSeries read_series_csv(const std::filesystem::path& path);
TimeSeries parse_series_csv(const std::string& text);
std::string series_to_csv(const TimeSeries& s);

/// Samples a trajectory at the given pitch (plus every switching time) as a
/// `t,x1,...,xn` CSV.
std::string trajectory_to_csv(const PwaTrajectory& f, double pitch);

/// One row per constraint: `piece,kind,index,relation,offset,a1,...,an`
/// where kind is `over` or `under`.
std::string sets_to_csv(const std::vector<SReachApprox>& sets, int dim);

}  // namespace adha::io
