#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "essvi/arbitrage.hpp"
#include "essvi/global_calib.hpp"
#include "essvi/metrics.hpp"
#include "essvi/pipeline.hpp"
#include "essvi/robust_calib.hpp"
#include "essvi/slice.hpp"

namespace essvi::io {

/// Chain CSV columns: quote_date, expiry, maturity_years, type(C/P),
/// strike, bid, ask, underlying. Curve CSV: tenor_years, rate.
OptionChain load_chain_csv(const std::string& path);
std::vector<RatePoint> load_curve_csv(const std::string& path);
void write_chain_csv(const std::string& path, const OptionChain& chain);
void write_curve_csv(const std::string& path, const std::vector<RatePoint>& curve);

nlohmann::json anchors_to_json(const std::vector<SliceAnchor>& anchors);
std::vector<SliceAnchor> anchors_from_json(const nlohmann::json& j);

nlohmann::json surface_to_json(const std::vector<EssviSlice>& slices);
std::vector<EssviSlice> surface_from_json(const nlohmann::json& j);

nlohmann::json classification_to_json(const PairClassification& c);
nlohmann::json report_to_json(const FitReport& rep);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace essvi::io
