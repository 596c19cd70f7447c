#pragma once

#include <json.hpp>

#include "qsteer/filter.hpp"
#include "qsteer/hidden.hpp"
#include "qsteer/steering.hpp"
#include "qsteer/tomography.hpp"

namespace qsteer {

using Json = nlohmann::ordered_json;

// Shared complex-matrix encoding: {"dims":[r,c],"re":[...],"im":[...]}, row-major.
Json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j);

Json density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const Json& j);

// {"a1":..,"a2":..,"b1":..,"b2":..}
Json ensemble_to_json(const FilterEnsemble& f);
FilterEnsemble ensemble_from_json(const Json& j);

// {"alpha_deg":[h1,h2,h3,h4]}
Json waveplates_to_json(const WaveplateAngles& w);
WaveplateAngles waveplates_from_json(const Json& j);

Json triple_to_json(const MeasurementTriple& t);
Json diagnostics_to_json(const SolveDiagnostics& d);
Json steering_report_to_json(const SteeringReport& r);
Json search_report_to_json(const SearchReport& r);
Json chi_to_json(const ChiMatrix& chi);
Json kraus_to_json(const KrausCoefficients& k);

// CSV emitters (plot-ready detail files)
std::string counts_to_csv(const CountsRecord& c);
std::string region_rows_to_csv(const std::vector<RegionRow>& rows);
std::string search_rows_to_csv(const std::vector<SampleRow>& rows);

}  // namespace qsteer
