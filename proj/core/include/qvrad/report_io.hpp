#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "qvrad/analogue.hpp"
#include "qvrad/profiles.hpp"
#include "qvrad/radiation.hpp"
#include "qvrad/scaling.hpp"
#include "qvrad/spectrum.hpp"

namespace qvrad {

using Json = nlohmann::ordered_json;

Json to_json(IntegratorInfo const& info);
Json to_json(Estimate const& e);
Json to_json(Histogram const& h);
Json to_json(McEstimate const& m);
Json to_json(EmissionReport const& r);
Json to_json(RateReport const& r);
Json to_json(RegimeClassification const& r);
Json to_json(HorizonReport const& r);
Json to_json(HawkingEstimate const& e);
Json to_json(UnruhReport const& r);
Json to_json(UnruhKelvin const& k);
Json to_json(ParsevalResult const& p);
Json to_json(std::vector<Warning> const& warnings);
Json to_json(SweepTable const& t);
Json to_json(ScalingFit const& f);
Json to_json(Verdict const& v);

//! Columns: bin_low,bin_high,weight,weight_error. A non-empty `comment`
//! is written first as a line starting with '#'.
void write_histogram_csv(std::ostream& os, Histogram const& h, std::string const& comment = {});

//! Columns: parameter,value,error,evaluations
void write_sweep_csv(std::ostream& os, SweepTable const& t, std::string const& comment = {});

}  // namespace qvrad
