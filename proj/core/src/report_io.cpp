#include "qvrad/report_io.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace qvrad {

namespace {

//! NaN and infinities have no JSON spelling; they become null.
Json number(double x)
{
    return std::isfinite(x) ? Json(x) : Json(nullptr);
}

void write_comment(std::ostream& os, std::string const& comment)
{
    if (!comment.empty())
        os << "# " << comment << '\n';
}

}  // namespace

Json to_json(IntegratorInfo const& info)
{
    Json j;
    j["method"] = to_string(info.method);
    j["evaluations"] = info.evaluations;
    if (info.method == IntegrationMethod::MonteCarlo) {
        j["samples"] = info.samples;
        j["seed"] = info.seed;
    } else {
        j["tolerance"] = number(info.tolerance);
    }
    return j;
}

Json to_json(Estimate const& e)
{
    return Json{{"value", number(e.value)}, {"error", number(e.error)}, {"integrator", to_json(e.info)}};
}

Json to_json(Histogram const& h)
{
    Json bins = Json::array();
    for (std::size_t i = 0; i < h.bins(); ++i) {
        bins.push_back(Json{{"bin_low", number(h.edges[i])},
                            {"bin_high", number(h.edges[i + 1])},
                            {"weight", number(h.weights[i])},
                            {"weight_error", number(h.errors[i])}});
    }
    return Json{{"variable", h.variable}, {"bins", std::move(bins)}};
}

Json to_json(McEstimate const& m)
{
    return Json{{"value", number(m.value)},
                {"std_error", number(m.std_error)},
                {"samples", m.samples},
                {"effective_samples", number(m.effective_samples)},
                {"out_of_extent", m.out_of_extent}};
}

Json to_json(EmissionReport const& r)
{
    Json j;
    j["total_probability"] = to_json(r.total_probability);
    j["mean_photon_energy"] = r.mean_photon_energy ? to_json(*r.mean_photon_energy) : Json(nullptr);
    j["total_energy"] = to_json(r.total_energy);
    j["perturbative_warning"] = r.perturbative_warning;
    j["correlation_median"] = r.correlation_median ? number(*r.correlation_median) : Json(nullptr);
    j["angular"] = to_json(r.angular);
    j["correlation"] = to_json(r.correlation);
    return j;
}

Json to_json(RateReport const& r)
{
    Json j;
    j["rate"] = number(r.rate);
    j["rate_error"] = number(r.rate_error);
    j["forbidden"] = r.forbidden;
    j["reason"] = r.reason;
    j["theta_max"] = r.theta_max ? number(*r.theta_max) : Json(nullptr);
    j["theta_max_percentile"] = theta_max_percentile;
    j["integrator"] = to_json(r.info);
    j["angle_table"] = to_json(r.angle_table);
    return j;
}

Json to_json(RegimeClassification const& r)
{
    return Json{{"regime", to_string(r.regime)},
                {"c_outside", number(r.c_outside)},
                {"c_inside", number(r.c_inside)},
                {"v", number(r.v)}};
}

Json to_json(HorizonReport const& r)
{
    Json hs = Json::array();
    for (auto const& h : r.horizons) {
        hs.push_back(Json{{"position", number(h.position)},
                          {"type", to_string(h.type)},
                          {"surface_gravity", number(h.surface_gravity)},
                          {"temperature", number(h.temperature)}});
    }
    Json j;
    j["frame"] = r.frame;
    j["classification"] = to_json(r.regime);
    j["horizons"] = std::move(hs);
    j["geometry"] = r.geometry == HawkingGeometry::ThreeD ? "3d" : "1d";
    j["area"] = r.area ? number(*r.area) : Json(nullptr);
    j["temperature"] = number(r.temperature());
    return j;
}

Json to_json(HawkingEstimate const& e)
{
    return Json{{"rate", number(e.rate)},
                {"order_of_magnitude", e.order_of_magnitude},
                {"non_perturbative", e.non_perturbative},
                {"note", e.note}};
}

Json to_json(UnruhReport const& r)
{
    return Json{{"acceleration", number(r.acceleration)},
                {"temperature", number(r.temperature)},
                {"cross_section", number(r.cross_section)},
                {"rate", number(r.rate)},
                {"valid", r.valid},
                {"approximate", r.approximate},
                {"order_of_magnitude", r.order_of_magnitude},
                {"warnings", r.warnings}};
}

Json to_json(UnruhKelvin const& k)
{
    return Json{{"kelvin", number(k.kelvin)},
                {"hbar", k.hbar},
                {"boltzmann", k.boltzmann},
                {"light_speed", k.light_speed}};
}

Json to_json(ParsevalResult const& p)
{
    return Json{{"real_space", number(p.real_space)},
                {"spectral", number(p.spectral)},
                {"discrepancy", number(p.discrepancy)},
                {"flagged", p.flagged}};
}

Json to_json(std::vector<Warning> const& warnings)
{
    Json out = Json::array();
    for (auto const& w : warnings) {
        out.push_back(Json{{"severity", w.severity == Warning::Severity::Error ? "error" : "warning"},
                           {"code", w.code},
                           {"message", w.message}});
    }
    return out;
}

Json to_json(SweepTable const& t)
{
    Json rows = Json::array();
    for (auto const& r : t.rows) {
        rows.push_back(Json{{"parameter", number(r.parameter)},
                            {"value", number(r.value)},
                            {"error", number(r.error)},
                            {"evaluations", r.evaluations}});
    }
    return Json{{"regime", to_string(t.regime)},
                {"parameter", to_string(t.parameter)},
                {"observable", to_string(t.observable)},
                {"rows", std::move(rows)}};
}

Json to_json(ScalingFit const& f)
{
    Json res = Json::array();
    for (double r : f.residuals)
        res.push_back(number(r));
    return Json{{"exponent", number(f.exponent)},
                {"std_error", number(f.std_error)},
                {"intercept", number(f.intercept)},
                {"r_squared", number(f.r_squared)},
                {"residuals", std::move(res)}};
}

Json to_json(Verdict const& v)
{
    Json j;
    j["regime"] = to_string(v.regime);
    j["parameter"] = to_string(v.parameter);
    j["observable"] = to_string(v.observable);
    j["expected"] = number(v.expected);
    j["fitted"] = number(v.fitted);
    j["stderr"] = number(v.std_error);
    j["r_squared"] = number(v.r_squared);
    j["tolerance"] = number(v.tolerance);
    j["flatness"] = v.flatness ? number(*v.flatness) : Json(nullptr);
    j["pass"] = v.pass;
    return j;
}

void write_histogram_csv(std::ostream& os, Histogram const& h, std::string const& comment)
{
    write_comment(os, comment);
    os << "bin_low,bin_high,weight,weight_error\n" << std::setprecision(17);
    for (std::size_t i = 0; i < h.bins(); ++i)
        os << h.edges[i] << ',' << h.edges[i + 1] << ',' << h.weights[i] << ',' << h.errors[i] << '\n';
}

void write_sweep_csv(std::ostream& os, SweepTable const& t, std::string const& comment)
{
    write_comment(os, comment);
    os << "parameter,value,error,evaluations\n" << std::setprecision(17);
    for (auto const& r : t.rows)
        os << r.parameter << ',' << r.value << ',' << r.error << ',' << r.evaluations << '\n';
}

}  // namespace qvrad
