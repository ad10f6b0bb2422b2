#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qvrad/profiles.hpp"
#include "qvrad/spectrum.hpp"
#include "qvrad/vec3.hpp"

namespace qvrad {

//---------------------------------------------------------------------------//
// Pair modes and the two-photon amplitude
//---------------------------------------------------------------------------//

//! A created photon pair (k, k'). Frequencies follow the nondispersive
//! medium relation omega = |k| / n0.
class PairMode
{
  public:
    PairMode(Vec3 k, Vec3 k_prime);

    Vec3 const& k() const { return k_; }
    Vec3 const& k_prime() const { return k_prime_; }
    double omega(double n0) const { return norm(k_) / n0; }
    double omega_prime(double n0) const { return norm(k_prime_) / n0; }

  private:
    Vec3 k_;
    Vec3 k_prime_;
};

//! |A_{k,k'}|^2 = (omega_k omega_k' / n0^6) |dn~(omega_k + omega_k', k + k')|^2
double pair_amplitude_sq(SpectralAmplitude const& s, PairMode const& m, double n0);

//---------------------------------------------------------------------------//
// Integration control and results
//---------------------------------------------------------------------------//

enum class IntegrationMethod { Quadrature, MonteCarlo };

std::string to_string(IntegrationMethod m);
IntegrationMethod integration_method_from_string(std::string const& name);

struct IntegratorSpec
{
    IntegrationMethod method = IntegrationMethod::Quadrature;
    double tolerance = 1e-9;  // relative
    std::size_t max_evaluations = 5'000'000;
    std::size_t samples = std::size_t{1} << 20;  // Monte Carlo
    std::uint64_t seed = 1;
    unsigned workers = 1;  // never changes results
};

struct IntegratorInfo
{
    IntegrationMethod method = IntegrationMethod::Quadrature;
    std::size_t evaluations = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double tolerance = 0.0;
};

struct Estimate
{
    double value = 0.0;
    double error = 0.0;  // absolute; standard error for Monte Carlo
    IntegratorInfo info;
};

struct Histogram
{
    std::string variable;
    std::vector<double> edges;  // size bins + 1
    std::vector<double> weights;
    std::vector<double> errors;

    std::size_t bins() const { return weights.size(); }
    double total() const;
};

//! Two-photon observables integrated with the continuum pair measure
//! d^3k d^3k' / (2 pi)^6.
struct EmissionReport
{
    Estimate total_probability;
    std::optional<Estimate> mean_photon_energy;  // undefined when P = 0
    Estimate total_energy;
    Histogram angular;      // single-photon cos(theta); sums to P
    Histogram correlation;  // chi = |k+k'|/(|k|+|k'|); sums to 1
    std::optional<double> correlation_median;
    bool perturbative_warning = false;  // P > 0.1
};

inline constexpr double probability_warn_threshold = 0.1;

//---------------------------------------------------------------------------//
// Static pulses
//---------------------------------------------------------------------------//

Estimate total_probability(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec);

//! E = P^{-1} \int |A|^2 omega_k. Throws ErrorCode::UndefinedMean when P = 0.
Estimate mean_photon_energy(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec);

//! \int (omega_k + omega_k') |A|^2
Estimate total_energy(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec);

//! Single-photon direction distribution over cos(theta) relative to `axis`,
//! by importance-sampled Monte Carlo with the integrator's seed. Weights
//! sum to P; errors are per-bin standard errors.
Histogram angular_spectrum(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec,
                           std::size_t bins, Vec3 axis = {1.0, 0.0, 0.0});

struct CorrelationSpectrum
{
    Histogram histogram;  // normalized to 1
    double median = 0.0;
};

CorrelationSpectrum pair_correlation(SpectralAmplitude const& s, double n0,
                                     IntegratorSpec const& spec, std::size_t bins);

EmissionReport radiate(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec,
                       std::size_t angular_bins = 20, std::size_t correlation_bins = 50);

//---------------------------------------------------------------------------//
// Point-like monopole estimate
//---------------------------------------------------------------------------//

//! M(t) = \int d^3r dn(t, r)
double monopole_moment(PulseProfile const& p, double t);
double monopole_moment_fourth_derivative(PulseProfile const& p, double t);

struct MonopoleEstimate
{
    double value = 0.0;  // \int dt (d^4 M / dt^4)^2, prefactor 1
    std::vector<Warning> warnings;
};

//! Emitted energy of a point-like pulse up to an unspecified constant.
//! Moving and accelerated pulses have a constant M(t) and return 0.
MonopoleEstimate monopole_energy_estimate(PulseProfile const& p);

inline constexpr double point_like_warn_ratio = 0.2;

//---------------------------------------------------------------------------//
// Uniformly moving pulses
//---------------------------------------------------------------------------//

struct RateReport
{
    double rate = 0.0;  // emission probability per unit time
    double rate_error = 0.0;
    bool forbidden = false;
    std::string reason;
    //! 90th-percentile single-photon polar angle about the velocity; absent
    //! when forbidden.
    std::optional<double> theta_max;
    Histogram angle_table;  // theta in [0, pi], weights sum to the rate
    IntegratorInfo info;
};

inline constexpr double theta_max_percentile = 0.9;

RateReport emission_rate(FactorizedMovingSpectrum const& fs, double n0,
                         IntegratorSpec const& spec, std::size_t angle_bins = 36);

//---------------------------------------------------------------------------//
// Monte Carlo oracle
//---------------------------------------------------------------------------//

enum class Observable { Probability, MeanEnergy, TotalEnergy, Rate };

std::string to_string(Observable o);

struct McEstimate
{
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    double effective_samples = 0.0;
    std::size_t out_of_extent = 0;  // grid spectra: samples beyond the lattice
};

//! Importance-sampled estimate with Gaussian proposals sized from the source
//! scales. Deterministic for a given seed and independent of `workers`.
McEstimate mc_oracle(SpectralAmplitude const& s, double n0, std::uint64_t seed,
                     std::size_t n_samples, Observable observable, unsigned workers = 1);

//! Rate oracle: k from a Gaussian, k' direction uniform, |k'| solved from the
//! phase-matching constraint. Only Observable::Rate is accepted.
McEstimate mc_oracle(FactorizedMovingSpectrum const& fs, double n0, std::uint64_t seed,
                     std::size_t n_samples, Observable observable, unsigned workers = 1);

}  // namespace qvrad
