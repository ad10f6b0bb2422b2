#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "qvrad/constants.hpp"
#include "qvrad/detail/counter_rng.hpp"
#include "qvrad/detail/reduce.hpp"
#include "qvrad/error.hpp"
#include "qvrad/radiation.hpp"

namespace qvrad {

namespace {

constexpr double pi = constants::pi;
constexpr double two_pi = constants::two_pi;
constexpr std::size_t block_size = 4096;
//! Proposal widening: the s-dependent factor of the spectrum is split
//! between K and the relative wavenumber with this weight.
constexpr double proposal_lambda = 0.5;

//! Running sums for a weight x and a weighted observable y.
struct Moments
{
    double n = 0.0;
    double sx = 0.0;
    double sxx = 0.0;
    double sy = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    double out_of_extent = 0.0;

    Moments operator+(Moments const& o) const
    {
        return {n + o.n, sx + o.sx, sxx + o.sxx, sy + o.sy, syy + o.syy, sxy + o.sxy,
                out_of_extent + o.out_of_extent};
    }
    void add(double x, double y)
    {
        n += 1.0;
        sx += x;
        sxx += x * x;
        sy += y;
        syy += y * y;
        sxy += x * y;
    }
};

std::size_t block_count(std::size_t n)
{
    return (n + block_size - 1) / block_size;
}

template<class Fn>
Moments run_blocks(std::size_t n, unsigned workers, Fn&& sample)
{
    auto blocks = detail::map_blocks<Moments>(block_count(n), workers, [&](std::size_t b) {
        Moments m;
        std::size_t begin = b * block_size;
        std::size_t end = std::min(n, begin + block_size);
        for (std::size_t i = begin; i < end; ++i)
            sample(i, m);
        return m;
    });
    return detail::pairwise_sum(blocks);
}

McEstimate finish(Moments const& m, Observable observable, std::size_t n)
{
    McEstimate out;
    out.samples = n;
    out.out_of_extent = static_cast<std::size_t>(m.out_of_extent);
    out.effective_samples = m.sxx > 0.0 ? m.sx * m.sx / m.sxx : 0.0;
    double nn = m.n;
    if (observable == Observable::MeanEnergy) {
        if (m.sx <= 0.0)
            throw Error(ErrorCode::ZeroEffectiveSamples, "all Monte Carlo weights vanished");
        double mx = m.sx / nn;
        double my = m.sy / nn;
        double ratio = my / mx;
        double vx = m.sxx / nn - mx * mx;
        double vy = m.syy / nn - my * my;
        double cxy = m.sxy / nn - mx * my;
        double var = std::max(0.0, vy - 2.0 * ratio * cxy + ratio * ratio * vx) / (mx * mx);
        out.value = ratio;
        out.std_error = std::sqrt(var / nn);
        return out;
    }
    double my = m.sy / nn;
    double var = std::max(0.0, m.syy / nn - my * my);
    out.value = my;
    out.std_error = std::sqrt(var / nn);
    return out;
}

//! Gaussian proposal over the total momentum K and relative wavenumber q,
//! k = K/2 + q, k' = K/2 - q (unit Jacobian).
struct StaticProposal
{
    double sx, sp, sq;
    double norm;  // 1 / ((2 pi)^3 sx sp^2 sq^3)

    explicit StaticProposal(SourceScales const& sc)
    {
        double a1 = sc.omega1 / sc.light_speed;
        double a2 = sc.omega2 / sc.light_speed;
        double a3 = sc.omega3 / sc.light_speed;
        double widen = proposal_lambda / (2.0 * a1 * a1);
        sx = 1.0 / std::sqrt(1.0 / (a2 * a2) + widen);
        sp = 1.0 / std::sqrt(1.0 / (a3 * a3) + widen);
        sq = a1 / std::sqrt(2.0 * proposal_lambda);
        norm = 1.0 / (std::pow(two_pi, 3) * sx * sp * sp * sq * sq * sq);
    }
};

struct StaticDraw
{
    Vec3 k;
    Vec3 k_prime;
    double weight;  // integrand / proposal density, zero outside a grid
    bool in_extent;
};

StaticDraw draw_static(SpectralAmplitude const& s, StaticProposal const& prop, double pref,
                       std::uint64_t seed, std::size_t i)
{
    detail::CounterRng rng(seed, i);
    double z[6];
    for (double& x : z)
        x = rng.normal();
    Vec3 K{prop.sx * z[0], prop.sp * z[1], prop.sp * z[2]};
    Vec3 q{prop.sq * z[3], prop.sq * z[4], prop.sq * z[5]};
    Vec3 half{0.5 * K[0], 0.5 * K[1], 0.5 * K[2]};
    StaticDraw d{half + q, half - q, 0.0, true};
    double kn = norm(d.k);
    double kpn = norm(d.k_prime);
    double c = s.light_speed();
    auto v = s.try_value(c * (kn + kpn), K);
    if (!v) {
        d.in_extent = false;
        return d;
    }
    double zz = 0.0;
    for (double x : z)
        zz += x * x;
    double density = prop.norm * std::exp(-0.5 * zz);
    d.weight = pref * kn * kpn * std::norm(*v) / density;
    return d;
}

Vec3 unit_axis(Vec3 axis)
{
    double n = norm(axis);
    if (!(n > 0.0) || !std::isfinite(n))
        throw Error(ErrorCode::Domain, "angular axis must be a finite nonzero vector");
    return (1.0 / n) * axis;
}

//! Defensive mixture over directions: a uniform cap of half-angle
//! `cone` about `axis` plus a uniform sphere component.
class DirectionProposal
{
  public:
    DirectionProposal(Vec3 axis, double cone) : axis_(axis), cos_cone_(std::cos(cone))
    {
        Vec3 trial = std::abs(axis[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
        e1_ = cross(axis, trial);
        e1_ = (1.0 / norm(e1_)) * e1_;
        e2_ = cross(axis, e1_);
    }

    Vec3 draw(detail::CounterRng& rng) const
    {
        double pick = rng.uniform();
        double u = rng.uniform();
        double phi = two_pi * rng.uniform();
        double lo = pick < cone_fraction ? cos_cone_ : -1.0;
        double ct = lo + (1.0 - lo) * u;
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        return ct * axis_ + (st * std::cos(phi)) * e1_ + (st * std::sin(phi)) * e2_;
    }

    //! Density per unit solid angle of the direction of `x`.
    double density(Vec3 const& x) const
    {
        double ct = dot(x, axis_) / norm(x);
        double p = (1.0 - cone_fraction) / (4.0 * pi);
        if (ct >= cos_cone_)
            p += cone_fraction / (two_pi * (1.0 - cos_cone_));
        return p;
    }

  private:
    static constexpr double cone_fraction = 0.8;
    Vec3 axis_;
    Vec3 e1_;
    Vec3 e2_;
    double cos_cone_;
};

//! Cap half-angle for the direction proposal, in units of the Cherenkov
//! angle acos(c/v).
constexpr double cone_widening = 2.0;

//! Partner direction with polar density proportional to |c - v cos|^{-1/2}
//! about the velocity. The phase-matching Jacobian 1/|c - v.n'| would
//! otherwise give the weights a logarithmically divergent variance.
class PartnerProposal
{
  public:
    PartnerProposal(Vec3 axis, double c, double v)
        : axis_(axis), c_(c), v_(v), below_(v - c), above_(c + v)
    {
        Vec3 trial = std::abs(axis[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
        e1_ = cross(axis, trial);
        e1_ = (1.0 / norm(e1_)) * e1_;
        e2_ = cross(axis, e1_);
        mass_ = 2.0 * std::sqrt(below_) + 2.0 * std::sqrt(above_);
    }

    Vec3 draw(detail::CounterRng& rng) const
    {
        double pick = rng.uniform();
        double u = rng.uniform();
        double phi = two_pi * rng.uniform();
        // y = c - v cos in [c - v, c + v]
        double y = pick * mass_ < 2.0 * std::sqrt(below_) ? -below_ * u * u : above_ * u * u;
        double ct = std::clamp((c_ - y) / v_, -1.0, 1.0);
        double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        return ct * axis_ + (st * std::cos(phi)) * e1_ + (st * std::sin(phi)) * e2_;
    }

    double density(Vec3 const& x) const
    {
        double y = c_ - v_ * dot(x, axis_);
        return v_ / (std::sqrt(std::abs(y)) * mass_) / two_pi;
    }

  private:
    Vec3 axis_;
    Vec3 e1_;
    Vec3 e2_;
    double c_;
    double v_;
    double below_;
    double above_;
    double mass_ = 0.0;
};

}  // namespace

McEstimate mc_oracle(SpectralAmplitude const& s, double n0, std::uint64_t seed,
                     std::size_t n_samples, Observable observable, unsigned workers)
{
    if (observable == Observable::Rate)
        throw Error(ErrorCode::WrongVariant, "rate needs a moving-pulse spectrum");
    if (n_samples == 0)
        throw Error(ErrorCode::ZeroEffectiveSamples, "Monte Carlo requested with zero samples");
    if (std::abs(s.light_speed() * n0 - 1.0) > 1e-12)
        throw Error(ErrorCode::Domain, "spectrum light speed does not match n0");
    if (s.delta_n() == 0.0) {
        if (observable == Observable::MeanEnergy)
            throw Error(ErrorCode::UndefinedMean, "mean photon energy is undefined when P = 0");
        McEstimate zero;
        zero.samples = n_samples;
        return zero;
    }
    double c = s.light_speed();
    double pref = c * c / std::pow(n0, 6) / std::pow(two_pi, 6);
    StaticProposal prop(s.scales());
    Moments m = run_blocks(n_samples, workers, [&](std::size_t i, Moments& acc) {
        StaticDraw d = draw_static(s, prop, pref, seed, i);
        if (!d.in_extent)
            acc.out_of_extent += 1.0;
        double energy = c * (norm(d.k) + norm(d.k_prime));
        switch (observable) {
        case Observable::Probability: acc.add(d.weight, d.weight); break;
        case Observable::TotalEnergy: acc.add(d.weight, d.weight * energy); break;
        // pair-symmetric form of the single-photon energy
        case Observable::MeanEnergy: acc.add(d.weight, 0.5 * d.weight * energy); break;
        case Observable::Rate: break;
        }
    });
    if (!(m.sx > 0.0))
        throw Error(ErrorCode::ZeroEffectiveSamples, "all Monte Carlo weights vanished");
    return finish(m, observable, n_samples);
}

McEstimate mc_oracle(FactorizedMovingSpectrum const& fs, double n0, std::uint64_t seed,
                     std::size_t n_samples, Observable observable, unsigned workers)
{
    if (observable != Observable::Rate)
        throw Error(ErrorCode::WrongVariant, "moving-pulse spectra only support the rate observable");
    if (n_samples == 0)
        throw Error(ErrorCode::ZeroEffectiveSamples, "Monte Carlo requested with zero samples");
    if (std::abs(fs.light_speed * n0 - 1.0) > 1e-12)
        throw Error(ErrorCode::Domain, "spectrum light speed does not match n0");
    double c = fs.light_speed;
    double v = norm(fs.velocity);
    McEstimate out;
    out.samples = n_samples;
    if (v <= c || fs.delta_n == 0.0)
        return out;

    double sigma = fs.omega / c * (v / c) * std::sqrt(proposal_lambda);
    Vec3 axis = (1.0 / v) * fs.velocity;
    DirectionProposal directions(axis, std::min(pi, cone_widening * std::acos(c / v)));
    PartnerProposal partner(axis, c, v);
    double maxwell_norm = std::sqrt(2.0 / pi) / (sigma * sigma * sigma);
    double pref = two_pi * c * c / std::pow(n0, 6) / std::pow(two_pi, 6);
    Moments m = run_blocks(n_samples, workers, [&](std::size_t i, Moments& acc) {
        detail::CounterRng rng(seed, i);
        double z0 = rng.normal();
        double z1 = rng.normal();
        double z2 = rng.normal();
        double kn = sigma * std::sqrt(z0 * z0 + z1 * z1 + z2 * z2);
        Vec3 k = kn * directions.draw(rng);
        Vec3 dir = partner.draw(rng);
        double w = 0.0;
        double num = dot(fs.velocity, k) - c * kn;
        double den = c - dot(fs.velocity, dir);
        if (kn > 0.0 && num * den > 0.0) {
            double kp = num / den;
            Vec3 K = k + kp * dir;
            double g = fs.spatial_magnitude(norm(K));
            double f = pref * kn * kp * g * g * kp * kp / std::abs(den);
            // Cartesian density of k: Maxwell magnitude times direction density / |k|^2
            double density = maxwell_norm * std::exp(-0.5 * kn * kn / (sigma * sigma)) *
                             directions.density(k) * partner.density(dir);
            w = f / density;
        }
        acc.add(w, w);
    });
    if (!(m.sx > 0.0))
        throw Error(ErrorCode::ZeroEffectiveSamples, "no Monte Carlo sample satisfied phase matching");
    return finish(m, Observable::Rate, n_samples);
}

namespace {

struct BinSums
{
    std::vector<double> sum;
    std::vector<double> sum_sq;

    BinSums operator+(BinSums const& o) const
    {
        BinSums r = *this;
        if (r.sum.empty())
            return o;
        for (std::size_t b = 0; b < o.sum.size(); ++b) {
            r.sum[b] += o.sum[b];
            r.sum_sq[b] += o.sum_sq[b];
        }
        return r;
    }
};

}  // namespace

Histogram angular_spectrum(SpectralAmplitude const& s, double n0, IntegratorSpec const& spec,
                           std::size_t bins, Vec3 axis)
{
    if (bins == 0)
        throw Error(ErrorCode::Domain, "angular_spectrum needs at least one bin");
    if (spec.samples == 0)
        throw Error(ErrorCode::ZeroEffectiveSamples, "Monte Carlo requested with zero samples");
    if (std::abs(s.light_speed() * n0 - 1.0) > 1e-12)
        throw Error(ErrorCode::Domain, "spectrum light speed does not match n0");
    Vec3 u = unit_axis(axis);
    Histogram h;
    h.variable = "cos_theta";
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        h.edges[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(bins);
    h.edges.back() = 1.0;

    double c = s.light_speed();
    double pref = c * c / std::pow(n0, 6) / std::pow(two_pi, 6);
    StaticProposal prop(s.scales());
    auto bin_of = [&](Vec3 const& k) {
        double cos_theta = dot(k, u) / norm(k);
        auto b = static_cast<std::size_t>((cos_theta + 1.0) * 0.5 * static_cast<double>(bins));
        return std::min(b, bins - 1);
    };
    std::size_t n = spec.samples;
    auto blocks = detail::map_blocks<BinSums>(block_count(n), spec.workers, [&](std::size_t b) {
        BinSums acc{std::vector<double>(bins, 0.0), std::vector<double>(bins, 0.0)};
        std::size_t begin = b * block_size;
        std::size_t end = std::min(n, begin + block_size);
        for (std::size_t i = begin; i < end; ++i) {
            StaticDraw d = draw_static(s, prop, pref, spec.seed, i);
            if (d.weight == 0.0)
                continue;
            std::size_t b1 = bin_of(d.k);
            std::size_t b2 = bin_of(d.k_prime);
            if (b1 == b2) {
                acc.sum[b1] += d.weight;
                acc.sum_sq[b1] += d.weight * d.weight;
            } else {
                double half = 0.5 * d.weight;
                acc.sum[b1] += half;
                acc.sum_sq[b1] += half * half;
                acc.sum[b2] += half;
                acc.sum_sq[b2] += half * half;
            }
        }
        return acc;
    });
    BinSums total = detail::pairwise_sum(blocks);
    double nn = static_cast<double>(n);
    for (std::size_t b = 0; b < bins; ++b) {
        double mean = total.sum[b] / nn;
        double var = std::max(0.0, total.sum_sq[b] / nn - mean * mean);
        h.weights.push_back(mean);
        h.errors.push_back(std::sqrt(var / nn));
    }
    return h;
}

}  // namespace qvrad
