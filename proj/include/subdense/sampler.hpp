#pragma once

// Monte Carlo oracles: compound-Poisson subordinator samples, the exact
// 1/2-stable sampler, a path-wise maximal-deviation check and simple
// empirical statistics.

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "subdense/bernstein.hpp"

namespace subdense {

/// Philox4x32-10 counter-based generator. Stream (seed, stream) is a pure
/// function of its two keys, so any block of samples can be regenerated.
class Philox {
public:
    using result_type = std::uint64_t;
    Philox(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()();
    /// Uniform on (0, 1], 53 bits.
    double uniform();

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key);

private:
    std::array<std::uint32_t, 2> key_;
    std::array<std::uint32_t, 4> ctr_;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 4;
};

struct EmpiricalDist {
    std::vector<double> samples;  // sorted ascending
    double t = 0.0;
    std::uint64_t seed = 0;
    double cutoff = 0.0;              // small-jump truncation level eps
    double drift_used = 0.0;          // b + int_(0,eps) s nu(ds)
    double omitted_variance = 0.0;    // t int_(0,eps) s^2 nu(ds)
    double jump_rate = 0.0;           // nu((eps, inf))
    std::string warning;
};

/// Draws jump sizes from nu restricted to (eps, inf) by inverting a table of
/// log nu((s, inf)); power-law extrapolation past the last knot.
class JumpTable {
public:
    JumpTable(const BernsteinModel& m, double eps);
    double rate() const { return rate_; }
    /// e is a standard exponential variate: returns s with nu((s,inf)) = rate e^{-e}.
    double draw(double e) const;

private:
    double rate_ = 0.0;
    double dv_ = 0.0;
    std::vector<double> log_s_;  // log s at v = k dv, v = log(rate / nu((s,inf)))
    double tail_slope_ = 0.0;    // d log s / d v beyond the table; 0 for a finite table end
};

EmpiricalDist sample(const BernsteinModel& m, double t, std::size_t n, double eps, std::uint64_t seed);
EmpiricalDist half_stable_exact_sampler(double t, std::size_t n, std::uint64_t seed);

struct PruittRow {
    double t = 0.0, lambda = 0.0;
    double probability = 0.0, stderr_ = 0.0;
    double bound_form = 0.0;  // t h(lambda)
    double ratio = 0.0;
};

struct PruittReport {
    std::vector<PruittRow> rows;
    double constant = 0.0;  // max ratio
    double min_ratio = 0.0;
    double limit = 10.0;
    bool pass = false;
};

/// MC estimate of P(sup_{s<=t} |T_s - s b_lambda| >= lambda) against t h(lambda).
PruittReport pruitt_check(const BernsteinModel& m, const std::vector<double>& t_grid,
                          const std::vector<double>& lambda_grid, std::size_t n, std::uint64_t seed = 1,
                          double limit = 10.0);

/// Gaussian KDE, bandwidth 1.06 s n^{-1/5} with s = min(sd, 1.4826 MAD),
/// reflected at the support edge t b.
std::vector<double> empirical_density(const EmpiricalDist& d, const std::vector<double>& x_grid,
                                      double support_edge = 0.0);
double kde_bandwidth(const EmpiricalDist& d);

struct BinDensity {
    double value = 0.0, stderr_ = 0.0;
};
/// Fraction of samples in [x - half_width, x + half_width] over the width.
BinDensity bin_density(const EmpiricalDist& d, double x, double half_width);

double ks_one_sample(const std::vector<double>& sorted, const std::function<double(double)>& cdf);
double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);
double quantile(const std::vector<double>& sorted, double q);

struct LaplaceEstimate {
    double lambda = 0.0, mean = 0.0, stderr_ = 0.0, expected = 0.0;
};
std::vector<LaplaceEstimate> empirical_laplace(const EmpiricalDist& d, const BernsteinModel& m,
                                               const std::vector<double>& lambdas);

}  // namespace subdense
