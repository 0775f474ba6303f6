#include "subdense/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "subdense/errors.hpp"
#include "subdense/parallel.hpp"
#include "subdense/scale_inverse.hpp"

namespace subdense {

namespace {

constexpr std::size_t kChunk = 1024;
constexpr double kTableDepth = 40.0;  // v = log(rate / nu((s,inf))) covered by the table
constexpr double kTableStep = 1.0 / 64.0;

std::uint64_t mulhilo(std::uint32_t a, std::uint32_t b) { return static_cast<std::uint64_t>(a) * b; }

}  // namespace

Philox::Philox(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0u, 0u, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

std::array<std::uint32_t, 4> Philox::block(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = mulhilo(M0, c[0]);
        const std::uint64_t p1 = mulhilo(M1, c[2]);
        c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1], static_cast<std::uint32_t>(p0)};
        k[0] += W0;
        k[1] += W1;
    }
    return c;
}

Philox::result_type Philox::operator()() {
    if (used_ >= 4) {
        buf_ = block(ctr_, key_);
        if (++ctr_[0] == 0) ++ctr_[1];
        used_ = 0;
    }
    const std::uint64_t hi = buf_[used_], lo = buf_[used_ + 1];
    used_ += 2;
    return hi << 32 | lo;
}

double Philox::uniform() { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

JumpTable::JumpTable(const BernsteinModel& m, double eps) {
    const auto& nu = m.levy();
    if (nu.kind() == LevyKind::implicit) throw CapabilityError("sampler: Levy measure is not available for sampling");
    if (!(eps > 0.0)) throw DomainError("sampler: cutoff eps must be positive");
    if (nu.is_zero()) return;
    rate_ = nu.tail(eps);
    if (!(rate_ > 0.0)) return;
    // Knots (v_k, log s_k) on a log-s grid, 16 per decade.
    std::vector<double> vs{0.0}, ls{std::log(eps)};
    const double step = std::log(10.0) / 16.0;
    const double ls_cap = std::log(eps) + std::log(1e60);
    while (vs.back() < kTableDepth && ls.back() < ls_cap) {
        const double l = ls.back() + step;
        const double tl = nu.tail(std::exp(l));
        if (!(tl > 0.0)) break;
        const double v = std::log(rate_ / tl);
        if (v <= vs.back()) {
            // flat stretch (density vanishes): skip ahead
            ls.back() = l;
            continue;
        }
        vs.push_back(v);
        ls.push_back(l);
    }
    if (vs.size() < 2) throw NumericalIntegrityError("sampler: jump table could not be built");
    const std::size_t k = vs.size() - 1;
    tail_slope_ = vs.back() >= kTableDepth ? 0.0 : (ls[k] - ls[k - 1]) / (vs[k] - vs[k - 1]);
    dv_ = kTableStep;
    const std::size_t cells = static_cast<std::size_t>(vs.back() / dv_) + 1;
    log_s_.resize(cells);
    std::size_t j = 0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double v = i * dv_;
        while (j + 2 < vs.size() && vs[j + 1] < v) ++j;
        const double w = std::clamp((v - vs[j]) / (vs[j + 1] - vs[j]), 0.0, 1.0);
        log_s_[i] = ls[j] + w * (ls[j + 1] - ls[j]);
    }
}

double JumpTable::draw(double e) const {
    const double pos = e / dv_;
    const std::size_t last = log_s_.size() - 1;
    if (pos < static_cast<double>(last)) {
        const auto i = static_cast<std::size_t>(pos);
        const double w = pos - i;
        return std::exp(log_s_[i] + w * (log_s_[i + 1] - log_s_[i]));
    }
    const double v_end = last * dv_;
    return std::exp(log_s_[last] + tail_slope_ * (e - v_end));
}

EmpiricalDist sample(const BernsteinModel& m, double t, std::size_t n, double eps, std::uint64_t seed) {
    if (!(t > 0.0)) throw DomainError("sample: t must be positive");
    if (n < 1) throw DomainError("sample: n must be >= 1");
    EmpiricalDist d;
    d.t = t;
    d.seed = seed;
    d.cutoff = eps;
    const JumpTable table(m, eps);
    d.jump_rate = table.rate();
    d.drift_used = m.drift() + m.levy().first_moment_below(eps);
    d.omitted_variance = t * m.levy().second_moment_below(eps);
    if (d.jump_rate == 0.0) d.warning = "no jumps above eps: pure drift sample";
    d.samples.assign(n, 0.0);
    const double base = t * d.drift_used;
    const double mean_jumps = t * d.jump_rate;
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t c) {
        Philox rng(seed, c);
        std::exponential_distribution<double> expo(1.0);
        std::poisson_distribution<long long> pois(mean_jumps > 0.0 ? mean_jumps : 1.0);
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            double sum = 0.0;
            if (mean_jumps > 0.0) {
                const long long k = pois(rng);
                for (long long j = 0; j < k; ++j) sum += table.draw(expo(rng));
            }
            d.samples[i] = base + sum;
        }
    });
    std::sort(d.samples.begin(), d.samples.end());
    return d;
}

EmpiricalDist half_stable_exact_sampler(double t, std::size_t n, std::uint64_t seed) {
    if (!(t > 0.0)) throw DomainError("half-stable sampler: t must be positive");
    EmpiricalDist d;
    d.t = t;
    d.seed = seed;
    d.samples.assign(n, 0.0);
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t c) {
        Philox rng(seed, c);
        std::normal_distribution<double> normal;
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            const double z = normal(rng);
            d.samples[i] = t * t / (2.0 * z * z);
        }
    });
    std::sort(d.samples.begin(), d.samples.end());
    return d;
}

PruittReport pruitt_check(const BernsteinModel& m, const std::vector<double>& t_grid,
                          const std::vector<double>& lambda_grid, std::size_t n, std::uint64_t seed, double limit) {
    PruittReport rep;
    rep.limit = limit;
    std::uint64_t cell = 0;
    for (double t : t_grid)
        for (double lambda : lambda_grid) {
            PruittRow row;
            row.t = t;
            row.lambda = lambda;
            row.bound_form = t * concentration_h(m, lambda);
            ++cell;
            if (m.levy().is_zero()) {
                rep.rows.push_back(row);
                continue;
            }
            // Jumps below eps enter through their mean only; with b_lambda
            // subtracted the path is J_s - s m between jumps.
            const double eps = 1e-3 * lambda;
            const JumpTable table(m, eps);
            const double slope = m.levy().first_moment_below(lambda) - m.levy().first_moment_below(eps);
            const double mean_jumps = t * table.rate();
            const std::size_t chunks = (n + kChunk - 1) / kChunk;
            std::vector<std::size_t> hits(chunks, 0);
            parallel_for(chunks, [&](std::size_t c) {
                Philox rng(seed + cell, c);
                std::exponential_distribution<double> expo(1.0);
                std::poisson_distribution<long long> pois(mean_jumps);
                std::vector<double> times;
                const std::size_t end = std::min(n, (c + 1) * kChunk);
                for (std::size_t i = c * kChunk; i < end; ++i) {
                    const long long k = pois(rng);
                    times.resize(static_cast<std::size_t>(k));
                    for (auto& s : times) s = t * rng.uniform();
                    std::sort(times.begin(), times.end());
                    double jumps = 0.0;
                    bool hit = false;
                    for (double s : times) {
                        const double before = jumps - s * slope;
                        jumps += table.draw(expo(rng));
                        if (std::abs(before) >= lambda || jumps - s * slope >= lambda) {
                            hit = true;
                            break;
                        }
                    }
                    if (!hit && std::abs(jumps - t * slope) >= lambda) hit = true;
                    hits[c] += hit;
                }
            });
            std::size_t total = 0;
            for (auto h : hits) total += h;
            row.probability = static_cast<double>(total) / n;
            row.stderr_ = std::sqrt(row.probability * (1.0 - row.probability) / n);
            row.ratio = row.probability / row.bound_form;
            rep.rows.push_back(row);
        }
    rep.constant = 0.0;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    for (const auto& r : rep.rows) {
        rep.constant = std::max(rep.constant, r.ratio);
        rep.min_ratio = std::min(rep.min_ratio, r.ratio);
    }
    rep.pass = !rep.rows.empty() && std::isfinite(rep.constant) && rep.constant <= limit;
    return rep;
}

double quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw DomainError("quantile of an empty sample");
    const double pos = q * (sorted.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + (pos - i) * (sorted[i + 1] - sorted[i]);
}

double kde_bandwidth(const EmpiricalDist& d) {
    const auto& x = d.samples;
    const double n = static_cast<double>(x.size());
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double delta = x[i] - mean;
        mean += delta / (i + 1);
        m2 += delta * (x[i] - mean);
    }
    const double sd = x.size() > 1 ? std::sqrt(m2 / (n - 1)) : 0.0;
    // 1.4826 MAD: consistent for the normal, finite for heavy tails
    const double med = quantile(x, 0.5);
    std::vector<double> dev(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) dev[i] = std::abs(x[i] - med);
    auto mid = dev.begin() + static_cast<std::ptrdiff_t>(dev.size() / 2);
    std::nth_element(dev.begin(), mid, dev.end());
    const double mad = 1.4826 * *mid;
    const double s = mad > 0.0 ? std::min(sd, mad) : sd;
    return 1.06 * s * std::pow(n, -0.2);
}

std::vector<double> empirical_density(const EmpiricalDist& d, const std::vector<double>& x_grid, double edge) {
    const auto& x = d.samples;
    std::vector<double> out(x_grid.size(), 0.0);
    if (x.empty()) return out;
    const double h = kde_bandwidth(d);
    if (!(h > 0.0)) throw DomainError("empirical density: bandwidth is zero (degenerate sample)");
    const double norm = 1.0 / (x.size() * h * std::sqrt(2.0 * std::numbers::pi));
    parallel_for(x_grid.size(), [&](std::size_t g) {
        const double y = x_grid[g];
        if (y < edge) return;
        double sum = 0.0;
        auto add = [&](double centre) {
            auto lo = std::lower_bound(x.begin(), x.end(), centre - 9.0 * h);
            auto hi = std::upper_bound(x.begin(), x.end(), centre + 9.0 * h);
            for (auto it = lo; it != hi; ++it) {
                const double u = (centre - *it) / h;
                sum += std::exp(-0.5 * u * u);
            }
        };
        add(y);
        add(2.0 * edge - y);  // mirror image of the samples
        out[g] = sum * norm;
    });
    return out;
}

BinDensity bin_density(const EmpiricalDist& d, double x, double half_width) {
    const auto& s = d.samples;
    const auto lo = std::lower_bound(s.begin(), s.end(), x - half_width);
    const auto hi = std::upper_bound(s.begin(), s.end(), x + half_width);
    const double n = static_cast<double>(s.size());
    const double frac = (hi - lo) / n;
    return {frac / (2.0 * half_width), std::sqrt(frac * (1.0 - frac) / n) / (2.0 * half_width)};
}

double ks_one_sample(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

std::vector<LaplaceEstimate> empirical_laplace(const EmpiricalDist& d, const BernsteinModel& m,
                                               const std::vector<double>& lambdas) {
    std::vector<LaplaceEstimate> out;
    const double n = static_cast<double>(d.samples.size());
    for (double l : lambdas) {
        double s1 = 0.0, s2 = 0.0;
        for (double x : d.samples) {
            const double e = std::exp(-l * x);
            s1 += e;
            s2 += e * e;
        }
        const double mean = s1 / n;
        const double var = std::max(0.0, s2 / n - mean * mean);
        out.push_back({l, mean, std::sqrt(var / n), std::exp(-d.t * m.phi(l))});
    }
    return out;
}

}  // namespace subdense
