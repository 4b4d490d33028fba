#include "agg/panel.hpp"

#include <unsupported/Eigen/FFT>

#include <atomic>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "agg/spectral.hpp"

namespace agg {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kBlock = 256;  // series per reduction block

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Independent reproducible stream addressed by (seed, replicate, series).
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t r,
                            std::uint64_t j) {
  std::uint64_t h = splitmix64(seed ^ (0xA0761D6478BD642FULL * (r + 1)));
  h = splitmix64(h ^ (0xE7037ED1A0B428DBULL * (j + 1)));
  return std::mt19937_64(h);
}

// Sum of one block of micro-series for one replicate.
Eigen::ArrayXd simulate_block(const PanelConfig& cfg, int replicate, int j_lo,
                              int j_hi) {
  Eigen::ArrayXd sum = Eigen::ArrayXd::Zero(cfg.n_steps);
  const double sd = std::sqrt(cfg.noise.variance);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int j = j_lo; j < j_hi; ++j) {
    auto rng = make_stream(cfg.seed, static_cast<std::uint64_t>(replicate),
                           static_cast<std::uint64_t>(j));
    const double a = sample_coefficient(cfg.phi, rng);
    // Exact stationary start: Y_0 ~ N(0, sigma^2_eps / (1 - a^2)).
    double y = sd / std::sqrt(1.0 - a * a) * gauss(rng);
    for (int t = 0; t < cfg.burn_in; ++t) y = a * y + sd * gauss(rng);
    for (int t = 0; t < cfg.n_steps; ++t) {
      y = a * y + sd * gauss(rng);
      sum[t] += y;
    }
  }
  return sum;
}

Eigen::ArrayXd simulate_replicate(const PanelConfig& cfg, int replicate,
                                  int threads) {
  const int nblocks = (cfg.n_series + kBlock - 1) / kBlock;
  std::vector<Eigen::ArrayXd> partial(nblocks);
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int b = next.fetch_add(1);
      if (b >= nblocks) break;
      try {
        partial[b] = simulate_block(cfg, replicate, b * kBlock,
                                    std::min((b + 1) * kBlock, cfg.n_series));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  if (threads <= 1 || nblocks == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < std::min(threads, nblocks); ++i)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  // Deterministic reduction: fixed block order, independent of threading.
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(cfg.n_steps);
  for (const auto& p : partial)
    if (p.size() > 0) x += p;
  return x / std::sqrt(static_cast<double>(cfg.n_series));
}

// Uncentered biased sample ACVF (divisor T): E X_t = 0 exactly, and the
// divisor-T form keeps the Toeplitz matrix positive semidefinite.
Eigen::ArrayXd sample_acvf(const Eigen::ArrayXd& x, int max_lag) {
  const auto T = x.size();
  Eigen::ArrayXd g(max_lag + 1);
  for (int h = 0; h <= max_lag; ++h) {
    double s = 0.0;
    for (Eigen::Index t = 0; t + h < T; ++t) s += x[t] * x[t + h];
    g[h] = s / static_cast<double>(T);
  }
  return g;
}

Eigen::ArrayXd periodogram_of(const Eigen::ArrayXd& x) {
  const int T = static_cast<int>(x.size());
  std::vector<double> in(x.data(), x.data() + T);
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> out;
  fft.fwd(out, in);
  Eigen::ArrayXd I(T / 2 + 1);
  for (int k = 0; k <= T / 2; ++k) I[k] = std::norm(out[k]) / (2.0 * kPi * T);
  return I;
}

struct LinearFit {
  double slope, intercept;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {slope, (sy - slope * sx) / n};
}

}  // namespace

PanelResult simulate_panel(const PanelConfig& cfg) {
  if (cfg.n_series < 1 || cfg.n_steps < 1 || cfg.burn_in < 0 ||
      cfg.replicates < 1)
    throw std::invalid_argument("panel config: N, T, replicates >= 1, burn_in >= 0");
  if (cfg.max_lag < 0 || cfg.max_lag >= cfg.n_steps)
    throw std::invalid_argument("panel config: 0 <= max_lag < T");
  if (!(cfg.noise.variance >= 0.0))
    throw std::invalid_argument("panel config: noise variance must be >= 0");
  int threads = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;

  const int R = cfg.replicates;
  const int H = cfg.max_lag;
  PanelResult res;
  res.sample_acvf = Eigen::ArrayXd::Zero(H + 1);
  res.mc_stderr = Eigen::ArrayXd::Zero(H + 1);
  res.periodogram = Eigen::ArrayXd::Zero(cfg.n_steps / 2 + 1);
  res.marginal_sample = Eigen::ArrayXd::Zero(R);

  Eigen::ArrayXd acvf_sq = Eigen::ArrayXd::Zero(H + 1);
  for (int r = 0; r < R; ++r) {
    const Eigen::ArrayXd x = simulate_replicate(cfg, r, threads);
    if (r == 0) res.aggregate = x;
    const Eigen::ArrayXd g = sample_acvf(x, H);
    res.sample_acvf += g;
    acvf_sq += g * g;
    res.periodogram += periodogram_of(x);
    res.marginal_sample[r] = x[cfg.n_steps / 2];
  }
  res.sample_acvf /= R;
  res.periodogram /= R;
  if (R > 1) {
    const Eigen::ArrayXd var =
        (acvf_sq / R - res.sample_acvf.square()) * (R / (R - 1.0));
    res.mc_stderr = (var.max(0.0) / R).sqrt();
  } else {
    res.mc_stderr.setConstant(std::numeric_limits<double>::quiet_NaN());
  }
  return res;
}

ComparisonReport compare_to_theory(const PanelResult& result,
                                   const MixtureDensity& phi,
                                   const NoiseSpec& noise, int max_lag) {
  if (result.marginal_sample.size() < 2)
    throw std::invalid_argument("compare_to_theory needs >= 2 replicates");
  if (max_lag + 1 > result.sample_acvf.size())
    throw std::invalid_argument("max_lag exceeds the simulated ACVF horizon");

  const AcvfSequence theory = acvf_from_mixture(phi, noise, max_lag);
  ComparisonReport rep;
  rep.z = Eigen::ArrayXd::Zero(max_lag + 1);
  int within = 0;
  for (int h = 0; h <= max_lag; ++h) {
    rep.z[h] =
        (result.sample_acvf[h] - theory.gamma[h]) / result.mc_stderr[h];
    if (std::abs(rep.z[h]) <= 3.0)
      ++within;
    else
      rep.flagged.push_back(h);
  }
  rep.fraction_within = static_cast<double>(within) / (max_lag + 1);

  // Log-periodogram regression on the lowest Fourier frequencies; the slope
  // estimates -2 d at the origin.
  const int T2 = static_cast<int>(result.periodogram.size()) - 1;
  const int K = std::min(128, T2 / 2);
  std::vector<double> lx, ly;
  const double dlam = kPi / T2;
  for (int k = 1; k <= K; ++k) {
    const double v = result.periodogram[k];
    if (!(v > 0.0)) continue;
    lx.push_back(std::log(k * dlam));
    ly.push_back(std::log(v));
  }
  rep.log_periodogram_slope = lx.size() >= 8 ? linear_fit(lx, ly).slope : 0.0;

  // Jarque-Bera on the marginal sample across replicates.
  const Eigen::ArrayXd& m = result.marginal_sample;
  const double n = static_cast<double>(m.size());
  const double mean = m.mean();
  const double s2 = ((m - mean).square()).mean();
  const double s3 = ((m - mean).pow(3)).mean();
  const double s4 = ((m - mean).pow(4)).mean();
  const double skew = s3 / std::pow(s2, 1.5);
  const double kurt = s4 / (s2 * s2);
  rep.normality_stat =
      n / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
  rep.normality_pass = rep.normality_stat < 9.21;  // chi^2(2) at 1%
  return rep;
}

}  // namespace agg
