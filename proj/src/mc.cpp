#include "turbeam/mc.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "turbeam/constants.hpp"
#include "turbeam/errors.hpp"
#include "turbeam/meanfield.hpp"
#include "turbeam/parallel.hpp"
#include "turbeam/scenario.hpp"

namespace turbeam {

void McConfig::validate() const {
  if (n_photons <= 0) throw ConfigError("mc.n_photons must be > 0");
  if (record_times.empty()) throw ConfigError("mc.record_times must be non-empty");
  for (std::size_t i = 0; i < record_times.size(); ++i) {
    if (!(record_times[i] >= 0.0))
      throw ConfigError("mc.record_times must be >= 0");
    if (i > 0 && !(record_times[i] > record_times[i - 1]))
      throw ConfigError("mc.record_times must be strictly increasing");
  }
  if (max_events_per_photon < 0)
    throw ConfigError("mc.max_events_per_photon must be >= 0");
  if (!(g2 >= 0.0)) throw ConfigError("mc.g2 must be >= 0");
  if (histogram_bins < 0) throw ConfigError("mc.histogram_bins must be >= 0");
  if (!(histogram_rmax >= 0.0)) throw ConfigError("mc.histogram_rmax must be >= 0");
  if (n_threads < 1) throw ConfigError("mc.n_threads must be >= 1");
}

KickSampler::KickSampler(const SpectrumModel& spec) {
  if (spec.kind() == SpectrumKind::Gaussian) {
    exact_gaussian_ = true;
    corr_length_ = spec.corr_length();
    if (!(spec.amplitude() > 0.0))
      throw ConfigError("kick sampler: spectrum amplitude must be > 0");
    return;
  }
  // Tabulated inverse CDF of the kick radius density k psi(k).
  const int n = 2048;
  const double kmax = spec.k_cutoff();
  std::vector<double> cdf(n, 0.0), ks(n);
  double prev = 0.0;
  for (int i = 0; i < n; ++i) {
    ks[i] = kmax * i / (n - 1.0);
    double cur = ks[i] * spec.psi(ks[i]);
    if (i > 0) cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * (ks[i] - ks[i - 1]);
    prev = cur;
  }
  double norm = cdf[n - 1];
  if (!(norm > 0.0)) throw ConfigError("kick sampler: spectrum has no weight");
  std::vector<double> us, kv;
  us.reserve(n);
  kv.reserve(n);
  for (int i = 0; i < n; ++i) {
    double u = cdf[i] / norm;
    if (!us.empty() && !(u > us.back())) continue;  // flat spectrum stretch
    us.push_back(u);
    kv.push_back(ks[i]);
  }
  inverse_cdf_ = MonotoneCubic(std::move(us), std::move(kv));
}

Vec2 KickSampler::sample(RngStream& rng) const {
  double u = rng.next_uniform();
  double k = exact_gaussian_ ? (2.0 / corr_length_) * std::sqrt(-std::log(u))
                             : inverse_cdf_(u);
  double theta = 2.0 * M_PI * rng.next_uniform();
  return {k * std::cos(theta), k * std::sin(theta)};
}

Vec2 sample_kick(const KickSampler& sampler, RngStream& rng) {
  return sampler.sample(rng);
}

namespace {

// Fixed accumulation chunk: per-chunk partial sums depend only on photon
// order, never on the thread schedule, so any thread count reproduces the
// same bits.
constexpr std::int64_t kChunk = 4096;
constexpr int kStatsPerRecord = 6;  // q2, q2^2, r2, r2^2, rq, rq^2

struct ChunkTables {
  // stats[record * kStatsPerRecord + s][chunk]
  std::vector<std::vector<double>> stats;
  // hist[record * bins + b][chunk], plus overflow per record
  std::vector<std::vector<double>> hist;
  std::vector<std::vector<double>> overflow;
};

}  // namespace

McEstimate simulate_photons(const BeamParams& beam, const SpectrumModel& spec,
                            const McConfig& cfg) {
  beam.validate();
  cfg.validate();
  const CollisionConstants cc = collision_constants(spec, beam.omega0());
  const double nu = cc.nu;
  const double c_over_q0 = kSpeedOfLight / beam.q0();
  const auto& times = cfg.record_times;
  const std::size_t n_rec = times.size();
  const double t_max = times.back();

  std::int64_t max_events = cfg.max_events_per_photon;
  if (max_events == 0)
    max_events = static_cast<std::int64_t>(10.0 * nu * t_max) + 64;

  const int bins = cfg.histogram_bins;
  double rmax = cfg.histogram_rmax;
  if (bins > 0 && rmax == 0.0) {
    double r2m = 4.0 * cc.alpha * kSpeedOfLight * kSpeedOfLight * t_max *
                 t_max * t_max / (3.0 * beam.q0() * beam.q0());
    rmax = r2m > 0.0 ? 6.0 * std::sqrt(r2m) : 6.0 * beam.r0;
  }

  const std::int64_t n = cfg.n_photons;
  const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
  ChunkTables tab;
  tab.stats.assign(n_rec * kStatsPerRecord,
                   std::vector<double>(static_cast<std::size_t>(n_chunks), 0.0));
  if (bins > 0) {
    tab.hist.assign(n_rec * static_cast<std::size_t>(bins),
                    std::vector<double>(static_cast<std::size_t>(n_chunks), 0.0));
    tab.overflow.assign(n_rec,
                        std::vector<double>(static_cast<std::size_t>(n_chunks), 0.0));
  }

  const bool scattering = nu > 0.0;
  const KickSampler sampler = scattering ? KickSampler(spec)
                                         : KickSampler(SpectrumModel::gaussian(
                                               1.0, spec.kind() == SpectrumKind::Gaussian
                                                        ? spec.corr_length()
                                                        : 1.0));
  const double q_sigma =
      cfg.initial_width_mode == InitialWidthMode::DiffuserWaist
          ? std::sqrt(1.0 / (beam.r0 * beam.r0) + cfg.g2)
          : 1.0 / beam.r0;

  std::mutex err_mutex;
  std::string first_error;

  auto run_chunk = [&](std::int64_t chunk) {
    std::int64_t begin = chunk * kChunk;
    std::int64_t end = std::min(n, begin + kChunk);
    std::vector<double> local(n_rec * kStatsPerRecord, 0.0);
    std::vector<double> local_hist(bins > 0 ? n_rec * bins : 0, 0.0);
    std::vector<double> local_over(bins > 0 ? n_rec : 0, 0.0);
    for (std::int64_t i = begin; i < end; ++i) {
      RngStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      Vec2 r{0.0, 0.0}, q{0.0, 0.0};
      if (cfg.initial_width_mode != InitialWidthMode::PointSource) {
        r.x = 0.5 * beam.r0 * rng.next_gaussian();
        r.y = 0.5 * beam.r0 * rng.next_gaussian();
        q.x = q_sigma * rng.next_gaussian();
        q.y = q_sigma * rng.next_gaussian();
      }
      double t = 0.0;
      std::size_t ri = 0;
      std::int64_t events = 0;
      auto record = [&](std::size_t rec, Vec2 rr, Vec2 qq) {
        double q2 = qq.norm_sq(), r2 = rr.norm_sq(), rq = rr.dot(qq);
        double* s = &local[rec * kStatsPerRecord];
        s[0] += q2;
        s[1] += q2 * q2;
        s[2] += r2;
        s[3] += r2 * r2;
        s[4] += rq;
        s[5] += rq * rq;
        if (bins > 0) {
          double rad = std::sqrt(r2);
          if (rad < rmax) {
            int b = std::min(bins - 1, static_cast<int>(rad / rmax * bins));
            local_hist[rec * bins + b] += 1.0;
          } else {
            local_over[rec] += 1.0;
          }
        }
      };
      while (ri < n_rec) {
        double te = scattering
                        ? t + rng.next_exponential(nu)
                        : times.back() + 1.0;
        while (ri < n_rec && times[ri] <= te) {
          record(ri, r + (c_over_q0 * (times[ri] - t)) * q, q);
          ++ri;
        }
        if (ri >= n_rec) break;
        r = r + (c_over_q0 * (te - t)) * q;
        t = te;
        q = q + sampler.sample(rng);
        if (++events > max_events) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (first_error.empty()) {
            std::ostringstream msg;
            msg << "simulate_photons: photon " << i << " exceeded "
                << max_events << " scattering events before t = " << t_max;
            first_error = msg.str();
          }
          return;
        }
      }
    }
    for (std::size_t s = 0; s < local.size(); ++s)
      tab.stats[s][static_cast<std::size_t>(chunk)] = local[s];
    for (std::size_t h = 0; h < local_hist.size(); ++h)
      tab.hist[h][static_cast<std::size_t>(chunk)] = local_hist[h];
    for (std::size_t o = 0; o < local_over.size(); ++o)
      tab.overflow[o][static_cast<std::size_t>(chunk)] = local_over[o];
  };

  parallel_for_chunks(n_chunks, cfg.n_threads,
                      [&](std::int64_t b, std::int64_t e) {
                        for (std::int64_t ch = b; ch < e; ++ch) run_chunk(ch);
                      });
  if (!first_error.empty()) throw SimulationError(first_error);

  McEstimate est;
  est.n_photons = n;
  auto total = [&](const std::vector<double>& per_chunk) {
    return pairwise_sum(per_chunk.data(),
                        static_cast<std::int64_t>(per_chunk.size()));
  };
  auto mean_and_stderr = [&](double s1, double s2, double& mean, double& se) {
    mean = s1 / static_cast<double>(n);
    if (n > 1) {
      double var = (s2 - s1 * s1 / static_cast<double>(n)) /
                   static_cast<double>(n - 1);
      se = std::sqrt(std::max(0.0, var) / static_cast<double>(n));
    } else {
      se = 0.0;
    }
  };
  for (std::size_t rec = 0; rec < n_rec; ++rec) {
    McRecord out;
    out.t = times[rec];
    const std::size_t base = rec * kStatsPerRecord;
    mean_and_stderr(total(tab.stats[base + 0]), total(tab.stats[base + 1]),
                    out.mean_q2, out.stderr_q2);
    mean_and_stderr(total(tab.stats[base + 2]), total(tab.stats[base + 3]),
                    out.mean_r2, out.stderr_r2);
    mean_and_stderr(total(tab.stats[base + 4]), total(tab.stats[base + 5]),
                    out.mean_rq, out.stderr_rq);
    est.records.push_back(out);
    if (bins > 0) {
      RadialHistogram h;
      h.bin_edges.resize(bins + 1);
      for (int b = 0; b <= bins; ++b) h.bin_edges[b] = rmax * b / bins;
      h.counts.resize(bins);
      h.stderr_counts.resize(bins);
      for (int b = 0; b < bins; ++b) {
        double m = total(tab.hist[rec * bins + b]);
        h.counts[b] = m;
        h.stderr_counts[b] =
            std::sqrt(std::max(0.0, m * (1.0 - m / static_cast<double>(n))));
      }
      h.overflow = total(tab.overflow[rec]);
      est.histograms.push_back(std::move(h));
    }
  }
  return est;
}

std::string McEstimate::to_csv() const {
  std::ostringstream os;
  os << "t,mean_q2,stderr_q2,mean_r2,stderr_r2,mean_rq,stderr_rq\n";
  for (const auto& r : records) {
    os << fmt_csv(r.t) << ',' << fmt_csv(r.mean_q2) << ',' << fmt_csv(r.stderr_q2)
       << ',' << fmt_csv(r.mean_r2) << ',' << fmt_csv(r.stderr_r2) << ','
       << fmt_csv(r.mean_rq) << ',' << fmt_csv(r.stderr_rq) << '\n';
  }
  return os.str();
}

std::string McEstimate::to_json() const {
  std::ostringstream os;
  os << "{\n  \"n_photons\": " << n_photons << ",\n  \"records\": [\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << "    {\"t\": " << fmt_json(r.t) << ", \"mean_q2\": "
       << fmt_json(r.mean_q2) << ", \"stderr_q2\": " << fmt_json(r.stderr_q2)
       << ", \"mean_r2\": " << fmt_json(r.mean_r2) << ", \"stderr_r2\": "
       << fmt_json(r.stderr_r2) << ", \"mean_rq\": " << fmt_json(r.mean_rq)
       << ", \"stderr_rq\": " << fmt_json(r.stderr_rq) << '}'
       << (i + 1 < records.size() ? "," : "") << '\n';
  }
  os << "  ]";
  if (!histograms.empty()) {
    os << ",\n  \"histograms\": [\n";
    for (std::size_t i = 0; i < histograms.size(); ++i) {
      const auto& h = histograms[i];
      auto write_array = [&os](const char* name, const std::vector<double>& v) {
        os << '"' << name << "\": [";
        for (std::size_t j = 0; j < v.size(); ++j)
          os << fmt_json(v[j]) << (j + 1 < v.size() ? ", " : "");
        os << ']';
      };
      os << "    {";
      write_array("bin_edges", h.bin_edges);
      os << ", ";
      write_array("counts", h.counts);
      os << ", ";
      write_array("stderr_counts", h.stderr_counts);
      os << ", \"overflow\": " << fmt_json(h.overflow) << '}'
         << (i + 1 < histograms.size() ? "," : "") << '\n';
    }
    os << "  ]";
  }
  os << "\n}\n";
  return os.str();
}

std::string McEstimate::histogram_csv(std::size_t t_index) const {
  if (t_index >= histograms.size())
    throw std::out_of_range("McEstimate::histogram_csv: no histogram at index");
  const auto& h = histograms[t_index];
  std::ostringstream os;
  os << "r_lo,r_hi,count,stderr\n";
  for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b) {
    os << fmt_csv(h.bin_edges[b]) << ',' << fmt_csv(h.bin_edges[b + 1]) << ','
       << fmt_csv(h.counts[b]) << ',' << fmt_csv(h.stderr_counts[b]) << '\n';
  }
  return os.str();
}

IntensityComparison estimate_intensity_profile(const BeamParams& beam,
                                               const SpectrumModel& spec,
                                               const McEstimate& estimate,
                                               std::size_t t_index) {
  if (t_index >= estimate.histograms.size() ||
      t_index >= estimate.records.size())
    throw std::out_of_range("estimate_intensity_profile: no histogram at index");
  const auto& h = estimate.histograms[t_index];
  BeamParams at_time = beam;
  at_time.time = estimate.records[t_index].t;
  const double scale = beam.n_photons / static_cast<double>(estimate.n_photons);
  IntensityComparison cmp;
  for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b) {
    double lo = h.bin_edges[b], hi = h.bin_edges[b + 1];
    double area = M_PI * (hi * hi - lo * lo);
    double center = 0.5 * (lo + hi);
    cmp.bin_centers.push_back(center);
    cmp.density.push_back(scale * h.counts[b] / area);
    cmp.density_stderr.push_back(scale * h.stderr_counts[b] / area);
    cmp.expected_density.push_back(
        mean_intensity(at_time, spec, Vec2{center, 0.0}));
    double se = cmp.density_stderr.back();
    cmp.z_scores.push_back(
        se > 0.0 ? (cmp.density.back() - cmp.expected_density.back()) / se : 0.0);
  }
  return cmp;
}

}  // namespace turbeam
