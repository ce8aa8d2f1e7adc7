// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohstate/photostats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

namespace cohstate::photostats {

const char* to_string(StatClass c) {
  switch (c) {
    case StatClass::SubPoissonian:
      return "sub-poissonian";
    case StatClass::Poissonian:
      return "poissonian";
    case StatClass::SuperPoissonian:
      return "super-poissonian";
  }
  return "?";
}

namespace {

PhotonStatistics finish(std::vector<double> pn, double tail_mass) {
  PhotonStatistics s;
  s.pn = std::move(pn);
  s.tail_mass = tail_mass;
  double mean = 0.0;
  double second = 0.0;
  for (size_t n = 0; n < s.pn.size(); ++n) {
    mean += n * s.pn[n];
    second += static_cast<double>(n) * n * s.pn[n];
  }
  s.mean = mean;
  s.variance = second - mean * mean;
  if (mean > 0.0) {
    s.mandel_q = s.variance / mean - 1.0;
    if (s.mandel_q < -kPoissonianTolerance) {
      s.cls = StatClass::SubPoissonian;
    } else if (s.mandel_q > kPoissonianTolerance) {
      s.cls = StatClass::SuperPoissonian;
    } else {
      s.cls = StatClass::Poissonian;
    }
  } else {
    s.mandel_q = std::numeric_limits<double>::quiet_NaN();
    s.cls = StatClass::Poissonian;
  }
  return s;
}

// SplitMix64, the usual seed expander.
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97f4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;  // 53-bit mantissa in [0,1)
}

}  // namespace

PhotonStatistics detection_distribution(const FamilySpec& spec, complexd alpha,
                                        const FockCutoff& cutoff) {
  const fock::FockVector v = families::coefficients(spec, alpha, cutoff);
  std::vector<double> pn(v.dim());
  for (int n = 0; n < v.dim(); ++n) pn[n] = std::norm(v.coeffs[n]);
  return finish(std::move(pn), v.tail_mass);
}

PhotonStatistics from_probabilities(std::vector<double> pn, double tail_mass) {
  for (double p : pn) {
    if (p < 0.0) throw std::invalid_argument("from_probabilities: negative probability");
  }
  return finish(std::move(pn), tail_mass);
}

double mandel_q(const PhotonStatistics& stats) {
  if (!(stats.mean > 0.0)) {
    throw std::domain_error("mandel_q: undefined for the vacuum (nbar = 0)");
  }
  return stats.variance / stats.mean - 1.0;
}

PhotocountMoments detector_transform(const PhotonStatistics& stats, const DetectorModel& det) {
  if (!(det.eta > 0.0 && det.eta <= 1.0)) {
    throw std::domain_error("detector_transform: eta must lie in (0, 1]");
  }
  const double eta = det.eta;
  return {eta * stats.mean, eta * eta * stats.variance + eta * (1.0 - eta) * stats.mean};
}

std::vector<int> sample_counts(const FamilySpec& spec, complexd alpha, const DetectorModel& det,
                               long shots, std::uint64_t seed, const FockCutoff& cutoff) {
  if (shots < 1) throw std::invalid_argument("sample_counts: shots must be >= 1");
  if (!(det.eta > 0.0 && det.eta <= 1.0)) {
    throw std::domain_error("sample_counts: eta must lie in (0, 1]");
  }
  const PhotonStatistics stats = detection_distribution(spec, alpha, cutoff);
  if (stats.tail_mass > cutoff.tail_tol) {
    throw fock::truncation_error("sample_counts: P_n tail exceeds tail_tol");
  }
  std::vector<double> cdf(stats.pn.size());
  double acc = 0.0;
  for (size_t n = 0; n < stats.pn.size(); ++n) {
    acc += stats.pn[n];
    cdf[n] = acc;
  }

  constexpr long kBatch = 65536;
  std::vector<int> counts;
  counts.reserve(shots);
  for (long done = 0, batch = 0; done < shots; done += kBatch, ++batch) {
    std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(batch)));
    const long in_batch = std::min(kBatch, shots - done);
    for (long i = 0; i < in_batch; ++i) {
      const double r = uniform01(rng) * acc;  // tail mass renormalized away
      int n = static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
      if (n >= static_cast<int>(cdf.size())) n = static_cast<int>(cdf.size()) - 1;
      int detected = n;
      if (det.eta < 1.0) {
        detected = 0;
        for (int k = 0; k < n; ++k) {
          if (uniform01(rng) < det.eta) ++detected;
        }
      }
      counts.push_back(detected);
    }
  }
  return counts;
}

void write_pn_csv(std::ostream& os, const PhotonStatistics& stats) {
  os << "n,p_n,cumulative\n";
  char line[96];
  double acc = 0.0;
  for (size_t n = 0; n < stats.pn.size(); ++n) {
    acc += stats.pn[n];
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", n, stats.pn[n], acc);
    os << line;
  }
}

}  // namespace cohstate::photostats
