// Copyright 2026 The Cohstate Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef COHSTATE_PHOTOSTATS_HPP
#define COHSTATE_PHOTOSTATS_HPP

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cohstate/families.hpp"

// Photon-counting statistics of a coherent-state family: the detection
// distribution P_n, its moments and Mandel Q classification, the
// finite-efficiency detector transform, and a reproducible Monte-Carlo
// photocount sampler.

namespace cohstate::photostats {

using families::FamilySpec;
using fock::complexd;
using fock::FockCutoff;

enum class StatClass { SubPoissonian, Poissonian, SuperPoissonian };

const char* to_string(StatClass c);

struct PhotonStatistics {
  std::vector<double> pn;
  double tail_mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  double mandel_q = 0.0;  // NaN for the vacuum
  StatClass cls = StatClass::Poissonian;
};

// |Q| below this is classified Poissonian; separates closed-form zeros from
// rounding noise.
inline constexpr double kPoissonianTolerance = 1e-9;

// P_n = |phi_n(alpha)|^2 with moments from the truncated table.
PhotonStatistics detection_distribution(const FamilySpec& spec, complexd alpha,
                                        const FockCutoff& cutoff);

// Statistics of an externally supplied probability table.
PhotonStatistics from_probabilities(std::vector<double> pn, double tail_mass = 0.0);

// Q = (Delta n)^2 / nbar - 1; throws std::domain_error for the vacuum.
double mandel_q(const PhotonStatistics& stats);

struct DetectorModel {
  double eta = 1.0;  // quantum efficiency, 0 < eta <= 1
};

struct PhotocountMoments {
  double mean;      // Nbar = eta nbar
  double variance;  // (Delta N)^2 = eta^2 (Delta n)^2 + eta (1 - eta) nbar
};

PhotocountMoments detector_transform(const PhotonStatistics& stats, const DetectorModel& det);

// Photocount sampler: draws n from P_n by inverse CDF, then thins each photon
// with an independent Bernoulli(eta) loss.  Deterministic for a given seed.
// Shots are consumed in batches of 65536; batch k uses an mt19937_64 seeded
// with splitmix64(seed + k), so parallel implementations can reproduce the
// stream batch by batch.
std::vector<int> sample_counts(const FamilySpec& spec, complexd alpha, const DetectorModel& det,
                               long shots, std::uint64_t seed, const FockCutoff& cutoff);

// CSV with columns n, p_n, cumulative (17 significant digits).
void write_pn_csv(std::ostream& os, const PhotonStatistics& stats);

}  // namespace cohstate::photostats

#endif  // COHSTATE_PHOTOSTATS_HPP
