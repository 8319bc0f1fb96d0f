#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sndflow/cloud.hpp"
#include "sndflow/flow.hpp"
#include "sndflow/smoothed_norm.hpp"

namespace sndflow {

struct KernelSpec {
  std::string kind = "snd";  ///< gauss | snd | snd4 | nd
  double sigma = 0.3;
  double eps = 0.01;
  int m = 2;  ///< snd4 forces 4
  int d_slice = 3;

  RadialProfile build() const;
};

struct TargetSpec {
  std::string kind = "three_rings";  ///< three_rings | bananas | annulus | gauss_mixture | csv
  int n = 0;                          ///< per circle / cluster, or total for gauss_mixture; 0 = canonical
  std::uint64_t seed = 1;
  int d = 784;     ///< gauss_mixture only
  int modes = 10;  ///< gauss_mixture only
  std::string path;  ///< csv only

  ParticleCloud build() const;
};

struct InitSpec {
  std::string kind = "gaussian";  ///< gaussian | uniform | csv
  int n = 0;                      ///< 0 = same count as the target
  double std = 1e-4;
  std::vector<double> mean;  ///< empty = origin
  std::uint64_t seed = 2;
  std::string path;

  ParticleCloud build(std::size_t target_count, std::size_t d) const;
};

struct RunManifest {
  KernelSpec kernel;
  TargetSpec target;
  InitSpec init;
  FlowConfig flow;
  std::string out = "out";

  /// Throws std::invalid_argument with the offending key.
  void validate() const;
};

std::string to_json(const RunManifest& m);
RunManifest manifest_from_json(const std::string& text);

std::string precision_name(Precision p);
Precision parse_precision(const std::string& s);
/// "dense" or "sliced" / "sliced:P".
std::string summation_name(const Summation& s);
Summation parse_summation(const std::string& s);

}  // namespace sndflow
