#include "sndflow/manifest.hpp"

#include <stdexcept>

#include "json.hpp"
#include "sndflow/datasets.hpp"

namespace sndflow {

using nlohmann::json;

RadialProfile KernelSpec::build() const {
  if (kind == "gauss") return RadialProfile::gaussian(sigma);
  if (kind == "nd") return RadialProfile::nd();
  if (kind == "snd") return RadialProfile::snd(m, eps, d_slice);
  if (kind == "snd4") return RadialProfile::snd(4, eps, d_slice);
  throw std::invalid_argument("unknown kernel kind: " + kind);
}

ParticleCloud TargetSpec::build() const {
  if (kind == "three_rings") return gen_three_rings(n ? n : 40);
  if (kind == "annulus") return gen_annulus(n ? n : 50);
  if (kind == "bananas") return gen_bananas(n ? n : 100, seed);
  if (kind == "gauss_mixture") return gen_gauss_mixture(n ? n : 100, d, modes, seed);
  if (kind == "csv") return load_csv(path);
  throw std::invalid_argument("unknown target kind: " + kind);
}

ParticleCloud InitSpec::build(std::size_t target_count, std::size_t d) const {
  const int count = n ? n : static_cast<int>(target_count);
  if (kind == "gaussian") return gen_init_gaussian(count, static_cast<int>(d), std, seed, mean);
  if (kind == "uniform") return gen_init_uniform(count, static_cast<int>(d), seed);
  if (kind == "csv") return load_csv(path);
  throw std::invalid_argument("unknown init kind: " + kind);
}

void RunManifest::validate() const {
  const auto one_of = [](const std::string& v, std::initializer_list<const char*> options, const char* key) {
    for (const char* o : options)
      if (v == o) return;
    throw std::invalid_argument(std::string("invalid ") + key + ": " + v);
  };
  one_of(kernel.kind, {"gauss", "snd", "snd4", "nd"}, "kernel.kind");
  one_of(target.kind, {"three_rings", "bananas", "annulus", "gauss_mixture", "csv"}, "target.kind");
  one_of(init.kind, {"gaussian", "uniform", "csv"}, "init.kind");
  kernel.build();  // checks sigma / eps / m / d_slice
  if (target.n < 0) throw std::invalid_argument("invalid target.n");
  if (init.n < 0) throw std::invalid_argument("invalid init.n");
  if (init.std < 0.0) throw std::invalid_argument("invalid init.std");
  if (target.kind == "csv" && target.path.empty()) throw std::invalid_argument("target.path required for csv");
  if (init.kind == "csv" && init.path.empty()) throw std::invalid_argument("init.path required for csv");
  if (out.empty()) throw std::invalid_argument("out must not be empty");
  flow.validate();
}

std::string precision_name(Precision p) { return p == Precision::f32 ? "f32" : "f64"; }

Precision parse_precision(const std::string& s) {
  if (s == "f32") return Precision::f32;
  if (s == "f64") return Precision::f64;
  throw std::invalid_argument("precision must be f32 or f64, got " + s);
}

std::string summation_name(const Summation& s) {
  if (s.mode == Summation::Mode::dense) return "dense";
  return s.directions ? "sliced:" + std::to_string(s.directions) : "sliced";
}

Summation parse_summation(const std::string& s) {
  if (s == "dense") return Summation::dense();
  if (s == "sliced") return Summation::sliced();
  if (s.rfind("sliced:", 0) == 0) {
    const std::string count = s.substr(7);
    std::size_t used = 0;
    int p = -1;
    try {
      p = std::stoi(count, &used);
    } catch (const std::exception&) {
    }
    if (p < 1 || used != count.size()) throw std::invalid_argument("bad direction count in " + s);
    return Summation::sliced(p);
  }
  throw std::invalid_argument("summation must be dense or sliced:P, got " + s);
}

std::string to_json(const RunManifest& m) {
  json j;
  j["kernel"] = {{"kind", m.kernel.kind}, {"sigma", m.kernel.sigma}, {"eps", m.kernel.eps},
                 {"m", m.kernel.m}, {"d_slice", m.kernel.d_slice}};
  j["target"] = {{"kind", m.target.kind}, {"n", m.target.n}, {"seed", m.target.seed},
                 {"d", m.target.d}, {"modes", m.target.modes}, {"path", m.target.path}};
  j["init"] = {{"kind", m.init.kind}, {"n", m.init.n}, {"std", m.init.std}, {"mean", m.init.mean},
               {"seed", m.init.seed}, {"path", m.init.path}};
  j["flow"] = {{"tau", m.flow.tau},
               {"iters", m.flow.iters},
               {"checkpoints", m.flow.checkpoints},
               {"precision", precision_name(m.flow.precision)},
               {"seed", m.flow.seed},
               {"summation", summation_name(m.flow.summation)},
               {"rotate", m.flow.summation.rotate},
               {"w2", m.flow.compute_w2}};
  j["out"] = m.out;
  return j.dump(2);
}

RunManifest manifest_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("manifest is not valid JSON: ") + e.what());
  }
  RunManifest m;
  try {
    if (j.contains("kernel")) {
      const json& k = j["kernel"];
      m.kernel.kind = k.value("kind", m.kernel.kind);
      m.kernel.sigma = k.value("sigma", m.kernel.sigma);
      m.kernel.eps = k.value("eps", m.kernel.eps);
      m.kernel.m = k.value("m", m.kernel.m);
      m.kernel.d_slice = k.value("d_slice", m.kernel.d_slice);
    }
    if (j.contains("target")) {
      const json& t = j["target"];
      m.target.kind = t.value("kind", m.target.kind);
      m.target.n = t.value("n", m.target.n);
      m.target.seed = t.value("seed", m.target.seed);
      m.target.d = t.value("d", m.target.d);
      m.target.modes = t.value("modes", m.target.modes);
      m.target.path = t.value("path", m.target.path);
    }
    if (j.contains("init")) {
      const json& i = j["init"];
      m.init.kind = i.value("kind", m.init.kind);
      m.init.n = i.value("n", m.init.n);
      m.init.std = i.value("std", m.init.std);
      m.init.mean = i.value("mean", m.init.mean);
      m.init.seed = i.value("seed", m.init.seed);
      m.init.path = i.value("path", m.init.path);
    }
    if (j.contains("flow")) {
      const json& f = j["flow"];
      m.flow.tau = f.value("tau", m.flow.tau);
      m.flow.iters = f.value("iters", m.flow.iters);
      m.flow.checkpoints = f.value("checkpoints", m.flow.checkpoints);
      m.flow.precision = parse_precision(f.value("precision", std::string("f64")));
      m.flow.seed = f.value("seed", m.flow.seed);
      m.flow.summation = parse_summation(f.value("summation", std::string("dense")));
      m.flow.summation.rotate = f.value("rotate", true);
      m.flow.compute_w2 = f.value("w2", true);
    }
    m.out = j.value("out", m.out);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("manifest has a field of the wrong type: ") + e.what());
  }
  return m;
}

}  // namespace sndflow
