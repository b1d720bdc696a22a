#include "rydberg/stark.hpp"

#include <cmath>
#include <map>

#include "rydberg/errors.hpp"

namespace rydberg {

StarkModel StarkModel::nd52() {
  StarkModel m;
  m.components = {{"mJ=1/2", 1.0 / 3.0, 0.9}, {"mJ=3/2", 1.0 / 3.0, 0.9}, {"mJ=5/2", 1.0 / 3.0, 0.1}};
  return m;
}

void StarkModel::validate() const {
  if (components.empty()) throw InvalidArgument("stark model has no components");
  if (n_reference <= 0) throw InvalidArgument("n_reference must be positive");
  if (!(suppression_threshold > 0.0)) throw InvalidArgument("suppression threshold must be positive");
  double total = 0.0;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw InvalidArgument("component '" + c.label + "' has a negative weight");
    if (!(c.suppression_field > 0.0)) {
      throw InvalidArgument("component '" + c.label + "' needs a positive suppression field");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("component weights sum to " + format_number(total) + ", not 1");
  }
}

const StarkComponent& StarkModel::component(const std::string& label) const {
  for (const auto& c : components) {
    if (c.label == label) return c;
  }
  throw UnknownComponent("unknown stark component '" + label + "'");
}

double StarkModel::coefficient(const StarkComponent& c) const {
  return suppression_threshold / (c.suppression_field * c.suppression_field);
}

namespace {

double shift_for(const StarkModel& model, const StarkComponent& c, double e_rms, int n) {
  if (!(e_rms >= 0.0) || !std::isfinite(e_rms)) throw InvalidArgument("field must be finite and >= 0");
  if (n <= 0) throw InvalidArgument("principal quantum number must be positive");
  const double scale = std::pow(static_cast<double>(n) / model.n_reference, model.scale_exponent);
  return -model.coefficient(c) * scale * e_rms * e_rms;
}

// Difference spectra keyed by the Delta54 shift.
class DifferenceCache {
 public:
  explicit DifferenceCache(const SwitchingScenario& s) : s_(s) {
    DriveConfig off = s.drives;
    off.omega54 = 0.0;
    const ScanResult r = probe_scan(five_level_model(s.scheme, off, s.decay, s.convention), s.grid,
                                    s.delta21_axis, Observable::kImSigma21, s.options);
    off_ = r.averaged;
    diagnostics.merge(r.diagnostics);
  }

  const Spectrum& at(double shift) {
    auto it = cache_.find(shift);
    if (it != cache_.end()) return it->second;
    DriveConfig on = s_.drives;
    on.delta54 += shift;
    const ScanResult r = probe_scan(five_level_model(s_.scheme, on, s_.decay, s_.convention), s_.grid,
                                    s_.delta21_axis, Observable::kImSigma21, s_.options);
    diagnostics.merge(r.diagnostics);
    return cache_.emplace(shift, difference_spectrum(r.averaged, off_)).first->second;
  }

  Diagnostics diagnostics;

 private:
  const SwitchingScenario& s_;
  Spectrum off_;
  std::map<double, Spectrum> cache_;
};

Spectrum combine(DifferenceCache& cache, const SwitchingScenario& s, double e_rms) {
  Spectrum out;
  for (const auto& c : s.stark.components) {
    const Spectrum& d = cache.at(shift_for(s.stark, c, e_rms, s.scheme.n_principal()));
    if (out.values.empty()) {
      out = d;
      for (double& x : out.values) x *= c.weight;
    } else {
      for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] += c.weight * d.values[i];
    }
  }
  return out;
}

double reference(DifferenceCache& cache) {
  const double a0 = rdr_amplitude(cache.at(0.0));
  if (a0 == 0.0) throw InvalidArgument("dark-resonance amplitude at zero field is 0");
  return a0;
}

}  // namespace

double stark_shift(double e_rms, const std::string& component, const StarkModel& model, int n) {
  return shift_for(model, model.component(component), e_rms, n);
}

double rdr_amplitude(const Spectrum& diff) {
  diff.validate();
  if (diff.axis.empty() || diff.axis.back() - diff.axis.front() < 1.0) {
    throw AxisTooNarrow("rdr_amplitude needs an axis spanning at least 1 gamma2");
  }
  std::size_t centre = 0;
  for (std::size_t i = 1; i < diff.size(); ++i) {
    if (std::abs(diff.axis[i]) < std::abs(diff.axis[centre])) centre = i;
  }
  return diff.values[centre] - 0.5 * (diff.values.front() + diff.values.back());
}

SwitchingResult switching_curve(const SwitchingScenario& scenario, const std::vector<double>& e_axis) {
  scenario.stark.validate();
  if (e_axis.empty()) throw InvalidArgument("field axis is empty");
  for (std::size_t i = 0; i < e_axis.size(); ++i) {
    if (!(e_axis[i] >= 0.0)) throw InvalidArgument("field axis values must be >= 0");
    if (i && !(e_axis[i] > e_axis[i - 1])) throw InvalidArgument("field axis must be strictly increasing");
  }

  DifferenceCache cache(scenario);
  SwitchingResult result;
  result.reference_amplitude = reference(cache);
  const double a0 = result.reference_amplitude;

  Metadata meta = five_level_model(scenario.scheme, scenario.drives, scenario.decay, scenario.convention).metadata;
  for (auto& kv : describe(scenario.grid)) meta.push_back(kv);
  meta.emplace_back("reference_amplitude", format_number(a0));
  meta.emplace_back("suppression_threshold", format_number(scenario.stark.suppression_threshold));
  meta.emplace_back("n_reference", std::to_string(scenario.stark.n_reference));
  for (const auto& c : scenario.stark.components) {
    meta.emplace_back("component." + c.label,
                      "weight=" + format_number(c.weight) + " field=" + format_number(c.suppression_field));
  }

  auto make = [&](const std::string& name) {
    Spectrum s;
    s.axis_name = "e_rms";
    s.axis = e_axis;
    s.value_name = name;
    s.metadata = meta;
    return s;
  };
  result.curve = make("normalized_amplitude");
  for (const auto& c : scenario.stark.components) result.components.push_back(make("normalized_amplitude_" + c.label));

  const int n = scenario.scheme.n_principal();
  for (double e : e_axis) {
    result.curve.values.push_back(rdr_amplitude(combine(cache, scenario, e)) / a0);
    for (std::size_t k = 0; k < scenario.stark.components.size(); ++k) {
      const auto& c = scenario.stark.components[k];
      result.components[k].values.push_back(rdr_amplitude(cache.at(shift_for(scenario.stark, c, e, n))) / a0);
    }
  }
  result.diagnostics = cache.diagnostics;
  return result;
}

double half_suppression_field(const SwitchingScenario& scenario, double rel_tol) {
  scenario.stark.validate();
  if (scenario.stark.components.size() != 1) {
    throw InvalidArgument("half-suppression search needs a single-component model");
  }
  if (!(rel_tol > 0.0)) throw InvalidArgument("tolerance must be positive");
  const StarkComponent& c = scenario.stark.components.front();
  const int n = scenario.scheme.n_principal();
  DifferenceCache cache(scenario);
  const double a0 = reference(cache);
  auto amp = [&](double e) { return rdr_amplitude(cache.at(shift_for(scenario.stark, c, e, n))) / a0; };

  // Grid in units of the field where this n reaches the threshold.
  const double unit = c.suppression_field *
                      std::pow(static_cast<double>(scenario.stark.n_reference) / n, scenario.stark.scale_exponent / 2);
  constexpr int kSteps = 32;
  double lo = 0.0;
  double hi = -1.0;
  for (int k = 1; k <= 2 * kSteps; ++k) {
    const double e = unit * k / kSteps;
    if (amp(e) <= 0.5) {
      hi = e;
      break;
    }
    lo = e;
  }
  if (hi < 0.0) throw NoExtremum("amplitude never drops to 0.5 on the field scan");
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (amp(mid) <= 0.5 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace rydberg
