#include "rsl/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rsl/error.hpp"

namespace rsl {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

nlohmann::json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

// Metric comparison scale just above the quantity it must exceed.
double scale_above(double x) { return x * (1.0 + 1e-9); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

bool ConditionReport::all_hold() const {
  return std::all_of(hypotheses.begin(), hypotheses.end(), [](const Hypothesis& h) { return h.holds; });
}

std::vector<std::string> ConditionReport::failed() const {
  std::vector<std::string> out;
  for (const auto& h : hypotheses)
    if (!h.holds) out.push_back(h.name);
  return out;
}

const Hypothesis* ConditionReport::find(const std::string& name) const {
  for (const auto& h : hypotheses)
    if (h.name == name) return &h;
  return nullptr;
}

void ConditionReport::add(Hypothesis h) {
  for (auto& existing : hypotheses)
    if (existing.name == h.name) {
      existing = std::move(h);
      return;
    }
  hypotheses.push_back(std::move(h));
}

void ConditionReport::inject_faults(const std::set<std::string>& names) {
  const auto& known = known_hypotheses();
  for (const auto& name : names) {
    if (std::find(known.begin(), known.end(), name) == known.end())
      throw PreconditionError("unknown hypothesis '" + name + "'");
    bool found = false;
    for (auto& h : hypotheses)
      if (h.name == name) {
        h.holds = false;
        h.injected = true;
        found = true;
      }
    if (!found) {
      Hypothesis h;
      h.name = name;
      h.statement = "not evaluated at these scales";
      h.lhs = kNaN;
      h.rhs = kNaN;
      h.holds = false;
      h.injected = true;
      hypotheses.push_back(std::move(h));
    }
  }
}

nlohmann::json ConditionReport::to_json() const {
  nlohmann::json hs = nlohmann::json::array();
  for (const auto& h : hypotheses) {
    nlohmann::json j{{"name", h.name},   {"statement", h.statement}, {"lhs", number(h.lhs)},
                     {"rhs", number(h.rhs)}, {"holds", h.holds}};
    j["delta"] = h.delta ? number(*h.delta) : nlohmann::json(nullptr);
    if (h.injected) j["injected"] = true;
    hs.push_back(std::move(j));
  }
  return {{"beta", beta},
          {"tau", tau},
          {"zeta", zeta ? nlohmann::json(*zeta) : nlohmann::json(nullptr)},
          {"all_hold", all_hold()},
          {"nu", number(nu)},
          {"mu", number(mu)},
          {"hypotheses", std::move(hs)}};
}

const std::vector<std::string>& known_hypotheses() {
  static const std::vector<std::string> names{
      "retraction_metric_scale", "retraction_homotopy_scale", "projection_metric_scale",
      "projection_homotopy_scale", "noisy_metric_scale",      "noisy_homotopy_scale",
      "hausmann_scale",            "normal_slice_scale",      "tube_containment",
      "noise_in_tube",             "noisy_curve_budget",      "sample_density",
      "metric_comparability",      "f_map_scale"};
  return names;
}

ConditionReport check_scale_conditions(const ModelSpace& model, double beta, double tau,
                                       std::optional<double> zeta) {
  if (!(beta > 0.0)) throw PreconditionError("beta must be positive");
  if (!(tau >= 0.0)) throw PreconditionError("tau must be nonnegative");
  if (zeta && !(*zeta >= 0.0)) throw PreconditionError("zeta must be nonnegative");

  ConditionReport rep;
  rep.beta = beta;
  rep.tau = tau;
  rep.zeta = zeta;

  const double dmax = model.delta_max();
  auto eps = [](double t) { return t; };  // every shipped model moves r-tube points by at most r
  // xi at a metric scale just above x; infinite when x is past the admissible range.
  auto xi_at = [&](double x, double& delta) {
    delta = scale_above(x);
    if (!(delta < dmax)) return kInf;
    return model.constants(delta).xi;
  };
  auto rho = [&]() {
    double d = std::min(scale_above(beta), dmax / 2.0);
    return model.constants(d).rho;
  }();

  auto metric = [&](std::string name, std::string text, double lhs) {
    Hypothesis h;
    h.name = std::move(name);
    h.statement = std::move(text);
    h.lhs = lhs;
    h.rhs = dmax;
    h.delta = scale_above(lhs);
    h.holds = *h.delta < dmax;
    h.statement += " (delta = " + fmt(*h.delta) + ", admissible below " + fmt(dmax) + ")";
    rep.add(std::move(h));
  };
  auto homotopy = [&](std::string name, std::string text, double add, double xi_arg) {
    double delta = 0.0;
    double xi = xi_at(xi_arg, delta);
    Hypothesis h;
    h.name = std::move(name);
    h.statement = std::move(text);
    h.lhs = add + xi * xi_arg;
    h.rhs = rho;
    h.delta = delta;
    h.holds = h.lhs < h.rhs;
    rep.add(std::move(h));
  };
  auto plain = [&](std::string name, std::string text, double lhs, double rhs) {
    Hypothesis h;
    h.name = std::move(name);
    h.statement = std::move(text);
    h.lhs = lhs;
    h.rhs = rhs;
    h.holds = lhs < rhs;
    rep.add(std::move(h));
  };

  const double eb = eps(beta);
  metric("retraction_metric_scale", "2 beta + eps(beta) < delta", 2 * beta + eb);
  homotopy("retraction_homotopy_scale", "xi * (2 beta + eps(beta)) < rho", 0.0, 2 * beta + eb);
  metric("projection_metric_scale", "beta + eps(beta) < delta", beta + eb);
  homotopy("projection_homotopy_scale", "beta + xi * (beta + eps(beta)) < rho", beta, beta + eb);
  if (tau > 0.0) {
    metric("noisy_metric_scale", "beta + eps(beta) + eps(beta + tau) < delta", beta + eb + eps(beta + tau));
    homotopy("noisy_homotopy_scale", "xi * (beta + eps(beta)) < rho", 0.0, beta + eb);
  }
  plain("hausmann_scale", "2 beta < rho", 2 * beta, rho);
  if (model.is_closed_curve()) {
    double eta = model.constants(std::min(scale_above(beta), dmax / 2.0)).eta;
    plain("normal_slice_scale", "3 beta < eta", 3 * beta, eta);
  }

  const double tube = model.tube_radius();
  if (model.kind() == ModelKind::Circle) {
    // Largest distance from the circle to a chord of length < beta.
    const double r = model.length() / (2.0 * std::numbers::pi);
    double sag = beta < 2 * r ? r * (1.0 - std::cos(std::asin(beta / (2 * r)))) : r;
    plain("tube_containment", "chord sag at scale beta < tube radius", sag, tube);
  } else {
    plain("tube_containment", "beta / sqrt(2) < tube radius", beta / std::sqrt(2.0), tube);
  }
  if (tau > 0.0) plain("noise_in_tube", "tau < tube radius", tau, tube);
  if (zeta) plain("noisy_curve_budget", "tau + zeta < beta / 2", tau + *zeta, beta / 2.0);

  double d_nu = 0.0;
  double xi_nu = xi_at(2 * beta + eb, d_nu);
  rep.nu = (0.5 + xi_nu) * beta + xi_nu * eb;
  rep.mu = 1.5 * beta + 2 * eps(tau) + eps(beta + tau);
  return rep;
}

}  // namespace rsl
