#include "regflux/flux_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "regflux/error.hpp"

namespace regflux {

namespace {

constexpr double kFdStep = 1e-5;
constexpr int kMollifierNodes = 64;

bool finite3(double a, double b, double c) {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c);
}

double raw_bump(double xi) {
  if (std::abs(xi) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - xi * xi));
}

double bump_mass() {
  static const double mass = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      raw_bump, -1.0, 1.0, 15, 1e-15);
  return mass;
}

// Trapezoid nodes on [-1,1] with bump weights normalized to unit sum. The
// node count is even, so no node sits at xi = 0 and the weights are symmetric.
struct MollifierRule {
  std::array<double, kMollifierNodes> nodes{};
  std::array<double, kMollifierNodes> weights{};
};

const MollifierRule& mollifier_rule() {
  static const MollifierRule rule = [] {
    MollifierRule r;
    double total = 0.0;
    for (int k = 0; k < kMollifierNodes; ++k) {
      r.nodes[k] = -1.0 + 2.0 * k / (kMollifierNodes - 1);
      r.weights[k] = raw_bump(r.nodes[k]);
      total += r.weights[k];
    }
    for (auto& w : r.weights) w /= total;
    return r;
  }();
  return rule;
}

}  // namespace

FluxField::FluxField(Evaluator value, Evaluator d_omega, FluxAssumptions assumptions)
    : value_(std::move(value)), d_omega_(std::move(d_omega)), assumptions_(assumptions) {
  if (!value_) throw InputError("FluxField: missing evaluator");
  if (!(assumptions_.lip_omega >= 0.0) || !std::isfinite(assumptions_.lip_omega)) {
    throw InputError("FluxField: Lipschitz constant must be finite and non-negative");
  }
}

double FluxField::eval(double t, double x, double w) const {
  if (!finite3(t, x, w)) throw InputError("FluxField::eval: non-finite input");
  constexpr double slack = 1e-12;
  if (w < assumptions_.state_min - slack || w > assumptions_.state_max + slack) {
    throw InputError("FluxField::eval: state outside the declared range");
  }
  return value_(t, x, w);
}

double FluxField::d_omega(double t, double x, double w) const {
  if (d_omega_) return d_omega_(t, x, w);
  return d_omega_fd(t, x, w);
}

double FluxField::d_omega_fd(double t, double x, double w) const {
  return (value_(t, x, w + kFdStep) - value_(t, x, w - kFdStep)) / (2.0 * kFdStep);
}

FluxField make_flux(const ScalarFunction& f) {
  FluxAssumptions a;
  a.lip_omega = f.lip;
  const double f0 = f.value(0.0);
  a.satisfies_F2 = (f0 == 0.0);
  return FluxField([v = f.value](double, double, double w) { return v(w); },
                   [d = f.d1](double, double, double w) { return d(w); }, a);
}

InterfaceFlux::InterfaceFlux(ScalarFunction left, ScalarFunction right, PiecewiseLinearCurve gamma)
    : left_(std::move(left)), right_(std::move(right)), gamma_(std::move(gamma)) {
  constexpr double tol = 1e-12;
  if (std::abs(left_(0.0)) > tol || std::abs(right_(0.0)) > tol ||
      std::abs(left_(1.0) - right_(1.0)) > tol) {
    throw AssumptionError("InterfaceFlux: need f_l(0) = f_r(0) = 0 and f_l(1) = f_r(1)");
  }
  gamma_dot_ = gamma_.slopes();
}

FluxField InterfaceFlux::field() const {
  FluxAssumptions a;
  a.lip_omega = std::max(left_.lip, right_.lip);
  a.satisfies_F2 = true;
  auto self = *this;
  return FluxField([self](double t, double x, double w) { return self(t, x, w); },
                   [self](double t, double x, double w) {
                     return x <= self.gamma_(t) ? self.left_.d1(w) : self.right_.d1(w);
                   },
                   a);
}

double sampled_lipschitz(const TwoArgFunction& F, double a_min, double a_max) {
  constexpr int na = 33;
  constexpr int nw = 1001;
  double lip = 0.0;
  for (int i = 0; i < na; ++i) {
    const double a = na == 1 ? a_min : a_min + (a_max - a_min) * i / (na - 1);
    for (int k = 0; k < nw; ++k) {
      const double w = static_cast<double>(k) / (nw - 1);
      lip = std::max(lip, std::abs(F.d_omega(a, w)));
    }
  }
  return lip;
}

double check_two_arg_assumptions(const TwoArgFunction& F, const std::vector<double>& alphas,
                                 double tol) {
  if (alphas.empty()) throw InputError("check_two_arg_assumptions: no coefficient values");
  const double h1 = F(alphas.front(), 1.0);
  for (double a : alphas) {
    if (std::abs(F(a, 0.0)) > tol) {
      throw AssumptionError("F(alpha,0) != 0 at alpha = " + std::to_string(a));
    }
    if (std::abs(F(a, 1.0) - h1) > tol) {
      throw AssumptionError("F(alpha,1) is not constant in alpha (alpha = " + std::to_string(a) + ")");
    }
  }
  return h1;
}

CompositeFlux::CompositeFlux(TwoArgFunction F, Coefficient coefficient, double alpha_min,
                             double alpha_max)
    : F_(std::move(F)), coefficient_(std::move(coefficient)) {
  if (!coefficient_) throw InputError("CompositeFlux: missing coefficient");
  if (!(alpha_min <= alpha_max)) throw InputError("CompositeFlux: empty coefficient range");
  std::vector<double> alphas;
  for (int i = 0; i <= 16; ++i) alphas.push_back(alpha_min + (alpha_max - alpha_min) * i / 16.0);
  h1_ = check_two_arg_assumptions(F_, alphas);
  lip_ = sampled_lipschitz(F_, alpha_min, alpha_max);
}

FluxField CompositeFlux::field() const {
  FluxAssumptions a;
  a.lip_omega = lip_;
  a.satisfies_F2 = true;
  a.satisfies_F3 = true;
  auto self = *this;
  return FluxField([self](double t, double x, double w) { return self(t, x, w); },
                   [self](double t, double x, double w) {
                     return self.F_.d_omega(self.coefficient_(t, x), w);
                   },
                   a);
}

double bump_kernel(double xi) { return raw_bump(xi) / bump_mass(); }

FluxField mollify(const FluxField& flux, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("mollify: delta must be positive");
  const auto& rule = mollifier_rule();
  auto smooth = [delta, &rule](const FluxField::Evaluator& g) {
    return [g, delta, &rule](double t, double x, double w) {
      double acc = 0.0;
      for (int i = 0; i < kMollifierNodes; ++i) {
        if (rule.weights[i] == 0.0) continue;
        const double s = t - delta * rule.nodes[i];
        double inner = 0.0;
        for (int j = 0; j < kMollifierNodes; ++j) {
          if (rule.weights[j] == 0.0) continue;
          inner += rule.weights[j] * g(s, x - delta * rule.nodes[j], w);
        }
        acc += rule.weights[i] * inner;
      }
      return acc;
    };
  };
  FluxField::Evaluator value = [flux](double t, double x, double w) { return flux(t, x, w); };
  FluxField::Evaluator deriv = [flux](double t, double x, double w) {
    return flux.d_omega(t, x, w);
  };
  return FluxField(smooth(value), smooth(deriv), flux.assumptions());
}

AssumptionReport verify_assumptions(const FluxField& flux, const SamplingPlan& plan) {
  if (plan.times.empty() || plan.positions.empty() || plan.states.empty()) {
    throw InputError("verify_assumptions: empty sampling plan");
  }
  AssumptionReport r;
  for (double t : plan.times) {
    double f1_min = HUGE_VAL;
    double f1_max = -HUGE_VAL;
    for (double x : plan.positions) {
      for (double w : plan.states) r.lip_hat = std::max(r.lip_hat, std::abs(flux.d_omega_fd(t, x, w)));
      r.max_abs_f_at_zero = std::max(r.max_abs_f_at_zero, std::abs(flux(t, x, 0.0)));
      const double f1 = flux(t, x, 1.0);
      f1_min = std::min(f1_min, f1);
      f1_max = std::max(f1_max, f1);
    }
    r.max_x_variation_at_one = std::max(r.max_x_variation_at_one, f1_max - f1_min);
  }
  r.F1_pass = r.lip_hat <= flux.lipschitz() + plan.tolerance;
  r.F2_pass = r.max_abs_f_at_zero <= plan.tolerance && r.max_x_variation_at_one <= plan.tolerance;
  return r;
}

FluxField galilean_shift(const InterfaceFlux& flux) {
  const auto& speeds = flux.gamma_dot().values();
  double max_speed = 0.0;
  for (double s : speeds) max_speed = std::max(max_speed, std::abs(s));
  FluxAssumptions a;
  a.lip_omega = std::max(flux.left().lip, flux.right().lip) + max_speed;
  a.satisfies_F2 = true;
  auto left = flux.left();
  auto right = flux.right();
  auto gdot = flux.gamma_dot();
  return FluxField(
      [left, right, gdot](double t, double x, double w) {
        return (x <= 0.0 ? left(w) : right(w)) - gdot(t) * w;
      },
      [left, right, gdot](double t, double x, double w) {
        return (x <= 0.0 ? left.d1(w) : right.d1(w)) - gdot(t);
      },
      a);
}

}  // namespace regflux
