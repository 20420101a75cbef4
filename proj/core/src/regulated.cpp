#include "regflux/regulated.hpp"

#include <algorithm>
#include <cmath>

#include "regflux/error.hpp"

namespace regflux {

RegulatedField::RegulatedField(Rectangle rectangle, std::vector<Band> bands, double tolerance)
    : rectangle_(rectangle), bands_(std::move(bands)), tolerance_(tolerance) {
  if (!(rectangle_.T > 0.0) || !(rectangle_.x2 > rectangle_.x1)) {
    throw InputError("RegulatedField: degenerate rectangle");
  }
  for (const auto& band : bands_) {
    if (band.alphas.size() != band.curves.size() + 1) {
      throw InputError("RegulatedField: a band with N curves needs N+1 constants");
    }
  }
}

std::optional<std::size_t> RegulatedField::band_at(double t) const {
  for (std::size_t i = 0; i < bands_.size(); ++i) {
    if (t >= bands_[i].a && t <= bands_[i].b) return i;
  }
  return std::nullopt;
}

namespace {

double step_value(const Band& band, double t, double x) {
  std::size_t k = 0;
  while (k < band.curves.size() && band.curves[k](t) <= x) ++k;
  return band.alphas[k];
}

}  // namespace

std::optional<double> RegulatedField::eval(double t, double x) const {
  const auto i = band_at(t);
  if (!i) return std::nullopt;
  return step_value(bands_[*i], t, x);
}

double RegulatedField::uncovered_measure() const {
  std::vector<std::pair<double, double>> iv;
  for (const auto& b : bands_) {
    const double lo = std::max(0.0, b.a);
    const double hi = std::min(rectangle_.T, b.b);
    if (hi > lo) iv.emplace_back(lo, hi);
  }
  std::sort(iv.begin(), iv.end());
  double covered = 0.0;
  double reach = -HUGE_VAL;
  for (auto [lo, hi] : iv) {
    lo = std::max(lo, reach);
    if (hi > lo) covered += hi - lo;
    reach = std::max(reach, hi);
  }
  return rectangle_.T - covered;
}

nlohmann::json RegulatedField::to_json() const {
  nlohmann::json bands = nlohmann::json::array();
  for (const auto& b : bands_) {
    nlohmann::json curves = nlohmann::json::array();
    for (const auto& c : b.curves) {
      nlohmann::json pts = nlohmann::json::array();
      for (std::size_t k = 0; k < c.times().size(); ++k) {
        pts.push_back({c.times()[k], c.positions()[k]});
      }
      curves.push_back(std::move(pts));
    }
    bands.push_back({{"a", b.a}, {"b", b.b}, {"curves", std::move(curves)}, {"alphas", b.alphas}});
  }
  return {{"T", rectangle_.T},
          {"x1", rectangle_.x1},
          {"x2", rectangle_.x2},
          {"tolerance", tolerance_},
          {"bands", std::move(bands)}};
}

RegulatedField RegulatedField::from_json(const nlohmann::json& doc) {
  try {
    Rectangle rect{doc.at("T").get<double>(), doc.at("x1").get<double>(), doc.at("x2").get<double>()};
    std::vector<Band> bands;
    for (const auto& jb : doc.at("bands")) {
      Band b;
      b.a = jb.at("a").get<double>();
      b.b = jb.at("b").get<double>();
      for (const auto& jc : jb.at("curves")) {
        std::vector<double> t;
        std::vector<double> x;
        for (const auto& p : jc) {
          t.push_back(p.at(0).get<double>());
          x.push_back(p.at(1).get<double>());
        }
        b.curves.emplace_back(std::move(t), std::move(x));
      }
      b.alphas = jb.at("alphas").get<std::vector<double>>();
      bands.push_back(std::move(b));
    }
    return RegulatedField(rect, std::move(bands), doc.at("tolerance").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("regulated field document: ") + e.what());
  }
}

std::optional<double> eval_field(const RegulatedField& field, double t, double x) {
  const auto& r = field.rectangle();
  if (!std::isfinite(t) || !std::isfinite(x) || t < 0.0 || t > r.T || x < r.x1 || x > r.x2) {
    throw InputError("eval_field: point outside the rectangle");
  }
  return field.eval(t, x);
}

FieldValidation validate_field(const RegulatedField& field) {
  FieldValidation v;
  const auto& bands = field.bands();
  const double T = field.rectangle().T;

  std::vector<std::size_t> order(bands.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto l, auto r) { return bands[l].a < bands[r].a; });
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& b = bands[order[k]];
    if (b.a < 0.0 || b.b > T || b.a > b.b) v.bands_inside = false;
    if (k + 1 < order.size() && !(b.b < bands[order[k + 1]].a)) v.bands_disjoint = false;
  }

  v.uncovered_measure = field.uncovered_measure();
  v.coverage_ok = v.uncovered_measure <= field.tolerance() * (1.0 + 1e-12) + 1e-15;

  for (std::size_t i = 0; i < bands.size(); ++i) {
    const auto& b = bands[i];
    if (b.alphas.size() != b.curves.size() + 1) v.alpha_counts_ok = false;
    std::vector<double> lips;
    for (const auto& c : b.curves) lips.push_back(c.restrict(b.a, b.b).lipschitz());
    v.lipschitz.push_back(std::move(lips));

    // Ordering is checked at every curve vertex in the band and at midpoints between them.
    std::vector<double> ts{b.a, b.b};
    for (const auto& c : b.curves) {
      for (double t : c.times()) {
        if (t > b.a && t < b.b) ts.push_back(t);
      }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const std::size_t n = ts.size();
    for (std::size_t k = 0; k + 1 < n; ++k) ts.push_back(0.5 * (ts[k] + ts[k + 1]));
    std::sort(ts.begin(), ts.end());

    for (std::size_t k = 0; k + 1 < b.curves.size(); ++k) {
      std::optional<OrderingViolation> viol;
      for (double t : ts) {
        const double margin = b.curves[k + 1](t) - b.curves[k](t);
        v.worst_ordering_margin = std::min(v.worst_ordering_margin, margin);
        if (margin <= 0.0) {
          if (!viol) viol = OrderingViolation{i, k, t, margin};
          viol->margin = std::min(viol->margin, margin);
        }
      }
      if (viol) v.ordering_violations.push_back(*viol);
    }
  }
  return v;
}

double SupDistanceReport::max() const {
  double m = 0.0;
  for (double d : per_band) m = std::max(m, d);
  return m;
}

SupDistanceReport sup_distance(const RegulatedField& field,
                               const std::function<double(double, double)>& reference,
                               const SampleGrid& samples) {
  if (samples.n_times == 0 || samples.n_positions == 0) {
    throw InputError("sup_distance: empty sample grid");
  }
  const auto& r = field.rectangle();
  SupDistanceReport rep;
  rep.per_band.assign(field.bands().size(), 0.0);
  rep.uncovered_measure = field.uncovered_measure();
  const double hx =
      samples.n_positions > 1 ? (r.x2 - r.x1) / static_cast<double>(samples.n_positions - 1) : 0.0;
  for (std::size_t p = 0; p < samples.n_times; ++p) {
    const double t = samples.n_times > 1
                         ? r.T * static_cast<double>(p) / static_cast<double>(samples.n_times - 1)
                         : 0.5 * r.T;
    const auto bi = field.band_at(t);
    if (!bi) continue;
    const auto& band = field.bands()[*bi];
    std::vector<double> pos;
    for (const auto& c : band.curves) pos.push_back(c(t));
    for (std::size_t q = 0; q < samples.n_positions; ++q) {
      const double x = samples.n_positions > 1 ? r.x1 + hx * static_cast<double>(q) : 0.5 * (r.x1 + r.x2);
      bool near_curve = false;
      for (double g : pos) {
        if (std::abs(x - g) <= hx) {
          near_curve = true;
          break;
        }
      }
      if (near_curve) continue;
      const double d = std::abs(step_value(band, t, x) - reference(t, x));
      rep.per_band[*bi] = std::max(rep.per_band[*bi], d);
      ++rep.samples_used;
    }
  }
  return rep;
}

CompositeFlux compose(const TwoArgFunction& F, const RegulatedField& field) {
  if (field.bands().empty()) throw InputError("compose: field has no bands");
  std::vector<double> alphas;
  for (const auto& b : field.bands()) alphas.insert(alphas.end(), b.alphas.begin(), b.alphas.end());
  check_two_arg_assumptions(F, alphas);
  const auto [lo, hi] = std::minmax_element(alphas.begin(), alphas.end());

  auto coefficient = [field](double t, double x) {
    if (auto i = field.band_at(t)) return step_value(field.bands()[*i], t, x);
    // Uncovered time: hold the value of the nearest band endpoint.
    const Band* best = nullptr;
    double best_dist = HUGE_VAL;
    double best_t = t;
    for (const auto& b : field.bands()) {
      const double tc = std::clamp(t, b.a, b.b);
      if (std::abs(t - tc) < best_dist) {
        best_dist = std::abs(t - tc);
        best = &b;
        best_t = tc;
      }
    }
    return step_value(*best, best_t, x);
  };
  return CompositeFlux(F, coefficient, *lo, *hi);
}

}  // namespace regflux
