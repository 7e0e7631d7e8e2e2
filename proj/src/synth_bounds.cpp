#include "genesynth/synth.hpp"

#include <algorithm>
#include <cmath>

namespace genesynth {

namespace {

double root(double x, double n) { return std::pow(x, 1.0 / n); }

double min_log_ratio(const Thresholds& a, const Thresholds& b) {
  return std::min(std::log(a.plus / a.minus), std::log(b.plus / b.minus));
}

void check_n(double n) {
  if (!(n > 0.0) || !std::isfinite(n))
    throw std::invalid_argument("Hill coefficient n must be a positive number");
}

// Tracks the tightest constraint; strict constraints need positive slack.
struct Verdict {
  Membership m{true, "", kUnbounded};

  void add(const std::string& name, double slack, bool strict = false) {
    const bool ok = strict ? slack > 0.0 : slack >= 0.0;
    if (!ok) {
      if (m.inside || slack < m.slack) {
        m.inside = false;
        m.binding = name;
        m.slack = slack;
      }
      return;
    }
    if (m.inside && slack < m.slack) {
      m.binding = name;
      m.slack = slack;
    }
  }
  void fail(const std::string& name) {
    if (m.inside || m.slack > -kUnbounded) {
      m.inside = false;
      m.binding = name;
      m.slack = -kUnbounded;
    }
  }
};

} // namespace

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

ParamBox& ParamBox::set(const std::string& axis, Interval iv) {
  axes_[axis] = iv;
  return *this;
}

bool ParamBox::empty() const {
  return std::any_of(axes_.begin(), axes_.end(), [](const auto& kv) { return kv.second.empty(); });
}

bool ParamBox::contains(const std::map<std::string, double>& point) const {
  if (empty())
    return false;
  for (const auto& [axis, iv] : axes_) {
    auto it = point.find(axis);
    if (it == point.end())
      throw std::invalid_argument("point has no coordinate for axis '" + axis + "'");
    if (!iv.contains(it->second))
      return false;
  }
  return true;
}

ParamBox intersect(std::span<const ParamBox> boxes) {
  std::map<std::string, Interval> out;
  for (const auto& b : boxes)
    for (const auto& [axis, iv] : b.axes()) {
      auto it = out.find(axis);
      if (it == out.end())
        out.emplace(axis, iv);
      else
        it->second = intersect(it->second, iv);
    }
  return ParamBox(std::move(out));
}

double alpha_bound(const Thresholds& out, double delta) {
  out.validate();
  if (!(delta > 0.0))
    throw std::invalid_argument("delta must be > 0");
  return std::log(1.0 / (out.margin * out.minus)) / delta;
}

double and_n_bound_m1(const Thresholds& a, const Thresholds& b, const Thresholds& c) {
  const double sp = std::sqrt(c.tilde_plus());
  const double tm = c.tilde_minus();
  return std::log(sp / tm * (1.0 - tm) / (1.0 - sp)) / min_log_ratio(a, b);
}

double and_n_bound_m2(const Thresholds& a, const Thresholds& b, const Thresholds& c) {
  const double tp = c.tilde_plus();
  const double tm = c.tilde_minus();
  return std::log(tp / tm * (1.0 - tm) / (1.0 - tp)) / min_log_ratio(a, b);
}

ParamBox and_box_m1(const Thresholds& a, const Thresholds& b, const Thresholds& c, double n,
                    const std::string& axis1, const std::string& axis2) {
  check_n(n);
  const double sp = std::sqrt(c.tilde_plus());
  const double tm = c.tilde_minus();
  const double lo = root((1.0 - tm) / tm, n);
  const double hi = root((1.0 - sp) / sp, n);
  ParamBox box;
  box.set(axis1, {a.minus * lo, a.plus * hi});
  box.set(axis2, {b.minus * lo, b.plus * hi});
  return box;
}

Membership and_region_m2(const Thresholds& a, const Thresholds& b, const Thresholds& c, double n,
                         double k_ac, double k_bc) {
  check_n(n);
  Verdict v;
  if (!(k_ac > 0.0) || !(k_bc > 0.0)) {
    v.fail("domain");
    return v.m;
  }
  const double tp = c.tilde_plus();
  const double tm = c.tilde_minus();
  const double kbn = std::pow(k_bc, n);

  // both inputs high: output must reach θ̃+
  const double bpn = std::pow(b.plus, n);
  const double r1 = bpn / (tp * (kbn + bpn)) - 1.0;
  if (r1 < 0.0)
    v.fail("case1_upper");
  else
    v.add("case1_upper", a.plus * root(r1, n) - k_ac);

  // first input low, second at γ
  const double r2 = 1.0 / (kbn + 1.0) / tm - 1.0;
  v.add("case2_lower", k_ac - (r2 > 0.0 ? a.minus * root(r2, n) : 0.0));

  // first input at γ, second low
  const double bmn = std::pow(b.minus, n);
  const double r3 = bmn / (tm * (kbn + bmn)) - 1.0;
  v.add("case3_lower", k_ac - (r3 > 0.0 ? kGamma * root(r3, n) : 0.0));
  return v.m;
}

GateBounds not_bounds(const Thresholds& in, const Thresholds& out, double n,
                      const std::string& axis) {
  check_n(n);
  const double tp = out.tilde_plus();
  const double tm = out.tilde_minus();
  GateBounds r;
  r.n_bound = std::log(tp / tm * (1.0 - tm) / (1.0 - tp)) / std::log(in.plus / in.minus);
  r.box.set(axis, {in.minus * root(tp / (1.0 - tp), n), in.plus * root(tm / (1.0 - tm), n)});
  return r;
}

GateBounds or_bounds_m1(const Thresholds& e, const Thresholds& g, const Thresholds& s, double n,
                        const std::string& axis1, const std::string& axis2) {
  check_n(n);
  const double tp = s.tilde_plus();
  const double tm = s.tilde_minus();
  GateBounds r;
  r.n_bound = std::log(tp / tm * (2.0 - 2.0 * tm) / (1.0 - tp)) / min_log_ratio(e, g);
  const double lo = root((2.0 - 2.0 * tm) / tm, n);
  const double hi = root((1.0 - tp) / tp, n);
  r.box.set(axis1, {e.minus * lo, e.plus * hi});
  r.box.set(axis2, {g.minus * lo, g.plus * hi});
  return r;
}

double or_n_bound_m2(const Thresholds& e, const Thresholds& g, const Thresholds& s) {
  const double tp = s.tilde_plus();
  const double tm = s.tilde_minus();
  return std::log(tp / tm * (1.0 - tm) / (1.0 - tp)) / min_log_ratio(e, g);
}

Membership or_region_m2(const Thresholds& e, const Thresholds& g, const Thresholds& s, double n,
                        double k_es, double k_gs) {
  check_n(n);
  Verdict v;
  if (!(k_es > 0.0) || !(k_gs > 0.0)) {
    v.fail("domain");
    return v.m;
  }
  const double tp = s.tilde_plus();
  const double tm = s.tilde_minus();
  const double rm = root((1.0 - tm) / tm, n);
  const double rp = root((1.0 - tp) / tp, n);
  v.add("K1_lower", k_es - e.minus * rm, true);
  v.add("K1_upper", e.plus * rp - k_es);
  v.add("K2_lower", k_gs - g.minus * rm, true);
  v.add("K2_upper", g.plus * rp - k_gs);
  const double q = tm / (1.0 - tm) - std::pow(g.minus / k_gs, n);
  if (q <= 0.0)
    v.fail("K2_lower");
  else
    v.add("lower_curve", k_es - e.minus * root(1.0 / q, n));
  return v.m;
}

CurvedRegion::CurvedRegion(GateKind kind, std::vector<Thresholds> inputs, Thresholds output,
                           double n)
    : kind_(kind), inputs_(std::move(inputs)), output_(output), n_(n) {
  check_n(n);
  if (static_cast<int>(inputs_.size()) != arity(kind_))
    throw std::invalid_argument("threshold count does not match gate arity");
  for (const auto& t : inputs_)
    t.validate();
  output_.validate();
}

Membership CurvedRegion::contains(std::span<const double> k) const {
  if (static_cast<int>(k.size()) != arity(kind_))
    throw std::invalid_argument("point dimension does not match gate arity");
  switch (kind_) {
  case GateKind::And:
    return and_region_m2(inputs_[0], inputs_[1], output_, n_, k[0], k[1]);
  case GateKind::Or:
    return or_region_m2(inputs_[0], inputs_[1], output_, n_, k[0], k[1]);
  case GateKind::Not: {
    const Interval iv = not_bounds(inputs_[0], output_, n_).box.at("K1");
    Verdict v;
    v.add("K1_lower", k[0] - iv.lo);
    v.add("K1_upper", iv.hi - k[0]);
    return v.m;
  }
  }
  return {};
}

std::vector<Interval> CurvedRegion::bounding_box() const {
  const double tp = output_.tilde_plus();
  const double tm = output_.tilde_minus();
  const double n = n_;
  switch (kind_) {
  case GateKind::Not:
    return {not_bounds(inputs_[0], output_, n).box.at("K1")};
  case GateKind::Or: {
    const double rm = root((1.0 - tm) / tm, n);
    const double rp = root((1.0 - tp) / tp, n);
    return {{inputs_[0].minus * rm, inputs_[0].plus * rp},
            {inputs_[1].minus * rm, inputs_[1].plus * rp}};
  }
  case GateKind::And: {
    // Each activation at its high threshold must reach θ̃+ on its own, which
    // caps both K; the low-input cases then bound them from below.
    const double rp = root((1.0 - tp) / tp, n);
    std::vector<Interval> box;
    for (int i = 0; i < 2; ++i) {
      const Thresholds& self = inputs_[i];
      const Thresholds& other = inputs_[1 - i];
      const double other_hi = other.plus * rp;
      const double h_min = 1.0 / (std::pow(other_hi, n) + 1.0);
      const double r = h_min / tm - 1.0;
      box.push_back({r > 0.0 ? self.minus * root(r, n) : 0.0, self.plus * rp});
    }
    return box;
  }
  }
  return {};
}

std::vector<BoundaryCurve> CurvedRegion::curves() const {
  const double tp = output_.tilde_plus();
  const double tm = output_.tilde_minus();
  const double n = n_;
  const Thresholds a = inputs_[0];
  std::vector<BoundaryCurve> out;
  if (kind_ == GateKind::And) {
    const Thresholds b = inputs_[1];
    out.push_back({"case1_upper", true, [=](double k2) -> std::optional<double> {
                     const double bpn = std::pow(b.plus, n);
                     const double r = bpn / (tp * (std::pow(k2, n) + bpn)) - 1.0;
                     if (r < 0.0)
                       return std::nullopt;
                     return a.plus * root(r, n);
                   }});
    out.push_back({"case2_lower", false, [=](double k2) -> std::optional<double> {
                     const double r = 1.0 / (std::pow(k2, n) + 1.0) / tm - 1.0;
                     return r > 0.0 ? a.minus * root(r, n) : 0.0;
                   }});
    out.push_back({"case3_lower", false, [=](double k2) -> std::optional<double> {
                     const double bmn = std::pow(b.minus, n);
                     const double r = bmn / (tm * (std::pow(k2, n) + bmn)) - 1.0;
                     return r > 0.0 ? kGamma * root(r, n) : 0.0;
                   }});
  } else if (kind_ == GateKind::Or) {
    const Thresholds g = inputs_[1];
    out.push_back({"lower_curve", false, [=](double k2) -> std::optional<double> {
                     const double q = tm / (1.0 - tm) - std::pow(g.minus / k2, n);
                     if (q <= 0.0)
                       return std::nullopt;
                     return a.minus * root(1.0 / q, n);
                   }});
    const double upper = a.plus * root((1.0 - tp) / tp, n);
    out.push_back({"K1_upper", true, [=](double) -> std::optional<double> { return upper; }});
  }
  return out;
}

} // namespace genesynth
