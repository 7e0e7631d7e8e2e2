#include "genesynth/synth.hpp"

#include <charconv>
#include <ostream>

namespace genesynth {

Membership box_membership(const ParamBox& box, const std::vector<std::string>& axes,
                          std::span<const double> k) {
  Membership m{true, "", kUnbounded};
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const Interval& iv = box.at(axes[i]);
    const std::string base = "K" + std::to_string(i + 1);
    for (auto [name, slack] : {std::pair{base + "_lower", k[i] - iv.lo},
                               std::pair{base + "_upper", iv.hi - k[i]}}) {
      if (slack < 0.0 && (m.inside || slack < m.slack))
        m = {false, name, slack};
      else if (m.inside && slack < m.slack)
        m = {true, name, slack};
    }
  }
  return m;
}

std::vector<RegionPoint> region_grid(const RegionGrid& spec) {
  const std::size_t dim = static_cast<std::size_t>(arity(spec.kind));
  if (spec.inputs.size() != dim)
    throw std::invalid_argument("threshold count does not match gate arity");
  if (spec.resolution == 0)
    throw std::invalid_argument("grid resolution must be >= 1");

  std::vector<std::string> axes{"K1", "K2"};
  axes.resize(dim);
  std::optional<CurvedRegion> curved;
  ParamBox box;
  if (spec.kind == GateKind::Not) {
    box = not_bounds(spec.inputs[0], spec.output, spec.n).box;
  } else if (spec.method == Method::M2) {
    curved.emplace(spec.kind, spec.inputs, spec.output, spec.n);
  } else if (spec.kind == GateKind::And) {
    box = and_box_m1(spec.inputs[0], spec.inputs[1], spec.output, spec.n);
  } else {
    box = or_bounds_m1(spec.inputs[0], spec.inputs[1], spec.output, spec.n).box;
  }

  const std::size_t R = spec.resolution;
  std::size_t total = 1;
  for (std::size_t d = 0; d < dim; ++d)
    total *= R;
  std::vector<RegionPoint> out;
  out.reserve(total);
  for (std::size_t p = 0; p < total; ++p) {
    RegionPoint pt;
    pt.k.resize(dim);
    std::size_t rest = p;
    for (std::size_t d = dim; d-- > 0;) {
      pt.k[d] = (static_cast<double>(rest % R) + 0.5) / static_cast<double>(R);
      rest /= R;
    }
    pt.membership = curved ? curved->contains(pt.k) : box_membership(box, axes, pt.k);
    GateParams gp{spec.kind, spec.n, spec.alpha, pt.k};
    pt.min_robustness =
        analytic_min_robustness(gp, spec.inputs, spec.output, spec.delta, spec.lambda);
    out.push_back(std::move(pt));
  }
  return out;
}

void write_region_csv(std::ostream& os, const std::vector<RegionPoint>& points) {
  const std::size_t dim = points.empty() ? 2 : points.front().k.size();
  auto num = [](double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
  };
  os << "K1";
  if (dim == 2)
    os << ",K2";
  os << ",inside,binding_constraint,min_robustness\n";
  for (const auto& p : points) {
    for (double k : p.k)
      os << num(k) << ',';
    os << (p.membership.inside ? 1 : 0) << ',' << p.membership.binding << ','
       << num(p.min_robustness) << '\n';
  }
}

} // namespace genesynth
