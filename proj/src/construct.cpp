#include "kscolor/construct.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "kscolor/error.hpp"

namespace ks::construct {

namespace {

bool lex_less(const Vec3& a, const Vec3& b) { return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z); }

// Angle between lines in radians, accurate for nearly parallel vectors.
double line_angle_rad(const UnitVec& a, const UnitVec& b) {
  return std::atan2(norm(cross(a.vec(), b.vec())), std::abs(dot(a, b)));
}

std::string tour_label(std::size_t i) {
  static const std::string kLetters = "ABCDEFGHIJKLMOPQRSTUVWXYZ";  // no N: that is the pole
  if (i == 0) return "N";
  if (i - 1 < kLetters.size()) return std::string(1, kLetters[i - 1]);
  return "c" + std::to_string(i);
}

}  // namespace

std::size_t SystemBuilder::add_point(const UnitVec& v, std::string label, int priority) {
  entries_.push_back({canonicalize(v, tol_), std::move(label), priority});
  return entries_.size() - 1;
}

SystemBuilder::Result SystemBuilder::finish() const {
  const std::size_t n = entries_.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (line_angle_rad(entries_[i].point.rep(), entries_[j].point.rep()) < tol_.merge) {
        parent[find(i)] = find(j);
      }
    }
  }

  // Per cluster: smallest member vector and best label.
  struct Cluster {
    std::size_t rep;
    std::size_t named;
  };
  std::vector<std::size_t> roots;
  std::vector<Cluster> by_root(n, Cluster{n, n});
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    Cluster& c = by_root[r];
    if (c.rep == n) {
      roots.push_back(r);
      c = {i, i};
      continue;
    }
    if (lex_less(entries_[i].point.vec(), entries_[c.rep].point.vec())) c.rep = i;
    const auto& cur = entries_[c.named];
    if (std::tie(entries_[i].priority, entries_[i].label) < std::tie(cur.priority, cur.label)) c.named = i;
  }
  std::sort(roots.begin(), roots.end(), [&](std::size_t a, std::size_t b) {
    return lex_less(entries_[by_root[a].rep].point.vec(), entries_[by_root[b].rep].point.vec());
  });

  Result out;
  std::vector<std::size_t> root_index(n, 0);
  for (std::size_t k = 0; k < roots.size(); ++k) {
    root_index[roots[k]] = k;
    out.system.points.push_back(entries_[by_root[roots[k]].rep].point);
    out.system.labels.push_back(entries_[by_root[roots[k]].named].label);
  }
  out.index_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.index_of[i] = root_index[find(i)];

  auto idx = [&](std::size_t h) {
    if (h >= n) throw Error(ErrorKind::BadIndex, "unknown point handle " + std::to_string(h));
    return out.index_of[h];
  };
  auto& sys = out.system;
  for (const auto& t : triples_) {
    std::array<std::size_t, 3> p{idx(t[0]), idx(t[1]), idx(t[2])};
    std::sort(p.begin(), p.end());
    sys.triples.push_back({p});
  }
  for (const auto& q : pairs_) {
    std::array<std::size_t, 2> p{idx(q[0]), idx(q[1])};
    std::sort(p.begin(), p.end());
    sys.pairs.push_back({p});
  }
  for (const auto& s : spans_) {
    const std::size_t a = idx(s[1]), b = idx(s[2]);
    sys.spans.push_back({idx(s[0]), std::min(a, b), std::max(a, b)});
  }
  auto by_points = [](const auto& x, const auto& y) { return x.p < y.p; };
  std::sort(sys.triples.begin(), sys.triples.end(), by_points);
  std::sort(sys.pairs.begin(), sys.pairs.end(), by_points);
  std::sort(sys.spans.begin(), sys.spans.end(),
            [](const csp::Span& x, const csp::Span& y) { return std::tie(x.c, x.a, x.b) < std::tie(y.c, y.a, y.b); });
  sys.dedup_constraints();
  sys.check();
  return out;
}

Circuit build_circuit(double step_deg) {
  const double legs = 90.0 / step_deg;
  const double k_real = std::round(legs);
  if (!(step_deg > 0.0) || !std::isfinite(legs) || k_real < 1.0 || std::abs(legs - k_real) > 1e-9) {
    throw Error(ErrorKind::BadStep, "step " + std::to_string(step_deg) + " does not divide 90 degrees");
  }
  const auto k = static_cast<std::size_t>(k_real);
  const Frame f = Frame::standard();
  Circuit c;
  c.step_deg = step_deg;
  auto at = [&](std::size_t steps) { return static_cast<double>(steps) * step_deg; };
  for (std::size_t i = 0; i < k; ++i) c.points.push_back(latlon_to_vec(f, {90.0 - at(i), 0.0}));
  for (std::size_t i = 0; i < k; ++i) c.points.push_back(latlon_to_vec(f, {0.0, at(i)}));
  for (std::size_t i = 0; i < k; ++i) c.points.push_back(latlon_to_vec(f, {at(i), 90.0}));
  for (std::size_t i = 0; i < c.points.size(); ++i) c.labels.push_back(tour_label(i));
  c.corners = {0, k, 2 * k};
  return c;
}

Gadget build_gadget(const UnitVec& pole, const UnitVec& target, double angle_deg, const Tolerances& tol) {
  const double angle = proj_angle(pole, target);
  if (std::abs(angle - angle_deg) > rad_to_deg(tol.ang)) {
    throw Error(ErrorKind::BadAngle, "pole and target are " + std::to_string(angle) + " degrees apart, expected " +
                                         std::to_string(angle_deg));
  }
  const UnitVec s = dot(pole, target) < 0.0 ? -target : target;
  const Frame frame = Frame::from_pole_meridian(pole, s, tol);
  const UnitVec s_e = e_point(frame, s, tol);
  const UnitVec s_perp = perp_point(frame, s, tol);

  // In this frame the target sits at (90 - angle, 0) and its perp point at
  // (angle, 180) exactly.
  descent::Path chain = descent::plan(frame, {90.0 - angle_deg, 0.0}, {angle_deg, 180.0}, tol);
  if (line_angle_rad(chain.points.back(), s_perp) >= tol.merge) {
    throw Error(ErrorKind::DegeneratePoint, "descent chain does not end at the perp point");
  }
  std::vector<UnitVec> helpers;
  for (std::size_t i = 0; i + 1 < chain.points.size(); ++i) helpers.push_back(e_point(frame, chain.points[i], tol));
  return Gadget{pole, s, frame, s_e, s_perp, std::move(chain), std::move(helpers)};
}

std::array<std::size_t, 2> emit_gadget(SystemBuilder& b, const Gadget& g, const std::string& name,
                                       const std::string& pole_label, const std::string& target_label) {
  const std::size_t u = b.add_point(g.pole, pole_label, 0);
  const std::size_t s = b.add_point(g.target, target_label, 0);
  const std::size_t e1 = b.add_point(g.frame.e1(), name + ".e1");
  const std::size_t e2 = b.add_point(g.frame.e2(), name + ".e2");
  const std::size_t s_e = b.add_point(g.target_e, name + ".e2");
  const std::size_t perp = b.add_point(g.target_perp, name + ".perp");
  b.add_triple(u, e1, e2);
  b.add_triple(s, s_e, perp);

  const auto& pts = g.chain.points;
  std::vector<std::size_t> chain{s};
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) chain.push_back(b.add_point(pts[i], name + ".psi" + std::to_string(i)));
  chain.push_back(b.add_point(pts.back(), name + ".perp"));

  auto on_axis = [&](const UnitVec& h) {
    return proj_angle(h, g.frame.e1()) < 1e-6 || proj_angle(h, g.frame.e2()) < 1e-6;
  };
  for (std::size_t i = 0; i < g.helpers.size(); ++i) {
    const std::size_t h = b.add_point(g.helpers[i], name + ".h" + std::to_string(i));
    if (!on_axis(g.helpers[i])) b.add_span(h, e1, e2);
    b.add_span(chain[i + 1], chain[i], h);
  }
  return {u, s};
}

Construction build_construction(double step_deg, const Tolerances& tol) {
  const Circuit circuit = build_circuit(step_deg);
  SystemBuilder builder(tol);
  std::vector<std::size_t> tour;
  for (std::size_t i = 0; i < circuit.points.size(); ++i) {
    tour.push_back(builder.add_point(circuit.points[i], circuit.labels[i], 0));
  }
  builder.add_triple(tour[circuit.corners[0]], tour[circuit.corners[1]], tour[circuit.corners[2]]);

  Construction out;
  const std::size_t m = circuit.points.size();
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    Gadget g = build_gadget(circuit.points[i], circuit.points[j], step_deg, tol);
    emit_gadget(builder, g, circuit.labels[i] + circuit.labels[j], circuit.labels[i], circuit.labels[j]);
    out.gadgets.push_back(std::move(g));
  }

  auto merged = builder.finish();
  out.system = std::move(merged.system);
  for (auto h : tour) out.circuit.push_back(merged.index_of[h]);
  for (std::size_t k = 0; k < 3; ++k) out.corners[k] = out.circuit[circuit.corners[k]];
  return out;
}

GadgetSystem gadget_system(const Gadget& g, const Tolerances& tol) {
  SystemBuilder builder(tol);
  const auto [u, s] = emit_gadget(builder, g, "g", "u", "s");
  auto merged = builder.finish();
  return {std::move(merged.system), merged.index_of[u], merged.index_of[s]};
}

std::vector<GeometryViolation> validate_geometry(const csp::ConstraintSystem& sys, const Tolerances& tol) {
  std::vector<GeometryViolation> out;
  const std::size_t n = sys.size();
  auto v = [&](std::size_t i) -> const UnitVec& { return sys.points[i].rep(); };
  auto orth = [&](std::size_t i, std::size_t j) { return std::abs(dot(v(i), v(j))) < tol.orth; };

  for (std::size_t k = 0; k < sys.triples.size(); ++k) {
    const auto& p = sys.triples[k].p;
    const csp::ConstraintRef ref{csp::Kind::Triple, k};
    if (p[0] >= n || p[1] >= n || p[2] >= n) {
      out.push_back({ref, "index out of range"});
    } else if (!orth(p[0], p[1]) || !orth(p[0], p[2]) || !orth(p[1], p[2])) {
      out.push_back({ref, "members are not mutually orthogonal"});
    }
  }
  for (std::size_t k = 0; k < sys.pairs.size(); ++k) {
    const auto& p = sys.pairs[k].p;
    const csp::ConstraintRef ref{csp::Kind::Pair, k};
    if (p[0] >= n || p[1] >= n) {
      out.push_back({ref, "index out of range"});
    } else if (!orth(p[0], p[1])) {
      out.push_back({ref, "members are not orthogonal"});
    }
  }
  for (std::size_t k = 0; k < sys.spans.size(); ++k) {
    const auto& s = sys.spans[k];
    const csp::ConstraintRef ref{csp::Kind::Span, k};
    if (s.a >= n || s.b >= n || s.c >= n) {
      out.push_back({ref, "index out of range"});
    } else if (line_angle_rad(v(s.a), v(s.b)) < tol.merge) {
      out.push_back({ref, "witnesses are parallel"});
    } else if (std::abs(det3(v(s.a), v(s.b), v(s.c))) >= tol.orth) {
      out.push_back({ref, "forced point is not in the plane of its witnesses"});
    }
  }
  return out;
}

}  // namespace ks::construct
