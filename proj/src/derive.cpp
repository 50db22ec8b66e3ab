#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "kscolor/error.hpp"
#include "kscolor/formats.hpp"

namespace ks::formats {

csp::ConstraintSystem derive_constraints(const std::vector<ProjPoint>& points, const std::vector<std::string>& labels,
                                         const DeriveOptions& opts, const Tolerances& tol) {
  const std::size_t n = points.size();
  if (n > kMaxDerivePoints) {
    throw Error(ErrorKind::TooManyPoints, std::to_string(n) + " points exceed the derivation limit of " +
                                              std::to_string(kMaxDerivePoints));
  }
  csp::ConstraintSystem sys;
  sys.points = points;
  sys.labels = labels;

  auto v = [&](std::size_t i) -> const Vec3& { return points[i].vec(); };
  std::vector<std::vector<bool>> orth(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) orth[i][j] = orth[j][i] = std::abs(dot(v(i), v(j))) < tol.orth;
  }

  std::set<std::pair<std::size_t, std::size_t>> covered;
  if (opts.triples) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!orth[i][j]) continue;
        for (std::size_t k = j + 1; k < n; ++k) {
          if (!orth[i][k] || !orth[j][k]) continue;
          sys.triples.push_back({{i, j, k}});
          covered.insert({i, j});
          covered.insert({i, k});
          covered.insert({j, k});
        }
      }
    }
  }
  if (opts.pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (orth[i][j] && !covered.contains({i, j})) sys.pairs.push_back({{i, j}});
      }
    }
  }
  if (opts.spans) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        const Vec3 normal = cross(v(a), v(b));
        // Non-parallel witnesses only, with the same threshold as merging.
        if (std::atan2(norm(normal), std::abs(dot(v(a), v(b)))) < tol.merge) continue;
        for (std::size_t c = 0; c < n; ++c) {
          if (c == a || c == b) continue;
          if (std::abs(dot(v(c), normal)) < tol.orth) sys.spans.push_back({c, a, b});
        }
      }
    }
    std::sort(sys.spans.begin(), sys.spans.end(), [](const csp::Span& x, const csp::Span& y) {
      return std::tie(x.c, x.a, x.b) < std::tie(y.c, y.a, y.b);
    });
  }
  return sys;
}

}  // namespace ks::formats
