#pragma once

#include "qkly/klyachko.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qkly {

/// A ray generator of the fan: e_i or -alpha_i (alpha_i = i-th column of A(n,q)).
struct Ray {
  enum class Kind { e, neg_alpha };
  Kind kind = Kind::e;
  int index = 1;

  static Ray e(int i) { return {Kind::e, i}; }
  static Ray neg_alpha(int i) { return {Kind::neg_alpha, i}; }

  std::string label() const;
  friend auto operator<=>(const Ray&, const Ray&) = default;
};

RationalVector ray_vector(const RationalMatrix& a, const Ray& r);

/// The cone sigma_{J,K} = cone{e_j : j in J} + cone{-alpha_k : k in K}. J and K must be disjoint.
class ConeId {
 public:
  ConeId(Subset j, Subset k);

  Subset j() const { return j_; }
  Subset k() const { return k_; }
  int dim() const { return j_.size() + k_.size(); }
  /// e_j for j in J, then -alpha_k for k in K.
  std::vector<Ray> rays() const;
  std::string label() const;

  friend auto operator<=>(const ConeId&, const ConeId&) = default;

 private:
  Subset j_;
  Subset k_;
};

/// Every ConeId of the fan (3^n of them), or those of a fixed dimension.
std::vector<ConeId> all_cones(int n);
std::vector<ConeId> cones_of_dim(int n, int dim);

/// Columns are the cone's ray vectors in the order of ConeId::rays().
RationalMatrix cone_generators(const QContext& ctx, const ConeId& c);

bool cone_contains(const QContext& ctx, const ConeId& c, const RationalVector& point);

inline constexpr int kMaxExhaustiveFanN = 6;

struct FanReport {
  bool simplicial = false;
  bool intersection_law = false;
  bool dimension_law = false;
  std::size_t cones = 0;
  std::size_t pairs = 0;
  std::vector<std::string> failures;

  bool all() const { return simplicial && intersection_law && dimension_law; }
};

/// Exhaustive: generator independence and dimension for every cone, and for every pair of cones an
/// exact test that their intersection is the cone on their common rays. Refuses n > 6.
FanReport check_fan(const QContext& ctx);

/// Exact test that cone(g1) and cone(g2) (independent generator sets, identified by ray) meet
/// exactly in the cone spanned by their common rays.
bool cones_meet_in_common_face(const RationalMatrix& a, const std::vector<Ray>& first,
                               const std::vector<Ray>& second);

struct CompletenessReport {
  bool wall_count_ok = false;
  bool coverage_ok = false;
  std::size_t walls = 0;
  std::size_t samples = 0;
  std::size_t uncovered = 0;

  bool all() const { return wall_count_ok && coverage_ok; }
};

/// Wall count: every codimension-one cone lies in exactly the two maximal cones sigma_{J+l,K} and
/// sigma_{J,K+l}, which sit on opposite sides of it. Coverage: `samples` seeded pseudo-random
/// rational points (plus the origin) each lie in some maximal cone.
CompletenessReport check_complete(const QContext& ctx, std::size_t samples, std::uint64_t seed);

/// Linear dependence among the n+1 rays of sigma_{J+l,K} and sigma_{J,K+l}, scaled to a
/// primitive integer vector whose e_l coefficient is positive.
struct WallData {
  ConeId wall;
  int missing = 0;
  std::map<Ray, Rational> coefficients;
  std::size_t kernel_dim = 0;

  Rational coefficient(const Ray& r) const;
};

WallData wall_relation(const QContext& ctx, const ConeId& wall, int missing);

/// The -alpha coefficients of the same wall obtained instead from A_{K+l} c = e_l (coefficient
/// on e_l fixed to 1), indexed by the elements of K+l.
std::map<int, Rational> wall_alpha_coefficients_via_cartan(const QContext& ctx, const ConeId& wall,
                                                           int missing);

/// Every (wall, missing index) pair: codimension-one cones and the index they omit.
std::vector<std::pair<ConeId, int>> all_walls(int n);

struct AmpleReport {
  bool pass = false;
  std::size_t walls = 0;
  Rational min_intersection;  // min over walls of sum_j a_j * (coefficient on -alpha_j)
};

/// Toric Kleiman check for D = sum a_i D_{-alpha_i}: positive on every wall curve.
AmpleReport check_ample(const QContext& ctx, const RationalVector& a);

/// Degree-2 polynomial in X_1..X_n as coefficients on the monomials X_a X_b, a <= b (1-based).
using Quadric = std::map<std::pair<int, int>, Rational>;

struct SrPresentation {
  /// Minimal non-faces of the fan as ray sets.
  std::vector<std::vector<Ray>> nonfaces;
  /// Y_i = sum_j A_ij X_j, row i.
  RationalMatrix linear_relations;
  /// X_i Y_i with Y eliminated.
  std::vector<Quadric> eliminated;
  /// (q+1) X_i^2 - X_i X_{i+1} - q X_i X_{i-1}.
  std::vector<Quadric> klyachko;
  bool ideals_equal = false;
  /// dim of Q[X]/I' in degrees 0..n+1.
  std::vector<std::size_t> graded_dims;
  bool dims_match_binomial = false;
};

SrPresentation sr_presentation(const QContext& ctx);

/// Integral of prod D_{-alpha_i}^{eta(i)} with the normalization integral of D_{-alpha_1}...D_{-alpha_n}
/// = 1/|det A(n,q)|.
Rational toric_top_integral(const QContext& ctx, const ExponentVector& eta);

struct NormalizationReport {
  /// integral(u_{[n]}) implied by each maximal cone via 1/|det(generators)|.
  std::map<ConeId, Rational> per_cone;
  bool cones_consistent = false;
  /// toric_top_integral(eta) / monomial_degree(eta); must not depend on eta.
  Rational ratio;
  bool ratio_constant = false;
  Rational claim_det_then_factorial;  // 1 / ((n+1)_q (n)_q!)
  Rational claim_factorial_squared;   // 1 / ((n)_q!)^2
};

NormalizationReport top_normalization(const QContext& ctx);

}  // namespace qkly
