#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sprout/addressing.hpp"
#include "sprout/sprout.hpp"

namespace sprout {

struct Point {
  double x = 0;
  double y = 0;
};

double distance(Point a, Point b);

/// x ↦ (a x + b y + e, c x + d y + f)
struct AffineMap {
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;

  Point operator()(Point p) const { return {a * p.x + b * p.y + e, c * p.x + d * p.y + f}; }
  /// (*this)∘g
  AffineMap after(const AffineMap& g) const;
  AffineMap inverse() const;
  double det() const { return a * d - b * c; }
  /// Operator 2-norm of the linear part.
  double norm() const;
  /// The unique fixed point; requires a contraction.
  Point fixed_point() const;
};

/// Throws ParseError unless 1 <= m <= 32 and every map is an injective
/// contraction.
struct PlanarIFS {
  std::vector<AffineMap> maps;

  int size() const { return static_cast<int>(maps.size()); }
  double max_ratio() const;
  /// S_word, word letters 1..m, applied right to left as S_{j1}∘…∘S_{jk}.
  AffineMap compose(std::span<const int> word) const;
  /// The point π(α).
  Point evaluate(const Address& a) const;
};

PlanarIFS parse_ifs(std::string_view document);
PlanarIFS load_ifs(const std::filesystem::path& path);
void check_ifs(const PlanarIFS& ifs);

/// A ball containing the attractor: S_i(ball) ⊆ ball for every i.
struct Ball {
  Point center;
  double radius = 0;
};
Ball invariant_ball(const PlanarIFS& ifs);

class GeometryError : public SproutError {
 public:
  using SproutError::SproutError;
};

/// { S_w(x0) : w ∈ I^depth }, x0 the fixed point of S_1, words in
/// lexicographic order. Throws GeometryError when m^depth > cap.
std::vector<Point> attractor_points(const PlanarIFS& ifs, int depth,
                                    std::size_t cap = std::size_t{1} << 22);

struct ContactPoint {
  Point point;
  std::vector<Address> addresses;  // one per copy index meeting here, at least
};

struct PairContacts {
  enum class Verdict { Empty, Singleton, SuspectedNonSingleton };
  int i = 0;  // 1-based
  int j = 0;
  Verdict verdict = Verdict::Empty;
  std::vector<Point> clusters;  // one representative each
  std::size_t cylinder_pairs = 0;
};

std::string to_string(PairContacts::Verdict v);

struct IntersectionTable {
  std::vector<PairContacts> pairs;  // every i < j
  bool sip_ok() const;
};

/// Pairs of depth-`depth` cylinders of K_i and K_j whose covering balls meet
/// within `tol`, clustered by position.
IntersectionTable detect_intersections(const PlanarIFS& ifs, int depth, double tol);

struct PointEntry {
  std::string name;
  Point point;
  std::vector<Address> addresses;
  bool boundary = false;
  bool critical = false;
};

struct ExtractionResult {
  Sprout sprout;
  std::vector<PointEntry> points;  // parallel to the sprout's blacks
  IntersectionTable contacts;
  double tol = 0;
  int depth = 0;
  double sip_margin = 0;
};

/// Symbolic contact resolution followed by the φ̃ closure from the
/// critical labels. Throws GeometryError on SIP violations, unresolved
/// contacts or when the resulting sprout is not correct.
ExtractionResult extract_sprout(const PlanarIFS& ifs, int depth = 10, double tol = 1e-9);

struct RenderOptions {
  int depth = 6;
  int size = 480;  // pixels, square canvas
};

std::string render_svg(const PlanarIFS& ifs, const ExtractionResult* result,
                       const RenderOptions& options = {});

}  // namespace sprout
