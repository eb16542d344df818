#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "afrac/geometry.hpp"
#include "afrac/grid.hpp"

namespace afrac {

struct AlphaSplit {
    int k = 0;
    double alpha_prime = 0.0;  // in (0, 1]
};
AlphaSplit split_alpha(double alpha);

// Which node pairs enter a sampled seminorm. All pairs when the node set is small; otherwise
// every pair within `local_radius` grid steps, all pairs of a coarse sublattice, and random pairs.
struct PairSampling {
    std::size_t all_pairs_limit = 4000;
    int local_radius = 4;
    std::size_t coarse_nodes = 2000;
    std::size_t random_pairs = 10000;
    std::uint64_t seed = 12345;
    double min_separation_steps = 2.0;
};

using Region = std::function<bool(Vec2)>;

// Sampled C^beta norm: sum_{j<=k} sup |D^j u| + [D^k u]_{beta'} over nodes in the region.
double holder_norm(const GridFunction& u, double beta, const Region& region, const PairSampling& pairs = {});

struct WeightedNormResult {
    double alpha = 0.0;
    double sigma = 0.0;
    int k = 0;
    double alpha_prime = 0.0;
    std::vector<double> sup_terms;  // sup d^{j+sigma} |D^j u|, j = 0..k
    double seminorm = 0.0;
    double total = 0.0;
    std::size_t nodes = 0;  // admissible nodes used
};
// Distance-weighted norm; a node is admissible when its difference stencil lies in the
// domain and h <= d(x)/4.
WeightedNormResult weighted_norm(const GridFunction& u, const Domain& dom, double alpha, double sigma,
                                 const PairSampling& pairs = {});

struct NormRatio {
    double ratio = 0.0;
    double norm1 = 0.0;
    double norm2 = 0.0;
    bool both_zero = false;
};
NormRatio norm_monotonicity_check(const GridFunction& u, const Domain& dom, double alpha1, double alpha2,
                                  double sigma, const PairSampling& pairs = {});

// Seeded family of smooth functions (low-frequency trigonometric sums) for norm comparisons.
std::vector<std::function<double(Vec2)>> smooth_family(int count = 20, std::uint64_t seed = 2024);

struct FamilyRatio {
    std::vector<double> ratios;
    double max_ratio = 0.0;
};
// norm_monotonicity_check over smooth_family(count) sampled on dom at spacing h.
FamilyRatio norm_family_ratio(const Domain& dom, double h, double alpha1, double alpha2, double sigma,
                              int count = 20, const PairSampling& pairs = {});

struct ExponentFit {
    double gamma = 0.0;
    double r2 = 0.0;
    std::vector<double> scales;
    std::vector<double> diffs;
};
// Least-squares slope of log|difference| against log t; order 1 uses u(x0) - u(x0 + t e),
// order 2 the centred second difference.
ExponentFit local_exponent_fit(const std::function<double(Vec2)>& u, Vec2 x0, Vec2 direction,
                               const std::vector<double>& scales, int order);
// Grid version: off-node probes use cubic interpolation; scales must be >= 4h and all probes interior.
ExponentFit local_exponent_fit(const GridFunction& u, Vec2 x0, Vec2 direction, const std::vector<double>& scales,
                               int order);

// t0 * 2^{k/steps_per_octave}, k = 0..count-1
std::vector<double> geometric_scales(double t0, double t1, int steps_per_octave);

}  // namespace afrac
