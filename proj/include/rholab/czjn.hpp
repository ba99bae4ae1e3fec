#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rholab/critical_radius.hpp"
#include "rholab/grid.hpp"
#include "rholab/report.hpp"

namespace rholab {

/// One stopping cube. The root is stored as the single node of generation 0.
struct CZNode {
    CellRange cube;
    int generation = 0;
    std::ptrdiff_t parent = -1;  // index into the previous generation
    double mean_osc = 0.0;       // mean over the cube of f - essinf(parent)
    double essinf = 0.0;
    double threshold = 0.0;      // parent threshold that selected this cube
    double own_threshold = 0.0;  // threshold this cube passes to its children
};

struct CZTree {
    CellRange root;
    double sigma = 0.0;
    double theta = 0.0;
    double norm = 0.0;  // dyadic-restricted BLO seminorm on the root
    int max_depth = 0;
    std::vector<std::vector<CZNode>> generations;
    bool depth_exhausted = false;
    bool reached_cells = false;

    /// Generations beyond the root that contain at least one cube.
    int depth() const;
};

/// Dyadic-restricted BLO seminorm over every dyadic subcube of root.
double dyadic_blo_norm(const GridField& f, const GridField& rho, const CellRange& root, double theta);

/// sigma * norm * (1 + side/rho(center))^theta.
double cz_threshold(const GridField& rho, const CellRange& cube, double sigma, double norm, double theta);

/// Maximal dyadic subcubes of each parent whose mean of f - essinf(parent)
/// exceeds the parent's threshold, sorted by cube coordinates.
std::vector<CZNode> cz_generation(const GridField& f, const std::vector<CZNode>& parents, double sigma, double theta,
                                  double norm, const GridField& rho);

CZTree cz_decompose(const GridField& f, const CellRange& root, double sigma, double theta, const GridField& rho,
                    int max_depth = 64);

/// Re-derives properties (A) through (E) for every generation with direct
/// long double sums, plus the per-generation measure decay.
CheckReport cz_verify_properties(const CZTree& tree, const GridField& f, const GridField& rho);

/// Cells whose rho values the tree reads: the root center and every node center.
std::vector<std::size_t> cz_lookup_cells(const GridField& rho, const CZTree& tree);

/// Level sets of f - essinf(root) above k-multiples of the comparison bound
/// lie inside the generation-k cubes, for k = 1 .. depth + 1.
CheckReport cz_inclusion_check(const CZTree& tree, const GridField& f, const GridField& rho,
                               const RhoComparisonEstimate& est);

struct JNReport {
    std::vector<double> lambdas;
    std::vector<double> empirical;
    std::vector<double> bound;
    double c1 = 0.0;
    double c2 = 0.0;
    double c0 = 1.0;
    double n0 = 1.0;
    double theta = 0.0;
    double norm = 0.0;
    double growth = 1.0;  // 1 + r/rho(x0)
    double measure = 0.0; // |Q|
    std::size_t violations = 0;
    bool passed = true;

    bool operator==(const JNReport&) const = default;
};

/// Bar constants of the tail bound: c1 = e, c2 = 1/(c0^theta 2^d e).
double jn_c2(std::size_t dim, double c0, double theta);

/// count linear points on [0, span].
std::vector<double> linear_grid(double span, std::size_t count);

JNReport jn_tail_verify(const GridField& f, const CellRange& root, double theta, const GridField& rho,
                        const RhoComparisonEstimate& est, const std::vector<double>& lambdas);

Json to_json(const JNReport& r);

CheckReport exp_integrability_check(const GridField& f, const CellRange& root, double theta, const GridField& rho,
                                    const RhoComparisonEstimate& est, double gamma);

}  // namespace rholab
