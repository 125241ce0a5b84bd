#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "logicbench/archetype.hpp"
#include "logicbench/metrics.hpp"

namespace logicbench {

/// Raw per-model sub-metric means; the unit normalize_population works on.
struct ModelAggregate {
    std::string model_id;
    int traces = 0;

    double reflection_count = 0;
    double planning_count = 0;
    double verbosity = 0;  // sqrt of mean token count
    double max_depth = 0;
    double explored = 0;  // unique correct nodes
    double step_efficiency = 0;
    double effective_span = 0;
    double reflection_efficiency = 0;
    double valid_planning = 0;  // mean per-trace valid/total planning proportion
    double sentence_duplication = 0;
    double node_duplication = 0;

    double raw_tokens = 0;  // mean token count before the sqrt transform
    double answer_accuracy = 0;
};

ModelAggregate aggregate_model(const std::string& model_id,
                               const std::vector<TraceMetrics>& traces);

/// Divides every sub-metric by its population maximum (all-zero columns stay
/// zero).  Throws EmptyPopulation.
std::vector<ModelAggregate> normalize_population(std::vector<ModelAggregate> population);

struct DimensionScores {
    double ld = 0;
    double cost = 0;
    double exp = 0;
    double eff = 0;
    double coh = 0;
    double red = 0;
};

/// Component weights inside each averaged dimension; equal by default.
struct ComponentWeights {
    std::array<double, 3> cost{1, 1, 1};  // reflection count, planning count, verbosity
    std::array<double, 2> eff{1, 1};      // step efficiency, effective span
    std::array<double, 2> coh{1, 1};      // reflection efficiency, valid planning
    std::array<double, 2> red{1, 1};      // sentence duplication, node duplication
};

DimensionScores dimension_scores(const ModelAggregate& normalized,
                                 const ComponentWeights& weights = {});

using Point2 = std::array<double, 2>;

struct KMeansResult {
    std::vector<Point2> centroids;  // exactly 4
    std::vector<int> assignment;    // per point, centroid index
};

/// K-means with k=4 and k-means++ seeding on the (S_cost, S_ld) plane.
/// Throws DegeneratePopulation when fewer than 4 distinct points exist.
KMeansResult cluster_archetypes(const std::vector<Point2>& points, std::uint64_t seed);

/// Minimum-total-distance row→column assignment for a square cost matrix.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

/// Bijection from the 4 centroids onto the ideal corners.
std::array<Archetype, 4> match_archetypes(const std::vector<Point2>& centroids);

/// Boundary-relative confidence: the point's signed distance to each
/// own/enemy bisector, scaled by the own centroid's distance, capped to
/// [0, 1], minimized over enemies.  Throws CoincidentCentroids.
double boundary_confidence(const Point2& point, int own, const std::vector<Point2>& centroids);

struct ScoreRow {
    std::string model_id;
    DimensionScores dims;
    int cluster = 0;
    Archetype archetype = Archetype::LazyGuesser;
    double confidence = 0;
    double raw_depth = 0;
    double raw_tokens = 0;
    double answer_accuracy = 0;
};

struct ScoreReport {
    std::vector<ScoreRow> rows;
    std::vector<Point2> centroids;
    std::array<Archetype, 4> mapping{};
};

/// Full population scoring: aggregate, normalize, score, cluster, label.
/// Models are processed in ascending model_id order so results are
/// independent of input permutation.
ScoreReport score_population(const std::map<std::string, std::vector<TraceMetrics>>& by_model,
                             std::uint64_t seed, const ComponentWeights& weights = {});

}  // namespace logicbench
