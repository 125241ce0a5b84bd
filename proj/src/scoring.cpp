#include "logicbench/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "logicbench/errors.hpp"

namespace logicbench {

ModelAggregate aggregate_model(const std::string& model_id,
                               const std::vector<TraceMetrics>& traces) {
    ModelAggregate agg;
    agg.model_id = model_id;
    agg.traces = static_cast<int>(traces.size());
    if (traces.empty()) return agg;

    double n = static_cast<double>(traces.size());
    for (const auto& t : traces) {
        agg.reflection_count += t.base.reflection_sentences;
        agg.planning_count += t.base.planning_nodes;
        agg.raw_tokens += t.base.tokens;
        agg.max_depth += t.derived.max_correct_depth;
        agg.explored += t.base.unique_correct;
        agg.step_efficiency += t.derived.step_efficiency;
        agg.effective_span += t.derived.effective_span;
        agg.reflection_efficiency += t.derived.reflection_efficiency;
        agg.valid_planning += t.base.planning_nodes > 0
                                  ? double(t.base.valid_planning) / t.base.planning_nodes
                                  : 0.0;
        agg.sentence_duplication += t.derived.sentence_duplication;
        agg.node_duplication += t.derived.node_duplication;
        agg.answer_accuracy += t.answer_correct ? 1.0 : 0.0;
    }
    agg.reflection_count /= n;
    agg.planning_count /= n;
    agg.raw_tokens /= n;
    agg.max_depth /= n;
    agg.explored /= n;
    agg.step_efficiency /= n;
    agg.effective_span /= n;
    agg.reflection_efficiency /= n;
    agg.valid_planning /= n;
    agg.sentence_duplication /= n;
    agg.node_duplication /= n;
    agg.answer_accuracy /= n;
    agg.verbosity = std::sqrt(agg.raw_tokens);
    return agg;
}

namespace {

using Column = double ModelAggregate::*;

constexpr Column kNormalizedColumns[] = {
    &ModelAggregate::reflection_count,     &ModelAggregate::planning_count,
    &ModelAggregate::verbosity,            &ModelAggregate::max_depth,
    &ModelAggregate::explored,             &ModelAggregate::step_efficiency,
    &ModelAggregate::effective_span,       &ModelAggregate::reflection_efficiency,
    &ModelAggregate::valid_planning,       &ModelAggregate::sentence_duplication,
    &ModelAggregate::node_duplication,
};

}  // namespace

std::vector<ModelAggregate> normalize_population(std::vector<ModelAggregate> population) {
    if (population.empty()) throw EmptyPopulation("cannot normalize an empty population");
    for (Column col : kNormalizedColumns) {
        double maxv = 0;
        for (const auto& m : population) maxv = std::max(maxv, m.*col);
        if (maxv <= 0) continue;
        for (auto& m : population) m.*col /= maxv;
    }
    return population;
}

namespace {

template <std::size_t N>
double weighted_mean(const std::array<double, N>& values, const std::array<double, N>& weights) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < N; ++i) {
        num += values[i] * weights[i];
        den += weights[i];
    }
    return den > 0 ? num / den : 0.0;
}

}  // namespace

DimensionScores dimension_scores(const ModelAggregate& m, const ComponentWeights& w) {
    DimensionScores s;
    s.ld = m.max_depth;
    s.cost = weighted_mean<3>({m.reflection_count, m.planning_count, m.verbosity}, w.cost);
    s.exp = m.explored;
    s.eff = weighted_mean<2>({m.step_efficiency, m.effective_span}, w.eff);
    s.coh = weighted_mean<2>({m.reflection_efficiency, m.valid_planning}, w.coh);
    s.red = weighted_mean<2>({m.sentence_duplication, m.node_duplication}, w.red);
    return s;
}

namespace {

double dist2(const Point2& a, const Point2& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1];
    return dx * dx + dy * dy;
}

int nearest_centroid(const Point2& p, const std::vector<Point2>& centroids) {
    int best = 0;
    double best_d = dist2(p, centroids[0]);
    for (int k = 1; k < static_cast<int>(centroids.size()); ++k) {
        double d = dist2(p, centroids[k]);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

}  // namespace

KMeansResult cluster_archetypes(const std::vector<Point2>& points, std::uint64_t seed) {
    constexpr int k = 4;
    std::set<std::pair<double, double>> distinct;
    for (const auto& p : points) distinct.emplace(p[0], p[1]);
    if (static_cast<int>(distinct.size()) < k)
        throw DegeneratePopulation("k-means needs at least 4 distinct points, got " +
                                   std::to_string(distinct.size()));

    std::mt19937_64 rng(seed);
    const std::size_t n = points.size();

    // k-means++ seeding with an explicit prefix-sum draw for portability.
    std::vector<Point2> centroids;
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    centroids.push_back(points[first(rng)]);
    std::vector<double> d2(n);
    while (static_cast<int>(centroids.size()) < k) {
        double total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::max();
            for (const auto& c : centroids) best = std::min(best, dist2(points[i], c));
            d2[i] = best;
            total += best;
        }
        std::size_t chosen = 0;
        if (total > 0) {
            std::uniform_real_distribution<double> u(0.0, total);
            double r = u(rng), acc = 0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (r <= acc) {
                    chosen = i;
                    break;
                }
                chosen = i;
            }
        } else {
            chosen = first(rng);  // all mass on existing centroids; arbitrary pick
        }
        centroids.push_back(points[chosen]);
    }

    std::vector<int> assignment(n, -1);
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<int> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = nearest_centroid(points[i], centroids);

        // Re-seed any empty cluster with the point farthest from its centroid.
        for (int c = 0; c < k; ++c) {
            if (std::count(next.begin(), next.end(), c) > 0) continue;
            std::size_t worst = 0;
            double worst_d = -1;
            for (std::size_t i = 0; i < n; ++i) {
                if (std::count(next.begin(), next.end(), next[i]) <= 1) continue;
                double d = dist2(points[i], centroids[next[i]]);
                if (d > worst_d) {
                    worst_d = d;
                    worst = i;
                }
            }
            next[worst] = c;
        }

        bool stable = (next == assignment);
        assignment = std::move(next);
        for (int c = 0; c < k; ++c) {
            double sx = 0, sy = 0;
            int count = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (assignment[i] != c) continue;
                sx += points[i][0];
                sy += points[i][1];
                ++count;
            }
            if (count > 0) centroids[c] = {sx / count, sy / count};
        }
        if (stable) break;
    }
    return {std::move(centroids), std::move(assignment)};
}

std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::max();
    std::vector<double> u(n + 1), v(n + 1);
    std::vector<int> p(n + 1), way(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = -1;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> result(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) result[p[j] - 1] = j - 1;
    return result;
}

std::array<Archetype, 4> match_archetypes(const std::vector<Point2>& centroids) {
    std::vector<std::vector<double>> cost(4, std::vector<double>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) cost[i][j] = std::sqrt(dist2(centroids[i], kIdealCorners[j]));
    auto assign = hungarian(cost);
    std::array<Archetype, 4> mapping{};
    for (int i = 0; i < 4; ++i) mapping[i] = static_cast<Archetype>(assign[i]);
    return mapping;
}

double boundary_confidence(const Point2& point, int own, const std::vector<Point2>& centroids) {
    const Point2& c = centroids[own];
    double best = 1.0;
    for (int j = 0; j < static_cast<int>(centroids.size()); ++j) {
        if (j == own) continue;
        const Point2& e = centroids[j];
        double dx = c[0] - e[0], dy = c[1] - e[1];
        double len = std::sqrt(dx * dx + dy * dy);
        if (len == 0)
            throw CoincidentCentroids("centroids " + std::to_string(own) + " and " +
                                      std::to_string(j) + " coincide");
        double mx = (c[0] + e[0]) / 2, my = (c[1] + e[1]) / 2;
        double signed_dist = ((point[0] - mx) * dx + (point[1] - my) * dy) / len;
        double centroid_dist = len / 2;
        double ratio = std::clamp(signed_dist / centroid_dist, 0.0, 1.0);
        best = std::min(best, ratio);
    }
    return best;
}

ScoreReport score_population(const std::map<std::string, std::vector<TraceMetrics>>& by_model,
                             std::uint64_t seed, const ComponentWeights& weights) {
    if (by_model.empty()) throw EmptyPopulation("no models to score");

    std::vector<ModelAggregate> raw;
    raw.reserve(by_model.size());
    for (const auto& [id, traces] : by_model) raw.push_back(aggregate_model(id, traces));

    std::vector<double> raw_depth, raw_tokens, accuracy;
    for (const auto& m : raw) {
        raw_depth.push_back(m.max_depth);
        raw_tokens.push_back(m.raw_tokens);
        accuracy.push_back(m.answer_accuracy);
    }

    auto normalized = normalize_population(std::move(raw));

    ScoreReport report;
    std::vector<Point2> points;
    for (std::size_t i = 0; i < normalized.size(); ++i) {
        ScoreRow row;
        row.model_id = normalized[i].model_id;
        row.dims = dimension_scores(normalized[i], weights);
        row.raw_depth = raw_depth[i];
        row.raw_tokens = raw_tokens[i];
        row.answer_accuracy = accuracy[i];
        points.push_back({row.dims.cost, row.dims.ld});
        report.rows.push_back(std::move(row));
    }

    auto clusters = cluster_archetypes(points, seed);
    report.centroids = clusters.centroids;
    report.mapping = match_archetypes(clusters.centroids);
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        auto& row = report.rows[i];
        row.cluster = clusters.assignment[i];
        row.archetype = report.mapping[row.cluster];
        row.confidence = boundary_confidence(points[i], row.cluster, clusters.centroids);
    }
    return report;
}

}  // namespace logicbench
