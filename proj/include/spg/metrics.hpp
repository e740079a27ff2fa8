#pragma once

#include "spg/engine.hpp"
#include "spg/patterns.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace spg {

// ---------------------------------------------------------------------------
// Complexity trace

struct TracePoint {
    long step = 0;
    int value = 0; // min over patterns of (distance + description bits)
};

/// Description complexity of a grid relative to its closest basic state.
int grid_complexity(const Grid& g, const Catalogue& cat);

/// One point per event, measured on the grid after that event's action.
std::vector<TracePoint> complexity_trace(const RunLog& log, const Catalogue& cat);
std::vector<TracePoint> complexity_trace(const RunLog& log);

// ---------------------------------------------------------------------------
// Desirable-time fraction

/// Share of events at which at least one candidate had positive desirability.
double desirable_fraction(const RunLog& log);

struct HorizonPoint {
    int horizon = 0;
    double mean = 0.0;
    double stddev = 0.0;  // across seeds
    double std_err = 0.0; // stddev / sqrt(seeds)
    std::size_t seeds = 0;
};

/// Runs `base` once per (horizon, seed) and averages desirable_fraction over
/// seeds. Worlds run on up to `threads` threads (0 = hardware concurrency);
/// the result does not depend on the thread count.
std::vector<HorizonPoint> desirable_sweep(const SimConfig& base, std::span<const int> horizons,
                                          std::span<const std::uint64_t> seeds,
                                          unsigned threads = 0);

// ---------------------------------------------------------------------------
// Visited shapes

struct Visit {
    std::string pattern;
    Shape shape = Shape::Plain;
    int config = 0;
    Color background = 0;
};

std::vector<Visit> visited_sequence(const RunLog& log, const Catalogue& cat);
std::vector<Visit> visited_sequence(const RunLog& log);

// ---------------------------------------------------------------------------
// Shape-to-shape transitions

enum class Background { Same = 0, Opposite = 1 };

struct TransitionOptions {
    /// Consecutive visits with the same shape class and background are one
    /// visit: they are indistinguishable in the (shape, background) sequence.
    bool merge_repeats = true;
    /// Rows with fewer transitions are flagged low-confidence.
    long min_transitions = 100;
};

class TransitionMatrix {
public:
    void add(const Visit& from, const Visit& to);

    long count(Shape from, Shape to, Background rel) const;
    long count(Shape from, Shape to) const;
    long row_total(Shape from) const;

    /// Fractions of the from-row; zero for an empty row.
    double frequency(Shape from, Shape to, Background rel) const;
    double frequency(Shape from, Shape to) const;

    /// Binomial standard error of frequency(from, to, rel).
    double std_error(Shape from, Shape to, Background rel) const;

    bool low_confidence(Shape from) const { return row_total(from) < min_transitions; }
    long min_transitions = 100;

private:
    std::array<std::array<std::array<long, 2>, 4>, 4> counts_{};
};

TransitionMatrix transition_matrix(std::span<const std::vector<Visit>> sequences,
                                   const TransitionOptions& opts = {});
TransitionMatrix transition_matrix(std::span<const RunLog> logs,
                                   const TransitionOptions& opts = {});

/// Tab-separated shape-by-shape table:
/// "<Shape> (<n> transitions)" then per next shape "<f> bc: <f> 1-bc: <f>".
std::string format_transition_table(const TransitionMatrix& m);
/// from,to,relation,count,frequency rows.
std::string transition_csv(const TransitionMatrix& m);

// ---------------------------------------------------------------------------
// Periodogram

struct Periodogram {
    std::vector<double> frequency; // cycles per visit, k / N for k = 1..N/2
    std::vector<double> power;     // |X_k|^2 / N of the mean-removed series
    std::size_t peak = 0;          // index into power of the largest value
    double dominance = 0.0;        // power[peak] / sum(power)
};

inline constexpr std::size_t min_periodogram_length = 64;

/// Plain DFT, no window. Requires at least min_periodogram_length samples.
Periodogram periodogram(std::span<const double> series);
/// Shape classes mapped to 0..3.
Periodogram periodogram(std::span<const Visit> visits);

struct NullBand {
    double lower = 0.0;  // 2.5 % quantile
    double median = 0.0;
    double upper = 0.0;  // 97.5 % quantile
    std::vector<double> samples;

    bool contains(double x) const { return x >= lower && x <= upper; }
};

/// Dominance ratios of `trials` random reorderings of `series`: the spread
/// expected when the same values carry no temporal order.
NullBand dominance_null(std::span<const double> series, int trials, std::uint64_t seed);

std::vector<double> shape_series(std::span<const Visit> visits);

} // namespace spg
