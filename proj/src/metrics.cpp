#include "spg/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace spg {

int grid_complexity(const Grid& g, const Catalogue& cat)
{
    int best = std::numeric_limits<int>::max();
    for (const auto& p : cat.patterns())
        best = std::min(best, pattern_distance(g, p).distance + describe_complexity(cat, p, g.colors()));
    return best;
}

std::vector<TracePoint> complexity_trace(const RunLog& log, const Catalogue& cat)
{
    std::vector<TracePoint> out;
    out.reserve(log.events.size());
    Grid g = log.initial;
    for (const auto& ev : log.events) {
        if (ev.action)
            g = g.with(static_cast<std::size_t>(ev.cell), *ev.action);
        out.push_back({ev.step, grid_complexity(g, cat)});
    }
    return out;
}

std::vector<TracePoint> complexity_trace(const RunLog& log)
{
    return complexity_trace(log, *load_catalogue(log.config));
}

double desirable_fraction(const RunLog& log)
{
    if (log.events.empty())
        return 0.0;
    const auto hits = std::count_if(log.events.begin(), log.events.end(),
                                    [](const Event& e) { return e.desirable_count > 0; });
    return static_cast<double>(hits) / static_cast<double>(log.events.size());
}

std::vector<HorizonPoint> desirable_sweep(const SimConfig& base, std::span<const int> horizons,
                                          std::span<const std::uint64_t> seeds, unsigned threads)
{
    if (horizons.empty() || seeds.empty())
        throw InvalidInput("sweep needs at least one horizon and one seed");

    const std::size_t jobs = horizons.size() * seeds.size();
    std::vector<double> fraction(jobs, 0.0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < jobs; j = next++) {
            SimConfig cfg = base;
            cfg.horizon = horizons[j / seeds.size()];
            cfg.seed = seeds[j % seeds.size()];
            fraction[j] = desirable_fraction(run(cfg));
        }
    };
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    pool.clear();

    std::vector<HorizonPoint> out;
    for (std::size_t h = 0; h < horizons.size(); ++h) {
        HorizonPoint p;
        p.horizon = horizons[h];
        p.seeds = seeds.size();
        const double* f = fraction.data() + h * seeds.size();
        p.mean = std::accumulate(f, f + seeds.size(), 0.0) / seeds.size();
        double ss = 0.0;
        for (std::size_t s = 0; s < seeds.size(); ++s)
            ss += (f[s] - p.mean) * (f[s] - p.mean);
        p.stddev = seeds.size() > 1 ? std::sqrt(ss / (seeds.size() - 1)) : 0.0;
        p.std_err = p.stddev / std::sqrt(static_cast<double>(seeds.size()));
        out.push_back(p);
    }
    return out;
}

std::vector<Visit> visited_sequence(const RunLog& log, const Catalogue& cat)
{
    std::vector<Visit> out;
    out.reserve(log.reached.size());
    for (const auto& id : log.reached) {
        const auto b = cat.parse_state_id(id, log.config.colors);
        const auto& p = cat[b.pattern];
        out.push_back({p.name, p.shape, p.config, b.background()});
    }
    return out;
}

std::vector<Visit> visited_sequence(const RunLog& log)
{
    return visited_sequence(log, *load_catalogue(log.config));
}

void TransitionMatrix::add(const Visit& from, const Visit& to)
{
    const auto rel = from.background == to.background ? Background::Same : Background::Opposite;
    ++counts_[shape_index(from.shape)][shape_index(to.shape)][static_cast<int>(rel)];
}

long TransitionMatrix::count(Shape from, Shape to, Background rel) const
{
    return counts_[shape_index(from)][shape_index(to)][static_cast<int>(rel)];
}

long TransitionMatrix::count(Shape from, Shape to) const
{
    return count(from, to, Background::Same) + count(from, to, Background::Opposite);
}

long TransitionMatrix::row_total(Shape from) const
{
    long total = 0;
    for (Shape to : all_shapes)
        total += count(from, to);
    return total;
}

double TransitionMatrix::frequency(Shape from, Shape to, Background rel) const
{
    const long n = row_total(from);
    return n ? static_cast<double>(count(from, to, rel)) / n : 0.0;
}

double TransitionMatrix::frequency(Shape from, Shape to) const
{
    const long n = row_total(from);
    return n ? static_cast<double>(count(from, to)) / n : 0.0;
}

double TransitionMatrix::std_error(Shape from, Shape to, Background rel) const
{
    const long n = row_total(from);
    if (!n)
        return 0.0;
    const double p = frequency(from, to, rel);
    return std::sqrt(p * (1.0 - p) / n);
}

TransitionMatrix transition_matrix(std::span<const std::vector<Visit>> sequences,
                                   const TransitionOptions& opts)
{
    TransitionMatrix m;
    m.min_transitions = opts.min_transitions;
    for (const auto& seq : sequences) {
        const Visit* prev = nullptr;
        for (const auto& v : seq) {
            if (prev && opts.merge_repeats && prev->shape == v.shape &&
                prev->background == v.background)
                continue;
            if (prev)
                m.add(*prev, v);
            prev = &v;
        }
    }
    return m;
}

TransitionMatrix transition_matrix(std::span<const RunLog> logs, const TransitionOptions& opts)
{
    std::vector<std::vector<Visit>> seqs;
    for (const auto& log : logs)
        seqs.push_back(visited_sequence(log));
    return transition_matrix(seqs, opts);
}

namespace {

const char* title(Shape s)
{
    switch (s) {
    case Shape::Plain: return "Plain";
    case Shape::Diagonal: return "Diagonal";
    case Shape::Triangle: return "Triangle";
    case Shape::Line: return "Line";
    }
    return "?";
}

std::string fixed2(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

} // namespace

std::string format_transition_table(const TransitionMatrix& m)
{
    std::ostringstream out;
    out << "Shape taken as reference";
    for (Shape to : all_shapes)
        out << '\t' << title(to);
    out << '\n';
    for (Shape from : all_shapes) {
        out << title(from) << " (" << m.row_total(from) << " transitions)";
        if (m.low_confidence(from))
            out << " [low confidence]";
        for (Shape to : all_shapes)
            out << '\t' << fixed2(m.frequency(from, to))
                << " bc: " << fixed2(m.frequency(from, to, Background::Same))
                << " 1-bc: " << fixed2(m.frequency(from, to, Background::Opposite));
        out << '\n';
    }
    return out.str();
}

std::string transition_csv(const TransitionMatrix& m)
{
    std::ostringstream out;
    out << "from,to,relation,count,frequency\n";
    out.precision(17);
    for (Shape from : all_shapes)
        for (Shape to : all_shapes)
            for (auto rel : {Background::Same, Background::Opposite})
                out << shape_name(from) << ',' << shape_name(to) << ','
                    << (rel == Background::Same ? "bc" : "1-bc") << ',' << m.count(from, to, rel)
                    << ',' << m.frequency(from, to, rel) << '\n';
    return out.str();
}

Periodogram periodogram(std::span<const double> series)
{
    const std::size_t n = series.size();
    if (n < min_periodogram_length)
        throw InvalidInput("periodogram needs at least " + std::to_string(min_periodogram_length) +
                           " samples, got " + std::to_string(n));
    const double mean = std::accumulate(series.begin(), series.end(), 0.0) / n;

    Periodogram pg;
    const std::size_t half = n / 2;
    pg.frequency.reserve(half);
    pg.power.reserve(half);
    // twiddle[j] = exp(-2 pi i j / n); indexing by (k * t) mod n keeps the
    // phase exact for long series.
    std::vector<std::complex<double>> twiddle(n);
    for (std::size_t j = 0; j < n; ++j)
        twiddle[j] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(j) / n);
    for (std::size_t k = 1; k <= half; ++k) {
        std::complex<double> acc{0.0, 0.0};
        std::size_t j = 0;
        for (std::size_t t = 0; t < n; ++t) {
            acc += (series[t] - mean) * twiddle[j];
            j += k;
            if (j >= n)
                j -= n;
        }
        pg.frequency.push_back(static_cast<double>(k) / n);
        pg.power.push_back(std::norm(acc) / n);
    }
    const double total = std::accumulate(pg.power.begin(), pg.power.end(), 0.0);
    pg.peak = static_cast<std::size_t>(
        std::max_element(pg.power.begin(), pg.power.end()) - pg.power.begin());
    pg.dominance = total > 0.0 ? pg.power[pg.peak] / total : 0.0;
    return pg;
}

std::vector<double> shape_series(std::span<const Visit> visits)
{
    std::vector<double> out;
    out.reserve(visits.size());
    for (const auto& v : visits)
        out.push_back(shape_index(v.shape));
    return out;
}

Periodogram periodogram(std::span<const Visit> visits)
{
    const auto s = shape_series(visits);
    return periodogram(std::span<const double>(s));
}

NullBand dominance_null(std::span<const double> series, int trials, std::uint64_t seed)
{
    if (trials < 40)
        throw InvalidInput("null calibration needs at least 40 trials");
    std::mt19937_64 rng(seed);
    std::vector<double> shuffled(series.begin(), series.end());
    NullBand band;
    band.samples.reserve(static_cast<std::size_t>(trials));
    for (int i = 0; i < trials; ++i) {
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        band.samples.push_back(periodogram(std::span<const double>(shuffled)).dominance);
    }
    auto sorted = band.samples;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * (sorted.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
    };
    band.lower = quantile(0.025);
    band.median = quantile(0.5);
    band.upper = quantile(0.975);
    return band;
}

} // namespace spg
