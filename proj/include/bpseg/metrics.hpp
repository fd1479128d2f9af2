// Copyright 2026 the bpseg authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Partition agreement metrics (ARI, NMI) and the sliding-window boundary
// metrics Pk and WindowDiff, which are only defined when the reference
// segmentation is contiguous.

#ifndef BPSEG_METRICS_HPP
#define BPSEG_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bpseg/bp.hpp"
#include "bpseg/error.hpp"

namespace bpseg {

/// Predicted and reference labels for the same n items.
struct LabelPair {
    std::span<const Label> predicted;
    std::span<const Label> gold;

    LabelPair(std::span<const Label> p, std::span<const Label> g) : predicted(p), gold(g) {
        if (predicted.size() != gold.size()) {
            throw ShapeError("label vectors differ in length (" + std::to_string(predicted.size()) + " vs " +
                             std::to_string(gold.size()) + ")");
        }
        if (predicted.empty()) {
            throw ShapeError("label vectors are empty");
        }
    }

    std::size_t size() const noexcept { return gold.size(); }
};

/// Contingency counts between two labelings with dense row/column indices.
struct Contingency {
    std::vector<std::vector<double>> cells;  // [predicted cluster][gold cluster]
    std::vector<double> row_sums;
    std::vector<double> col_sums;
    double n = 0.0;
};

inline std::vector<std::size_t> densify(std::span<const Label> labels) {
    std::map<Label, std::size_t> ids;
    std::vector<std::size_t> out;
    out.reserve(labels.size());
    for (Label l : labels) {
        out.push_back(ids.try_emplace(l, ids.size()).first->second);
    }
    return out;
}

inline Contingency contingency(const LabelPair& p) {
    const auto a = densify(p.predicted);
    const auto b = densify(p.gold);
    const std::size_t ra = a.empty() ? 0 : *std::max_element(a.begin(), a.end()) + 1;
    const std::size_t cb = b.empty() ? 0 : *std::max_element(b.begin(), b.end()) + 1;
    Contingency t;
    t.cells.assign(ra, std::vector<double>(cb, 0.0));
    t.row_sums.assign(ra, 0.0);
    t.col_sums.assign(cb, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        t.cells[a[i]][b[i]] += 1.0;
        t.row_sums[a[i]] += 1.0;
        t.col_sums[b[i]] += 1.0;
    }
    t.n = static_cast<double>(a.size());
    return t;
}

namespace detail {

inline double choose2(double x) noexcept { return x * (x - 1.0) / 2.0; }

}  // namespace detail

/// Hubert-Arabie adjusted Rand index. Returns 1 when the chance-corrected
/// denominator vanishes, which only happens for identical trivial partitions
/// (all in one cluster, or all singletons).
inline double ari(const LabelPair& p) {
    const Contingency t = contingency(p);
    double index = 0.0;
    for (const auto& row : t.cells) {
        for (double c : row) {
            index += detail::choose2(c);
        }
    }
    double sum_a = 0.0;
    for (double a : t.row_sums) {
        sum_a += detail::choose2(a);
    }
    double sum_b = 0.0;
    for (double b : t.col_sums) {
        sum_b += detail::choose2(b);
    }
    const double pairs = detail::choose2(t.n);
    if (pairs == 0.0) {
        return 1.0;
    }
    const double expected = sum_a * sum_b / pairs;
    const double max_index = 0.5 * (sum_a + sum_b);
    const double denom = max_index - expected;
    if (denom == 0.0) {
        return 1.0;
    }
    return (index - expected) / denom;
}

inline double ari(std::span<const Label> predicted, std::span<const Label> gold) { return ari(LabelPair(predicted, gold)); }

enum class NmiNormalization { arithmetic, geometric, min, max };

/// Mutual information over the normalized entropies, natural logs. Two
/// single-cluster labelings score 1; a single-cluster labeling against any
/// other scores 0.
inline double nmi(const LabelPair& p, NmiNormalization norm = NmiNormalization::arithmetic) {
    const Contingency t = contingency(p);
    const auto entropy = [&](const std::vector<double>& sums) {
        double h = 0.0;
        for (double c : sums) {
            if (c > 0.0) {
                const double q = c / t.n;
                h -= q * std::log(q);
            }
        }
        return h;
    };
    const double ha = entropy(t.row_sums);
    const double hb = entropy(t.col_sums);
    if (t.row_sums.size() == 1 && t.col_sums.size() == 1) {
        return 1.0;
    }
    if (t.row_sums.size() == 1 || t.col_sums.size() == 1) {
        return 0.0;
    }
    double mi = 0.0;
    for (std::size_t r = 0; r < t.cells.size(); ++r) {
        for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
            const double nij = t.cells[r][c];
            if (nij > 0.0) {
                mi += (nij / t.n) * std::log(t.n * nij / (t.row_sums[r] * t.col_sums[c]));
            }
        }
    }
    double denom = 0.0;
    switch (norm) {
        case NmiNormalization::arithmetic:
            denom = 0.5 * (ha + hb);
            break;
        case NmiNormalization::geometric:
            denom = std::sqrt(ha * hb);
            break;
        case NmiNormalization::min:
            denom = std::min(ha, hb);
            break;
        case NmiNormalization::max:
            denom = std::max(ha, hb);
            break;
    }
    return std::clamp(mi / denom, 0.0, 1.0);
}

inline double nmi(std::span<const Label> predicted, std::span<const Label> gold,
                  NmiNormalization norm = NmiNormalization::arithmetic) {
    return nmi(LabelPair(predicted, gold), norm);
}

/// True when every label occupies a single run of consecutive positions.
inline bool is_contiguous(std::span<const Label> labels) {
    std::map<Label, bool> closed;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0 && labels[i] != labels[i - 1]) {
            closed[labels[i - 1]] = true;
        }
        if (closed.contains(labels[i])) {
            return false;
        }
    }
    return true;
}

/// boundary[i] is true when items i and i + 1 carry different labels.
inline std::vector<bool> boundaries(std::span<const Label> labels) {
    std::vector<bool> out(labels.size() > 0 ? labels.size() - 1 : 0);
    for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
        out[i] = labels[i] != labels[i + 1];
    }
    return out;
}

/// Half the mean reference segment length, rounded, at least 2.
inline std::size_t default_window(std::span<const Label> gold) {
    const auto b = boundaries(gold);
    const std::size_t segments = 1 + static_cast<std::size_t>(std::count(b.begin(), b.end(), true));
    const double mean_len = static_cast<double>(gold.size()) / static_cast<double>(segments);
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(mean_len / 2.0)));
}

namespace detail {

struct WindowSetup {
    std::vector<std::size_t> pred_prefix;  // boundaries among the first i gaps
    std::vector<std::size_t> gold_prefix;
    std::size_t window = 0;
    std::size_t probes = 0;
};

inline WindowSetup window_setup(const LabelPair& p, std::optional<std::size_t> window, const char* name) {
    if (!is_contiguous(p.gold)) {
        throw MetricInapplicableError(std::string(name) + " requires a contiguous reference segmentation");
    }
    WindowSetup s;
    const std::size_t n = p.size();
    s.window = window.value_or(default_window(p.gold));
    if (s.window == 0) {
        throw ConfigError(std::string(name) + ": window must be >= 1");
    }
    s.window = std::min(s.window, n > 1 ? n - 1 : std::size_t{1});
    s.probes = n > s.window ? n - s.window : 0;
    const auto bp = boundaries(p.predicted);
    const auto bg = boundaries(p.gold);
    s.pred_prefix.assign(n, 0);
    s.gold_prefix.assign(n, 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        s.pred_prefix[i + 1] = s.pred_prefix[i] + (bp[i] ? 1 : 0);
        s.gold_prefix[i + 1] = s.gold_prefix[i] + (bg[i] ? 1 : 0);
    }
    return s;
}

}  // namespace detail

/// Pk: share of probes (i, i + w) on which prediction and reference disagree
/// about whether both ends lie in the same segment. Predicted labels are read
/// as boundaries wherever adjacent labels differ.
inline double pk(const LabelPair& p, std::optional<std::size_t> window = std::nullopt) {
    const auto s = detail::window_setup(p, window, "Pk");
    if (s.probes == 0) {
        return 0.0;
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < s.probes; ++i) {
        const bool pred_same = s.pred_prefix[i + s.window] == s.pred_prefix[i];
        const bool gold_same = s.gold_prefix[i + s.window] == s.gold_prefix[i];
        errors += pred_same != gold_same ? 1 : 0;
    }
    return static_cast<double>(errors) / static_cast<double>(s.probes);
}

/// WindowDiff: share of windows whose boundary counts differ.
inline double window_diff(const LabelPair& p, std::optional<std::size_t> window = std::nullopt) {
    const auto s = detail::window_setup(p, window, "WindowDiff");
    if (s.probes == 0) {
        return 0.0;
    }
    std::size_t errors = 0;
    for (std::size_t i = 0; i < s.probes; ++i) {
        const std::size_t pred_count = s.pred_prefix[i + s.window] - s.pred_prefix[i];
        const std::size_t gold_count = s.gold_prefix[i + s.window] - s.gold_prefix[i];
        errors += pred_count != gold_count ? 1 : 0;
    }
    return static_cast<double>(errors) / static_cast<double>(s.probes);
}

struct MetricsReport {
    double ari = 0.0;
    double nmi = 0.0;
    std::optional<double> pk;
    std::optional<double> window_diff;
    std::size_t n = 0;
};

/// ARI and NMI, plus Pk / WindowDiff when requested and the reference is
/// contiguous.
inline MetricsReport evaluate(std::span<const Label> predicted, std::span<const Label> gold, bool window_metrics = true,
                              std::optional<std::size_t> window = std::nullopt) {
    const LabelPair p(predicted, gold);
    MetricsReport r;
    r.n = p.size();
    r.ari = ari(p);
    r.nmi = nmi(p);
    if (window_metrics && is_contiguous(gold)) {
        r.pk = pk(p, window);
        r.window_diff = window_diff(p, window);
    }
    return r;
}

struct MetricsSummary {
    MetricsReport mean;
    MetricsReport std;
    std::size_t count = 0;
};

/// Per-metric mean and population standard deviation. Optional metrics are
/// summarized over the reports that carry them. `n` of the mean is the mean
/// item count (rounded); `n` of the std is the report count.
inline MetricsSummary aggregate(std::span<const MetricsReport> reports) {
    if (reports.empty()) {
        throw ConfigError("aggregate: no reports");
    }
    const auto summarize = [](const std::vector<double>& xs) -> std::pair<double, double> {
        double mean = 0.0;
        for (double x : xs) {
            mean += x;
        }
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) {
            var += (x - mean) * (x - mean);
        }
        return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
    };

    std::vector<double> aris, nmis, pks, wds;
    double items = 0.0;
    for (const auto& r : reports) {
        aris.push_back(r.ari);
        nmis.push_back(r.nmi);
        if (r.pk) {
            pks.push_back(*r.pk);
        }
        if (r.window_diff) {
            wds.push_back(*r.window_diff);
        }
        items += static_cast<double>(r.n);
    }
    MetricsSummary s;
    s.count = reports.size();
    std::tie(s.mean.ari, s.std.ari) = summarize(aris);
    std::tie(s.mean.nmi, s.std.nmi) = summarize(nmis);
    if (!pks.empty()) {
        const auto [m, sd] = summarize(pks);
        s.mean.pk = m;
        s.std.pk = sd;
    }
    if (!wds.empty()) {
        const auto [m, sd] = summarize(wds);
        s.mean.window_diff = m;
        s.std.window_diff = sd;
    }
    s.mean.n = static_cast<std::size_t>(std::lround(items / static_cast<double>(reports.size())));
    s.std.n = reports.size();
    return s;
}

}  // namespace bpseg

#endif  // BPSEG_METRICS_HPP
