#include "pmms/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace pmms {

namespace {

void sort_candidates(std::vector<scored_candidate>& v) {
    std::sort(v.begin(), v.end(), [](const scored_candidate& a, const scored_candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.ap < b.ap;
    });
}

} // namespace

std::vector<mobility_rule> mine_rules(const path_history& history, std::int64_t min_support,
                                      double min_confidence, int max_head_len) {
    if (min_support < 1) throw config_error("mine_rules: min_support must be >= 1");
    if (max_head_len < 1) throw config_error("mine_rules: max_head_len must be >= 1");
    if (history.paths.empty()) throw config_error("mine_rules: history is empty");

    // occurrence counts of every head and of every head+tail extension
    std::map<std::vector<ap_id>, std::int64_t> head_count;
    std::map<std::vector<ap_id>, std::map<ap_id, std::int64_t>> tail_count;

    for (const auto& path : history.paths) {
        const auto aps = path.ap_sequence();
        const int n = static_cast<int>(aps.size());
        for (int i = 0; i < n; ++i) {
            std::vector<ap_id> head;
            for (int len = 1; len <= max_head_len && i + len <= n; ++len) {
                head.push_back(aps[static_cast<std::size_t>(i + len - 1)]);
                ++head_count[head];
                if (i + len < n) ++tail_count[head][aps[static_cast<std::size_t>(i + len)]];
            }
        }
    }

    std::vector<mobility_rule> rules;
    for (const auto& [head, tails] : tail_count) {
        const auto total = head_count.at(head);
        for (const auto& [tail, cnt] : tails) {
            const double confidence = static_cast<double>(cnt) / static_cast<double>(total);
            if (cnt >= min_support && confidence >= min_confidence)
                rules.push_back({head, tail, cnt, confidence});
        }
    }
    return rules; // already ordered by (head, tail) via the maps
}

double rule_score(int head_len, double confidence, std::int64_t support) {
    constexpr double scale = 1048576.0; // 2^20
    const double q = std::floor(confidence * scale);
    const double s = static_cast<double>(std::min<std::int64_t>(support, 1048575));
    return (static_cast<double>(head_len) * scale + q) * scale + s;
}

rule_index::rule_index(const std::vector<mobility_rule>& rules) : n_rules_(rules.size()) {
    for (const auto& r : rules) {
        by_head_[r.head].push_back(r);
        max_head_len_ = std::max(max_head_len_, static_cast<int>(r.head.size()));
    }
}

ranked_prediction rule_index::predict(std::span<const ap_id> path_prefix,
                                      std::span<const ap_id> candidates) const {
    ranked_prediction out;
    if (path_prefix.empty()) return out;

    std::map<ap_id, double> best;
    const int prefix_len = static_cast<int>(path_prefix.size());
    for (int len = 1; len <= std::min(max_head_len_, prefix_len); ++len) {
        const std::vector<ap_id> head(path_prefix.end() - len, path_prefix.end());
        const auto it = by_head_.find(head);
        if (it == by_head_.end()) continue;
        for (const auto& rule : it->second) {
            if (!candidates.empty() &&
                std::find(candidates.begin(), candidates.end(), rule.tail) == candidates.end())
                continue;
            const double score = rule_score(len, rule.confidence, rule.support);
            const auto slot = best.find(rule.tail);
            if (slot == best.end() || score > slot->second) best[rule.tail] = score;
        }
    }

    for (const auto& [ap, score] : best) out.candidates.push_back({ap, score});
    sort_candidates(out.candidates);
    out.decisive = !out.candidates.empty();
    return out;
}

ranked_prediction predict_dm(const std::vector<mobility_rule>& rules,
                             std::span<const ap_id> path_prefix,
                             std::span<const ap_id> candidates) {
    return rule_index(rules).predict(path_prefix, candidates);
}

ranked_prediction predict_lt(std::span<const rssi_sample> samples, const prediction_config& cfg) {
    ranked_prediction out;
    for (const auto& s : samples) out.candidates.push_back({s.ap, s.rssi});
    sort_candidates(out.candidates);
    if (out.candidates.empty()) return out;

    const double top = out.candidates[0].score;
    if (top < cfg.weak_floor) return out; // weak or absent signal
    if (out.candidates.size() == 1) {
        out.decisive = true;
        return out;
    }
    const double second = out.candidates[1].score;
    if (top == second) return out; // tie, no clear leader
    out.decisive = (top - second) / top >= cfg.decisiveness_margin;
    return out;
}

ranked_prediction predict_ltdmps(const ranked_prediction& lt, const ranked_prediction& dm,
                                 bool lt_observed_wrong) {
    if (lt.decisive && !lt_observed_wrong) return lt;
    return dm;
}

transition_matrix transition_matrix::build(const path_history& history) {
    transition_matrix tm;
    for (const auto& path : history.paths) {
        for (std::size_t i = 1; i < path.steps.size(); ++i)
            ++tm.counts_[path.steps[i - 1].ap][path.steps[i].ap];
    }
    return tm;
}

std::int64_t transition_matrix::count(ap_id from, ap_id to) const {
    const auto row = counts_.find(from);
    if (row == counts_.end()) return 0;
    const auto it = row->second.find(to);
    return it == row->second.end() ? 0 : it->second;
}

std::int64_t transition_matrix::row_total(ap_id from) const {
    const auto row = counts_.find(from);
    if (row == counts_.end()) return 0;
    std::int64_t total = 0;
    for (const auto& [to, c] : row->second) total += c;
    return total;
}

double transition_matrix::probability(ap_id from, ap_id to) const {
    const auto total = row_total(from);
    return total == 0 ? 0.0 : static_cast<double>(count(from, to)) / static_cast<double>(total);
}

std::vector<scored_candidate> transition_matrix::ranked_row(ap_id from) const {
    std::vector<scored_candidate> out;
    const auto row = counts_.find(from);
    if (row == counts_.end()) return out;
    const double total = static_cast<double>(row_total(from));
    std::vector<std::pair<ap_id, std::int64_t>> entries(row->second.begin(), row->second.end());
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    for (const auto& [ap, c] : entries) out.push_back({ap, static_cast<double>(c) / total});
    return out;
}

ranked_prediction predict_tm(const transition_matrix& tm, ap_id current, int x) {
    if (x < 1) throw config_error("predict_tm: x must be >= 1");
    ranked_prediction out;
    out.candidates = tm.ranked_row(current);
    if (static_cast<int>(out.candidates.size()) > x)
        out.candidates.resize(static_cast<std::size_t>(x));
    out.decisive = !out.candidates.empty();
    return out;
}

ap_id predict_ip(ap_id current, const grid_topology& topo, rng& rand) {
    const auto& nbrs = topo.ap_neighbors(current);
    return nbrs[static_cast<std::size_t>(rand.uniform_int(0, static_cast<int>(nbrs.size()) - 1))];
}

std::optional<int> frequency_rank(const ranked_prediction& pred, ap_id actual) {
    for (std::size_t i = 0; i < pred.candidates.size(); ++i) {
        if (pred.candidates[i].ap == actual) return static_cast<int>(i) + 1;
    }
    return std::nullopt;
}

std::optional<double> path_accuracy(std::span<const ranked_prediction> predictions,
                                    std::span<const ap_id> actuals) {
    if (predictions.size() != actuals.size())
        throw std::invalid_argument("path_accuracy: length mismatch");
    if (predictions.empty()) return std::nullopt;
    int correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const auto rank = frequency_rank(predictions[i], actuals[i]);
        if (rank && *rank == 1) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(predictions.size());
}

void save_rules(std::span<const mobility_rule> rules, std::ostream& out) {
    out << "head;tail;support;confidence\n";
    char buf[64];
    for (const auto& r : rules) {
        for (std::size_t i = 0; i < r.head.size(); ++i) {
            if (i > 0) out << "->";
            out << r.head[i];
        }
        std::snprintf(buf, sizeof buf, ";%d;%lld;%.6f", r.tail,
                      static_cast<long long>(r.support), r.confidence);
        out << buf << '\n';
    }
}

} // namespace pmms
