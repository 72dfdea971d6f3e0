#ifndef PMMS_PREDICTION_HPP
#define PMMS_PREDICTION_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pmms/mobility.hpp"
#include "pmms/radio.hpp"
#include "pmms/rng.hpp"
#include "pmms/topology.hpp"

namespace pmms {

struct mobility_rule {
    std::vector<ap_id> head; // contiguous AP pattern
    ap_id tail = 0;          // predicted successor
    std::int64_t support = 0;
    double confidence = 0.0; // support(head+tail) / support(head)
};

struct scored_candidate {
    ap_id ap = 0;
    double score = 0.0;
};

struct ranked_prediction {
    std::vector<scored_candidate> candidates; // descending score, ties broken by ascending ap
    bool decisive = false;

    bool empty() const { return candidates.empty(); }
    ap_id top() const { return candidates.empty() ? -1 : candidates.front().ap; }
};

struct prediction_config {
    double decisiveness_margin = 0.10; // relative (top - second) / top
    double weak_floor = 1.427e-8;      // W; receive threshold
};

// exhaustive contiguous-pattern miner over the corpus: every occurrence of a
// head of length <= max_head_len followed by a tail counts once
std::vector<mobility_rule> mine_rules(const path_history& history, std::int64_t min_support,
                                      double min_confidence, int max_head_len);

// lexicographic (head length, confidence, support) folded into one double;
// factors are integers below 2^53 so the composite is exact
double rule_score(int head_len, double confidence, std::int64_t support);

class rule_index {
public:
    rule_index() = default;
    explicit rule_index(const std::vector<mobility_rule>& rules);

    // rules whose head is a suffix of path_prefix and whose tail is in
    // candidates (unrestricted when candidates is empty); each tail keeps its
    // best (longest head, confidence, support) score
    ranked_prediction predict(std::span<const ap_id> path_prefix,
                              std::span<const ap_id> candidates) const;

    std::size_t size() const { return n_rules_; }

private:
    std::map<std::vector<ap_id>, std::vector<mobility_rule>> by_head_;
    int max_head_len_ = 0;
    std::size_t n_rules_ = 0;
};

ranked_prediction predict_dm(const std::vector<mobility_rule>& rules,
                             std::span<const ap_id> path_prefix,
                             std::span<const ap_id> candidates);

// rank sampled APs by rssi; decisive only with a clear, non-weak leader
ranked_prediction predict_lt(std::span<const rssi_sample> samples, const prediction_config& cfg);

// location tracking first, data mining fallback
ranked_prediction predict_ltdmps(const ranked_prediction& lt, const ranked_prediction& dm,
                                 bool lt_observed_wrong);

class transition_matrix {
public:
    static transition_matrix build(const path_history& history);

    std::int64_t count(ap_id from, ap_id to) const;
    double probability(ap_id from, ap_id to) const; // row-normalized
    std::int64_t row_total(ap_id from) const;

    // full outgoing row ordered by count desc, ap asc; score = probability
    std::vector<scored_candidate> ranked_row(ap_id from) const;

private:
    std::map<ap_id, std::map<ap_id, std::int64_t>> counts_;
};

ranked_prediction predict_tm(const transition_matrix& tm, ap_id current, int x);

// uniform draw over the full neighbor set of the current AP
ap_id predict_ip(ap_id current, const grid_topology& topo, rng& rand);

// 1-based position of actual among the candidates; nullopt when unlisted
std::optional<int> frequency_rank(const ranked_prediction& pred, ap_id actual);

// 100 * (#rank-1 transitions) / (#transitions); nullopt when there are none
std::optional<double> path_accuracy(std::span<const ranked_prediction> predictions,
                                    std::span<const ap_id> actuals);

// `head;tail;support;confidence` with head APs joined by `->`
void save_rules(std::span<const mobility_rule> rules, std::ostream& out);

} // namespace pmms

#endif
