/**
 * Copyright 2026 the fsazip authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fsazip/errors.hpp"

namespace fsazip {

/// One labeled arc. States are 0-based, labels live in [1, m]; label 0 is
/// reserved. A directed graph is the m = 1 case.
struct Transition {
    std::uint32_t src;
    std::uint32_t label;
    std::uint32_t dst;

    friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Comparator for the canonical per-state order: destination ascending,
/// label breaking ties. This is the order the compressor parses.
inline bool dst_label_less(const Transition& a, const Transition& b) {
    if (a.dst != b.dst) return a.dst < b.dst;
    return a.label < b.label;
}

/// Comparator for the BFS scan order: label ascending, destination breaking
/// ties.
inline bool label_dst_less(const Transition& a, const Transition& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.dst < b.dst;
}

/// An unweighted finite automaton: n states 0..n-1, alphabet {1..m}, a set
/// of transitions, one initial state, and a set of final states. Immutable
/// after construction; all read accessors are safe to share across threads.
class Automaton {
public:
    Automaton(std::uint32_t n, std::uint32_t m, std::uint32_t initial,
              std::vector<Transition> transitions, std::vector<std::uint32_t> finals)
        : n_(n), m_(m), initial_(initial),
          transitions_(std::move(transitions)), finals_(std::move(finals)) {
        if (n_ == 0) throw std::invalid_argument("Automaton: need at least one state");
        if (m_ == 0) throw std::invalid_argument("Automaton: alphabet size must be >= 1");
        if (initial_ >= n_) throw std::invalid_argument("Automaton: initial state out of range");
        std::sort(transitions_.begin(), transitions_.end(),
                  [](const Transition& a, const Transition& b) {
                      if (a.src != b.src) return a.src < b.src;
                      return dst_label_less(a, b);
                  });
        for (std::size_t i = 0; i < transitions_.size(); ++i) {
            const Transition& t = transitions_[i];
            if (t.src >= n_ || t.dst >= n_)
                throw std::invalid_argument("Automaton: transition endpoint out of range");
            if (t.label == 0 || t.label > m_)
                throw std::invalid_argument("Automaton: transition label out of range");
            if (i > 0 && transitions_[i - 1] == t)
                throw std::invalid_argument("Automaton: duplicate transition");
        }
        std::sort(finals_.begin(), finals_.end());
        finals_.erase(std::unique(finals_.begin(), finals_.end()), finals_.end());
        if (!finals_.empty() && finals_.back() >= n_)
            throw std::invalid_argument("Automaton: final state out of range");
        row_offsets_.assign(n_ + std::size_t{1}, 0);
        for (const Transition& t : transitions_) ++row_offsets_[t.src + 1];
        for (std::size_t q = 0; q < n_; ++q) row_offsets_[q + 1] += row_offsets_[q];
    }

    std::uint32_t num_states() const { return n_; }
    std::uint32_t alphabet_size() const { return m_; }
    std::uint32_t initial() const { return initial_; }
    std::uint64_t num_transitions() const { return transitions_.size(); }

    /// All transitions, sorted by (src, dst, label).
    const std::vector<Transition>& transitions() const { return transitions_; }

    /// Sorted unique final states.
    const std::vector<std::uint32_t>& finals() const { return finals_; }

    bool is_final(std::uint32_t q) const {
        return std::binary_search(finals_.begin(), finals_.end(), q);
    }

    /// E[q] in the canonical (dst, label) order; d_q is its size.
    std::span<const Transition> sorted_transitions(std::uint32_t q) const {
        if (q >= n_) throw std::invalid_argument("sorted_transitions: state out of range");
        return {transitions_.data() + row_offsets_[q],
                transitions_.data() + row_offsets_[q + 1]};
    }

    std::uint32_t out_degree(std::uint32_t q) const {
        return static_cast<std::uint32_t>(row_offsets_[q + 1] - row_offsets_[q]);
    }

    friend bool operator==(const Automaton& a, const Automaton& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.initial_ == b.initial_ &&
               a.transitions_ == b.transitions_ && a.finals_ == b.finals_;
    }

private:
    std::uint32_t n_;
    std::uint32_t m_;
    std::uint32_t initial_;
    std::vector<Transition> transitions_;
    std::vector<std::uint32_t> finals_;
    std::vector<std::uint64_t> row_offsets_;
};

/// A permutation of state ids (visit sequence) with its inverse.
struct StateOrdering {
    std::vector<std::uint32_t> order;  ///< order[i] = i-th state visited
    std::vector<std::uint32_t> rank;   ///< rank[q]  = position of q in order

    StateOrdering inverse() const { return StateOrdering{rank, order}; }

    bool valid() const {
        if (order.size() != rank.size()) return false;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (order[i] >= rank.size() || rank[order[i]] != i) return false;
        }
        return true;
    }
};

/// Maps (input label, output label) pairs to dense fused ids, assigned from
/// 1 upward in first-use order. Lets transducer arcs pass through the
/// single-label pipeline.
class LabelPairTable {
public:
    std::uint32_t fuse(std::uint32_t ilabel, std::uint32_t olabel) {
        auto [it, inserted] = ids_.try_emplace({ilabel, olabel},
                                               static_cast<std::uint32_t>(pairs_.size() + 1));
        if (inserted) pairs_.emplace_back(ilabel, olabel);
        return it->second;
    }

    std::pair<std::uint32_t, std::uint32_t> unfuse(std::uint32_t id) const {
        if (id == 0 || id > pairs_.size())
            throw std::invalid_argument("LabelPairTable::unfuse: unknown id");
        return pairs_[id - 1];
    }

    std::size_t size() const { return pairs_.size(); }

private:
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

struct ParseOptions {
    bool strip_weights = false;
    bool dedupe = false;
    /// When set, 4- and 5-token arc lines are read as transducer arcs and
    /// their (ilabel, olabel) pair is fused through this table.
    LabelPairTable* pair_table = nullptr;
};

namespace detail {

inline std::int64_t parse_int_token(std::string_view tok, std::size_t line_no,
                                    const char* what) {
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw parse_error("line " + std::to_string(line_no) + ": bad " + what + " '" +
                          std::string(tok) + "'");
    return value;
}

inline std::uint32_t parse_state_token(std::string_view tok, std::size_t line_no) {
    std::int64_t v = parse_int_token(tok, line_no, "state id");
    if (v < 0 || v > INT32_MAX)
        throw parse_error("line " + std::to_string(line_no) + ": state id out of range");
    return static_cast<std::uint32_t>(v);
}

inline void check_weight_token(std::string_view tok, std::size_t line_no,
                               const ParseOptions& opt) {
    if (!opt.strip_weights)
        throw parse_error("line " + std::to_string(line_no) +
                          ": weight field present (use strip_weights to drop it)");
    try {
        std::size_t pos = 0;
        (void)std::stod(std::string(tok), &pos);
        if (pos != tok.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw parse_error("line " + std::to_string(line_no) + ": bad weight '" +
                          std::string(tok) + "'");
    }
}

}  // namespace detail

/// Parses the text format (an OpenFst/AT&T-compatible subset).
///
///   arc line:    src dst label            (acceptor)
///                src dst ilabel olabel    (transducer; needs a pair table)
///                ... weight               (trailing weight; strip_weights)
///   final line:  state [weight]
///   header:      "states N" | "alphabet M" | "initial Q"   (each optional)
///   comments:    lines starting with '#'
///
/// n is 1 + the largest state id mentioned unless declared larger; m is the
/// largest label unless declared larger; the initial state is the source of
/// the first arc unless declared. Labels must already be integers >= 1.
inline Automaton parse_text(std::string_view text, const ParseOptions& opt = {}) {
    std::vector<Transition> arcs;
    std::set<Transition> seen;
    std::set<std::uint32_t> finals;
    std::int64_t declared_n = -1, declared_m = -1, declared_initial = -1;
    std::int64_t first_src = -1;
    std::uint32_t max_state = 0, max_label = 0;
    bool mentioned = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::vector<std::string_view> toks;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        toks.clear();
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
            std::size_t start = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
            if (i > start) toks.push_back(line.substr(start, i - start));
        }
        if (toks.empty()) continue;
        if (toks[0][0] == '#') continue;

        if (toks[0] == "states" || toks[0] == "alphabet" || toks[0] == "initial") {
            if (toks.size() != 2)
                throw parse_error("line " + std::to_string(line_no) + ": header '" +
                                  std::string(toks[0]) + "' needs exactly one value");
            std::int64_t v = detail::parse_int_token(toks[1], line_no, "header value");
            std::int64_t* slot = toks[0] == "states"     ? &declared_n
                                 : toks[0] == "alphabet" ? &declared_m
                                                         : &declared_initial;
            if (*slot >= 0)
                throw parse_error("line " + std::to_string(line_no) + ": duplicate '" +
                                  std::string(toks[0]) + "' header");
            if (v < 0 || (toks[0] != "initial" && v == 0) || v > INT32_MAX)
                throw parse_error("line " + std::to_string(line_no) + ": header value out of range");
            *slot = v;
            mentioned = true;
            continue;
        }

        bool fused = opt.pair_table != nullptr && toks.size() >= 4;
        std::size_t arc_tokens = fused ? 4 : 3;
        if (toks.size() <= 2) {
            // final-state line, optionally weighted
            std::uint32_t q = detail::parse_state_token(toks[0], line_no);
            if (toks.size() == 2) detail::check_weight_token(toks[1], line_no, opt);
            finals.insert(q);
            max_state = std::max(max_state, q);
            mentioned = true;
        } else if (toks.size() == arc_tokens || toks.size() == arc_tokens + 1) {
            std::uint32_t src = detail::parse_state_token(toks[0], line_no);
            std::uint32_t dst = detail::parse_state_token(toks[1], line_no);
            std::uint32_t label;
            if (fused) {
                std::int64_t il = detail::parse_int_token(toks[2], line_no, "input label");
                std::int64_t ol = detail::parse_int_token(toks[3], line_no, "output label");
                if (il < 0 || ol < 0)
                    throw parse_error("line " + std::to_string(line_no) + ": negative label");
                label = opt.pair_table->fuse(static_cast<std::uint32_t>(il),
                                             static_cast<std::uint32_t>(ol));
            } else {
                std::int64_t l = detail::parse_int_token(toks[2], line_no, "label");
                if (l <= 0 || l > INT32_MAX)
                    throw parse_error("line " + std::to_string(line_no) +
                                      ": label must be a positive integer");
                label = static_cast<std::uint32_t>(l);
            }
            if (toks.size() == arc_tokens + 1)
                detail::check_weight_token(toks[arc_tokens], line_no, opt);
            Transition t{src, label, dst};
            if (!seen.insert(t).second) {
                if (!opt.dedupe)
                    throw parse_error("line " + std::to_string(line_no) +
                                      ": duplicate transition (use dedupe to drop duplicates)");
            } else {
                arcs.push_back(t);
            }
            if (first_src < 0) first_src = src;
            max_state = std::max({max_state, src, dst});
            max_label = std::max(max_label, label);
            mentioned = true;
        } else {
            throw parse_error("line " + std::to_string(line_no) + ": malformed line (" +
                              std::to_string(toks.size()) + " fields)");
        }
    }

    if (!mentioned) throw parse_error("empty input: no transitions, finals, or headers");
    if (declared_initial >= 0) max_state = std::max(max_state, static_cast<std::uint32_t>(declared_initial));

    std::uint32_t n = max_state + 1;
    if (declared_n >= 0) {
        if (static_cast<std::uint32_t>(declared_n) < n)
            throw parse_error("'states' header smaller than largest state id mentioned");
        n = static_cast<std::uint32_t>(declared_n);
    }
    std::uint32_t m = std::max(max_label, 1u);
    if (declared_m >= 0) {
        if (static_cast<std::uint32_t>(declared_m) < m && max_label > 0)
            throw parse_error("'alphabet' header smaller than largest label mentioned");
        m = static_cast<std::uint32_t>(declared_m);
    }
    std::uint32_t initial = declared_initial >= 0 ? static_cast<std::uint32_t>(declared_initial)
                            : first_src >= 0      ? static_cast<std::uint32_t>(first_src)
                                                  : 0;
    return Automaton(n, m, initial,
                     std::move(arcs),
                     std::vector<std::uint32_t>(finals.begin(), finals.end()));
}

/// Canonical text serialization: headers, then arcs sorted by (src, dst,
/// label), then sorted final lines. parse_text(serialize_text(a)) == a.
inline std::string serialize_text(const Automaton& a) {
    std::string out;
    out += "states " + std::to_string(a.num_states()) + "\n";
    out += "alphabet " + std::to_string(a.alphabet_size()) + "\n";
    out += "initial " + std::to_string(a.initial()) + "\n";
    for (const Transition& t : a.transitions()) {
        out += std::to_string(t.src);
        out += ' ';
        out += std::to_string(t.dst);
        out += ' ';
        out += std::to_string(t.label);
        out += '\n';
    }
    for (std::uint32_t f : a.finals()) {
        out += std::to_string(f);
        out += '\n';
    }
    return out;
}

/// BFS visit order rooted at the initial state. Destinations are enqueued
/// scanning E[q] by (label, dst); when the queue drains with states still
/// undiscovered, the smallest such id starts a new root. Deterministic.
inline StateOrdering bfs_ordering(const Automaton& a) {
    const std::uint32_t n = a.num_states();
    StateOrdering ord;
    ord.order.reserve(n);
    ord.rank.assign(n, UINT32_MAX);

    // Per-state transitions re-sorted into the (label, dst) scan order.
    std::vector<Transition> scan(a.transitions());
    std::sort(scan.begin(), scan.end(), [](const Transition& x, const Transition& y) {
        if (x.src != y.src) return x.src < y.src;
        return label_dst_less(x, y);
    });
    std::vector<std::uint64_t> offsets(n + std::size_t{1}, 0);
    for (const Transition& t : scan) ++offsets[t.src + 1];
    for (std::uint32_t q = 0; q < n; ++q) offsets[q + 1] += offsets[q];

    std::vector<bool> discovered(n, false);
    std::deque<std::uint32_t> queue;
    std::uint32_t root_scan = 0;

    discovered[a.initial()] = true;
    queue.push_back(a.initial());
    while (ord.order.size() < n) {
        if (queue.empty()) {
            while (discovered[root_scan]) ++root_scan;
            discovered[root_scan] = true;
            queue.push_back(root_scan);
        }
        std::uint32_t q = queue.front();
        queue.pop_front();
        ord.rank[q] = static_cast<std::uint32_t>(ord.order.size());
        ord.order.push_back(q);
        for (std::uint64_t i = offsets[q]; i < offsets[q + 1]; ++i) {
            std::uint32_t d = scan[i].dst;
            if (!discovered[d]) {
                discovered[d] = true;
                queue.push_back(d);
            }
        }
    }
    return ord;
}

/// Renames every state q to ord.rank[q]. The result is isomorphic to the
/// input under that mapping.
inline Automaton relabel(const Automaton& a, const StateOrdering& ord) {
    if (ord.order.size() != a.num_states() || !ord.valid())
        throw std::invalid_argument("relabel: ordering is not a valid permutation");
    std::vector<Transition> mapped;
    mapped.reserve(a.transitions().size());
    for (const Transition& t : a.transitions())
        mapped.push_back({ord.rank[t.src], t.label, ord.rank[t.dst]});
    std::vector<std::uint32_t> finals;
    finals.reserve(a.finals().size());
    for (std::uint32_t f : a.finals()) finals.push_back(ord.rank[f]);
    return Automaton(a.num_states(), a.alphabet_size(), ord.rank[a.initial()],
                     std::move(mapped), std::move(finals));
}

/// Renaming-invariant summary; equality is necessary (not sufficient) for
/// isomorphism. Used as the scalable check where exact search is off the
/// table.
struct Fingerprint {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
    std::uint64_t num_transitions = 0;
    std::vector<std::uint32_t> out_degrees;   // sorted
    std::vector<std::uint32_t> in_degrees;    // sorted
    std::vector<std::uint64_t> label_counts;  // index label-1
    std::uint32_t num_finals = 0;
    std::vector<std::uint32_t> bfs_layers;    // states at distance 0,1,... from initial
    std::uint32_t unreachable = 0;

    friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

inline Fingerprint fingerprint(const Automaton& a) {
    const std::uint32_t n = a.num_states();
    Fingerprint fp;
    fp.n = n;
    fp.m = a.alphabet_size();
    fp.num_transitions = a.num_transitions();
    fp.num_finals = static_cast<std::uint32_t>(a.finals().size());
    fp.label_counts.assign(a.alphabet_size(), 0);
    std::vector<std::uint32_t> out(n, 0), in(n, 0);
    for (const Transition& t : a.transitions()) {
        ++out[t.src];
        ++in[t.dst];
        ++fp.label_counts[t.label - 1];
    }
    fp.out_degrees = out;
    fp.in_degrees = in;
    std::sort(fp.out_degrees.begin(), fp.out_degrees.end());
    std::sort(fp.in_degrees.begin(), fp.in_degrees.end());

    // Label-blind BFS distances from the initial state.
    std::vector<std::uint32_t> dist(n, UINT32_MAX);
    std::deque<std::uint32_t> queue;
    dist[a.initial()] = 0;
    queue.push_back(a.initial());
    while (!queue.empty()) {
        std::uint32_t q = queue.front();
        queue.pop_front();
        for (const Transition& t : a.sorted_transitions(q)) {
            if (dist[t.dst] == UINT32_MAX) {
                dist[t.dst] = dist[q] + 1;
                queue.push_back(t.dst);
            }
        }
    }
    for (std::uint32_t q = 0; q < n; ++q) {
        if (dist[q] == UINT32_MAX) {
            ++fp.unreachable;
        } else {
            if (dist[q] >= fp.bfs_layers.size()) fp.bfs_layers.resize(dist[q] + 1, 0);
            ++fp.bfs_layers[dist[q]];
        }
    }
    return fp;
}

}  // namespace fsazip
