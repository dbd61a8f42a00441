#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wreathcat/algebra.hpp"
#include "wreathcat/errors.hpp"
#include "wreathcat/fusion_ring.hpp"
#include "wreathcat/partition.hpp"

namespace wreathcat {

// An element of the word monoid M: a finite word in the irreducible labels
// of the input ring. The empty word indexes the trivial representation.
using Word = std::vector<FusionRing::Label>;

struct WordOrder {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

// N-linear combination of words: an element of the fusion semiring R^+.
// Zero multiplicities are never stored; iteration order is length-then-lex.
using FormalSum = std::map<Word, std::uint64_t, WordOrder>;

inline std::string word_to_string(const Word& w) {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ',';
        out += w[i];
    }
    return out;
}

inline Word parse_word(const std::string& text) {
    Word w;
    if (text.empty()) return w;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const std::string letter = text.substr(start, comma == std::string::npos ? comma : comma - start);
        if (letter.empty()) throw ParseError("word '" + text + "' has an empty letter");
        w.push_back(letter);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return w;
}

inline void require_word(const FusionRing& ring, const Word& w) {
    for (const auto& letter : w) ring.require_label(letter);
}

// (α_1,...,α_k)‾ = (ᾱ_k,...,ᾱ_1).
inline Word word_involution(const FusionRing& ring, const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(ring.conj(*it));
    return out;
}

inline Word word_concat(const Word& a, const Word& b) {
    Word out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

// Fusion of two non-empty words: the last letter of x and the first of y
// merge into every γ ⊂ α_k ⊗ β_1 with multiplicity N_{α_k β_1}^γ.
inline FormalSum word_fusion(const FusionRing& ring, const Word& x, const Word& y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("word fusion needs non-empty operands");
    require_word(ring, x);
    require_word(ring, y);
    FormalSum out;
    for (const auto& [gamma, mult] : ring.tensor(x.back(), y.front())) {
        Word w(x.begin(), x.end() - 1);
        w.push_back(gamma);
        w.insert(w.end(), y.begin() + 1, y.end());
        out[std::move(w)] += mult;
    }
    return out;
}

// Fusion rules of the free wreath product:
//   r_x ⊗ r_y = Σ_{x=u,t; y=t̄,v} r_{u,v} ⊕ Σ_{same splittings, u,v ≠ ∅, w ∈ u.v} r_w
// with multiplicities accumulating across splittings.
inline FormalSum wreath_tensor(const FusionRing& ring, const Word& x, const Word& y) {
    require_word(ring, x);
    require_word(ring, y);
    FormalSum out;
    const std::size_t k = x.size(), l = y.size();
    for (std::size_t tlen = 0; tlen <= std::min(k, l); ++tlen) {
        const Word u(x.begin(), x.end() - tlen);
        const Word t(x.end() - tlen, x.end());
        const Word tbar = word_involution(ring, t);
        if (!std::equal(tbar.begin(), tbar.end(), y.begin())) continue;
        const Word v(y.begin() + tlen, y.end());
        out[word_concat(u, v)] += 1;
        if (!u.empty() && !v.empty())
            for (auto& [w, mult] : word_fusion(ring, u, v)) out[w] += mult;
    }
    return out;
}

inline FormalSum sum_tensor(const FusionRing& ring, const FormalSum& a, const FormalSum& b) {
    FormalSum out;
    for (const auto& [x, mx] : a)
        for (const auto& [y, my] : b)
            for (const auto& [w, mw] : wreath_tensor(ring, x, y)) out[w] += mx * my * mw;
    return out;
}

inline FormalSum conj_sum(const FusionRing& ring, const FormalSum& a) {
    FormalSum out;
    for (const auto& [x, m] : a) out[word_involution(ring, x)] += m;
    return out;
}

// Full decomposition of a(α_1) ⊗ ... ⊗ a(α_k) into irreducibles r_x, using
// a(α) = r_{(α)} for α ≠ 1_G and a(1_G) = 1 ⊕ r_{(1_G)}.
inline FormalSum decompose_basic_tensor(const FusionRing& ring, const Word& letters) {
    require_word(ring, letters);
    FormalSum acc{{Word{}, 1}};
    for (const auto& alpha : letters) {
        FormalSum factor{{Word{alpha}, 1}};
        if (alpha == ring.unit()) factor[Word{}] += 1;
        acc = sum_tensor(ring, acc, factor);
    }
    return acc;
}

struct HomDimResult {
    std::optional<std::uint64_t> partitions;  // well-decorated partition count
    std::optional<std::uint64_t> fusion;      // fusion-engine count
    bool hypothesis_ok = true;                // dim(B) >= 4
    std::uint64_t value() const { return partitions ? *partitions : *fusion; }
};

enum class HomDimMethod { Partitions, Fusion, Both };

// dim Hom(⊗ a(α_i), ⊗ a(β_j)) two ways: summing Π_v dim Hom(α_{U_v}, β_{L_v})
// over well-decorated noncrossing partitions, and through the fusion engine.
// The partition route assumes dim(B) >= 4; below that the result is still
// computed but flagged, and a both-mode mismatch is only an error when the
// hypothesis holds.
inline HomDimResult wreath_hom_dim(const FusionRing& ring, const AlgebraSpec& algebra,
                                   const Word& upper, const Word& lower,
                                   HomDimMethod method = HomDimMethod::Both) {
    require_word(ring, upper);
    require_word(ring, lower);
    HomDimResult res;
    res.hypothesis_ok = algebra.dim() >= 4;

    if (method != HomDimMethod::Fusion) {
        const int k = static_cast<int>(upper.size());
        const int l = static_cast<int>(lower.size());
        std::uint64_t total = 0;
        enumerate_nc(k, l, [&](const NcPartition& p) {
            std::uint64_t prod = 1;
            for (const auto& blk : p.blocks()) {
                Word up, dn;
                for (int x : blk) {
                    if (x <= k) up.push_back(upper[x - 1]);
                    else dn.push_back(lower[k + l - x]);  // ascending point = right to left
                }
                std::reverse(dn.begin(), dn.end());  // block decorations read left to right
                prod *= hom_dim(ring, up, dn);
                if (prod == 0) break;
            }
            total += prod;
        });
        res.partitions = total;
    }
    if (method != HomDimMethod::Partitions) {
        const auto du = decompose_basic_tensor(ring, upper);
        const auto dl = decompose_basic_tensor(ring, lower);
        std::uint64_t total = 0;
        for (const auto& [x, mu] : du) {
            auto it = dl.find(x);
            if (it != dl.end()) total += mu * it->second;
        }
        res.fusion = total;
    }
    if (method == HomDimMethod::Both && *res.partitions != *res.fusion && res.hypothesis_ok)
        throw DivergenceError("hom-dim oracle divergence: partitions=" + std::to_string(*res.partitions) +
                              " fusion=" + std::to_string(*res.fusion) + " at upper='" +
                              word_to_string(upper) + "' lower='" + word_to_string(lower) + "'");
    return res;
}

struct WordDims {
    double dim = 1.0;
    double qdim = 1.0;
};

// dim and qdim of r_x. Generators: dim r_{(α)} = dim(B)·dim(α) − [α = 1_G],
// qdim r_{(α)} = qdim(α)·Σ_T Tr(Q_T)Tr(Q_T^{-1}) − [α = 1_G]; longer words
// split off the first letter and subtract the lower-order terms of the
// fusion rule (the word itself appears there exactly once).
class WordDimCalculator {
public:
    WordDimCalculator(const FusionRing& ring, const AlgebraSpec& algebra)
        : ring_(ring), algebra_(algebra) {
        if (!algebra.is_delta_form())
            throw HypothesisError("word dims need a delta-form state (fusion theorem hypothesis)");
        dim_b_ = algebra.dim();
        qdim_factor_ = to_double(algebra.qdim_factor());
    }

    WordDims dims(const Word& x) {
        require_word(ring_, x);
        return compute(x);
    }

private:
    WordDims compute(const Word& x) {
        auto it = memo_.find(x);
        if (it != memo_.end()) return it->second;
        WordDims out;
        if (x.empty()) {
            out = {1.0, 1.0};
        } else if (x.size() == 1) {
            const double unit_correction = x[0] == ring_.unit() ? 1.0 : 0.0;
            out.dim = dim_b_ * ring_.dim(x[0]) - unit_correction;
            out.qdim = qdim_factor_ * ring_.qdim(x[0]) - unit_correction;
        } else {
            const Word head{x.front()};
            const Word rest(x.begin() + 1, x.end());
            const WordDims dh = compute(head), dr = compute(rest);
            out.dim = dh.dim * dr.dim;
            out.qdim = dh.qdim * dr.qdim;
            for (const auto& [w, mult] : wreath_tensor(ring_, head, rest)) {
                if (w == x) continue;  // multiplicity 1 by construction
                const WordDims dw = compute(w);
                out.dim -= static_cast<double>(mult) * dw.dim;
                out.qdim -= static_cast<double>(mult) * dw.qdim;
            }
        }
        if (out.dim < -1e-9 || out.qdim < -1e-9)
            throw DivergenceError("negative dimension for word '" + word_to_string(x) +
                                  "' (inconsistent fusion ring)");
        memo_[x] = out;
        return out;
    }

    const FusionRing& ring_;
    const AlgebraSpec& algebra_;
    double dim_b_;
    double qdim_factor_;
    std::map<Word, WordDims, WordOrder> memo_;
};

inline WordDims word_dims(const FusionRing& ring, const AlgebraSpec& algebra, const Word& x) {
    return WordDimCalculator(ring, algebra).dims(x);
}

// h(χ(a(1_G))^k) = #NC(0,k) = C_k, the free Poisson moments.
inline std::uint64_t moments(int k) { return catalan(k); }

struct FreeProductComponent {
    AlgebraSpec algebra;  // renormalized to a state (a delta-form)
    Rational delta;       // the grouping key: common Tr(Q_T^{-1}) inside ψ
    std::vector<int> block_indices;
};

// Free-product decomposition: group the matrix summands by their exact value
// of Tr(Q_T^{-1}) and renormalize ψ on each group; a single component comes
// back iff ψ was already a delta-form. The reported delta is the common
// Tr(Q_T^{-1}) within the original state; the renormalized component is a
// (ψ(1_{B_i})·δ_i)-form.
inline std::vector<FreeProductComponent> free_product_decomposition(const AlgebraSpec& a) {
    if (!a.normalized()) throw HypothesisError("free-product decomposition needs a state");
    std::map<Rational, std::vector<int>> groups;
    for (int t = 0; t < a.block_count(); ++t) groups[a.block_delta(t)].push_back(t);
    std::vector<FreeProductComponent> out;
    for (const auto& [delta, indices] : groups) {
        Rational mass(0);
        for (int t : indices)
            for (const auto& qi : a.matrix_blocks()[t].q) mass += qi;
        std::vector<MatrixBlock> blocks;
        for (int t : indices) {
            MatrixBlock blk = a.matrix_blocks()[t];
            for (auto& qi : blk.q) qi /= mass;
            blocks.push_back(std::move(blk));
        }
        out.push_back({AlgebraSpec::make(std::move(blocks)), delta, indices});
    }
    return out;
}

// Kac criterion for the free wreath product: G of Kac type and ψ a trace.
inline bool kac_check(const FusionRing& ring, const AlgebraSpec& a,
                      std::size_t label_budget = 64, double tol = 1e-9) {
    if (!a.is_tracial()) return false;
    for (const auto& l : ring.sample_labels(label_budget))
        if (std::abs(ring.dim(l) - ring.qdim(l)) > tol) return false;
    return true;
}

struct IsoReport {
    bool precondition_ok = true;
    bool pass = true;
    std::uint64_t pairs_checked = 0;
    std::vector<std::string> failures;

    void fail_precondition(std::string why) {
        precondition_ok = false;
        pass = false;
        if (failures.size() < 16) failures.push_back(std::move(why));
    }
    void fail_pair(std::string why) {
        pass = false;
        if (failures.size() < 16) failures.push_back(std::move(why));
    }
};

// Transport of a fusion-semiring isomorphism: validate that φ maps unit to
// unit, commutes with conjugation and preserves tensor multiplicities on its
// domain, then check Φ(r_x ⊗ r_y) = r_{φx} ⊗ r_{φy} and conjugation
// compatibility on random word pairs.
inline IsoReport verify_semiring_iso(const FusionRing& ring1, const FusionRing& ring2,
                                     const std::map<FusionRing::Label, FusionRing::Label>& phi,
                                     std::uint64_t sample_pairs, std::uint32_t seed = 7,
                                     int max_word_len = 3) {
    IsoReport report;
    const auto apply = [&](const FusionRing::Label& l) -> FusionRing::Label {
        auto it = phi.find(l);
        if (it == phi.end()) throw ParseError("phi undefined on label '" + l + "'");
        return it->second;
    };

    // Precondition sweep over the declared domain.
    std::map<FusionRing::Label, int> image_count;
    for (const auto& [from, to] : phi) {
        if (!ring1.has_label(from)) report.fail_precondition("phi domain label '" + from + "' unknown");
        if (!ring2.has_label(to)) report.fail_precondition("phi image label '" + to + "' unknown");
        if (++image_count[to] > 1) report.fail_precondition("phi not injective at '" + to + "'");
    }
    if (!report.precondition_ok) return report;
    if (!phi.count(ring1.unit()) || phi.at(ring1.unit()) != ring2.unit())
        report.fail_precondition("phi does not map unit to unit");
    for (const auto& [from, to] : phi) {
        const auto c1 = ring1.conj(from);
        if (!phi.count(c1)) {
            report.fail_precondition("phi domain not conj-closed at '" + from + "'");
            continue;
        }
        if (phi.at(c1) != ring2.conj(to))
            report.fail_precondition("phi does not commute with conj at '" + from + "'");
    }
    if (!report.precondition_ok) return report;
    // Multiplicity preservation on the declared domain. Lazy rings cannot
    // have a tensor-closed finite domain, so constituents outside it go
    // unchecked rather than counting as violations.
    for (const auto& [a, fa] : phi) {
        for (const auto& [b, fb] : phi) {
            const auto& d1 = ring1.tensor(a, b);
            const auto& d2 = ring2.tensor(fa, fb);
            bool mismatch = false;
            bool all_in_domain = true;
            for (const auto& [gamma, mult] : d1) {
                if (!phi.count(gamma)) {
                    all_in_domain = false;
                    continue;
                }
                auto it = d2.find(phi.at(gamma));
                if (it == d2.end() || it->second != mult) mismatch = true;
            }
            if (all_in_domain && d1.size() != d2.size()) mismatch = true;
            if (mismatch)
                report.fail_precondition("phi does not preserve multiplicities at '" + a + "*" + b + "'");
            if (!report.precondition_ok) return report;
        }
    }

    // Transport words are sampled from letters whose pairwise fusions stay
    // inside the domain, so every word produced by the fusion rules can be
    // mapped. Greedily drop the worst offender until closure holds.
    std::vector<FusionRing::Label> letters;
    for (const auto& [from, to] : phi) {
        (void)to;
        letters.push_back(from);
    }
    while (!letters.empty()) {
        std::map<FusionRing::Label, int> offenses;
        for (const auto& a : letters)
            for (const auto& b : letters)
                for (const auto& [gamma, mult] : ring1.tensor(a, b)) {
                    (void)mult;
                    if (!phi.count(gamma)) {
                        ++offenses[a];
                        ++offenses[b];
                    }
                }
        if (offenses.empty()) break;
        const auto worst = std::max_element(offenses.begin(), offenses.end(),
                                            [](const auto& l, const auto& r) { return l.second < r.second; });
        letters.erase(std::find(letters.begin(), letters.end(), worst->first));
    }
    if (letters.empty()) {
        report.fail_precondition("no fusion-closed letters to sample transport words from");
        return report;
    }

    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> len_dist(0, max_word_len);
    std::uniform_int_distribution<std::size_t> letter_dist(0, letters.size() - 1);
    auto random_word = [&]() {
        Word w;
        const int len = len_dist(rng);
        for (int i = 0; i < len; ++i) w.push_back(letters[letter_dist(rng)]);
        return w;
    };
    auto map_word = [&](const Word& w) {
        Word out;
        out.reserve(w.size());
        for (const auto& l : w) out.push_back(apply(l));
        return out;
    };
    auto map_sum = [&](const FormalSum& s) {
        FormalSum out;
        for (const auto& [w, m] : s) out[map_word(w)] += m;
        return out;
    };

    for (std::uint64_t i = 0; i < sample_pairs; ++i) {
        const Word x = random_word(), y = random_word();
        ++report.pairs_checked;
        if (map_sum(wreath_tensor(ring1, x, y)) != wreath_tensor(ring2, map_word(x), map_word(y)))
            report.fail_pair("tensor transport fails at x='" + word_to_string(x) + "' y='" +
                             word_to_string(y) + "'");
        if (map_word(word_involution(ring1, x)) != word_involution(ring2, map_word(x)))
            report.fail_pair("involution transport fails at x='" + word_to_string(x) + "'");
    }
    return report;
}

}  // namespace wreathcat
