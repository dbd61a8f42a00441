#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "wreathcat/errors.hpp"

namespace wreathcat {

// Fusion-ring data of the input compact quantum group: irreducible labels
// with unit, conjugation and binary tensor multiplicities N_{αβ}^γ. Lazy
// rings (su2, integer dual) expose a rule; every product is memoized in an
// append-only table (single writer, concurrent readers).
class FusionRing {
public:
    using Label = std::string;
    using Decomp = std::map<Label, std::uint64_t>;

    struct Irrep {
        Label id;
        double dim = 1.0;
        double qdim = 1.0;
        Label conj;
    };

    static FusionRing trivial() {
        FusionRing r;
        r.name_ = "trivial";
        r.unit_ = "1";
        r.finite_labels_ = {"1"};
        r.valid_ = [](const Label& l) { return l == "1"; };
        r.conj_ = [](const Label& l) { return l; };
        r.rule_ = [](const Label&, const Label&) { return Decomp{{"1", 1}}; };
        r.dim_ = [](const Label&) { return 1.0; };
        r.qdim_ = r.dim_;
        return r;
    }

    // Group ring of Z_s: labels 1, g, g2, ..., g{s-1}.
    static FusionRing cyclic_dual(int s) {
        if (s < 1) throw ParseError("cyclic_dual needs s >= 1");
        FusionRing r;
        r.name_ = "cyclic_dual(" + std::to_string(s) + ")";
        r.unit_ = "1";
        auto label_of = [](int j) { return j == 0 ? Label("1") : (j == 1 ? Label("g") : "g" + std::to_string(j)); };
        auto exponent_of = [s, label_of](const Label& l) -> int {
            for (int j = 0; j < s; ++j)
                if (label_of(j) == l) return j;
            throw ParseError("unknown label '" + l + "' in cyclic_dual(" + std::to_string(s) + ")");
        };
        for (int j = 0; j < s; ++j) r.finite_labels_.push_back(label_of(j));
        r.valid_ = [s, label_of](const Label& l) {
            for (int j = 0; j < s; ++j)
                if (label_of(j) == l) return true;
            return false;
        };
        r.conj_ = [s, label_of, exponent_of](const Label& l) { return label_of((s - exponent_of(l)) % s); };
        r.rule_ = [s, label_of, exponent_of](const Label& a, const Label& b) {
            return Decomp{{label_of((exponent_of(a) + exponent_of(b)) % s), 1}};
        };
        r.dim_ = [exponent_of](const Label& l) { (void)exponent_of(l); return 1.0; };
        r.qdim_ = r.dim_;
        return r;
    }

    // Dual of Z: characters are the integers, tensor is addition.
    static FusionRing integer_dual() {
        FusionRing r;
        r.name_ = "integer_dual";
        r.unit_ = "0";
        auto parse = [](const Label& l) -> long long {
            try {
                std::size_t used = 0;
                const long long v = std::stoll(l, &used);
                if (used != l.size()) throw ParseError("unknown label '" + l + "' in integer_dual");
                return v;
            } catch (const std::exception&) {
                throw ParseError("unknown label '" + l + "' in integer_dual");
            }
        };
        r.valid_ = [parse](const Label& l) {
            try { parse(l); return true; } catch (const ParseError&) { return false; }
        };
        r.conj_ = [parse](const Label& l) { return std::to_string(-parse(l)); };
        r.rule_ = [parse](const Label& a, const Label& b) {
            return Decomp{{std::to_string(parse(a) + parse(b)), 1}};
        };
        r.dim_ = [parse](const Label& l) { (void)parse(l); return 1.0; };
        r.qdim_ = r.dim_;
        r.seeds_ = {"1", "-1"};
        return r;
    }

    // SU(2) with twice-spin labels 0,1,2,...: a ⊗ b = |a-b| ⊕ |a-b|+2 ⊕ ... ⊕ a+b.
    static FusionRing su2() {
        FusionRing r;
        r.name_ = "su2";
        r.unit_ = "0";
        auto parse = parse_nonneg("su2");
        r.valid_ = [parse](const Label& l) {
            try { parse(l); return true; } catch (const ParseError&) { return false; }
        };
        r.conj_ = [parse](const Label& l) { (void)parse(l); return l; };
        r.rule_ = [parse](const Label& a, const Label& b) {
            const long long x = parse(a), y = parse(b);
            Decomp d;
            for (long long c = std::llabs(x - y); c <= x + y; c += 2) d[std::to_string(c)] = 1;
            return d;
        };
        r.dim_ = [parse](const Label& l) { return static_cast<double>(parse(l) + 1); };
        r.qdim_ = r.dim_;
        r.seeds_ = {"1"};
        return r;
    }

    // SO(3): the even su2 labels relabeled 0,1,2,...: a ⊗ b = |a-b| ⊕ ... ⊕ a+b.
    static FusionRing so3() {
        FusionRing r;
        r.name_ = "so3";
        r.unit_ = "0";
        auto parse = parse_nonneg("so3");
        r.valid_ = [parse](const Label& l) {
            try { parse(l); return true; } catch (const ParseError&) { return false; }
        };
        r.conj_ = [parse](const Label& l) { (void)parse(l); return l; };
        r.rule_ = [parse](const Label& a, const Label& b) {
            const long long x = parse(a), y = parse(b);
            Decomp d;
            for (long long c = std::llabs(x - y); c <= x + y; ++c) d[std::to_string(c)] = 1;
            return d;
        };
        r.dim_ = [parse](const Label& l) { return static_cast<double>(2 * parse(l) + 1); };
        r.qdim_ = r.dim_;
        r.seeds_ = {"1"};
        return r;
    }

    // Resolve a builtin by name: trivial | cyclic_dual(s) | integer_dual | su2 | so3.
    static FusionRing builtin(const std::string& name) {
        if (name == "trivial") return trivial();
        if (name == "integer_dual") return integer_dual();
        if (name == "su2") return su2();
        if (name == "so3") return so3();
        if (name.rfind("cyclic_dual(", 0) == 0 && name.back() == ')') {
            const std::string inner = name.substr(12, name.size() - 13);
            try {
                return cyclic_dual(std::stoi(inner));
            } catch (const std::exception&) {
                throw ParseError("bad cyclic_dual parameter: '" + inner + "'");
            }
        }
        throw ParseError("unknown builtin ring '" + name + "'");
    }

    // Finite ring from an explicit table. Every binary product of labels
    // must be present; products may only decompose into known labels.
    static FusionRing from_table(const Label& unit, std::vector<Irrep> irreps,
                                 std::map<std::pair<Label, Label>, Decomp> table,
                                 std::string name = "user") {
        FusionRing r;
        r.name_ = std::move(name);
        r.unit_ = unit;
        std::map<Label, Irrep> by_id;
        for (auto& ir : irreps) {
            if (by_id.count(ir.id)) throw ParseError("duplicate irrep id '" + ir.id + "'");
            by_id[ir.id] = ir;
            r.finite_labels_.push_back(ir.id);
        }
        if (!by_id.count(unit)) throw ParseError("unit label '" + unit + "' not among irreps");
        for (const auto& [id, ir] : by_id) {
            if (!by_id.count(ir.conj))
                throw ParseError("conj of '" + id + "' is unknown label '" + ir.conj + "'");
            if (ir.dim <= 0 || ir.qdim <= 0) throw ParseError("irrep '" + id + "' needs positive dims");
        }
        for (const auto& [key, decomp] : table) {
            if (!by_id.count(key.first) || !by_id.count(key.second))
                throw ParseError("tensor rule on unknown labels '" + key.first + "','" + key.second + "'");
            for (const auto& [gamma, mult] : decomp) {
                if (!by_id.count(gamma))
                    throw ParseError("tensor product '" + key.first + "*" + key.second +
                                     "' decomposes into unknown label '" + gamma + "'");
                if (mult == 0)
                    throw ParseError("zero multiplicity stored for '" + key.first + "*" + key.second + "'");
            }
        }
        auto shared = std::make_shared<std::map<std::pair<Label, Label>, Decomp>>(std::move(table));
        auto ids = std::make_shared<std::map<Label, Irrep>>(std::move(by_id));
        const Label u = unit;
        r.valid_ = [ids](const Label& l) { return ids->count(l) > 0; };
        r.conj_ = [ids](const Label& l) {
            auto it = ids->find(l);
            if (it == ids->end()) throw ParseError("unknown label '" + l + "'");
            return it->second.conj;
        };
        r.rule_ = [shared, u](const Label& a, const Label& b) -> Decomp {
            if (a == u) return Decomp{{b, 1}};
            if (b == u) return Decomp{{a, 1}};
            auto it = shared->find({a, b});
            if (it == shared->end())
                throw ParseError("tensor product '" + a + "*" + b + "' missing from ring table");
            return it->second;
        };
        r.dim_ = [ids](const Label& l) {
            auto it = ids->find(l);
            if (it == ids->end()) throw ParseError("unknown label '" + l + "'");
            return it->second.dim;
        };
        r.qdim_ = [ids](const Label& l) {
            auto it = ids->find(l);
            if (it == ids->end()) throw ParseError("unknown label '" + l + "'");
            return it->second.qdim;
        };
        return r;
    }

    // Test-oriented escape hatch: build a ring from raw rules without the
    // table validation (used to exercise validate_ring on broken data).
    static FusionRing from_rules(std::string name, Label unit, std::vector<Label> labels,
                                 std::function<Label(const Label&)> conj,
                                 std::function<Decomp(const Label&, const Label&)> rule,
                                 std::function<double(const Label&)> dim,
                                 std::function<double(const Label&)> qdim) {
        FusionRing r;
        r.name_ = std::move(name);
        r.unit_ = std::move(unit);
        r.finite_labels_ = labels;
        auto set = std::make_shared<std::set<Label>>(labels.begin(), labels.end());
        r.valid_ = [set](const Label& l) { return set->count(l) > 0; };
        r.conj_ = std::move(conj);
        r.rule_ = std::move(rule);
        r.dim_ = std::move(dim);
        r.qdim_ = std::move(qdim);
        return r;
    }

    const Label& unit() const { return unit_; }
    const std::string& name() const { return name_; }
    bool is_finite() const { return !finite_labels_.empty(); }
    const std::vector<Label>& labels() const { return finite_labels_; }

    bool has_label(const Label& l) const { return valid_(l); }
    void require_label(const Label& l) const {
        if (!valid_(l)) throw ParseError("unknown label '" + l + "' in ring " + name_);
    }

    Label conj(const Label& l) const {
        require_label(l);
        return conj_(l);
    }
    double dim(const Label& l) const {
        require_label(l);
        return dim_(l);
    }
    double qdim(const Label& l) const {
        require_label(l);
        return qdim_(l);
    }

    const Decomp& tensor(const Label& a, const Label& b) const {
        require_label(a);
        require_label(b);
        const auto key = std::make_pair(a, b);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Decomp d = rule_(a, b);
        for (auto dit = d.begin(); dit != d.end();) {
            if (dit->second == 0) dit = d.erase(dit);
            else ++dit;
        }
        return memo_.emplace(key, std::move(d)).first->second;
    }

    std::uint64_t multiplicity(const Label& a, const Label& b, const Label& gamma) const {
        const auto& d = tensor(a, b);
        auto it = d.find(gamma);
        return it == d.end() ? 0 : it->second;
    }

    // Labels reachable from the unit and the seeds by repeated tensoring,
    // capped by the budget; for finite rings just the label list.
    std::vector<Label> sample_labels(std::size_t budget) const {
        if (is_finite()) {
            if (finite_labels_.size() <= budget) return finite_labels_;
            return std::vector<Label>(finite_labels_.begin(), finite_labels_.begin() + budget);
        }
        std::set<Label> seen{unit_};
        for (const auto& s : seeds_)
            if (valid_(s)) seen.insert(s);
        std::vector<Label> frontier(seen.begin(), seen.end());
        while (seen.size() < budget && !frontier.empty()) {
            std::vector<Label> next;
            for (const auto& a : frontier) {
                for (const auto& s : seeds_) {
                    for (const auto& [gamma, mult] : tensor(a, s)) {
                        (void)mult;
                        if (seen.insert(gamma).second) next.push_back(gamma);
                        if (seen.size() >= budget) break;
                    }
                    if (seen.size() >= budget) break;
                }
                if (seen.size() >= budget) break;
            }
            frontier = std::move(next);
        }
        return std::vector<Label>(seen.begin(), seen.end());
    }

    // Canonical serialization used for cache-file content hashing.
    std::string content_key() const {
        if (!is_finite() || name_ != "user") return "builtin:" + name_;
        std::string key = "user:" + unit_;
        for (const auto& l : finite_labels_)
            key += ";" + l + ":" + std::to_string(dim_(l)) + ":" + std::to_string(qdim_(l)) + ":" + conj_(l);
        return key;
    }

    const std::map<std::pair<Label, Label>, Decomp>& memo() const { return memo_; }
    void import_memo(std::map<std::pair<Label, Label>, Decomp> memo) { memo_ = std::move(memo); }

private:
    static std::function<long long(const Label&)> parse_nonneg(std::string ring) {
        return [ring](const Label& l) -> long long {
            try {
                std::size_t used = 0;
                const long long v = std::stoll(l, &used);
                if (used != l.size() || v < 0) throw std::invalid_argument(l);
                return v;
            } catch (const std::exception&) {
                throw ParseError("unknown label '" + l + "' in " + ring);
            }
        };
    }

    std::string name_;
    Label unit_;
    std::vector<Label> finite_labels_;  // empty for lazy rings
    std::vector<Label> seeds_;          // generators for lazy sampling
    std::function<bool(const Label&)> valid_;
    std::function<Label(const Label&)> conj_;
    std::function<Decomp(const Label&, const Label&)> rule_;
    std::function<double(const Label&)> dim_;
    std::function<double(const Label&)> qdim_;
    mutable std::map<std::pair<Label, Label>, Decomp> memo_;
};

// Iterated decomposition of a word of labels with multiplicity bookkeeping;
// the empty word decomposes as the trivial representation.
inline FusionRing::Decomp tensor_decompose(const FusionRing& ring,
                                           const std::vector<FusionRing::Label>& word) {
    FusionRing::Decomp acc{{ring.unit(), 1}};
    for (const auto& letter : word) {
        ring.require_label(letter);
        FusionRing::Decomp next;
        for (const auto& [gamma, mult] : acc)
            for (const auto& [nu, m2] : ring.tensor(gamma, letter)) next[nu] += mult * m2;
        acc = std::move(next);
    }
    return acc;
}

// dim Hom(u, v) for tensor words, by semisimplicity:
// Σ_γ mult_γ(u) mult_γ(v).
inline std::uint64_t hom_dim(const FusionRing& ring, const std::vector<FusionRing::Label>& w1,
                             const std::vector<FusionRing::Label>& w2) {
    const auto d1 = tensor_decompose(ring, w1);
    const auto d2 = tensor_decompose(ring, w2);
    std::uint64_t total = 0;
    for (const auto& [gamma, m1] : d1) {
        auto it = d2.find(gamma);
        if (it != d2.end()) total += m1 * it->second;
    }
    return total;
}

struct RingReport {
    bool ok = true;
    std::uint64_t triples_checked = 0;
    std::vector<std::string> violations;

    void violation(std::string what) {
        ok = false;
        if (violations.size() < 32) violations.push_back(std::move(what));
    }
};

// Structural hygiene of a ring on (up to) sample_budget cached triples:
// involutive conjugation, unit laws, Frobenius symmetry, uniqueness of the
// conjugate, and the dimension homomorphism for dim and qdim.
inline RingReport validate_ring(const FusionRing& ring, std::uint64_t sample_budget,
                                double tol = 1e-9) {
    RingReport report;
    const auto labels = ring.sample_labels(std::max<std::uint64_t>(8, sample_budget / 8));
    const auto& unit = ring.unit();

    if (ring.conj(unit) != unit) report.violation("conj(unit) != unit");
    for (const auto& a : labels) {
        if (ring.conj(ring.conj(a)) != a)
            report.violation("conj not involutive at '" + a + "'");
        const auto& right = ring.tensor(a, unit);
        const auto& left = ring.tensor(unit, a);
        if (right.size() != 1 || !right.count(a) || right.at(a) != 1)
            report.violation("a*1 != a at '" + a + "'");
        if (left.size() != 1 || !left.count(a) || left.at(a) != 1)
            report.violation("1*a != a at '" + a + "'");
    }

    for (const auto& a : labels) {
        for (const auto& b : labels) {
            if (report.triples_checked >= sample_budget) return report;
            const auto& d = ring.tensor(a, b);
            double dsum = 0, qsum = 0;
            for (const auto& [gamma, mult] : d) {
                ++report.triples_checked;
                dsum += static_cast<double>(mult) * ring.dim(gamma);
                qsum += static_cast<double>(mult) * ring.qdim(gamma);
                // Frobenius symmetry: N_{ab}^γ = N_{ā γ}^b = N_{γ b̄}^a.
                if (ring.multiplicity(ring.conj(a), gamma, b) != mult)
                    report.violation("Frobenius N_{conj(a),γ}^b mismatch at (" + a + "," + b + ";" + gamma + ")");
                if (ring.multiplicity(gamma, ring.conj(b), a) != mult)
                    report.violation("Frobenius N_{γ,conj(b)}^a mismatch at (" + a + "," + b + ";" + gamma + ")");
            }
            const std::uint64_t unit_mult = d.count(unit) ? d.at(unit) : 0;
            const std::uint64_t expected = (b == ring.conj(a)) ? 1 : 0;
            if (unit_mult != expected)
                report.violation("conjugate uniqueness fails at (" + a + "," + b + ")");
            if (std::abs(dsum - ring.dim(a) * ring.dim(b)) > tol * std::max(1.0, std::abs(dsum)))
                report.violation("dim homomorphism fails at (" + a + "," + b + ")");
            if (std::abs(qsum - ring.qdim(a) * ring.qdim(b)) > tol * std::max(1.0, std::abs(qsum)))
                report.violation("qdim homomorphism fails at (" + a + "," + b + ")");
        }
    }
    return report;
}

}  // namespace wreathcat
