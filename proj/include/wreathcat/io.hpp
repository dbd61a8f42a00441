#pragma once

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "wreathcat/algebra.hpp"
#include "wreathcat/errors.hpp"
#include "wreathcat/fusion_ring.hpp"
#include "wreathcat/graph.hpp"
#include "wreathcat/wreath.hpp"

namespace wreathcat {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError("bad JSON in " + path + ": " + e.what());
    }
}

// Algebra spec file:
//   {"blocks":[{"size":2,"q":["1/2","1/2"]}], "normalize":false}
// with rationals as "p/q" strings; a quantum graph adds "d": [[...]]
// row-major in the matrix-unit basis.
inline AlgebraSpec algebra_from_json(const json& j) {
    try {
        if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
            throw ParseError("algebra file needs a non-empty 'blocks' array");
        std::vector<MatrixBlock> blocks;
        for (const auto& bj : j["blocks"]) {
            MatrixBlock blk;
            blk.size = bj.at("size").get<int>();
            for (const auto& qj : bj.at("q")) {
                if (qj.is_string()) blk.q.push_back(parse_rational(qj.get<std::string>()));
                else if (qj.is_number_integer()) blk.q.push_back(Rational(qj.get<long long>()));
                else throw ParseError("state eigenvalues must be 'p/q' strings");
            }
            blocks.push_back(std::move(blk));
        }
        const bool normalize = j.value("normalize", false);
        return AlgebraSpec::make(std::move(blocks), normalize);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad algebra file: ") + e.what());
    }
}

inline json algebra_to_json(const AlgebraSpec& a) {
    json out;
    out["blocks"] = json::array();
    for (const auto& blk : a.matrix_blocks()) {
        json bj;
        bj["size"] = blk.size;
        bj["q"] = json::array();
        for (const auto& qi : blk.q) bj["q"].push_back(to_string(qi));
        out["blocks"].push_back(bj);
    }
    out["normalize"] = false;
    return out;
}

inline Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty()) throw ParseError(what + " must be a non-empty array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j[0].size());
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols) throw ParseError(what + " rows have unequal lengths");
        for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

inline QuantumGraph quantum_graph_from_json(const json& j) {
    AlgebraSpec a = algebra_from_json(j);
    if (!j.contains("d")) throw ParseError("quantum graph file needs a 'd' matrix");
    return make_quantum_graph(std::move(a), matrix_from_json(j["d"], "'d'"));
}

// Ring file:
//   {"unit":"1","irreps":[{"id":"g","dim":1,"qdim":1,"conj":"g2"},...],
//    "tensor":{"g*g":{"g2":1},...}}
// Keys of "tensor" are "α*β"; the unit's products may be omitted.
inline FusionRing ring_from_json(const json& j) {
    try {
        const std::string unit = j.at("unit").get<std::string>();
        std::vector<FusionRing::Irrep> irreps;
        for (const auto& ij : j.at("irreps")) {
            FusionRing::Irrep ir;
            ir.id = ij.at("id").get<std::string>();
            ir.dim = ij.value("dim", 1.0);
            ir.qdim = ij.value("qdim", ir.dim);
            ir.conj = ij.value("conj", ir.id);
            irreps.push_back(std::move(ir));
        }
        std::map<std::pair<std::string, std::string>, FusionRing::Decomp> table;
        if (j.contains("tensor")) {
            for (const auto& [key, val] : j["tensor"].items()) {
                const auto star = key.find('*');
                if (star == std::string::npos)
                    throw ParseError("tensor key '" + key + "' is not of the form 'a*b'");
                FusionRing::Decomp d;
                for (const auto& [gamma, mult] : val.items()) d[gamma] = mult.get<std::uint64_t>();
                table[{key.substr(0, star), key.substr(star + 1)}] = std::move(d);
            }
        }
        return FusionRing::from_table(unit, std::move(irreps), std::move(table));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad ring file: ") + e.what());
    }
}

// Ring reference: a builtin name or a path to a ring file.
inline FusionRing resolve_ring(const std::string& ref) {
    if (ref == "trivial" || ref == "integer_dual" || ref == "su2" || ref == "so3" ||
        ref.rfind("cyclic_dual(", 0) == 0)
        return FusionRing::builtin(ref);
    return ring_from_json(load_json_file(ref));
}

inline ordered_json formal_sum_to_json(const FormalSum& s) {
    ordered_json out = ordered_json::object();
    for (const auto& [w, m] : s) out[word_to_string(w)] = m;  // canonical word order
    return out;
}

inline ordered_json decomp_to_json(const FusionRing::Decomp& d) {
    ordered_json out = ordered_json::object();
    for (const auto& [l, m] : d) out[l] = m;
    return out;
}

inline std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Memoized fusion tables persisted per ring, keyed by a content hash of the
// ring definition; a stale or foreign cache is ignored. Caches only ever
// affect speed, never results.
inline void save_ring_cache(const FusionRing& ring, const std::string& dir) {
    const std::string key = fnv1a_hex(ring.content_key());
    json j;
    j["content_hash"] = key;
    j["memo"] = json::object();
    for (const auto& [ab, d] : ring.memo()) {
        json dj = json::object();
        for (const auto& [gamma, mult] : d) dj[gamma] = mult;
        j["memo"][ab.first + "*" + ab.second] = std::move(dj);
    }
    std::ofstream out(dir + "/ring-" + key + ".json");
    if (out) out << j.dump();
}

inline void load_ring_cache(FusionRing& ring, const std::string& dir) {
    const std::string key = fnv1a_hex(ring.content_key());
    std::ifstream in(dir + "/ring-" + key + ".json");
    if (!in) return;
    json j;
    try {
        in >> j;
    } catch (const json::exception&) {
        return;  // corrupt cache: ignore
    }
    if (j.value("content_hash", "") != key) return;
    if (!j.contains("memo") || !j["memo"].is_object()) return;
    std::map<std::pair<std::string, std::string>, FusionRing::Decomp> memo;
    for (const auto& [keystr, dj] : j["memo"].items()) {
        const auto star = keystr.find('*');
        if (star == std::string::npos) continue;
        FusionRing::Decomp d;
        for (const auto& [gamma, mult] : dj.items()) d[gamma] = mult.get<std::uint64_t>();
        memo[{keystr.substr(0, star), keystr.substr(star + 1)}] = std::move(d);
    }
    ring.import_memo(std::move(memo));
}

}  // namespace wreathcat
