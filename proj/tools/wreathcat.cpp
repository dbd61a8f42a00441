// wreathcat: noncrossing-partition intertwiner calculus and free wreath
// product fusion computations from algebra/ring description files.
//
// Exit codes: 0 success, 2 parse error, 3 hypothesis violation, 4 oracle
// divergence, 5 tolerance breach.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "wreathcat/wreathcat.hpp"

using namespace wreathcat;

namespace {

struct Options {
    std::string algebra_file;
    std::string ring_ref;
    std::string ring2_ref;
    std::string mode = "delta";
    std::string method = "both";
    double tol = 1e-9;
    std::uint32_t seed = 7;
    bool tsv = false;
    std::string cache_dir;
};

Options opts;
ordered_json output;

AlgebraSpec load_algebra() {
    if (opts.algebra_file.empty()) throw ParseError("--algebra FILE is required for this command");
    return algebra_from_json(load_json_file(opts.algebra_file));
}

FusionRing load_ring(const std::string& ref) {
    if (ref.empty()) throw ParseError("--ring NAME|FILE is required for this command");
    FusionRing ring = resolve_ring(ref);
    if (!opts.cache_dir.empty()) load_ring_cache(ring, opts.cache_dir);
    return ring;
}

void persist_ring(const FusionRing& ring) {
    if (opts.cache_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(opts.cache_dir, ec);
    save_ring_cache(ring, opts.cache_dir);
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

void print_matrix_tsv(const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) std::cout << '\t';
            std::cout << m(r, c);
        }
        std::cout << '\n';
    }
}

HomDimMethod parse_method(const std::string& m) {
    if (m == "partitions") return HomDimMethod::Partitions;
    if (m == "fusion") return HomDimMethod::Fusion;
    if (m == "both") return HomDimMethod::Both;
    throw ParseError("unknown method '" + m + "' (partitions|fusion|both)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"noncrossing-partition calculus and free wreath product fusion"};
    app.require_subcommand(1);
    app.add_option("--algebra", opts.algebra_file, "algebra spec JSON file");
    app.add_option("--ring", opts.ring_ref, "builtin ring name or ring JSON file");
    app.add_option("--ring2", opts.ring2_ref, "second ring for iso-check");
    app.add_option("--mode", opts.mode, "delta|oneform")->check(CLI::IsMember({"delta", "oneform"}));
    app.add_option("--method", opts.method, "partitions|fusion|both");
    app.add_option("--tol", opts.tol, "numeric tolerance (default 1e-9)");
    app.add_option("--seed", opts.seed, "seed for randomized commands");
    app.add_flag("--tsv", opts.tsv, "print matrices as TSV instead of JSON");
    app.add_option("--cache", opts.cache_dir, "fusion memo cache directory");

    int upper = 0, lower = 0, k_arg = 0, gram_upper = 0, gram_lower = 0;
    int points = 6;
    bool count_only = false;
    int enum_limit = kDefaultEnumerationLimit;
    std::string p_text, q_text, x_text, y_text, a_label, b_label, w1_text, w2_text;
    std::string letters_text, upper_text, lower_text, phi_text;
    int p_upper = 0, q_upper = 0;
    std::uint64_t budget = 500, samples = 100;

    // nc: partition-level operations
    auto* nc = app.add_subcommand("nc", "noncrossing partition operations");
    nc->require_subcommand(1);
    auto* nc_enum = nc->add_subcommand("enum", "enumerate NC(k,l)");
    nc_enum->add_option("--upper", upper)->required();
    nc_enum->add_option("--lower", lower)->required();
    nc_enum->add_flag("--count-only", count_only);
    nc_enum->add_option("--limit", enum_limit, "point-count limit (default 16)");
    nc_enum->callback([&] {
        if (count_only) {
            output["count"] = enumerate_nc_count(upper, lower, enum_limit);
        } else {
            ordered_json arr = ordered_json::array();
            std::uint64_t n = 0;
            enumerate_nc(upper, lower, [&](const NcPartition& p) {
                arr.push_back(p.to_text());
                ++n;
            }, enum_limit);
            std::sort(arr.begin(), arr.end());
            output["count"] = n;
            output["partitions"] = std::move(arr);
        }
    });

    auto* nc_compose = nc->add_subcommand("compose", "glue p on top of q");
    nc_compose->add_option("--p", p_text)->required();
    nc_compose->add_option("--p-upper", p_upper)->required();
    nc_compose->add_option("--q", q_text)->required();
    nc_compose->add_option("--q-upper", q_upper)->required();
    nc_compose->callback([&] {
        const auto p = NcPartition::parse(p_text, p_upper);
        const auto q = NcPartition::parse(q_text, q_upper);
        const auto r = compose(q, p);
        output["result"] = r.result.to_text();
        output["result_upper"] = r.result.upper_count();
        output["central_blocks"] = r.central_blocks;
        output["cycles"] = r.cycles;
    });

    auto* nc_tensor = nc->add_subcommand("tensor", "horizontal concatenation");
    nc_tensor->add_option("--p", p_text)->required();
    nc_tensor->add_option("--p-upper", p_upper)->required();
    nc_tensor->add_option("--q", q_text)->required();
    nc_tensor->add_option("--q-upper", q_upper)->required();
    nc_tensor->callback([&] {
        const auto r = tensor(NcPartition::parse(p_text, p_upper), NcPartition::parse(q_text, q_upper));
        output["result"] = r.to_text();
        output["result_upper"] = r.upper_count();
    });

    auto* nc_adjoint = nc->add_subcommand("adjoint", "reflect across the horizontal axis");
    nc_adjoint->add_option("--p", p_text)->required();
    nc_adjoint->add_option("--p-upper", p_upper)->required();
    nc_adjoint->callback([&] {
        const auto r = adjoint(NcPartition::parse(p_text, p_upper));
        output["result"] = r.to_text();
        output["result_upper"] = r.upper_count();
    });

    // alg: algebra specs
    auto* alg = app.add_subcommand("alg", "finite-dimensional algebra specs");
    alg->require_subcommand(1);
    auto* alg_make = alg->add_subcommand("make", "parse a spec and report derived data");
    alg_make->callback([&] {
        const auto a = load_algebra();
        output["dim"] = a.dim();
        output["blocks"] = a.block_count();
        output["is_delta_form"] = a.is_delta_form();
        if (a.is_delta_form()) output["delta"] = to_string(a.delta());
        ordered_json deltas = ordered_json::array();
        for (int t = 0; t < a.block_count(); ++t) deltas.push_back(to_string(a.block_delta(t)));
        output["block_deltas"] = std::move(deltas);
        output["is_tracial"] = a.is_tracial();
        output["qdim_factor"] = to_string(a.qdim_factor());
        output["dim_hypothesis"] = a.dim() >= 4;  // fusion theorems need dim(B) >= 4
    });
    auto* alg_verify = alg->add_subcommand("verify", "m_k m_k* = delta^{k-1} id identities");
    alg_verify->add_option("--kmax", k_arg, "largest multiplication arity (default 5)")->default_val(5);
    alg_verify->callback([&] {
        const auto a = load_algebra();
        if (!a.is_delta_form()) throw HypothesisError("m_k identity needs a delta-form state");
        const double delta = to_double(a.delta());
        double worst = 0;
        for (int k = 1; k <= k_arg; ++k) {
            const auto mk = iterated_multiplication(a, k);
            const Eigen::MatrixXd lhs = mk.mat * mk.mat.transpose();
            const Eigen::MatrixXd rhs =
                std::pow(delta, k - 1) * Eigen::MatrixXd::Identity(a.dim(), a.dim());
            worst = std::max(worst, max_abs_diff(lhs, rhs));
        }
        output["kmax"] = k_arg;
        output["delta"] = to_string(a.delta());
        output["max_deviation"] = worst;
        output["pass"] = worst < opts.tol;
        if (worst >= opts.tol)
            throw ToleranceError("m_k m_k* identity deviates by " + std::to_string(worst));
    });

    // graph analyze
    auto* graph = app.add_subcommand("graph", "finite quantum graphs");
    graph->require_subcommand(1);
    auto* graph_analyze = graph->add_subcommand("analyze", "triviality and spectral projections");
    graph_analyze->callback([&] {
        if (opts.algebra_file.empty()) throw ParseError("--algebra FILE is required");
        const auto g = quantum_graph_from_json(load_json_file(opts.algebra_file));
        const bool normal = g.is_normal(opts.tol);
        const auto report = graph_constraint_analysis(g, opts.tol, /*want_spectral=*/normal);
        output["trivial"] = report.trivial;
        output["normal"] = report.normal;
        if (report.normal) {
            ordered_json spectral = ordered_json::array();
            for (const auto& sp : report.spectral) {
                ordered_json entry;
                entry["eigenvalue_re"] = sp.eigenvalue.real();
                entry["eigenvalue_im"] = sp.eigenvalue.imag();
                entry["rank"] = static_cast<int>(std::lround(sp.projection.trace().real()));
                spectral.push_back(std::move(entry));
            }
            output["spectral_projections"] = std::move(spectral);
        }
    });

    // tp: partition operators
    auto* tp = app.add_subcommand("tp", "partition-to-operator functor");
    tp->require_subcommand(1);
    auto* tp_build = tp->add_subcommand("build", "materialize T_p");
    tp_build->add_option("--p", p_text)->required();
    tp_build->add_option("--p-upper", p_upper)->required();
    tp_build->callback([&] {
        const auto a = load_algebra();
        const auto op = build_tp(a, NcPartition::parse(p_text, p_upper));
        output["rows"] = op.mat.rows();
        output["cols"] = op.mat.cols();
        if (opts.tsv) {
            print_matrix_tsv(op.mat);
        } else {
            output["matrix"] = matrix_json(op.mat);
        }
    });
    auto* tp_verify = tp->add_subcommand("verify", "tensor/adjoint/composition laws");
    tp_verify->add_option("--points", points, "max glued points (default 6)");
    tp_verify->callback([&] {
        const auto a = load_algebra();
        const auto mode = opts.mode == "oneform" ? CalculusMode::OneForm : CalculusMode::DeltaForm;
        const auto report = verify_calculus(a, points, mode, opts.tol);
        output["mode"] = opts.mode;
        output["glued_points"] = points;
        output["composition_pairs"] = report.composition_pairs;
        output["max_composition_dev"] = report.max_composition_dev;
        output["max_tensor_dev"] = report.max_tensor_dev;
        output["max_adjoint_dev"] = report.max_adjoint_dev;
        output["pass"] = report.ok();
        if (!report.ok())
            throw ToleranceError("calculus law deviation " + std::to_string(report.max_composition_dev) +
                                 " at " + report.worst_composition);
    });
    auto* tp_gram = tp->add_subcommand("gram", "rank of the T_p Gram matrix");
    tp_gram->add_option("--upper", gram_upper)->required();
    tp_gram->add_option("--lower", gram_lower)->required();
    tp_gram->callback([&] {
        const auto a = load_algebra();
        const auto res = gram_rank(a, gram_upper, gram_lower);
        output["rank"] = res.rank;
        output["partitions"] = res.partition_count;
        output["dim_hypothesis"] = res.theorem_applicable;
        output["matches_catalan"] = res.rank == static_cast<int>(res.partition_count);
    });

    // ring: fusion ring operations
    auto* ring_cmd = app.add_subcommand("ring", "fusion ring operations");
    ring_cmd->require_subcommand(1);
    auto* ring_validate = ring_cmd->add_subcommand("validate", "structural hygiene checks");
    ring_validate->add_option("--budget", budget, "triple budget (default 500)");
    ring_validate->callback([&] {
        auto ring = load_ring(opts.ring_ref);
        const auto report = validate_ring(ring, budget, opts.tol);
        output["ring"] = ring.name();
        output["triples_checked"] = report.triples_checked;
        output["pass"] = report.ok;
        output["violations"] = report.violations;
        persist_ring(ring);
        if (!report.ok) throw DivergenceError("ring validation failed");
    });
    auto* ring_tensor = ring_cmd->add_subcommand("tensor", "binary tensor decomposition");
    ring_tensor->add_option("--a", a_label)->required();
    ring_tensor->add_option("--b", b_label)->required();
    ring_tensor->callback([&] {
        auto ring = load_ring(opts.ring_ref);
        output = decomp_to_json(ring.tensor(a_label, b_label));
        persist_ring(ring);
    });
    auto* ring_homdim = ring_cmd->add_subcommand("homdim", "Hom dimension between words");
    ring_homdim->add_option("--w1", w1_text);
    ring_homdim->add_option("--w2", w2_text);
    ring_homdim->callback([&] {
        auto ring = load_ring(opts.ring_ref);
        output["hom_dim"] = hom_dim(ring, parse_word(w1_text), parse_word(w2_text));
        persist_ring(ring);
    });

    // wreath: free wreath product fusion theory
    auto* wr = app.add_subcommand("wreath", "free wreath product fusion theory");
    wr->require_subcommand(1);
    auto* wr_tensor = wr->add_subcommand("tensor", "fusion rules r_x ⊗ r_y");
    wr_tensor->add_option("--x", x_text);
    wr_tensor->add_option("--y", y_text);
    wr_tensor->callback([&] {
        auto ring = load_ring(opts.ring_ref);
        output = formal_sum_to_json(wreath_tensor(ring, parse_word(x_text), parse_word(y_text)));
        persist_ring(ring);
    });
    auto* wr_decompose = wr->add_subcommand("decompose-basic", "decompose a(α_1)⊗...⊗a(α_k)");
    wr_decompose->add_option("--letters", letters_text);
    wr_decompose->callback([&] {
        auto ring = load_ring(opts.ring_ref);
        output = formal_sum_to_json(decompose_basic_tensor(ring, parse_word(letters_text)));
        persist_ring(ring);
    });
    auto* wr_homdim = wr->add_subcommand("homdim", "Hom dimension between basic tensors");
    wr_homdim->add_option("--upper", upper_text);
    wr_homdim->add_option("--lower", lower_text);
    wr_homdim->callback([&] {
        auto ring = load_ring(opts.ring_ref);
        const auto a = load_algebra();
        const auto res = wreath_hom_dim(ring, a, parse_word(upper_text), parse_word(lower_text),
                                        parse_method(opts.method));
        if (res.partitions) output["partitions"] = *res.partitions;
        if (res.fusion) output["fusion"] = *res.fusion;
        output["dim_hypothesis"] = res.hypothesis_ok;
        persist_ring(ring);
        if (!res.hypothesis_ok && parse_method(opts.method) != HomDimMethod::Fusion)
            throw HypothesisError("dim(B) < 4: partition counts reported but not asserted");
    });
    auto* wr_dims = wr->add_subcommand("dims", "dimension and quantum dimension of r_x");
    wr_dims->add_option("--x", x_text);
    wr_dims->callback([&] {
        auto ring = load_ring(opts.ring_ref);
        const auto a = load_algebra();
        const auto d = word_dims(ring, a, parse_word(x_text));
        output["word"] = x_text;
        output["dim"] = d.dim;
        output["qdim"] = d.qdim;
        persist_ring(ring);
    });
    auto* wr_moments = wr->add_subcommand("moments", "free Poisson moments of the basic character");
    wr_moments->add_option("--k", k_arg)->required();
    wr_moments->callback([&] {
        output["k"] = k_arg;
        output["moment"] = moments(k_arg);
    });
    auto* wr_split = wr->add_subcommand("split", "free product decomposition by Tr(Q_T^{-1})");
    wr_split->callback([&] {
        const auto a = load_algebra();
        const auto comps = free_product_decomposition(a);
        output["components"] = ordered_json::array();
        for (const auto& c : comps) {
            ordered_json cj;
            cj["delta"] = to_string(c.delta);
            cj["delta_renormalized"] = to_string(c.algebra.delta());
            cj["blocks"] = c.block_indices;
            cj["algebra"] = algebra_to_json(c.algebra);
            output["components"].push_back(std::move(cj));
        }
        output["already_delta_form"] = comps.size() == 1;
    });
    auto* wr_kac = wr->add_subcommand("kac", "Kac-type criterion");
    wr_kac->callback([&] {
        auto ring = load_ring(opts.ring_ref);
        const auto a = load_algebra();
        output["kac"] = kac_check(ring, a);
        output["tracial"] = a.is_tracial();
        persist_ring(ring);
    });
    auto* wr_iso = wr->add_subcommand("iso-check", "fusion semiring transport check");
    wr_iso->add_option("--phi", phi_text, "label bijection as JSON object or file")->required();
    wr_iso->add_option("--samples", samples, "word pairs to sample (default 100)");
    wr_iso->callback([&] {
        auto ring1 = load_ring(opts.ring_ref);
        auto ring2 = opts.ring2_ref.empty() ? load_ring(opts.ring_ref) : load_ring(opts.ring2_ref);
        json phi_json;
        if (!phi_text.empty() && phi_text.front() == '{') {
            try {
                phi_json = json::parse(phi_text);
            } catch (const json::exception& e) {
                throw ParseError(std::string("bad --phi JSON: ") + e.what());
            }
        } else {
            phi_json = load_json_file(phi_text);
        }
        std::map<std::string, std::string> phi;
        for (const auto& [key, val] : phi_json.items()) phi[key] = val.get<std::string>();
        const auto report = verify_semiring_iso(ring1, ring2, phi, samples, opts.seed);
        output["precondition_ok"] = report.precondition_ok;
        output["pass"] = report.pass;
        output["pairs_checked"] = report.pairs_checked;
        output["failures"] = report.failures;
        if (!report.precondition_ok) throw ParseError("phi precondition failed");
        if (!report.pass) throw DivergenceError("semiring transport failed");
    });

    // Global options may appear after the subcommand name.
    std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
        for (auto* sub : cmd->get_subcommands({})) {
            sub->fallthrough();
            enable_fallthrough(sub);
        }
    };
    enable_fallthrough(&app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const SizeError& e) {
        std::cerr << "size error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisError& e) {
        if (!output.empty()) std::cout << output.dump(2) << "\n";
        std::cerr << "hypothesis violation: " << e.what() << "\n";
        return 3;
    } catch (const DivergenceError& e) {
        if (!output.empty()) std::cout << output.dump(2) << "\n";
        std::cerr << "oracle divergence: " << e.what() << "\n";
        return 4;
    } catch (const ToleranceError& e) {
        if (!output.empty()) std::cout << output.dump(2) << "\n";
        std::cerr << "tolerance breach: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (!opts.tsv || !output.empty()) std::cout << output.dump(2) << "\n";
    return 0;
}
