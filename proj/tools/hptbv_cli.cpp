#include "hptbv/bv_quantum.hpp"
#include "hptbv/transfer.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>

using namespace hptbv;
using nlohmann::json;

namespace {

constexpr const char* kSchema = "hpt-bv/1";

enum Exit { kOk = 0, kMath = 1, kInput = 2, kBudget = 3 };

struct RunConfig {
    std::string command;
    std::string algebra = "su2";
    std::string coefficients;
    std::string isotrope = "full";
    bool scalar = false;
    std::string arity = "3..6";
    int arity_min = 3;
    int arity_max = 6;
    int words = 4;
    std::string pairing = "auto";
    std::string format = "text";
    std::string emit_trees;
    std::uint64_t seed = 0;
    bool timing = false;
    bool literal_signs = false;
};

// Collects text lines and a JSON body so both formats share one code path.
struct Output {
    const RunConfig& cfg;
    std::ostringstream text;
    json body = json::object();

    explicit Output(const RunConfig& c) : cfg(c) {
        text << "# hpt-bv " << c.command;
        if (c.command != "qme") text << " algebra=" << c.algebra;
        if (!c.coefficients.empty()) text << " coefficients=" << c.coefficients;
        if (c.command == "sdr" || c.command == "transfer" || c.command == "hpl-check") text << " isotrope=" << c.isotrope;
        text << " seed=" << c.seed << "\n";
    }
    json config_json() const {
        json j{{"seed", cfg.seed}};
        if (cfg.command != "qme") j["algebra"] = cfg.algebra;
        if (!cfg.coefficients.empty()) j["coefficients"] = cfg.coefficients;
        if (cfg.command == "sdr" || cfg.command == "transfer" || cfg.command == "hpl-check") j["isotrope"] = cfg.isotrope;
        if (cfg.command == "transfer") {
            j["scalar"] = cfg.scalar;
            j["arity"] = {cfg.arity_min, cfg.arity_max};
        }
        if (cfg.command == "hpl-check") j["words"] = cfg.words;
        if (cfg.command == "qme") j["pairing"] = cfg.pairing;
        return j;
    }
    int finish(int code) {
        if (cfg.format == "json") {
            json out{{"schema", kSchema}, {"command", cfg.command}, {"config", config_json()}};
            for (auto& [k, v] : body.items()) out[k] = v;
            out["exit_code"] = code;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << text.str();
        }
        return code;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::vector<int>& v, const char* sep = ",") {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

void parse_arity(RunConfig& cfg) {
    static const std::regex range(R"((\d+)(?:\.\.(\d+))?)");
    std::smatch m;
    if (!std::regex_match(cfg.arity, m, range)) throw InputError("arity must look like 3..6 or 4");
    cfg.arity_min = std::stoi(m[1]);
    cfg.arity_max = m[2].matched ? std::stoi(m[2]) : cfg.arity_min;
    if (cfg.arity_min < 2 || cfg.arity_max > kDefaultArityCap || cfg.arity_min > cfg.arity_max)
        throw InputError("arity range must lie within [2, " + std::to_string(kDefaultArityCap) + "]");
}

void print_report(std::ostream& out, const Report& r) {
    for (const auto& c : r.checks) {
        out << "  " << (c.ok ? "pass " : "FAIL ") << c.name;
        if (!c.ok) out << "  witness: " << c.witness;
        out << "\n";
    }
    for (const auto& n : r.notes) out << "  note: " << n << "\n";
}

// "full" asks for a minimal model. The isotrope I = Λ¹ is used when it
// retracts onto something of cohomology size, else the invariant-form retract.
SdrData build_sdr(const std::shared_ptr<const CeComplex>& ce, const std::string& spec) {
    if (spec == "meinrenken") return meinrenken_sdr(ce);
    if (spec == "trivial") return trivial_sdr(ce);
    if (spec == "full") {
        std::vector<MultiVector> all;
        for (int i = 0; i < ce->dim(); ++i) all.push_back(MultiVector::generator(ce->dim(), i));
        try {
            auto s = isotrope_sdr(ce, all);
            if (s.w_dims == cohomology(*ce).dims) return s;
        } catch (const MathError&) {
        }
        return meinrenken_sdr(ce);
    }
    return isotrope_sdr(ce, parse_isotrope(spec, ce->dim()));
}

LieAlgebra coefficient_algebra(const std::string& name, const std::string& pairing) {
    LieAlgebra g = load_algebra(name);
    if (pairing != "auto") return attach_pairing(std::move(g), pairing);
    if (g.pairing()) return g;
    if (!killing_form(g).degenerate) return attach_pairing(std::move(g), "killing");
    return g;
}

std::vector<Scalar> dense(const SparseVec& v, int size) {
    std::vector<Scalar> d(size);
    for (const auto& [i, c] : v) d[i] = c;
    return d;
}

// v with d v = x, when x is exact.
std::optional<MultiVector> primitive(const CeComplex& ce, const MultiVector& x) {
    int deg = x.degree();
    if (deg <= 0) return std::nullopt;
    auto sol = solve(ce.d().block(deg - 1), ce.basis().coords(x, deg));
    if (!sol) return std::nullopt;
    return ce.basis().from_coords(*sol, deg - 1);
}

// ---------------------------------------------------------------- commands

int cmd_validate(const RunConfig& cfg) {
    Output out(cfg);
    LieAlgebra g = load_algebra(cfg.algebra);
    auto v = validate_lie(g);
    auto& t = out.text;
    t << "algebra " << g.name() << ", dim " << g.dim() << (g.is_graded() ? ", graded" : "") << "\n";
    json viol = json::array();
    for (const auto& x : v.violations) {
        std::vector<int> idx = x.indices;
        t << "violation " << x.kind << " (" << join(idx) << "): " << x.detail << "\n";
        viol.push_back({{"kind", x.kind}, {"indices", idx}, {"detail", x.detail}});
    }
    t << "valid: " << (v.valid() ? "yes" : "no") << "\n";
    out.body["valid"] = v.valid();
    out.body["violations"] = viol;
    if (v.valid()) {
        auto kf = killing_form(g);
        auto uni = is_unimodular(g);
        t << "killing form: " << (kf.degenerate ? "degenerate" : "non-degenerate") << "\n";
        json trace = json::array();
        for (const auto& s : uni.trace) trace.push_back(format_scalar(s));
        if (uni.unimodular) {
            t << "unimodular: yes\n";
        } else {
            t << "non-unimodular: tr ad = (";
            for (std::size_t i = 0; i < uni.trace.size(); ++i) t << (i ? ", " : "") << format_scalar(uni.trace[i]);
            t << ")\n";
        }
        out.body["killing_degenerate"] = kf.degenerate;
        out.body["unimodular"] = uni.unimodular;
        out.body["trace"] = trace;
        if (v.has_pairing) {
            t << "pairing: " << (v.pairing_invariant ? "invariant" : "not invariant") << "\n";
            out.body["pairing_invariant"] = v.pairing_invariant;
        }
    }
    return out.finish(v.valid() ? kOk : kMath);
}

int cmd_cohomology(const RunConfig& cfg) {
    Output out(cfg);
    auto ce = std::make_shared<const CeComplex>(load_algebra(cfg.algebra));
    auto h = cohomology(*ce);
    auto inv = invariants_subspace(*ce).dims();
    auto& t = out.text;
    t << "dims: " << join(h.dims) << "\n";
    t << "invariant forms: " << join(inv) << "\n";
    json reps = json::array();
    for (std::size_t k = 0; k < h.representatives.size(); ++k)
        for (const auto& r : h.representatives[k]) {
            t << "  H^" << k << ": " << r.to_string() << "\n";
            reps.push_back({{"degree", k}, {"form", r.to_string()}});
        }
    t << "representatives invariant: " << (h.representatives_are_invariant ? "yes" : "no") << "\n";
    out.body["dims"] = h.dims;
    out.body["invariant_dims"] = inv;
    out.body["representatives"] = reps;
    out.body["representatives_invariant"] = h.representatives_are_invariant;
    return out.finish(kOk);
}

int cmd_sdr(const RunConfig& cfg) {
    Output out(cfg);
    auto ce = std::make_shared<const CeComplex>(load_algebra(cfg.algebra));
    auto s = build_sdr(ce, cfg.isotrope);
    auto& t = out.text;
    t << "sdr " << s.kind << ", W dims " << join(s.w_dims) << "\n";
    t << "transport: " << ce->transport_note() << "\n";
    if (!s.complement_note.empty()) t << "complement: " << s.complement_note << "\n";
    auto ids = verify_sdr(s);
    auto cyc = verify_cyclic(s);
    t << "identities:\n";
    print_report(t, ids);
    t << "cyclicity:\n";
    print_report(t, cyc);
    auto cl = image_closed_under_wedge(s);
    t << "closed under wedge: " << (cl.closed ? "yes" : "no");
    json closure{{"closed", cl.closed}};
    if (!cl.closed) {
        std::string w = "e(" + s.w_name(cl.witness_a) + ") ∧ e(" + s.w_name(cl.witness_b) + ") = " + cl.product.to_string();
        t << "  witness: " << w;
        closure["witness"] = w;
    }
    t << "\n";
    out.body["kind"] = s.kind;
    out.body["w_dims"] = s.w_dims;
    out.body["identities"] = ids.to_json();
    out.body["cyclicity"] = cyc.to_json();
    out.body["closure"] = closure;

    if (ce->dim() <= 4) {
        t << "k-table:\n";
        json table = json::array();
        std::map<int, std::optional<Scalar>> ratio;  // k = λ⋆ per degree, when uniform
        std::map<int, bool> uniform;
        for (int deg = 0; deg <= ce->dim(); ++deg) {
            const auto& monos = ce->basis().of_degree(deg);
            for (Mask m : monos) {
                auto src = MultiVector::monomial(ce->dim(), m);
                auto img = s.apply_k(src);
                if (img.is_zero()) continue;
                t << "  k(" << mask_name(m) << ") = " << img.to_string() << "\n";
                table.push_back({{"input", mask_name(m)}, {"output", img.to_string()}});
                auto star = hodge_star(src);
                if (!uniform.count(deg)) uniform[deg] = true;
                std::optional<Scalar> lam;
                if (img.terms().size() == 1 && star.terms().size() == 1 &&
                    img.terms().begin()->first == star.terms().begin()->first)
                    lam = img.terms().begin()->second / star.terms().begin()->second;
                if (!lam || (ratio[deg] && *ratio[deg] != *lam)) uniform[deg] = false;
                else ratio[deg] = lam;
            }
        }
        json norms = json::object();
        for (const auto& [deg, ok] : uniform)
            if (ok && ratio[deg]) {
                t << "  normalization on degree " << deg << ": k = " << format_scalar(*ratio[deg]) << " ⋆\n";
                norms[std::to_string(deg)] = format_scalar(*ratio[deg]);
            }
        out.body["k_table"] = table;
        out.body["k_normalization"] = norms;
    }
    return out.finish(ids.ok() && cyc.ok() ? kOk : kMath);
}

void write_trees(const RunConfig& cfg, const TransferredStructure& st, const SdrData* scalar_sdr) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.emit_trees);
    bool c_side = st.kind == AlgebraKind::CInfinity;
    for (int n = cfg.arity_min; n <= cfg.arity_max; ++n) {
        auto trees = enumerate_trees(n);
        const ArityStatus* status = st.status.count(n) ? &st.status.at(n) : nullptr;
        bool has_witness = status && !status->witness.empty();
        for (std::size_t i = 0; i < trees.size(); ++i) {
            TreeDecorations deco;
            deco.vertex_label = c_side ? "∧" : "[,]";
            deco.title = std::string(c_side ? "m" : "l") + std::to_string(n) + " tree " + std::to_string(i + 1) + " " +
                         trees[i].serialize();
            if (has_witness) {
                for (int w : status->witness) deco.leaf_labels.push_back(st.names[w]);
                if (c_side && scalar_sdr) {
                    std::vector<MultiVector> inputs;
                    for (int w : status->witness) inputs.push_back(scalar_sdr->e_of(w));
                    deco.zero_edges = evaluate_c_tree(*scalar_sdr, trees[i], inputs).zero_edges;
                }
            }
            std::ofstream f(fs::path(cfg.emit_trees) /
                            (std::string(c_side ? "m" : "l") + std::to_string(n) + "_tree" + std::to_string(i + 1) + ".dot"));
            f << emit_tree_diagram(trees[i], deco);
        }
    }
}

int cmd_transfer(RunConfig cfg) {
    parse_arity(cfg);
    if (cfg.scalar && !cfg.coefficients.empty()) throw InputError("--scalar and --coefficients exclude each other");
    bool scalar = cfg.coefficients.empty();
    Output out(cfg);
    auto t0 = std::chrono::steady_clock::now();
    auto ce = std::make_shared<const CeComplex>(load_algebra(cfg.algebra));
    auto s = build_sdr(ce, cfg.isotrope);
    Budget budget = Budget::from_env();
    auto& t = out.text;

    std::optional<TensorSdr> tensor;
    TransferredStructure st;
    if (scalar) {
        st = transfer_c_infinity(s, cfg.arity_max, budget);
    } else {
        tensor.emplace(tensor_sdr(s, coefficient_algebra(cfg.coefficients, cfg.pairing)));
        st = transfer_l_infinity(*tensor, cfg.arity_max, budget);
    }
    const char* op = scalar ? "m" : "l";
    auto rep = vanishing_report(st, cfg.arity_min, cfg.arity_max);
    t << (scalar ? "C-infinity" : "L-infinity") << " transfer, sdr " << s.kind << ", W dims " << join(s.w_dims)
      << ", arities " << cfg.arity_min << ".." << cfg.arity_max << "\n";
    for (const auto& a : rep.arities) {
        t << "  " << op << a.arity << ": " << a.tuples_done << "/" << a.tuples_total << " tuples x " << a.trees
          << " trees, ";
        if (a.truncated) t << "TRUNCATED, ";
        t << (is_zero(a.max_numerator) ? (a.truncated ? "zero so far" : "zero") : "nonzero");
        if (!is_zero(a.max_numerator)) t << " (max |num| " << format_scalar(a.max_numerator) << ")";
        if (cfg.timing) t << " " << a.seconds << "s";
        t << "\n";
    }

    // Nonzero entries, capped per arity.
    constexpr int kShown = 24;
    json nonzero = json::array();
    for (int n = cfg.arity_min; n <= cfg.arity_max; ++n) {
        if (!st.ops.count(n)) continue;
        int shown = 0;
        for (const auto& [tuple, val] : st.ops.at(n)) {
            if (shown++ == kShown) {
                t << "  ... " << st.ops.at(n).size() - kShown << " more\n";
                break;
            }
            std::string lhs = op + std::to_string(n) + "(";
            json inputs = json::array();
            for (std::size_t i = 0; i < tuple.size(); ++i) {
                lhs += (i ? ", " : "") + st.names[tuple[i]];
                inputs.push_back(st.names[tuple[i]]);
            }
            lhs += ")";
            json entry{{"arity", n}, {"inputs", inputs}, {"value", st.format(val)}};
            t << "  " << lhs << " = " << st.format(val);
            if (scalar) {
                std::string args;
                for (std::size_t i = 0; i < tuple.size(); ++i) args += (i ? ", " : "") + s.e_of(tuple[i]).to_string();
                auto img = s.apply_e(dense(val, s.w_total()));
                t << "   [on e: " << op << n << "(" << args << ") = " << img.to_string();
                entry["e_inputs"] = args;
                entry["e_value"] = img.to_string();
                if (auto v = primitive(*ce, img)) {
                    t << " = d(" << v->to_string() << ")";
                    entry["primitive"] = v->to_string();
                }
                t << "]";
            } else {
                entry["e_value"] = tensor->e(val).to_string();
            }
            t << "\n";
            nonzero.push_back(entry);
        }
    }

    // Identity checks on the arities that are fully known.
    Report checks;
    int top = std::min(cfg.arity_max, 4);
    bool known = true;
    for (int n = 2; n <= top; ++n) known = known && st.complete(n);
    if (known) {
        auto r = scalar ? ainf_identities(st, top) : linf_identities(st, top);
        for (auto& c : r.checks) checks.checks.push_back(c);
        if (scalar)
            for (int n = 2; n <= top; ++n)
                for (auto& c : shuffle_check(st, n).checks) checks.checks.push_back(c);
    }
    if (!checks.checks.empty()) {
        t << "identities:\n";
        print_report(t, checks);
    }

    bool truncated = rep.truncated();
    if (truncated) t << "certificate: budget truncation (raise HPT_BV_BUDGET)\n";
    else t << "certificate: " << (rep.certified_zero() ? "all zero" : "nonzero brackets present") << "\n";
    if (cfg.timing) t << "time: " << seconds_since(t0) << "s\n";

    out.body["kind"] = scalar ? "C-infinity" : "L-infinity";
    out.body["sdr"] = s.kind;
    out.body["w_dims"] = s.w_dims;
    out.body["budget"] = budget.evaluations;
    out.body["vanishing"] = rep.to_json(cfg.timing);
    out.body["nonzero"] = nonzero;
    out.body["identities"] = checks.to_json();

    if (!cfg.emit_trees.empty()) write_trees(cfg, st, scalar ? &s : nullptr);

    if (!checks.ok()) return out.finish(kMath);
    return out.finish(truncated ? kBudget : kOk);
}

int cmd_qme(const RunConfig& cfg) {
    Output out(cfg);
    std::string name = cfg.coefficients.empty() ? "su2" : cfg.coefficients;
    std::string pairing = cfg.pairing == "auto" ? "killing" : cfg.pairing;
    LieAlgebra g = attach_pairing(load_algebra(name), pairing);
    auto q = qme_obstruction(g, cfg.literal_signs);
    auto ct = no_counterterm_check(g);
    auto& t = out.text;
    t << "coefficients " << g.name() << ", pairing " << pairing << (cfg.literal_signs ? ", literal uuv sign" : "") << "\n";
    t << "CME: " << (q.cme_residual.is_zero() ? "0" : q.cme_residual.to_string()) << "\n";
    t << "ΔS: " << (q.delta_s.is_zero() ? "0" : q.delta_s.to_string()) << "\n";
    t << "unimodular: " << (q.unimodular ? "yes" : "no") << ", tr ad = (";
    for (std::size_t i = 0; i < q.trace.size(); ++i) t << (i ? ", " : "") << format_scalar(q.trace[i]);
    t << ")\n";
    t << "pairing invariant: " << (q.pairing_invariant ? "yes" : "no (the master equation is not expected to hold)") << "\n";
    if (q.coefficient) t << "ΔS = " << format_scalar(*q.coefficient) << " Σ (t⁻¹ tr)_α u_α: " << (q.proportional ? "yes" : "no") << "\n";
    t << "ΔS = 0 iff unimodular: " << (q.equivalence_holds ? "holds" : "FAILS") << "\n";
    t << "counterterm: ";
    if (!ct.needed) t << "not needed\n";
    else t << (ct.solvable ? "solvable" : "none linear in fields") << " (image rank " << ct.image_rank << ")"
           << (ct.witness.empty() ? "" : ", witness " + ct.witness) << "\n";
    out.body["qme"] = q.to_json();
    out.body["counterterm"] = ct.to_json();
    // A non-invariant pairing breaks {S,S} = 0 by itself; that is not a failure.
    bool sound = (q.cme_residual.is_zero() || !q.pairing_invariant) && q.equivalence_holds;
    return out.finish(sound ? kOk : kMath);
}

int cmd_hpl_check(const RunConfig& cfg) {
    if (cfg.words < 0 || cfg.words > 6) throw InputError("word cap must lie within [0, 6]");
    Output out(cfg);
    auto& t = out.text;
    if (cfg.words == 0) {
        t << "words 0: nothing to compare\nEQUAL (vacuous)\n";
        out.body["verdict"] = "EQUAL";
        out.body["vacuous"] = true;
        return out.finish(kOk);
    }
    auto ce = std::make_shared<const CeComplex>(load_algebra(cfg.algebra));
    auto s = build_sdr(ce, cfg.isotrope);
    std::string coeff = cfg.coefficients.empty() ? "su2" : cfg.coefficients;
    auto ts = tensor_sdr(s, coefficient_algebra(coeff, cfg.pairing));
    Budget budget = Budget::from_env();
    auto tree = transfer_l_infinity(ts, cfg.words, budget);
    for (int n = 2; n <= cfg.words; ++n)
        if (!tree.complete(n)) {
            t << "tree brackets truncated at arity " << n << "\n";
            out.body["verdict"] = "TRUNCATED";
            return out.finish(kBudget);
        }
    auto hpl = hpl_truncated(ts, cfg.words);
    auto cmp = hpl_compare(hpl, tree);
    t << "sdr " << s.kind << ", W⊗g dim " << ts.size() << ", words ≤ " << cfg.words << ", " << hpl.words_checked
      << " words\n";
    t << "(Q1+δ)² = 0: " << (hpl.square_zero ? "yes" : "no " + hpl.square_witness) << "\n";
    t << "tensor trick: " << (hpl.tensor_trick_ok ? "yes" : "no " + hpl.tensor_trick_witness) << "\n";
    for (const auto& [n, m] : hpl.brackets) t << "  l" << n << ": " << m.size() << " nonzero entries\n";
    print_report(t, cmp);
    bool equal = cmp.ok() && hpl.square_zero && hpl.tensor_trick_ok;
    t << (equal ? "EQUAL" : "DIFFERENT") << "\n";
    out.body["verdict"] = equal ? "EQUAL" : "DIFFERENT";
    out.body["square_zero"] = hpl.square_zero;
    out.body["tensor_trick"] = hpl.tensor_trick_ok;
    out.body["words_checked"] = hpl.words_checked;
    out.body["comparison"] = cmp.to_json();
    return out.finish(equal ? kOk : kMath);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homotopy transfer and BV checks for Lie algebra cohomology"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto algebra = [&](CLI::App* c) {
        c->add_option("--algebra", cfg.algebra, "built-in name or JSON path")->capture_default_str();
    };
    auto format = [&](CLI::App* c) {
        c->add_option("--format", cfg.format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
        c->add_option("--seed", cfg.seed, "recorded in the report header")->capture_default_str();
    };
    auto pairing = [&](CLI::App* c) {
        c->add_option("--pairing", cfg.pairing, "auto, killing, identity or keep")
            ->check(CLI::IsMember({"auto", "killing", "identity", "keep"}))
            ->capture_default_str();
    };
    auto isotrope = [&](CLI::App* c) {
        c->add_option("--isotrope", cfg.isotrope, "full, meinrenken, trivial or e.g. \"e1+e2, e3\"")->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "check antisymmetry, Jacobi, Killing form, unimodularity");
    algebra(validate);
    format(validate);

    auto* coh = app.add_subcommand("cohomology", "Chevalley-Eilenberg cohomology");
    algebra(coh);
    format(coh);

    auto* sdr = app.add_subcommand("sdr", "build and verify a deformation retract");
    algebra(sdr);
    isotrope(sdr);
    format(sdr);

    auto* transfer = app.add_subcommand("transfer", "transferred brackets and vanishing report");
    algebra(transfer);
    isotrope(transfer);
    pairing(transfer);
    format(transfer);
    transfer->add_option("--coefficients", cfg.coefficients, "coefficient Lie algebra (L-infinity side)");
    transfer->add_flag("--scalar", cfg.scalar, "C-infinity products on W");
    transfer->add_option("--arity", cfg.arity, "a..b within [2, 8]")->capture_default_str();
    transfer->add_option("--emit-trees", cfg.emit_trees, "directory for DOT files");
    transfer->add_flag("--timing", cfg.timing, "include timings (not byte-reproducible)");

    auto* qme = app.add_subcommand("qme", "classical and quantum master equation");
    format(qme);
    pairing(qme);
    qme->add_option("--coefficients", cfg.coefficients, "Lie algebra g (default su2)");
    qme->add_flag("--literal-signs", cfg.literal_signs, "use +1/2 on the uuv term");

    auto* hpl = app.add_subcommand("hpl-check", "perturbation lemma against tree formulas");
    algebra(hpl);
    isotrope(hpl);
    pairing(hpl);
    format(hpl);
    hpl->add_option("--coefficients", cfg.coefficients, "coefficient Lie algebra (default su2)");
    hpl->add_option("--words", cfg.words, "word-length cap within [0, 6]")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (*validate) return cfg.command = "validate", cmd_validate(cfg);
        if (*coh) return cfg.command = "cohomology", cmd_cohomology(cfg);
        if (*sdr) return cfg.command = "sdr", cmd_sdr(cfg);
        if (*transfer) return cfg.command = "transfer", cmd_transfer(cfg);
        if (*qme) return cfg.command = "qme", cmd_qme(cfg);
        if (*hpl) return cfg.command = "hpl-check", cmd_hpl_check(cfg);
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kBudget;
    } catch (const MathError& e) {
        std::cerr << "math error: " << e.what() << "\n";
        return kMath;
    }
    return kInput;
}
