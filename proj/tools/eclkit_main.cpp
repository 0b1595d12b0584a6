// eclkit: certified computation with exponential polynomials — parse and
// differentiate terms, build Khovanskii systems, isolate and certify their
// solutions, compose exponentially algebraic numbers, and run layered-graph
// ray searches for finite embedding instances.

#include "eclkit/ecl.hpp"
#include "eclkit/errors.hpp"
#include "eclkit/eval.hpp"
#include "eclkit/koenig.hpp"
#include "eclkit/solver.hpp"
#include "eclkit/syntax.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace eclkit;

namespace {

// exit codes: 0 success, 1 negative mathematical result, 2 input error,
// 3 budget exhausted / undecided residue
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kBudget = 3;

struct CommonOpts {
    long precision = 64;
    long max_precision = 256;
    double eps = 1e-12;
    long max_splits = 1000000;
    std::string format = "text";
    int digits = 15;

    SolveConfig solve_config() const {
        SolveConfig cfg;
        cfg.precision = precision;
        cfg.max_precision = max_precision;
        cfg.eps = eps;
        cfg.max_splits = max_splits;
        return cfg;
    }
    bool structured() const { return format == "structured"; }
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--precision", o.precision, "working precision in bits")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-precision", o.max_precision,
                    "precision escalation ceiling in bits")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--eps", o.eps, "target certificate box width")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-splits", o.max_splits, "branch-and-prune split budget")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "structured"}));
    cmd->add_option("--digits", o.digits, "significant digits for enclosures")
        ->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

VarNaming detect_formula_naming(const std::string& text) {
    if (text.find('y') != std::string::npos) return VarNaming::YFirst;
    for (size_t i = 0; i + 1 < text.size(); ++i) {
        if (text[i] == 'c' && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
            return VarNaming::CNumbered;
        }
    }
    return VarNaming::XNumbered;
}

void print_report(const SolveReport& report, const CommonOpts& o,
                  VarNaming naming) {
    if (o.structured()) {
        std::cout << "report.system: " << print_system_inline(*report.system, naming)
                  << "\n";
        std::cout << "report.box: " << box_to_string(report.query, o.digits) << "\n";
        std::cout << "report.certificates: " << report.certificates.size() << "\n";
        for (size_t i = 0; i < report.certificates.size(); ++i) {
            const auto& c = report.certificates[i];
            for (size_t j = 0; j < c.box.size(); ++j) {
                std::cout << "cert." << i + 1 << ".coord." << j + 1 << ": "
                          << c.box[j].to_string(o.digits) << "\n";
            }
            std::cout << "cert." << i + 1
                      << ".jacobian: " << c.jacobian_enclosure.to_string(o.digits)
                      << "\n";
            std::cout << "cert." << i + 1 << ".precision: " << c.precision << "\n";
        }
        std::cout << "report.undecided: " << report.undecided.size() << "\n";
        for (size_t i = 0; i < report.undecided.size(); ++i) {
            std::cout << "undecided." << i + 1 << ": "
                      << box_to_string(report.undecided[i], o.digits) << "\n";
        }
        std::cout << "report.pruned-count: " << report.pruned_count << "\n";
        std::cout << "report.splits: " << report.splits_used << "\n";
        std::cout << "report.budget-exhausted: "
                  << (report.budget_exhausted ? "true" : "false") << "\n";
        return;
    }
    std::cout << report.certificates.size() << " certified solution(s) in "
              << box_to_string(report.query, o.digits) << "\n";
    for (size_t i = 0; i < report.certificates.size(); ++i) {
        std::cout << "  " << i + 1 << ": "
                  << box_to_string(report.certificates[i].box, o.digits) << "\n";
    }
    if (!report.undecided.empty()) {
        std::cout << report.undecided.size() << " undecided box(es):\n";
        for (const auto& b : report.undecided) {
            std::cout << "  ? " << box_to_string(b, o.digits) << "\n";
        }
    }
    std::cout << "pruned " << report.pruned_count << " box(es), "
              << report.splits_used << " split(s)";
    if (report.budget_exhausted) std::cout << ", budget exhausted";
    std::cout << "\n";
}

int report_exit(const SolveReport& report) {
    if (!report.undecided.empty()) return kBudget;
    return report.certificates.empty() ? kNegative : kOk;
}

void write_certificates(const SolveReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (size_t i = 0; i < report.certificates.size(); ++i) {
        std::ofstream out(dir + "/cert-" + std::to_string(i + 1) + ".txt");
        out << serialize_certificate(report.certificates[i]);
    }
}

EclNumber operand(const std::string& system_text, const std::string& box_text,
                  const SolveConfig& cfg) {
    auto sys = std::make_shared<KhovanskiiSystem>(
        parse_system(system_text, nullptr, cfg.limits));
    IntervalBox box = parse_box(box_text, cfg.precision);
    if (box.size() != static_cast<size_t>(sys->dimension())) {
        throw DomainError("operand box dimension does not match its system");
    }
    return ecl_from_system(sys, box, cfg);
}

void print_ecl_result(const EclNumber& n, const CommonOpts& o) {
    if (o.structured()) {
        std::cout << "result.enclosure: " << n.enclosure().to_string(o.digits)
                  << "\n";
        std::cout << "result.system: " << print_system_inline(n.system()) << "\n";
        std::cout << "result.dimension: " << n.system().dimension() << "\n";
    } else {
        std::cout << "enclosure: " << n.enclosure().to_string(o.digits) << "\n";
        std::cout << "witness:   " << print_system_inline(n.system()) << "\n";
    }
}

struct LayerReport {
    const BuildLayersResult& built;
    const CommonOpts& o;
};

int report_infeasible(const BuildLayersResult& built, const CommonOpts& o) {
    if (o.structured()) {
        std::cout << "instance.infeasible-system: " << built.infeasible_system
                  << "\n";
        std::cout << "instance.refuted: " << (built.refuted ? "true" : "false")
                  << "\n";
    } else {
        std::cout << "infeasible: system " << built.infeasible_system
                  << (built.refuted ? " has no solution in its box"
                                    : " exhausted its budget (box too small or "
                                      "more splits needed)")
                  << "\n";
    }
    return built.refuted ? kNegative : kBudget;
}

void print_warnings(const BuildLayersResult& built) {
    for (const auto& w : built.warnings) std::cout << "warning: " << w << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified exponential-polynomial algebra toolkit"};
    app.require_subcommand(1);

    // parse
    auto* cmd_parse = app.add_subcommand("parse", "parse and print canonical forms");
    CommonOpts parse_opts;
    std::string parse_term_text, parse_system_text, parse_formula_text, parse_file;
    add_common(cmd_parse, parse_opts);
    cmd_parse->add_option("--term", parse_term_text, "term to canonicalize");
    cmd_parse->add_option("--system", parse_system_text, "system text");
    cmd_parse->add_option("--formula", parse_formula_text, "constraint formula");
    cmd_parse->add_option("--file", parse_file, "system file");

    // diff
    auto* cmd_diff = app.add_subcommand("diff", "partial derivative of a term");
    CommonOpts diff_opts;
    std::string diff_term;
    int diff_var = 1;
    add_common(cmd_diff, diff_opts);
    cmd_diff->add_option("--term", diff_term, "term")->required();
    cmd_diff->add_option("--var", diff_var, "variable index (1-based)")
        ->check(CLI::PositiveNumber);

    // jacobian
    auto* cmd_jac = app.add_subcommand("jacobian",
                                       "symbolic Jacobian determinant of a system");
    CommonOpts jac_opts;
    std::string jac_system, jac_file;
    add_common(cmd_jac, jac_opts);
    cmd_jac->add_option("--system", jac_system, "system text");
    cmd_jac->add_option("--file", jac_file, "system file");

    // augment
    auto* cmd_aug = app.add_subcommand(
        "augment", "augment a system with the E(y)-x1 logarithm witness");
    CommonOpts aug_opts;
    std::string aug_system, aug_file;
    add_common(cmd_aug, aug_opts);
    cmd_aug->add_option("--system", aug_system, "system text");
    cmd_aug->add_option("--file", aug_file, "system file");

    // solve
    auto* cmd_solve = app.add_subcommand(
        "solve", "isolate and certify all solutions in a box");
    CommonOpts solve_opts;
    std::string solve_system, solve_file, solve_box, solve_cert_dir;
    add_common(cmd_solve, solve_opts);
    cmd_solve->add_option("--system", solve_system, "system text");
    cmd_solve->add_option("--file", solve_file, "system file");
    cmd_solve->add_option("--box", solve_box, "search box, e.g. \"[0,1];[-2,2]\"")
        ->required();
    cmd_solve->add_option("--cert-dir", solve_cert_dir,
                          "write certificate records to this directory");

    // verify
    auto* cmd_verify = app.add_subcommand(
        "verify", "re-verify a serialized certificate from scratch");
    CommonOpts verify_opts;
    std::string verify_path;
    add_common(cmd_verify, verify_opts);
    cmd_verify->add_option("--certificate", verify_path, "certificate file")
        ->required();

    // ecl-op
    auto* cmd_ecl = app.add_subcommand(
        "ecl-op", "field/exp/log operations on certified numbers");
    CommonOpts ecl_opts;
    std::string ecl_op, ecl_lhs, ecl_lhs_box, ecl_rhs, ecl_rhs_box, ecl_cert_out;
    add_common(cmd_ecl, ecl_opts);
    cmd_ecl->add_option("--op", ecl_op, "operation")
        ->required()
        ->check(CLI::IsMember({"add", "mul", "inv", "exp", "log"}));
    cmd_ecl->add_option("--lhs", ecl_lhs, "left operand witnessing system")
        ->required();
    cmd_ecl->add_option("--lhs-box", ecl_lhs_box, "left operand box")->required();
    cmd_ecl->add_option("--rhs", ecl_rhs, "right operand witnessing system");
    cmd_ecl->add_option("--rhs-box", ecl_rhs_box, "right operand box");
    cmd_ecl->add_option("--cert-out", ecl_cert_out,
                        "write the result certificate to this file");

    // ecl-enum
    auto* cmd_enum = app.add_subcommand(
        "ecl-enum", "enumerate Khovanskii systems; with --box, build a catalog");
    CommonOpts enum_opts;
    long en_n = 1, en_tower = 1, en_bits = 2, en_monos = 2, en_degree = 2;
    long en_limit = 1000;
    std::string enum_box;
    add_common(cmd_enum, enum_opts);
    cmd_enum->add_option("--max-n", en_n, "max system dimension");
    cmd_enum->add_option("--max-tower", en_tower, "max exp tower height");
    cmd_enum->add_option("--max-coeff-bits", en_bits, "max coefficient bit size");
    cmd_enum->add_option("--max-monomials", en_monos, "max monomials per equation");
    cmd_enum->add_option("--max-degree", en_degree,
                         "max power-product degree / atom multiplicity");
    cmd_enum->add_option("--limit", en_limit, "cap on listed systems");
    cmd_enum->add_option("--box", enum_box,
                         "catalog mode: solve every system in this box");

    // embed-search
    auto* cmd_embed = app.add_subcommand(
        "embed-search", "build constraint layers and search for a ray");
    CommonOpts embed_opts;
    std::string embed_instance;
    int embed_depth = 0;
    bool embed_atomic = false;
    add_common(cmd_embed, embed_opts);
    cmd_embed->add_option("--instance", embed_instance, "instance file")->required();
    cmd_embed->add_option("--depth", embed_depth, "layer depth")->required();
    cmd_embed->add_flag("--atomic-constraints", embed_atomic,
                        "replace the schedule with generated atomic sentences");

    // chain-check
    auto* cmd_chain = app.add_subcommand(
        "chain-check", "verify the prefix-projection chain of built layers");
    CommonOpts chain_opts;
    std::string chain_instance;
    int chain_depth = 0;
    add_common(cmd_chain, chain_opts);
    cmd_chain->add_option("--instance", chain_instance, "instance file")->required();
    cmd_chain->add_option("--depth", chain_depth, "layer depth")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_parse->parsed()) {
            const CommonOpts& o = parse_opts;
            if (!parse_term_text.empty()) {
                VarNaming naming;
                ExpTerm t = parse_term(parse_term_text, &naming);
                std::cout << (o.structured() ? "canonical: " : "")
                          << print_poly(normalize(t), naming) << "\n";
            } else if (!parse_system_text.empty() || !parse_file.empty()) {
                std::string text = !parse_system_text.empty() ? parse_system_text
                                                              : read_file(parse_file);
                VarNaming naming;
                KhovanskiiSystem s = parse_system(text, &naming);
                if (o.structured()) {
                    std::cout << "vars: " << s.dimension() << "\n";
                    for (size_t i = 0; i < s.equations().size(); ++i) {
                        std::cout << "equation." << i + 1 << ": "
                                  << print_poly(s.equations()[i], naming) << "\n";
                    }
                } else {
                    std::cout << print_system(s, naming);
                }
            } else if (!parse_formula_text.empty()) {
                ConstraintFormula f = parse_formula(parse_formula_text);
                std::cout << (o.structured() ? "formula: " : "")
                          << print_formula(f, detect_formula_naming(parse_formula_text))
                          << "\n";
            } else {
                std::cerr << "parse: pass one of --term/--system/--formula/--file\n";
                return kInputError;
            }
            return kOk;
        }

        if (cmd_diff->parsed()) {
            VarNaming naming;
            ExpTerm t = parse_term(diff_term, &naming);
            CanonicalPoly d = partial_derivative(normalize(t), diff_var);
            std::cout << (diff_opts.structured() ? "derivative: " : "")
                      << print_poly(d, naming) << "\n";
            return kOk;
        }

        if (cmd_jac->parsed()) {
            std::string text = !jac_system.empty() ? jac_system : read_file(jac_file);
            VarNaming naming;
            KhovanskiiSystem s = parse_system(text, &naming);
            std::cout << (jac_opts.structured() ? "jacobian-det: " : "det: ")
                      << print_poly(s.jacobian_det(), naming) << "\n";
            return kOk;
        }

        if (cmd_aug->parsed()) {
            std::string text = !aug_system.empty() ? aug_system : read_file(aug_file);
            KhovanskiiSystem s = parse_system(text);
            KhovanskiiSystem a = augment_log(s);
            if (aug_opts.structured()) {
                std::cout << "vars: " << a.dimension() << "\n";
                for (size_t i = 0; i < a.equations().size(); ++i) {
                    std::cout << "equation." << i + 1 << ": "
                              << print_poly(a.equations()[i], VarNaming::YFirst)
                              << "\n";
                }
                std::cout << "jacobian-det: "
                          << print_poly(a.jacobian_det(), VarNaming::YFirst) << "\n";
            } else {
                std::cout << print_system(a, VarNaming::YFirst);
                std::cout << "det: " << print_poly(a.jacobian_det(), VarNaming::YFirst)
                          << "\n";
            }
            return kOk;
        }

        if (cmd_solve->parsed()) {
            std::string text =
                !solve_system.empty() ? solve_system : read_file(solve_file);
            VarNaming naming;
            auto s = std::make_shared<KhovanskiiSystem>(parse_system(text, &naming));
            SolveConfig cfg = solve_opts.solve_config();
            IntervalBox box = parse_box(solve_box, cfg.precision);
            SolveReport report = solve_in_box(s, box, cfg);
            print_report(report, solve_opts, naming);
            if (!solve_cert_dir.empty()) write_certificates(report, solve_cert_dir);
            return report_exit(report);
        }

        if (cmd_verify->parsed()) {
            KhovanskiiCertificate cert = parse_certificate(read_file(verify_path));
            bool ok = verify_certificate(cert);
            std::cout << (verify_opts.structured() ? "verified: " : "")
                      << (ok ? "true" : "false") << "\n";
            return ok ? kOk : kNegative;
        }

        if (cmd_ecl->parsed()) {
            SolveConfig cfg = ecl_opts.solve_config();
            bool binary = ecl_op == "add" || ecl_op == "mul";
            if (binary && (ecl_rhs.empty() || ecl_rhs_box.empty())) {
                std::cerr << "ecl-op: --op " << ecl_op
                          << " needs --rhs and --rhs-box\n";
                return kInputError;
            }
            EclNumber a = operand(ecl_lhs, ecl_lhs_box, cfg);
            EclNumber result = [&] {
                if (ecl_op == "add") {
                    return ecl_add(a, operand(ecl_rhs, ecl_rhs_box, cfg), cfg);
                }
                if (ecl_op == "mul") {
                    return ecl_mul(a, operand(ecl_rhs, ecl_rhs_box, cfg), cfg);
                }
                if (ecl_op == "inv") return ecl_inv(a, cfg);
                if (ecl_op == "exp") return ecl_exp(a, cfg);
                return ecl_log(a, cfg);
            }();
            print_ecl_result(result, ecl_opts);
            if (!ecl_cert_out.empty()) {
                std::ofstream out(ecl_cert_out);
                out << serialize_certificate(result.certificate());
            }
            return kOk;
        }

        if (cmd_enum->parsed()) {
            EnumBounds bounds;
            bounds.max_n = static_cast<int>(en_n);
            bounds.max_tower = static_cast<int>(en_tower);
            bounds.max_coeff_bits = static_cast<int>(en_bits);
            bounds.max_monomials = static_cast<int>(en_monos);
            bounds.max_degree = static_cast<int>(en_degree);
            SolveConfig cfg = enum_opts.solve_config();
            if (!enum_box.empty()) {
                IntervalBox box = parse_box(enum_box, cfg.precision);
                Catalog cat = build_catalog(bounds, box, cfg);
                std::cout << catalog_to_string(cat, enum_opts.digits);
                std::cout << "systems: " << cat.systems_enumerated
                          << ", budget-exhausted: " << cat.systems_budget_exhausted
                          << ", numbers: " << cat.entries.size() << "\n";
                return cat.entries.empty() ? kNegative : kOk;
            }
            SystemEnumerator en(bounds, cfg.limits);
            long count = 0;
            while (auto s = en.next()) {
                if (count < en_limit) {
                    std::cout << "system: " << print_system_inline(*s) << "\n";
                }
                ++count;
            }
            std::cout << "total: " << count << "\n";
            return kOk;
        }

        if (cmd_embed->parsed() || cmd_chain->parsed()) {
            bool chain_mode = cmd_chain->parsed();
            const CommonOpts& o = chain_mode ? chain_opts : embed_opts;
            std::string path = chain_mode ? chain_instance : embed_instance;
            int depth = chain_mode ? chain_depth : embed_depth;
            SolveConfig cfg = o.solve_config();
            EmbeddingInstance inst =
                parse_instance(read_file(path), cfg.precision, cfg.limits);

            if (!chain_mode && embed_atomic) {
                // constants for the schedule: smallest certified root of
                // each generator
                EmbeddingInstance probe = inst;
                probe.schedule.clear();
                BuildLayersResult pre = build_layers(probe, depth, cfg);
                if (pre.infeasible) return report_infeasible(pre, o);
                std::vector<Interval> constants;
                for (const auto& bk : pre.candidates) constants.push_back(bk[0]);
                inst.schedule = atomic_schedule(constants, cfg.precision);
                for (const auto& f : inst.schedule) {
                    std::cout << "constraint: " << print_formula(f) << "\n";
                }
            }

            BuildLayersResult built = build_layers(inst, depth, cfg);
            if (built.infeasible) return report_infeasible(built, o);
            print_warnings(built);

            if (chain_mode) {
                bool ok = check_chain(built.graph);
                std::cout << (o.structured() ? "chain: " : "prefix chain: ")
                          << (ok ? "true" : "false") << "\n";
                return ok ? kOk : kNegative;
            }

            for (int l = 0; l < built.graph.depth(); ++l) {
                std::cout << (o.structured() ? "layer." + std::to_string(l + 1) +
                                                   ".size: "
                                             : "|V" + std::to_string(l + 1) + "| = ")
                          << built.graph.layers[static_cast<size_t>(l)].size() << "\n";
            }
            RaySearch rs = find_ray(built.graph);
            if (!rs.found) {
                std::cout << (o.structured() ? "ray.found: false\nray.dead-layer: "
                                             : "NoRay at layer ")
                          << rs.dead_layer << "\n";
                return kNegative;
            }
            if (o.structured()) {
                std::cout << "ray.found: true\n";
                for (size_t l = 0; l < rs.ray.vertices.size(); ++l) {
                    std::cout << "ray." << l + 1 << ": "
                              << box_to_string(rs.ray.vertices[l].payload, o.digits)
                              << "\n";
                }
            } else {
                std::cout << "ray found:\n";
                for (size_t l = 0; l < rs.ray.vertices.size(); ++l) {
                    std::cout << "  v" << l + 1 << ": ("
                              << box_to_string(rs.ray.vertices[l].payload, o.digits)
                              << ")\n";
                }
            }
            return kOk;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const CertifyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBudget;
    } catch (const ResourceLimitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBudget;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
