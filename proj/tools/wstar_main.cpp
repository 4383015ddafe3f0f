#include "wstar/document.hpp"
#include "wstar/reduction.hpp"
#include "wstar/standard_form.hpp"
#include "wstar/suites.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace wstar;

// exit-code contract: 0 ok, 1 property failure, 2 parse, 3 numerics,
// 4 inclusion, 5 certification refusal
constexpr int kOk = 0;
constexpr int kPropertyFailure = 1;
constexpr int kParseError = 2;
constexpr int kNumericalError = 3;
constexpr int kInclusionError = 4;
constexpr int kCertificationRefused = 5;

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

struct CommonArgs {
    std::string file;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double tol = 0.0;
    bool tol_set = false;
    bool serial = false;
};

AlgebraDocument load_document(const CommonArgs& args) {
    AlgebraDocument doc = parse_document_text(read_input(args.file));
    if (args.seed_set) doc.seed = args.seed;
    if (args.tol_set) doc.tolerance = Tolerance{args.tol, args.tol * 1e-2};
    return doc;
}

VNAlgebra build_algebra(const AlgebraDocument& doc) {
    return generate_algebra(doc.generators, doc.ambient_dim, doc.tolerance);
}

VNAlgebra build_central(const AlgebraDocument& doc, const VNAlgebra& m) {
    VNAlgebra zm = center(m);
    if (!doc.central_subalgebra) return zm;
    VNAlgebra z =
        generate_algebra(*doc.central_subalgebra, doc.ambient_dim, doc.tolerance);
    if (!is_abelian(z)) throw InclusionViolated("central_subalgebra is not abelian");
    for (const auto& b : z.basis)
        if (membership_residual(zm, b) > z.tol.verify_cut())
            throw InclusionViolated("central_subalgebra is not inside Z(M)");
    return z;
}

Json blocks_json(const StandardnessReport& rep) {
    Json blocks = Json::array();
    for (auto [n, m] : rep.blocks) blocks.push_back(Json::array({n, m}));
    return blocks;
}

int cmd_structure(const CommonArgs& args, bool emit_unitary) {
    AlgebraDocument doc = load_document(args);
    VNAlgebra m = build_algebra(doc);
    StructureData st = structure(m, doc.seed);
    Json j;
    j["command"] = "structure";
    j["ambient_dim"] = m.ambient_dim;
    j["dim"] = m.dim();
    j["centre_dim"] = st.blocks();
    Json blocks = Json::array();
    for (Eigen::Index k = 0; k < st.blocks(); ++k)
        blocks.push_back(Json::array({st.block_dims[k], st.multiplicities[k]}));
    j["blocks"] = std::move(blocks);
    Json zs = Json::array();
    for (const auto& z : st.central_minimal_projections) zs.push_back(matrix_to_json(z));
    j["minimal_central_projections"] = std::move(zs);
    if (emit_unitary) j["canonical_unitary"] = matrix_to_json(st.canonical_unitary);
    emit(j);
    return kOk;
}

int cmd_reduce(const CommonArgs& args) {
    AlgebraDocument doc = load_document(args);
    VNAlgebra m = build_algebra(doc);
    VNAlgebra z = build_central(doc, m);
    VNAlgebra n = commutant(z);
    StructureData st = structure(n, doc.seed);
    Matrix e = abelian_projection_full(n, st);
    ModulePtr mod = make_module(n, e, st);

    Json j;
    j["command"] = "reduce";
    j["characters"] = mod->characters();
    Json fibers = Json::array();
    for (Eigen::Index k = 0; k < mod->characters(); ++k)
        fibers.push_back(Json{{"character", k}, {"dim", mod->fiber_dim(k)}});
    j["fibers"] = std::move(fibers);

    Json checks = Json::array();
    for (std::size_t i = 0; i < doc.generators.size(); ++i) {
        const Matrix& g = doc.generators[i];
        FiberedOperator fo = pi_fiber(mod, g);
        double fibmax = 0.0;
        for (const auto& blk : fo.blocks) fibmax = std::max(fibmax, op_norm(blk));
        checks.push_back(Json{{"generator", i},
                              {"norm", op_norm(g)},
                              {"max_fiber_norm", fibmax},
                              {"residual", std::abs(op_norm(g) - fibmax)}});
    }
    j["generator_norm_checks"] = std::move(checks);

    Json gap = Json::array();
    for (const auto& r : fiber_bicommutant_gap(m, z, mod))
        gap.push_back(Json{{"character", r.character},
                           {"dim_bicommutant", r.dim_bicommutant},
                           {"dim_relative_commutant", r.dim_relative},
                           {"distance", r.distance},
                           {"equal", r.equal}});
    j["bicommutant_gap"] = std::move(gap);

    Json falg = Json::array();
    for (const auto& fa : decompose_along(m, z, mod))
        falg.push_back(Json{{"character", fa.character},
                            {"dim_fiber_algebra", fa.pi_m_bicommutant.dim()}});
    j["fiber_algebras"] = std::move(falg);
    emit(j);
    return kOk;
}

Json certificate_json(const AlgebraDocument& doc, const ReducedStandardnessCertificate& cert) {
    Json j;
    j["type"] = "wstar-certificate";
    j["document"] = document_to_json(doc);
    j["e"] = matrix_to_json(cert.e);
    j["J"] = matrix_to_json(cert.J.mat);
    Json basis = Json::array();
    for (const auto& b : cert.mod->basis) basis.push_back(matrix_to_json(b));
    j["module_basis"] = std::move(basis);
    j["T"] = Json{{"antilinear", true}, {"action", matrix_to_json(cert.T.action)}};
    j["residuals"] = Json{{"involutive", cert.residuals.involutive},
                          {"te", cert.residuals.te},
                          {"antiunitary", cert.residuals.antiunitary},
                          {"czaza_m", cert.residuals.czaza_m},
                          {"czaza_z", cert.residuals.czaza_z}};
    return j;
}

int cmd_standard(const CommonArgs& args, bool certify, bool gallery) {
    if (gallery) {
        Json cases = Json::array();
        for (const auto& g : counterexample_gallery()) {
            Json c;
            c["name"] = g.name;
            c["standard"] = g.report.standard;
            c["blocks"] = blocks_json(g.report);
            if (g.report.obstruction)
                c["obstruction"] =
                    Json::array({g.report.obstruction->first, g.report.obstruction->second});
            c["jmj_residual"] = g.jmj_residual;
            cases.push_back(std::move(c));
        }
        emit(Json{{"command", "standard"}, {"gallery", std::move(cases)}});
        return kOk;
    }

    AlgebraDocument doc = load_document(args);
    VNAlgebra m = build_algebra(doc);
    StandardnessReport rep = is_standard(m);
    Json j;
    j["command"] = "standard";
    j["standard"] = rep.standard;
    j["blocks"] = blocks_json(rep);
    if (rep.obstruction)
        j["obstruction"] = Json::array({rep.obstruction->first, rep.obstruction->second});
    if (rep.standard) {
        j["jmj_residual"] = rep.jmj_residual;
        j["jzj_residual"] = rep.jzj_residual;
    }
    if (!certify) {
        emit(j);
        return kOk;
    }
    if (!rep.standard) {
        emit(j);
        std::cerr << "certification refused: the algebra is not standard\n";
        return kCertificationRefused;
    }
    VNAlgebra z = build_central(doc, m);
    ReducedStandardnessCertificate cert = reduced_standardness_certificate(m, z, doc.seed);
    j["certificate"] = certificate_json(doc, cert);
    emit(j);
    return kOk;
}

int verify_certificate(const Json& payload, const CommonArgs& args) {
    AlgebraDocument doc = parse_document(payload.at("document"));
    if (args.seed_set) doc.seed = args.seed;
    VNAlgebra m = build_algebra(doc);
    VNAlgebra z = build_central(doc, m);
    VNAlgebra n = commutant(z);
    StructureData st = structure(n, doc.seed);
    Matrix e = matrix_from_json(payload.at("e"), "e");
    std::vector<Matrix> basis;
    for (std::size_t i = 0; i < payload.at("module_basis").size(); ++i)
        basis.push_back(matrix_from_json(payload["module_basis"][i],
                                         "module_basis[" + std::to_string(i) + "]"));
    ModulePtr mod = module_from_basis(n, e, st, basis);
    ModuleMap t{mod, mod, payload.at("T").at("antilinear").get<bool>(),
                matrix_from_json(payload.at("T").at("action"), "T.action")};
    StandardnessReport rep = standardness_from_module_T(m, z, t);
    double te = (t.apply(e) - e).norm();
    Json j;
    j["command"] = "verify";
    j["certificate"] = true;
    j["standard"] = rep.standard;
    j["te_residual"] = te;
    j["pass"] = rep.standard && te <= 1e-8;
    emit(j);
    return j["pass"].get<bool>() ? kOk : kPropertyFailure;
}

int cmd_verify(const CommonArgs& args, const std::string& suite, Eigen::Index random_count) {
    bool known = suite == "all";
    for (const auto& s : suite_names()) known = known || s == suite;
    if (!known) throw ParseError("unknown suite: " + suite);

    if (random_count > 0) {
        SuiteOptions options;
        options.instances = random_count;
        options.seed = args.seed_set ? args.seed : 2026;
        options.exec = args.serial ? Exec::serial : default_exec();
        Json reports = Json::array();
        bool pass = true;
        std::vector<std::string> names =
            suite == "all" ? suite_names() : std::vector<std::string>{suite};
        for (const auto& name : names) {
            SuiteReport rep = run_suite(name, options);
            pass = pass && rep.pass;
            reports.push_back(suite_report_to_json(rep));
        }
        emit(Json{{"command", "verify"}, {"reports", std::move(reports)}, {"pass", pass}});
        return pass ? kOk : kPropertyFailure;
    }

    // instance mode: an algebra document or an emitted certificate
    Json payload;
    try {
        payload = Json::parse(read_input(args.file));
    } catch (const std::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (payload.is_object() && payload.contains("type") &&
        payload["type"] == "wstar-certificate")
        return verify_certificate(payload, args);

    AlgebraDocument doc = parse_document(payload);
    if (args.seed_set) doc.seed = args.seed;
    if (args.tol_set) doc.tolerance = Tolerance{args.tol, args.tol * 1e-2};
    Json reports = Json::array();
    bool pass = true;
    std::vector<std::string> names =
        suite == "all" ? suite_names() : std::vector<std::string>{suite};
    for (const auto& name : names) {
        SuiteReport rep = run_suite_on_instance(name, doc);
        pass = pass && rep.pass;
        reports.push_back(suite_report_to_json(rep));
    }
    emit(Json{{"command", "verify"}, {"reports", std::move(reports)}, {"pass", pass}});
    return pass ? kOk : kPropertyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional W*-algebra reduction toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    bool emit_unitary = false, certify = false, gallery = false;
    std::string suite = "all";
    Eigen::Index random_count = 0;

    auto add_common = [&](CLI::App* cmd, bool file_required) {
        auto* opt = cmd->add_option("file", args.file, "input JSON document ('-' for stdin)");
        if (file_required) opt->required();
        cmd->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
            args.seed_set = true;
        });
        cmd->add_option("--tol", args.tol, "relative tolerance override")
            ->each([&](const std::string&) { args.tol_set = true; });
        cmd->add_flag("--serial", args.serial, "run suites serially");
    };

    auto* cstruct = app.add_subcommand("structure", "Wedderburn structure report");
    add_common(cstruct, true);
    cstruct->add_flag("--emit-unitary", emit_unitary, "include the canonical unitary");

    auto* creduce = app.add_subcommand("reduce", "decomposition along a central subalgebra");
    add_common(creduce, true);

    auto* cstandard = app.add_subcommand("standard", "standardness report and certificates");
    add_common(cstandard, false);
    cstandard->add_flag("--certify", certify, "emit a reduced-standardness certificate");
    cstandard->add_flag("--gallery", gallery, "run the counterexample gallery");

    auto* cverify = app.add_subcommand("verify", "run property suites");
    add_common(cverify, false);
    cverify->add_option("--suite", suite, "suite: isotr|module|fibers|atdu|st1|all");
    cverify->add_option("--random", random_count, "run on generated instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (cstruct->parsed()) return cmd_structure(args, emit_unitary);
        if (creduce->parsed()) return cmd_reduce(args);
        if (cstandard->parsed()) {
            if (!gallery && args.file.empty())
                throw wstar::ParseError("standard: input file required unless --gallery");
            return cmd_standard(args, certify, gallery);
        }
        if (cverify->parsed()) {
            if (random_count == 0 && args.file.empty())
                throw wstar::ParseError("verify: input file required unless --random");
            return cmd_verify(args, suite, random_count);
        }
    } catch (const wstar::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParseError;
    } catch (const wstar::InclusionViolated& e) {
        std::cerr << "inclusion error: " << e.what() << "\n";
        return kInclusionError;
    } catch (const wstar::NotAbelian& e) {
        std::cerr << "inclusion error: " << e.what() << "\n";
        return kInclusionError;
    } catch (const wstar::NotStandard& e) {
        std::cerr << "certification refused: " << e.what() << "\n";
        return kCertificationRefused;
    } catch (const wstar::HypothesisFailed& e) {
        std::cerr << "hypothesis failed: " << e.what() << " (residual " << e.residual << ")\n";
        return kPropertyFailure;
    } catch (const wstar::Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumericalError;
    }
    return kOk;
}
