#ifndef WSTAR_SUITES_HPP
#define WSTAR_SUITES_HPP

#include "wstar/document.hpp"
#include "wstar/parallel.hpp"
#include "wstar/reduction.hpp"
#include "wstar/standard_form.hpp"

#include <map>
#include <string>

namespace wstar {

struct PropertyResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    Eigen::Index instances = 0;
    bool pass = true;
};

struct SuiteReport {
    std::string suite;
    std::uint64_t seed = 0;
    Eigen::Index instances = 0;
    std::vector<PropertyResult> properties;
    bool pass = true;

    const PropertyResult* find(const std::string& name) const;
};

struct SuiteOptions {
    Eigen::Index instances = 200;
    std::uint64_t seed = 2026;
    Exec exec = default_exec();
};

// random finite-dimensional von Neumann algebras with known Wedderburn shape
struct RandomAlgebraParams {
    Eigen::Index max_ambient = 12;
    Eigen::Index max_blocks = 3;
    Eigen::Index max_block_dim = 3;
    Eigen::Index max_multiplicity = 2;
    bool standard = false; // forces m_k = n_k
};

struct RandomAlgebra {
    VNAlgebra algebra;
    std::vector<std::pair<Eigen::Index, Eigen::Index>> shape; // (n_k, m_k)
    Eigen::Index expected_dim = 0;
};

RandomAlgebra random_algebra(Rng& rng, const RandomAlgebraParams& params,
                             const Tolerance& tol = {});

// random intermediate subalgebra Z(N) ⊆ M ⊆ N
VNAlgebra random_intermediate(Rng& rng, const VNAlgebra& n);

// random subalgebra of Z(M) spanned by partition sums of the minimal
// central projections (always unital)
VNAlgebra random_central_subalgebra(Rng& rng, const VNAlgebra& m, const StructureData& st);

SuiteReport run_suite(const std::string& name, const SuiteOptions& options);
SuiteReport run_suite_on_instance(const std::string& name, const AlgebraDocument& doc);
std::vector<std::string> suite_names(); // isotr, module, fibers, atdu, st1

Json suite_report_to_json(const SuiteReport& report);

} // namespace wstar

#endif
