#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstar/reduction.hpp"

#include "oracles.hpp"

#include <set>

using namespace wstar;
using oracle::dsum;
using oracle::E;

namespace {

VNAlgebra full_matrix_algebra(Eigen::Index n) {
    Matrix shift = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) shift(i, i + 1) = 1.0;
    return generate_algebra({shift, shift.adjoint()}, n);
}

VNAlgebra m2_plus_m3() {
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(3, 3));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(3, 0, 1) + E(3, 1, 2));
    return generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 5);
}

} // namespace

TEST_CASE("characters of abelian algebras") {
    CharacterSet c1 = characters(generate_algebra({}, 2));
    CHECK(c1.count() == 1);
    CHECK(std::abs(c1.evaluate(Complex(2.5, 0) * Matrix::Identity(2, 2), 0) -
                   Complex(2.5, 0)) <= 1e-12);

    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 1;
    d(1, 1) = 2;
    d(2, 2) = 3;
    CharacterSet c3 = characters(generate_algebra({d}, 3));
    CHECK(c3.count() == 3);
    std::multiset<long> values;
    for (Eigen::Index k = 0; k < 3; ++k)
        values.insert(std::llround(std::real(c3.evaluate(d, k))));
    CHECK(values == std::multiset<long>({1, 2, 3}));

    // span{I2 ⊕ 0, 0 ⊕ I3}: evaluation of I2 ⊕ 2 I3
    Matrix z1 = dsum(Matrix::Identity(2, 2), Matrix::Zero(3, 3));
    Matrix z2 = dsum(Matrix::Zero(2, 2), Matrix::Identity(3, 3));
    CharacterSet c2 = characters(generate_algebra({z1, z2}, 5));
    REQUIRE(c2.count() == 2);
    Matrix probe = z1 + 2.0 * z2;
    std::multiset<long> got;
    for (Eigen::Index k = 0; k < 2; ++k)
        got.insert(std::llround(std::real(c2.evaluate(probe, k))));
    CHECK(got == std::multiset<long>({1, 2}));

    CHECK_THROWS_AS(characters(full_matrix_algebra(2)), NotAbelian);
}

TEST_CASE("fiber spaces of modules") {
    VNAlgebra m2 = full_matrix_algebra(2);
    ModulePtr mod2 = make_module(m2, E(2, 0, 0), 1);
    auto f2 = fiber_spaces(mod2);
    REQUIRE(f2.size() == 1);
    CHECK(f2[0].basis.size() == 2);

    VNAlgebra a = m2_plus_m3();
    StructureData st = structure(a, 2);
    Matrix e = abelian_projection_full(a, st);
    ModulePtr mod = make_module(a, e, st);
    std::multiset<Eigen::Index> dims;
    for (const auto& f : fiber_spaces(mod)) dims.insert(static_cast<Eigen::Index>(f.basis.size()));
    CHECK(dims == std::multiset<Eigen::Index>({2, 3}));

    // e has a unit class in every fiber
    for (Eigen::Index k = 0; k < mod->characters(); ++k)
        CHECK(fiber_vector(mod, e, k).norm() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pi_fiber is a unital homomorphism with the right norms") {
    VNAlgebra a = m2_plus_m3();
    StructureData st = structure(a, 3);
    Matrix e = abelian_projection_full(a, st);
    ModulePtr mod = make_module(a, e, st);
    Rng rng(5);

    FiberedOperator fid = pi_fiber(mod, Matrix::Identity(5, 5));
    for (Eigen::Index k = 0; k < mod->characters(); ++k)
        CHECK((fid.blocks[k] -
               Matrix::Identity(mod->fiber_dim(k), mod->fiber_dim(k)))
                  .norm() <= 1e-10);

    Matrix z = 3.0 * mod->st.central_minimal_projections[0] -
               Complex(0, 2) * mod->st.central_minimal_projections[1];
    FiberedOperator fz = pi_fiber(mod, z);
    Vector omega = central_coefficients(mod, z);
    for (Eigen::Index k = 0; k < mod->characters(); ++k)
        CHECK((fz.blocks[k] - omega(k) * Matrix::Identity(mod->fiber_dim(k),
                                                          mod->fiber_dim(k)))
                  .norm() <= 1e-9);

    Matrix x = rng.span_element(a.basis);
    FiberedOperator fx = pi_fiber(mod, x);
    double fibmax = 0.0;
    for (const auto& b : fx.blocks) fibmax = std::max(fibmax, op_norm(b));
    CHECK(std::abs(fibmax - op_norm(x)) <= 1e-8 * std::max(1.0, op_norm(x)));
}

TEST_CASE("synthesis of vectors and operators") {
    VNAlgebra a = m2_plus_m3();
    StructureData st = structure(a, 7);
    Matrix e = abelian_projection_full(a, st);
    ModulePtr mod = make_module(a, e, st);
    Rng rng(11);

    SUBCASE("zero family gives zero") {
        std::vector<Vector> family;
        for (Eigen::Index k = 0; k < mod->characters(); ++k)
            family.push_back(Vector::Zero(mod->fiber_dim(k)));
        CHECK(synthesize_vector(mod, family).norm() <= 1e-12);
    }
    SUBCASE("projection and synthesis round trip") {
        Matrix x = rng.span_element(mod->basis);
        std::vector<Vector> family;
        for (Eigen::Index k = 0; k < mod->characters(); ++k)
            family.push_back(fiber_vector(mod, x, k));
        CHECK((synthesize_vector(mod, family) - x).norm() <= 1e-9 * std::max(1.0, x.norm()));
        double fibmax = 0.0;
        for (const auto& f : family) fibmax = std::max(fibmax, f.norm());
        CHECK(std::abs(op_norm(x) - fibmax) <= 1e-8 * std::max(1.0, op_norm(x)));
    }
    SUBCASE("a one-fiber vector lands in a single central block") {
        std::vector<Vector> family;
        for (Eigen::Index k = 0; k < mod->characters(); ++k) {
            Vector v = Vector::Zero(mod->fiber_dim(k));
            if (k == 0) v(0) = 1.0;
            family.push_back(v);
        }
        Matrix x = synthesize_vector(mod, family);
        const Matrix& z0 = mod->st.central_minimal_projections[0];
        CHECK((z0 * x - x).norm() <= 1e-9);
    }
    SUBCASE("operator synthesis inverts the fiber representation") {
        Matrix x = rng.span_element(a.basis);
        CHECK((synthesize_operator(mod, pi_fiber(mod, x)) - x).norm() <=
              1e-8 * std::max(1.0, x.norm()));
        // scalar blocks come back as the central element
        FiberedOperator scalars;
        for (Eigen::Index k = 0; k < mod->characters(); ++k)
            scalars.blocks.push_back(double(k + 1) *
                                     Matrix::Identity(mod->fiber_dim(k), mod->fiber_dim(k)));
        Matrix zc = synthesize_operator(mod, scalars);
        CHECK(membership_residual(mod->Z, zc) <= 1e-9);
        FiberedOperator id;
        for (Eigen::Index k = 0; k < mod->characters(); ++k)
            id.blocks.push_back(Matrix::Identity(mod->fiber_dim(k), mod->fiber_dim(k)));
        CHECK((synthesize_operator(mod, id) - Matrix::Identity(5, 5)).norm() <= 1e-9);
    }
}

TEST_CASE("decomposition along the centre splits into factors") {
    VNAlgebra m = m2_plus_m3();
    VNAlgebra z = center(m);
    VNAlgebra n = commutant(z);
    StructureData st = structure(n, 13);
    Matrix e = abelian_projection_full(n, st);
    ModulePtr mod = make_module(n, e, st);

    auto fibers = decompose_along(m, z, mod);
    REQUIRE(fibers.size() == 2);
    std::multiset<Eigen::Index> dims;
    for (const auto& f : fibers) {
        dims.insert(f.pi_m_bicommutant.dim());
        CHECK(algebra_distance(f.pi_m_bicommutant, f.pi_rel_commutant) <= 1e-8);
    }
    CHECK(dims == std::multiset<Eigen::Index>({4, 9})); // full M2 and M3

    for (const auto& g : fiber_bicommutant_gap(m, z, mod)) CHECK(g.equal);
}

TEST_CASE("decomposition along the scalars keeps the algebra whole") {
    VNAlgebra m = m2_plus_m3();
    VNAlgebra z = generate_algebra({}, 5);
    VNAlgebra n = commutant(z);
    StructureData st = structure(n, 17);
    Matrix e = abelian_projection_full(n, st);
    ModulePtr mod = make_module(n, e, st);
    auto fibers = decompose_along(m, z, mod);
    REQUIRE(fibers.size() == 1);
    CHECK(fibers[0].pi_m_bicommutant.dim() == m.dim());
    // M = N gives the full fiber algebras
    auto full = decompose_along(n, z, mod);
    CHECK(full[0].pi_m_bicommutant.dim() == 25);
}

TEST_CASE("masa-commutant spatial representation") {
    // N = M3 with multiplicity 2: represented on C^3 with scalar commutant
    Matrix g = Matrix::Zero(6, 6);
    g.block(0, 2, 2, 2) = Matrix::Identity(2, 2);
    g.block(2, 4, 2, 2) = Matrix::Identity(2, 2);
    VNAlgebra n = generate_algebra({g, g.adjoint()}, 6); // M3 ⊗ I2
    CHECK(n.dim() == 9);
    MasaRep r = spatial_masa_representation(n);
    CHECK(r.dim == 3);
    CHECK(commutant(r.image()).dim() == 1);

    // abelian diagonal: the representation is a MASA
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 1;
    d(1, 1) = 2;
    d(2, 2) = 3;
    VNAlgebra masa = generate_algebra({d}, 3);
    MasaRep rm = spatial_masa_representation(masa);
    CHECK(rm.dim == 3);
    CHECK(algebra_distance(commutant(rm.image()), rm.image()) <= 1e-8);

    // M2 ⊕ M2 on C^4: two-dimensional commutant
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(2, 2));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(2, 0, 1));
    VNAlgebra two = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 4);
    MasaRep rt = spatial_masa_representation(two);
    CHECK(rt.dim == 4);
    CHECK(commutant(rt.image()).dim() == 2);

    // rho is a *-isomorphism onto its image
    Rng rng(19);
    Matrix x = rng.span_element(two.basis);
    Matrix y = rng.span_element(two.basis);
    CHECK((rt.apply(x * y) - rt.apply(x) * rt.apply(y)).norm() <= 1e-9);
    CHECK((rt.invert(rt.apply(x)) - x).norm() <= 1e-9);
}

TEST_CASE("doubled algebra of two copies of M2 over the scalars") {
    VNAlgebra n1 = full_matrix_algebra(2);
    VNAlgebra n2 = full_matrix_algebra(2);
    StructureData st1 = structure(n1, 23);
    StructureData st2 = structure(n2, 29);
    MasaRep r1 = spatial_masa_representation(n1, st1);
    MasaRep r2 = spatial_masa_representation(n2, st2);
    Matrix e1 = abelian_projection_full(n1, st1);
    Matrix e2 = abelian_projection_full(n2, st2);
    DoubledAlgebra d = doubled_algebra(r1, e1, r2, e2, 31);

    // over Z = C the diagonal action is scalar, so N is the full M4
    CHECK(d.N.dim() == 16);
    CHECK(is_projection(d.e));
    CHECK(std::llround(std::real(d.e.trace())) == 1);
    std::vector<Matrix> corner;
    for (const auto& b : d.N.basis) corner.push_back(d.e * b * d.e);
    CHECK(hs_orthonormalize(corner).size() == 1);

    SUBCASE("the x2 = 0 row of the norm formula is an equality") {
        Rng rng(37);
        Matrix x1 = rng.span_element(d.mod1->basis);
        Matrix zero = Matrix::Zero(2, 2);
        CHECK(std::abs(op_norm(d.embed(x1, zero)) - std::sqrt(2.0) * op_norm(x1)) <= 1e-8);
        Matrix x2 = rng.span_element(d.mod2->basis);
        Vector z1 = central_coefficients(d.mod1, inner(d.mod1, x1, x1));
        Vector z2 = central_coefficients(d.mod2, inner(d.mod2, x2, x2));
        double zn = 0.0;
        for (Eigen::Index k = 0; k < z1.size(); ++k)
            zn = std::max(zn, std::real(z1(k)) + std::real(z2(k)));
        double lhs = op_norm(d.embed(x1, x2));
        CHECK(std::abs(lhs - std::sqrt(2.0 * zn)) <= 1e-8);
        CHECK(lhs + 1e-8 >= std::sqrt(2.0) * std::max(op_norm(x1), op_norm(x2)));
    }
}

TEST_CASE("intertwiners induce isometric module maps") {
    // two different algebras over a common two-character Z
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(3, 3));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(3, 0, 1) + E(3, 1, 2));
    VNAlgebra n1 = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 5);
    Matrix h1 = dsum(E(3, 0, 1) + E(3, 1, 2), Matrix::Zero(2, 2));
    Matrix h2 = dsum(Matrix::Zero(3, 3), E(2, 0, 1));
    VNAlgebra n2 = generate_algebra({h1, h1.adjoint(), h2, h2.adjoint()}, 5);

    StructureData st1 = structure(n1, 41);
    StructureData st2 = structure(n2, 43);
    MasaRep r1 = spatial_masa_representation(n1, st1);
    MasaRep r2 = spatial_masa_representation(n2, st2);
    Matrix e1 = abelian_projection_full(n1, st1);
    Matrix e2 = abelian_projection_full(n2, st2);
    DoubledAlgebra d = doubled_algebra(r1, e1, r2, e2, 47);

    auto basis = intertwiner_space(r1, r2);
    CHECK(static_cast<Eigen::Index>(basis.size()) ==
          st1.block_dims[0] * st2.block_dims[0] + st1.block_dims[1] * st2.block_dims[1]);

    SUBCASE("T = V has unit norm image") {
        ModuleMap lv = module_map_from_intertwiner(d, d.V);
        CHECK(std::abs(module_map_norm(lv) - 1.0) <= 1e-8);
    }
    SUBCASE("zero maps to zero") {
        ModuleMap l0 = module_map_from_intertwiner(d, Matrix::Zero(d.r2.dim, d.r1.dim));
        CHECK(l0.action.norm() <= 1e-12);
    }
    SUBCASE("isometry, round trip, and the adjoint identity") {
        Rng rng(53);
        Matrix t = rng.span_element(basis);
        ModuleMap lt = module_map_from_intertwiner(d, t);
        CHECK(std::abs(module_map_norm(lt) - op_norm(t)) <= 1e-8 * std::max(1.0, op_norm(t)));
        CHECK((intertwiner_from_module_map(d, lt) - t).norm() <= 1e-8 * std::max(1.0, t.norm()));
        ModuleMap ladj = adjoint(lt);
        ModuleMap lrev = module_map_from_intertwiner_reverse(d, t.adjoint());
        CHECK((ladj.action - lrev.action).norm() <= 1e-9);
    }
    SUBCASE("non-intertwiners are rejected") {
        Rng rng(59);
        CHECK_THROWS_AS(module_map_from_intertwiner(d, rng.matrix(d.r2.dim, d.r1.dim)),
                        NotIntertwiner);
    }
}

TEST_CASE("character mismatch is detected") {
    VNAlgebra n1 = full_matrix_algebra(2); // one character
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(2, 2));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(2, 0, 1));
    VNAlgebra n2 = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 4); // two
    StructureData st1 = structure(n1, 61);
    StructureData st2 = structure(n2, 67);
    CHECK_THROWS_AS(doubled_algebra(spatial_masa_representation(n1, st1),
                                    abelian_projection_full(n1, st1),
                                    spatial_masa_representation(n2, st2),
                                    abelian_projection_full(n2, st2), 71),
                    CharacterMismatch);
}
