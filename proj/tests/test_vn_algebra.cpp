#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstar/vn_algebra.hpp"

#include "oracles.hpp"

using namespace wstar;
using oracle::dsum;
using oracle::E;

namespace {

VNAlgebra full_matrix_algebra(Eigen::Index n) {
    Matrix shift = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) shift(i, i + 1) = 1.0;
    return generate_algebra({shift, shift.adjoint()}, n);
}

VNAlgebra diagonal_masa(Eigen::Index n) {
    Matrix d = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) d(i, i) = double(i + 1);
    return generate_algebra({d}, n);
}

} // namespace

TEST_CASE("generate_algebra on empty generators gives the scalars") {
    VNAlgebra a = generate_algebra({}, 2);
    CHECK(a.dim() == 1);
    CHECK(contains(a, Matrix::Identity(2, 2)));
}

TEST_CASE("one off-diagonal matrix unit generates the full algebra") {
    VNAlgebra a = generate_algebra({E(2, 0, 1)}, 2);
    CHECK(a.dim() == 4);
    CHECK(a.dim() == oracle::closure_dim({E(2, 0, 1)}, 2));
}

TEST_CASE("a multiplicity-free diagonal generates the diagonal masa") {
    Matrix d = Matrix::Zero(3, 3);
    d(0, 0) = 1;
    d(1, 1) = 2;
    d(2, 2) = 3;
    VNAlgebra a = generate_algebra({d}, 3);
    CHECK(a.dim() == 3);
    CHECK(a.dim() == oracle::closure_dim({d}, 3));
    CHECK(product_closure_residual(a) <= 1e-10);
    CHECK(star_closure_residual(a) <= 1e-10);
}

TEST_CASE("generate_algebra rejects size mismatches") {
    CHECK_THROWS_AS(generate_algebra({Matrix::Identity(2, 2)}, 3), DimensionMismatch);
}

TEST_CASE("commutant of the full algebra and of the scalars") {
    CHECK(commutant(full_matrix_algebra(2)).dim() == 1);
    CHECK(commutant(generate_algebra({}, 3)).dim() == 9);
}

TEST_CASE("the diagonal masa is its own commutant") {
    VNAlgebra masa = diagonal_masa(3);
    VNAlgebra c = commutant(masa);
    CHECK(c.dim() == 3);
    CHECK(algebra_distance(c, masa) <= 1e-9);
    // independent route: LU kernel of the stacked commutation equations
    auto lu = oracle::lu_commutant(masa.generators, 3);
    CHECK(static_cast<Eigen::Index>(lu.size()) == c.dim());
}

TEST_CASE("bicommutant returns the algebra") {
    Rng rng(7);
    for (int t = 0; t < 5; ++t) {
        Matrix g = rng.matrix(4, 4);
        VNAlgebra a = generate_algebra({g}, 4);
        CHECK(algebra_distance(commutant(commutant(a)), a) <= 1e-8);
    }
}

TEST_CASE("centre of a factor and of a two-block algebra") {
    CHECK(center(full_matrix_algebra(2)).dim() == 1);

    // M2 ⊕ M3 inside M5
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(3, 3));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(3, 0, 1) + E(3, 1, 2));
    Matrix g3 = dsum(E(2, 1, 0), Matrix::Zero(3, 3));
    Matrix g4 = dsum(Matrix::Zero(2, 2), E(3, 2, 0));
    VNAlgebra a = generate_algebra({g1, g2, g3, g4}, 5);
    CHECK(a.dim() == 13);
    VNAlgebra z = center(a);
    CHECK(z.dim() == 2);
    CHECK(contains(z, dsum(Matrix::Identity(2, 2), Matrix::Zero(3, 3))));

    VNAlgebra masa = diagonal_masa(3);
    CHECK(algebra_distance(center(masa), masa) <= 1e-9);
}

TEST_CASE("structure of a full factor, the scalars, and a doubled block") {
    StructureData st = structure(full_matrix_algebra(3), 1);
    REQUIRE(st.blocks() == 1);
    CHECK(st.block_dims[0] == 3);
    CHECK(st.multiplicities[0] == 1);

    StructureData sc = structure(generate_algebra({}, 4), 2);
    REQUIRE(sc.blocks() == 1);
    CHECK(sc.block_dims[0] == 1);
    CHECK(sc.multiplicities[0] == 4);

    // {x ⊕ x : x in M2} inside M4
    Matrix g = dsum(E(2, 0, 1), E(2, 0, 1));
    VNAlgebra a = generate_algebra({g}, 4);
    CHECK(a.dim() == 4);
    StructureData sd = structure(a, 3);
    REQUIRE(sd.blocks() == 1);
    CHECK(sd.block_dims[0] == 2);
    CHECK(sd.multiplicities[0] == 2);
}

TEST_CASE("structure invariants over random two-block algebras") {
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(3, 3));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(3, 0, 1) + E(3, 1, 2));
    VNAlgebra a = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 5);
    StructureData st = structure(a, 9);
    REQUIRE(st.blocks() == 2);
    Eigen::Index dim_total = 0, amb_total = 0;
    Matrix zsum = Matrix::Zero(5, 5);
    for (Eigen::Index k = 0; k < st.blocks(); ++k) {
        dim_total += st.block_dims[k] * st.block_dims[k];
        amb_total += st.block_dims[k] * st.multiplicities[k];
        zsum += st.central_minimal_projections[k];
    }
    CHECK(dim_total == a.dim());
    CHECK(amb_total == 5);
    CHECK((zsum - Matrix::Identity(5, 5)).norm() <= 1e-9);
    // canonical conjugation lands in the block-diagonal picture
    Matrix w = st.canonical_unitary;
    CHECK((w * w.adjoint() - Matrix::Identity(5, 5)).norm() <= 1e-9);
}

TEST_CASE("central support examples") {
    VNAlgebra m2 = full_matrix_algebra(2);
    CHECK((central_support(m2, E(2, 0, 0)) - Matrix::Identity(2, 2)).norm() <= 1e-9);

    // M2 ⊕ M2: support of E11 ⊕ 0 is I2 ⊕ 0
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(2, 2));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(2, 0, 1));
    VNAlgebra a = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 4);
    Matrix x = dsum(E(2, 0, 0), Matrix::Zero(2, 2));
    CHECK((central_support(a, x) - dsum(Matrix::Identity(2, 2), Matrix::Zero(2, 2))).norm() <=
          1e-9);
    CHECK(central_support(a, Matrix::Zero(4, 4)).norm() <= 1e-12);
    VNAlgebra scalars = generate_algebra({}, 2);
    CHECK_THROWS_AS(central_support(scalars, E(2, 0, 0)), NotInAlgebra);
}

TEST_CASE("abelian projections of full central support") {
    VNAlgebra m2 = full_matrix_algebra(2);
    Matrix e = abelian_projection_full(m2, 4);
    CHECK(is_projection(e));
    CHECK(std::llround(std::real(e.trace())) == 1);

    VNAlgebra masa = diagonal_masa(3);
    Matrix em = abelian_projection_full(masa, 4);
    CHECK((em - Matrix::Identity(3, 3)).norm() <= 1e-9);

    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(3, 3));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(3, 0, 1) + E(3, 1, 2));
    VNAlgebra a = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 5);
    Matrix ea = abelian_projection_full(a, 4);
    std::vector<Matrix> corner;
    for (const auto& b : a.basis) corner.push_back(ea * b * ea);
    CHECK(hs_orthonormalize(corner).size() == 2);
}

TEST_CASE("extension of abelian projections under a projection") {
    VNAlgebra m2 = full_matrix_algebra(2);
    SUBCASE("p = 1 leaves f untouched") {
        Matrix e = extend_abelian_projection(m2, Matrix::Identity(2, 2), E(2, 0, 0), 5);
        CHECK((e - E(2, 0, 0)).norm() <= 1e-9);
    }
    SUBCASE("extension fills the missing central support") {
        Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(2, 2));
        Matrix g2 = dsum(Matrix::Zero(2, 2), E(2, 0, 1));
        VNAlgebra a = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 4);
        Matrix p = dsum(Matrix::Identity(2, 2), Matrix::Zero(2, 2));
        Matrix f = dsum(E(2, 0, 0), Matrix::Zero(2, 2));
        Matrix e = extend_abelian_projection(a, p, f, 6);
        CHECK((e * p - f).norm() <= 1e-9);
        CHECK((p * e - f).norm() <= 1e-9);
        CHECK((central_support(a, e) - Matrix::Identity(4, 4)).norm() <= 1e-9);
        // the new piece is a rank-1 projection in the second block
        Matrix tail = e - f;
        CHECK(std::llround(std::real(tail.trace())) == 1);
    }
    SUBCASE("compressed corner: p = f = E11") {
        Matrix e = extend_abelian_projection(m2, E(2, 0, 0), E(2, 0, 0), 7);
        CHECK((e * E(2, 0, 0) - E(2, 0, 0)).norm() <= 1e-9);
        CHECK((central_support(m2, e) - Matrix::Identity(2, 2)).norm() <= 1e-9);
    }
    SUBCASE("rejects a non-abelian corner") {
        VNAlgebra m4 = full_matrix_algebra(4);
        Matrix p = Matrix::Zero(4, 4);
        p(0, 0) = p(1, 1) = p(2, 2) = 1.0;
        Matrix f = Matrix::Zero(4, 4);
        f(0, 0) = f(1, 1) = 1.0; // rank-2 inside p M4 p: not abelian
        CHECK_THROWS_AS(extend_abelian_projection(m4, p, f, 8), PreconditionViolated);
    }
}

TEST_CASE("partial isometries between equivalent projections") {
    VNAlgebra m2 = full_matrix_algebra(2);
    Matrix v = mvn_partial_isometry(m2, E(2, 0, 0), E(2, 1, 1), 11);
    CHECK((v.adjoint() * v - E(2, 0, 0)).norm() <= 1e-9);
    CHECK((v * v.adjoint() - E(2, 1, 1)).norm() <= 1e-9);

    Matrix w = mvn_partial_isometry(m2, E(2, 0, 0), E(2, 0, 0), 12);
    CHECK((w.adjoint() * w - E(2, 0, 0)).norm() <= 1e-9);

    // blockwise in M2 ⊕ M2
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(2, 2));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(2, 0, 1));
    VNAlgebra a = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 4);
    Matrix e = dsum(E(2, 0, 0), E(2, 0, 0));
    Matrix f = dsum(E(2, 1, 1), E(2, 0, 0));
    Matrix u = mvn_partial_isometry(a, e, f, 13);
    CHECK((u.adjoint() * u - e).norm() <= 1e-9);
    CHECK((u * u.adjoint() - f).norm() <= 1e-9);
    CHECK(contains(a, u));

    // non-equivalent projections are rejected
    Matrix bad = dsum(Matrix::Identity(2, 2), Matrix::Zero(2, 2));
    CHECK_THROWS_AS(mvn_partial_isometry(a, e, bad, 14), NotEquivalent);
}

TEST_CASE("relative double commutant fixes intermediate algebras") {
    VNAlgebra m3 = full_matrix_algebra(3);
    CHECK(algebra_distance(relative_double_commutant(m3, m3), m3) <= 1e-8);

    // N = M2 ⊕ M2, M = Z(N)
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(2, 2));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(2, 0, 1));
    VNAlgebra n = generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 4);
    VNAlgebra z = center(n);
    CHECK(algebra_distance(relative_double_commutant(n, z), z) <= 1e-8);

    // M generated by the centre and one block's unit rotation
    VNAlgebra m = generate_algebra({dsum(Matrix::Identity(2, 2), Matrix::Zero(2, 2)),
                                    dsum(E(2, 0, 1) + E(2, 1, 0), Matrix::Zero(2, 2))},
                                   4);
    CHECK(algebra_distance(relative_double_commutant(n, m), m) <= 1e-8);

    CHECK_THROWS_AS(relative_double_commutant(z, n), InclusionViolated);
}

TEST_CASE("compress restricts an algebra to a corner") {
    VNAlgebra m2 = full_matrix_algebra(2);
    CompressedAlgebra c = compress(m2, E(2, 0, 0));
    CHECK(c.algebra.ambient_dim == 1);
    CHECK(c.algebra.dim() == 1);
}
