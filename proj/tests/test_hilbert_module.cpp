#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wstar/hilbert_module.hpp"

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

VNAlgebra two_blocks_m2() {
    Matrix g1 = dsum(E(2, 0, 1), Matrix::Zero(2, 2));
    Matrix g2 = dsum(Matrix::Zero(2, 2), E(2, 0, 1));
    return generate_algebra({g1, g1.adjoint(), g2, g2.adjoint()}, 4);
}

} // namespace

TEST_CASE("module over M2 with e = E11") {
    VNAlgebra n = full_matrix_algebra(2);
    ModulePtr mod = make_module(n, E(2, 0, 0), 1);
    CHECK(mod->dim() == 2);
    CHECK(mod->characters() == 1);

    SUBCASE("conditional expectation reads the (1,1) entry") {
        Rng rng(2);
        Matrix x = rng.matrix(2, 2);
        Matrix z = conditional_expectation(mod, x);
        CHECK((z - x(0, 0) * Matrix::Identity(2, 2)).norm() <= 1e-10);
        CHECK((conditional_expectation(mod, Matrix::Identity(2, 2)) -
               Matrix::Identity(2, 2))
                  .norm() <= 1e-12);
        // defining identity e x e = z e
        CHECK((E(2, 0, 0) * x * E(2, 0, 0) - z * E(2, 0, 0)).norm() <= 1e-10);
    }

    SUBCASE("inner products") {
        CHECK((inner(mod, E(2, 0, 0), E(2, 0, 0)) - Matrix::Identity(2, 2)).norm() <= 1e-12);
        CHECK(inner(mod, E(2, 0, 0), E(2, 1, 0)).norm() <= 1e-12);
        Rng rng(3);
        Matrix x = rng.span_element(mod->basis);
        double lhs = std::sqrt(op_norm(inner(mod, x, x)));
        CHECK(std::abs(lhs - op_norm(x)) <= 1e-9 * std::max(1.0, op_norm(x)));
    }

    SUBCASE("L_rep of e is a rank-one idempotent on the module") {
        ModuleMap t = L_rep(mod, E(2, 0, 0));
        CHECK((t.action * t.action - t.action).norm() <= 1e-10);
        CHECK(std::llround(std::real(t.action.trace())) == 1);
        ModuleMap id = L_rep(mod, Matrix::Identity(2, 2));
        CHECK((id.action - Matrix::Identity(2, 2)).norm() <= 1e-10);
    }

    SUBCASE("submodule of the single column") {
        Submodule sub = submodule_projection(mod, {E(2, 0, 0)});
        CHECK((sub.p - E(2, 0, 0)).norm() <= 1e-9);
        CHECK(sub.space->dim() == 1);
        Submodule all = submodule_projection(mod, mod->basis);
        CHECK((all.p - Matrix::Identity(2, 2)).norm() <= 1e-9);
        Rng rng(5);
        Matrix x = rng.span_element(mod->basis);
        Submodule one = submodule_projection(mod, {x});
        CHECK(one.space->dim() == 1);
        CHECK(std::llround(std::real(one.p.trace())) == 1);
    }
}

TEST_CASE("conditional expectation is blockwise over two blocks") {
    VNAlgebra n = two_blocks_m2();
    Matrix e = dsum(E(2, 0, 0), E(2, 0, 0));
    ModulePtr mod = make_module(n, e, 2);
    CHECK(mod->dim() == 4);
    CHECK(mod->characters() == 2);
    Rng rng(7);
    Matrix x = rng.span_element(n.basis);
    Matrix z = conditional_expectation(mod, x);
    CHECK((e * x * e - z * e).norm() <= 1e-9);
    CHECK(membership_residual(mod->Z, z) <= 1e-9);
}

TEST_CASE("module rejects non-abelian or partial-support projections") {
    VNAlgebra n = two_blocks_m2();
    // support only in the first block
    Matrix bad = dsum(E(2, 0, 0), Matrix::Zero(2, 2));
    CHECK_THROWS_AS(make_module(n, bad, 3), PreconditionViolated);
    VNAlgebra m4 = full_matrix_algebra(4);
    Matrix rank2 = E(4, 0, 0) + E(4, 1, 1); // not abelian in M4
    CHECK_THROWS_AS(make_module(m4, rank2, 3), PreconditionViolated);
}

TEST_CASE("L_rep and L_inverse round trip with the frame cross-check") {
    VNAlgebra n = two_blocks_m2();
    Matrix e = dsum(E(2, 0, 0), E(2, 0, 0));
    ModulePtr mod = make_module(n, e, 4);
    Rng rng(11);
    Matrix a = rng.span_element(n.basis);
    ModuleMap t = L_rep(mod, a);
    CHECK(z_linearity_residual(t) <= 1e-9);
    Matrix back = L_inverse(mod, t);
    CHECK((back - a).norm() <= 1e-8 * std::max(1.0, a.norm()));

    // identity map inverts to the identity of N
    CHECK((L_inverse(mod, identity_map(mod)) - Matrix::Identity(4, 4)).norm() <= 1e-9);

    // a central rescaling is recovered as a central element
    Matrix z = 2.0 * mod->st.central_minimal_projections[0] +
               Complex(0.0, 1.0) * mod->st.central_minimal_projections[1];
    ModuleMap tz = L_rep(mod, z);
    Matrix zback = L_inverse(mod, tz);
    CHECK((zback - z).norm() <= 1e-9);

    // maps that are not left multiplications are rejected: swap two fibers
    if (mod->fiber_dim(0) == mod->fiber_dim(1)) {
        Matrix swap = Matrix::Zero(mod->dim(), mod->dim());
        swap.topRightCorner(2, 2) = Matrix::Identity(2, 2);
        swap.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
        ModuleMap bad{mod, mod, false, swap};
        CHECK_THROWS_AS(L_inverse(mod, bad), NotZLinear);
    }
}

TEST_CASE("module map norms agree with operator norms") {
    VNAlgebra n = two_blocks_m2();
    Matrix e = dsum(E(2, 0, 0), E(2, 0, 0));
    ModulePtr mod = make_module(n, e, 5);
    Rng rng(13);
    for (int t = 0; t < 5; ++t) {
        Matrix a = rng.span_element(n.basis);
        CHECK(std::abs(module_map_norm(L_rep(mod, a)) - op_norm(a)) <=
              1e-8 * std::max(1.0, op_norm(a)));
    }
}

TEST_CASE("adjoints of module maps") {
    VNAlgebra n = two_blocks_m2();
    Matrix e = dsum(E(2, 0, 0), E(2, 0, 0));
    ModulePtr mod = make_module(n, e, 6);
    Rng rng(17);
    Matrix a = rng.span_element(n.basis);
    ModuleMap t = L_rep(mod, a);
    ModuleMap ts = adjoint(t);
    CHECK((ts.action - L_rep(mod, a.adjoint()).action).norm() <= 1e-8);
    double res = 0.0;
    for (const auto& xa : mod->basis)
        for (const auto& xb : mod->basis)
            res = std::max(res,
                           (inner(mod, t.apply(xa), xb) - inner(mod, xa, ts.apply(xb))).norm());
    CHECK(res <= 1e-9);
    // C*-identity for the module operator norm
    CHECK(std::abs(module_map_norm(compose(ts, t)) -
                   module_map_norm(t) * module_map_norm(t)) <= 1e-7);
}

TEST_CASE("U_v intertwines the module representations") {
    VNAlgebra n = full_matrix_algebra(2);
    ModulePtr mod_e = make_module(n, E(2, 0, 0), 7);
    SUBCASE("v = e gives the identity") {
        ModuleMap u = U_v(mod_e, mod_e, E(2, 0, 0));
        CHECK((u.action - Matrix::Identity(2, 2)).norm() <= 1e-10);
    }
    SUBCASE("v = E21 moves the column spaces") {
        ModulePtr mod_f = make_module(n, E(2, 1, 1), 8);
        Matrix v = E(2, 1, 0); // v*v = E11, vv* = E22
        ModuleMap u = U_v(mod_f, mod_e, v);
        ModuleMap uinv = U_v(mod_e, mod_f, v.adjoint());
        CHECK((compose(u, uinv).action - Matrix::Identity(2, 2)).norm() <= 1e-10);
        CHECK((adjoint(u).action - uinv.action).norm() <= 1e-9);
        Rng rng(19);
        Matrix a = rng.matrix(2, 2);
        CHECK((compose(u, L_rep(mod_f, a)).action - compose(L_rep(mod_e, a), u).action)
                  .norm() <= 1e-9);
        CHECK_THROWS_AS(U_v(mod_f, mod_e, E(2, 0, 1)), NotAPartialIsometry);
    }
}

TEST_CASE("maps between submodules are a x v*") {
    VNAlgebra n = two_blocks_m2();
    StructureData st = structure(n, 21);
    Matrix e1 = abelian_projection_full(n, st);
    ModulePtr mod1 = make_module(n, e1, st);
    Rng rng(23);
    Matrix e2 = abelian_projection_full(n, 24);
    ModulePtr mod2 = make_module(n, e2, st);
    Matrix v = mvn_partial_isometry(n, e1, e2, st, 25);

    Matrix p1 = dsum(Matrix::Identity(2, 2), Matrix::Zero(2, 2));
    Matrix p2 = dsum(E(2, 0, 0), Matrix::Identity(2, 2));
    Submodule s1{mod1, p1, restrict_module(mod1, p1)};
    Submodule s2{mod2, p2, restrict_module(mod2, p2)};

    Matrix a = p2 * rng.span_element(n.basis) * p1;
    ModuleMap t = module_map_between(s1, s2, v, a);
    CHECK(std::abs(module_map_norm(t) - op_norm(a)) <= 1e-8 * std::max(1.0, op_norm(a)));
    CHECK((map_to_element(s1, s2, v, t) - a).norm() <= 1e-8 * std::max(1.0, a.norm()));
    CHECK((adjoint(t).action -
           module_map_between(s2, s1, v.adjoint(), a.adjoint()).action)
              .norm() <= 1e-9);
    CHECK((module_map_between(s1, s2, v, Matrix::Zero(4, 4)).action).norm() <= 1e-12);
    CHECK_THROWS_AS(module_map_between(s1, s2, v, rng.span_element(n.basis) + p2), NotCompressed);
}

TEST_CASE("Z-unitary equivalence of submodules tracks blockwise ranks") {
    VNAlgebra n = two_blocks_m2();
    StructureData st = structure(n, 31);
    Matrix e = abelian_projection_full(n, st);
    ModulePtr mod = make_module(n, e, st);

    Matrix id2 = Matrix::Identity(2, 2);
    Matrix p1 = dsum(E(2, 0, 0), id2);
    Matrix p2 = dsum(E(2, 1, 1), id2);
    Submodule s1{mod, p1, restrict_module(mod, p1)};
    Submodule s2{mod, p2, restrict_module(mod, p2)};
    auto u = z_unitary_equivalence(s1, s2, 33);
    REQUIRE(u.has_value());
    CHECK((u->adjoint() * *u - p1).norm() <= 1e-9);
    CHECK((*u * u->adjoint() - p2).norm() <= 1e-9);

    Matrix q1 = dsum(E(2, 0, 0), Matrix::Zero(2, 2));
    Matrix q2 = dsum(id2, Matrix::Zero(2, 2));
    Submodule t1{mod, q1, restrict_module(mod, q1)};
    Submodule t2{mod, q2, restrict_module(mod, q2)};
    CHECK(!z_unitary_equivalence(t1, t2, 34).has_value());

    SUBCASE("equal projections give back the projection") {
        auto same = z_unitary_equivalence(s1, s1, 35);
        REQUIRE(same.has_value());
        CHECK((same->adjoint() * *same - p1).norm() <= 1e-9);
    }
}

TEST_CASE("module frame resolves the identity") {
    VNAlgebra n = two_blocks_m2();
    StructureData st = structure(n, 41);
    Matrix e = abelian_projection_full(n, st);
    ModulePtr mod = make_module(n, e, st);
    auto frame = module_frame(mod, 42);
    Matrix sum = Matrix::Zero(4, 4);
    for (const auto& v : frame) {
        sum += v * v.adjoint();
        CHECK(module_residual(mod, v) <= 1e-9);
    }
    CHECK((sum - Matrix::Identity(4, 4)).norm() <= 1e-9);
}
