#include "nqca/local_maps.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace nqca;

namespace {

double maxdiff(const Matrix2& a, const Matrix2& b) { return (a - b).cwiseAbs().maxCoeff(); }

Matrix2 mat(cplx a, cplx b, cplx c, cplx d) {
    Matrix2 m;
    m << a, b, c, d;
    return m;
}

Matrix2 random_qubit_state(std::mt19937_64& rng) { return Matrix2(oracle::random_density(rng, 2)); }

} // namespace

TEST_CASE("pair_unitary entries") {
    CHECK(maxdiff(pair_unitary(0, 0, 0).matrix(), Matrix2::Identity()) < 1e-15);

    const double r = 1 / std::sqrt(2.0);
    CHECK(maxdiff(pair_unitary(pi / 4, 0, 0).matrix(), mat(r, r, -r, r)) < 1e-15);
    CHECK(maxdiff(pair_unitary(pi / 4, pi, 0).matrix(), mat(r, r, r, -r)) < 1e-15);
}

TEST_CASE("pair_unitary is unitary and transfers with probability sin^2 theta") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 100; ++k) {
        const double th = oracle::uniform(rng, -10, 10);
        const auto u = pair_unitary(th, oracle::uniform(rng, -10, 10), oracle::uniform(rng, -10, 10));
        CHECK(maxdiff(u.matrix().adjoint() * u.matrix(), Matrix2::Identity()) < 1e-12);
        CHECK(std::norm(u.matrix()(1, 0)) == doctest::Approx(std::pow(std::sin(th), 2)).epsilon(1e-12));
        CHECK(u.theta() >= 0.0);
        CHECK(u.theta() < 2 * pi);
    }
}

TEST_CASE("dephasing_kraus") {
    CHECK(dephasing_kraus(0).operators.size() == 1);
    CHECK(maxdiff(dephasing_kraus(0).operators[0], Matrix2::Identity()) == 0.0);

    const Matrix2 rho = mat(0.3, cplx(0.2, 0.1), cplx(0.2, -0.1), 0.7);
    CHECK(maxdiff(dephasing_kraus(1).apply(rho), mat(0.3, 0, 0, 0.7)) < 1e-15);

    const Matrix2 plus = mat(0.5, 0.5, 0.5, 0.5);
    CHECK(maxdiff(dephasing_kraus(0.3).apply(plus), mat(0.5, 0.35, 0.35, 0.5)) < 1e-15);

    CHECK_THROWS_AS(dephasing_kraus(-0.1), DomainError);
    CHECK_THROWS_AS(dephasing_kraus(1.1), DomainError);
}

TEST_CASE("damping_kraus") {
    const Matrix2 up = mat(0, 0, 0, 1);
    const Matrix2 down = mat(1, 0, 0, 0);
    CHECK(maxdiff(damping_kraus(0).apply(up), up) < 1e-15);
    CHECK(maxdiff(damping_kraus(1).apply(up), down) < 1e-15);
    CHECK(maxdiff(damping_kraus(-1).apply(down), up) < 1e-15);
    CHECK_THROWS_AS(damping_kraus(1.5), DomainError);
    CHECK_THROWS_AS(damping_kraus(-1.01), DomainError);
}

TEST_CASE("verify_cptp") {
    CHECK(verify_cptp(dephasing_kraus(0.5), 1e-12).passed());
    CHECK(verify_cptp(damping_kraus(0.7), 1e-12).passed());

    // D_2 without the factor 1/2 breaks completeness
    const double xi = 0.5;
    const Matrix2 id = pauli::identity();
    const Matrix2 sz = pauli::z();
    KrausSet literal{ChannelKind::dephasing,
                     {std::sqrt(1 - xi) * id, std::sqrt(xi) * (id + sz) / 2.0, std::sqrt(xi) * (sz - id)},
                     xi,
                     0.0};
    const auto r = verify_cptp(literal, 1e-12);
    CHECK_FALSE(r.complete);
    CHECK(r.completeness_deviation == doctest::Approx(1.5));
    CHECK(r.completely_positive);
}

TEST_CASE("compose_pair_map") {
    const auto u = pair_unitary(0.3, 1.1, -0.4);
    const auto noiseless = compose_pair_map(u, 0, 0);
    REQUIRE(noiseless.kraus.operators.size() == 1);
    CHECK(maxdiff(noiseless.kraus.operators[0], u.matrix()) == 0.0);
    CHECK(noiseless.kraus.kind == ChannelKind::unitary);

    const auto full = compose_pair_map(pair_unitary(0, 0, 0), 1, 0);
    CHECK(maxdiff(full.kraus.apply(mat(0.5, 0.5, 0.5, 0.5)), mat(0.5, 0, 0, 0.5)) < 1e-15);

    // sequential closed-form oracle
    const auto m = compose_pair_map(pair_unitary(pi / 4, 0, 0), 0.3, 0.2);
    const Matrix2 rho = mat(1, 0, 0, 0);
    CHECK(maxdiff(m.kraus.apply(rho), oracle::sequential_channel(rho, pi / 4, 0, 0, 0.3, 0.2)) < 1e-14);

    CHECK_THROWS_AS(compose_pair_map(u, 2, 0), DomainError);
    CHECK_THROWS_AS(compose_pair_map(u, 0, -2), DomainError);
}

TEST_CASE("composed maps match the sequential oracle and stay CPTP") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 200; ++k) {
        const double th = oracle::uniform(rng, 0, 2 * pi);
        const double p1 = oracle::uniform(rng, 0, 2 * pi);
        const double p2 = oracle::uniform(rng, 0, 2 * pi);
        const double xi = oracle::uniform(rng, 0, 1);
        const double eta = oracle::uniform(rng, -1, 1);
        const auto m = compose_pair_map(pair_unitary(th, p1, p2), xi, eta);
        const auto rep = verify_cptp(m.kraus, 1e-12);
        CHECK(rep.passed());
        const Matrix2 rho = random_qubit_state(rng);
        CHECK(maxdiff(m.kraus.apply(rho), oracle::sequential_channel(rho, th, p1, p2, xi, eta)) < 1e-14);
    }
}

TEST_CASE("pruning does not change the channel") {
    // xi = 0 and eta = 0 prune all but one of the six operators
    std::mt19937_64 rng(3);
    const auto u = pair_unitary(0.7, 0.2, 0.9);
    const auto full = oracle::composed_kraus(0.7, 0.2, 0.9, 0.0, 0.0);
    const auto m = compose_pair_map(u, 0.0, 0.0);
    for (int k = 0; k < 20; ++k) {
        const Matrix2 rho = random_qubit_state(rng);
        Matrix2 ref = Matrix2::Zero();
        for (const auto& op : full) ref += op * rho * op.adjoint();
        CHECK(maxdiff(m.kraus.apply(rho), ref) < 1e-14);
    }
}

TEST_CASE("channel inversion identity") {
    std::mt19937_64 rng(5);
    const Matrix2 sx = pauli::x();
    for (int k = 0; k < 100; ++k) {
        const double eta = oracle::uniform(rng, 1e-9, 1);
        const Matrix2 rho = random_qubit_state(rng);
        const Matrix2 lhs = damping_kraus(-eta).apply(rho);
        const Matrix2 rhs = sx * damping_kraus(eta).apply(sx * rho * sx) * sx;
        CHECK(maxdiff(lhs, rhs) < 1e-14);
    }
}

TEST_CASE("dephasing leaves diagonal states fixed") {
    std::mt19937_64 rng(9);
    for (int k = 0; k < 50; ++k) {
        const double p = oracle::uniform(rng, 0, 1);
        const Matrix2 rho = mat(p, 0, 0, 1 - p);
        CHECK(maxdiff(dephasing_kraus(oracle::uniform(rng, 0, 1)).apply(rho), rho) < 1e-15);
    }
}

TEST_CASE("vacuum policy") {
    CHECK(VacuumPolicy::first().is_first());
    CHECK_THROWS_AS(VacuumPolicy::custom({}), DomainError);
    CHECK_THROWS_AS(VacuumPolicy::custom({0.5, 0.5}), DomainError);
    CHECK_THROWS_AS(VacuumPolicy::custom({1, 0, 0, 0, 0, 0, 0}), DomainError);
    const auto p = VacuumPolicy::custom({0.6, 0.8});
    CHECK_FALSE(p.is_first());

    // cross operator for pure dephasing and U = 1 is sqrt(1 - xi) * 1
    const auto m = compose_pair_map(pair_unitary(0, 0, 0), 0.36, 0);
    CHECK(maxdiff(m.cross, 0.8 * Matrix2::Identity()) < 1e-15);
}

TEST_CASE("reparametrize") {
    const auto sym = reparametrize(0.3, 0.3);
    CHECK(sym.eta == 0.0);

    const auto r = reparametrize(0.75, 0.25);
    CHECK(r.eta == doctest::Approx(0.5));
    CHECK(r.theta == doctest::Approx(pi / 4));

    CHECK_THROWS_AS(reparametrize(1, 0), SingularParameterError);
    CHECK_THROWS_AS(reparametrize(0, 1), SingularParameterError);
    CHECK(reparametrize(0.9, 0.0).theta == doctest::Approx(0.0));
    CHECK_THROWS_AS(reparametrize(-0.1, 0.2), DomainError);
    CHECK_THROWS_AS(reparametrize(0.5, 1.5), DomainError);
}
