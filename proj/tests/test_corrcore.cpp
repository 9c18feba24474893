#include <doctest.h>

#include "oracles.hpp"
#include "specscreen/corrcore.hpp"
#include "specscreen/error.hpp"
#include "specscreen/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace specscreen;
using cd = std::complex<double>;

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) { return (a - b).cwiseAbs().maxCoeff(); }

void check_correlation_invariants(const CorrelationMatrix& r) {
    const auto& v = r.values();
    CHECK(max_abs_diff(v, v.adjoint()) < 1e-10);
    for (Eigen::Index i = 0; i < v.rows(); ++i) CHECK(std::abs(v(i, i) - 1.0) < 1e-10);
    CHECK(v.cwiseAbs().maxCoeff() <= 1.0 + 1e-10);
    CHECK(min_eigenvalue(v) >= -1e-8);
}

}  // namespace

TEST_CASE("sample covariance examples") {
    Eigen::MatrixXcd two(2, 3);
    two << cd(1, 2), cd(3, 0), cd(-1, 1), cd(1, 2), cd(3, 0), cd(-1, 1);
    CHECK(sample_covariance(two).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXcd single(2, 1);
    single << cd(1, 0), cd(-1, 0);
    CHECK(sample_covariance(single)(0, 0) == cd(2.0, 0.0));

    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    Eigen::MatrixXcd real(20, 4);
    for (Eigen::Index i = 0; i < real.size(); ++i) real(i) = g(rng);
    CHECK(sample_covariance(real).imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("correlation from covariance") {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(3, 3);
    s.diagonal() << 2.0, 5.0, 0.5;
    CHECK(max_abs_diff(correlation_from_covariance(s).values(), Eigen::MatrixXcd::Identity(3, 3)) == 0.0);

    std::mt19937_64 rng(2);
    Eigen::MatrixXcd z = oracle::random_data(10, 3, rng);
    z.col(2) = z.col(0) * cd(0.3, -2.0);
    const auto r = correlation_from_covariance(sample_covariance(z));
    CHECK(std::abs(r.magnitude(0, 2) - 1.0) < 1e-12);

    z.col(1).setConstant(cd(4.0, 1.0));
    try {
        correlation_from_covariance(sample_covariance(z));
        FAIL("expected zero-variance error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Data);
        CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
    CHECK_THROWS_AS(uscores(z), Error);
}

TEST_CASE("property: U-scores reproduce R and agree with the brute-force oracle") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t m = 3 + rng() % 8, p = 2 + rng() % 5;
        Eigen::MatrixXcd z = oracle::random_data(m, p, rng);
        if (rep % 3 == 0) z *= 1e6;  // scale does not matter
        const auto u = uscores(z);
        REQUIRE(u.dimension() == m - 1);
        for (Eigen::Index q = 0; q < u.values().cols(); ++q) CHECK(std::abs(u.values().col(q).norm() - 1.0) < 1e-10);
        const auto gram = u.gram();
        check_correlation_invariants(gram);
        const auto direct = correlation_from_covariance(sample_covariance(z));
        CHECK(max_abs_diff(gram.values(), direct.values()) < 1e-8);
        if (p <= 4 && m <= 6) CHECK(max_abs_diff(direct.values(), oracle::correlation(z)) < 1e-10);
    }
}

TEST_CASE("property: |R| is invariant under per-column complex scaling") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t m = 4 + rng() % 10, p = 2 + rng() % 6;
        Eigen::MatrixXcd z = oracle::random_data(m, p, rng);
        const auto before = uscores(z).gram().values().cwiseAbs().eval();
        for (Eigen::Index q = 0; q < z.cols(); ++q) {
            cd c(u(rng), u(rng));
            if (std::abs(c) < 1e-3) c = 1.0;
            z.col(q) *= c;
        }
        const auto after = uscores(z).gram().values().cwiseAbs().eval();
        CHECK((before - after).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("U-score coordinates follow the uniform-sphere Beta law") {
    // |first coordinate|^2 of a uniform point on the unit sphere of C^{m-1}
    // is Beta(1, m-2): F(x) = 1 - (1-x)^{m-2}.
    const std::size_t m = 12, reps = 10000;
    std::vector<double> xs;
    xs.reserve(reps);
    Engine rng = substream(99, 0);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto u = uscores(gen_iid_complex_gaussian(2, m, rng));
        xs.push_back(std::norm(u.values()(0, 0)));
    }
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        const double f = 1.0 - std::pow(1.0 - xs[i], double(m - 2));
        ks = std::max({ks, std::abs(f - double(i) / reps), std::abs(f - double(i + 1) / reps)});
    }
    CHECK(ks < 1.628 / std::sqrt(double(reps)));
}

TEST_CASE("pseudo-inverse") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 2.0;
    const auto dp = pseudo_inverse_hermitian(d);
    CHECK(std::abs(dp(0, 0) - 0.5) < 1e-15);
    CHECK(std::abs(dp(1, 1)) < 1e-15);
    CHECK(std::abs(dp(0, 1)) < 1e-15);

    std::mt19937_64 rng(4);
    const auto z = oracle::random_data(30, 6, rng);
    const Eigen::MatrixXcd a = z.adjoint() * z;
    CHECK(max_abs_diff(a * pseudo_inverse_hermitian(a), Eigen::MatrixXcd::Identity(6, 6)) < 1e-8);

    Eigen::MatrixXcd bad = a;
    bad(0, 1) += cd(0.5, 0.0);
    CHECK_THROWS_AS(pseudo_inverse_hermitian(bad), Error);
}

TEST_CASE("property: rank-deficient pseudo-inverse") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t m = 3 + rng() % 8, p = 2 + rng() % 12;
        const auto r = uscores(oracle::random_data(m, p, rng)).gram();
        const auto rp = pseudo_inverse_hermitian(r.values());
        const std::size_t expected = std::min(p, m - 1);
        CHECK(hermitian_rank(r.values()) == expected);
        CHECK(hermitian_rank(rp) == expected);
        CHECK(max_abs_diff(rp, rp.adjoint()) < 1e-8);
        CHECK(max_abs_diff(r.values() * rp * r.values(), r.values()) < 1e-7);
    }
}

TEST_CASE("partial correlation") {
    CHECK(max_abs_diff(partial_correlation(CorrelationMatrix(Eigen::MatrixXcd::Identity(4, 4),
                                                             CorrelationKind::Correlation))
                           .values(),
                       Eigen::MatrixXcd::Identity(4, 4)) < 1e-14);

    const cd c(0.3, 0.4);
    Eigen::MatrixXcd r2(2, 2);
    r2 << 1.0, c, std::conj(c), 1.0;
    const auto p2 = partial_correlation(CorrelationMatrix(r2, CorrelationKind::Correlation));
    CHECK(p2.kind() == CorrelationKind::Partial);
    CHECK(std::abs(p2.values()(0, 1) + c) < 1e-12);
    CHECK(std::abs(p2.magnitude(0, 1) - std::abs(c)) < 1e-12);

    std::mt19937_64 rng(6);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t p = 2 + rng() % 3, m = p + 2 + rng() % 3;  // m <= 6 when p <= 4 (invertible R)
        const auto z = oracle::random_data(m, p, rng);
        const auto r = uscores(z).gram();
        const auto pc = partial_correlation(r);
        check_correlation_invariants(pc);
        CHECK(max_abs_diff(pc.values(), oracle::partial_from_inverse(oracle::correlation(z))) < 1e-10);
    }
}

TEST_CASE("property: partial U-scores reproduce P") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t m = 3 + rng() % 10, p = (m - 1) + rng() % 12;  // p >= m-1
        const auto u = uscores(oracle::random_data(m, p, rng));
        const auto up = uscores_partial(u);
        CHECK(up.kind() == CorrelationKind::Partial);
        for (Eigen::Index q = 0; q < up.values().cols(); ++q)
            CHECK(std::abs(up.values().col(q).norm() - 1.0) < 1e-10);
        const auto pg = up.gram();
        check_correlation_invariants(pg);
        CHECK(max_abs_diff(pg.values(), partial_correlation(u.gram()).values()) < 1e-8);
    }
}

TEST_CASE("partial U-scores need a nonsingular Gram matrix") {
    std::mt19937_64 rng(8);
    const auto u = uscores(oracle::random_data(10, 4, rng));  // p < m-1
    try {
        uscores_partial(u);
        FAIL("expected singular Gram error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Numeric);
    }
}

TEST_CASE("correlation matrix validation") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(2, 2);
    bad(0, 1) = 0.5;
    CHECK_THROWS_AS(CorrelationMatrix(bad, CorrelationKind::Correlation), Error);
    bad(1, 0) = 0.5;
    bad(1, 1) = 1.1;
    CHECK_THROWS_AS(CorrelationMatrix(bad, CorrelationKind::Correlation), Error);
    CHECK_THROWS_AS(uscores(Eigen::MatrixXcd::Ones(2, 3)), Error);
}
