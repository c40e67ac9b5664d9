#include <catch2/catch_amalgamated.hpp>

#include <lambdaforge/tensor.hpp>

#include <fstream>
#include <sstream>

using namespace lf;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_entries(const TensorTable &t) {
    int n = 0;
    const std::vector<long> d = t.dense_int();
    for (long v : d)
        if (v != 0)
            ++n;
    return n;
}

} // namespace

TEST_CASE("three-form component table") {
    const TensorTable &phi = phi0();
    CHECK(phi.rank() == 3);
    // +1 on 123, 145, 167, 246; -1 on 257, 347, 356 (1-based labels).
    CHECK(phi.get({0, 1, 2}) == 1);
    CHECK(phi.get({0, 3, 4}) == 1);
    CHECK(phi.get({0, 5, 6}) == 1);
    CHECK(phi.get({1, 3, 5}) == 1);
    CHECK(phi.get({1, 4, 6}) == -1);
    CHECK(phi.get({2, 3, 6}) == -1);
    CHECK(phi.get({2, 4, 5}) == -1);
    CHECK(phi.get({0, 1, 3}) == 0);
}

TEST_CASE("antisymmetric access rules") {
    const TensorTable &phi = phi0();
    // Permutation parity in the accessor.
    CHECK(phi.get({1, 0, 2}) == -1);
    CHECK(phi.get({2, 1, 0}) == -1);
    CHECK(phi.get({1, 2, 0}) == 1);
    // Repeated indices read as zero.
    CHECK(phi.get({0, 0, 2}) == 0);
    // Absent combination.
    CHECK(phi.get({0, 1, 3}) == 0);
    // Writes reject repeated indices outright.
    TensorTable t(2);
    CHECK_THROWS_AS(t.set({3, 3}, Rat(1)), std::invalid_argument);
    t.set({4, 1}, Rat(5));
    CHECK(t.get({1, 4}) == -5);
    CHECK_THROWS_AS(t.get({1}), std::invalid_argument);
}

TEST_CASE("four-form is the dual of the three-form") {
    const TensorTable &psi = psi0();
    CHECK(psi.rank() == 4);
    CHECK(psi.get({0, 1, 3, 6}) == 1);  // 1247
    CHECK(psi.get({0, 1, 4, 5}) == 1);  // 1256
    CHECK(psi.get({0, 2, 3, 5}) == 1);  // 1346
    CHECK(psi.get({0, 2, 4, 6}) == -1); // 1357
    CHECK(psi.get({1, 2, 3, 4}) == -1); // 2345
    CHECK(psi.get({1, 2, 5, 6}) == -1); // 2367
    CHECK(psi.get({3, 4, 5, 6}) == -1); // 4567

    // The dense expansion populates every permutation image of the stored
    // combinations: 7 * 3! and 7 * 4! nonzero components.
    CHECK(count_entries(phi0()) == 42);
    CHECK(count_entries(psi) == 168);

    // The duality is an involution in both directions for the chosen
    // orientation.
    CHECK(hodge_dual(phi0(), kG2Orientation) == psi);
    CHECK(hodge_dual(psi, kG2Orientation) == phi0());
    // With the opposite orientation both images flip sign, so applying the
    // (+1)-dual twice is still the identity on a rank-3 table in dimension 7.
    CHECK(hodge_dual(hodge_dual(phi0(), 1), 1) == phi0());
}

TEST_CASE("integer extraction guards") {
    TensorTable t(1);
    t.set({2}, Rat(1, 2));
    CHECK_THROWS_AS(t.dense_int(), std::domain_error);
    CHECK(phi0().dense_int().size() == 7u * 7u * 7u);
}

TEST_CASE("normalized products of factorial ratios") {
    CHECK(bessel_coeff(0, 0) == 1);
    CHECK(bessel_coeff(1, 0) == 1);
    CHECK(bessel_coeff(1, 1) == 1);
    CHECK(bessel_coeff(2, 1) == 3);
    CHECK(bessel_coeff(2, 2) == 3);
    CHECK(bessel_coeff(3, 2) == 15);
    CHECK(bessel_coeff(1, 2) == 0);
    CHECK(bessel_coeff(-1, 0) == 0);
}

TEST_CASE("all seven-dimensional cross-product identities hold") {
    for (int jobs : {1, 2}) {
        auto checks = g2_contraction_checks(jobs);
        REQUIRE(checks.size() == 9);
        for (const auto &c : checks) {
            INFO("jobs=" << jobs << " " << c.name << ": " << c.difference);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("identity scan localizes injected faults") {
    // A magnitude error on one component must break the norm contraction.
    TensorTable bad = phi0();
    bad.set({0, 1, 2}, Rat(2));
    auto checks = g2_contraction_checks(1, &bad);
    int failed = 0;
    bool norm_failed = false;
    for (const auto &c : checks) {
        if (!c.pass) {
            ++failed;
            if (c.name == "contraction_42")
                norm_failed = true;
            CHECK_FALSE(c.difference.empty());
        }
    }
    CHECK(norm_failed);
    CHECK(failed >= 5);

    // A pure sign flip preserves every squared contraction, so the norm
    // check stays green while most mixed identities fail.
    TensorTable flipped = phi0();
    flipped.set({0, 1, 2}, Rat(-1));
    auto checks2 = g2_contraction_checks(1, &flipped);
    int failed2 = 0;
    for (const auto &c : checks2) {
        if (c.name == "contraction_42") {
            CHECK(c.pass);
        } else if (!c.pass) {
            ++failed2;
        }
    }
    CHECK(failed2 == 6);
}

TEST_CASE("tensor serialization matches the frozen goldens") {
    std::string root = LF_SOURCE_DIR;
    CHECK(render_tensor("phi0", phi0()) == slurp(root + "/tests/golden/phi0.txt"));
    CHECK(render_tensor("psi0", psi0()) == slurp(root + "/tests/golden/psi0.txt"));
}
