#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"

using namespace frust;
using testutil::random_sign_matrix;
using testutil::triangle;

namespace {

// Brute-force transitivity: for every choice of middle vertex b,
// sign(a,b)*sign(b,c) must imply (equal) sign(a,c). Independent of the
// product shortcut under test.
bool implication_oracle(std::int8_t ab, std::int8_t bc, std::int8_t ac) {
    struct Edge {
        std::int8_t lhs1, lhs2, rhs;
    };
    const Edge orderings[] = {
        {ab, bc, ac}, // middle B
        {ab, ac, bc}, // middle A
        {ac, bc, ab}, // middle C
    };
    for (const auto& o : orderings)
        if (static_cast<int>(o.lhs1) * static_cast<int>(o.lhs2) != static_cast<int>(o.rhs))
            return false;
    return true;
}

std::vector<std::string> plaquette_sectors(const SignMatrix& sm, const Plaquette& p) {
    return {sm.sectors[p.members[0]], sm.sectors[p.members[1]], sm.sectors[p.members[2]]};
}

} // namespace

TEST_CASE("sign algebra behaves like {-1,+1} under multiplication") {
    CHECK(Sign::plus * Sign::plus == Sign::plus);
    CHECK(Sign::plus * Sign::minus == Sign::minus);
    CHECK(Sign::minus * Sign::minus == Sign::plus);
    CHECK(to_int(Sign::minus) * to_int(Sign::minus) == 1); // value squared is +1
    CHECK(sign_of(-0.003) == Sign::minus);
    CHECK(sign_of(0.75) == Sign::plus);
}

TEST_CASE("sign_matrix reproduces the 1987-H2 reference signs") {
    const auto sm = sign_matrix(reference_matrix_1987h2(), 0.0);
    auto sig = [&](const char* a, const char* b) {
        return sm.sign(sm.index_of(a), sm.index_of(b));
    };
    CHECK(sig("CRB", "USB") == Sign::minus);
    CHECK(sig("CRB", "SPX") == Sign::plus);
    CHECK(sig("CRB", "USD") == Sign::plus);
    CHECK(sig("CRB", "XAU") == Sign::plus);
    CHECK(sig("USB", "SPX") == Sign::plus);
    CHECK(sig("USB", "USD") == Sign::minus);
    CHECK(sig("USB", "XAU") == Sign::minus);
    CHECK(sig("SPX", "USD") == Sign::plus);
    CHECK(sig("SPX", "XAU") == Sign::plus);
    CHECK(sig("USD", "XAU") == Sign::minus);
    CHECK(sm.zero_pairs().empty());
}

TEST_CASE("sign_matrix: exact zero lands in zero_pairs at zero_tol 0") {
    const std::vector<double> lower = {0.0, -0.5, 0.25};
    const auto sm = sign_matrix(make_corr_matrix(WindowId{1987, 1}, {"A", "B", "C"}, lower), 0.0);
    const auto zp = sm.zero_pairs();
    REQUIRE(zp.size() == 1);
    CHECK(zp[0] == std::pair<std::size_t, std::size_t>{0, 1});
    CHECK(sm.is_degenerate(0, 1));
    CHECK(sm.is_degenerate(1, 0));
    CHECK_THROWS_AS(sm.sign(0, 1), DegenerateDataError);
    CHECK(sm.sign(1, 2) == Sign::plus);
}

TEST_CASE("sign_matrix: a positive tolerance widens the unsigned band") {
    const std::vector<double> lower = {0.05, -0.5, 0.25};
    const auto cm = make_corr_matrix(WindowId{1987, 1}, {"A", "B", "C"}, lower);
    CHECK(sign_matrix(cm, 0.0).zero_pairs().empty());
    CHECK(sign_matrix(cm, 0.05).zero_pairs().size() == 1); // band is inclusive
    CHECK(sign_matrix(cm, 0.3).zero_pairs().size() == 2);  // 0.05 and 0.25 in, -0.5 out
    CHECK_THROWS_AS(sign_matrix(cm, -0.1), ValidationError);
}

TEST_CASE("sign_matrix: all-positive matrix has all +1 signs and no zero pairs") {
    const std::vector<double> lower(10, 0.4);
    std::vector<std::string> sectors = {"A", "B", "C", "D", "E"};
    const auto sm = sign_matrix(make_corr_matrix(WindowId{1987, 1}, sectors, lower), 0.0);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(sm.raw(i, j) == 1);
    CHECK(sm.zero_pairs().empty());
}

TEST_CASE("plaquette_phi on the 1987-H2 reference") {
    const auto sm = sign_matrix(reference_matrix_1987h2(), 0.0);
    auto phi = [&](const char* a, const char* b, const char* c) {
        return plaquette_phi(sm, Plaquette::of(sm.index_of(a), sm.index_of(b), sm.index_of(c)));
    };
    CHECK(phi("CRB", "SPX", "USB") == Sign::minus); // signs (+,-,+): frustrated
    CHECK(phi("CRB", "SPX", "XAU") == Sign::plus);  // signs (+,+,+)
}

TEST_CASE("plaquette with exactly one negative edge is always frustrated") {
    for (int where = 0; where < 3; ++where) {
        const std::int8_t ab = where == 0 ? -1 : 1;
        const std::int8_t bc = where == 1 ? -1 : 1;
        const std::int8_t ac = where == 2 ? -1 : 1;
        const auto sm = triangle(ab, bc, ac);
        CHECK(plaquette_phi(sm, Plaquette::of(0, 1, 2)) == Sign::minus);
    }
}

TEST_CASE("plaquette_phi is permutation-invariant") {
    std::mt19937 rng(131);
    const auto sm = random_sign_matrix(rng, 6);
    const std::size_t perms[][3] = {{0, 2, 4}, {2, 0, 4}, {4, 2, 0}, {0, 4, 2}, {2, 4, 0}, {4, 0, 2}};
    const Sign expected = plaquette_phi(sm, Plaquette::of(0, 2, 4));
    for (const auto& p : perms)
        CHECK(plaquette_phi(sm, Plaquette::of(p[0], p[1], p[2])) == expected);
    CHECK_THROWS_AS(Plaquette::of(1, 1, 2), ValidationError);
}

TEST_CASE("is_transitive_triple matches the implication oracle on all 8 assignments") {
    for (int bits = 0; bits < 8; ++bits) {
        const std::int8_t ab = (bits & 1) ? 1 : -1;
        const std::int8_t bc = (bits & 2) ? 1 : -1;
        const std::int8_t ac = (bits & 4) ? 1 : -1;
        const auto sm = triangle(ab, bc, ac);
        CHECK(is_transitive_triple(sm, Plaquette::of(0, 1, 2)) ==
              implication_oracle(ab, bc, ac));
    }
    // named cases: two negatives even, three negatives odd
    CHECK(is_transitive_triple(triangle(-1, -1, 1), Plaquette::of(0, 1, 2)));
    CHECK(is_transitive_triple(triangle(-1, 1, -1), Plaquette::of(0, 1, 2)));
    CHECK(!is_transitive_triple(triangle(-1, -1, -1), Plaquette::of(0, 1, 2)));
}

TEST_CASE("decompose on the 1987-H2 reference: |V_T|=4, |V_F|=6, the named triples") {
    const auto sm = sign_matrix(reference_matrix_1987h2(), 0.0);
    const auto dec = decompose(sm);
    REQUIRE(dec.transitive.size() == 4);
    REQUIRE(dec.frustrated.size() == 6);
    CHECK(dec.degenerate.empty());

    std::set<std::vector<std::string>> vt;
    for (const auto& p : dec.transitive) vt.insert(plaquette_sectors(sm, p));
    // canonical member order follows the sector list CRB,USB,SPX,USD,XAU
    CHECK(vt.count({"CRB", "USB", "USD"}) == 1);
    CHECK(vt.count({"CRB", "USB", "XAU"}) == 1);
    CHECK(vt.count({"CRB", "SPX", "USD"}) == 1);
    CHECK(vt.count({"CRB", "SPX", "XAU"}) == 1);

    CHECK(preorder_cover(dec, sm.size()));
}

TEST_CASE("decompose: all-positive m=5 gives 10 transitive, m=3 gives one plaquette") {
    const std::vector<double> lower(10, 0.4);
    const auto sm5 =
        sign_matrix(make_corr_matrix(WindowId{1987, 1}, {"A", "B", "C", "D", "E"}, lower), 0.0);
    const auto dec5 = decompose(sm5);
    CHECK(dec5.transitive.size() == 10);
    CHECK(dec5.frustrated.empty());

    const std::vector<double> lower3 = {0.5, -0.5, 0.5};
    const auto sm3 = sign_matrix(make_corr_matrix(WindowId{1987, 1}, {"A", "B", "C"}, lower3), 0.0);
    const auto dec3 = decompose(sm3);
    CHECK(dec3.transitive.size() + dec3.frustrated.size() + dec3.degenerate.size() == 1);
}

TEST_CASE("decompose partitions all C(m,3) plaquettes, degenerate pairs included") {
    std::mt19937 rng(137);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 3 + rng() % 5;
        const auto sm = random_sign_matrix(rng, m, /*zero_prob=*/0.2);
        const auto dec = decompose(sm);
        const std::size_t total = m * (m - 1) * (m - 2) / 6;
        CHECK(dec.transitive.size() + dec.frustrated.size() + dec.degenerate.size() == total);

        std::set<Plaquette> all;
        for (const auto& v : {dec.transitive, dec.frustrated, dec.degenerate})
            for (const auto& p : v) CHECK(all.insert(p).second); // pairwise disjoint
        // every degenerate plaquette touches a zero pair, no signed one does
        for (const auto& p : dec.degenerate) {
            const auto [a, b, c] = p.members;
            CHECK((sm.is_degenerate(a, b) || sm.is_degenerate(b, c) || sm.is_degenerate(a, c)));
        }
        for (const auto& v : {dec.transitive, dec.frustrated})
            for (const auto& p : v) {
                const auto [a, b, c] = p.members;
                CHECK(!sm.is_degenerate(a, b));
                CHECK(!sm.is_degenerate(b, c));
                CHECK(!sm.is_degenerate(a, c));
            }
    }
}

TEST_CASE("flipping every edge at one sector leaves all plaquette phis unchanged") {
    std::mt19937 rng(139);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 4 + rng() % 4;
        auto sm = random_sign_matrix(rng, m);
        const auto before = decompose(sm);

        const std::size_t flip = rng() % m;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == flip) continue;
            sm.cells[flip * m + j] = static_cast<std::int8_t>(-sm.cells[flip * m + j]);
            sm.cells[j * m + flip] = static_cast<std::int8_t>(-sm.cells[j * m + flip]);
        }
        const auto after = decompose(sm);
        CHECK(before.transitive == after.transitive); // two incident edges cancel
        CHECK(before.frustrated == after.frustrated);
    }
}

TEST_CASE("preorder_cover edge cases") {
    PlaquetteDecomposition empty;
    CHECK(!preorder_cover(empty, 5)); // V_T empty, m >= 3

    PlaquetteDecomposition single;
    single.transitive.push_back(Plaquette::of(0, 1, 2));
    CHECK(preorder_cover(single, 3));  // one triple covers m=3
    CHECK(!preorder_cover(single, 4)); // but not m=4
}

TEST_CASE("plaquette_phi refuses plaquettes touching a zero pair") {
    const std::vector<double> lower = {0.0, -0.5, 0.25};
    const auto sm = sign_matrix(make_corr_matrix(WindowId{1987, 1}, {"A", "B", "C"}, lower), 0.0);
    CHECK_THROWS_AS(plaquette_phi(sm, Plaquette::of(0, 1, 2)), DegenerateDataError);
    const auto dec = decompose(sm);
    CHECK(dec.degenerate.size() == 1);
    CHECK(dec.transitive.empty());
    CHECK(dec.frustrated.empty());
}
