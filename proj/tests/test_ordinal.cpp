#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "rreal/ordinal.hpp"

using namespace rreal;

namespace {

// Independent mini-oracle for ordinals below w^2: alpha = w*m + n.
struct WSq {
    std::uint64_t m = 0, n = 0;
    Ordinal ord() const {
        Ordinal r = Ordinal::fin(n);
        if (m) r = ord_add(Ordinal::w_pow(Ordinal::fin(1), m), r);
        return r;
    }
};

WSq wsq_add(WSq a, WSq b) {
    if (b.m > 0) return {a.m + b.m, b.n};
    return {a.m, a.n + b.n};
}

int wsq_cmp(WSq a, WSq b) {
    if (a.m != b.m) return a.m < b.m ? -1 : 1;
    if (a.n != b.n) return a.n < b.n ? -1 : 1;
    return 0;
}

}  // namespace

TEST_CASE("ordinal parse and print") {
    CHECK(parse_ordinal("w+1").str() == "w+1");
    CHECK(parse_ordinal("w*2 + 3").str() == "w*2+3");
    CHECK(parse_ordinal("0").str() == "0");
    CHECK(parse_ordinal("w^2").str() == "w^2");
    CHECK(parse_ordinal("w^(w+1)*3 + w*2 + 5").str() == "w^(w+1)*3+w*2+5");
    CHECK_THROWS_AS(parse_ordinal("q"), ParseError);
    CHECK_THROWS_AS(parse_ordinal("w+"), ParseError);
}

TEST_CASE("ordinal arithmetic absorbs finite parts on the left") {
    Ordinal w = Ordinal::omega();
    CHECK(ord_cmp(ord_add(Ordinal::fin(1), w), w) == 0);
    CHECK(ord_add(w, Ordinal::fin(1)).str() == "w+1");
    CHECK(ord_cmp(ord_mul(Ordinal::fin(2), w), w) == 0);
    CHECK(ord_cmp(ord_mul(w, Ordinal::fin(2)), ord_add(w, w)) == 0);
    CHECK(ord_mul(w, Ordinal::fin(2)).str() == "w*2");
    CHECK(ord_cmp(ord_mul(w, w), parse_ordinal("w^2")) == 0);
}

TEST_CASE("ordinal add/cmp agrees with an independent w^2 oracle") {
    for (std::uint64_t m1 = 0; m1 < 4; ++m1)
        for (std::uint64_t n1 = 0; n1 < 4; ++n1)
            for (std::uint64_t m2 = 0; m2 < 4; ++m2)
                for (std::uint64_t n2 = 0; n2 < 4; ++n2) {
                    WSq a{m1, n1}, b{m2, n2};
                    CHECK(ord_cmp(ord_add(a.ord(), b.ord()),
                                  wsq_add(a, b).ord()) == 0);
                    CHECK(ord_cmp(a.ord(), b.ord()) == wsq_cmp(a, b));
                }
}

TEST_CASE("ordinal multiplication by a natural is iterated addition") {
    std::mt19937_64 rng(0x0a11);
    for (int t = 0; t < 200; ++t) {
        WSq a{rng() % 5, rng() % 5};
        std::uint64_t k = rng() % 5;
        Ordinal sum = Ordinal::fin(0);
        for (std::uint64_t i = 0; i < k; ++i) sum = ord_add(sum, a.ord());
        CHECK(ord_cmp(ord_mul(a.ord(), Ordinal::fin(k)), sum) == 0);
    }
}

TEST_CASE("ordinal algebraic laws on random samples") {
    std::mt19937_64 rng(0x0a12);
    auto rnd = [&] {
        Ordinal r = Ordinal::fin(rng() % 4);
        if (rng() % 2)
            r = ord_add(Ordinal::w_pow(Ordinal::fin(1 + rng() % 2),
                                       1 + rng() % 3),
                        r);
        return r;
    };
    for (int t = 0; t < 300; ++t) {
        Ordinal a = rnd(), b = rnd(), c = rnd();
        // associativity of both operations
        CHECK(ord_cmp(ord_add(ord_add(a, b), c), ord_add(a, ord_add(b, c))) ==
              0);
        CHECK(ord_cmp(ord_mul(ord_mul(a, b), c), ord_mul(a, ord_mul(b, c))) ==
              0);
        // left distributivity
        CHECK(ord_cmp(ord_mul(a, ord_add(b, c)),
                      ord_add(ord_mul(a, b), ord_mul(a, c))) == 0);
    }
}

TEST_CASE("godel pairing base values") {
    CHECK(godel_pair(Ordinal::fin(0), Ordinal::fin(0)).str() == "0");
    CHECK(godel_pair(Ordinal::fin(1), Ordinal::fin(0)).str() == "2");
    CHECK(godel_pair(Ordinal::fin(2), Ordinal::fin(1)).str() == "7");
}

TEST_CASE("godel pairing is a bijection on the naturals") {
    // pair then unpair over all small pairs
    for (std::uint64_t a = 0; a < 40; ++a)
        for (std::uint64_t b = 0; b < 40; ++b) {
            Ordinal c = godel_pair(Ordinal::fin(a), Ordinal::fin(b));
            auto [x, y] = godel_unpair(c);
            CHECK(x.as_nat() == a);
            CHECK(y.as_nat() == b);
        }
    // unpair then pair over an initial segment of codes
    for (std::uint64_t c = 0; c < 500; ++c) {
        auto [x, y] = godel_unpair(Ordinal::fin(c));
        CHECK(godel_pair(x, y).as_nat() == c);
    }
}

TEST_CASE("godel pairing respects the (max, lex) order") {
    auto maxlex_less = [](std::pair<std::uint64_t, std::uint64_t> p,
                          std::pair<std::uint64_t, std::uint64_t> q) {
        std::uint64_t mp = std::max(p.first, p.second);
        std::uint64_t mq = std::max(q.first, q.second);
        if (mp != mq) return mp < mq;
        return p < q;
    };
    std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (std::uint64_t a = 0; a < 12; ++a)
        for (std::uint64_t b = 0; b < 12; ++b) pairs.emplace_back(a, b);
    for (const auto& p : pairs)
        for (const auto& q : pairs) {
            Ordinal cp = godel_pair(Ordinal::fin(p.first), Ordinal::fin(p.second));
            Ordinal cq = godel_pair(Ordinal::fin(q.first), Ordinal::fin(q.second));
            if (maxlex_less(p, q)) CHECK(ord_cmp(cp, cq) < 0);
        }
}

TEST_CASE("godel pairing on transfinite arguments round-trips via cmp") {
    // pairing stays injective when one argument is infinite
    std::vector<Ordinal> sample = {Ordinal::fin(0), Ordinal::fin(3),
                                   Ordinal::omega(),
                                   ord_add(Ordinal::omega(), Ordinal::fin(2))};
    for (const Ordinal& a : sample)
        for (const Ordinal& b : sample)
            for (const Ordinal& c : sample)
                for (const Ordinal& d : sample) {
                    bool same_args = ord_cmp(a, c) == 0 && ord_cmp(b, d) == 0;
                    bool same_code =
                        ord_cmp(godel_pair(a, b), godel_pair(c, d)) == 0;
                    CHECK(same_args == same_code);
                }
}
