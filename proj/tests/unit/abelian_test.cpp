#include <doctest.h>

#include "../support/testing.hpp"
#include "unical/abelian.hpp"
#include "unical/model.hpp"

using namespace unical;
using unical::testing::Rng;
using unical::testing::random_word;
using unical::testing::uniform;

namespace {

using Word = ExponentMap<char>;
using Nested = ExponentMap<Word>;
using RatioPair = Paired<Ratio, char>;

const Word g1{{'a', 2}, {'b', -1}, {'c', 1}};
const Word g2{{'b', 2}, {'c', -1}, {'d', -2}};

char lump(char x) { return x == 'a' || x == 'b' ? 'a' : 'b'; }

bool canonical(const Word &w)
{
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w.entries()[i].second == 0)
            return false;
        if (i > 0 && !(w.entries()[i - 1].first < w.entries()[i].first))
            return false;
    }
    return true;
}

Nested random_nested(Rng &rng, int max_size = 3)
{
    std::vector<Nested::Entry> entries;
    int n = uniform(rng, 0, max_size);
    for (int i = 0; i < n; ++i)
        entries.emplace_back(random_word(rng, "abcd", 3), testing::nonzero_exponent(rng, 2));
    return Nested(std::move(entries));
}

ExponentMap<RatioPair> random_pair_word(Rng &rng, int max_size = 4)
{
    std::vector<ExponentMap<RatioPair>::Entry> entries;
    int n = uniform(rng, 0, max_size);
    for (int i = 0; i < n; ++i)
        entries.emplace_back(RatioPair{testing::random_ratio(rng, 9), char('a' + uniform(rng, 0, 3))},
                             testing::nonzero_exponent(rng, 3));
    return ExponentMap<RatioPair>(std::move(entries));
}

} // namespace

TEST_CASE("neutral element and literals")
{
    Word e;
    CHECK(e.empty());
    CHECK(e.support().empty());
    CHECK(e * g1 == g1);
    CHECK(delta('a') == Word{{'a', 1}});
    CHECK((delta('a') * delta('a').inverse()).empty());
}

TEST_CASE("construction canonicalizes")
{
    Word w{{'c', 1}, {'a', 2}, {'c', -1}, {'b', 0}, {'a', 1}};
    CHECK(w == Word{{'a', 3}});
    CHECK(canonical(w));
    CHECK(w['a'] == 3);
    CHECK(w['z'] == 0);
}

TEST_CASE("group operation adds exponents pointwise")
{
    CHECK(g1 * g2 == Word{{'a', 2}, {'b', 1}, {'d', -2}});
    CHECK((g1 * g1.inverse()).empty());
    CHECK(g1 * Word{} == g1);
    CHECK(g1.support() == std::vector<char>{'a', 'b', 'c'});
    CHECK(g2.support() == std::vector<char>{'b', 'c', 'd'});
}

TEST_CASE("powers")
{
    CHECK(Word{{'a', 2}}.pow(3) == Word{{'a', 6}});
    CHECK(g1.pow(-1) == g1.inverse());
    CHECK(g1.pow(0).empty());
    CHECK(power(delta('d'), 3) == Word{{'d', 3}});
}

TEST_CASE("functorial map lumps identified generators")
{
    CHECK(map(lump, g1) == Word{{'a', 1}, {'b', 1}});
    CHECK(map(lump, g2) == Word{{'a', 2}, {'b', -3}});
    CHECK(map(lump, g1 * g2) == Word{{'a', 3}, {'b', -2}});
    CHECK(map(lump, g1 * g2) == map(lump, g1) * map(lump, g2));
    CHECK(map([](char x) { return x; }, g1) == g1);
}

TEST_CASE("flatten distributes outer exponents")
{
    CHECK(flatten(Nested{{g1, -2}, {g2, -1}}) == Word{{'a', -4}, {'c', -1}, {'d', 2}});
    CHECK(flatten(Nested{}).empty());
    CHECK(flatten(delta(g1)) == g1);
}

TEST_CASE("counit evaluates in the target group")
{
    ExponentMap<Ratio> q1{{Ratio(2, 1), -3}, {Ratio(3, 1), 2}, {Ratio(2, 5), -1}};
    CHECK(evaluate(ratio_group(), q1) == Ratio(45, 16));
    CHECK(evaluate(ratio_group(), ExponentMap<Ratio>{}).is_one());
    CHECK(evaluate(ratio_group(), delta(Ratio(7, 3))) == Ratio(7, 3));
}

TEST_CASE("factors list generators in order")
{
    Word ms{{'s', -1}, {'m', 1}};
    CHECK(factors(ms) == std::vector<std::pair<char, Exponent>>{{'m', 1}, {'s', -1}});
    CHECK(factors(Word{}).empty());
}

TEST_CASE("pairing monad")
{
    auto g = ratio_group();
    CHECK(pair_unit(g, 'a') == std::pair{Ratio(), 'a'});
    CHECK(pair_join(g, Paired<Ratio, RatioPair>{Ratio(2, 1), {Ratio(3, 1), 'b'}}) == std::pair{Ratio(6, 1), 'b'});
    CHECK(pair_map(lump, RatioPair{Ratio(5, 1), 'c'}) == std::pair{Ratio(5, 1), 'b'});
}

TEST_CASE("distributive law splits ratios from the word")
{
    ExponentMap<RatioPair> w{{{Ratio(2, 1), 'a'}, -3}, {{Ratio(3, 1), 'b'}, 2}, {{Ratio(2, 5), 'c'}, -1}};
    auto [r, g3] = distribute(ratio_group(), w);
    CHECK(r == Ratio(45, 16));
    CHECK(g3 == Word{{'a', -3}, {'b', 2}, {'c', -1}});
}

TEST_CASE("composite monad")
{
    auto g = ratio_group();
    CHECK(composite_unit(g, 'c') == std::pair{Ratio(), delta('c')});

    using Inner = Paired<Ratio, Word>;
    ExponentMap<Inner> inner{{Inner{Ratio(3, 1), Word{{'a', 5}}}, -2}, {Inner{Ratio(7, 1), Word{{'b', -1}}}, 1}};
    auto [r, w] = composite_join(g, Paired<Ratio, ExponentMap<Inner>>{Ratio(2, 1), inner});
    CHECK(r == Ratio(14, 9));
    CHECK(w == Word{{'a', -10}, {'b', -1}});
}

TEST_CASE("abelian group laws")
{
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) {
        Word a = random_word(rng), b = random_word(rng), c = random_word(rng);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * b == b * a);
        CHECK(a * Word{} == a);
        CHECK((a * a.inverse()).empty());
        CHECK(canonical(a * b));
        CHECK(canonical(a.pow(uniform(rng, -3, 3))));
        int m = uniform(rng, -4, 4), n = uniform(rng, -4, 4);
        CHECK(a.pow(m + n) == a.pow(m) * a.pow(n));

        // Rebuilding from factors reproduces the word.
        Word rebuilt;
        for (const auto &[x, z] : factors(a))
            rebuilt *= delta(x).pow(z);
        CHECK(rebuilt == a);
    }
}

TEST_CASE("functor laws and homomorphism")
{
    Rng rng(22);
    auto shift = [](char x) { return char(x == 'f' ? 'a' : x + 1); };
    for (int i = 0; i < 1000; ++i) {
        Word a = random_word(rng), b = random_word(rng);
        CHECK(map([](char x) { return x; }, a) == a);
        CHECK(map([&](char x) { return lump(shift(x)); }, a) == map(lump, map(shift, a)));
        CHECK(map(lump, a * b) == map(lump, a) * map(lump, b));
        CHECK(canonical(map(lump, a)));
    }
}

TEST_CASE("free monad laws")
{
    Rng rng(23);
    for (int i = 0; i < 1000; ++i) {
        Word a = random_word(rng);
        CHECK(flatten(delta(a)) == a);
        CHECK(flatten(map([](char x) { return delta(x); }, a)) == a);

        std::vector<ExponentMap<Nested>::Entry> outer;
        int n = uniform(rng, 0, 3);
        for (int k = 0; k < n; ++k)
            outer.emplace_back(random_nested(rng), testing::nonzero_exponent(rng, 2));
        ExponentMap<Nested> triple(std::move(outer));
        CHECK(flatten(flatten(triple)) == flatten(map([](const Nested &x) { return flatten(x); }, triple)));

        // The counit at the free group itself is flattening.
        Nested nested = random_nested(rng);
        CHECK(evaluate(free_group<char>(), nested) == flatten(nested));
    }
}

TEST_CASE("counit is a homomorphism")
{
    Rng rng(24);
    for (int i = 0; i < 1000; ++i) {
        std::vector<ExponentMap<Ratio>::Entry> e1, e2;
        for (int k = uniform(rng, 0, 4); k > 0; --k)
            e1.emplace_back(testing::random_ratio(rng, 20), testing::nonzero_exponent(rng, 3));
        for (int k = uniform(rng, 0, 4); k > 0; --k)
            e2.emplace_back(testing::random_ratio(rng, 20), testing::nonzero_exponent(rng, 3));
        ExponentMap<Ratio> f(std::move(e1)), g(std::move(e2));
        CHECK(evaluate(ratio_group(), f * g) == evaluate(ratio_group(), f) * evaluate(ratio_group(), g));
    }
}

TEST_CASE("distributive law equations")
{
    auto g = ratio_group();
    Rng rng(25);
    for (int i = 0; i < 1000; ++i) {
        // beta . delta = Pair(delta)
        RatioPair p{testing::random_ratio(rng, 9), char('a' + uniform(rng, 0, 3))};
        CHECK(distribute(g, delta(p)) == std::pair{p.first, delta(p.second)});

        // beta . FinSupp(eta) = eta
        Word w = random_word(rng);
        CHECK(distribute(g, map([&](char x) { return pair_unit(g, x); }, w)) == pair_unit(g, w));

        // beta . FinSupp(mu) = mu . Pair(beta) . beta
        using Twice = Paired<Ratio, RatioPair>;
        std::vector<ExponentMap<Twice>::Entry> entries;
        for (int k = uniform(rng, 0, 4); k > 0; --k)
            entries.emplace_back(Twice{testing::random_ratio(rng, 9),
                                       {testing::random_ratio(rng, 9), char('a' + uniform(rng, 0, 3))}},
                                 testing::nonzero_exponent(rng, 3));
        ExponentMap<Twice> f(std::move(entries));
        auto lhs3 = distribute(g, map([&](const Twice &t) { return pair_join(g, t); }, f));
        auto rhs3 = pair_join(g, pair_map([&](const auto &inner) { return distribute(g, inner); }, distribute(g, f)));
        CHECK(lhs3 == rhs3);

        // beta . lambda = Pair(lambda) . beta . FinSupp(beta)
        std::vector<ExponentMap<ExponentMap<RatioPair>>::Entry> outer;
        for (int k = uniform(rng, 0, 3); k > 0; --k)
            outer.emplace_back(random_pair_word(rng, 3), testing::nonzero_exponent(rng, 2));
        ExponentMap<ExponentMap<RatioPair>> nested(std::move(outer));
        auto lhs4 = distribute(g, flatten(nested));
        auto rhs4 = pair_map([](const Nested &x) { return flatten(x); },
                             distribute(g, map([&](const ExponentMap<RatioPair> &x) { return distribute(g, x); }, nested)));
        CHECK(lhs4 == rhs4);
    }
}

TEST_CASE("composite monad laws")
{
    auto g = ratio_group();
    using PF = Paired<Ratio, Word>;
    Rng rng(26);
    auto random_pf = [&] { return PF{testing::random_ratio(rng, 9), random_word(rng, "abcd", 3)}; };
    for (int i = 0; i < 1000; ++i) {
        PF x = random_pf();
        // xi . theta = id
        CHECK(composite_join(g, composite_unit(g, x)) == x);
        // xi . PF(theta) = id
        CHECK(composite_join(g, Paired<Ratio, ExponentMap<PF>>{
                                    x.first, map([&](char c) { return composite_unit(g, c); }, x.second)}) == x);

        // Associativity on a three-layer value.
        std::vector<ExponentMap<PF>::Entry> inner_entries;
        for (int k = uniform(rng, 0, 3); k > 0; --k)
            inner_entries.emplace_back(random_pf(), testing::nonzero_exponent(rng, 2));
        Paired<Ratio, ExponentMap<PF>> mid{testing::random_ratio(rng, 9), ExponentMap<PF>(std::move(inner_entries))};

        using PFPF = Paired<Ratio, ExponentMap<PF>>;
        std::vector<ExponentMap<PFPF>::Entry> outer_entries;
        outer_entries.emplace_back(mid, testing::nonzero_exponent(rng, 2));
        outer_entries.emplace_back(PFPF{Ratio(), ExponentMap<PF>{{random_pf(), 1}}}, testing::nonzero_exponent(rng, 2));
        Paired<Ratio, ExponentMap<PFPF>> top{testing::random_ratio(rng, 9), ExponentMap<PFPF>(std::move(outer_entries))};

        PF left = composite_join(g, composite_join(g, top));
        PF right = composite_join(
            g, Paired<Ratio, ExponentMap<PF>>{top.first, map([&](const PFPF &y) { return composite_join(g, y); }, top.second)});
        CHECK(left == right);
    }
}
