#include <doctest.h>

#include "../support/testing.hpp"
#include "unical/error.hpp"
#include "unical/model.hpp"

using namespace unical;
using unical::testing::Rng;
using unical::testing::random_unit;
using unical::testing::si;

namespace {

const UnitSystem &sys() { return si().system; }

Unit pre(Prefix p, UnitSymbol base, Exponent z = 1) { return Unit{{PreUnit{std::move(p), std::move(base)}, z}}; }

Prefix k() { return delta(PrefixSymbol("k")); }
Prefix d() { return delta(PrefixSymbol("d")); }

// Precipitation: cubic decimetres per square metre.
Unit precipitation() { return Unit{{PreUnit{d(), "m"}, 3}, {PreUnit{{}, "m"}, -2}}; }

Unit density() { return pre(k(), "g") * pre(delta(PrefixSymbol("c")), "m", -3); }

} // namespace

TEST_CASE("pref, root, unroot and strip")
{
    CHECK(strip(pre(k(), "g")) == unit_literal("g"));
    CHECK(pref(pre(k(), "g")) == k());
    CHECK(root(pre(k(), "g")) == delta(UnitSymbol("g")));

    Prefix micro = delta(PrefixSymbol("µ"));
    Unit speed = pre(micro, "m") * pre(micro, "s", -1);
    CHECK(pref(speed).empty());
    CHECK(root(speed) == RootUnit{{"m", 1}, {"s", -1}});
    CHECK(unroot(RootUnit{{"m", 2}}) == Unit{{PreUnit{{}, "m"}, 2}});
}

TEST_CASE("normalization")
{
    CHECK(norm(precipitation()) == NormalizedUnit{d().pow(3), delta(UnitSymbol("m"))});
    CHECK(norm(Unit{}) == NormalizedUnit{});

    Prefix micro = delta(PrefixSymbol("µ"));
    CHECK(norm(pre(micro, "m") * pre(micro, "s", -1)) == NormalizedUnit{{}, RootUnit{{"m", 1}, {"s", -1}}});
}

TEST_CASE("prefix application")
{
    Prefix micro = delta(PrefixSymbol("µ"));
    NormalizedUnit kg = norm(pre(k(), "g"));
    CHECK(prefix_apply(micro, kg) == NormalizedUnit{micro * k(), delta(UnitSymbol("g"))});
    CHECK(prefix_apply({}, kg) == kg);

    Prefix hecto = delta(PrefixSymbol("h"));
    CHECK(prefix_apply(hecto, norm(unit_literal("W"))) == NormalizedUnit{hecto, delta(UnitSymbol("W"))});
}

TEST_CASE("prefix values")
{
    CHECK(val(sys(), k()) == Ratio(1000, 1));
    CHECK(val(sys(), {}).is_one());
    CHECK(pval(sys(), density()) == Ratio::power_of(10, 9));
    CHECK(pval(sys(), Unit{}).is_one());
    CHECK(val(sys(), delta(PrefixSymbol("ki"))) == Ratio(1024, 1));
    CHECK_THROWS_AS(val(sys(), delta(PrefixSymbol("zz"))), UnknownSymbol);
}

TEST_CASE("dimensions")
{
    CHECK(dim(sys(), unit_literal("N")) == Dimension{{"L", 1}, {"T", -2}, {"M", 1}});
    CHECK(dim(sys(), Unit{}).empty());
    CHECK(dim(sys(), density()) == Dimension{{"L", -3}, {"M", 1}});
    CHECK_THROWS_AS(dim(sys(), unit_literal("furlong")), UnknownSymbol);
}

TEST_CASE("evaluation and abstraction")
{
    CHECK(eval(sys(), precipitation()) == EvaluatedUnit{Ratio(1, 1000), delta(UnitSymbol("m"))});
    CHECK(eval(sys(), pre(k(), "g")) == EvaluatedUnit{Ratio(1000, 1), delta(UnitSymbol("g"))});
    CHECK(eval(sys(), Unit{}) == EvaluatedUnit{});

    CHECK(abstraction(sys(), Unit{}) == AbstractUnit{});
    CHECK(abstraction(sys(), pre(k(), "g")) == AbstractUnit{Ratio(1000, 1), delta(DimensionSymbol("M"))});
    CHECK(abstraction(sys(), unit_literal("Gy")) == abstraction(sys(), unit_literal("Sv")));
}

TEST_CASE("equivalence levels")
{
    Unit mm = pre(delta(PrefixSymbol("m")), "m");
    CHECK(equivalent(sys(), precipitation(), mm, EquivalenceLevel::numerical));
    CHECK_FALSE(equivalent(sys(), precipitation(), mm, EquivalenceLevel::normal));

    Unit gy = unit_literal("Gy"), sv = unit_literal("Sv");
    CHECK(equivalent(sys(), gy, sv, EquivalenceLevel::dimension));
    CHECK_FALSE(equivalent(sys(), gy, sv, EquivalenceLevel::root));

    for (auto level : {EquivalenceLevel::normal, EquivalenceLevel::numerical, EquivalenceLevel::root,
                       EquivalenceLevel::dimension})
        CHECK(equivalent(sys(), density(), density(), level));
}

TEST_CASE("unknown symbols are rejected")
{
    CHECK_NOTHROW(require_well_formed(sys(), density()));
    CHECK_THROWS_AS(require_well_formed(sys(), pre(delta(PrefixSymbol("x")), "m")), UnknownSymbol);
    CHECK_THROWS_AS(require_well_formed(sys(), unit_literal("xyz")), UnknownSymbol);
}

TEST_CASE("equivalence hierarchy")
{
    Rng rng(31);
    testing::UnitShape shape{.max_factors = 2, .max_exponent = 2, .prefix_chance = 0.5};
    int rooted = 0;
    for (int i = 0; i < 1000; ++i) {
        Unit u = random_unit(rng, sys(), shape);
        // Half the time, build v to share u's root so the finer levels are exercised.
        Unit v = testing::chance(rng, 0.5) ? testing::redistribute_prefixes(rng, sys(), u, shape)
                                           : random_unit(rng, sys(), shape);
        bool n = equivalent(sys(), u, v, EquivalenceLevel::normal);
        bool e = equivalent(sys(), u, v, EquivalenceLevel::numerical);
        bool r = equivalent(sys(), u, v, EquivalenceLevel::root);
        bool m = equivalent(sys(), u, v, EquivalenceLevel::dimension);
        CHECK((!n || e));
        CHECK((!e || r));
        CHECK((!r || m));
        rooted += r;
    }
    CHECK(rooted > 100);
}

TEST_CASE("strip and root laws")
{
    Rng rng(32);
    for (int i = 0; i < 1000; ++i) {
        Unit u = random_unit(rng, sys());
        CHECK(strip(strip(u)) == strip(u));
        CHECK(root(strip(u)) == root(u));
        CHECK(pref(strip(u)).empty());
        RootUnit r = root(u);
        CHECK(root(unroot(r)) == r);
    }
}

TEST_CASE("semantic maps are homomorphisms")
{
    Rng rng(33);
    for (int i = 0; i < 1000; ++i) {
        Unit u = random_unit(rng, sys()), v = random_unit(rng, sys());
        Unit uv = u * v;
        CHECK(norm(uv) == norm(u) * norm(v));
        CHECK(norm(u.inverse()) == norm(u).inverse());
        CHECK(pref(uv) == pref(u) * pref(v));
        CHECK(root(uv) == root(u) * root(v));
        CHECK(val(sys(), pref(u) * pref(v)) == val(sys(), pref(u)) * val(sys(), pref(v)));
        CHECK(pval(sys(), uv) == pval(sys(), u) * pval(sys(), v));
        CHECK(dim(sys(), uv) == dim(sys(), u) * dim(sys(), v));
        CHECK(eval(sys(), uv) == eval(sys(), u) * eval(sys(), v));
        CHECK(eval(sys(), u.inverse()) == eval(sys(), u).inverse());
        AbstractUnit au = abstraction(sys(), u), av = abstraction(sys(), v), auv = abstraction(sys(), uv);
        CHECK(auv.factor == au.factor * av.factor);
        CHECK(auv.dimension == au.dimension * av.dimension);
    }
}

TEST_CASE("semantic maps commute")
{
    Rng rng(34);
    for (int i = 0; i < 1000; ++i) {
        Unit u = random_unit(rng, sys());
        CHECK(eval(sys(), u) == eval_norm(sys(), norm(u)));
        CHECK(abstraction(sys(), u) == abstraction_eval(sys(), eval(sys(), u)));
        CHECK(pval(sys(), u) == val(sys(), pref(u)));
        CHECK(dim(sys(), u) == dim_root(sys(), root(u)));
    }
}
