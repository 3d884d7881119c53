#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <fellbundle/io.hpp>
#include <fellbundle/jmap.hpp>

using namespace fell;
using namespace fell::testing;

TEST_CASE("groupoids round-trip through JSON") {
    const std::vector<GroupoidPtr> gs = {
        make_pair_groupoid(3),
        make_group_groupoid(klein_four_table()),
        make_transformation_groupoid(2, cyclic_group_table(2), {{0, 1}, {1, 0}}),
    };
    for (const auto& g : gs) {
        const auto back = load_groupoid_json(groupoid_to_json(*g));
        CHECK(back->arrow_count() == g->arrow_count());
        CHECK(back->units() == g->units());
        for (int a = 0; a < g->arrow_count(); ++a) {
            CHECK(back->range(a) == g->range(a));
            CHECK(back->source(a) == g->source(a));
            CHECK(back->inverse(a) == g->inverse(a));
            for (int b = 0; b < g->arrow_count(); ++b)
                CHECK(back->compose(a, b) == g->compose(a, b));
        }
    }
}

TEST_CASE("bundles of every kind round-trip through JSON") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        for (auto kind : {BundleKind::Trivial, BundleKind::Twist, BundleKind::CrossedProduct}) {
            const auto bundle = make_random_instance(kind, 3, 4000 + seed);
            const auto back = load_bundle_json(bundle_to_json(*bundle));
            CHECK(back->kind() == bundle->kind());
            const FiniteGroupoid& g = bundle->groupoid();
            CHECK(back->groupoid().arrow_count() == g.arrow_count());
            // multiplication and involution agree on every basis pair
            CounterRng rng(seed);
            for (int a = 0; a < g.arrow_count(); ++a) {
                const Mat x = [&] {
                    Mat m(bundle->fiber_rows(a), bundle->fiber_cols(a));
                    for (int i = 0; i < m.size(); ++i)
                        m(i / m.cols(), i % m.cols()) = rng.next_complex_gaussian();
                    return m;
                }();
                CHECK((bundle->invol(a, x) - back->invol(a, x)).norm() == 0.0);
                for (int b = 0; b < g.arrow_count(); ++b) {
                    if (g.compose(a, b) == kUndefined) continue;
                    const Mat y = Mat::Ones(bundle->fiber_rows(b), bundle->fiber_cols(b));
                    CHECK((bundle->mult(a, b, x, y) - back->mult(a, b, x, y)).norm() == 0.0);
                }
            }
        }
    }
}

TEST_CASE("a custom bundle round-trips through its coefficient tables") {
    const auto g = klein_groupoid();
    const auto twist = make_twist_bundle(g, klein_anticommutation_cocycle(*g));
    // re-encode the twist as custom tables via serialization
    std::string json = bundle_to_json(*twist);
    const auto as_twist = load_bundle_json(json);
    // and by rebuilding through the custom path
    CustomTables tables;
    FiberSpec dims;
    dims.dim[0] = 1;
    for (int a = 0; a < 4; ++a) {
        tables.invol[a] = {twist->invol(a, Mat::Ones(1, 1))};
        for (int b = 0; b < 4; ++b)
            tables.mult[{a, b}] = {{twist->mult(a, b, Mat::Ones(1, 1), Mat::Ones(1, 1))}};
    }
    const auto custom = make_custom_bundle(g, dims, std::move(tables));
    const auto back = load_bundle_json(bundle_to_json(*custom));
    CHECK(back->kind() == BundleKind::Custom);
    CHECK(validate_bundle(*back).ok());
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            CHECK((back->mult(a, b, scalar(1), scalar(1)) -
                   as_twist->mult(a, b, scalar(1), scalar(1)))
                      .norm() == 0.0);
}

TEST_CASE("sections round-trip exactly") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto bundle = make_random_instance(BundleKind::Trivial, 3, 4100 + seed);
        CounterRng rng(seed);
        const Section f = random_section(bundle, rng);
        const Section back = load_section_json(section_to_json(f), bundle);
        CHECK(max_entry_distance(f, back) == 0.0);
    }
}

TEST_CASE("parse errors are reported as such") {
    CHECK_THROWS_AS((void)load_groupoid_json("{"), ParseError);
    CHECK_THROWS_AS((void)load_groupoid_json("[1,2,3]"), ParseError);
    CHECK_THROWS_AS((void)load_groupoid_json(R"({"arrows": 2})"), ParseError);
    CHECK_THROWS_AS(
        (void)load_groupoid_json(
            R"({"arrows": 1, "units": [0], "range": [0], "source": [0], "inverse": [9], "compose": []})"),
        ParseError);
    CHECK_THROWS_AS((void)load_bundle_json(R"({"kind": "twist"})"), ParseError);
    const auto bundle = line_bundle(make_pair_groupoid(2));
    CHECK_THROWS_AS((void)load_section_json(R"({"values": {"9": [[1,0]]}})", bundle), ParseError);
    CHECK_THROWS_AS((void)load_section_json(R"({"values": {"0": [[1,0],[2,0]]}})", bundle),
                    ParseError);
}

TEST_CASE("round12 rounds to twelve significant digits") {
    CHECK(round12(2.0) == 2.0);
    CHECK(round12(1.234567890123456789) == doctest::Approx(1.23456789012).epsilon(1e-14));
    CHECK(round12(-0.0001999999999999123) == doctest::Approx(-0.0002).epsilon(1e-14));
}

TEST_CASE("norm and report serializers expose the interface fields") {
    const auto bundle = line_bundle(make_pair_groupoid(2));
    Section ones(bundle, {scalar(1), scalar(1), scalar(1), scalar(1)});
    const std::string norms = norms_to_json(ones);
    CHECK(norms.find("\"unit_norms\"") != std::string::npos);
    CHECK(norms.find("\"reduced_norm\": 2.0") != std::string::npos);
    CHECK(norms.find("\"sup_norm\": 1.0") != std::string::npos);

    const auto report = run_suite(bundle, 2, 0);
    const std::string json = verification_report_to_json(report, 0, 2);
    CHECK(json.find("\"all_pass\": true") != std::string::npos);
    CHECK(json.find("\"law\"") != std::string::npos);
    CHECK(json.find("\"residual\"") != std::string::npos);

    ValidationReport bad;
    bad.add("associativity", "(1, 1, 2)", 0.5);
    const std::string vjson = validation_report_to_json(bad);
    CHECK(vjson.find("\"ok\": false") != std::string::npos);
    CHECK(vjson.find("associativity") != std::string::npos);
}
