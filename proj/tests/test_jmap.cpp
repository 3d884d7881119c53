#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"

#include <fellbundle/jmap.hpp>

using namespace fell;
using namespace fell::testing;

TEST_CASE("recovery of the identity section gives identity matrices on units") {
    const auto bundle = make_random_instance(BundleKind::CrossedProduct, 2, 2000);
    const OperatorFamily v = represent_family(Section::units_identity(bundle));
    for (int u : bundle->groupoid().units()) {
        const Mat m = j_recover(v, u);
        CHECK((m - Mat::Identity(m.rows(), m.cols())).norm() < 1e-12);
    }
}

TEST_CASE("recovery of a delta section is exact and vanishes elsewhere") {
    const auto bundle = make_random_instance(BundleKind::Trivial, 3, 2001);
    const FiniteGroupoid& g = bundle->groupoid();
    const int arrow = g.arrow_count() / 2;
    Mat value(bundle->fiber_rows(arrow), bundle->fiber_cols(arrow));
    CounterRng rng(1);
    for (int i = 0; i < value.size(); ++i)
        value(i / value.cols(), i % value.cols()) = rng.next_complex_gaussian();
    const OperatorFamily v = represent_family(Section::delta(bundle, arrow, value));
    CHECK((j_recover(v, arrow) - value).norm() < 1e-11);
    for (int a = 0; a < g.arrow_count(); ++a) {
        if (a == arrow) continue;
        CHECK(j_recover(v, a).norm() < 1e-11);
    }
}

TEST_CASE("j recovers every section exactly at finite scale") {
    int done = 0;
    for (std::uint64_t seed = 0; done < 60; ++seed) {
        const auto kind = seed % 3 == 0
                              ? BundleKind::Trivial
                              : (seed % 3 == 1 ? BundleKind::Twist : BundleKind::CrossedProduct);
        const auto bundle = make_random_instance(kind, 3, 2100 + seed);
        CounterRng rng(seed);
        const Section f = random_section(bundle, rng);
        const Section back = j_recover_section(represent_family(f));
        CHECK(max_entry_distance(back, f) <= 1e-10 * (1.0 + sup_norm(f)));
        ++done;
    }
}

TEST_CASE("a corrupted family is rejected as outside the image") {
    FiberSpec dims;
    dims.dim[0] = 2;
    const auto bundle = make_trivial_bundle(make_group_groupoid(cyclic_group_table(2)), dims);
    CounterRng rng(3);
    const Section f = random_section(bundle, rng);
    OperatorFamily v = represent_family(f);
    // break the block structure: a representation must send h_u^{E_mm} to a
    // vector whose value at each arrow has nonzero entries only in column m;
    // the entry (1, 0) pollutes column 1 of the unit-arrow block
    v.at_unit(0)(1, 0) += Cplx{0.5, 0};
    CHECK_THROWS_AS((void)j_recover(v, 0), std::invalid_argument);
}

TEST_CASE("recovery is linear in the family") {
    const auto bundle = make_random_instance(BundleKind::CrossedProduct, 3, 2200);
    CounterRng rng(5);
    const Section f = random_section(bundle, rng);
    const Section g = random_section(bundle, rng);
    const OperatorFamily vf = represent_family(f);
    const OperatorFamily vg = represent_family(g);
    const Cplx lambda{0.75, -2.0};
    const OperatorFamily mix = vf * lambda + vg;
    for (int a = 0; a < bundle->groupoid().arrow_count(); ++a) {
        const Mat lhs = j_recover(mix, a);
        const Mat rhs = lambda * j_recover(vf, a) + j_recover(vg, a);
        CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }
}

TEST_CASE("recovery follows entrywise limits of sections") {
    const auto bundle = make_random_instance(BundleKind::Trivial, 2, 2300);
    CounterRng rng(7);
    const Section f = random_section(bundle, rng);
    const int arrow = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 1; n <= 12; ++n) {
        const Section fn = f * Cplx{1.0 - std::pow(2.0, -n), 0.0};
        const Mat recovered = j_recover(represent_family(fn), arrow);
        const double gap = (recovered - f.value(arrow)).norm();
        CHECK(gap <= prev + 1e-12);
        prev = gap;
    }
    CHECK(prev <= 1e-3 * (1.0 + sup_norm(f)));
}

TEST_CASE("norm-reduction check on explicit sections") {
    const auto grams_for = [](const BundlePtr& b) { return build_all_induced(*b); };
    {
        const auto bundle = line_bundle(make_group_groupoid(cyclic_group_table(2)));
        const Section e = Section::units_identity(bundle);
        const auto rec = check_norm_reducing(e, grams_for(bundle));
        CHECK(rec.pass);  // 1 <= 1
        Section f(bundle, {scalar(1), scalar(-1)});
        const auto rec2 = check_norm_reducing(f, grams_for(bundle));
        CHECK(rec2.pass);
        // character oracle: |f|_r = max(|1-1|, |1+1|) = 2, sup = 1
        CHECK(rec2.residual == doctest::Approx(-1.0).epsilon(1e-12));
    }
}

TEST_CASE("adjoint check vanishes identically for self-adjoint sections") {
    const auto bundle = make_random_instance(BundleKind::Twist, 1, 2400);
    CounterRng rng(9);
    const Section f = random_section(bundle, rng);
    const Section sa = f + involute(f);
    const auto rec = check_adjoint(sa);
    CHECK(rec.pass);
    CHECK(rec.residual <= 1e-11 * (1.0 + sup_norm(sa)));
    const auto rec2 = check_adjoint(Section::delta(bundle, 0, scalar(1)));
    CHECK(rec2.pass);
}

TEST_CASE("convolution routes agree pairwise") {
    {  // identity convolution: every route gives f back
        const auto bundle = make_random_instance(BundleKind::Trivial, 3, 2500);
        CounterRng rng(11);
        const Section f = random_section(bundle, rng);
        const auto rec = check_convolution_formula(f, Section::units_identity(bundle));
        CHECK(rec.pass);
    }
    {  // pair groupoid: convolution is the 2x2 matrix product
        const auto bundle = line_bundle(make_pair_groupoid(2));
        CounterRng rng(13);
        const auto rec = check_convolution_formula(random_section(bundle, rng),
                                                   random_section(bundle, rng));
        CHECK(rec.pass);
    }
    int done = 0;
    for (std::uint64_t seed = 0; done < 40; ++seed) {
        const auto kind = seed % 3 == 0
                              ? BundleKind::Trivial
                              : (seed % 3 == 1 ? BundleKind::Twist : BundleKind::CrossedProduct);
        const auto bundle = make_random_instance(kind, 3, 2600 + seed);
        CounterRng rng(seed);
        const auto rec = check_convolution_formula(random_section(bundle, rng),
                                                   random_section(bundle, rng));
        CHECK(rec.pass);
        ++done;
    }
}

TEST_CASE("delta sections saturate the module bound") {
    // |h_a^b|_{X_u} = |b| <= |h_a^b|_r with both sides computed directly
    const auto bundle = make_random_instance(BundleKind::Trivial, 3, 2650);
    const auto grams = build_all_induced(*bundle);
    const FiniteGroupoid& g = bundle->groupoid();
    CounterRng rng(14);
    for (int a = 0; a < g.arrow_count(); ++a) {
        Mat b(bundle->fiber_rows(a), bundle->fiber_cols(a));
        for (int i = 0; i < b.size(); ++i)
            b(i / b.cols(), i % b.cols()) = rng.next_complex_gaussian();
        const Section d = Section::delta(bundle, a, b);
        CHECK(bundle->fiber_norm(a, b) <= reduced_norm(d, grams) + 1e-9);
        CHECK(check_ju_bound(d, g.source(a), grams).pass);
    }
}

TEST_CASE("phi bound on point-mass vectors") {
    const auto bundle = line_bundle(make_pair_groupoid(2));
    const XuVector x(bundle, 0, {scalar(2), scalar(0)});
    const WgVector y(bundle, 1, {scalar(3), scalar(0)});
    // phi = conj(2) * 3 = 6 = |x| |y|: the bound is tight for point masses
    CHECK(phi(dual(x), y)(0, 0) == Cplx{6, 0});
    CHECK(check_phi_bound(x, y).pass);
    CHECK(check_phi_bound(x, y).residual <= 1e-12);
}

TEST_CASE("module bound checks pass on random data") {
    const auto bundle = make_random_instance(BundleKind::CrossedProduct, 2, 2700);
    const auto grams = build_all_induced(*bundle);
    CounterRng rng(15);
    for (int i = 0; i < 10; ++i) {
        const Section f = random_section(bundle, rng);
        for (int u : bundle->groupoid().units()) CHECK(check_ju_bound(f, u, grams).pass);
        const int arrow = static_cast<int>(rng.next_below(
            static_cast<std::uint64_t>(bundle->groupoid().arrow_count())));
        const XuVector x = XuVector::random(bundle, bundle->groupoid().range(arrow), rng);
        const WgVector y = WgVector::random(bundle, arrow, rng);
        CHECK(check_phi_bound(x, y).pass);
    }
}

TEST_CASE("the suite passes on reference bundles and refuses corrupted ones") {
    {
        const auto bundle = line_bundle(make_pair_groupoid(2));
        const auto report = run_suite(bundle, 50, 0);
        CHECK(report.all_pass());
        CHECK(report.checks.size() > 100);
    }
    {
        const auto g = klein_groupoid();
        const auto report =
            run_suite(make_twist_bundle(g, klein_anticommutation_cocycle(*g)), 25, 1);
        CHECK(report.all_pass());
    }
    {
        // deliberately corrupted custom bundle: sigma(g,g) = -1 multiplication
        // with the unsigned involution makes b* b = -1, breaking positivity
        const auto g = make_group_groupoid(cyclic_group_table(2));
        CustomTables tables;
        tables.mult[{0, 0}] = {{scalar(1)}};
        tables.mult[{0, 1}] = {{scalar(1)}};
        tables.mult[{1, 0}] = {{scalar(1)}};
        tables.mult[{1, 1}] = {{scalar(-1)}};
        tables.invol[0] = {scalar(1)};
        tables.invol[1] = {scalar(1)};
        FiberSpec dims;
        dims.dim[0] = 1;
        const auto bad = make_custom_bundle(g, dims, std::move(tables));
        const auto report = validate_bundle(*bad);
        CHECK_FALSE(report.ok());
        bool positivity = false;
        for (const auto& v : report.violations)
            if (v.rule == "positivity") positivity = true;
        CHECK(positivity);
        CHECK_THROWS_AS((void)run_suite(bad, 5, 0), std::invalid_argument);
    }
}

TEST_CASE("suite reports are deterministic given the seed") {
    const auto bundle = make_random_instance(BundleKind::Twist, 1, 2800);
    const auto r1 = run_suite(bundle, 10, 99);
    const auto r2 = run_suite(bundle, 10, 99);
    REQUIRE(r1.checks.size() == r2.checks.size());
    for (std::size_t i = 0; i < r1.checks.size(); ++i) {
        CHECK(r1.checks[i].name == r2.checks[i].name);
        CHECK(r1.checks[i].residual == r2.checks[i].residual);
    }
}
