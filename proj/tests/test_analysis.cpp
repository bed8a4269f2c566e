#include <gtd/analysis.hpp>
#include <gtd/report.hpp>

#include <catch_amalgamated.hpp>

#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

using namespace gtd;
using std::numbers::pi;

namespace {

MetricField system_field(const std::string& name, const std::map<std::string, double>& params = {}) {
    return MetricField::from_system(with_parameters(builtin(name), params));
}

}  // namespace

TEST_CASE("grid construction", "[analysis]") {
    const Axis a = Axis::range("S", 0.5, 10.0, 5);
    CHECK(a.value(0) == 0.5);
    CHECK(a.value(4) == 10.0);
    CHECK(a.value(2) == Catch::Approx(5.25));
    CHECK(Axis::pin("Q", 1.0).value(0) == 1.0);

    GridSpec g{{Axis::range("V", 1, 2, 3), Axis::range("S", 0, 1, 2)}};
    CHECK(g.total() == 6);
    CHECK(g.point(1) == std::vector<double>{1.0, 1.0});
    const GridSpec r = resolve_grid(system_field("vdw"), g);
    CHECK(r.axes[0].name == "S");
    CHECK(r.axes[1].name == "V");

    CHECK_THROWS_AS(resolve_grid(system_field("vdw"), GridSpec{{Axis::range("S", 0, 1, 2)}}), InvalidArgument);
    CHECK_THROWS_AS(resolve_grid(system_field("vdw"), GridSpec{{Axis::range("S", 0, 1, 2), Axis::range("X", 0, 1, 2)}}), InvalidArgument);
    CHECK_THROWS_AS(resolve_grid(system_field("vdw"), GridSpec{{Axis::range("S", 1, 0, 2), Axis::pin("V", 1)}}), InvalidArgument);
    CHECK_THROWS_AS(resolve_grid(system_field("vdw"), GridSpec{{Axis::range("S", 0, 1, 0), Axis::pin("V", 1)}}), InvalidArgument);
    GridSpec big{{Axis::range("S", 0, 1, 2000), Axis::range("V", 1, 2, 2000)}};
    CHECK_THROWS_AS(resolve_grid(system_field("vdw"), big), InvalidArgument);
    big.max_points = 5'000'000;
    CHECK_NOTHROW(resolve_grid(system_field("vdw"), big));
}

TEST_CASE("ideal gas scan is flat", "[analysis]") {
    const ScanReport rep = grid_scan(system_field("ideal_gas"),
                                     GridSpec{{Axis::range("S", 0.1, 2, 20), Axis::range("V", 0.5, 3, 20)}},
                                     Quantity::scalar_curvature);
    REQUIRE(rep.samples.size() == 400);
    CHECK(rep.count(PointStatus::ok) == 400);
    for (const auto& s : rep.samples) CHECK(std::abs(s.values[0]) <= 1e-8);
    CHECK(find_singular_locus(system_field("ideal_gas"), rep.grid).empty());
}

TEST_CASE("markers for degenerate and out-of-domain points", "[analysis]") {
    const ScanReport rn = grid_scan(system_field("reissner_nordstrom"),
                                    GridSpec{{Axis::range("S", pi, 2 * pi, 2), Axis::pin("Q", 1.0)}}, Quantity::scalar_curvature);
    CHECK(rn.samples[0].status == PointStatus::degenerate);
    CHECK(rn.samples[0].values.empty());
    CHECK(rn.samples[1].status == PointStatus::ok);

    const ScanReport outside = grid_scan(system_field("vdw"),
                                         GridSpec{{Axis::range("S", 0, 1, 3), Axis::range("V", 0.01, 0.05, 3)}}, Quantity::det_g);
    CHECK(outside.count(PointStatus::domain_error) == 9);

    const ScanReport single = grid_scan(system_field("vdw"), GridSpec{{Axis::pin("S", 0.5), Axis::pin("V", 1.0)}}, Quantity::potential);
    REQUIRE(single.samples.size() == 1);
    CHECK(single.samples[0].values[0] == Catch::Approx(potential_value(builtin("vdw"), EquilibriumPoint{{0.5, 1.0}})));
}

TEST_CASE("RN determinant changes sign at the extremal entropy", "[analysis]") {
    const GridSpec grid{{Axis::range("S", 0.5, 10, 500), Axis::pin("Q", 1.0)}};
    const ScanReport rep = grid_scan(closed_form_metric("rn_closed"), grid, Quantity::det_g);
    std::size_t changes = 0;
    for (std::size_t i = 0; i + 1 < rep.samples.size(); ++i)
        if ((rep.samples[i].values[0] < 0) != (rep.samples[i + 1].values[0] < 0)) {
            ++changes;
            CHECK(rep.samples[i].coordinates[0] < pi);
            CHECK(rep.samples[i + 1].coordinates[0] > pi);
        }
    CHECK(changes == 1);

    for (const MetricField& field : {closed_form_metric("rn_closed"), system_field("reissner_nordstrom")}) {
        const auto roots = find_singular_locus(field, grid);
        std::size_t near_pi = 0;
        for (const auto& r : roots)
            if (r.kind != RootKind::potential_zero) {
                CHECK(std::abs(r.coordinates[0] - pi) <= 1e-9 * pi);
                ++near_pi;
            }
        CHECK(near_pi == 1);
    }
}

TEST_CASE("vdW roots satisfy the stability condition", "[analysis]") {
    for (double a : {0.5, 1.0, 2.0})
        for (double b : {0.0, 0.05, 0.1}) {
            const MetricField field = system_field("vdw", {{"a", a}, {"b", b}});
            std::size_t stability = 0;
            for (double S : {0.0, 0.5, 1.0, 2.0}) {
                const GridSpec grid{{Axis::pin("S", S), Axis::range("V", b + 0.01, 50.0, 300)}};
                for (const auto& r : find_singular_locus(field, grid)) {
                    REQUIRE(r.stability_residual);
                    if (r.kind != RootKind::stability) continue;
                    ++stability;
                    INFO("a=" << a << " b=" << b << " S=" << S << " V=" << r.coordinates[1]);
                    CHECK(std::abs(*r.stability_residual) <= 1e-6);
                }
            }
            CHECK(stability > 0);
        }
}

TEST_CASE("b = 0 stability root has a closed form", "[analysis]") {
    // P V^3 - a V = 0 with b = 0 gives V = (3a)^3 e^{-2S}.
    const double a = 1.0, S = 1.0;
    const auto roots = find_singular_locus(system_field("vdw", {{"a", a}, {"b", 0.0}}),
                                           GridSpec{{Axis::pin("S", S), Axis::range("V", 0.5, 10, 50)}});
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].kind == RootKind::stability);
    CHECK(roots[0].coordinates[1] == Catch::Approx(27 * std::exp(-2 * S)).epsilon(1e-11));
}

TEST_CASE("power-law fitter recovers known exponents", "[analysis][property]") {
    for (double p : {1.0, 2.0, 3.0}) {
        std::vector<double> d, v;
        for (double off : geometric_offsets(1.0, 4, 16)) {
            d.push_back(off);
            v.push_back(std::pow(off, -p));
        }
        const FitResult f = fit_power_law(d, v);
        CHECK(f.divergent);
        CHECK(std::abs(f.exponent - p) <= 0.01);
        CHECK(f.correlation == Catch::Approx(-1.0));
    }
    const std::vector<double> few{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(fit_power_law(few, few), InvalidArgument);
    const std::vector<double> d{0.1, 0.05, 0.025, 0.0125}, tiny{1e-12, 1e-11, 1e-12, 1e-13};
    const FitResult flat = fit_power_law(d, tiny);
    CHECK_FALSE(flat.divergent);
    CHECK(flat.note.find("noise") != std::string::npos);
}

TEST_CASE("divergence exponent of the RN curvature", "[analysis]") {
    const Approach approach{EquilibriumPoint{{pi, 1.0}}, {1.0, 0.0}, geometric_offsets(pi, 4, 16)};
    const FitResult f = fit_divergence_exponent(system_field("reissner_nordstrom"), approach);
    CHECK(f.divergent);
    CHECK(std::abs(f.exponent - 2.0) <= 0.05);

    const FitResult flat = fit_divergence_exponent(system_field("ideal_gas"),
                                                   Approach{EquilibriumPoint{{1.0, 1.0}}, {0.0, 1.0}, geometric_offsets(0.5, 1, 10)});
    CHECK_FALSE(flat.divergent);
}

TEST_CASE("RN critical points", "[analysis]") {
    const RnCriticalPoints one = rn_critical_points(1.0);
    CHECK(one.extremal_entropy == Catch::Approx(pi));
    CHECK(one.zero_curvature_entropy == Catch::Approx(pi / 3));
    CHECK(one.extremal_mass == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(one.zero_curvature_mass == Catch::Approx(2 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(std::abs(one.zero_curvature_scalar) <= 1e-8);
    CHECK(std::abs(one.extremal_det_g) <= 1e-14);
    CHECK(one.curvature_changes_sign);

    const RnCriticalPoints two = rn_critical_points(2.0);
    CHECK(two.extremal_entropy == Catch::Approx(4 * pi));
    CHECK(two.zero_curvature_entropy == Catch::Approx(4 * pi / 3));
    CHECK(two.extremal_mass == Catch::Approx(2.0).epsilon(1e-14));
    CHECK(two.zero_curvature_mass == Catch::Approx(4 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(rn_critical_points(0.0), InvalidArgument);
}

TEST_CASE("scans are deterministic and independent of workers", "[analysis][property]") {
    const MetricField field = system_field("kerr_newman");
    const GridSpec grid{{Axis::range("S", 0.5, 10, 6), Axis::range("J", 0.05, 2, 5), Axis::range("Q", 0.1, 2, 4)}};
    const ScanReport a = grid_scan(field, grid, Quantity::scalar_curvature, 1);
    const ScanReport b = grid_scan(field, grid, Quantity::scalar_curvature, 1);
    const ScanReport c = grid_scan(field, grid, Quantity::scalar_curvature, 4);
    std::ostringstream sa, sb, sc;
    write_csv(sa, a);
    write_csv(sb, b);
    write_csv(sc, c);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str() == sc.str());
    CHECK(a.samples == c.samples);
}

TEST_CASE("CSV and JSON reports", "[analysis]") {
    ScanReport rep = grid_scan(system_field("reissner_nordstrom"),
                               GridSpec{{Axis::range("S", pi, 2 * pi, 2), Axis::pin("Q", 1.0)}}, Quantity::scalar_curvature);
    std::ostringstream csv;
    write_csv(csv, rep);
    const std::string text = csv.str();
    CHECK(text.rfind("S,Q,R,status\n", 0) == 0);
    CHECK(text.find("3.1415926535897931,1,,degenerate\n") != std::string::npos);
    CHECK(text.find("6.2831853071795862,1,5.92592592592") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);

    rep.singular_points = find_singular_locus(system_field("reissner_nordstrom"),
                                              GridSpec{{Axis::range("S", 0.5, 10, 20), Axis::pin("Q", 1.0)}});
    const auto j = to_json(rep, {{"J", 0.0}});
    CHECK(j["schema_version"] == 1);
    CHECK(j["system"] == "reissner_nordstrom");
    CHECK(j["command"] == "scan");
    CHECK(j["parameters"]["J"] == 0.0);
    CHECK(j["grid"]["points"] == 2);
    CHECK(j["values"].size() == 2);
    CHECK(j["values"][0]["status"] == "degenerate");
    CHECK(j["values"][0]["values"].is_null());
    CHECK(j["singular_points"].size() >= 1);
    for (const char* key : {"system", "parameters", "command", "grid", "values", "singular_points", "fits", "residuals"})
        CHECK(j.contains(key));
}

TEST_CASE("parallel_map propagates errors", "[analysis]") {
    auto boom = [](std::size_t i) -> int {
        if (i == 7) throw InvalidArgument("seven");
        return static_cast<int>(i);
    };
    CHECK_THROWS_AS(parallel_map<int>(20, 3, boom), InvalidArgument);
    const auto sq = parallel_map<int>(10, 3, [](std::size_t i) { return static_cast<int>(i * i); });
    CHECK(sq[9] == 81);
}
