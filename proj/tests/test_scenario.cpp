#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "qhj/scenario.hpp"

using namespace qhj;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a qhj::Error");
    return ErrorCode::invalid_value;
}

} // namespace

TEST_CASE("parse: harmonic defaults") {
    const Scenario s = parse_scenario("scenario = harmonic\nomega = 1.0");
    CHECK(s.kind == ScenarioKind::harmonic);
    CHECK(s.omega == 1.0);
    CHECK(s.hbar == 1.0);
    CHECK(s.mass == 1.0);
}

TEST_CASE("parse: driven at the resonant denominator is rejected") {
    const auto code = code_of([] {
        parse_scenario("scenario = driven\nomega = 1.0\nh = 0.3\nOmega = 1.0");
    });
    CHECK(code == ErrorCode::resonant_denominator);
}

TEST_CASE("parse: magnetic round trip") {
    const Scenario s = parse_scenario(
        "scenario = magnetic\nB0 = 1.0\nB1 = 0.0\ngamma = 2.0\nc = 1.0\nomega = 3.0\n"
        "mass = 1.0");
    REQUIRE(s.magnetic.has_value());
    CHECK(s.magnetic->b0 == 1.0);
    CHECK(s.magnetic->b1 == 0.0);
    CHECK(s.magnetic->gamma == 2.0);
    CHECK(s.magnetic->omega_field == 3.0);
    CHECK(s.magnetic->larmor() == doctest::Approx(1.0));
}

TEST_CASE("parse: error paths") {
    CHECK(code_of([] { parse_scenario("scenario = harmonic\nomega = 1\nbogus = 2"); }) ==
          ErrorCode::unknown_key);
    CHECK(code_of([] { parse_scenario("scenario = driven\nomega = 1\nh = 0.1"); }) ==
          ErrorCode::missing_required_key);
    CHECK(code_of([] { parse_scenario("scenario = harmonic\nomega = fast"); }) ==
          ErrorCode::non_numeric_value);
    CHECK(code_of([] { parse_scenario("scenario = harmonic\nomega = -2"); }) ==
          ErrorCode::invalid_value);
}

TEST_CASE("parse: comments and blank lines") {
    const Scenario s = parse_scenario(
        "# oscillator\n\nscenario = harmonic # trailing\nomega = 2.0\nhbar = 0.5\n");
    CHECK(s.omega == 2.0);
    CHECK(s.hbar == 0.5);
}

TEST_CASE("parse(serialize(s)) is the identity") {
    std::vector<Scenario> cases;
    cases.push_back(parse_scenario("scenario = harmonic\nomega = 1.25\nhbar = 0.75"));
    cases.push_back(
        parse_scenario("scenario = driven\nomega = 1.5\nh = 0.3\nOmega = 0.4\nkx = 2"));
    cases.push_back(parse_scenario("scenario = resonance\nomega = 2\nh = 0.125"));
    cases.push_back(parse_scenario(
        "scenario = magnetic\nB0 = 1.5\nB1 = 0\ngamma = 2\nc = 3\nomega = 0.5"));
    for (const auto& s : cases) {
        const Scenario r = parse_scenario(serialize_scenario(s));
        CHECK(r.kind == s.kind);
        CHECK(r.omega == s.omega);
        CHECK(r.h == s.h);
        CHECK(r.big_omega == s.big_omega);
        CHECK(r.hbar == s.hbar);
        CHECK(r.mass == s.mass);
        CHECK(r.kx == s.kx);
        CHECK(r.ky == s.ky);
        CHECK(r.kz == s.kz);
        CHECK(r.magnetic.has_value() == s.magnetic.has_value());
        if (s.magnetic) {
            CHECK(r.magnetic->b0 == s.magnetic->b0);
            CHECK(r.magnetic->b1 == s.magnetic->b1);
            CHECK(r.magnetic->gamma == s.magnetic->gamma);
            CHECK(r.magnetic->light_c == s.magnetic->light_c);
        }
    }
}

TEST_CASE("shift: harmonic has no drive") {
    const Scenario s = parse_scenario("scenario = harmonic\nomega = 1.0");
    for (double t : {0.0, 0.7, 3.9}) {
        const Shift sh = shift_eval(s, t);
        CHECK(sh.f == 0.0);
        CHECK(sh.fdot == 0.0);
    }
}

TEST_CASE("shift: driven value at t = 0") {
    const Scenario s =
        parse_scenario("scenario = driven\nomega = 1.0\nh = 0.3\nOmega = 0.5");
    const Shift sh = shift_eval(s, 0.0);
    CHECK(sh.f == doctest::Approx(0.4).epsilon(1e-15)); // 0.3 / 0.75
    CHECK(sh.fdot == 0.0);
}

TEST_CASE("shift: resonance value at t = pi/2") {
    const Scenario s = parse_scenario("scenario = resonance\nomega = 1.0\nh = 2.0");
    const double t = M_PI / 2.0;
    const Shift sh = shift_eval(s, t);
    CHECK(sh.f == doctest::Approx(M_PI / 2.0).epsilon(1e-15));
    // (h/2w) sin t + (h t/2) cos t = 1 at t = pi/2
    CHECK(sh.fdot == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(shift_eval(s, 0.0).f == 0.0);
}

TEST_CASE("shift: magnetic is unsupported") {
    const Scenario s = parse_scenario(
        "scenario = magnetic\nB0 = 1\nB1 = 0\ngamma = 2\nc = 1\nomega = 1");
    CHECK(code_of([&] { shift_eval(s, 0.1); }) == ErrorCode::unsupported_kind);
}

TEST_CASE("shift: fdot matches a centered difference of f") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> time(0.0, 10.0);
    std::vector<Scenario> cases = {
        parse_scenario("scenario = harmonic\nomega = 1.3"),
        parse_scenario("scenario = driven\nomega = 1.0\nh = 0.3\nOmega = 0.5"),
        parse_scenario("scenario = resonance\nomega = 1.0\nh = 2.0"),
    };
    const double delta = 1e-5;
    for (const auto& s : cases) {
        for (int i = 0; i < 100; ++i) {
            const double t = time(rng);
            const double fd =
                (shift_eval(s, t + delta).f - shift_eval(s, t - delta).f) / (2.0 * delta);
            CHECK(std::abs(shift_eval(s, t).fdot - fd) <= 1e-6);
        }
    }
}

TEST_CASE("shift: driven with h = 0 reduces to the harmonic shift") {
    const Scenario d =
        parse_scenario("scenario = driven\nomega = 1.0\nh = 0\nOmega = 0.5");
    for (double t : {0.0, 0.3, 2.1, 7.7}) {
        CHECK(shift_eval(d, t).f == 0.0);
        CHECK(shift_eval(d, t).fdot == 0.0);
    }
}

TEST_CASE("parse: resonance ignores the drive-frequency key") {
    const Scenario s =
        parse_scenario("scenario = resonance\nomega = 1.0\nh = 2.0\nOmega = 0.7");
    CHECK(s.kind == ScenarioKind::resonance);
    CHECK(s.omega == 1.0);
}

TEST_CASE("shift: alternative resonance momentum profile differs") {
    const Scenario s = parse_scenario("scenario = resonance\nomega = 1.0\nh = 2.0");
    const double t = 1.3;
    CHECK(shift_velocity_alt(s, t) != shift_eval(s, t).fdot);
    // both profiles coincide where sin(wt) = 0 pre-factors vanish
    CHECK(shift_velocity_alt(s, 0.0) == doctest::Approx(shift_eval(s, 0.0).fdot));
}
