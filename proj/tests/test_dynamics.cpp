#include <catch_amalgamated.hpp>

#include "attractor/dynamics.hpp"
#include "attractor/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace attractor;
using Catch::Matchers::WithinAbs;

namespace {

double max_abs(const State& v)
{
    double m = 0.0;
    for (double x : v) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

} // namespace

TEST_CASE("figure-eight field vanishes at its critical points", "[dynamics]")
{
    const auto sys = figure_eight(0.1);
    CHECK(eval_field(sys, State{0.0, 0.0}) == State{0.0, 0.0});

    for (double mu : {0.1, 0.5, 3.0}) {
        const auto s = figure_eight(mu);
        const double q = 1.0 / std::numbers::sqrt2;
        CHECK(max_abs(eval_field(s, State{q, 0.0})) <= 1e-12);
        CHECK(max_abs(eval_field(s, State{-q, 0.0})) <= 1e-12);
    }
}

TEST_CASE("fluid-structure equilibria", "[dynamics]")
{
    const auto sys = fluid_structure(3.0);
    // y = 0, z = 0 and x^2 = gamma - 1 solve the right-hand side by hand.
    CHECK(max_abs(eval_field(sys, State{std::sqrt(2.0), 0.0, 0.0})) <= 1e-12);
    CHECK(max_abs(eval_field(sys, State{-std::sqrt(2.0), 0.0, 0.0})) <= 1e-12);
    CHECK(max_abs(eval_field(sys, State{0.0, 0.0, 0.0})) == 0.0);
}

TEST_CASE("Holling-Tanner interior equilibrium for N = 0.5", "[dynamics]")
{
    const auto sys = holling_tanner(0.5);
    // x(1 - x/7) = 6/7 and 6xy/(7 + 7x) = 12/14 = 6/7 at (1, 2); y = x / N.
    CHECK(max_abs(eval_field(sys, State{1.0, 2.0})) <= 1e-12);
    REQUIRE(sys.equilibria.size() == 1);
    CHECK_THAT(sys.equilibria[0][0], WithinAbs(1.0, 1e-14));
    CHECK_THAT(sys.equilibria[0][1], WithinAbs(2.0, 1e-14));
}

TEST_CASE("Hopf origin is fixed for any parameters", "[dynamics]")
{
    for (double beta : {-0.25, 1.0}) {
        CHECK(eval_field(hopf(4.0, 1.0, beta), State{0.0, 0.0, 0.0}) == State{0.0, 0.0, 0.0});
    }
    // Explicit form: x' = -mu x - y^2 - z^2, y' = -nu y + x y + beta z, z' = -nu z + x z - beta y.
    const auto out = eval_field(hopf(4.0, 1.0, -0.25), State{1.0, 2.0, 3.0});
    CHECK_THAT(out[0], WithinAbs(-4.0 - 4.0 - 9.0, 1e-15));
    CHECK_THAT(out[1], WithinAbs(-2.0 + 2.0 - 0.75, 1e-15));
    CHECK_THAT(out[2], WithinAbs(-3.0 + 3.0 + 0.5, 1e-15));
}

TEST_CASE("every declared equilibrium is a fixed point", "[dynamics][property]")
{
    for (const auto& name : system_names()) {
        const auto sys = make_system(name);
        REQUIRE_FALSE(sys.equilibria.empty());
        for (const auto& e : sys.equilibria) {
            INFO(name);
            CHECK(max_abs(eval_field(sys, e)) <= 1e-12);
        }
    }
    CHECK(figure_eight().equilibria.size() == 3);
    CHECK(fluid_structure().equilibria.size() == 3);
}

TEST_CASE("eval_field rejects bad input", "[dynamics]")
{
    const auto sys = figure_eight();
    CHECK_THROWS_AS(eval_field(sys, State{1.0, 2.0, 3.0}), ValidationError);
    CHECK_THROWS_AS(eval_field(sys, State{std::numeric_limits<double>::quiet_NaN(), 0.0}), DomainError);
    CHECK_THROWS_AS(eval_field(sys, State{std::numeric_limits<double>::infinity(), 0.0}), DomainError);

    const auto ht = holling_tanner();
    CHECK_THROWS_AS(eval_field(ht, State{0.0, 1.0}), DomainError);
    CHECK_THROWS_AS(eval_field(ht, State{-0.5, 1.0}), DomainError);
}

TEST_CASE("make_system applies overrides and rejects unknown names", "[dynamics]")
{
    const auto sys = make_system("hopf", {{"beta", 1.0}});
    CHECK(sys.param("beta") == 1.0);
    CHECK(sys.param("mu") == 4.0);
    CHECK(sys.param("nu") == 1.0);
    CHECK(make_system("eight").param("mu") == 0.5);
    CHECK(make_system("fluid-structure").param("gamma") == 3.0);
    CHECK(make_system("holling-tanner").param("N") == 0.5);

    CHECK_THROWS_AS(make_system("lorenz"), ValidationError);
    CHECK_THROWS_AS(make_system("eight", {{"gamma", 1.0}}), ValidationError);
    CHECK_THROWS_AS(make_system("eight", {{"mu", -1.0}}), ValidationError);
    CHECK_THROWS_AS(make_system("holling-tanner", {{"N", 0.0}}), ValidationError);
}

TEST_CASE("field evaluation is deterministic", "[dynamics]")
{
    const auto sys = fluid_structure();
    const State x{0.3, -0.7, 0.11};
    CHECK(eval_field(sys, x) == eval_field(sys, x));
}

TEST_CASE("hamiltonian and gradient", "[dynamics]")
{
    CHECK(hamiltonian(0.0, 0.0) == 0.0);
    CHECK(hamiltonian(1.0, 0.0) == 0.0);
    CHECK_THAT(hamiltonian(1.0 / std::numbers::sqrt2, 0.0), WithinAbs(-0.25, 1e-15));

    CHECK(hamiltonian_gradient(0.0, 0.0) == std::array<double, 2>{0.0, 0.0});
    CHECK(hamiltonian_gradient(1.0, 0.0) == std::array<double, 2>{2.0, 0.0});
    CHECK(hamiltonian_gradient(0.0, 1.0) == std::array<double, 2>{0.0, 1.0});
}

TEST_CASE("dissipation identity <grad H, F> = -mu H |grad H|^2", "[dynamics][property]")
{
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> coord(-1.5, 1.5);
    std::uniform_real_distribution<double> mus(0.05, 5.0);
    for (int i = 0; i < 500; ++i) {
        const double mu = mus(rng);
        const auto sys = figure_eight(mu);
        const double q = coord(rng);
        const double p = coord(rng);
        const auto f = eval_field(sys, State{q, p});
        const auto g = hamiltonian_gradient(q, p);
        const double lhs = g[0] * f[0] + g[1] * f[1];
        const double g2 = g[0] * g[0] + g[1] * g[1];
        const double rhs = -mu * hamiltonian(q, p) * g2;
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("separatrix samples lie on H = 0", "[dynamics]")
{
    for (std::size_t count : {2u, 3u, 4u, 7u, 200u, 1001u}) {
        const auto pts = separatrix_samples(count);
        REQUIRE(pts.size() == count);
        bool has_tip = false;
        bool has_left_tip = false;
        bool has_origin = false;
        for (const auto& [q, p] : pts) {
            CHECK(std::abs(hamiltonian(q, p)) <= 1e-12);
            CHECK(std::abs(q) <= 1.0);
            has_tip = has_tip || (q == 1.0 && p == 0.0);
            has_left_tip = has_left_tip || (q == -1.0 && p == 0.0);
            has_origin = has_origin || (q == 0.0 && p == 0.0);
        }
        INFO(count);
        CHECK(has_tip);
        CHECK(has_origin);
        CHECK((has_left_tip || count == 2));
    }

    // 200 samples visit both lobes.
    const auto pts = separatrix_samples(200);
    CHECK(std::any_of(pts.begin(), pts.end(), [](const auto& x) { return x[0] < -0.5; }));
    CHECK(std::any_of(pts.begin(), pts.end(), [](const auto& x) { return x[0] > 0.5; }));
    CHECK_THROWS_AS(separatrix_samples(1), ValidationError);
}

TEST_CASE("count_sign_changes", "[dynamics]")
{
    CHECK(count_sign_changes(std::vector<double>{-1, -2, -3}) == 0);
    CHECK(count_sign_changes(std::vector<double>{-1, 1, -1}) == 2);
    CHECK(count_sign_changes(std::vector<double>{}) == 0);
    // Zeros belong to the sign before them.
    CHECK(count_sign_changes(std::vector<double>{-1, 0, -1}) == 0);
    CHECK(count_sign_changes(std::vector<double>{-1, 0, 0, 2}) == 1);
    CHECK(count_sign_changes(std::vector<double>{0, 0, 3, -3}) == 1);
}
