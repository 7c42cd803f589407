#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "rk/analysis.hpp"
#include "rk/tableau_io.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using rk::ButcherTableau;

namespace {

ButcherTableau load_cv8() {
    return rk::load_tableau(std::filesystem::path(RK_SOURCE_DIR) / "data" / "cv8.rkt");
}

/// Implicit 2-stage method from the S-reducibility footnote: equivalent to
/// the midpoint rule, symplectic, yet with a nonzero M matrix.
ButcherTableau footnote_method() {
    ButcherTableau tab;
    tab.name = "footnote";
    tab.kind = rk::TableauKind::Implicit;
    tab.A = {{0.5, 0.0}, {0.0, 0.5}};
    tab.b = {0.5, 0.5};
    tab.c = {0.5, 0.5};
    return tab;
}

double worst_d_residual_at(const ButcherTableau& tab, int total_order) {
    const rk::Mat m = rk::m_matrix(tab);
    const auto groups = rk::enumerate_trees(total_order - 1);
    double worst = 0.0;
    for (int n1 = 1; 2 * n1 <= total_order; ++n1) {
        const int n2 = total_order - n1;
        for (const auto& t1 : groups[n1 - 1])
            for (const auto& t2 : groups[n2 - 1])
                worst = std::max(worst, std::abs(rk::bilinear(rk::derivative_weights(t1, tab), m,
                                                              rk::derivative_weights(t2, tab))));
    }
    return worst;
}

}  // namespace

TEST_CASE("order residuals") {
    const auto rk4 = rk::catalog("rk4");
    double worst4 = 0.0;
    for (const auto& [tree, residual] : rk::order_residuals(rk4, 4))
        worst4 = std::max(worst4, std::abs(residual));
    CHECK(worst4 < 1e-15);

    double worst5 = 0.0;
    for (const auto& [tree, residual] : rk::order_residuals(rk4, 5))
        if (tree.order() == 5) worst5 = std::max(worst5, std::abs(residual));
    CHECK(worst5 > 1e-4);  // order 4, not 5

    double worst_eq3 = 0.0;
    for (const auto& [tree, residual] : rk::order_residuals(rk::catalog("eq3"), 4))
        worst_eq3 = std::max(worst_eq3, std::abs(residual));
    CHECK(worst_eq3 < 1e-14);
}

TEST_CASE("classical orders match the comparison table") {
    CHECK(rk::classical_order(rk::catalog("rk4")) == 4);
    CHECK(rk::classical_order(rk::catalog("gl4")) == 4);
    CHECK(rk::classical_order(rk::catalog("eq2")) == 4);
    CHECK(rk::classical_order(rk::catalog("eq3")) == 4);
    CHECK(rk::classical_order(rk::catalog("pointR")) == 4);
    CHECK(rk::classical_order(load_cv8()) == 8);
}

TEST_CASE("m matrix") {
    CHECK(rk::max_abs(rk::m_matrix(rk::catalog("gl4"))) < 1e-15);

    const rk::Mat m = rk::m_matrix(footnote_method());
    CHECK(m[0][0] == 0.25);
    CHECK(m[1][1] == 0.25);
    CHECK(m[0][1] == -0.25);
    CHECK(m[1][0] == -0.25);

    ButcherTableau zero_b = rk::catalog("rk4");
    zero_b.b = {0, 0, 0, 0};
    CHECK(rk::max_abs(rk::m_matrix(zero_b)) == 0.0);
}

TEST_CASE("m matrix is symmetric bitwise") {
    const rk::Mat m = rk::m_matrix(rk::family_tableau(0.77));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) CHECK(m[i][j] == m[j][i]);
}

TEST_CASE("pseudo-symplectic orders match the comparison table") {
    CHECK(rk::pseudo_symplectic_order(rk::catalog("eq3")) == rk::PseudoOrder{8, false});
    CHECK(rk::pseudo_symplectic_order(rk::catalog("eq2")) == rk::PseudoOrder{9, false});
    CHECK(rk::pseudo_symplectic_order(rk::catalog("rk4")) == rk::PseudoOrder{4, false});
    CHECK(rk::pseudo_symplectic_order(rk::catalog("pointR")) == rk::PseudoOrder{6, false});
    CHECK(rk::pseudo_symplectic_order(rk::catalog("gl4")).infinite);
    CHECK(rk::pseudo_symplectic_order(load_cv8()) == rk::PseudoOrder{8, false});
}

TEST_CASE("eq3 violates some D pair at total order 9") {
    CHECK(worst_d_residual_at(rk::catalog("eq3"), 9) > 1e-12);
    CHECK(worst_d_residual_at(rk::catalog("eq3"), 8) < 1e-13);
}

TEST_CASE("pseudo order is at least the classical order for catalog methods") {
    for (const std::string& name : rk::catalog_names()) {
        const auto tab = rk::catalog(name);
        const auto q = rk::pseudo_symplectic_order(tab);
        if (!q.infinite) CHECK(q.q >= rk::classical_order(tab));
    }
}

TEST_CASE("property flags match the comparison table") {
    const auto check_flags = [](const ButcherTableau& tab, bool c2, bool d1, bool dc, bool dc2,
                                bool dac) {
        const rk::DFlags flags = rk::d_vector_flags(tab);
        CAPTURE(tab.name);
        CHECK(flags.c2 == c2);
        CHECK(flags.d_one == d1);
        CHECK(flags.d_c == dc);
        CHECK(flags.d_c2 == dc2);
        CHECK(flags.d_ac == dac);
    };
    check_flags(rk::catalog("rk4"), false, true, false, false, false);
    check_flags(rk::catalog("eq2"), false, true, true, true, true);
    check_flags(rk::catalog("eq3"), false, true, true, true, true);
    check_flags(rk::catalog("pointR"), false, true, true, true, false);
    check_flags(rk::catalog("gl4"), true, true, true, true, true);
    check_flags(load_cv8(), true, true, false, false, false);
}

TEST_CASE("error coefficients against the printed values") {
    struct Row {
        const char* name;
        double t5, t6;
    };
    // full-precision values, verified to extend the printed digits
    const Row rows[] = {
        {"rk4", 0.014504582343198210, 0.016035314699606993},
        {"gl4", 0.0043306219754328025, 0.0056178986571812949},
        {"eq2", 0.11299452790607743, 0.13254013691019705},
        {"eq3", 0.00064048688817557733, 0.00091796213870574208},
        {"pointR", 0.0011430517246092675, 0.0015829806053464779},
    };
    for (const Row& row : rows) {
        CAPTURE(row.name);
        const auto tab = rk::catalog(row.name);
        CHECK(rk::error_coefficient(tab, 4) < 1e-12);  // all of order 4 (or more)
        CHECK_THAT(rk::error_coefficient(tab, 5), WithinRel(row.t5, 1e-12));
        CHECK_THAT(rk::error_coefficient(tab, 6), WithinRel(row.t6, 1e-12));
    }
    const auto cv8 = load_cv8();
    CHECK(rk::error_coefficient(cv8, 5) < 1e-12);
    CHECK(rk::error_coefficient(cv8, 6) < 1e-12);
}

TEST_CASE("the two error-coefficient routes agree") {
    for (const std::string& name : rk::catalog_names()) {
        const auto tab = rk::catalog(name);
        for (int p = 4; p <= 6; ++p) {
            const double sigma_form = rk::error_coefficient_sigma_form(tab, p);
            const double alpha_form = rk::error_coefficient_alpha_form(tab, p);
            CAPTURE(name, p, sigma_form, alpha_form);
            const double scale = std::max(sigma_form, alpha_form);
            CHECK((std::abs(sigma_form - alpha_form) <= 1e-12 * scale || scale < 1e-12));
        }
    }
}

TEST_CASE("T_j vanishes through the order and not past it") {
    for (const char* name : {"rk4", "eq2", "eq3", "gl4"}) {
        const auto tab = rk::catalog(name);
        for (int j = 1; j <= 4; ++j) CHECK(rk::error_coefficient(tab, j) < 1e-12);
        CHECK(rk::error_coefficient(tab, 5) > 1e-12);
    }
}

TEST_CASE("eq3 stability coefficients") {
    const auto r = rk::stability_coefficients(rk::catalog("eq3"), 8);
    const double c2 = rk::qc2_c2();
    const double c3 = rk::qc2_c3();
    CHECK_THAT(r[5], WithinAbs(5.0 / 6.0 + 10.0 / 3.0 * c2 - 5.0 / 6.0 * c3, 1e-10));
    CHECK_THAT(r[6], WithinAbs(20.0 * c2 - 5.0 * c3, 1e-10));
    CHECK_THAT(r[7], WithinAbs(-35.0 / 8.0 + 105.0 * c2 - 105.0 / 4.0 * c3, 1e-10));
    CHECK_THAT(r[8], WithinAbs(-70.0 / 3.0 + 1400.0 / 3.0 * c2 - 350.0 / 3.0 * c3, 1e-9));
    // printed digits
    CHECK_THAT(r[5], WithinAbs(1.0108425199001924, 1e-12));
    CHECK_THAT(r[6], WithinAbs(1.0650551194011546, 1e-12));
    CHECK_THAT(r[7], WithinAbs(1.2165393768560616, 1e-12));
    CHECK_THAT(r[8], WithinAbs(1.5179527860269405, 1e-12));
    CHECK_THAT(r[6], WithinAbs(6.0 * r[5] - 5.0, 1e-12));
    for (int k = 0; k <= 4; ++k) CHECK_THAT(r[k], WithinAbs(1.0, 1e-13));
}

TEST_CASE("explicit stability series terminates with the stage count") {
    const auto r = rk::stability_coefficients(rk::catalog("rk4"), 8);
    for (int k = 1; k <= 4; ++k) CHECK_THAT(r[k], WithinAbs(1.0, 1e-15));
    for (int k = 5; k <= 8; ++k) CHECK(r[k] == 0.0);  // A is nilpotent of index 4
}

TEST_CASE("gl4 stability series matches its Pade form") {
    // R(z) = (1 + z/2 + z^2/12) / (1 - z/2 + z^2/12); expanding gives
    // [z^5] R = 1/144, so r5 = 120/144 = 5/6.
    const auto r = rk::stability_coefficients(rk::catalog("gl4"), 6);
    for (int k = 1; k <= 4; ++k) CHECK_THAT(r[k], WithinAbs(1.0, 1e-13));
    CHECK_THAT(r[5], WithinAbs(5.0 / 6.0, 1e-12));
}

TEST_CASE("leading term of R(z)R(-z) - 1") {
    const auto check_leading = [](const ButcherTableau& tab, int power, double coeff) {
        const rk::LeadingTerm lt = rk::rr_minus_one_leading(tab);
        CAPTURE(tab.name);
        REQUIRE_FALSE(lt.none);
        CHECK(lt.power == power);
        CHECK((lt.coefficient > 0) == (coeff > 0));
        CHECK_THAT(lt.coefficient, WithinRel(coeff, 1e-6));
    };
    check_leading(rk::catalog("rk4"), 6, 0.013888888888888889);
    check_leading(rk::catalog("eq2"), 10, -0.0014467893988213846);
    check_leading(rk::catalog("eq3"), 10, 9.5004396042316220e-6);
    check_leading(rk::catalog("pointR"), 8, 5.7870370370370370e-5);
    check_leading(load_cv8(), 10, 6.2779180111046593e-6);
    CHECK(rk::rr_minus_one_leading(rk::catalog("gl4")).none);
}

TEST_CASE("D bilinearity: quadratic form equals the displayed identity") {
    std::mt19937_64 rng(1234);
    const auto groups = rk::enumerate_trees(5);
    std::vector<rk::RootedTree> all;
    for (const auto& g : groups) all.insert(all.end(), g.begin(), g.end());
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);

    for (const char* name : {"eq3", "rk4", "eq2"}) {
        const auto tab = rk::catalog(name);
        const rk::Mat m = rk::m_matrix(tab);
        for (int trial = 0; trial < 40; ++trial) {
            const auto& t1 = all[pick(rng)];
            const auto& t2 = all[pick(rng)];
            const rk::Vec phi1 = rk::derivative_weights(t1, tab);
            const rk::Vec phi2 = rk::derivative_weights(t2, tab);
            const double quad = rk::bilinear(phi1, m, phi2);
            const double direct = rk::dot(tab.b, rk::elementwise(phi1, rk::matvec(tab.A, phi2))) +
                                  rk::dot(tab.b, rk::elementwise(rk::matvec(tab.A, phi1), phi2)) -
                                  rk::dot(tab.b, phi1) * rk::dot(tab.b, phi2);
            CAPTURE(name, t1.repr(), t2.repr());
            CHECK_THAT(quad, WithinAbs(direct, 1e-13));
        }
    }
}

TEST_CASE("family members share T5, T6 and the stability function") {
    const double psis[] = {0.3, 0.7, 1.1};
    std::vector<double> t5, t6;
    std::vector<std::vector<double>> rs;
    for (double psi : psis) {
        const auto tab = rk::family_tableau(psi);
        t5.push_back(rk::error_coefficient(tab, 5));
        t6.push_back(rk::error_coefficient(tab, 6));
        rs.push_back(rk::stability_coefficients(tab, 8));
    }
    for (std::size_t i = 1; i < 3; ++i) {
        CHECK_THAT(t5[i], WithinAbs(t5[0], 1e-12));
        CHECK_THAT(t6[i], WithinAbs(t6[0], 1e-12));
        for (int k = 0; k <= 8; ++k) CHECK_THAT(rs[i][k], WithinAbs(rs[0][k], 1e-12));
    }
}

TEST_CASE("family D-residuals at total order 9 scale like 1/b5") {
    const double psis[] = {0.3, 0.7, 1.1};
    std::vector<double> products;
    for (double psi : psis) {
        const auto tab = rk::family_tableau(psi);
        products.push_back(worst_d_residual_at(tab, 9) * tab.b[4]);
    }
    for (std::size_t i = 1; i < 3; ++i)
        CHECK_THAT(products[i], WithinRel(products[0], 1e-9));
}

TEST_CASE("family members analyze as (8, 4, 8)") {
    for (double psi : {0.3, 1.1}) {
        const auto a = rk::analyze(rk::family_tableau(psi));
        CHECK(a.p == 4);
        CHECK(a.q == rk::PseudoOrder{8, false});
        CHECK_FALSE(a.q_below_p);
    }
}

TEST_CASE("analyze summarizes a method consistently") {
    const auto eq2 = rk::analyze(rk::catalog("eq2"));
    CHECK_THAT(eq2.max_abs_a, WithinAbs(8.0 * rk::eq2_gamma() - 1.0, 1e-14));  // 1.7024...
    CHECK_THAT(eq2.min_nonzero_b, WithinAbs(0.5 - 4.0 * rk::eq2_gamma(), 1e-14));

    const auto a = rk::analyze(rk::catalog("eq3"));
    CHECK(a.stages == 8);
    CHECK(a.p == 4);
    CHECK(a.q == rk::PseudoOrder{8, false});
    CHECK_THAT(a.max_abs_a, WithinAbs(1.0 / (2.0 * rk::qc2_c2()) - 2.0, 1e-12));
    CHECK_THAT(a.min_nonzero_b, WithinAbs(0.5 * rk::qc2_c2(), 1e-15));
    CHECK_FALSE(a.q_below_p);
}
