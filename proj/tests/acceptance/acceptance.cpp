// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bkmoments/extrapolation.hpp"
#include "bkmoments/generator.hpp"
#include "bkmoments/models.hpp"
#include "bkmoments/oracle.hpp"
#include "bkmoments/polynomial.hpp"
#include "bkmoments/propagator.hpp"

using namespace bkm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double time_limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < time_limit_s;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] C%d %s (%.2fs / limit %.0fs)%s\n      %s\n", pass ? "PASS" : "FAIL", id, title, secs, time_limit_s,
                in_time ? "" : " TIME LIMIT EXCEEDED", out.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const OuParams kOu{1.0, 0.5, 1.0};
const VanDerPolParams kVdp{1.0, 0.5, 0.5, 0.5, 1.0};

Generator ou_generator() { return compile_generator(build_ou(kOu), origin_of(kOu)); }
Generator vdp_generator() { return compile_generator(build_van_der_pol(kVdp), origin_of(kVdp)); }

double estimate(const Generator& g, SchemeKind kind, int M, double T, const MultiIndex& alpha) {
    RunPlan plan;
    plan.horizon = T;
    plan.steps = M;
    plan.alpha = alpha;
    plan.scheme = {kind};
    return run(g, plan);
}

// Least-squares slope of log10|err| against log10 M, sign flipped so that
// an error ~ C/M^k reports k.
double convergence_order(const std::vector<int>& ms, const std::vector<double>& errors) {
    const std::size_t n = ms.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = std::log10(static_cast<double>(ms[i]));
        const double y = std::log10(std::abs(errors[i]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

constexpr SchemeKind kAllSchemes[] = {SchemeKind::Explicit1, SchemeKind::Explicit2, SchemeKind::Implicit1,
                                      SchemeKind::Implicit2};

bool slope_in_band(SchemeKind k, double slope) {
    const bool second = k == SchemeKind::Explicit2 || k == SchemeKind::Implicit2;
    return second ? (slope >= 1.7 && slope <= 2.3) : (slope >= 0.8 && slope <= 1.2);
}

Outcome slope_check(const Generator& g, const std::vector<int>& ms, double T, const MultiIndex& alpha,
                    double reference, const std::string& label) {
    Outcome out{true, ""};
    for (auto k : kAllSchemes) {
        std::vector<double> errs;
        for (int m : ms) errs.push_back(estimate(g, k, m, T, alpha) - reference);
        const double slope = convergence_order(ms, errs);
        const bool ok = slope_in_band(k, slope);
        out.pass = out.pass && ok;
        out.detail += label + " " + std::string(scheme_name(k)) + " order=" + fmt("%.3f", slope) + (ok ? "" : "(!)") + "; ";
    }
    return out;
}

// Paper tables, built directly from their printed gamma/v columns.
std::vector<Event> table_iii(const OuParams& p) {
    const Polynomial n = Polynomial::variable(1, 0);
    const Polynomial one = Polynomial::constant(1, 1.0);
    return {
        {(0.5 * p.sigma * p.sigma) * (n * (n - one)), Shift{-2}},
        {(-p.gamma * p.x_ini) * n, Shift{-1}},
        {(-p.gamma) * n, Shift{0}},
    };
}

std::vector<Event> table_ii(const VanDerPolParams& p) {
    const Polynomial n1 = Polynomial::variable(2, 0);
    const Polynomial n2 = Polynomial::variable(2, 1);
    const Polynomial one = Polynomial::constant(2, 1.0);
    const double e = p.epsilon, a = p.x_ini_1, b = p.x_ini_2;
    return {
        {(0.5 * p.nu11 * p.nu11) * (n1 * (n1 - one)), Shift{-2, 0}},                    // 1
        {b * n1, Shift{-1, 0}},                                                          // 2
        {n1, Shift{-1, 1}},                                                              // 3
        {(0.5 * p.nu22 * p.nu22) * (n2 * (n2 - one)), Shift{0, -2}},                    // 4
        {(-a) * n2 + (-e * a * a * b) * n2 + (e * b) * n2, Shift{0, -1}},                 // 5
        {(-e * a * a) * n2 + e * n2, Shift{0, 0}},                                       // 6
        {(-2 * e * a * b) * n2 - n2, Shift{1, -1}},                                      // 7
        {(-2 * e * a) * n2, Shift{1, 0}},                                                // 8
        {(-e * b) * n2, Shift{2, -1}},                                                   // 9
        {(-e) * n2, Shift{2, 0}},                                                        // 10
    };
}

Outcome compare_tables(const Generator& g, std::vector<Event> expected, const char* name) {
    expected = merge_events(std::move(expected));
    if (g.events() == expected) {
        return {true, std::string(name) + ": " + std::to_string(expected.size()) + " rows identical"};
    }
    std::string why = std::string(name) + " mismatch; compiled:\n" + format_event_table(g);
    return {false, why};
}

double ode_reference() { return ode_oracle(vdp_generator(), MultiIndex{1, 1}, {15, 1e-6, 0.1}); }

}  // namespace

int main() {
    std::printf("bkmoments acceptance suite\n");

    criterion(1, "golden event tables (OU 3 events, van der Pol 10 rows)", 1.0, [] {
        const auto a = compare_tables(ou_generator(), table_iii(kOu), "OU");
        const auto b = compare_tables(vdp_generator(), table_ii(kVdp), "vdp");
        const bool counts = ou_generator().events().size() == 3 && vdp_generator().events().size() == 10;
        return Outcome{a.pass && b.pass && counts, a.detail + "; " + b.detail};
    });

    criterion(2, "OU convergence orders vs closed form (1st and 2nd moment)", 10.0, [] {
        const auto g = ou_generator();
        const std::vector<int> ms{8, 16, 32, 64, 128};
        auto first = slope_check(g, ms, 1.0, MultiIndex{1}, ou_closed_form(1.0, 0.5, 1.0, 1.0, 1), "m1");
        auto second = slope_check(g, ms, 1.0, MultiIndex{2}, ou_closed_form(1.0, 0.5, 1.0, 1.0, 2), "m2");
        return Outcome{first.pass && second.pass, first.detail + second.detail};
    });

    criterion(3, "van der Pol convergence orders vs ODE oracle, M in {5,10,20,40}", 120.0, [] {
        const auto g = vdp_generator();
        const double ref = ode_reference();
        return slope_check(g, {5, 10, 20, 40}, 0.1, MultiIndex{1, 1}, ref, "vdp");
    });

    criterion(4, "reference value 2.030e-5 and Implicit2(M=30) agreement", 60.0, [] {
        const double ref = ode_reference();
        const double est = estimate(vdp_generator(), SchemeKind::Implicit2, 30, 0.1, MultiIndex{1, 1});
        const bool oracle_ok = std::abs(ref - 2.030e-5) <= 0.005e-5;
        const bool est_ok = std::abs(est - ref) < 1e-6;
        return Outcome{oracle_ok && est_ok, "ode=" + fmt("%.6e", ref) + " implicit2(30)=" + fmt("%.6e", est) +
                                                " |diff|=" + fmt("%.3e", std::abs(est - ref))};
    });

    criterion(5, "extrapolation beats raw estimates at M2 in {10,20,30}", 120.0, [] {
        const auto g = vdp_generator();
        const double ref = ode_reference();
        const MultiIndex alpha{1, 1};
        Outcome out{true, ""};
        for (int m2 : {10, 20, 30}) {
            const int m1 = m2 - 1;
            const double i1a = estimate(g, SchemeKind::Implicit1, m1, 0.1, alpha);
            const double i1b = estimate(g, SchemeKind::Implicit1, m2, 0.1, alpha);
            const double i2a = estimate(g, SchemeKind::Implicit2, m1, 0.1, alpha);
            const double i2b = estimate(g, SchemeKind::Implicit2, m2, 0.1, alpha);
            const double x1 = extrapolate1({i1a, i1b, m1, m2});
            const double x2 = extrapolate2({i2a, i2b, m1, m2});
            const bool ok1 = std::abs(x1 - ref) < std::abs(i1b - ref);
            const bool ok2 = std::abs(x2 - ref) < std::abs(i2b - ref);
            out.pass = out.pass && ok1 && ok2;
            out.detail += "M=" + std::to_string(m2) + " i1 raw " + fmt("%.2e", std::abs(i1b - ref)) + " ext " +
                          fmt("%.2e", std::abs(x1 - ref)) + ", i2 raw " + fmt("%.2e", std::abs(i2b - ref)) + " ext " +
                          fmt("%.2e", std::abs(x2 - ref)) + "; ";
        }
        return out;
    });

    criterion(6, "DP propagation equals brute-force walk enumeration (Explicit1, M<=4)", 5.0, [] {
        struct Case {
            Generator g;
            MultiIndex alpha;
            double T;
        };
        std::vector<Case> cases{{ou_generator(), MultiIndex{1}, 0.2},
                                {ou_generator(), MultiIndex{2}, 0.2},
                                {vdp_generator(), MultiIndex{1, 1}, 0.1},
                                {vdp_generator(), MultiIndex{2, 1}, 0.1}};
        double worst = 0.0;
        bool all_nonzero = true;
        for (const auto& c : cases) {
            for (int m = 1; m <= 4; ++m) {
                RunPlan plan;
                plan.horizon = c.T;
                plan.steps = m;
                plan.alpha = c.alpha;
                plan.scheme = {SchemeKind::Explicit1};
                const double dp = run(c.g, plan);
                const double walks = enumerate_walks(c.g, plan);
                const double scale = std::max(std::abs(walks), 1e-300);
                if (walks == 0.0 && dp != 0.0) all_nonzero = false;
                worst = std::max(worst, walks == 0.0 ? std::abs(dp) : std::abs(dp - walks) / scale);
            }
        }
        return Outcome{worst <= 1e-12 && all_nonzero, "max relative difference " + fmt("%.3e", worst)};
    });

    criterion(7, "second-order resolvent error scales as h^3 on the n<8 lattice", 30.0, [] {
        const auto g = vdp_generator();
        constexpr int cut = 8;
        std::vector<MultiIndex> states;
        for (int a = 0; a < cut; ++a) {
            for (int b = 0; b < cut; ++b) states.push_back(MultiIndex{a, b});
        }
        std::map<MultiIndex, int> index;
        for (std::size_t i = 0; i < states.size(); ++i) index[states[i]] = static_cast<int>(i);
        const int n = static_cast<int>(states.size());

        auto max_error = [&](double h) {
            Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
            for (int j = 0; j < n; ++j) {
                A(j, j) -= h * g.diag_element(states[j]);
                for (const auto& t : g.offdiag_targets(states[j])) {
                    if (auto it = index.find(t.target); it != index.end()) A(it->second, j) -= h * t.value;
                }
            }
            const Eigen::MatrixXd exact = A.partialPivLu().inverse();
            double worst = 0.0;
            for (int j = 0; j < n; ++j) {
                const WeightMap col = resolvent2_apply(g, WeightMap::unit(states[j]), h, false, cut);
                for (int i = 0; i < n; ++i) worst = std::max(worst, std::abs(col.at(states[i]) - exact(i, j)));
            }
            return worst;
        };
        const double e1 = max_error(0.02);
        const double e2 = max_error(0.01);
        const double ratio = e1 / e2;
        return Outcome{ratio >= 6.0 && ratio <= 10.0, "err(0.02)=" + fmt("%.3e", e1) + " err(0.01)=" +
                                                          fmt("%.3e", e2) + " ratio=" + fmt("%.3f", ratio)};
    });

    criterion(8, "structural invariants", 30.0, [] {
        std::vector<std::string> broken;
        const auto ou = ou_generator();
        const auto vdp = vdp_generator();

        // Zeroth moment and constant preservation.
        for (const Generator* g : {&ou, &vdp}) {
            const MultiIndex zero = MultiIndex::zeros(g->dimension());
            const WeightMap unit = WeightMap::unit(zero);
            for (auto k : kAllSchemes) {
                for (int m : {1, 2, 7, 16}) {
                    if (estimate(*g, k, m, 0.5, zero) != 1.0) broken.push_back("zeroth moment");
                }
            }
            if (!(step_explicit1(*g, unit, 0.1) == unit) || !(step_explicit2(*g, unit, 0.1) == unit) ||
                !(step_implicit1(*g, unit, 0.1) == unit) || !(step_implicit2(*g, unit, 0.1) == unit) ||
                !(resolvent2_apply(*g, unit, 0.1) == unit) || !apply_generator(*g, unit).empty()) {
                broken.push_back("constant preservation");
            }
        }

        // Boundary safety on every event for states with small coordinates.
        for (const Generator* g : {&ou, &vdp}) {
            for (const auto& e : g->events()) {
                const std::size_t dim = g->dimension();
                const int side = 6;
                std::size_t total = 1;
                for (std::size_t d = 0; d < dim; ++d) total *= side;
                for (std::size_t idx = 0; idx < total; ++idx) {
                    MultiIndex s(dim);
                    std::size_t r = idx;
                    for (std::size_t d = 0; d < dim; ++d) {
                        s[d] = static_cast<int>(r % side);
                        r /= side;
                    }
                    if (!(s + e.shift).is_nonnegative() && e.gamma.evaluate(s) != 0.0) broken.push_back("boundary");
                }
            }
        }

        // Shift round trip on integer polynomials and origins.
        std::mt19937_64 rng(11);
        std::uniform_int_distribution<int> coeff(-5, 5), expo(0, 3), shift(-3, 3);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t dim = 1 + trial % 3;
            Polynomial p(dim);
            for (int t = 0; t < 5; ++t) {
                MultiIndex m(dim);
                for (std::size_t d = 0; d < dim; ++d) m[d] = expo(rng);
                p = p + Polynomial::monomial(m, coeff(rng));
            }
            std::vector<double> c(dim), minus_c(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                c[d] = shift(rng);
                minus_c[d] = -c[d];
            }
            if (!(poly_shift(poly_shift(p, c), minus_c) == p)) broken.push_back("poly_shift round trip");
        }

        // Extrapolation exactness on synthetic C/M^k sequences.
        std::uniform_real_distribution<double> val(-10.0, 10.0);
        std::uniform_int_distribution<int> mdist(1, 200);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const double limit = val(rng), C = val(rng);
            int m1 = mdist(rng), m2 = mdist(rng);
            if (m1 == m2) m2 = m1 + 1;
            const double a1 = limit + C / m1, a2 = limit + C / m2;
            const double b1 = limit + C / (double(m1) * m1), b2 = limit + C / (double(m2) * m2);
            const double scale = std::max(std::abs(limit), 1.0);
            worst = std::max(worst, std::abs(extrapolate1({a1, a2, m1, m2}) - limit) / scale);
            worst = std::max(worst, std::abs(extrapolate2({b1, b2, m1, m2}) - limit) / scale);
        }
        if (worst > 1e-12) broken.push_back("extrapolation exactness");

        std::string detail = broken.empty() ? "all invariants hold" : "broken:";
        for (const auto& b : broken) detail += " " + b;
        detail += "; extrapolation worst relative error " + fmt("%.2e", worst);
        return Outcome{broken.empty(), detail};
    });

    criterion(9, "Monte Carlo agrees with closed form (OU) and ODE oracle (vdp) within 3 SE", 120.0, [] {
        const McOracleConfig ou_cfg{1'000'000, 1e-3, 7};
        const McOracleConfig vdp_cfg{1'000'000, 1e-4, 7};
        const auto ou = mc_oracle(build_ou(kOu), origin_of(kOu), MultiIndex{1}, 1.0, ou_cfg);
        const double ou_exact = ou_closed_form(1.0, 0.5, 1.0, 1.0, 1);
        const auto vdp = mc_oracle(build_van_der_pol(kVdp), origin_of(kVdp), MultiIndex{1, 1}, 0.1, vdp_cfg);
        const double vdp_ref = ode_reference();
        const double z_ou = std::abs(ou.mean - ou_exact) / ou.std_error;
        const double z_vdp = std::abs(vdp.mean - vdp_ref) / vdp.std_error;
        return Outcome{z_ou <= 3.0 && z_vdp <= 3.0,
                       "OU mean " + fmt("%.6f", ou.mean) + " (z=" + fmt("%.2f", z_ou) + "), vdp mean " +
                           fmt("%.3e", vdp.mean) + " +- " + fmt("%.1e", vdp.std_error) + " (z=" + fmt("%.2f", z_vdp) +
                           ")"};
    });

    std::printf("%s: %d criterion(s) failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
