#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "nmrsim/state_prep.hpp"
#include "nmrsim/tomography_metrics.hpp"

using namespace nmrsim;
using namespace nmrsim::testing;

TEST_CASE("simulate_readout records exactly the single-quantum elements") {
    Matrix z1 = product_operator("z11");
    ReadoutRecord plain = simulate_readout(z1, "111");
    CHECK(plain.observed.size() == 30);  // ordered |m| = 1 pairs for 3 spins
    for (const auto& o : plain.observed) {
        CHECK(std::abs(coherence_order(o.k, o.l, 3)) == 1);
        CHECK(std::abs(o.value) < 1e-14);  // diagonal state: nothing transverse
    }

    // a y pulse on spin 1 turns its z polarization into x
    ReadoutRecord tipped = simulate_readout(z1, "y11");
    Matrix x1 = product_operator("x11");
    for (const auto& o : tipped.observed)
        CHECK(std::abs(o.value - x1(o.k, o.l)) < 1e-13);

    // GHZ deviation: multi-quantum terms are invisible without pulses
    ReadoutRecord ghz_plain = simulate_readout(ghz_target(), "111");
    for (const auto& o : ghz_plain.observed) CHECK(std::abs(o.value) < 1e-13);

    CHECK_THROWS_AS(simulate_readout(z1, "11"), std::invalid_argument);
    CHECK_THROWS_AS(simulate_readout(z1, "z11"), std::invalid_argument);
}

TEST_CASE("full_readout_set enumerates the 27 pulse combinations") {
    auto records = full_readout_set(ghz_target());
    REQUIRE(records.size() == 27);
    CHECK(records.front().pulses == "111");
    CHECK(records[1].pulses == "11x");
    CHECK(records.back().pulses == "yyy");
    for (const auto& r : records) CHECK(r.observed.size() == 30);
}

TEST_CASE("reconstruct round-trips the experiment's checkpoint states") {
    for (const Matrix& rho : {pseudo_pure_target(), ghz_target(), dephase_z_target(),
                              dephase_x_target()}) {
        auto recon = reconstruct(full_readout_set(rho));
        CHECK(max_abs_diff(recon.state, rho) < 1e-8);
        CHECK(recon.residual < 1e-8);
    }

    std::mt19937 rng(83);
    Matrix dev = random_traceless_hermitian(8, rng);
    auto recon = reconstruct(full_readout_set(dev));
    CHECK(max_abs_diff(recon.state, dev) < 1e-8);
}

TEST_CASE("reconstruct names unresolved directions for rank-deficient sets") {
    // without any spin-1 readout pulse its longitudinal polarization is invisible
    auto all = full_readout_set(ghz_target());
    std::vector<ReadoutRecord> limited;
    for (const auto& r : all)
        if (r.pulses[0] == '1') limited.push_back(r);
    REQUIRE(limited.size() == 9);

    std::string msg = thrown_message([&] { reconstruct(limited); });
    CHECK(msg.find("rank-deficient") != std::string::npos);
    CHECK(msg.find("62") != std::string::npos);
    CHECK(msg.find("z11") != std::string::npos);

    CHECK_THROWS_AS(reconstruct({}), std::invalid_argument);
}

TEST_CASE("readout records serialize to JSON and back") {
    auto records = full_readout_set(dephase_x_target());
    auto back = records_from_json(records_to_json(records, 3));
    REQUIRE(back.size() == records.size());
    for (size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].pulses == records[i].pulses);
        REQUIRE(back[i].observed.size() == records[i].observed.size());
        for (size_t j = 0; j < records[i].observed.size(); ++j) {
            CHECK(back[i].observed[j].k == records[i].observed[j].k);
            CHECK(back[i].observed[j].l == records[i].observed[j].l);
            CHECK(back[i].observed[j].value == records[i].observed[j].value);
        }
    }
    Matrix from_back = reconstruct(back).state;
    CHECK(max_abs_diff(from_back, reconstruct(records).state) == 0.0);
    CHECK_THROWS_AS(records_from_json("{"), std::runtime_error);
}

TEST_CASE("attenuated_correlation matches the closed-form overlaps") {
    Matrix ghz = ghz_target();
    CHECK(attenuated_correlation(ghz, ghz).c == doctest::Approx(1.0).epsilon(1e-14));

    // dephased state against the full GHZ theory: 3 surviving terms of 7
    auto rep = attenuated_correlation(dephase_z_target(), ghz);
    CHECK(std::abs(rep.c - 3.0 / 7.0) < 1e-12);
    CHECK(std::abs(rep.the_norm - 5.25) < 1e-12);
    CHECK(std::abs(rep.exp_norm - 2.25) < 1e-12);

    // the reversed comparison is a perfect projection
    CHECK(std::abs(attenuated_correlation(ghz, dephase_z_target()).c - 1.0) < 1e-12);

    CHECK_THROWS_AS(attenuated_correlation(ghz, Matrix(Matrix::Zero(8, 8))),
                    std::invalid_argument);
    CHECK_THROWS_AS(attenuated_correlation(Matrix(Matrix::Zero(4, 4)), ghz),
                    std::invalid_argument);
}

TEST_CASE("attenuated_correlation is bounded when amplitude only decays") {
    std::mt19937 rng(89);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix a = random_traceless_hermitian(8, rng);
        Matrix b = random_traceless_hermitian(8, rng);
        double na = (a * a).trace().real();
        double nb = (b * b).trace().real();
        const Matrix& the = na >= nb ? a : b;
        const Matrix& exp = na >= nb ? b : a;
        auto rep = attenuated_correlation(exp, the);
        CHECK(std::abs(rep.c) <= 1.0 + 1e-12);
        CHECK(rep.exp_norm <= rep.the_norm + 1e-12);
    }
}

TEST_CASE("attenuated_correlation is invariant under joint unitaries") {
    std::mt19937 rng(97);
    Matrix a = random_traceless_hermitian(8, rng);
    Matrix b = random_traceless_hermitian(8, rng);
    Matrix u = random_unitary(8, rng);
    auto before = attenuated_correlation(a, b);
    auto after = attenuated_correlation(conj_by(u, a), conj_by(u, b));
    CHECK(std::abs(before.c - after.c) < 1e-10);
    CHECK(std::abs(before.the_norm - after.the_norm) < 1e-10);
}

TEST_CASE("correlation report line is fixed-format") {
    CorrelationReport rep;
    rep.c = 0.428571429;
    rep.the_norm = 5.25;
    rep.exp_norm = 2.25;
    CHECK(rep.line() ==
          "c=0.428571429 the_norm=5.250000000 exp_norm=2.250000000");
}

TEST_CASE("identity_offset applies the Frobenius-minimizing shift") {
    Matrix ghz = ghz_target();
    auto plain = identity_offset(ghz, dephase_z_target());
    CHECK(plain.alpha == 0.0);
    CHECK(max_abs_diff(plain.adjusted, ghz) < 1e-15);

    Matrix shifted = ghz + 0.3 * Matrix::Identity(8, 8);
    auto fixed = identity_offset(shifted, ghz);
    CHECK(std::abs(fixed.alpha + 0.3) < 1e-14);
    CHECK(max_abs_diff(fixed.adjusted, ghz) < 1e-13);
    CHECK(fixed.rule.find("Frobenius") != std::string::npos);

    // correlation against a traceless target is unchanged by the shift
    auto rep0 = attenuated_correlation(shifted, ghz);
    auto rep1 = attenuated_correlation(fixed.adjusted, ghz);
    CHECK(std::abs(rep0.c - rep1.c) < 1e-13);
}
