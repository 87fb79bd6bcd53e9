#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ringprobe/constants.hpp"
#include "ringprobe/coupling.hpp"

using namespace ringprobe;

namespace {

AtomCouplingInput reference_atom() {
    // nu = 1e9 Hz, A = 1e3 lambda_A^2, detuning = 10 linewidths, probe close
    // to resonance: the textbook numbers giving g ~ 1e4 / s.
    AtomCouplingInput in;
    in.atom_omega = 2.0 * k_pi * 3.82e14;  // ~785 nm
    in.atom_linewidth = 2.0 * k_pi * 6e6;
    in.probe_omega = in.atom_omega - 10.0 * in.atom_linewidth;
    in.fsr_hz = 1e9;
    in.atom_wavelength = 785e-9;
    in.mode_area = 1e3 * in.atom_wavelength * in.atom_wavelength;
    return in;
}

}  // namespace

TEST_SUITE("coupling") {

TEST_CASE("atom coupling estimate") {
    const auto result = atom_coupling(reference_atom());
    CHECK(result.g == doctest::Approx(11936.6).epsilon(1e-4));
    CHECK(result.warnings.empty());

    SUBCASE("inverse proportionality to the detuning") {
        AtomCouplingInput in = reference_atom();
        in.probe_omega = in.atom_omega - 20.0 * in.atom_linewidth;
        const double halved = atom_coupling(in).g;
        CHECK(halved == doctest::Approx(0.5 * result.g).epsilon(1e-4));
    }
    SUBCASE("magnitude is even in the detuning sign") {
        AtomCouplingInput blue = reference_atom();
        blue.probe_omega = blue.atom_omega + 10.0 * blue.atom_linewidth;
        CHECK(atom_coupling(blue).g == doctest::Approx(result.g).epsilon(1e-4));
    }
    SUBCASE("large mode area kills the coupling") {
        AtomCouplingInput in = reference_atom();
        in.mode_area *= 1e6;
        CHECK(atom_coupling(in).g == doctest::Approx(result.g * 1e-6).epsilon(1e-6));
    }
    SUBCASE("far-off-resonance warning") {
        AtomCouplingInput in = reference_atom();
        in.probe_omega = 0.8 * in.atom_omega;
        CHECK_FALSE(atom_coupling(in).warnings.empty());
    }
    SUBCASE("zero detuning is an error") {
        AtomCouplingInput in = reference_atom();
        in.probe_omega = in.atom_omega;
        CHECK_THROWS_AS(atom_coupling(in), std::invalid_argument);
    }
}

TEST_CASE("clausius-mossotti factor") {
    CHECK(clausius_mossotti(1.0) == 0.0);
    CHECK(clausius_mossotti(1e12) == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(clausius_mossotti(-2.5) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK_THROWS_AS(clausius_mossotti(-2.0), std::domain_error);
}

TEST_CASE("nanoparticle coupling") {
    NanoCouplingInput in;
    in.mossotti_mu = 5.0;
    in.fsr_hz = 1e9;
    in.wavelength = 1e-6;
    in.mode_area = 1e3 * in.wavelength * in.wavelength;  // lambda^2/A = 1e-3
    in.density = 1000.0;                                 // 1 g/cm^3
    in.mass = 1e-15;
    const auto result = nanoparticle_coupling(in);
    CHECK(result.critical_mass == doctest::Approx(1e-15).epsilon(1e-12));
    CHECK(result.g == doctest::Approx(1.97392088e8).epsilon(1e-8));
    CHECK(result.warnings.empty());

    SUBCASE("linear mass scaling") {
        NanoCouplingInput half = in;
        half.mass = 0.5e-15;
        CHECK(nanoparticle_coupling(half).g == doctest::Approx(0.5 * result.g).epsilon(1e-12));
        NanoCouplingInput none = in;
        none.mass = 0.0;
        CHECK(nanoparticle_coupling(none).g == 0.0);
    }
    SUBCASE("critical mass scales with the cube of the wavelength") {
        NanoCouplingInput big = in;
        big.wavelength *= 2.0;
        CHECK(nanoparticle_coupling(big).critical_mass ==
              doctest::Approx(8.0 * result.critical_mass).epsilon(1e-12));
    }
    SUBCASE("super-critical mass warns but still reports") {
        NanoCouplingInput heavy = in;
        heavy.mass = 3e-15;
        const auto r = nanoparticle_coupling(heavy);
        CHECK_FALSE(r.warnings.empty());
        CHECK(r.g == doctest::Approx(3.0 * result.g).epsilon(1e-12));
    }
}

}  // TEST_SUITE
