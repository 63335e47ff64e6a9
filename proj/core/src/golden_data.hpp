#ifndef GAMMAFLOW_GOLDEN_DATA_HPP
#define GAMMAFLOW_GOLDEN_DATA_HPP

namespace gammaflow {

// Frozen regression outputs. kGoldenDipoleLedger is the ledger.csv of
// `decompose` on the dipole fixture with n=2, p=1.9, alpha=0.9 (one pair at
// scale k=1); kGoldenSelftest pins the selftest check list.
inline constexpr const char* kGoldenDipoleLedger =
    "k,alpha_k,e_k,e_prime_k\n"
    "0,1,0,0\n"
    "1,0.34867844010000043,1,1\n";

inline constexpr const char* kGoldenSelftest =
    "check,status\n"
    "constants.omega1,pass\n"
    "constants.omega2,pass\n"
    "constants.gamma2,pass\n"
    "currents.mass_zero_single,pass\n"
    "currents.mass_zero_sum,pass\n"
    "currents.mass_zero_outside,pass\n"
    "currents.mass_one_length,pass\n"
    "currents.mass_one_empty,pass\n"
    "currents.mass_one_multiplicity,pass\n"
    "currents.boundary_dipole,pass\n"
    "currents.boundary_on_wall,pass\n"
    "currents.boundary_cancel,pass\n"
    "flatnorm.single_atom,pass\n"
    "flatnorm.zero_current,pass\n"
    "flatnorm.dipole_direct,pass\n"
    "flatnorm.pair_min_dipole,pass\n"
    "flatnorm.pair_min_boundary,pass\n"
    "flatnorm.pair_min_same_sign,pass\n"
    "lattice.constant_energy,pass\n"
    "lattice.variant_volume,pass\n"
    "lattice.mollify_constant,pass\n"
    "lattice.project_center_origin,pass\n"
    "lattice.project_fixed_point,pass\n"
    "lattice.select_center_constant,pass\n"
    "vortex.single_winding,pass\n"
    "vortex.pair_cancel,pass\n"
    "vortex.axis_ring,pass\n"
    "vortex.axis_translation,pass\n"
    "vortex.solid_angle_far,pass\n"
    "vortex.solid_angle_antipodal,pass\n"
    "jacobian.single_atom,pass\n"
    "jacobian.constant_empty,pass\n"
    "jacobian.degree_pair,pass\n"
    "jacobian.jform_constant,pass\n"
    "jacobian.continuity_identical_error,pass\n"
    "decomposition.admissible_examples,pass\n"
    "decomposition.far_atom,pass\n"
    "decomposition.dipole_pair,pass\n"
    "decomposition.boundary_atom,pass\n"
    "decomposition.lemma_base,pass\n"
    "decomposition.lemma_zeros,pass\n"
    "decomposition.lemma_example,pass\n"
    "grid.center_distance,pass\n"
    "grid.vertex_distance,pass\n"
    "grid.vertical_crossings,pass\n"
    "grid.orientation_flip,pass\n"
    "grid.dual_involution,pass\n"
    "recovery.flat_vortex_2d,pass\n"
    "recovery.flat_vortex_3d,pass\n"
    "recovery.flat_vortex_delta_limit,pass\n"
    "minimizer.zero_datum,pass\n"
    "minimizer.density_rotation,pass\n"
    "harness.fixture_roundtrip,pass\n";

}  // namespace gammaflow

#endif
