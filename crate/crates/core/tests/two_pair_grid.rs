use std::f64::consts::FRAC_PI_2;

use helicity_core::fock::{self, ExpRoute, ModeSet};

fn two_pair() -> ModeSet {
    let grid = fock::negation_closure(&[[0.0, 0.0, 1.0], [0.3, -0.4, 0.2]]);
    ModeSet::from_cartesian(1.2, &grid).unwrap()
}

#[test]
fn anticommutators_on_two_pairs() {
    let modes = two_pair();
    assert_eq!(modes.mode_count(), 16);
    assert!(fock::anticommutator_check(&modes, 1e-10).unwrap().passed);
}

#[test]
fn sparse_parity_unitary_on_two_pairs() {
    let modes = two_pair();
    let u = fock::parity_unitary_with(&modes, FRAC_PI_2, ExpRoute::Sparse).unwrap();
    assert_eq!(u.max_nnz_per_column(), 1);
    assert!(u.unitarity_residual() < 1e-12);
    let h = fock::hamiltonian(&modes);
    assert!(u.commutator(&h).max_abs() < 1e-8);
    let n = fock::number_operator(&modes, None);
    assert!(u.commutator(&n).max_abs() < 1e-12);
}

#[test]
fn two_pair_field_and_charge_checks() {
    let modes = two_pair();
    assert!(
        fock::ladder_transform_check(&modes, FRAC_PI_2, 1e-10)
            .unwrap()
            .passed
    );
    assert!(
        fock::check_pc_anticommutation(&modes, 1e-10)
            .unwrap()
            .passed
    );
    assert!(
        fock::check_field_operator_parity(&modes, FRAC_PI_2, 1e-10)
            .unwrap()
            .passed
    );
}
