mod common;

use common::{dense, dense_sum};
use proptest::prelude::*;
use tfcm::pauli::{CliffordMap, Pauli, PauliString, PauliSum};

const N: usize = 4;

fn pauli_string() -> impl Strategy<Value = PauliString> {
    (0u64..1 << N, 0u64..1 << N, 0u8..4).prop_map(|(x, z, r)| PauliString::from_masks(N, x, z, r).unwrap())
}

fn close(a: &common::CMat, b: &common::CMat) -> bool {
    (a - b).iter().all(|z| z.norm() < 1e-12)
}

proptest! {
    #[test]
    fn product_matches_matrices(a in pauli_string(), b in pauli_string()) {
        let ab = a.mul(&b).unwrap();
        prop_assert!(close(&dense(&ab), &(dense(&a) * dense(&b))));
    }

    #[test]
    fn commutation_matches_matrices(a in pauli_string(), b in pauli_string()) {
        let (ma, mb) = (dense(&a), dense(&b));
        let commute = close(&(&ma * &mb), &(&mb * &ma));
        prop_assert_eq!(a.commutes(&b).unwrap(), commute);
    }

    #[test]
    fn hermitian_iff_matrix_is(a in pauli_string()) {
        let m = dense(&a);
        prop_assert_eq!(a.is_hermitian(), close(&m, &m.adjoint()));
    }

    #[test]
    fn text_round_trip(a in pauli_string()) {
        prop_assert_eq!(PauliString::parse(N, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn restrict_keeps_phase_on_kept_sites(a in pauli_string(), keep in 0u64..1 << N) {
        let r = a.restrict(keep);
        prop_assert_eq!(r.x_mask(), a.x_mask() & keep);
        prop_assert_eq!(r.z_mask(), a.z_mask() & keep);
        prop_assert_eq!(r.phase_exponent(), a.phase_exponent());
    }

    #[test]
    fn sum_is_canonical(terms in prop::collection::vec((-3i32..4, pauli_string()), 0..8)) {
        let hermitian: Vec<(f64, PauliString)> = terms
            .into_iter()
            .map(|(c, p)| (c as f64, p.with_phase(2 * (p.phase_exponent() / 2))))
            .collect();
        let sum = PauliSum::from_terms(N, hermitian.clone()).unwrap();
        let mut want = common::CMat::zeros(1 << N, 1 << N);
        for (c, p) in &hermitian {
            want += dense(p) * num_complex::Complex64::new(*c, 0.0);
        }
        prop_assert!(close(&dense_sum(&sum), &want));
        prop_assert!(sum.terms().iter().all(|(c, p)| *c != 0.0 && p.phase_exponent() == 0));
        prop_assert_eq!(PauliSum::parse(N, &sum.to_text()).unwrap(), sum);
    }
}

/// Conjugation by the Hadamard on every qubit, as a Clifford map.
fn hadamard_all(n: usize) -> CliffordMap {
    let xs = (0..n).map(|q| PauliString::single(n, q, Pauli::Z).unwrap()).collect();
    let zs = (0..n).map(|q| PauliString::single(n, q, Pauli::X).unwrap()).collect();
    CliffordMap::from_images(xs, zs).unwrap()
}

proptest! {
    #[test]
    fn clifford_conjugation_matches_matrices(a in pauli_string()) {
        let h1 = common::CMat::from_row_slice(2, 2, &[1.0, 1.0, 1.0, -1.0].map(|v| num_complex::Complex64::new(v / 2f64.sqrt(), 0.0)));
        let mut h = common::CMat::from_element(1, 1, num_complex::Complex64::new(1.0, 0.0));
        for _ in 0..N {
            h = h.kronecker(&h1);
        }
        let image = hadamard_all(N).conjugate(&a).unwrap();
        prop_assert!(close(&dense(&image), &(&h * dense(&a) * &h)));
    }

    #[test]
    fn inverse_undoes_map(a in pauli_string()) {
        let m = tfcm::model::duality_1d(N).unwrap();
        let inv = m.inverse().unwrap();
        prop_assert_eq!(inv.conjugate(&m.conjugate(&a).unwrap()).unwrap(), a);
    }
}

#[test]
fn y_is_i_x_z() {
    let x = PauliString::single(1, 0, Pauli::X).unwrap();
    let z = PauliString::single(1, 0, Pauli::Z).unwrap();
    let y = PauliString::single(1, 0, Pauli::Y).unwrap();
    assert_eq!(x.mul(&z).unwrap(), y.with_phase(3));
    assert!(close(&dense(&y), &common::single(Pauli::Y)));
}

#[test]
fn composition_with_inverse_is_identity() {
    let m = tfcm::model::duality_1d(8).unwrap();
    let id = CliffordMap::compose(&m, &m.inverse().unwrap()).unwrap();
    assert_eq!(id, CliffordMap::identity(8).unwrap());
}
