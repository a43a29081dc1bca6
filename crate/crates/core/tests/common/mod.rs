//! Dense-matrix reference implementations built from 2x2 Pauli matrices.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use tfcm::pauli::{Pauli, PauliString, PauliSum};

pub type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single(p: Pauli) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match p {
        Pauli::I => CMat::from_row_slice(2, 2, &[o, z, z, o]),
        Pauli::X => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        Pauli::Y => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        Pauli::Z => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    }
}

/// `i^r` times the Kronecker product, qubit 0 as the least significant bit.
pub fn dense(p: &PauliString) -> CMat {
    let mut m = CMat::from_element(1, 1, c(1.0, 0.0));
    for q in (0..p.n()).rev() {
        m = m.kronecker(&single(p.at(q)));
    }
    let phase = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][p.phase_exponent() as usize];
    m * phase
}

pub fn dense_sum(h: &PauliSum) -> CMat {
    let dim = 1 << h.n();
    let mut m = CMat::zeros(dim, dim);
    for (coef, p) in h.terms() {
        m += dense(p) * c(*coef, 0.0);
    }
    m
}

/// Real symmetric matrix of a Hamiltonian without `Y` factors.
pub fn dense_real(h: &PauliSum) -> DMatrix<f64> {
    let m = dense_sum(h);
    assert!(m.iter().all(|z| z.im.abs() < 1e-14), "matrix is not real");
    m.map(|z| z.re)
}

/// Ascending eigenvalues and matching eigenvectors.
pub fn dense_spectrum(h: &PauliSum) -> (Vec<f64>, Vec<DVector<f64>>) {
    let eig = SymmetricEigen::new(dense_real(h));
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = idx.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    (values, vectors)
}

pub fn dense_ground(h: &PauliSum) -> (f64, DVector<f64>) {
    let (e, v) = dense_spectrum(h);
    (e[0], v[0].clone())
}

pub fn expect(op: &PauliString, v: &DVector<f64>) -> f64 {
    let m = dense(op).map(|z| z.re);
    assert!(dense(op).iter().all(|z| z.im.abs() < 1e-14), "use a real operator");
    (v.transpose() * m * v)[(0, 0)] / v.norm_squared()
}

/// Open transverse-field Ising chain `-sum Z_j Z_{j+1} - B sum X_j` on `m` qubits,
/// built term by term.
pub fn tfim(m: usize, b: f64) -> PauliSum {
    let mut h = PauliSum::zero(m).unwrap();
    for j in 0..m {
        if j + 1 < m {
            h.add_term(-1.0, PauliString::from_factors(m, &[(j, Pauli::Z), (j + 1, Pauli::Z)]).unwrap())
                .unwrap();
        }
        h.add_term(-b, PauliString::single(m, j, Pauli::X).unwrap()).unwrap();
    }
    h
}

pub fn zz(m: usize, i: usize, j: usize) -> PauliString {
    PauliString::from_factors(m, &[(i, Pauli::Z), (j, Pauli::Z)]).unwrap()
}
