//! Matrix-free exact diagonalization on the full `2^n` state space.
//!
//! Basis index bit `q` is the `Z` eigenvalue of qubit `q` (`0` for `+1`).

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};

/// Largest qubit count accepted by the dense state-vector routines.
pub const MAX_ED_QUBITS: usize = 26;

/// Amplitudes the Krylov basis may hold before its dimension is reduced.
const KRYLOV_BUDGET: usize = 1 << 25;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_capacity(n: usize) -> Result<()> {
    if n > MAX_ED_QUBITS {
        Err(Error::Capacity(format!(
            "{n} qubits exceed the state-vector limit of {MAX_ED_QUBITS}"
        )))
    } else {
        Ok(())
    }
}

impl StateVector {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_capacity(n)?;
        if amps.len() != 1 << n {
            return Err(Error::SizeMismatch {
                expected: 1 << n,
                actual: amps.len(),
            });
        }
        Ok(Self { n, amps })
    }

    pub fn zero(n: usize) -> Result<Self> {
        check_capacity(n)?;
        Ok(Self {
            n,
            amps: vec![ZERO; 1 << n],
        })
    }

    /// Computational basis state `|index>`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut v = Self::zero(n)?;
        if index >= v.amps.len() {
            return Err(Error::OutOfRange(format!("basis index {index} for {n} qubits")));
        }
        v.amps[index] = Complex64::new(1.0, 0.0);
        Ok(v)
    }

    /// Normalized state with uniform random amplitudes from a seeded generator.
    pub fn random(n: usize, seed: u64) -> Result<Self> {
        check_capacity(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let amps = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let mut v = Self { n, amps };
        v.normalize();
        Ok(v)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Scales to unit norm; a zero vector is left untouched.
    pub fn normalize(&mut self) -> f64 {
        let norm = self.norm();
        if norm > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= norm);
        }
        norm
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn axpy(&mut self, alpha: Complex64, x: &Self) {
        self.amps
            .iter_mut()
            .zip(&x.amps)
            .for_each(|(y, x)| *y += alpha * x);
    }
}

/// Precomputed action of one Pauli string: `P|b> = phase (-1)^{|z & b|} |b ^ x>`.
#[derive(Clone, Copy)]
struct Action {
    coefficient: Complex64,
    x: usize,
    z: usize,
}

fn action(coefficient: f64, p: &PauliString) -> Action {
    let k = (p.phase_exponent() as u32 + (p.x_mask() & p.z_mask()).count_ones()) % 4;
    let phase = [
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 1.0),
        Complex64::new(-1.0, 0.0),
        Complex64::new(0.0, -1.0),
    ][k as usize];
    Action {
        coefficient: phase * coefficient,
        x: p.x_mask() as usize,
        z: p.z_mask() as usize,
    }
}

fn apply_actions(actions: &[Action], v: &StateVector) -> StateVector {
    let src = &v.amps;
    let mut out = vec![ZERO; src.len()];
    out.par_chunks_mut(1 << 12)
        .enumerate()
        .for_each(|(chunk, block)| {
            let base = chunk << 12;
            for (k, slot) in block.iter_mut().enumerate() {
                let c = base + k;
                let mut acc = ZERO;
                for a in actions {
                    let b = c ^ a.x;
                    let amp = src[b];
                    if (a.z & b).count_ones() % 2 == 0 {
                        acc += a.coefficient * amp;
                    } else {
                        acc -= a.coefficient * amp;
                    }
                }
                *slot = acc;
            }
        });
    StateVector { n: v.n, amps: out }
}

fn check_size(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::SizeMismatch { expected, actual })
    }
}

pub fn apply_pauli(p: &PauliString, v: &StateVector) -> Result<StateVector> {
    check_size(v.n, p.n())?;
    Ok(apply_actions(&[action(1.0, p)], v))
}

/// `H|v>` without forming the matrix.
pub fn apply(h: &PauliSum, v: &StateVector) -> Result<StateVector> {
    check_size(v.n, h.n())?;
    let actions: Vec<Action> = h.terms().iter().map(|(c, p)| action(*c, p)).collect();
    Ok(apply_actions(&actions, v))
}

/// `<v|P|v> / <v|v>`.
pub fn expectation_pauli(p: &PauliString, v: &StateVector) -> Result<Complex64> {
    let pv = apply_pauli(p, v)?;
    Ok(v.inner(&pv) / v.inner(v).re)
}

/// `<v|H|v> / <v|v>`; `H` is Hermitian so only the real part is returned.
pub fn expectation(h: &PauliSum, v: &StateVector) -> Result<f64> {
    let hv = apply(h, v)?;
    Ok(v.inner(&hv).re / v.inner(v).re)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Krylov dimension per restart cycle.
    pub krylov_dim: usize,
    pub max_restarts: usize,
    /// Stop when `||H x - E x|| <= tol * max(1, |E|)`.
    pub tol: f64,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self {
            krylov_dim: 60,
            max_restarts: 200,
            tol: 1e-11,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SpectrumResult {
    /// Lowest eigenvalues in ascending order.
    pub energies: Vec<f64>,
    pub states: Vec<StateVector>,
    pub residuals: Vec<f64>,
    /// Matrix-vector products used.
    pub matvecs: usize,
}

impl SpectrumResult {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    pub fn ground_state(&self) -> &StateVector {
        &self.states[0]
    }
}

fn project_out(v: &mut StateVector, basis: &[StateVector]) {
    // two passes keep the basis orthogonal to working precision
    for _ in 0..2 {
        for b in basis {
            let c = b.inner(v);
            v.axpy(-c, b);
        }
    }
}

struct Ritz {
    value: f64,
    vector: StateVector,
    residual: f64,
    steps: usize,
}

/// One Lanczos cycle from `start`, kept orthogonal to `locked`.
fn lanczos_cycle(
    h: &PauliSum,
    start: StateVector,
    locked: &[StateVector],
    max_dim: usize,
) -> Result<Ritz> {
    let mut q = start;
    project_out(&mut q, locked);
    if q.normalize() < 1e-300 {
        return Err(Error::Domain("Lanczos start vector lies in the locked space".into()));
    }
    let mut basis: Vec<StateVector> = vec![q];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    loop {
        let k = basis.len() - 1;
        let mut w = apply(h, &basis[k])?;
        let a = basis[k].inner(&w).re;
        alpha.push(a);
        project_out(&mut w, locked);
        project_out(&mut w, &basis);
        let b = w.norm();
        if basis.len() >= max_dim || b < 1e-12 {
            break;
        }
        w.amps.iter_mut().for_each(|x| *x /= b);
        beta.push(b);
        basis.push(w);
    }
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let (idx, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty tridiagonal");
    let coeffs = eig.eigenvectors.column(idx);
    let mut vector = StateVector::zero(basis[0].n)?;
    for (c, b) in coeffs.iter().zip(&basis) {
        vector.axpy(Complex64::new(*c, 0.0), b);
    }
    project_out(&mut vector, locked);
    vector.normalize();
    let mut r = apply(h, &vector)?;
    r.axpy(Complex64::new(-value, 0.0), &vector);
    project_out(&mut r, locked);
    Ok(Ritz {
        value,
        vector,
        residual: r.norm(),
        steps: m + 1,
    })
}

/// Lowest `k` eigenpairs of a Hermitian Pauli sum by restarted Lanczos with
/// full reorthogonalization and deflation of converged states.
pub fn lowest_states(h: &PauliSum, k: usize, opts: &LanczosOptions) -> Result<SpectrumResult> {
    check_capacity(h.n())?;
    let dim = 1usize << h.n();
    if k == 0 || k > dim {
        return Err(Error::OutOfRange(format!("cannot extract {k} states from dimension {dim}")));
    }
    if let Some((_, p)) = h.terms().iter().find(|(_, p)| !p.is_hermitian()) {
        return Err(Error::NotHermitian(p.to_string()));
    }
    let mut out = SpectrumResult {
        energies: Vec::new(),
        states: Vec::new(),
        residuals: Vec::new(),
        matvecs: 0,
    };
    for level in 0..k {
        let mut start = StateVector::random(h.n(), opts.seed.wrapping_add(level as u64))?;
        let max_dim = opts
            .krylov_dim
            .min((KRYLOV_BUDGET / dim).max(8))
            .max(2)
            .min(dim - level);
        let mut last = f64::INFINITY;
        let mut converged = None;
        for _ in 0..=opts.max_restarts {
            let ritz = lanczos_cycle(h, start, &out.states, max_dim)?;
            out.matvecs += ritz.steps;
            last = ritz.residual;
            if ritz.residual <= opts.tol * ritz.value.abs().max(1.0) {
                converged = Some(ritz);
                break;
            }
            start = ritz.vector;
        }
        let Some(ritz) = converged else {
            return Err(Error::NoConvergence {
                iterations: opts.max_restarts,
                residual: last,
            });
        };
        out.energies.push(ritz.value);
        out.residuals.push(ritz.residual);
        out.states.push(ritz.vector);
    }
    // deflation order is already ascending up to round-off, but sort defensively
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| out.energies[a].total_cmp(&out.energies[b]));
    out.energies = order.iter().map(|&i| out.energies[i]).collect();
    out.residuals = order.iter().map(|&i| out.residuals[i]).collect();
    out.states = order.iter().map(|&i| out.states[i].clone()).collect();
    Ok(out)
}

pub fn ground_state(h: &PauliSum, opts: &LanczosOptions) -> Result<SpectrumResult> {
    lowest_states(h, 1, opts)
}

/// `E_1 - E_0`, reported as exactly zero below `1e-9`.
pub fn gap(h: &PauliSum, opts: &LanczosOptions) -> Result<f64> {
    let s = lowest_states(h, 2, opts)?;
    let g = s.energies[1] - s.energies[0];
    Ok(if g < 1e-9 { 0.0 } else { g })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::Pauli;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn single_qubit_actions() {
        let zero = StateVector::basis(1, 0).unwrap();
        let one = StateVector::basis(1, 1).unwrap();
        let y = PauliString::single(1, 0, Pauli::Y).unwrap();
        // Y|0> = i|1>
        assert_eq!(apply_pauli(&y, &zero).unwrap().amplitudes(), &[c(0.0, 0.0), c(0.0, 1.0)]);
        assert_eq!(apply_pauli(&y, &one).unwrap().amplitudes(), &[c(0.0, -1.0), c(0.0, 0.0)]);
        let z = PauliString::single(1, 0, Pauli::Z).unwrap();
        assert_eq!(apply_pauli(&z, &one).unwrap().amplitudes()[1], c(-1.0, 0.0));
    }

    #[test]
    fn two_level_spectrum() {
        // -X: eigenvalues -1, +1
        let h = PauliSum::parse(1, "-1 + X0\n").unwrap();
        let s = lowest_states(&h, 2, &LanczosOptions::default()).unwrap();
        assert!((s.energies[0] + 1.0).abs() < 1e-12);
        assert!((s.energies[1] - 1.0).abs() < 1e-12);
        assert!((gap(&h, &LanczosOptions::default()).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_gap_is_zero() {
        let h = PauliSum::parse(2, "-1 + Z0 Z1\n").unwrap();
        assert_eq!(gap(&h, &LanczosOptions::default()).unwrap(), 0.0);
    }

    #[test]
    fn rejects_oversized() {
        assert!(matches!(StateVector::zero(MAX_ED_QUBITS + 1), Err(Error::Capacity(_))));
    }

    #[test]
    fn random_is_seeded() {
        assert_eq!(StateVector::random(3, 7).unwrap(), StateVector::random(3, 7).unwrap());
        assert_ne!(StateVector::random(3, 7).unwrap(), StateVector::random(3, 8).unwrap());
    }
}
