//! Free-fermion solution of the open transverse-field Ising chain
//! `H = -J sum_{j<M} Z_j Z_{j+1} - B sum_j X_j` (sites `1..=M`).
//!
//! With Majoranas `a^o_j = (prod_{k<j} X_k) Z_j` and `a^e_j = (prod_{k<j} X_k) Y_j`
//! the Hamiltonian reads `H = -i sum_{jl} T_{jl} a^o_j a^e_l` with `T_{jj} = B` and
//! `T_{j+1,j} = -J`. Writing `T = U S V^T`, the ground state has energy `-tr S` and
//! `<a^o_j a^e_l> = -i (U V^T)_{jl}`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct FermionSolution {
    m: usize,
    b: f64,
    coupling: f64,
    energy: f64,
    singular_values: Vec<f64>,
    /// `U V^T`.
    w: DMatrix<f64>,
}

/// Solves the chain with unit coupling.
pub fn solve_tfim(m: usize, b: f64) -> Result<FermionSolution> {
    solve_tfim_with_coupling(m, 1.0, b)
}

pub fn solve_tfim_with_coupling(m: usize, coupling: f64, b: f64) -> Result<FermionSolution> {
    if m == 0 {
        return Err(Error::OutOfRange("chain needs at least one site".into()));
    }
    if !b.is_finite() || !coupling.is_finite() {
        return Err(Error::Domain("couplings must be finite".into()));
    }
    let mut t = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        t[(j, j)] = b;
        if j + 1 < m {
            t[(j + 1, j)] = -coupling;
        }
    }
    let svd = t.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let singular_values: Vec<f64> = svd.singular_values.iter().copied().collect();
    Ok(FermionSolution {
        m,
        b,
        coupling,
        energy: -singular_values.iter().sum::<f64>(),
        singular_values,
        w: u * v_t,
    })
}

impl FermionSolution {
    pub fn sites(&self) -> usize {
        self.m
    }

    pub fn field(&self) -> f64 {
        self.b
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn ground_energy(&self) -> f64 {
        self.energy
    }

    /// Single-particle energies `2 s_k`, ascending.
    pub fn mode_energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.singular_values.iter().map(|s| 2.0 * s).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    fn check(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.m {
            Err(Error::OutOfRange(format!("site {site} outside 1..={}", self.m)))
        } else {
            Ok(())
        }
    }

    /// `<a^o_j a^e_l>` for 1-based sites.
    pub fn majorana_correlation(&self, j: usize, l: usize) -> Result<Complex64> {
        self.check(j)?;
        self.check(l)?;
        Ok(Complex64::new(0.0, -self.w[(j - 1, l - 1)]))
    }

    /// `<X_j> = (U V^T)_{jj}`.
    pub fn x_expectation(&self, j: usize) -> Result<f64> {
        self.check(j)?;
        Ok(self.w[(j - 1, j - 1)])
    }

    /// `<Z_i Z_j> = det G` with `G_{pq} = -(U V^T)_{i+q+1, i+p}`, `p, q < j - i`.
    pub fn zz_correlator(&self, i: usize, j: usize) -> Result<f64> {
        self.check(i)?;
        self.check(j)?;
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let d = j - i;
        if d == 0 {
            return Ok(1.0);
        }
        // 0-based: row index of a^o is i + q, of a^e is i - 1 + p
        let g = DMatrix::from_fn(d, d, |p, q| -self.w[(i + q, i - 1 + p)]);
        Ok(g.determinant())
    }
}

/// Bulk limit `(1 - B^2)^{1/4}` of `<Z_i Z_{i+k}>` for `|B| < 1`.
pub fn pfeuty_asymptote(b: f64) -> Result<f64> {
    if !(b.abs() < 1.0) {
        return Err(Error::Domain(format!("no long-range order at |B| = {}", b.abs())));
    }
    Ok((1.0 - b * b).powf(0.25))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site() {
        let s = solve_tfim(1, 0.7).unwrap();
        assert!((s.ground_energy() + 0.7).abs() < 1e-14);
        assert!((s.x_expectation(1).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(s.zz_correlator(1, 1).unwrap(), 1.0);
    }

    #[test]
    fn two_sites_closed_form() {
        // -ZZ - B(X1 + X2): E0 = -sqrt(1 + 4B^2), <ZZ> = 1/sqrt(1 + 4B^2)
        let b = 0.6;
        let s = solve_tfim(2, b).unwrap();
        let r = (1.0 + 4.0 * b * b).sqrt();
        assert!((s.ground_energy() + r).abs() < 1e-12);
        assert!((s.zz_correlator(1, 2).unwrap() - 1.0 / r).abs() < 1e-12);
        assert!((s.zz_correlator(2, 1).unwrap() - 1.0 / r).abs() < 1e-12);
    }

    #[test]
    fn asymptote_domain() {
        assert!((pfeuty_asymptote(0.5).unwrap() - 0.75f64.powf(0.25)).abs() < 1e-15);
        assert!(pfeuty_asymptote(1.0).is_err());
        assert!(pfeuty_asymptote(f64::NAN).is_err());
    }

    #[test]
    fn out_of_range_sites() {
        let s = solve_tfim(4, 0.3).unwrap();
        assert!(s.zz_correlator(0, 2).is_err());
        assert!(s.zz_correlator(1, 5).is_err());
    }
}
