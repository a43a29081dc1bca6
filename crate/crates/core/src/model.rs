//! Hamiltonians, duality maps and order-parameter strings for the
//! transverse-field cluster model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2;
use crate::lattice::{Color, Lattice, SiteString};
use crate::pauli::{CliffordMap, Pauli, PauliString, PauliSum};

/// Transverse field strength `B`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub b: f64,
}

impl ModelParams {
    pub fn new(b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::Domain(format!("field B must be finite, got {b}")));
        }
        Ok(Self { b })
    }
}

fn z_string(n: usize, mask: u64) -> PauliString {
    PauliString::from_masks(n, 0, mask, 0).expect("mask within lattice")
}

fn x_on(n: usize, site: usize) -> PauliString {
    PauliString::single(n, site, Pauli::X).expect("site within lattice")
}

/// `K_mu = X_mu prod_{nu ~ mu} Z_nu`.
pub fn stabilizer(lat: &Lattice, site: usize) -> Result<PauliString> {
    lat.check_site(site)?;
    PauliString::from_masks(lat.n(), 1 << site, lat.neighbor_mask(site), 0)
}

fn stabilizer_unchecked(lat: &Lattice, site: usize) -> PauliString {
    stabilizer(lat, site).expect("site within lattice")
}

/// `H(B) = -sum_mu (K_mu + B X_mu)`.
pub fn tfcm(lat: &Lattice, p: ModelParams) -> PauliSum {
    let n = lat.n();
    let terms = (0..n).flat_map(|q| {
        [
            (-1.0, stabilizer_unchecked(lat, q)),
            (-p.b, x_on(n, q)),
        ]
    });
    PauliSum::from_terms(n, terms).expect("valid lattice Hamiltonian")
}

/// The commuting half `H_c = -sum_{mu in other(c)} K_mu - B sum_{mu in c} X_mu`.
pub fn sublattice_ham(lat: &Lattice, p: ModelParams, color: Color) -> PauliSum {
    let n = lat.n();
    let stabs = lat
        .sites_of(color.other())
        .into_iter()
        .map(|q| (-1.0, stabilizer_unchecked(lat, q)));
    let fields = lat.sites_of(color).into_iter().map(|q| (-p.b, x_on(n, q)));
    PauliSum::from_terms(n, stabs.chain(fields)).expect("valid lattice Hamiltonian")
}

fn require_even(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        Err(Error::Domain(format!("duality needs an even line length, got {n}")))
    } else {
        Ok(())
    }
}

/// Non-local duality on a line of even length `N` (labels `1..=N`):
///
/// * `X_j -> X'_j` for all `j`,
/// * `Z_{2j} -> (prod_{k=1}^{j} X'_{2k-1}) Z'_{2j}`,
/// * `Z_{2j-1} -> Z'_{2j-1} (prod_{k=j}^{N/2} X'_{2k})`.
pub fn duality_1d(n: usize) -> Result<CliffordMap> {
    require_even(n)?;
    let x_images = (0..n).map(|q| x_on(n, q)).collect();
    let z_images = (1..=n)
        .map(|label| {
            let q = label - 1;
            // odd labels strictly below an even label, or even labels at/above an odd one
            let xs = if label % 2 == 0 {
                (1..label).step_by(2).fold(0u64, |m, l| m | 1 << (l - 1))
            } else {
                (label + 1..=n).step_by(2).fold(0u64, |m, l| m | 1 << (l - 1))
            };
            PauliString::from_masks(n, xs, 1 << q, 0).unwrap()
        })
        .collect();
    CliffordMap::from_images(x_images, z_images)
}

/// Transverse-field Ising chain expected after applying [`duality_1d`] to
/// `sublattice_ham(line(N), B, color)`.
///
/// Red: `-Z'_2 - sum_{i=2}^{N/2} Z'_{2i-2} Z'_{2i} - B sum_{i=1}^{N/2} X'_{2i}`.
/// Blue: `-Z'_{N-1} - sum_{i=1}^{N/2-1} Z'_{2i-1} Z'_{2i+1} - B sum_{i=1}^{N/2} X'_{2i-1}`.
pub fn dual_tfim_expected(n: usize, p: ModelParams, color: Color) -> Result<PauliSum> {
    require_even(n)?;
    let bit = |label: usize| 1u64 << (label - 1);
    let half = n / 2;
    let mut terms = Vec::new();
    match color {
        Color::Red => {
            terms.push((-1.0, z_string(n, bit(2))));
            for i in 2..=half {
                terms.push((-1.0, z_string(n, bit(2 * i - 2) | bit(2 * i))));
            }
            for i in 1..=half {
                terms.push((-p.b, x_on(n, 2 * i - 1)));
            }
        }
        Color::Blue => {
            terms.push((-1.0, z_string(n, bit(n - 1))));
            for i in 1..half {
                terms.push((-1.0, z_string(n, bit(2 * i - 1) | bit(2 * i + 1))));
            }
            for i in 1..=half {
                terms.push((-p.b, x_on(n, 2 * i - 2)));
            }
        }
    }
    PauliSum::from_terms(n, terms)
}

/// Whether the open square lattice admits a boundary-adapted duality in which
/// every stabilizer maps to a pure Z' string. This holds exactly when the
/// red/blue adjacency matrix is square and invertible over GF(2).
pub fn boundary_adapted(lat: &Lattice) -> bool {
    adapted_relation(lat).is_some()
}

/// `rel[blue_index]` = bitmask over red indices, solving `B^T R = I` over GF(2).
fn adapted_relation(lat: &Lattice) -> Option<Vec<u64>> {
    let red = lat.sites_of(Color::Red);
    let blue = lat.sites_of(Color::Blue);
    if red.len() != blue.len() {
        return None;
    }
    // row per red site: bits over blue indices it touches
    let bt: Vec<u64> = red
        .iter()
        .map(|&mu| {
            blue.iter()
                .enumerate()
                .filter(|(_, &nu)| lat.neighbors(mu).contains(&nu))
                .fold(0u64, |m, (k, _)| m | 1 << k)
        })
        .collect();
    gf2::inverse(&bt, red.len())
}

/// Duality on an open square lattice.
///
/// `X_mu -> X'_mu` everywhere; a red `Z_mu` picks up `X'` on blue sites of its
/// upper cone and a blue `Z_nu` picks up `X'` on red sites of its lower cone, where
/// `nu` lies in the upper cone of `mu` when `row_nu - row_mu > |col_nu - col_mu|`.
/// Every stabilizer whose four neighbours are present then maps to the four-corner
/// plaquette `prod_{nu ~ mu} Z'_nu`.
///
/// When [`boundary_adapted`] holds the cones are replaced by the unique relation
/// that also turns every boundary stabilizer into a Z' string (the exact inverse of
/// the red/blue adjacency over GF(2)); the interior plaquette images are the same.
/// Otherwise the clipped cones are used and the boundary stabilizers keep some X'
/// factors; [`plaquette_decomposition`] lists them.
pub fn duality_2d(lat: &Lattice) -> Result<CliffordMap> {
    if !lat.is_square() {
        return Err(Error::InvalidLattice("duality_2d needs a square lattice".into()));
    }
    let n = lat.n();
    let red = lat.sites_of(Color::Red);
    let blue = lat.sites_of(Color::Blue);
    // related[red_idx] = mask over qubits of blue partners
    let mut red_partners = vec![0u64; red.len()];
    let mut blue_partners = vec![0u64; blue.len()];
    match adapted_relation(lat) {
        Some(rel) => {
            for (bi, row) in rel.iter().enumerate() {
                for (ri, &mu) in red.iter().enumerate() {
                    if row >> ri & 1 == 1 {
                        red_partners[ri] |= 1 << blue[bi];
                        blue_partners[bi] |= 1 << mu;
                    }
                }
            }
        }
        None => {
            for (ri, &mu) in red.iter().enumerate() {
                let (rm, cm) = lat.coords(mu);
                for (bi, &nu) in blue.iter().enumerate() {
                    let (rn, cn) = lat.coords(nu);
                    if rn - rm > (cn - cm).abs() {
                        red_partners[ri] |= 1 << nu;
                        blue_partners[bi] |= 1 << mu;
                    }
                }
            }
        }
    }
    let mut z_images = vec![PauliString::identity(n)?; n];
    for (ri, &mu) in red.iter().enumerate() {
        z_images[mu] = PauliString::from_masks(n, red_partners[ri], 1 << mu, 0)?;
    }
    for (bi, &nu) in blue.iter().enumerate() {
        z_images[nu] = PauliString::from_masks(n, blue_partners[bi], 1 << nu, 0)?;
    }
    let x_images = (0..n).map(|q| x_on(n, q)).collect();
    CliffordMap::from_images(x_images, z_images)
}

/// Image of `sublattice_ham(lat, B, color)` under [`duality_2d`], split into the
/// plaquette-model bulk and whatever boundary terms remain.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaquetteDecomposition {
    /// The full conjugated Hamiltonian.
    pub dual: PauliSum,
    /// `-sum_plaquettes Z'Z'Z'Z' - B sum_{mu in color} X'_mu` for stabilizers with four neighbours.
    pub bulk: PauliSum,
    /// `dual - bulk`: images of the boundary stabilizers.
    pub boundary: PauliSum,
    /// True if every term of `bulk` appears in `dual` with the same coefficient.
    pub bulk_matches: bool,
}

pub fn plaquette_decomposition(lat: &Lattice, p: ModelParams, color: Color) -> Result<PlaquetteDecomposition> {
    let map = duality_2d(lat)?;
    let n = lat.n();
    let dual = map.conjugate_sum(&sublattice_ham(lat, p, color))?;
    let mut bulk_terms = Vec::new();
    for mu in lat.sites_of(color.other()) {
        if lat.neighbors(mu).len() == 4 {
            bulk_terms.push((-1.0, z_string(n, lat.neighbor_mask(mu))));
        }
    }
    for mu in lat.sites_of(color) {
        bulk_terms.push((-p.b, x_on(n, mu)));
    }
    let bulk = PauliSum::from_terms(n, bulk_terms)?;
    let bulk_matches = bulk
        .terms()
        .iter()
        .all(|(c, s)| dual.coefficient(s) == *c);
    let boundary = dual.plus(&bulk.scaled(-1.0))?;
    Ok(PlaquetteDecomposition {
        dual,
        bulk,
        boundary,
        bulk_matches,
    })
}

/// Conjugation by CSIGN on every bond: `X_mu -> K_mu`, `Z_mu -> Z_mu`.
pub fn self_duality_map(lat: &Lattice) -> Result<CliffordMap> {
    let n = lat.n();
    let x_images = (0..n).map(|q| stabilizer_unchecked(lat, q)).collect();
    let z_images = (0..n)
        .map(|q| PauliString::single(n, q, Pauli::Z))
        .collect::<Result<_>>()?;
    CliffordMap::from_images(x_images, z_images)
}

/// Parity of the stabilizer sites in a 1-D order string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// Product of same-parity stabilizers on a line:
/// even: `prod_{k=i}^{j-1} K_{2k} = Z_{2i-1} (prod X_{2k}) Z_{2j-1}`,
/// odd: `prod_{k=i}^{j-1} K_{2k+1} = Z_{2i} (prod X_{2k+1}) Z_{2j}`.
/// End factors that fall off the line are simply absent.
pub fn order_string_1d(lat: &Lattice, i: usize, j: usize, parity: Parity) -> Result<PauliString> {
    if !lat.is_line() {
        return Err(Error::InvalidLattice("order_string_1d needs a line".into()));
    }
    if j <= i {
        return Err(Error::OutOfRange(format!("empty order string range i={i}, j={j}")));
    }
    let n = lat.n();
    let mut acc = PauliString::identity(n)?;
    for k in i..j {
        let label = match parity {
            Parity::Even => 2 * k,
            Parity::Odd => 2 * k + 1,
        };
        if label == 0 || label > n {
            return Err(Error::OutOfRange(format!(
                "stabilizer K_{label} outside line(1..={n})"
            )));
        }
        acc = acc.mul(&stabilizer_unchecked(lat, label - 1))?;
    }
    Ok(acc)
}

/// Longest order strings with both end factors on the line, i.e. the even and odd
/// strings running from the first to the last stabilizer of that parity.
pub fn full_order_strings(lat: &Lattice) -> Result<(PauliString, PauliString)> {
    let n = lat.n();
    let even = order_string_1d(lat, 1, n / 2 + 1, Parity::Even)?;
    let odd = order_string_1d(lat, 0, n.div_ceil(2), Parity::Odd)?;
    Ok((even, odd))
}

/// Product of `K_mu` along a monochromatic diagonal string.
pub fn order_string_2d(lat: &Lattice, s: &SiteString) -> Result<PauliString> {
    if s.sites.is_empty() {
        return Err(Error::OutOfRange("empty site string".into()));
    }
    let mut acc = PauliString::identity(lat.n())?;
    for (k, &q) in s.sites.iter().enumerate() {
        lat.check_site(q)?;
        if lat.color(q) != s.color {
            return Err(Error::Domain(format!(
                "site {} is {} in a {} string",
                lat.label(q),
                lat.color(q),
                s.color
            )));
        }
        if k > 0 {
            let (r0, c0) = lat.coords(s.sites[k - 1]);
            let (r1, c1) = lat.coords(q);
            let diagonal = if lat.is_line() {
                (c1 - c0).abs() == 2
            } else {
                (r1 - r0).abs() == 1 && (c1 - c0).abs() == 1
            };
            if !diagonal {
                return Err(Error::Domain(format!(
                    "sites {} and {} are not diagonal neighbours",
                    lat.label(s.sites[k - 1]),
                    lat.label(q)
                )));
            }
        }
        acc = acc.mul(&stabilizer_unchecked(lat, q))?;
    }
    Ok(acc)
}

/// Placement of the eight special sites of the CSIGN measurement pattern,
/// as `(row, col)` offsets from `anchor`.
///
/// The default reading is a 2 x 4 block with two crossing wires:
///
/// ```text
///   col:   0     1    2    3
///   row 0: a_in  4    2    b_out
///   row 1: b_in  3    1    a_out
/// ```
///
/// X measurements on 1-4 leave the Choi state of a CZ-class gate from
/// `(a_in, b_in)` to `(a_out, b_out)`; all other sites are measured in Z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CSignLayout {
    pub anchor: (i32, i32),
    pub a_in: (i32, i32),
    pub a_out: (i32, i32),
    pub b_in: (i32, i32),
    pub b_out: (i32, i32),
    /// Offsets of the X-measured sites 1, 2, 3, 4.
    pub measured: [(i32, i32); 4],
    /// Start offset and diagonal direction of the string appended to each of the
    /// four characterizing products, in the order they are returned.
    pub arrows: [((i32, i32), (i32, i32)); 4],
}

impl CSignLayout {
    pub fn minimal() -> Self {
        Self {
            anchor: (1, 1),
            a_in: (0, 0),
            a_out: (1, 3),
            b_in: (1, 0),
            b_out: (0, 3),
            measured: [(1, 2), (0, 2), (1, 1), (0, 1)],
            arrows: [
                ((1, 3), (1, 1)),
                ((0, 3), (-1, 1)),
                ((0, 1), (-1, -1)),
                ((1, 1), (1, -1)),
            ],
        }
    }

    pub fn with_anchor(mut self, row: i32, col: i32) -> Self {
        self.anchor = (row, col);
        self
    }

    fn place(&self, lat: &Lattice, off: (i32, i32)) -> Result<usize> {
        let (r, c) = (self.anchor.0 + off.0, self.anchor.1 + off.1);
        lat.site_at(r, c).ok_or_else(|| {
            Error::OutOfRange(format!("CSIGN layout site ({r},{c}) does not fit {}", lat.spec()))
        })
    }

    /// Qubit indices of the layout on `lat`.
    pub fn resolve(&self, lat: &Lattice) -> Result<CSignSites> {
        if !lat.is_square() {
            return Err(Error::InvalidLattice("CSIGN layout needs a square lattice".into()));
        }
        let sites = CSignSites {
            a_in: self.place(lat, self.a_in)?,
            a_out: self.place(lat, self.a_out)?,
            b_in: self.place(lat, self.b_in)?,
            b_out: self.place(lat, self.b_out)?,
            measured: [
                self.place(lat, self.measured[0])?,
                self.place(lat, self.measured[1])?,
                self.place(lat, self.measured[2])?,
                self.place(lat, self.measured[3])?,
            ],
        };
        let mut all = vec![sites.a_in, sites.a_out, sites.b_in, sites.b_out];
        all.extend(sites.measured);
        all.sort_unstable();
        all.dedup();
        if all.len() != 8 {
            return Err(Error::Pattern("CSIGN layout sites are not distinct".into()));
        }
        Ok(sites)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CSignSites {
    pub a_in: usize,
    pub a_out: usize,
    pub b_in: usize,
    pub b_out: usize,
    pub measured: [usize; 4],
}

/// `K_{a_in} K_3 K_{a_out}`, `K_{b_in} K_4 K_{b_out}`, `K_1 K_4`, `K_2 K_3`, each
/// multiplied by `extension` further stabilizers along its arrow.
pub fn csign_characterizing_stabilizers(
    lat: &Lattice,
    layout: &CSignLayout,
    extension: usize,
) -> Result<[PauliString; 4]> {
    let s = layout.resolve(lat)?;
    let [m1, m2, m3, m4] = s.measured;
    let groups = [
        vec![s.a_in, m3, s.a_out],
        vec![s.b_in, m4, s.b_out],
        vec![m1, m4],
        vec![m2, m3],
    ];
    let mut out = Vec::with_capacity(4);
    for (group, (start, dir)) in groups.iter().zip(layout.arrows) {
        let mut acc = PauliString::identity(lat.n())?;
        for &q in group {
            acc = acc.mul(&stabilizer_unchecked(lat, q))?;
        }
        if extension > 0 {
            let origin = layout.place(lat, start)?;
            let string = lat.diagonal_string(origin, extension, dir)?;
            for &q in &string.sites[1..] {
                acc = acc.mul(&stabilizer_unchecked(lat, q))?;
            }
        }
        out.push(acc);
    }
    Ok(out.try_into().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(n: usize, s: &str) -> PauliString {
        PauliString::parse(n, s).unwrap()
    }

    #[test]
    fn line_stabilizers() {
        let l = Lattice::line(4).unwrap();
        assert_eq!(stabilizer(&l, 0).unwrap(), ps(4, "+ X0 Z1"));
        assert_eq!(stabilizer(&l, 1).unwrap(), ps(4, "+ Z0 X1 Z2"));
        assert!(stabilizer(&l, 4).is_err());
        let s = Lattice::square(3, 3).unwrap();
        let k = stabilizer(&s, 4).unwrap();
        assert_eq!(k, ps(9, "+ Z1 Z3 X4 Z5 Z7"));
    }

    #[test]
    fn tfcm_line_four() {
        let l = Lattice::line(4).unwrap();
        let h0 = tfcm(&l, ModelParams::new(0.0).unwrap());
        let want = PauliSum::parse(
            4,
            "-1 + X0 Z1\n-1 + Z0 X1 Z2\n-1 + Z1 X2 Z3\n-1 + Z2 X3\n",
        )
        .unwrap();
        assert_eq!(h0, want);
        let h2 = tfcm(&l, ModelParams::new(2.0).unwrap());
        assert_eq!(h2.len(), 8);
        assert_eq!(h2.terms().iter().filter(|t| t.0 == -1.0).count(), 4);
        assert_eq!(h2.terms().iter().filter(|t| t.0 == -2.0).count(), 4);
        assert!(ModelParams::new(f64::NAN).is_err());
    }

    #[test]
    fn sublattices_partition_and_commute() {
        let p = ModelParams::new(0.5).unwrap();
        for lat in [
            Lattice::line(4).unwrap(),
            Lattice::line(8).unwrap(),
            Lattice::square(3, 3).unwrap(),
        ] {
            let hr = sublattice_ham(&lat, p, Color::Red);
            let hb = sublattice_ham(&lat, p, Color::Blue);
            assert_eq!(hr.plus(&hb).unwrap(), tfcm(&lat, p));
            assert!(hr.termwise_commutes(&hb));
        }
    }

    #[test]
    fn duality_1d_images() {
        let m = duality_1d(4).unwrap();
        // labels are 1-based, qubits 0-based
        assert_eq!(m.z_images()[1], ps(4, "+ X0 Z1"));
        assert_eq!(m.z_images()[0], ps(4, "+ Z0 X1 X3"));
        assert_eq!(m.z_images()[2], ps(4, "+ Z2 X3"));
        for n in [4, 6, 8, 10] {
            assert!(duality_1d(n).unwrap().check_canonical().passed());
        }
        assert!(duality_1d(7).is_err());
    }

    #[test]
    fn dual_tfim_four_sites() {
        let p = ModelParams::new(0.3).unwrap();
        let red = dual_tfim_expected(4, p, Color::Red).unwrap();
        let want = PauliSum::parse(4, "-1 + Z1\n-1 + Z1 Z3\n-0.3 + X1\n-0.3 + X3\n").unwrap();
        assert_eq!(red, want);
        let blue = dual_tfim_expected(4, p, Color::Blue).unwrap();
        let want = PauliSum::parse(4, "-1 + Z2\n-1 + Z0 Z2\n-0.3 + X0\n-0.3 + X2\n").unwrap();
        assert_eq!(blue, want);
        assert!(dual_tfim_expected(5, p, Color::Red).is_err());
    }

    #[test]
    fn self_duality_swaps_k_and_x() {
        let l = Lattice::line(6).unwrap();
        let m = self_duality_map(&l).unwrap();
        let k3 = stabilizer(&l, 2).unwrap();
        let x3 = PauliString::single(6, 2, Pauli::X).unwrap();
        assert_eq!(m.conjugate(&k3).unwrap(), x3);
        assert_eq!(m.conjugate(&x3).unwrap(), k3);
    }

    #[test]
    fn order_strings_1d() {
        let l = Lattice::line(8).unwrap();
        assert_eq!(order_string_1d(&l, 1, 2, Parity::Even).unwrap(), ps(8, "+ Z0 X1 Z2"));
        // K_2 K_4 = Z_1 X_2 X_4 Z_5 (labels)
        assert_eq!(
            order_string_1d(&l, 1, 3, Parity::Even).unwrap(),
            ps(8, "+ Z0 X1 X3 Z4")
        );
        // K_3 K_5 = Z_2 X_3 X_5 Z_6 (labels)
        assert_eq!(
            order_string_1d(&l, 1, 3, Parity::Odd).unwrap(),
            ps(8, "+ Z1 X2 X4 Z5")
        );
        assert!(order_string_1d(&l, 1, 6, Parity::Even).is_err());
        assert!(order_string_1d(&l, 3, 3, Parity::Even).is_err());
        let (even, odd) = full_order_strings(&l).unwrap();
        assert_eq!(even, ps(8, "+ Z0 X1 X3 X5 X7"));
        assert_eq!(odd, ps(8, "+ X0 X2 X4 X6 Z7"));
    }

    #[test]
    fn order_string_2d_checks_colour() {
        let s = Lattice::square(3, 3).unwrap();
        let bad = SiteString {
            sites: vec![0, 1],
            color: s.color(0),
        };
        assert!(order_string_2d(&s, &bad).is_err());
        let one = SiteString {
            sites: vec![4],
            color: s.color(4),
        };
        assert_eq!(order_string_2d(&s, &one).unwrap(), stabilizer(&s, 4).unwrap());
    }

    #[test]
    fn csign_layout_fits() {
        let s = Lattice::square(3, 4).unwrap();
        let four = csign_characterizing_stabilizers(&s, &CSignLayout::minimal(), 0).unwrap();
        for a in &four {
            for b in &four {
                assert!(a.commutes(b).unwrap());
            }
        }
        assert!(CSignLayout::minimal().resolve(&Lattice::square(3, 3).unwrap()).is_err());
    }

    #[test]
    fn duality_1d_gives_ising() {
        let p = ModelParams::new(0.7).unwrap();
        for n in [4, 6, 8, 12] {
            let lat = Lattice::line(n).unwrap();
            let m = duality_1d(n).unwrap();
            for c in [Color::Red, Color::Blue] {
                let got = m.conjugate_sum(&sublattice_ham(&lat, p, c)).unwrap();
                assert_eq!(got, dual_tfim_expected(n, p, c).unwrap(), "n={n} {c}");
            }
        }
    }

    #[test]
    fn duality_2d_plaquettes() {
        let p = ModelParams::new(1.3).unwrap();
        for (r, c) in [(3, 3), (3, 4), (4, 4), (4, 5)] {
            let lat = Lattice::square(r, c).unwrap();
            assert!(duality_2d(&lat).unwrap().is_canonical());
            for col in [Color::Red, Color::Blue] {
                let d = plaquette_decomposition(&lat, p, col).unwrap();
                assert!(d.bulk_matches, "{r}x{c} {col}");
                let zonly = d.boundary.terms().iter().all(|(_, s)| s.x_mask() == 0);
                assert_eq!(zonly, boundary_adapted(&lat), "{r}x{c} {col}");
            }
        }
    }
}
