//! Measurement patterns on the cluster-model ground state and their gate fidelities.
//!
//! A pattern leaves a set of open sites (gate inputs and outputs) unmeasured and
//! measures every other site. The target output is the Choi state of the gate: the
//! joint `+1` eigenstate of the open-site restrictions of a set of characterizing
//! stabilizers (products of `K_mu` whose factors on measured sites are diagonal in
//! the measured basis). Outcome-dependent sign flips are undone by Pauli byproduct
//! corrections on the gate outputs.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, LanczosOptions, StateVector};
use crate::gf2;
use crate::lattice::{Lattice, LatticeSpec};
use crate::model::{self, CSignLayout, ModelParams};
use crate::pauli::{PauliString, PauliSum};

/// Branches with probability below this are not followed.
pub const BRANCH_CUTOFF: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    X,
    Z,
    /// `cos(phi) X + sin(phi) Y`, with `phi` chosen adaptively from earlier outcomes.
    Angle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    Identity,
    ZRotation { theta: f64 },
    CSign,
}

impl std::fmt::Display for Gate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gate::Identity => write!(f, "identity"),
            Gate::ZRotation { theta } => write!(f, "zrot({theta})"),
            Gate::CSign => write!(f, "csign"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Rotation {
    theta: f64,
    /// Index into the measurement order.
    step: usize,
    /// Open-site Pauli generating the rotation, `exp(-i theta G)`.
    generator: PauliString,
    /// Steps whose outcomes flip the sign of `Z` on the angle site relative to `G`.
    transport: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementPattern {
    lattice: LatticeSpec,
    gate: Gate,
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    /// Open sites in ascending order; open-site Paulis are indexed by position here.
    open: Vec<usize>,
    order: Vec<(usize, Basis)>,
    generators: Vec<PauliString>,
    restrictions: Vec<PauliString>,
    byproducts: Vec<PauliString>,
    rotation: Option<Rotation>,
}

fn compress(mask: u64, open: &[usize]) -> u64 {
    open.iter()
        .enumerate()
        .fold(0, |acc, (k, &q)| acc | (mask >> q & 1) << k)
}

fn restrict_to_open(p: &PauliString, open: &[usize]) -> PauliString {
    PauliString::from_masks(
        open.len(),
        compress(p.x_mask(), open),
        compress(p.z_mask(), open),
        p.phase_exponent(),
    )
    .expect("compressed masks fit")
}

fn product_of_stabilizers(lat: &Lattice, c: u64) -> PauliString {
    (0..lat.n())
        .filter(|&q| c >> q & 1 == 1)
        .fold(PauliString::identity(lat.n()).unwrap(), |acc, q| {
            acc.mul_unchecked(&model::stabilizer(lat, q).unwrap())
        })
}

/// Measured sites on which `s` acts non-trivially, as steps of `order`.
fn measured_support(s: &PauliString, order: &[(usize, Basis)]) -> Vec<usize> {
    order
        .iter()
        .enumerate()
        .filter(|(_, (q, _))| (s.x_mask() | s.z_mask()) >> q & 1 == 1)
        .map(|(k, _)| k)
        .collect()
}

/// Constraint row forcing the factor of a product of stabilizers at `site` to be
/// diagonal in the measured basis.
fn constraint(lat: &Lattice, site: usize, basis: Basis) -> u64 {
    match basis {
        Basis::Z => 1 << site,
        Basis::X | Basis::Angle => lat.neighbor_mask(site),
    }
}

impl MeasurementPattern {
    /// Builds a pattern from its open sites and measurement order, deriving the
    /// characterizing stabilizers and byproducts.
    pub fn new(
        lat: &Lattice,
        gate: Gate,
        inputs: Vec<usize>,
        outputs: Vec<usize>,
        order: Vec<(usize, Basis)>,
    ) -> Result<Self> {
        let n = lat.n();
        let mut open: Vec<usize> = inputs.iter().chain(&outputs).copied().collect();
        open.sort_unstable();
        let mut seen = vec![false; n];
        for &q in open.iter().chain(order.iter().map(|(q, _)| q)) {
            lat.check_site(q)?;
            if std::mem::replace(&mut seen[q], true) {
                return Err(Error::Pattern(format!("site {} used twice", lat.label(q))));
            }
        }
        if let Some(q) = seen.iter().position(|s| !s) {
            return Err(Error::Pattern(format!("site {} is neither open nor measured", lat.label(q))));
        }
        let angles: Vec<usize> = (0..order.len()).filter(|&k| order[k].1 == Basis::Angle).collect();
        match (gate, angles.len()) {
            (Gate::ZRotation { .. }, 1) => {}
            (Gate::ZRotation { .. }, _) => {
                return Err(Error::Pattern("a z rotation needs exactly one angle measurement".into()))
            }
            (_, 0) => {}
            _ => return Err(Error::Pattern(format!("{gate} takes no angle measurement"))),
        }

        let rows: Vec<u64> = order.iter().map(|&(q, b)| constraint(lat, q, b)).collect();
        let mut generators = Vec::new();
        let mut restrictions = Vec::new();
        let mut keys = Vec::new();
        let w = open.len();
        for c in gf2::nullspace(&rows, n) {
            let s = product_of_stabilizers(lat, c);
            let r = restrict_to_open(&s, &open);
            if gf2::insert(&mut keys, r.x_mask() | r.z_mask() << w) {
                generators.push(s);
                restrictions.push(r);
            }
        }
        if restrictions.len() != w {
            return Err(Error::Pattern(format!(
                "measurements leave {} independent output stabilizers for {w} open sites",
                restrictions.len()
            )));
        }

        let corrections: Vec<usize> = outputs
            .iter()
            .map(|q| open.binary_search(q).unwrap())
            .collect();
        let supports: Vec<Vec<usize>> = generators.iter().map(|g| measured_support(g, &order)).collect();
        let byproducts = (0..order.len())
            .map(|k| {
                let target: Vec<bool> = supports.iter().map(|s| s.contains(&k)).collect();
                find_byproduct(w, &corrections, &restrictions, &target).ok_or_else(|| {
                    Error::Pattern(format!(
                        "no output Pauli corrects the outcome of site {}",
                        lat.label(order[k].0)
                    ))
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let rotation = match gate {
            Gate::ZRotation { theta } => Some(rotation_for(lat, &open, &outputs, &order, angles[0], theta, &byproducts)?),
            _ => None,
        };
        Ok(Self {
            lattice: lat.spec(),
            gate,
            inputs,
            outputs,
            open,
            order,
            generators,
            restrictions,
            byproducts,
            rotation,
        })
    }

    pub fn lattice(&self) -> LatticeSpec {
        self.lattice
    }

    pub fn gate(&self) -> Gate {
        self.gate
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Open sites in ascending order.
    pub fn open_sites(&self) -> &[usize] {
        &self.open
    }

    pub fn measurements(&self) -> &[(usize, Basis)] {
        &self.order
    }

    /// Characterizing stabilizers on the full lattice.
    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Their restrictions to the open sites: the stabilizers of the ideal output.
    pub fn output_stabilizers(&self) -> &[PauliString] {
        &self.restrictions
    }

    /// Output Pauli applied when the measurement at `step` gives outcome `-1`.
    pub fn byproduct(&self, step: usize) -> &PauliString {
        &self.byproducts[step]
    }

    /// Pauli `G` of the ideal rotation `exp(-i theta G)`, for z rotations.
    pub fn rotation_generator(&self) -> Option<&PauliString> {
        self.rotation.as_ref().map(|r| &r.generator)
    }

    /// Ideal output state on the open sites.
    pub fn ideal_output(&self) -> Result<StateVector> {
        let phi = stabilizer_state(&self.restrictions)?;
        match &self.rotation {
            None => Ok(phi),
            Some(rot) => {
                let g = exact::apply_pauli(&rot.generator, &phi)?;
                let (c, s) = (rot.theta.cos(), rot.theta.sin());
                let amps = phi
                    .amplitudes()
                    .iter()
                    .zip(g.amplitudes())
                    .map(|(a, b)| a * c - Complex64::new(0.0, s) * b)
                    .collect();
                StateVector::new(phi.n(), amps)
            }
        }
    }
}

fn find_byproduct(
    w: usize,
    corrections: &[usize],
    restrictions: &[PauliString],
    target: &[bool],
) -> Option<PauliString> {
    let k = corrections.len();
    (0..1u64 << (2 * k))
        .map(|code| {
            let (mut x, mut z) = (0u64, 0u64);
            for (i, &q) in corrections.iter().enumerate() {
                x |= (code >> (2 * i) & 1) << q;
                z |= (code >> (2 * i + 1) & 1) << q;
            }
            PauliString::from_masks(w, x, z, 0).unwrap()
        })
        .filter(|p| {
            restrictions
                .iter()
                .zip(target)
                .all(|(r, &t)| p.commutes_unchecked(r) != t)
        })
        .min_by_key(|p| p.weight())
}

fn open_mask(open: &[usize]) -> u64 {
    open.iter().fold(0, |acc, &q| acc | 1 << q)
}

fn rotation_for(
    lat: &Lattice,
    open: &[usize],
    outputs: &[usize],
    order: &[(usize, Basis)],
    step: usize,
    theta: f64,
    byproducts: &[PauliString],
) -> Result<Rotation> {
    let n = lat.n();
    let m = order[step].0;
    // find T in the stabilizer group with Z_m T diagonal in every measured basis and
    // trivial on m: solve the measured constraints with the row of m flipped
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for &(q, b) in order {
        if q == m {
            rows.push(1u64 << m);
            rhs.push(false);
            rows.push(lat.neighbor_mask(m));
            rhs.push(true);
        } else {
            rows.push(constraint(lat, q, b));
            rhs.push(false);
        }
    }
    let c0 = solve_affine(&rows, &rhs, n).ok_or_else(|| {
        Error::Pattern(format!("Z on site {} cannot be moved to the outputs", lat.label(m)))
    })?;
    // the solution is unique up to the homogeneous solutions; keep one supported on
    // the outputs only, with the fewest factors
    let homogeneous = gf2::nullspace(&rows, n);
    if homogeneous.len() > 16 {
        return Err(Error::Capacity("too many characterizing stabilizers to search".into()));
    }
    let z_m = PauliString::from_masks(n, 0, 1 << m, 0)?;
    let output_mask = outputs.iter().fold(0u64, |acc, &q| acc | 1 << q);
    let (moved, generator) = (0..1u32 << homogeneous.len())
        .map(|subset| {
            let c = homogeneous
                .iter()
                .enumerate()
                .filter(|(i, _)| subset >> i & 1 == 1)
                .fold(c0, |acc, (_, h)| acc ^ h);
            let moved = z_m.mul_unchecked(&product_of_stabilizers(lat, c));
            let generator = restrict_to_open(&moved, open);
            (moved, generator)
        })
        .filter(|(moved, _)| (moved.x_mask() | moved.z_mask()) & open_mask(open) & !output_mask == 0)
        .min_by_key(|(_, g)| g.weight())
        .ok_or_else(|| Error::Pattern(format!("Z on site {} cannot be moved to the outputs", lat.label(m))))?;
    if !generator.commutes_unchecked(&byproducts[step]) {
        return Err(Error::Pattern("rotation generator does not commute with its own byproduct".into()));
    }
    let transport = measured_support(&moved, order);
    Ok(Rotation {
        theta,
        step,
        generator,
        transport,
    })
}

/// Any `c` with `popcount(rows[i] & c) % 2 == rhs[i]`.
fn solve_affine(rows: &[u64], rhs: &[bool], ncols: usize) -> Option<u64> {
    debug_assert!(ncols < 64);
    let aug: Vec<u64> = rows
        .iter()
        .zip(rhs)
        .map(|(&r, &b)| r | (b as u64) << ncols)
        .collect();
    // solutions of the homogeneous augmented system with the last variable set
    gf2::nullspace(&aug, ncols + 1)
        .into_iter()
        .find(|v| v >> ncols & 1 == 1)
        .map(|v| v & !(1 << ncols))
}

/// Joint `+1` eigenstate of independent commuting Paulis on `w = stabilizers.len()` qubits.
pub fn stabilizer_state(stabilizers: &[PauliString]) -> Result<StateVector> {
    let w = stabilizers.first().map_or(0, PauliString::n);
    for (i, a) in stabilizers.iter().enumerate() {
        if !a.is_hermitian() {
            return Err(Error::NotHermitian(a.to_string()));
        }
        for b in &stabilizers[i + 1..] {
            if !a.commutes(b)? {
                return Err(Error::NonCommuting(format!("{a} and {b}")));
            }
        }
    }
    for seed in 0..1usize << w {
        let mut v = StateVector::basis(w, seed)?;
        for s in stabilizers {
            let sv = exact::apply_pauli(s, &v)?;
            let amps = v
                .amplitudes()
                .iter()
                .zip(sv.amplitudes())
                .map(|(a, b)| (a + b) * 0.5)
                .collect();
            v = StateVector::new(w, amps)?;
        }
        if v.normalize() > 1e-6 {
            return Ok(v);
        }
    }
    Err(Error::Pattern("stabilizers have no common +1 eigenstate".into()))
}

/// Identity wire: on a line the two end sites stay open and the interior is
/// measured in X; on a square lattice a staircase from `(1,1)` (right, down,
/// right, ...) is the wire and every other site is measured in Z.
pub fn pattern_identity(lat: &Lattice) -> Result<MeasurementPattern> {
    let (path, order) = wire(lat)?;
    MeasurementPattern::new(lat, Gate::Identity, vec![path[0]], vec![*path.last().unwrap()], order)
}

fn wire(lat: &Lattice) -> Result<(Vec<usize>, Vec<(usize, Basis)>)> {
    let path: Vec<usize> = if lat.is_line() {
        (0..lat.n()).collect()
    } else {
        let mut path = vec![lat.grid_site(1, 1)?];
        let (mut r, mut c) = (1, 1);
        loop {
            let (nr, nc) = if path.len() % 2 == 1 { (r, c + 1) } else { (r + 1, c) };
            match lat.site_at(nr, nc) {
                Some(q) => {
                    path.push(q);
                    (r, c) = (nr, nc);
                }
                None => break,
            }
        }
        path
    };
    if path.len() < 3 {
        return Err(Error::Pattern(format!("{} is too small for a wire", lat.spec())));
    }
    let interior = &path[1..path.len() - 1];
    let mut order: Vec<(usize, Basis)> = (0..lat.n())
        .filter(|q| !path.contains(q))
        .map(|q| (q, Basis::Z))
        .collect();
    order.extend(interior.iter().map(|&q| (q, Basis::X)));
    Ok((path, order))
}

/// Wire with one interior site measured at an adaptive angle, implementing
/// `exp(-i theta Z)` on the output. The angle site is the last wire site whose `Z`
/// transports to a single `Z` on the output; it is measured last.
pub fn pattern_zrot(lat: &Lattice, theta: f64) -> Result<MeasurementPattern> {
    if !theta.is_finite() {
        return Err(Error::Domain(format!("rotation angle must be finite, got {theta}")));
    }
    let (path, base) = wire(lat)?;
    let out = *path.last().unwrap();
    let interior = &path[1..path.len() - 1];
    for &m in interior.iter().rev() {
        let mut order: Vec<(usize, Basis)> = base.iter().copied().filter(|&(q, _)| q != m).collect();
        order.push((m, Basis::Angle));
        let Ok(p) = MeasurementPattern::new(lat, Gate::ZRotation { theta }, vec![path[0]], vec![out], order) else {
            continue;
        };
        let g = p.rotation_generator().unwrap();
        let pos = p.open.binary_search(&out).unwrap();
        if g.x_mask() == 0 && g.z_mask() == 1 << pos && g.phase_exponent() == 0 {
            return Ok(p);
        }
    }
    Err(Error::Pattern(format!("no wire site of {} rotates the output about +Z", lat.spec())))
}

/// CSIGN between two crossing wires placed by `layout`; the four numbered sites
/// are measured in X and all remaining sites in Z.
pub fn pattern_csign(lat: &Lattice, layout: &CSignLayout) -> Result<MeasurementPattern> {
    let s = layout.resolve(lat)?;
    let open = [s.a_in, s.b_in, s.a_out, s.b_out];
    let mut order: Vec<(usize, Basis)> = (0..lat.n())
        .filter(|q| !open.contains(q) && !s.measured.contains(q))
        .map(|q| (q, Basis::Z))
        .collect();
    order.extend(s.measured.iter().map(|&q| (q, Basis::X)));
    MeasurementPattern::new(lat, Gate::CSign, vec![s.a_in, s.b_in], vec![s.a_out, s.b_out], order)
}

/// One followed measurement branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchRecord {
    /// Outcome bits in measurement order, `1` for eigenvalue `-1`.
    pub outcomes: String,
    pub probability: f64,
    /// Fidelity of the corrected, normalized branch state.
    pub fidelity: f64,
}

/// Result of enumerating every measurement branch of a pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    /// `sum_s p_s |<ideal| B_s |out_s>|^2`.
    pub fidelity: f64,
    pub branches: usize,
    pub skipped_branches: usize,
    /// Probability mass of the followed branches.
    pub total_probability: f64,
    pub records: Vec<BranchRecord>,
}

/// Projects the qubit at position `pos` of a state onto `<e|`, dropping it.
fn contract(v: &[Complex64], pos: usize, e: [Complex64; 2]) -> Vec<Complex64> {
    let low = (1usize << pos) - 1;
    let (e0, e1) = (e[0].conj(), e[1].conj());
    (0..v.len() / 2)
        .map(|b| {
            let b0 = (b & low) | (b & !low) << 1;
            e0 * v[b0] + e1 * v[b0 | 1 << pos]
        })
        .collect()
}

fn eigenvector(basis: Basis, outcome: u8, phi: f64) -> [Complex64; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let sign = if outcome == 0 { 1.0 } else { -1.0 };
    match basis {
        Basis::Z if outcome == 0 => [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        Basis::Z => [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
        Basis::X => [Complex64::new(h, 0.0), Complex64::new(sign * h, 0.0)],
        Basis::Angle => [Complex64::new(h, 0.0), Complex64::from_polar(sign * h, phi)],
    }
}

struct Walker<'a> {
    pattern: &'a MeasurementPattern,
    ideal: StateVector,
    outcomes: Vec<u8>,
    result: Simulation,
}

impl Walker<'_> {
    fn parity(&self, steps: impl IntoIterator<Item = usize>) -> f64 {
        let odd = steps.into_iter().map(|k| self.outcomes[k] as usize).sum::<usize>() % 2 == 1;
        if odd {
            -1.0
        } else {
            1.0
        }
    }

    fn angle(&self, rot: &Rotation) -> f64 {
        let sigma = self.parity(rot.transport.iter().copied());
        let mu = self.parity(
            (0..rot.step).filter(|&k| !self.pattern.byproducts[k].commutes_unchecked(&rot.generator)),
        );
        -2.0 * rot.theta * sigma * mu
    }

    fn walk(&mut self, state: Vec<Complex64>, alive: &[usize], step: usize) -> Result<()> {
        let p = self.pattern;
        if step == p.order.len() {
            return self.leaf(state);
        }
        let (site, basis) = p.order[step];
        let pos = alive.binary_search(&site).expect("measured site is alive");
        let rest: Vec<usize> = alive.iter().copied().filter(|&q| q != site).collect();
        let phi = match (&p.rotation, basis) {
            (Some(rot), Basis::Angle) => self.angle(rot),
            _ => 0.0,
        };
        for outcome in 0..2u8 {
            let next = contract(&state, pos, eigenvector(basis, outcome, phi));
            let prob: f64 = next.iter().map(|a| a.norm_sqr()).sum();
            if prob < BRANCH_CUTOFF {
                self.result.skipped_branches += 1;
                continue;
            }
            self.outcomes[step] = outcome;
            self.walk(next, &rest, step + 1)?;
        }
        Ok(())
    }

    fn leaf(&mut self, state: Vec<Complex64>) -> Result<()> {
        let p = self.pattern;
        let w = p.open.len();
        let mut correction = PauliString::identity(w)?;
        for (k, &s) in self.outcomes.iter().enumerate() {
            if s == 1 {
                correction = correction.mul_unchecked(&p.byproducts[k]);
            }
        }
        let out = StateVector::new(w, state)?;
        let prob = out.inner(&out).re;
        let fixed = exact::apply_pauli(&correction, &out)?;
        let overlap = self.ideal.inner(&fixed).norm_sqr();
        self.result.fidelity += overlap;
        self.result.total_probability += prob;
        self.result.records.push(BranchRecord {
            outcomes: self.outcomes.iter().map(|&b| char::from(b'0' + b)).collect(),
            probability: prob,
            fidelity: overlap / prob,
        });
        self.result.branches += 1;
        Ok(())
    }
}

/// Enumerates all outcome branches of `pattern` on `state`.
pub fn simulate(pattern: &MeasurementPattern, state: &StateVector) -> Result<Simulation> {
    let n = pattern.lattice.sites();
    if state.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: state.n(),
        });
    }
    let mut walker = Walker {
        pattern,
        ideal: pattern.ideal_output()?,
        outcomes: vec![0; pattern.order.len()],
        result: Simulation {
            fidelity: 0.0,
            branches: 0,
            skipped_branches: 0,
            total_probability: 0.0,
            records: Vec::new(),
        },
    };
    let mut v = state.clone();
    v.normalize();
    let alive: Vec<usize> = (0..n).collect();
    walker.walk(v.into_amplitudes(), &alive, 0)?;
    Ok(walker.result)
}

/// `(1 + <s1> + <s2> + <s1 s2>) / 4`.
pub fn fidelity_from_correlators(state: &StateVector, s1: &PauliString, s2: &PauliString) -> Result<f64> {
    fidelity_from_group(state, &[*s1, *s2])
}

/// `2^-k sum_{g in <generators>} <g>` for `k` commuting Hermitian generators.
pub fn fidelity_from_group(state: &StateVector, generators: &[PauliString]) -> Result<f64> {
    for (i, a) in generators.iter().enumerate() {
        if !a.is_hermitian() {
            return Err(Error::NotHermitian(a.to_string()));
        }
        for b in &generators[i + 1..] {
            if !a.commutes(b)? {
                return Err(Error::NonCommuting(format!("{a} and {b}")));
            }
        }
    }
    let k = generators.len();
    let mut total = 0.0;
    for subset in 0..1usize << k {
        let mut g = PauliString::identity(state.n())?;
        for (i, s) in generators.iter().enumerate() {
            if subset >> i & 1 == 1 {
                g = g.mul(s)?;
            }
        }
        total += exact::expectation_pauli(&g, state)?.re;
    }
    Ok(total / (1usize << k) as f64)
}

/// Fidelity of one gate on the ground state of `H(B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateFidelityReport {
    pub lattice: LatticeSpec,
    pub gate: Gate,
    pub b: f64,
    pub ground_energy: f64,
    /// Branch-enumeration fidelity.
    pub fidelity: f64,
    /// Stabilizer-correlator fidelity; absent for non-Pauli patterns.
    pub correlator_fidelity: Option<f64>,
    /// Characterizing stabilizers and their ground-state expectations.
    pub stabilizers: Vec<(String, f64)>,
    pub branch_count: usize,
    pub skipped_branches: usize,
    pub total_probability: f64,
    pub branches: Vec<BranchRecord>,
}

/// Ground state of `H(B)` on `lat` by exact diagonalization.
pub fn resource_state(lat: &Lattice, b: f64, opts: &LanczosOptions) -> Result<(f64, StateVector)> {
    let h: PauliSum = model::tfcm(lat, ModelParams::new(b)?);
    let mut s = exact::ground_state(&h, opts)?;
    Ok((s.energies[0], s.states.remove(0)))
}

pub fn gate_fidelity(pattern: &MeasurementPattern, b: f64, opts: &LanczosOptions) -> Result<GateFidelityReport> {
    let lat = pattern.lattice.build()?;
    let (energy, state) = resource_state(&lat, b, opts)?;
    let sim = simulate(pattern, &state)?;
    let correlator_fidelity = match pattern.rotation {
        None => Some(fidelity_from_group(&state, &pattern.generators)?),
        Some(_) => None,
    };
    Ok(GateFidelityReport {
        lattice: pattern.lattice,
        gate: pattern.gate,
        b,
        ground_energy: energy,
        fidelity: sim.fidelity,
        correlator_fidelity,
        stabilizers: pattern
            .generators
            .iter()
            .map(|g| Ok((g.to_string(), exact::expectation_pauli(g, &state)?.re)))
            .collect::<Result<_>>()?,
        branch_count: sim.branches,
        skipped_branches: sim.skipped_branches,
        total_probability: sim.total_probability,
        branches: sim.records,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cluster(lat: &Lattice) -> StateVector {
        resource_state(lat, 0.0, &LanczosOptions::default()).unwrap().1
    }

    #[test]
    fn line_wire_generators() {
        let lat = Lattice::line(6).unwrap();
        let p = pattern_identity(&lat).unwrap();
        assert_eq!(p.open_sites(), &[0, 5]);
        let mut got: Vec<String> = p.output_stabilizers().iter().map(|s| s.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["+ X0 Z1", "+ Z0 X1"]);
    }

    #[test]
    fn line_wire_is_perfect_at_zero_field() {
        let lat = Lattice::line(6).unwrap();
        let p = pattern_identity(&lat).unwrap();
        let sim = simulate(&p, &cluster(&lat)).unwrap();
        assert!((sim.fidelity - 1.0).abs() < 1e-10);
        assert!((sim.total_probability - 1.0).abs() < 1e-10);
        assert_eq!(sim.branches, 16);
    }

    #[test]
    fn staircase_wire() {
        let lat = Lattice::square(3, 3).unwrap();
        let p = pattern_identity(&lat).unwrap();
        assert_eq!(p.open_sites(), &[0, 8]);
        let sim = simulate(&p, &cluster(&lat)).unwrap();
        assert!((sim.fidelity - 1.0).abs() < 1e-10);
    }

    #[test]
    fn zrot_generator_is_output_z() {
        let lat = Lattice::line(6).unwrap();
        let p = pattern_zrot(&lat, 0.3).unwrap();
        assert_eq!(p.rotation_generator().unwrap().to_string(), "+ Z1");
        let sim = simulate(&p, &cluster(&lat)).unwrap();
        assert!((sim.fidelity - 1.0).abs() < 1e-10, "{}", sim.fidelity);
    }

    #[test]
    fn rejects_bad_patterns() {
        let lat = Lattice::line(4).unwrap();
        let twice = vec![(1, Basis::X), (1, Basis::X), (2, Basis::X)];
        assert!(MeasurementPattern::new(&lat, Gate::Identity, vec![0], vec![3], twice).is_err());
        let missing = vec![(1, Basis::X)];
        assert!(MeasurementPattern::new(&lat, Gate::Identity, vec![0], vec![3], missing).is_err());
        let angle = vec![(1, Basis::Angle), (2, Basis::X)];
        assert!(MeasurementPattern::new(&lat, Gate::Identity, vec![0], vec![3], angle).is_err());
    }

    #[test]
    fn correlator_formula_rejects_anticommuting() {
        let v = StateVector::basis(1, 0).unwrap();
        let x = PauliString::parse(1, "+ X0").unwrap();
        let z = PauliString::parse(1, "+ Z0").unwrap();
        assert!(matches!(fidelity_from_correlators(&v, &x, &z), Err(Error::NonCommuting(_))));
        assert!((fidelity_from_correlators(&v, &z, &z.negated().negated()).unwrap() - 1.0).abs() < 1e-15);
    }
}
