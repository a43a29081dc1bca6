//! Symbolic algebra of n-qubit Pauli strings and canonical maps between them.
//!
//! A [`PauliString`] stores an X bitmask, a Z bitmask and a quarter-turn phase
//! exponent `r`. Site `i` lives in bit `i` of both masks. The operator is
//!
//! ```text
//! i^r * prod_i sigma(x_i, z_i),   sigma(0,0)=I, sigma(1,0)=X, sigma(0,1)=Z, sigma(1,1)=Y = i X Z
//! ```
//!
//! so the `i` of each Y is absorbed into the site operator and a string is
//! Hermitian exactly when `r` is even. Products reduce to XORs of the masks plus
//! popcount bookkeeping for the phase.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

/// Single-site Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

fn mask_for(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::QubitCount(n))
    } else {
        Ok(())
    }
}

/// An n-qubit Pauli operator `i^r * sigma(x_0,z_0) ... sigma(x_{n-1},z_{n-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    r: u8,
}

impl PauliString {
    /// The identity on `n` qubits.
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self { n, x: 0, z: 0, r: 0 })
    }

    pub fn from_masks(n: usize, x: u64, z: u64, phase_exponent: u8) -> Result<Self> {
        check_n(n)?;
        let m = mask_for(n);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::OutOfRange(format!(
                "mask bits beyond qubit {} are set",
                n - 1
            )));
        }
        Ok(Self {
            n,
            x,
            z,
            r: phase_exponent % 4,
        })
    }

    /// A single-site operator `p` at `site`.
    pub fn single(n: usize, site: usize, p: Pauli) -> Result<Self> {
        check_n(n)?;
        if site >= n {
            return Err(Error::OutOfRange(format!("site {site} on {n} qubits")));
        }
        let (x, z) = p.bits();
        Ok(Self {
            n,
            x: (x as u64) << site,
            z: (z as u64) << site,
            r: 0,
        })
    }

    /// Builds a +1-phase string from `(site, pauli)` factors. Repeated sites are multiplied.
    pub fn from_factors(n: usize, factors: &[(usize, Pauli)]) -> Result<Self> {
        let mut acc = Self::identity(n)?;
        for &(site, p) in factors {
            acc = acc.mul(&Self::single(n, site, p)?)?;
        }
        Ok(acc)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase_exponent(&self) -> u8 {
        self.r
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0 && self.r == 0
    }

    /// True when the masks are empty, whatever the phase.
    pub fn is_scalar(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn is_hermitian(&self) -> bool {
        self.r.is_multiple_of(2)
    }

    /// `Some(+1.0)` / `Some(-1.0)` for Hermitian strings, `None` for `±i`.
    pub fn sign(&self) -> Option<f64> {
        match self.r {
            0 => Some(1.0),
            2 => Some(-1.0),
            _ => None,
        }
    }

    /// Same masks with phase `+1`.
    pub fn unsigned(&self) -> Self {
        Self { r: 0, ..*self }
    }

    pub fn negated(&self) -> Self {
        Self {
            r: (self.r + 2) % 4,
            ..*self
        }
    }

    pub fn with_phase(&self, phase_exponent: u8) -> Self {
        Self {
            r: phase_exponent % 4,
            ..*self
        }
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn support(&self) -> Vec<usize> {
        let s = self.x | self.z;
        (0..self.n).filter(|&i| s >> i & 1 == 1).collect()
    }

    pub fn at(&self, site: usize) -> Pauli {
        Pauli::from_bits(self.x >> site & 1 == 1, self.z >> site & 1 == 1)
    }

    /// Keeps only the sites in `keep` (a bitmask); the phase is untouched.
    pub fn restrict(&self, keep: u64) -> Self {
        Self {
            x: self.x & keep,
            z: self.z & keep,
            ..*self
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::SizeMismatch {
                expected: self.n,
                actual: other.n,
            })
        } else {
            Ok(())
        }
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let r = self.r as u32
            + other.r as u32
            + (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 4 * 64
            - (x & z).count_ones();
        Self {
            n: self.n,
            x,
            z,
            r: (r % 4) as u8,
        }
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Parses the textual form produced by `Display`, e.g. `"+ X0 Z1 Z3"`, `"-i Y2"`, `"+ I"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let head = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty Pauli string".into()))?;
        let r = match head {
            "+" => 0,
            "+i" => 1,
            "-" => 2,
            "-i" => 3,
            other => return Err(Error::Parse(format!("bad phase token {other:?}"))),
        };
        let mut out = Self::identity(n)?;
        for tok in tokens {
            if tok == "I" {
                continue;
            }
            let mut chars = tok.chars();
            let p = match chars.next() {
                Some('X') => Pauli::X,
                Some('Y') => Pauli::Y,
                Some('Z') => Pauli::Z,
                _ => return Err(Error::Parse(format!("bad factor {tok:?}"))),
            };
            let site: usize = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Parse(format!("bad site index in {tok:?}")))?;
            if site >= n {
                return Err(Error::Parse(format!("site {site} out of range for n={n}")));
            }
            if (out.x | out.z) >> site & 1 == 1 {
                return Err(Error::Parse(format!("site {site} repeated")));
            }
            let (bx, bz) = p.bits();
            out.x |= (bx as u64) << site;
            out.z |= (bz as u64) << site;
        }
        out.r = r;
        Ok(out)
    }

    fn sort_key(&self) -> (u64, u64) {
        (self.x | self.z, self.x)
    }
}

impl std::ops::Mul for PauliString {
    type Output = PauliString;

    /// Panics on mismatched qubit counts; use [`PauliString::mul`] for a checked product.
    fn mul(self, rhs: Self) -> Self {
        PauliString::mul(&self, &rhs).expect("qubit count mismatch in Pauli product")
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = ["+", "+i", "-", "-i"][self.r as usize];
        write!(f, "{head}")?;
        if self.is_scalar() {
            return write!(f, " I");
        }
        for i in 0..self.n {
            let p = self.at(i);
            if p != Pauli::I {
                write!(f, " {}{}", p.letter(), i)?;
            }
        }
        Ok(())
    }
}

/// A real-weighted sum of Hermitian Pauli strings, kept in canonical form:
/// phases folded into the coefficients, identical masks merged, zeros dropped,
/// terms sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Self {
            n,
            terms: Vec::new(),
        })
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, PauliString)>,
    {
        let mut sum = Self::zero(n)?;
        let mut raw = Vec::new();
        for (c, p) in terms {
            sum.check_term(&p)?;
            let s = p.sign().unwrap();
            raw.push((c * s, p.unsigned()));
        }
        sum.terms = raw;
        sum.normalize();
        Ok(sum)
    }

    fn check_term(&self, p: &PauliString) -> Result<()> {
        if p.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: p.n,
            });
        }
        if !p.is_hermitian() {
            return Err(Error::NotHermitian(p.to_string()));
        }
        Ok(())
    }

    fn normalize(&mut self) {
        self.terms
            .sort_by_key(|a| a.1.sort_key());
        let mut merged: Vec<(f64, PauliString)> = Vec::with_capacity(self.terms.len());
        for (c, p) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((acc, q)) if q.x == p.x && q.z == p.z => *acc += c,
                _ => merged.push((c, p)),
            }
        }
        merged.retain(|(c, _)| *c != 0.0);
        self.terms = merged;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coefficient: f64, p: PauliString) -> Result<()> {
        self.check_term(&p)?;
        let s = p.sign().unwrap();
        self.terms.push((coefficient * s, p.unsigned()));
        self.normalize();
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.0 *= factor;
        }
        out.normalize();
        out
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let mut out = self.clone();
        out.terms.extend_from_slice(&other.terms);
        out.normalize();
        Ok(out)
    }

    /// Coefficient of the term with the masks of `p` (its phase folded in), or 0.
    pub fn coefficient(&self, p: &PauliString) -> f64 {
        let key = p.sort_key();
        match self
            .terms
            .binary_search_by(|t| t.1.sort_key().cmp(&key))
        {
            Ok(i) => self.terms[i].0 * p.sign().unwrap_or(0.0),
            Err(_) => 0.0,
        }
    }

    /// Term-by-term comparison with an absolute tolerance on coefficients.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        if self.n != other.n || self.terms.len() != other.terms.len() {
            return false;
        }
        self.terms
            .iter()
            .zip(&other.terms)
            .all(|(a, b)| a.1 == b.1 && (a.0 - b.0).abs() <= tol)
    }

    /// Terms present in one sum but not the other, or present with different
    /// coefficients. Empty means the sums are identical.
    pub fn difference(&self, other: &Self) -> Vec<(f64, f64, PauliString)> {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.1.sort_key().cmp(&b.1.sort_key()),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push((self.terms[i].0, 0.0, self.terms[i].1));
                    i += 1;
                }
                Ordering::Greater => {
                    out.push((0.0, other.terms[j].0, other.terms[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    if self.terms[i].0 != other.terms[j].0 {
                        out.push((self.terms[i].0, other.terms[j].0, self.terms[i].1));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// True if every term of `self` commutes with every term of `other`.
    pub fn termwise_commutes(&self, other: &Self) -> bool {
        self.terms.iter().all(|(_, a)| {
            other
                .terms
                .iter()
                .all(|(_, b)| a.n == b.n && a.commutes_unchecked(b))
        })
    }

    /// One term per line: `<coefficient> <pauli string>`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (c, p) in &self.terms {
            s.push_str(&format!("{c} {p}\n"));
        }
        s
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let mut terms = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (c, rest) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| Error::Parse(format!("bad term line {line:?}")))?;
            let c: f64 = c
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))?;
            terms.push((c, PauliString::parse(n, rest)?));
        }
        Self::from_terms(n, terms)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// A generator of the n-qubit Pauli group, used to label canonicality failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    X(usize),
    Z(usize),
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::X(j) => write!(f, "X{j}"),
            Generator::Z(j) => write!(f, "Z{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Images that should commute but anticommute, or vice versa.
    Pair(Generator, Generator),
    /// Image with an imaginary phase (does not square to the identity).
    NotHermitian(Generator),
    /// Image on the wrong number of qubits.
    Size(Generator),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CanonicalReport {
    pub violations: Vec<Violation>,
}

impl CanonicalReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Generator pairs whose images violate the commutation relations.
    pub fn pairs(&self) -> Vec<(Generator, Generator)> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::Pair(a, b) => Some((*a, *b)),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for CanonicalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "canonical");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::Pair(a, b) => format!("({a},{b})"),
                Violation::NotHermitian(g) => format!("{g} not Hermitian"),
                Violation::Size(g) => format!("{g} wrong size"),
            })
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A Clifford map given by the images of every single-site X and Z generator.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordMap {
    n: usize,
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
    canonical: bool,
}

impl CliffordMap {
    pub fn identity(n: usize) -> Result<Self> {
        check_n(n)?;
        let x_images = (0..n)
            .map(|j| PauliString::single(n, j, Pauli::X))
            .collect::<Result<_>>()?;
        let z_images = (0..n)
            .map(|j| PauliString::single(n, j, Pauli::Z))
            .collect::<Result<_>>()?;
        Ok(Self {
            n,
            x_images,
            z_images,
            canonical: true,
        })
    }

    /// Builds a map and rejects it unless it is canonical.
    pub fn from_images(x_images: Vec<PauliString>, z_images: Vec<PauliString>) -> Result<Self> {
        let map = Self::from_images_unchecked(x_images, z_images)?;
        if !map.canonical {
            return Err(Error::NotCanonical(map.check_canonical().to_string()));
        }
        Ok(map)
    }

    /// Builds a map without rejecting non-canonical images. `conjugate` on such a
    /// map returns an error; `check_canonical` reports what is wrong.
    pub fn from_images_unchecked(
        x_images: Vec<PauliString>,
        z_images: Vec<PauliString>,
    ) -> Result<Self> {
        let n = x_images.len();
        check_n(n)?;
        if z_images.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                actual: z_images.len(),
            });
        }
        let mut map = Self {
            n,
            x_images,
            z_images,
            canonical: false,
        };
        map.canonical = map.check_canonical().passed();
        Ok(map)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_images(&self) -> &[PauliString] {
        &self.x_images
    }

    pub fn z_images(&self) -> &[PauliString] {
        &self.z_images
    }

    pub fn image(&self, g: Generator) -> &PauliString {
        match g {
            Generator::X(j) => &self.x_images[j],
            Generator::Z(j) => &self.z_images[j],
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn check_canonical(&self) -> CanonicalReport {
        let mut report = CanonicalReport::default();
        let gens: Vec<Generator> = (0..self.n)
            .flat_map(|j| [Generator::X(j), Generator::Z(j)])
            .collect();
        let mut sized = vec![true; gens.len()];
        for (k, g) in gens.iter().enumerate() {
            let img = self.image(*g);
            if img.n != self.n {
                report.violations.push(Violation::Size(*g));
                sized[k] = false;
            } else if !img.is_hermitian() {
                report.violations.push(Violation::NotHermitian(*g));
            }
        }
        for a in 0..gens.len() {
            for b in a..gens.len() {
                if !sized[a] || !sized[b] {
                    continue;
                }
                let (ga, gb) = (gens[a], gens[b]);
                let should_anticommute = matches!(
                    (ga, gb),
                    (Generator::X(i), Generator::Z(j)) | (Generator::Z(i), Generator::X(j)) if i == j
                );
                let anticommutes = !self.image(ga).commutes_unchecked(self.image(gb));
                if anticommutes != should_anticommute {
                    report.violations.push(Violation::Pair(ga, gb));
                }
            }
        }
        report
    }

    fn require_canonical(&self) -> Result<()> {
        if self.canonical {
            Ok(())
        } else {
            Err(Error::NotCanonical(self.check_canonical().to_string()))
        }
    }

    /// Image of `p` under the map, by substituting generator images.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        self.require_canonical()?;
        if p.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: p.n,
            });
        }
        Ok(self.conjugate_unchecked(p))
    }

    fn conjugate_unchecked(&self, p: &PauliString) -> PauliString {
        let mut acc = PauliString {
            n: self.n,
            x: 0,
            z: 0,
            r: p.r,
        };
        for j in 0..self.n {
            let xj = p.x >> j & 1 == 1;
            let zj = p.z >> j & 1 == 1;
            if xj {
                acc = acc.mul_unchecked(&self.x_images[j]);
            }
            if zj {
                acc = acc.mul_unchecked(&self.z_images[j]);
            }
            if xj && zj {
                acc.r = (acc.r + 1) % 4;
            }
        }
        acc
    }

    /// Termwise image of a Hamiltonian.
    pub fn conjugate_sum(&self, h: &PauliSum) -> Result<PauliSum> {
        self.require_canonical()?;
        if h.n != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                actual: h.n,
            });
        }
        PauliSum::from_terms(
            self.n,
            h.terms.iter().map(|(c, p)| (*c, self.conjugate_unchecked(p))),
        )
    }

    /// `outer ∘ inner`: applies `inner` first.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.n != inner.n {
            return Err(Error::SizeMismatch {
                expected: outer.n,
                actual: inner.n,
            });
        }
        outer.require_canonical()?;
        inner.require_canonical()?;
        let x = inner
            .x_images
            .iter()
            .map(|p| outer.conjugate_unchecked(p))
            .collect();
        let z = inner
            .z_images
            .iter()
            .map(|p| outer.conjugate_unchecked(p))
            .collect();
        Self::from_images(x, z)
    }

    /// The inverse map. The preimage of `q` has an X factor at `j` iff `q`
    /// anticommutes with the image of `Z_j`, and a Z factor iff it anticommutes
    /// with the image of `X_j`; the sign is then fixed by mapping forward.
    pub fn inverse(&self) -> Result<Self> {
        self.require_canonical()?;
        let n = self.n;
        let preimage = |q: &PauliString| -> PauliString {
            let mut x = 0u64;
            let mut z = 0u64;
            for j in 0..n {
                if !q.commutes_unchecked(&self.z_images[j]) {
                    x |= 1 << j;
                }
                if !q.commutes_unchecked(&self.x_images[j]) {
                    z |= 1 << j;
                }
            }
            let cand = PauliString { n, x, z, r: 0 };
            let fwd = self.conjugate_unchecked(&cand);
            debug_assert_eq!((fwd.x, fwd.z), (q.x, q.z));
            cand.with_phase((q.r + 4 - fwd.r) % 4)
        };
        let x = (0..n)
            .map(|j| preimage(&PauliString::single(n, j, Pauli::X).unwrap()))
            .collect();
        let z = (0..n)
            .map(|j| preimage(&PauliString::single(n, j, Pauli::Z).unwrap()))
            .collect();
        Self::from_images(x, z)
    }

    /// Same generator images up to `±1` signs.
    pub fn equals_up_to_signs(&self, other: &Self) -> bool {
        self.n == other.n
            && self
                .x_images
                .iter()
                .chain(&self.z_images)
                .zip(other.x_images.iter().chain(&other.z_images))
                .all(|(a, b)| a.x == b.x && a.z == b.z)
    }

    /// One line per generator, `X3 -> + X3 Z4`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for j in 0..self.n {
            s.push_str(&format!("X{j} -> {}\n", self.x_images[j]));
            s.push_str(&format!("Z{j} -> {}\n", self.z_images[j]));
        }
        s
    }
}
