//! Lines with fixed ends and open square lattices, two-coloured.
//!
//! Sites are addressed by their qubit index (`0..n`). Lines are labelled `1..=N`
//! with label `i` on qubit `i - 1`; square lattices are labelled `(row, col)`
//! from `(1, 1)` in row-major order. On a line the even labels are red; on a
//! square lattice `(r, c)` is red when `r + c` is even.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::MAX_QUBITS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn other(self) -> Self {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Color::Red => "red",
            Color::Blue => "blue",
        })
    }
}

/// Serializable lattice description, e.g. `{"kind":"line","n":8}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LatticeSpec {
    Line { n: usize },
    Square { rows: usize, cols: usize },
}

impl LatticeSpec {
    pub fn build(self) -> Result<Lattice> {
        match self {
            LatticeSpec::Line { n } => Lattice::line(n),
            LatticeSpec::Square { rows, cols } => Lattice::square(rows, cols),
        }
    }

    pub fn sites(self) -> usize {
        match self {
            LatticeSpec::Line { n } => n,
            LatticeSpec::Square { rows, cols } => rows * cols,
        }
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeSpec::Line { n } => write!(f, "line({n})"),
            LatticeSpec::Square { rows, cols } => write!(f, "square({rows},{cols})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    spec: LatticeSpec,
    coords: Vec<(i32, i32)>,
    adjacency: Vec<Vec<usize>>,
    colors: Vec<Color>,
}

/// Same-colour sites along a diagonal (stride 2 on a line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteString {
    pub sites: Vec<usize>,
    pub color: Color,
}

impl Lattice {
    pub fn line(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLattice(format!("line needs N >= 2, got {n}")));
        }
        if n > MAX_QUBITS {
            return Err(Error::Capacity(format!("line of {n} sites exceeds {MAX_QUBITS}")));
        }
        let coords = (1..=n as i32).map(|i| (1, i)).collect();
        let adjacency = (0..n)
            .map(|q| {
                let mut nb = Vec::new();
                if q > 0 {
                    nb.push(q - 1);
                }
                if q + 1 < n {
                    nb.push(q + 1);
                }
                nb
            })
            .collect();
        let colors = (1..=n)
            .map(|i| if i % 2 == 0 { Color::Red } else { Color::Blue })
            .collect();
        Ok(Self {
            spec: LatticeSpec::Line { n },
            coords,
            adjacency,
            colors,
        })
    }

    pub fn square(rows: usize, cols: usize) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(Error::InvalidLattice(format!(
                "square lattice needs rows, cols >= 2, got {rows}x{cols}"
            )));
        }
        if rows * cols > MAX_QUBITS {
            return Err(Error::Capacity(format!(
                "square lattice of {} sites exceeds {MAX_QUBITS}",
                rows * cols
            )));
        }
        let mut coords = Vec::with_capacity(rows * cols);
        let mut colors = Vec::with_capacity(rows * cols);
        for r in 1..=rows as i32 {
            for c in 1..=cols as i32 {
                coords.push((r, c));
                colors.push(if (r + c) % 2 == 0 { Color::Red } else { Color::Blue });
            }
        }
        let idx = |r: i32, c: i32| (r - 1) as usize * cols + (c - 1) as usize;
        let adjacency = coords
            .iter()
            .map(|&(r, c)| {
                [(r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)]
                    .into_iter()
                    .filter(|&(rr, cc)| rr >= 1 && cc >= 1 && rr <= rows as i32 && cc <= cols as i32)
                    .map(|(rr, cc)| idx(rr, cc))
                    .collect()
            })
            .collect();
        Ok(Self {
            spec: LatticeSpec::Square { rows, cols },
            coords,
            adjacency,
            colors,
        })
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn is_line(&self) -> bool {
        matches!(self.spec, LatticeSpec::Line { .. })
    }

    pub fn is_square(&self) -> bool {
        matches!(self.spec, LatticeSpec::Square { .. })
    }

    /// Qubit index of line label `i` (1-based).
    pub fn line_site(&self, i: usize) -> Result<usize> {
        match self.spec {
            LatticeSpec::Line { n } if (1..=n).contains(&i) => Ok(i - 1),
            LatticeSpec::Line { n } => Err(Error::OutOfRange(format!("site {i} not in line(1..={n})"))),
            _ => Err(Error::InvalidLattice("line_site on a square lattice".into())),
        }
    }

    /// Qubit index of `(row, col)` (1-based).
    pub fn grid_site(&self, row: i32, col: i32) -> Result<usize> {
        self.site_at(row, col)
            .ok_or_else(|| Error::OutOfRange(format!("({row},{col}) outside {}", self.spec)))
    }

    /// Site at lattice coordinates; lines use row 1.
    pub fn site_at(&self, row: i32, col: i32) -> Option<usize> {
        let (rows, cols) = match self.spec {
            LatticeSpec::Line { n } => (1, n),
            LatticeSpec::Square { rows, cols } => (rows, cols),
        };
        if row < 1 || col < 1 || row > rows as i32 || col > cols as i32 {
            return None;
        }
        Some((row - 1) as usize * cols + (col - 1) as usize)
    }

    pub fn coords(&self, site: usize) -> (i32, i32) {
        self.coords[site]
    }

    pub fn label(&self, site: usize) -> String {
        let (r, c) = self.coords[site];
        match self.spec {
            LatticeSpec::Line { .. } => format!("{c}"),
            LatticeSpec::Square { .. } => format!("({r},{c})"),
        }
    }

    pub fn neighbors(&self, site: usize) -> &[usize] {
        &self.adjacency[site]
    }

    pub fn neighbor_mask(&self, site: usize) -> u64 {
        self.adjacency[site].iter().fold(0, |m, &q| m | 1 << q)
    }

    pub fn color(&self, site: usize) -> Color {
        self.colors[site]
    }

    pub fn sites_of(&self, color: Color) -> Vec<usize> {
        (0..self.n()).filter(|&q| self.colors[q] == color).collect()
    }

    pub fn color_mask(&self, color: Color) -> u64 {
        self.sites_of(color).into_iter().fold(0, |m, q| m | 1 << q)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for (a, nb) in self.adjacency.iter().enumerate() {
            for &b in nb {
                if a < b {
                    e.push((a, b));
                }
            }
        }
        e
    }

    pub fn check_site(&self, site: usize) -> Result<()> {
        if site < self.n() {
            Ok(())
        } else {
            Err(Error::OutOfRange(format!("site index {site} on {}", self.spec)))
        }
    }

    /// Recomputes a two-colouring by BFS and compares it with the stored one.
    pub fn verify_bipartite(&self) -> bool {
        let n = self.n();
        let mut seen: Vec<Option<Color>> = vec![None; n];
        for root in 0..n {
            if seen[root].is_some() {
                continue;
            }
            seen[root] = Some(self.colors[root]);
            let mut queue = VecDeque::from([root]);
            while let Some(a) = queue.pop_front() {
                let ca = seen[a].unwrap();
                for &b in &self.adjacency[a] {
                    if b == a || !self.adjacency[b].contains(&a) {
                        return false;
                    }
                    match seen[b] {
                        None => {
                            seen[b] = Some(ca.other());
                            queue.push_back(b);
                        }
                        Some(cb) if cb == ca => return false,
                        _ => {}
                    }
                }
            }
        }
        seen.iter().zip(&self.colors).all(|(s, c)| s.as_ref() == Some(c))
    }

    /// `steps` diagonal moves from `start`. On a square lattice each move adds
    /// `direction = (±1, ±1)`; on a line it moves `2 * direction.1` sites.
    pub fn diagonal_string(&self, start: usize, steps: usize, direction: (i32, i32)) -> Result<SiteString> {
        self.check_site(start)?;
        if direction.0.abs() != 1 || direction.1.abs() != 1 {
            return Err(Error::Domain(format!("direction {direction:?} is not diagonal")));
        }
        let (dr, dc) = match self.spec {
            LatticeSpec::Line { .. } => (0, 2 * direction.1),
            LatticeSpec::Square { .. } => direction,
        };
        let (r0, c0) = self.coords[start];
        let mut sites = Vec::with_capacity(steps + 1);
        for k in 0..=steps as i32 {
            let site = self.site_at(r0 + k * dr, c0 + k * dc).ok_or_else(|| {
                Error::OutOfRange(format!(
                    "diagonal string from {} leaves {} after {k} steps",
                    self.label(start),
                    self.spec
                ))
            })?;
            sites.push(site);
        }
        let color = self.colors[start];
        debug_assert!(sites.iter().all(|&s| self.colors[s] == color));
        Ok(SiteString { sites, color })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_four() {
        let l = Lattice::line(4).unwrap();
        assert_eq!(l.n(), 4);
        assert_eq!(l.edges().len(), 3);
        let colors: Vec<_> = (1..=4).map(|i| l.color(l.line_site(i).unwrap())).collect();
        assert_eq!(colors, [Color::Blue, Color::Red, Color::Blue, Color::Red]);
        assert_eq!(Lattice::line(2).unwrap().edges().len(), 1);
        assert!(Lattice::line(12).unwrap().verify_bipartite());
        assert!(Lattice::line(1).is_err());
    }

    #[test]
    fn square_shapes() {
        let s = Lattice::square(2, 2).unwrap();
        assert_eq!((s.n(), s.edges().len()), (4, 4));
        let s = Lattice::square(3, 3).unwrap();
        assert_eq!((s.n(), s.edges().len()), (9, 12));
        for (r, c) in [(1, 1), (1, 3), (3, 1), (3, 3)] {
            assert_eq!(s.neighbors(s.grid_site(r, c).unwrap()).len(), 2);
        }
        assert_eq!(s.neighbors(s.grid_site(2, 2).unwrap()).len(), 4);
        let s = Lattice::square(3, 4).unwrap();
        assert!(s.verify_bipartite());
        for (a, b) in s.edges() {
            assert_ne!(s.color(a), s.color(b));
        }
        assert!(Lattice::square(1, 4).is_err());
    }

    #[test]
    fn broken_colouring_detected() {
        let mut s = Lattice::square(3, 3).unwrap();
        s.colors[4] = s.colors[4].other();
        assert!(!s.verify_bipartite());
    }

    #[test]
    fn diagonal_strings() {
        let s = Lattice::square(4, 4).unwrap();
        let st = s.diagonal_string(s.grid_site(1, 1).unwrap(), 2, (1, 1)).unwrap();
        let labels: Vec<_> = st.sites.iter().map(|&q| s.label(q)).collect();
        assert_eq!(labels, ["(1,1)", "(2,2)", "(3,3)"]);
        assert!(st.sites.iter().all(|&q| s.color(q) == st.color));

        let l = Lattice::line(8).unwrap();
        let st = l.diagonal_string(l.line_site(2).unwrap(), 2, (1, 1)).unwrap();
        let labels: Vec<_> = st.sites.iter().map(|&q| l.label(q)).collect();
        assert_eq!(labels, ["2", "4", "6"]);

        let s3 = Lattice::square(3, 3).unwrap();
        let e = s3.diagonal_string(s3.grid_site(1, 1).unwrap(), 3, (1, 1)).unwrap_err();
        assert!(matches!(e, Error::OutOfRange(_)));
    }

    #[test]
    fn spec_json() {
        let spec = LatticeSpec::Square { rows: 3, cols: 4 };
        let js = serde_json::to_string(&spec).unwrap();
        assert_eq!(js, r#"{"kind":"square","rows":3,"cols":4}"#);
        let back: LatticeSpec = serde_json::from_str(r#"{"kind":"line","n":8}"#).unwrap();
        assert_eq!(back, LatticeSpec::Line { n: 8 });
        assert_eq!(back.build().unwrap().n(), 8);
    }
}
