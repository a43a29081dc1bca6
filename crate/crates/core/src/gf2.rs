//! Dense linear algebra over GF(2) with rows packed into `u64`.

/// Inverse of an `n x n` matrix (row `i` is `rows[i]`, column `j` is bit `j`).
pub(crate) fn inverse(rows: &[u64], n: usize) -> Option<Vec<u64>> {
    let mut a = rows.to_vec();
    let mut inv: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| a[r] >> col & 1 == 1)?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        for r in 0..n {
            if r != col && a[r] >> col & 1 == 1 {
                a[r] ^= a[col];
                inv[r] ^= inv[col];
            }
        }
    }
    Some(inv)
}

/// Basis of `{c : popcount(row & c) even for every row}` over `ncols` variables.
pub(crate) fn nullspace(rows: &[u64], ncols: usize) -> Vec<u64> {
    let mut a: Vec<u64> = rows.iter().copied().filter(|&r| r != 0).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..a.len()).find(|&r| a[r] >> col & 1 == 1) else {
            continue;
        };
        a.swap(rank, p);
        for r in 0..a.len() {
            if r != rank && a[r] >> col & 1 == 1 {
                a[r] ^= a[rank];
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = 1u64 << free;
        for (r, &pc) in pivots.iter().enumerate() {
            if a[r] >> free & 1 == 1 {
                v |= 1u64 << pc;
            }
        }
        basis.push(v);
    }
    basis
}

/// Reduces `v` against an echelon basis; returns the residue (0 if dependent).
pub(crate) fn reduce(basis: &[u64], mut v: u64) -> u64 {
    for &b in basis {
        let lead = 63 - b.leading_zeros();
        if v >> lead & 1 == 1 {
            v ^= b;
        }
    }
    v
}

/// Inserts `v` into an echelon basis kept sorted by descending leading bit.
/// Returns false if `v` was already in the span.
pub(crate) fn insert(basis: &mut Vec<u64>, v: u64) -> bool {
    let r = reduce(basis, v);
    if r == 0 {
        return false;
    }
    basis.push(r);
    basis.sort_by_key(|b| std::cmp::Reverse(63 - b.leading_zeros()));
    true
}
