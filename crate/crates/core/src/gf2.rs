//! Small dense GF(2) linear algebra on `u64` row masks (bit `i` = column `i`).

/// Reduced row echelon form in place; returns the pivot column of each
/// remaining row. Zero rows are dropped.
pub fn rref(rows: &mut Vec<u64>, n_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n_cols {
        let bit = 1u64 << col;
        let Some(p) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : <row, x> = 0 for every row}`.
pub fn nullspace(rows: &[u64], n_cols: usize) -> Vec<u64> {
    let mut reduced = rows.to_vec();
    let pivots = rref(&mut reduced, n_cols);
    let mut basis = Vec::new();
    for free in (0..n_cols).filter(|c| !pivots.contains(c)) {
        let mut x = 1u64 << free;
        for (row, &p) in reduced.iter().zip(&pivots) {
            if row & (1u64 << free) != 0 {
                x |= 1u64 << p;
            }
        }
        basis.push(x);
    }
    basis
}

/// All `2^k` XOR-combinations of `basis`.
pub fn span(basis: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64];
    for &b in basis {
        let extra: Vec<u64> = out.iter().map(|w| w ^ b).collect();
        out.extend(extra);
    }
    out
}
