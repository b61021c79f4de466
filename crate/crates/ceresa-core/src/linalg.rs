//! Dense linear algebra over F_p, sized for interpolation systems (tens of
//! rows/columns).

use crate::fp::{Field, PrimeField, Ring};

/// Row-reduce in place; returns the pivot column of each row in echelon
/// order.
pub fn row_reduce(fp: &PrimeField, mat: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return vec![];
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| mat[i][c] != 0) else {
            continue;
        };
        mat.swap(r, piv);
        let inv = fp.inv(&mat[r][c]);
        for j in c..cols {
            mat[r][j] = fp.mul(&mat[r][j], &inv);
        }
        for i in 0..rows {
            if i != r && mat[i][c] != 0 {
                let factor = mat[i][c];
                for j in c..cols {
                    let t = fp.mul(&factor, &mat[r][j]);
                    mat[i][j] = fp.sub(&mat[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// Basis of the right kernel of the matrix (rows are equations), as vectors
/// of length `cols`.  Deterministic: free variables in ascending order.
pub fn kernel_basis(fp: &PrimeField, mat: &[Vec<u64>], cols: usize) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = mat.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let pivots = row_reduce(fp, &mut m);
    let piv_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if piv_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            // pivot var = -(coefficient of free var in that row)
            v[pc] = fp.neg(&m[row][free]);
        }
        basis.push(v);
    }
    basis
}

/// Solve M x = b; returns one solution if consistent.
pub fn solve(fp: &PrimeField, mat: &[Vec<u64>], b: &[u64]) -> Option<Vec<u64>> {
    let rows = mat.len();
    let cols = if rows == 0 { return Some(vec![]) } else { mat[0].len() };
    let mut aug: Vec<Vec<u64>> = mat
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row = r.clone();
            row.push(bi);
            row
        })
        .collect();
    let pivots = row_reduce(fp, &mut aug);
    // Inconsistent if a pivot lands in the augmented column.
    if pivots.iter().any(|&c| c == cols) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][cols];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_of_rank_one() {
        let fp = PrimeField::new(7).unwrap();
        // x + 2y + 3z = 0
        let mat = vec![vec![1u64, 2, 3]];
        let k = kernel_basis(&fp, &mat, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s = fp.add(&v[0], &fp.add(&fp.mul(&2, &v[1]), &fp.mul(&3, &v[2])));
            assert_eq!(s, 0);
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let fp = PrimeField::new(5).unwrap();
        let mat = vec![vec![1u64, 1], vec![0, 1]];
        let x = solve(&fp, &mat, &[3, 2]).unwrap();
        assert_eq!(x, vec![1, 2]);
        let bad = vec![vec![1u64, 1], vec![2, 2]];
        assert!(solve(&fp, &bad, &[1, 3]).is_none());
    }
}
