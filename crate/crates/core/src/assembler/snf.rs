use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// A finitely generated abelian group `Z^rank ⊕ ⊕ Z/t_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub rank: usize,
    /// Invariant factors `> 1`, each dividing the next.
    pub torsion: Vec<u64>,
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rank == 0 && self.torsion.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        if self.rank > 0 {
            if self.rank == 1 {
                f.write_str("Z")?;
            } else {
                write!(f, "Z^{}", self.rank)?;
            }
            first = false;
        }
        for t in &self.torsion {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "Z/{t}")?;
            first = false;
        }
        Ok(())
    }
}

fn overflow() -> Error {
    Error::Overflow("smith normal form")
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.abs()
}

/// Nonzero invariant factors of an integer matrix, in divisibility order.
pub fn invariant_factors(rows: &[Vec<i64>], cols: usize) -> Result<Vec<u64>> {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged relation matrix");
            r.iter().map(|&x| i128::from(x)).collect()
        })
        .collect();
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(cols) {
        // pivot: smallest nonzero magnitude in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(bi, bj)| x.abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        let mut clean = true;
        let pivot = m[t][t];
        for i in t + 1..nrows {
            let q = m[i][t] / pivot;
            if q != 0 {
                let (head, tail) = m.split_at_mut(i);
                for (x, &y) in tail[0][t..].iter_mut().zip(&head[t][t..]) {
                    *x = x
                        .checked_sub(q.checked_mul(y).ok_or_else(overflow)?)
                        .ok_or_else(overflow)?;
                }
            }
            clean &= m[i][t] == 0;
        }
        for j in t + 1..cols {
            let q = m[t][j] / pivot;
            if q != 0 {
                for row in m.iter_mut().skip(t) {
                    let sub = q.checked_mul(row[t]).ok_or_else(overflow)?;
                    row[j] = row[j].checked_sub(sub).ok_or_else(overflow)?;
                }
            }
            clean &= m[t][j] == 0;
        }
        if clean {
            diag.push(pivot.abs());
            t += 1;
        }
    }
    // (a, b) ~ (gcd, lcm) until the divisibility chain holds
    diag.sort_unstable();
    loop {
        let mut changed = false;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                let (a, b) = (diag[i], diag[j]);
                if b % a != 0 {
                    let g = gcd_i128(a, b);
                    diag[i] = g;
                    diag[j] = (a / g).checked_mul(b).ok_or_else(overflow)?;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        diag.sort_unstable();
    }
    diag.into_iter()
        .map(|d| u64::try_from(d).map_err(|_| overflow()))
        .collect()
}

/// Cokernel of the map `Z^rows → Z^cols` given by the relation rows.
pub fn cokernel(rows: &[Vec<i64>], cols: usize) -> Result<AbelianGroup> {
    let factors = invariant_factors(rows, cols)?;
    Ok(AbelianGroup {
        rank: cols - factors.len(),
        torsion: factors.into_iter().filter(|&d| d > 1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn known_forms() {
        assert_eq!(
            invariant_factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3).unwrap(),
            [2, 6, 12]
        );
        assert_eq!(
            invariant_factors(&[vec![2, 0], vec![0, 3]], 2).unwrap(),
            [1, 6]
        );
        let g = cokernel(&[vec![2, 0], vec![0, 3]], 2).unwrap();
        assert_eq!(
            g,
            AbelianGroup {
                rank: 0,
                torsion: vec![6]
            }
        );
        assert_eq!(
            cokernel(&[], 3).unwrap(),
            AbelianGroup {
                rank: 3,
                torsion: vec![]
            }
        );
        assert_eq!(cokernel(&[vec![1, -1, -1]], 3).unwrap().rank, 2);
        assert_eq!(
            cokernel(&[vec![4, 0], vec![0, 0]], 2).unwrap().to_string(),
            "Z + Z/4"
        );
        assert_eq!(
            AbelianGroup {
                rank: 0,
                torsion: vec![]
            }
            .to_string(),
            "0"
        );
    }

    /// Determinant by fraction-free elimination, as an independent oracle for
    /// the product of invariant factors of a square matrix.
    fn det(mut m: Vec<Vec<i128>>) -> i128 {
        let n = m.len();
        let mut sign = 1;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&i| m[i][k] != 0) {
                    Some(i) => {
                        m.swap(k, i);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        sign * m[n - 1][n - 1]
    }

    proptest! {
        #[test]
        fn factors_multiply_to_determinant(entries in proptest::collection::vec(-6i64..=6, 16)) {
            let rows: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let f = invariant_factors(&rows, 4).unwrap();
            let d = det(rows.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect());
            if d == 0 {
                prop_assert!(f.len() < 4);
            } else {
                prop_assert_eq!(f.len(), 4);
                prop_assert_eq!(f.iter().map(|&x| i128::from(x)).product::<i128>(), d.abs());
            }
            for w in f.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
        }
    }
}
