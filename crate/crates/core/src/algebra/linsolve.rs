//! Dense Gaussian elimination over an exact field.

use crate::scalar::Scalar;

/// Solves `m·x = rhs`. Free variables are set to zero; returns `None` when the
/// system is inconsistent.
pub fn solve<Q: Scalar>(m: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();

    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = Q::one() / a[r][c].clone();
        for x in a[r].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..=cols {
                    let v = a[r][k].clone() * f.clone();
                    a[i][k] = a[i][k].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if a[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][cols].clone();
    }
    Some(x)
}

/// Rank of a dense matrix.
pub fn rank<Q: Scalar>(m: &[Vec<Q>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            if !a[i][c].is_zero() {
                let f = a[i][c].clone() / a[r][c].clone();
                for k in c..cols {
                    let v = a[r][k].clone() * f.clone();
                    a[i][k] = a[i][k].clone() - v;
                }
            }
        }
        r += 1;
    }
    r
}
