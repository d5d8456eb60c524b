//! Dense Gaussian elimination over an ordered field.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::real::{q_to_f64, Q};

/// Ordered field used by the elimination and the LP solver.
///
/// `Q` is exact; `f64` treats magnitudes below [`F64_EPS`] as zero.
pub trait Field:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn is_negligible(&self) -> bool;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;

    fn is_pos(&self) -> bool {
        !self.is_negligible() && *self > Self::zero()
    }

    fn is_neg(&self) -> bool {
        !self.is_negligible() && *self < Self::zero()
    }
}

pub const F64_EPS: f64 = 1e-11;

impl Field for Q {
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }
    fn to_f64(&self) -> f64 {
        q_to_f64(self)
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

impl Field for f64 {
    fn is_negligible(&self) -> bool {
        self.abs() <= F64_EPS
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
}

/// Index of the pivot for column `col` among rows `from..`: first nonzero for
/// exact fields, largest magnitude for floats (partial pivoting either way).
fn pick_pivot<T: Field>(m: &[Vec<T>], col: usize, from: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for r in from..m.len() {
        if m[r][col].is_negligible() {
            continue;
        }
        match best {
            None => best = Some(r),
            Some(b) if m[r][col].abs_val() > m[b][col].abs_val() => best = Some(r),
            _ => {}
        }
    }
    best
}

/// Row-reduces `m` in place; returns the pivot columns.
pub fn row_reduce<T: Field>(m: &mut [Vec<T>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = pick_pivot(m, c, r) else {
            continue;
        };
        m.swap(r, p);
        let inv = T::one() / m[r][c].clone();
        for k in c..cols {
            m[r][k] = m[r][k].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for k in c..cols {
                let v = m[r][k].clone() * f.clone();
                m[i][k] = m[i][k].clone() - v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<T: Field>(m: &[Vec<T>]) -> usize {
    let mut m = m.to_vec();
    row_reduce(&mut m).len()
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve<T: Field>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), n, "solve expects a square matrix");
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

/// Inverse of a square matrix; `None` when singular.
pub fn inverse<T: Field>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let mut aug: Vec<Vec<T>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// A nonzero vector in the null space of `m` (rows × cols, rank < cols).
pub fn null_vector<T: Field>(m: &[Vec<T>], cols: usize) -> Option<Vec<T>> {
    let mut red = m.to_vec();
    let pivots = row_reduce(&mut red);
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![T::zero(); cols];
    v[free] = T::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -red[r][free].clone();
    }
    Some(v)
}

pub fn mat_vec<T: Field>(m: &[Vec<T>], x: &[T]) -> Vec<T> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::real::{q, qi};

    #[test]
    fn solves_rational_system_exactly() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)]];
        let b = vec![qi(1), qi(2)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![q(1, 5), q(3, 5)]);
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let a = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(inverse(&a).is_none());
        assert_eq!(rank(&a), 1);
        let v = null_vector(&a, 2).unwrap();
        assert!(mat_vec(&a, &v).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn inverse_round_trips() {
        let a = vec![
            vec![qi(1), qi(2), qi(0)],
            vec![qi(0), qi(1), qi(4)],
            vec![qi(5), qi(6), qi(0)],
        ];
        let inv = inverse(&a).unwrap();
        for i in 0..3 {
            let col: Vec<Q> = (0..3).map(|j| inv[j][i].clone()).collect();
            let e = mat_vec(&a, &col);
            for (j, v) in e.iter().enumerate() {
                assert_eq!(*v, if i == j { qi(1) } else { qi(0) });
            }
        }
    }
}
