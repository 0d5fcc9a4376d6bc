//! Exact Gaussian elimination helpers for the hull and triangulation code.

use num_traits::{Signed, Zero};

use crate::rat::{Rat, RatVec};

/// Row echelon basis built one vector at a time.
#[derive(Debug, Default, Clone)]
pub(crate) struct Echelon {
    rows: Vec<(usize, RatVec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `v` if it is independent of the current rows.
    pub fn insert(&mut self, v: &[Rat]) -> bool {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if !v[*pivot].is_zero() {
                let f = v[*pivot].clone() / &row[*pivot];
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x -= &f * r;
                    }
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, v));
                true
            }
            None => false,
        }
    }
}

/// Indices (into `points`) of a maximal affinely independent subset, chosen
/// greedily in the given order.
pub(crate) fn affine_basis(points: &[&RatVec]) -> Vec<usize> {
    let Some(first) = points.first() else {
        return Vec::new();
    };
    let mut basis = vec![0];
    let mut ech = Echelon::new();
    let dim = first.len();
    for (i, p) in points.iter().enumerate().skip(1) {
        if ech.rank() == dim {
            break;
        }
        let d: RatVec = p.iter().zip(first.iter()).map(|(a, b)| a - b).collect();
        if ech.insert(&d) {
            basis.push(i);
        }
    }
    basis
}

pub(crate) fn rank(rows: &[RatVec]) -> usize {
    let mut ech = Echelon::new();
    for r in rows {
        ech.insert(r);
    }
    ech.rank()
}

/// A nonzero vector orthogonal to every row. `rows` must have rank
/// `dim - 1`.
pub(crate) fn null_vector(rows: &[RatVec], dim: usize) -> RatVec {
    // reduced row echelon form
    let mut m: Vec<RatVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(sel) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, sel);
        let p = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= &p;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let free = (0..dim)
        .find(|c| !pivots.contains(c))
        .expect("rows have rank dim - 1");
    let mut v = vec![Rat::zero(); dim];
    v[free] = Rat::from_integer(1.into());
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = -m[row][free].clone();
    }
    v
}

pub(crate) fn det(mut m: Vec<RatVec>) -> Rat {
    let n = m.len();
    let mut d = Rat::from_integer(1.into());
    for c in 0..n {
        let Some(sel) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if sel != c {
            m.swap(sel, c);
            d = -d;
        }
        let p = m[c][c].clone();
        d *= &p;
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = m[i][c].clone() / &p;
                let pivot_row = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= &f * y;
                }
            }
        }
    }
    d
}

/// Solves the square system `m x = b`; `None` when singular.
pub(crate) fn solve(mut m: Vec<RatVec>, mut b: RatVec) -> Option<RatVec> {
    let n = m.len();
    for c in 0..n {
        let sel = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(sel, c);
        b.swap(sel, c);
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone() / &m[c][c];
                let pivot_row = m[c].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
                let bc = b[c].clone();
                b[i] -= f * bc;
            }
        }
    }
    Some((0..n).map(|i| b[i].clone() / &m[i][i]).collect())
}

pub(crate) fn abs_det(m: Vec<RatVec>) -> Rat {
    det(m).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{dot, int};

    #[test]
    fn null_vector_is_orthogonal() {
        let rows = vec![vec![int(1), int(2), int(3)], vec![int(0), int(1), int(1)]];
        let v = null_vector(&rows, 3);
        for r in &rows {
            assert!(dot(r, &v).is_zero());
        }
        assert!(v.iter().any(|x| !x.is_zero()));
        // empty system in dimension one
        assert_eq!(null_vector(&[], 1), vec![int(1)]);
    }

    #[test]
    fn determinant_and_rank() {
        let m = vec![vec![int(2), int(1)], vec![int(1), int(3)]];
        assert_eq!(det(m.clone()), int(5));
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&[vec![int(1), int(1)], vec![int(2), int(2)]]), 1);
        let a = vec![int(0), int(0)];
        let b = vec![int(1), int(1)];
        let c = vec![int(2), int(2)];
        let d = vec![int(0), int(1)];
        assert_eq!(affine_basis(&[&a, &b, &c, &d]), vec![0, 1, 3]);
    }
}
