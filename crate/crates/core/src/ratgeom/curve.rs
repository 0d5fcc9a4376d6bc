//! Slice-volume curves `x -> n! vol{m in P : <m,u> - base >= x}`.
//!
//! Each simplex of the triangulation contributes the fraction of its volume
//! above a level. With the vertex heights sorted as knots `z_0 <= .. <= z_n`
//! that fraction is the divided difference `[z_0..z_n] (s - x)_+^n` in `s`.
//! Written as a sum of residues of `(s - x)^n / prod (s - z_j)`, only the
//! knots above `x` contribute, so the whole curve is one sum of terms
//! `c (z - x)^p` attached to knot heights `z`, accumulated from the top.

use num_bigint::BigInt;
use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{Poly, Polytope};
use crate::error::{Error, Result};
use crate::rat::{dot_int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurvePiece {
    pub lo: Rat,
    pub hi: Rat,
    pub poly: Poly,
}

/// Continuous piecewise polynomial on `[0, width]`, zero beyond `width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VolumeCurve {
    pub pieces: Vec<CurvePiece>,
}

impl VolumeCurve {
    pub fn width(&self) -> Rat {
        self.pieces.last().map_or_else(Rat::zero, |p| p.hi.clone())
    }

    pub fn breakpoints(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self.pieces.iter().map(|p| p.lo.clone()).collect();
        if let Some(last) = self.pieces.last() {
            out.push(last.hi.clone());
        }
        out
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let x = if x.is_negative() { Rat::zero() } else { x.clone() };
        self.pieces
            .iter()
            .find(|p| x >= p.lo && x <= p.hi)
            .map_or_else(Rat::zero, |p| p.poly.eval(&x))
    }

    /// `int_a^inf C(x) dx` for `a >= 0`.
    pub fn integral_from(&self, a: &Rat) -> Rat {
        self.pieces
            .iter()
            .filter(|p| &p.hi > a)
            .map(|p| {
                let lo = if &p.lo > a { &p.lo } else { a };
                p.poly.integrate(lo, &p.hi)
            })
            .sum()
    }

    pub fn integral(&self) -> Rat {
        self.integral_from(&Rat::zero())
    }
}

impl Polytope {
    /// Piecewise polynomial `C(x) = n! vol{m in P : <m,u> - base >= x}`.
    /// `base` must not exceed `min_P <., u>`.
    pub fn slice_volume_curve(&self, u: &[i64], base: &Rat) -> Result<VolumeCurve> {
        self.check_direction(u)?;
        let heights: Vec<Rat> = self.vertices.iter().map(|v| dot_int(v, u) - base).collect();
        if heights.iter().any(|h| h.is_negative()) {
            return Err(Error::InvalidInput(
                "base lies above the minimum of the polytope along u".into(),
            ));
        }
        let n = self.dim;
        let tri = self.triangulation();
        let mut terms: BTreeMap<Rat, Vec<Rat>> = BTreeMap::new();
        for (s, vol) in tri.simplices.iter().zip(&tri.normalized_volumes) {
            let mut z: Vec<Rat> = s.iter().map(|&i| heights[i].clone()).collect();
            z.sort();
            add_knot_terms(&z, vol, n, &mut terms);
        }

        let mut bps: Vec<Rat> = heights;
        bps.push(Rat::zero());
        bps.sort();
        bps.dedup();
        let mut pieces = Vec::with_capacity(bps.len() - 1);
        let mut running = Poly::zero();
        for w in bps.windows(2).rev() {
            if let Some(coeffs) = terms.get(&w[1]) {
                for (p, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        running = &running + &Poly::reflected_power(&w[1], p).scale(c);
                    }
                }
            }
            pieces.push(CurvePiece {
                lo: w[0].clone(),
                hi: w[1].clone(),
                poly: running.clone(),
            });
        }
        pieces.reverse();
        Ok(VolumeCurve { pieces })
    }
}

/// Adds the residues of `(s - x)^n / prod_j (s - z_j)` at each distinct
/// knot, scaled by `vol`, as coefficients of `(z - x)^p` under key `z`.
/// On an interval free of knots the fraction of the simplex above `x` is
/// the sum of these terms over the knots above the interval.
fn add_knot_terms(z: &[Rat], vol: &Rat, n: usize, terms: &mut BTreeMap<Rat, Vec<Rat>>) {
    let mut groups: Vec<(&Rat, usize)> = Vec::new();
    for k in z {
        match groups.last_mut() {
            Some((v, m)) if *v == k => *m += 1,
            _ => groups.push((k, 1)),
        }
    }
    for (i, &(zi, mi)) in groups.iter().enumerate() {
        // Taylor coefficients at zi of prod_{j != i} (s - z_j)^(-m_j)
        let mut g = vec![Rat::zero(); mi];
        g[0] = Rat::one();
        for (j, &(zj, mj)) in groups.iter().enumerate() {
            if j == i {
                continue;
            }
            let d = zi - zj;
            let inv = Rat::one() / &d;
            let mut factor = Vec::with_capacity(mi);
            let mut pow = num_traits::pow(inv.clone(), mj);
            for t in 0..mi {
                let c = Rat::from_integer(binomial(mj + t - 1, t)) * &pow;
                factor.push(if t % 2 == 0 { c } else { -c });
                pow *= &inv;
            }
            let mut next = vec![Rat::zero(); mi];
            for (a, ga) in g.iter().enumerate().filter(|(_, ga)| !ga.is_zero()) {
                for (b, fb) in factor.iter().enumerate().take(mi - a) {
                    next[a + b] += ga * fb;
                }
            }
            g = next;
        }
        let entry = terms.entry(zi.clone()).or_insert_with(|| vec![Rat::zero(); n + 1]);
        for r in 0..mi {
            entry[n - r] += vol * Rat::from_integer(binomial(n, r)) * &g[mi - 1 - r];
        }
    }
}

fn binomial(n: usize, r: usize) -> BigInt {
    (0..r).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat, to_rat_vec};

    /// Divided-difference table for the fraction of a simplex with sorted
    /// knots `z` above `x`, valid for `x` in `[lo, hi]`.
    fn fraction_above(z: &[Rat], lo: &Rat, hi: &Rat, n: usize) -> Poly {
        if z[0] >= *hi {
            return Poly::constant(Rat::one());
        }
        if z[n] <= *lo {
            return Poly::zero();
        }
        let deriv = |s: &Rat, r: usize| -> Poly {
            if s >= hi {
                Poly::reflected_power(s, n - r).scale(&Rat::from_integer(binomial(n, r)))
            } else {
                Poly::zero()
            }
        };
        let mut table: Vec<Poly> = z.iter().map(|s| deriv(s, 0)).collect();
        for len in 1..=n {
            for i in 0..=n - len {
                let j = i + len;
                table[i] = if z[i] == z[j] {
                    deriv(&z[i], len)
                } else {
                    (&table[i + 1] - &table[i]).scale(&(Rat::one() / (&z[j] - &z[i])))
                };
            }
        }
        table.swap_remove(0)
    }

    fn residue_fraction(z: &[Rat], hi: &Rat, n: usize) -> Poly {
        let mut terms = BTreeMap::new();
        add_knot_terms(z, &Rat::one(), n, &mut terms);
        let mut out = Poly::zero();
        for (k, coeffs) in terms.range(hi.clone()..) {
            for (p, c) in coeffs.iter().enumerate() {
                out = &out + &Poly::reflected_power(k, p).scale(c);
            }
        }
        out
    }

    #[test]
    fn residues_match_divided_differences() {
        let cases: Vec<Vec<i64>> = vec![
            vec![0, 1, 2],
            vec![0, 1, 1],
            vec![0, 0, 1],
            vec![0, 2, 3, 7],
            vec![1, 1, 4, 4],
            vec![0, 3, 3, 3],
            vec![0, 0, 0, 5],
            vec![-1, 0, 2, 2, 6],
            vec![0, 1, 1, 1, 1],
        ];
        for z in cases {
            let n = z.len() - 1;
            let z: Vec<Rat> = z.into_iter().map(int).collect();
            let mut bps = z.clone();
            bps.dedup();
            for w in bps.windows(2) {
                assert_eq!(
                    residue_fraction(&z, &w[1], n),
                    fraction_above(&z, &w[0], &w[1], n),
                    "{z:?} on {w:?}"
                );
            }
        }
    }

    fn hull(v: &[&[i64]]) -> Polytope {
        Polytope::convex_hull(&v.iter().map(|p| to_rat_vec(p)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triangle_curve_is_single_square() {
        let t = hull(&[&[-1, -1], &[2, -1], &[-1, 2]]);
        let c = t.slice_volume_curve(&[1, 0], &int(-1)).unwrap();
        assert_eq!(c.pieces.len(), 1);
        assert_eq!(c.pieces[0].poly, Poly::reflected_power(&int(3), 2));
        assert_eq!(c.width(), int(3));
        assert_eq!(c.integral(), int(9));
        assert_eq!(c.eval(&int(5)), int(0));
    }

    #[test]
    fn square_curve_is_linear() {
        let sq = hull(&[&[-1, -1], &[1, -1], &[-1, 1], &[1, 1]]);
        let c = sq.slice_volume_curve(&[1, 0], &int(-1)).unwrap();
        assert_eq!(c.pieces.len(), 1);
        assert_eq!(c.pieces[0].poly, Poly::from_coeffs(vec![int(8), int(-4)]));
        assert_eq!(c.integral(), int(8));
    }

    #[test]
    fn base_below_minimum_gives_flat_start() {
        let sq = hull(&[&[-1, -1], &[1, -1], &[-1, 1], &[1, 1]]);
        let c = sq.slice_volume_curve(&[1, 0], &int(-2)).unwrap();
        assert_eq!(c.eval(&rat(1, 2)), int(8));
        assert_eq!(c.eval(&int(1)), int(8));
        assert_eq!(c.eval(&int(2)), int(4));
        assert_eq!(c.eval(&int(3)), int(0));
        assert!(sq.slice_volume_curve(&[1, 0], &int(0)).is_err());
    }

    #[test]
    fn confluent_knots() {
        // knots 0,1,1 in the plane: 1 - x^2
        let p = fraction_above(&[int(0), int(1), int(1)], &int(0), &int(1), 2);
        assert_eq!(p, Poly::from_coeffs(vec![int(1), int(0), int(-1)]));
        let p = fraction_above(&[int(0), int(0), int(1)], &int(0), &int(1), 2);
        assert_eq!(p, Poly::reflected_power(&int(1), 2));
    }
}
