//! Finite-level invariants: section counts `h^0(-kK_X - aF)`, the basis
//! vanishing sums `S_k`, `delta_k` and basis-type divisors.
//!
//! The monomials `m in kP ∩ M` form a basis of `H^0(-kK_X)` on which every
//! torus-invariant valuation is diagonal, with order `<m,u> + k A(u)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::invariants::{InvariantDivisor, Witnessed};
use crate::rat::{IntVec, Rat};
use crate::toric::{primitive_box, ToricFano, ToricValuation};

pub const DEFAULT_SEARCH_RADIUS: i64 = 8;

/// The monomial basis of `H^0(-kK_X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantizedSlice {
    k: u64,
    points: Vec<IntVec>,
}

impl QuantizedSlice {
    pub fn new(x: &ToricFano, k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("k must be positive".into()));
        }
        let points = x.section_polytope().lattice_points(k)?;
        Ok(QuantizedSlice { k, points })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn points(&self) -> &[IntVec] {
        &self.points
    }

    /// `N_k = h^0(-kK_X)`.
    pub fn n_k(&self) -> usize {
        self.points.len()
    }

    /// Vanishing orders along `u` as fractions `(num, den)` sharing one
    /// positive denominator, or `None` if they leave `i128`.
    fn raw_orders(&self, x: &ToricFano, u: &[i64]) -> Option<(Vec<i128>, i128)> {
        let (an, ad) = x.gauge_frac(u)?;
        let ka = an.checked_mul(self.k as i128)?;
        let orders = self
            .points
            .iter()
            .map(|m| {
                let mut mu: i128 = 0;
                for (&a, &b) in m.iter().zip(u) {
                    mu = mu.checked_add((a as i128).checked_mul(b as i128)?)?;
                }
                mu.checked_mul(ad)?.checked_add(ka)
            })
            .collect::<Option<Vec<_>>>()?;
        Some((orders, ad))
    }

    /// Vanishing order of every basis monomial along `v`, in point order.
    pub fn orders(&self, x: &ToricFano, v: &ToricValuation) -> Vec<Rat> {
        match self.raw_orders(x, v.as_slice()) {
            Some((o, d)) => o
                .into_iter()
                .map(|n| Rat::new(BigInt::from(n), BigInt::from(d)))
                .collect(),
            None => self.exact_orders(x, v.as_slice()),
        }
    }

    /// `sum_{a >= 1} h^0(-kK_X - aF)` over integers `a`, i.e. the sum of the
    /// floors of the orders.
    pub fn vanishing_sum(&self, x: &ToricFano, u: &[i64]) -> BigInt {
        if let Some((o, d)) = self.raw_orders(x, u) {
            let mut total: i128 = 0;
            let fits = o.into_iter().try_for_each(|n| {
                total = total.checked_add(Integer::div_floor(&n, &d))?;
                Some(())
            });
            if fits.is_some() {
                return BigInt::from(total);
            }
        }
        self.exact_orders(x, u).iter().map(crate::rat::floor).sum()
    }

    fn exact_orders(&self, x: &ToricFano, u: &[i64]) -> Vec<Rat> {
        let ka = x.gauge_exact(u) * BigInt::from(self.k);
        self.points
            .iter()
            .map(|m| crate::rat::dot_int(&crate::rat::to_rat_vec(m), u) + &ka)
            .collect()
    }

    /// `S_k(u) = sum_{a>=1} h^0(-kK_X - aF) / (k N_k)`.
    pub fn sk(&self, x: &ToricFano, u: &[i64]) -> Rat {
        Rat::new(
            self.vanishing_sum(x, u),
            BigInt::from(self.k) * BigInt::from(self.points.len()),
        )
    }

    pub fn h0(&self, x: &ToricFano, u: &[i64], a: &Rat) -> u64 {
        self.exact_orders(x, u).iter().filter(|o| *o >= a).count() as u64
    }
}

/// `h^0(-kK_X - aF)`: monomials of `kP` vanishing to order at least `a`.
pub fn h0_count(x: &ToricFano, k: u64, v: &ToricValuation, a: &Rat) -> Result<u64> {
    Ok(QuantizedSlice::new(x, k)?.h0(x, v.as_slice(), a))
}

pub fn sk_sum(x: &ToricFano, k: u64, v: &ToricValuation) -> Result<Rat> {
    Ok(QuantizedSlice::new(x, k)?.sk(x, v.as_slice()))
}

/// `min A(u) / S_k(u)` over the rays and the primitive box of the given
/// radius. Directions with `S_k(u) = 0` are skipped. Ties go to the
/// lexicographically smallest direction.
pub fn delta_k(x: &ToricFano, k: u64, radius: i64) -> Result<Witnessed> {
    let slice = QuantizedSlice::new(x, k)?;
    delta_k_on(x, &slice, radius)
}

pub fn delta_k_on(x: &ToricFano, slice: &QuantizedSlice, radius: i64) -> Result<Witnessed> {
    if radius < 1 {
        return Err(Error::InvalidInput("search radius must be at least 1".into()));
    }
    let mut candidates = primitive_box(x.dim(), radius);
    candidates.extend(x.rays().iter().cloned());
    candidates.sort();
    candidates.dedup();
    let kn = BigInt::from(slice.k) * BigInt::from(slice.n_k());
    let mut best: Option<Witnessed> = None;
    for u in candidates {
        let total = slice.vanishing_sum(x, &u);
        if total.is_zero() {
            continue;
        }
        let ratio = x.gauge(&u) * &kn / total;
        if best.as_ref().is_none_or(|b| ratio < b.value) {
            best = Some(Witnessed {
                value: ratio,
                witness: ToricValuation::new(u)?,
            });
        }
    }
    best.ok_or_else(|| Error::InvalidInput("no direction with positive S_k".into()))
}

/// The basis-type divisor of any monomial basis of `H^0(-kK_X)`:
/// `c_j = sum_m (<m, v_j> + k) / (k N_k)`.
pub fn monomial_basis_divisor(x: &ToricFano, k: u64) -> Result<InvariantDivisor> {
    let slice = QuantizedSlice::new(x, k)?;
    let kn = BigInt::from(k) * BigInt::from(slice.n_k());
    let coefficients = x
        .rays()
        .iter()
        .map(|r| {
            let total: i128 = slice
                .points
                .iter()
                .map(|m| {
                    m.iter().zip(r).map(|(&a, &b)| a as i128 * b as i128).sum::<i128>() + k as i128
                })
                .sum();
            Rat::new(BigInt::from(total), kn.clone())
        })
        .collect();
    InvariantDivisor::new(coefficients)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstBasis {
    pub value: Rat,
    /// Monomials by decreasing vanishing order, ties in lexicographic
    /// order, with their orders. The prefix of monomials of order `>= a`
    /// spans `H^0(-kK_X - aF)`.
    pub certificate: Vec<(IntVec, Rat)>,
}

/// Supremum of `v_F(D)` over `k`-basis type divisors `D`, attained by the
/// monomial basis ordered along the filtration by vanishing order.
pub fn worst_basis_vanishing(x: &ToricFano, k: u64, v: &ToricValuation) -> Result<WorstBasis> {
    let slice = QuantizedSlice::new(x, k)?;
    let orders = slice.orders(x, v);
    let mut certificate: Vec<(IntVec, Rat)> = slice.points.iter().cloned().zip(orders).collect();
    certificate.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(WorstBasis {
        value: slice.sk(x, v.as_slice()),
        certificate,
    })
}

/// Cumulative counts `i_a = #{sections of order >= a}` for `a = 1, 2, ..`
/// read off a certificate with integral orders.
pub fn filtration_counts(certificate: &[(IntVec, Rat)]) -> Vec<usize> {
    let top = certificate
        .first()
        .map_or(BigInt::zero(), |c| crate::rat::floor(&c.1));
    let mut out = Vec::new();
    let mut a = BigInt::one();
    while a <= top {
        let threshold = Rat::from_integer(a.clone());
        out.push(certificate.iter().filter(|c| c.1 >= threshold).count());
        a += 1;
    }
    out
}
