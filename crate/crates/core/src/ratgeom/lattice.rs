use num_traits::{ToPrimitive, Zero};

use super::Polytope;
use crate::error::{Error, Result};
use crate::rat::{floor, IntVec, Rat};

pub const DEFAULT_LATTICE_CAP: u128 = 10_000_000;

struct IntFacet {
    normal: Vec<i128>,
    // den * <normal, m> >= k * num
    num: i128,
    den: i128,
}

impl Polytope {
    /// Integer points of the dilate `kP`, lexicographically sorted.
    pub fn lattice_points(&self, k: u64) -> Result<Vec<IntVec>> {
        self.lattice_points_capped(k, DEFAULT_LATTICE_CAP)
    }

    pub fn lattice_points_capped(&self, k: u64, cap: u128) -> Result<Vec<IntVec>> {
        let n = self.dim;
        let kr = Rat::from_integer(k.into());
        let mut lo = Vec::with_capacity(n);
        let mut hi = Vec::with_capacity(n);
        for c in 0..n {
            let min = self.vertices.iter().map(|v| &v[c]).min().expect("vertices") * &kr;
            let max = self.vertices.iter().map(|v| &v[c]).max().expect("vertices") * &kr;
            lo.push(to_i64(&-floor(&-min))?);
            hi.push(to_i64(&floor(&max))?);
        }
        let mut count: u128 = 1;
        for c in 0..n {
            count = count.saturating_mul((hi[c] - lo[c] + 1).max(0) as u128);
        }
        if count > cap {
            return Err(Error::OverflowGuard { count, cap });
        }
        let facets: Vec<IntFacet> = self
            .facets
            .iter()
            .map(|f| {
                Ok(IntFacet {
                    normal: f.normal.iter().map(to_i128).collect::<Result<_>>()?,
                    num: to_i128(f.offset.numer())? * k as i128,
                    den: to_i128(f.offset.denom())?,
                })
            })
            .collect::<Result<_>>()?;

        let mut out = Vec::new();
        if count == 0 {
            return Ok(out);
        }
        let mut m: IntVec = lo.clone();
        loop {
            let inside = facets.iter().all(|f| {
                let s: i128 = f.normal.iter().zip(&m).map(|(a, &x)| a * x as i128).sum();
                s * f.den >= f.num
            });
            if inside {
                out.push(m.clone());
            }
            // odometer, last coordinate fastest
            let mut c = n;
            loop {
                if c == 0 {
                    return Ok(out);
                }
                c -= 1;
                if m[c] < hi[c] {
                    m[c] += 1;
                    for (x, l) in m.iter_mut().zip(&lo).skip(c + 1) {
                        *x = *l;
                    }
                    break;
                }
            }
        }
    }
}

fn to_i64(x: &num_bigint::BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::InvalidInput("coordinate exceeds 64-bit range".into()))
}

fn to_i128(x: &num_bigint::BigInt) -> Result<i128> {
    if x.is_zero() {
        return Ok(0);
    }
    x.to_i128()
        .ok_or_else(|| Error::InvalidInput("facet data exceeds 128-bit range".into()))
}
