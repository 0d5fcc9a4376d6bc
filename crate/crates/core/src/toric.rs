//! The toric dictionary. A toric Q-Fano variety is determined by the
//! polytope `Q = conv(rays)`; the anticanonical section polytope is
//! `P = -Q°`, and the log discrepancy of the valuation `u` is the gauge of
//! `Q` at `u`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::rat::{dot_int, factorial, format_rat, is_primitive, to_rat_vec, IntVec, Rat, RatVec};
use crate::ratgeom::{Polytope, MAX_DIM};

/// A torus-invariant prime divisor over `X`, given by a primitive lattice
/// vector in `N`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ToricValuation(IntVec);

impl ToricValuation {
    pub fn new(u: IntVec) -> Result<Self> {
        if u.iter().all(|&x| x == 0) {
            return Err(Error::ZeroDirection);
        }
        if !is_primitive(&u) {
            return Err(Error::NotPrimitive(u));
        }
        Ok(ToricValuation(u))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_vec(self) -> IntVec {
        self.0
    }
}

impl std::fmt::Display for ToricValuation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Reported when a quantized computation uses a level `k` that is not a
/// multiple of the Cartier index; vanishing orders may then be fractional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexWarning {
    pub k: u64,
    pub cartier_index: u64,
}

impl std::fmt::Display for IndexWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "k = {} is not a multiple of the Cartier index {}; vanishing orders may be fractional",
            self.k, self.cartier_index
        )
    }
}

#[derive(Debug, Clone)]
pub struct ToricFano {
    name: String,
    dim: usize,
    rays: Vec<IntVec>,
    ray_polytope: Polytope,
    section_polytope: Polytope,
    /// `m_F` with `<m_F, .> = 1` on each facet of `Q`.
    functionals: Vec<RatVec>,
    degree: Rat,
    barycenter: RatVec,
    cartier_index: u64,
    /// Absent when some coordinate is too large for the `i128` path.
    fast: Option<FastForms>,
}

/// Integer copies of the facet functionals of `Q` and the vertices of `P`
/// used by the box searches. `m_F = normal * scale`, vertices of `P` are
/// `numerators / denominator`. Every stored integer fits in 32 bits and
/// directions are limited to `FAST_DIRECTION_BOUND`, which keeps all
/// products and cross-multiplications inside `i128`.
#[derive(Debug, Clone)]
struct FastForms {
    normals: Vec<Vec<i64>>,
    scales: Vec<(i128, i128)>,
    vertex_numerators: Vec<Vec<i64>>,
    vertex_denominator: i128,
    barycenter_numerators: Vec<i128>,
    barycenter_denominator: i128,
}

fn frac(n: i128, d: i128) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `a/b < c/d` for positive denominators.
fn less(a: (i128, i128), c: (i128, i128)) -> bool {
    a.0 * c.1 < c.0 * a.1
}

fn dot64(a: &[i64], u: &[i64]) -> i128 {
    a.iter().zip(u).map(|(&x, &y)| x as i128 * y as i128).sum()
}

const FAST_DIRECTION_BOUND: i64 = 1 << 24;

fn small(x: &BigInt) -> Option<i64> {
    x.to_i32().map(i64::from)
}

fn common_denominator(v: &[&Rat]) -> Option<(Vec<i64>, i64)> {
    let d = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let nums = v
        .iter()
        .map(|x| small(&(*x * &d).to_integer()))
        .collect::<Option<Vec<_>>>()?;
    Some((nums, small(&d)?))
}

impl FastForms {
    fn new(q: &Polytope, p: &Polytope, barycenter: &[Rat]) -> Option<Self> {
        let mut normals = Vec::new();
        let mut scales = Vec::new();
        for f in q.facets() {
            normals.push(f.normal.iter().map(small).collect::<Option<Vec<_>>>()?);
            let inv = Rat::one() / &f.offset;
            scales.push((small(inv.numer())? as i128, small(inv.denom())? as i128));
        }
        let all: Vec<&Rat> = p.vertices().iter().flatten().collect();
        let (flat, den) = common_denominator(&all)?;
        let n = p.dim();
        let vertex_numerators = flat.chunks(n).map(|c| c.to_vec()).collect();
        let (bn, bd) = common_denominator(&barycenter.iter().collect::<Vec<_>>())?;
        Some(FastForms {
            normals,
            scales,
            vertex_numerators,
            vertex_denominator: den as i128,
            barycenter_numerators: bn.into_iter().map(i128::from).collect(),
            barycenter_denominator: bd as i128,
        })
    }

    fn gauge(&self, u: &[i64]) -> (i128, i128) {
        let mut best: Option<(i128, i128)> = None;
        for (a, &(sn, sd)) in self.normals.iter().zip(&self.scales) {
            let val = (dot64(a, u) * sn, sd);
            if best.is_none_or(|b| less(b, val)) {
                best = Some(val);
            }
        }
        best.expect("ray polytope has facets")
    }

    fn support(&self, u: &[i64]) -> (i128, i128) {
        let best = self
            .vertex_numerators
            .iter()
            .map(|w| dot64(w, u))
            .max()
            .expect("section polytope has vertices");
        (best, self.vertex_denominator)
    }

    fn barycenter_dot(&self, u: &[i64]) -> (i128, i128) {
        let s: i128 = self
            .barycenter_numerators
            .iter()
            .zip(u)
            .map(|(&b, &x)| b * x as i128)
            .sum();
        (s, self.barycenter_denominator)
    }
}

impl ToricFano {
    /// Builds `X` from its primitive ray generators. Ray order is preserved.
    pub fn build(rays: Vec<IntVec>) -> Result<Self> {
        Self::build_named("", rays)
    }

    pub fn build_named(name: &str, rays: Vec<IntVec>) -> Result<Self> {
        let dim = rays.first().map_or(0, |r| r.len());
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::DimensionCap(dim));
        }
        if rays.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidInput("rays of mixed dimension".into()));
        }
        for r in &rays {
            if !is_primitive(r) {
                return Err(Error::NotPrimitive(r.clone()));
            }
        }
        let mut sorted = rays.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::NotFano("duplicate ray".into()));
        }
        if rays.len() < dim + 1 {
            return Err(Error::NotFano(format!(
                "{} rays cannot span a complete fan in dimension {dim}",
                rays.len()
            )));
        }
        let pts: Vec<RatVec> = rays.iter().map(|r| to_rat_vec(r)).collect();
        let ray_polytope = match Polytope::convex_hull(&pts) {
            Ok(q) => q,
            Err(Error::NotFullDimensional) => {
                return Err(Error::NotFano("rays lie in a hyperplane".into()))
            }
            Err(e) => return Err(e),
        };
        for (r, p) in rays.iter().zip(&pts) {
            if !ray_polytope.is_vertex(p) {
                return Err(Error::NotFano(format!(
                    "ray {r:?} is not a vertex of the ray polytope"
                )));
            }
        }
        let section_polytope = match ray_polytope.polar_dual_negated() {
            Ok(p) => p,
            Err(Error::OriginNotInterior) => {
                return Err(Error::NotFano(
                    "origin is not strictly interior to the ray polytope".into(),
                ))
            }
            Err(e) => return Err(e),
        };
        let functionals: Vec<RatVec> = ray_polytope
            .facets()
            .iter()
            .map(|f| {
                f.normal
                    .iter()
                    .map(|a| Rat::from_integer(a.clone()) / &f.offset)
                    .collect()
            })
            .collect();
        let cartier = functionals
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let cartier_index = cartier
            .to_u64()
            .ok_or_else(|| Error::InvalidInput("Cartier index out of range".into()))?;
        let (vol, barycenter) = section_polytope.volume_barycenter();
        let degree = vol * factorial(dim);
        let fast = FastForms::new(&ray_polytope, &section_polytope, &barycenter);
        Ok(ToricFano {
            name: name.to_string(),
            dim,
            rays,
            ray_polytope,
            section_polytope,
            functionals,
            degree,
            barycenter,
            cartier_index,
            fast,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn ray_valuations(&self) -> Vec<ToricValuation> {
        self.rays.iter().map(|r| ToricValuation(r.clone())).collect()
    }

    /// `Q`, the convex hull of the rays.
    pub fn ray_polytope(&self) -> &Polytope {
        &self.ray_polytope
    }

    /// `P`, whose lattice points in `kP` index a basis of `H^0(-kK_X)`.
    pub fn section_polytope(&self) -> &Polytope {
        &self.section_polytope
    }

    /// `(-K_X)^n = n! vol(P)`.
    pub fn degree(&self) -> &Rat {
        &self.degree
    }

    pub fn barycenter(&self) -> &RatVec {
        &self.barycenter
    }

    pub fn cartier_index(&self) -> u64 {
        self.cartier_index
    }

    pub fn index_warning(&self, k: u64) -> Option<IndexWarning> {
        (!k.is_multiple_of(self.cartier_index)).then_some(IndexWarning {
            k,
            cartier_index: self.cartier_index,
        })
    }

    /// `A_X(u)`: the gauge of `Q`, `max_F <m_F, u>`.
    pub fn log_discrepancy(&self, v: &ToricValuation) -> Rat {
        self.gauge(v.as_slice())
    }

    fn fast_for(&self, u: &[i64]) -> Option<&FastForms> {
        self.fast
            .as_ref()
            .filter(|_| u.iter().all(|c| c.abs() <= FAST_DIRECTION_BOUND))
    }

    pub(crate) fn gauge(&self, u: &[i64]) -> Rat {
        match self.fast_for(u) {
            Some(f) => {
                let (n, d) = f.gauge(u);
                frac(n, d)
            }
            None => self.gauge_exact(u),
        }
    }

    /// Gauge computed directly from the rational facet functionals.
    pub fn gauge_exact(&self, u: &[i64]) -> Rat {
        self.functionals
            .iter()
            .map(|m| dot_int(m, u))
            .max()
            .expect("ray polytope has facets")
    }

    /// `A(u)` as an unreduced fraction `(num, den)` with `den > 0`, when it
    /// fits in `i128`.
    pub(crate) fn gauge_frac(&self, u: &[i64]) -> Option<(i128, i128)> {
        match self.fast_for(u) {
            Some(f) => Some(f.gauge(u)),
            None => {
                let a = self.gauge_exact(u);
                Some((a.numer().to_i128()?, a.denom().to_i128()?))
            }
        }
    }

    /// `max_P <., u>`.
    pub fn support(&self, u: &[i64]) -> Rat {
        match self.fast_for(u) {
            Some(f) => {
                let (n, d) = f.support(u);
                frac(n, d)
            }
            None => self
                .section_polytope
                .vertices()
                .iter()
                .map(|m| dot_int(m, u))
                .max()
                .expect("section polytope has vertices"),
        }
    }

    /// `<b, u>` for the barycenter `b` of `P`.
    pub fn barycenter_dot(&self, u: &[i64]) -> Rat {
        match self.fast_for(u) {
            Some(f) => {
                let (n, d) = f.barycenter_dot(u);
                frac(n, d)
            }
            None => dot_int(&self.barycenter, u),
        }
    }

    /// Order of vanishing of the monomial section `m` of `-kK_X` along `u`:
    /// `<m, u> + k A(u)`. Integral when the Cartier index divides `k`.
    pub fn section_vanishing_order(&self, k: u64, m: &[i64], v: &ToricValuation) -> Rat {
        let u = v.as_slice();
        let mu: BigInt = m.iter().zip(u).map(|(&a, &b)| BigInt::from(a) * b).sum();
        Rat::from_integer(mu) + self.gauge(u) * BigInt::from(k)
    }

    pub fn describe(&self) -> String {
        format!(
            "{} (dim {}, degree {}, index {})",
            if self.name.is_empty() { "X" } else { &self.name },
            self.dim,
            format_rat(&self.degree),
            self.cartier_index
        )
    }
}

/// All primitive vectors with `|u|_inf <= radius`, lexicographically sorted.
pub fn primitive_box(dim: usize, radius: i64) -> Vec<IntVec> {
    let side = 2 * radius + 1;
    let total = side.pow(dim as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let mut u = vec![0i64; dim];
        for c in (0..dim).rev() {
            u[c] = rem % side - radius;
            rem /= side;
        }
        if is_primitive(&u) {
            out.push(u);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};
    use num_traits::Zero;

    fn p2() -> ToricFano {
        ToricFano::build(vec![vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap()
    }

    fn v(u: &[i64]) -> ToricValuation {
        ToricValuation::new(u.to_vec()).unwrap()
    }

    #[test]
    fn builds_p2_f1_and_weighted_plane() {
        let x = p2();
        assert_eq!(x.degree(), &int(9));
        assert_eq!(x.barycenter(), &vec![int(0), int(0)]);
        assert_eq!(x.cartier_index(), 1);

        let f1 = ToricFano::build(vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![1, 1]]).unwrap();
        assert_eq!(f1.degree(), &int(8));
        assert_eq!(f1.barycenter(), &vec![rat(1, 12), rat(1, 12)]);
        assert_eq!(f1.cartier_index(), 1);

        let w = ToricFano::build(vec![vec![1, 0], vec![0, 1], vec![-1, -3]]).unwrap();
        assert_eq!(w.cartier_index(), 3);
        assert!(w.index_warning(2).is_some());
        assert!(w.index_warning(6).is_none());
    }

    #[test]
    fn rejects_bad_fans() {
        let e = ToricFano::build(vec![vec![1, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(e, Error::NotFano(_)));
        let e = ToricFano::build(vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![0, 0]]).unwrap_err();
        assert!(matches!(e, Error::NotPrimitive(_)));
        let e = ToricFano::build(vec![vec![2, 0], vec![0, 1], vec![-1, -1]]).unwrap_err();
        assert!(matches!(e, Error::NotPrimitive(_)));
        // (1,0) lies on the segment between (1,1) and (1,-1)
        let e = ToricFano::build(vec![vec![1, 1], vec![1, -1], vec![1, 0], vec![-1, 0]]).unwrap_err();
        assert!(matches!(e, Error::NotFano(_)));
        // origin on the boundary
        let e = ToricFano::build(vec![vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap_err();
        assert!(matches!(e, Error::NotFano(_)));
        let e = ToricFano::build(vec![vec![1; 5]; 6]).unwrap_err();
        assert_eq!(e, Error::DimensionCap(5));
    }

    #[test]
    fn gauge_values() {
        let x = p2();
        for r in x.ray_valuations() {
            assert_eq!(x.log_discrepancy(&r), int(1));
        }
        assert_eq!(x.log_discrepancy(&v(&[1, 1])), int(2));
        assert_eq!(x.log_discrepancy(&v(&[2, 1])), int(3));
    }

    #[test]
    fn vanishing_orders() {
        let x = p2();
        assert_eq!(x.section_vanishing_order(1, &[-1, -1], &v(&[1, 0])), int(0));
        assert_eq!(x.section_vanishing_order(1, &[2, -1], &v(&[1, 0])), int(3));
        let w = ToricFano::build(vec![vec![1, 0], vec![0, 1], vec![-1, -3]]).unwrap();
        assert_eq!(w.section_vanishing_order(3, &[12, -3], &v(&[1, 0])), int(15));
    }

    #[test]
    fn valuations_must_be_primitive() {
        assert_eq!(ToricValuation::new(vec![0, 0]).unwrap_err(), Error::ZeroDirection);
        assert_eq!(
            ToricValuation::new(vec![2, 4]).unwrap_err(),
            Error::NotPrimitive(vec![2, 4])
        );
    }

    #[test]
    fn gauge_is_dual_to_section_polytope() {
        let x = ToricFano::build(vec![vec![1, 0], vec![0, 1], vec![-1, -3]]).unwrap();
        for u in primitive_box(2, 4) {
            let a = x.gauge(&u);
            assert_eq!(a, x.gauge_exact(&u));
            assert_eq!(x.support(&u), x.section_polytope().support_value(&u).unwrap());
            assert_eq!(x.barycenter_dot(&u), crate::rat::dot_int(x.barycenter(), &u));
            assert!(a > Rat::zero());
            assert_eq!(x.section_polytope().min_value(&u).unwrap(), -a.clone());
            let scaled: Vec<i64> = u.iter().map(|c| 3 * c).collect();
            assert_eq!(x.gauge(&scaled), a * int(3));
        }
    }

    #[test]
    fn box_enumeration() {
        let b = primitive_box(2, 1);
        assert_eq!(b.len(), 8);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(primitive_box(1, 3), vec![vec![-1], vec![1]]);
    }

    #[test]
    fn large_inputs_use_the_exact_path() {
        let x = ToricFano::build(vec![vec![1, 0], vec![0, 1], vec![-1, -3]]).unwrap();
        let big = [(1i64 << 40) + 1, -3];
        assert_eq!(x.gauge(&big), x.gauge_exact(&big));
        assert_eq!(x.support(&big), x.section_polytope().support_value(&big).unwrap());

        let n = 1i64 << 33;
        let w = ToricFano::build(vec![vec![1, 0], vec![0, 1], vec![-1, -n + 1]]).unwrap();
        assert!(w.fast.is_none());
        for u in primitive_box(2, 2) {
            assert_eq!(w.gauge(&u), w.gauge_exact(&u));
            assert_eq!(w.support(&u), w.section_polytope().support_value(&u).unwrap());
            assert_eq!(w.barycenter_dot(&u), crate::rat::dot_int(w.barycenter(), &u));
        }
    }
}
