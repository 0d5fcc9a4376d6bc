//! Brute-force validators for the closed forms: seeded random corpora,
//! exhaustive box searches, floating-point cross-integration and random
//! bases. Nothing here is on the path that computes a report; the CLI runs
//! it only behind `--oracle`.

use std::ops::RangeInclusive;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::document::InputDocument;
use crate::error::{Error, Result};
use crate::invariants::{
    alpha_bound, delta, scalars, uniform_margin, Witnessed,
};
use crate::quantized::{worst_basis_vanishing, QuantizedSlice};
use crate::rat::{format_rat, primitivize, to_f64, IntVec, Rat};
use crate::ratgeom::VolumeCurve;
use crate::toric::{primitive_box, ToricFano, ToricValuation};

pub const DEFAULT_RETRY_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub dim: usize,
    pub ray_count: RangeInclusive<usize>,
    pub coordinate_bound: i64,
}

/// Seeded corpus of toric Fano varieties: random primitive vectors are
/// kept when their hull contains the origin strictly inside and every
/// sample is a vertex. The same spec always yields the same corpus.
pub fn random_fano_corpus(spec: &CorpusSpec) -> Result<Vec<ToricFano>> {
    if spec.dim == 0 || spec.coordinate_bound < 1 || spec.ray_count.start() < &(spec.dim + 1) {
        return Err(Error::InvalidInput("corpus spec out of range".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.count);
    let mut attempts = 0;
    while out.len() < spec.count {
        if attempts >= DEFAULT_RETRY_BUDGET {
            return Err(Error::GenerationExhausted(attempts));
        }
        attempts += 1;
        let target = rng.gen_range(spec.ray_count.clone());
        let mut rays: Vec<IntVec> = Vec::with_capacity(target);
        while rays.len() < target {
            let v: IntVec = (0..spec.dim)
                .map(|_| rng.gen_range(-spec.coordinate_bound..=spec.coordinate_bound))
                .collect();
            if let Some(p) = primitivize(&v) {
                if !rays.contains(&p) {
                    rays.push(p);
                }
            }
        }
        let name = format!("random-{}-{}", spec.seed, out.len());
        match ToricFano::build_named(&name, rays) {
            Ok(x) => out.push(x),
            Err(Error::NotFano(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functional {
    AOverS,
    AOverTau,
    BetaOverJ,
    AOverSk(u64),
}

/// Exhaustive exact minimum of a functional over the primitive vectors with
/// `|u|_inf <= radius`; ties go to the lexicographically smallest vector.
pub fn sampled_infimum(x: &ToricFano, functional: Functional, radius: i64) -> Result<Witnessed> {
    if radius < 1 {
        return Err(Error::InvalidInput("radius must be at least 1".into()));
    }
    let slice = match functional {
        Functional::AOverSk(k) => Some(QuantizedSlice::new(x, k)?),
        _ => None,
    };
    let mut best: Option<Witnessed> = None;
    for u in primitive_box(x.dim(), radius) {
        let sc = scalars(x, &u);
        let value = match functional {
            Functional::AOverS => &sc.a / &sc.s,
            Functional::AOverTau => &sc.a / &sc.tau,
            Functional::BetaOverJ => (&sc.a - &sc.s) / (&sc.tau - &sc.s),
            Functional::AOverSk(_) => {
                let sk = slice.as_ref().expect("slice built").sk(x, &u);
                if sk == Rat::from_integer(0.into()) {
                    continue;
                }
                &sc.a / sk
            }
        };
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(Witnessed {
                value,
                witness: ToricValuation::new(u)?,
            });
        }
    }
    best.ok_or_else(|| Error::InvalidInput("empty search box".into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveIntegral {
    pub exact: Rat,
    pub numeric: f64,
    pub agrees: bool,
}

pub const NUMERIC_RELATIVE_TOLERANCE: f64 = 1e-9;

/// Exact integral of the curve plus an adaptive Simpson integral in `f64`
/// that must agree within `NUMERIC_RELATIVE_TOLERANCE`.
pub fn numeric_curve_integral(curve: &VolumeCurve) -> CurveIntegral {
    let exact = curve.integral();
    let mut numeric = 0.0;
    for piece in &curve.pieces {
        let (a, b) = (to_f64(&piece.lo), to_f64(&piece.hi));
        let f = |t: f64| piece.poly.eval_f64(t);
        let (fa, fm, fb) = (f(a), f((a + b) / 2.0), f(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let tol = 1e-12 * fa.abs().max(fm.abs()).max(fb.abs()) * (b - a);
        numeric += adaptive_simpson(&f, (a, fa), (b, fb), fm, whole, tol, 0);
    }
    let e = to_f64(&exact);
    let agrees = if e == 0.0 {
        numeric.abs() < NUMERIC_RELATIVE_TOLERANCE
    } else {
        ((numeric - e) / e).abs() < NUMERIC_RELATIVE_TOLERANCE
    };
    CurveIntegral {
        exact,
        numeric,
        agrees,
    }
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    (a, fa): (f64, f64),
    (b, fb): (f64, f64),
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = (a + b) / 2.0;
    let (fl, fr) = (f((a + m) / 2.0), f((m + b) / 2.0));
    let left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    let delta = left + right - whole;
    if depth >= 30 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adaptive_simpson(f, (a, fa), (m, fm), fl, left, tol / 2.0, depth + 1)
        + adaptive_simpson(f, (m, fm), (b, fb), fr, right, tol / 2.0, depth + 1)
}

/// A basis of `H^0(-kK_X)` obtained from the monomial basis by a seeded
/// permutation and a unit upper-triangular integer recombination: section
/// `i` is monomial `order[i]` plus nonzero multiples (in `[-3, 3]`) of a few
/// later monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomBasis {
    pub order: Vec<usize>,
    pub mixes: Vec<Vec<(usize, i64)>>,
}

pub const MAX_MIX_TERMS: usize = 4;

impl RandomBasis {
    pub fn identity(n: usize) -> Self {
        RandomBasis {
            order: (0..n).collect(),
            mixes: vec![Vec::new(); n],
        }
    }

    pub fn seeded(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let mixes = (0..n)
            .map(|i| {
                let later = n - i - 1;
                let terms = rng.gen_range(0..=MAX_MIX_TERMS.min(later));
                let mut picks: Vec<usize> = (i + 1..n).collect::<Vec<_>>();
                picks.shuffle(&mut rng);
                picks.truncate(terms);
                picks.sort_unstable();
                picks
                    .into_iter()
                    .map(|j| {
                        let c = loop {
                            let c = rng.gen_range(-3i64..=3);
                            if c != 0 {
                                break c;
                            }
                        };
                        (j, c)
                    })
                    .collect()
            })
            .collect();
        RandomBasis { order, mixes }
    }

    /// Vanishing of the basis-type divisor along a valuation, given each
    /// monomial's order. A section's order is the minimum over its support.
    pub fn divisor_vanishing(&self, orders: &[Rat], k: u64) -> Rat {
        let n = self.order.len();
        let mut total = Rat::from_integer(0.into());
        for i in 0..n {
            let mut ord = orders[self.order[i]].clone();
            for &(j, _) in &self.mixes[i] {
                let o = &orders[self.order[j]];
                if o < &ord {
                    ord = o.clone();
                }
            }
            total += ord;
        }
        total / (BigInt::from(k) * BigInt::from(n))
    }
}

pub fn random_basis_divisor_vanishing(x: &ToricFano, k: u64, v: &ToricValuation, seed: u64) -> Result<Rat> {
    let slice = QuantizedSlice::new(x, k)?;
    let basis = RandomBasis::seeded(slice.n_k(), seed);
    Ok(basis.divisor_vanishing(&slice.orders(x, v), k))
}

/// Input document reproducing `x`, with the offending direction in its name.
pub fn counterexample_document(x: &ToricFano, u: &[i64], what: &str) -> String {
    let doc = InputDocument::from_rays(
        format!("counterexample {what} at {u:?} for {}", x.name()),
        x.rays().to_vec(),
    );
    doc.to_json()
}

/// Runs every cross-check on one instance: box infima against the three
/// ray closed forms, curve integrals against `degree * S`, and seeded
/// random bases against the filtration-compatible bound at `k = index`.
pub fn cross_check(x: &ToricFano, radius: i64, seed: u64) -> Result<()> {
    let fail = |u: &[i64], what: String| {
        Err(Error::OracleMismatch(format!(
            "{what}\n{}",
            counterexample_document(x, u, "oracle mismatch")
        )))
    };
    for (name, closed, f) in [
        ("delta", delta(x), Functional::AOverS),
        ("alpha_bound", alpha_bound(x), Functional::AOverTau),
        ("uniform_margin", uniform_margin(x), Functional::BetaOverJ),
    ] {
        let sampled = sampled_infimum(x, f, radius)?;
        if sampled.value < closed.value {
            return fail(
                sampled.witness.as_slice(),
                format!(
                    "{name}: sampled {} undercuts closed form {}",
                    format_rat(&sampled.value),
                    format_rat(&closed.value)
                ),
            );
        }
    }
    for r in x.ray_valuations() {
        let p = crate::invariants::profile(x, &r)?;
        let ci = numeric_curve_integral(&p.curve);
        if !ci.agrees || ci.exact != x.degree() * &p.s {
            return fail(r.as_slice(), format!("curve integral {:?} vs degree*S", ci));
        }
        let k = x.cartier_index();
        let worst = worst_basis_vanishing(x, k, &r)?;
        for s in 0..8 {
            let got = random_basis_divisor_vanishing(x, k, &r, seed.wrapping_add(s))?;
            if got > worst.value {
                return fail(
                    r.as_slice(),
                    format!(
                        "random basis vanishing {} exceeds {}",
                        format_rat(&got),
                        format_rat(&worst.value)
                    ),
                );
            }
        }
    }
    Ok(())
}
