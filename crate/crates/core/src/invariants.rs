//! Large-k invariants of a toric Q-Fano variety along torus-invariant
//! valuations, and the stability verdict built from them.
//!
//! For a valuation `u`:
//!
//! * `A(u)` is the gauge of `Q`,
//! * `tau(u) = A(u) + max_P <., u>`,
//! * `S(u) = int vol(-K_X - xF) dx / (-K_X)^n = A(u) + <b, u>`,
//! * `beta(u) = (-K_X)^n (A - S)` and `j(u) = (-K_X)^n (tau - S)`.
//!
//! A ratio of two functions that are linear on a cone, with positive
//! denominator, is minimized at an extreme ray of the cone. `A` and `S` are
//! linear on the cones over faces of `Q`, so `delta` is a minimum over the
//! rays. `tau(u) = A(u) + A(-u)` is not, but `A/tau` is the infimum over
//! sections `m` of `A / (A + <m,u>)`, each of which is minimized at a ray;
//! swapping the two infima gives the ray formula for `alpha_bound`. For
//! `beta/j = -<b,u> / (A(-u) - <b,u>)` the denominator is linear on the
//! cones of the negated fan, so `uniform_margin` is a minimum over the
//! negated rays `-v_j`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::rat::{format_rat, int, Rat};
use crate::ratgeom::linalg::{solve, Echelon};
use crate::ratgeom::{Polytope, VolumeCurve};
use crate::toric::{primitive_box, ToricFano, ToricValuation};

pub const ASSUMPTION_NOTE: &str = "Only torus-invariant valuations are searched. A NotKSemistable verdict is unconditional: its witness divisor has beta < 0. Positive verdicts assume that torus-invariant divisors compute delta for toric varieties.";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationProfile {
    pub u: ToricValuation,
    /// Log discrepancy `A_X(F)`.
    pub a: Rat,
    /// Pseudo-effective threshold.
    pub tau: Rat,
    /// Expected vanishing order.
    pub s: Rat,
    pub beta: Rat,
    pub j: Rat,
    /// `x -> vol(-K_X - xF)`.
    pub curve: VolumeCurve,
}

/// An extremal value together with the valuation attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witnessed {
    pub value: Rat,
    pub witness: ToricValuation,
}

/// `A`, `tau` and `S` without the volume curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalars {
    pub a: Rat,
    pub tau: Rat,
    pub s: Rat,
}

pub fn scalars(x: &ToricFano, u: &[i64]) -> Scalars {
    let a = x.gauge(u);
    Scalars {
        tau: &a + x.support(u),
        s: &a + x.barycenter_dot(u),
        a,
    }
}

pub fn profile(x: &ToricFano, v: &ToricValuation) -> Result<ValuationProfile> {
    let u = v.as_slice();
    if u.len() != x.dim() {
        return Err(Error::InvalidInput(format!(
            "valuation has length {}, expected {}",
            u.len(),
            x.dim()
        )));
    }
    let Scalars { a, tau, s } = scalars(x, u);
    let curve = x.section_polytope().slice_volume_curve(u, &-a.clone())?;
    let degree = x.degree();
    let beta = degree * (&a - &s);
    let beta_from_curve = degree * &a - curve.integral();
    if beta != beta_from_curve {
        return Err(Error::OracleMismatch(format!(
            "beta along {v}: barycenter gives {}, volume curve gives {}",
            format_rat(&beta),
            format_rat(&beta_from_curve)
        )));
    }
    let j = degree * (&tau - &s);
    Ok(ValuationProfile {
        u: v.clone(),
        a,
        tau,
        s,
        beta,
        j,
        curve,
    })
}

/// Minimum of `f` over the rays; ties go to the lexicographically smallest
/// ray.
fn min_over_rays(x: &ToricFano, f: impl Fn(&[i64]) -> Rat) -> Witnessed {
    min_over(x.ray_valuations(), f)
}

fn min_over(mut candidates: Vec<ToricValuation>, f: impl Fn(&[i64]) -> Rat) -> Witnessed {
    candidates.sort();
    let mut best: Option<Witnessed> = None;
    for r in candidates {
        let value = f(r.as_slice());
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(Witnessed { value, witness: r });
        }
    }
    best.expect("at least one ray")
}

/// `inf A/S` over torus-invariant valuations, `1 / (1 + max_j <b, v_j>)`.
pub fn delta(x: &ToricFano) -> Witnessed {
    min_over_rays(x, |r| Rat::one() / (Rat::one() + x.barycenter_dot(r)))
}

/// `inf A/tau` over torus-invariant valuations. An upper bound for the
/// alpha invariant.
pub fn alpha_bound(x: &ToricFano) -> Witnessed {
    min_over_rays(x, |r| Rat::one() / (Rat::one() + x.support(r)))
}

/// `inf beta/j` over torus-invariant valuations, attained at a negated ray
/// `-v_j` where it equals `<b,v_j> / (1 + <b,v_j>)`. Positive exactly when
/// the uniform criterion `beta >= c j` holds with some `c > 0`.
pub fn uniform_margin(x: &ToricFano) -> Witnessed {
    let negated = x
        .rays()
        .iter()
        .map(|r| ToricValuation::new(r.iter().map(|c| -c).collect()).expect("negated ray is primitive"))
        .collect();
    min_over(negated, |u| beta_over_j(x, u))
}

/// `beta(u) / j(u)`.
pub fn beta_over_j(x: &ToricFano, u: &[i64]) -> Rat {
    let b = x.barycenter_dot(u);
    -b.clone() / (x.support(u) - b)
}

/// Largest `eps` with `(1 - eps) A (-K_X)^n >= int vol(-K_X - xF) dx` for
/// every torus-invariant valuation, i.e. `1 - 1/delta`.
pub fn uniform_epsilon(x: &ToricFano) -> Rat {
    Rat::one() - Rat::one() / delta(x).value
}

/// A torus-invariant effective Q-divisor `sum_j c_j D_j`, one coefficient
/// per ray in the order the rays were given.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantDivisor {
    coefficients: Vec<Rat>,
}

impl InvariantDivisor {
    pub fn new(coefficients: Vec<Rat>) -> Result<Self> {
        if coefficients.iter().any(|c| c.is_negative()) {
            return Err(Error::InvalidInput("divisor coefficients must be nonnegative".into()));
        }
        Ok(InvariantDivisor { coefficients })
    }

    /// `(1/k) div(chi^m) + sum D_j`, the divisor of the monomial section
    /// `m in kP` scaled into the class of `-K_X`.
    pub fn from_monomial(x: &ToricFano, k: u64, m: &[i64]) -> Result<Self> {
        let kk = Rat::from_integer(BigInt::from(k));
        let coefficients = x
            .rays()
            .iter()
            .map(|r| {
                let mv: i64 = r.iter().zip(m).map(|(a, b)| a * b).sum();
                (Rat::from_integer(mv.into()) + &kk) / &kk
            })
            .collect();
        Self::new(coefficients)
    }

    pub fn coefficients(&self) -> &[Rat] {
        &self.coefficients
    }
}

/// Log canonical threshold of `(X, D)`: `min 1/c_j` over positive `c_j`.
pub fn lct_invariant(x: &ToricFano, d: &InvariantDivisor) -> Result<Rat> {
    if d.coefficients.len() != x.rays().len() {
        return Err(Error::InvalidInput(format!(
            "divisor has {} coefficients for {} rays",
            d.coefficients.len(),
            x.rays().len()
        )));
    }
    d.coefficients
        .iter()
        .filter(|c| c.is_positive())
        .map(|c| Rat::one() / c)
        .min()
        .ok_or(Error::ZeroDivisor)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OkounkovCheck {
    /// First barycenter coordinate of the sliced body.
    pub b1: Rat,
    /// `(tau - eps) n / (n + 1)`.
    pub hammer_upper: Rat,
    /// `(tau - eps) / (n + 1)`.
    pub hammer_lower: Rat,
    /// `int_eps^tau vol(-K_X - xF) dx / vol(-K_X - eps F)`.
    pub slice_ratio: Rat,
    pub slice_identity_ok: bool,
    pub body: Polytope,
}

/// Builds `{m in P : <m,u> + A(u) >= eps}` with first coordinate
/// `<m,u> + A(u) - eps` and compares its barycenter with the ratio of
/// volume-curve integrals.
pub fn okounkov_barycenter_check(
    x: &ToricFano,
    v: &ToricValuation,
    eps: &Rat,
) -> Result<OkounkovCheck> {
    let prof = profile(x, v)?;
    if eps.is_negative() || eps >= &prof.tau {
        return Err(Error::EpsTooLarge {
            eps: format_rat(eps),
            tau: format_rat(&prof.tau),
        });
    }
    let u = v.as_slice();
    let body = x.section_polytope().clip_above(u, &(eps - &prof.a))?;
    let b1 = body.barycenter_along(u, &(&prof.a - eps));
    let slice_ratio = prof.curve.integral_from(eps) / prof.curve.eval(eps);
    let n = x.dim();
    let width = &prof.tau - eps;
    let hammer_upper = &width * BigInt::from(n) / BigInt::from(n + 1);
    let hammer_lower = &width / BigInt::from(n + 1);
    Ok(OkounkovCheck {
        slice_identity_ok: slice_ratio == b1,
        b1,
        hammer_upper,
        hammer_lower,
        slice_ratio,
        body,
    })
}

/// For `D = (1/k) div(s)` with `s in H^0(-kK_X)` torus-invariant, checks
/// `lct(X; D) >= 1/(n+1)`.
pub fn alpha_k2_check(x: &ToricFano, k: u64, d: &InvariantDivisor) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let m = monomial_of(x, d)?;
    let kk = Rat::from_integer(BigInt::from(k));
    if m.iter().any(|c| !(c * &kk).is_integer()) {
        return Err(Error::DegreeMismatch(format!(
            "k * m is not integral for k = {k}"
        )));
    }
    let lct = lct_invariant(x, d)?;
    Ok(lct >= Rat::new(BigInt::one(), BigInt::from(x.dim() + 1)))
}

/// Solves `c_j = 1 + <m, v_j>` for `m`.
fn monomial_of(x: &ToricFano, d: &InvariantDivisor) -> Result<Vec<Rat>> {
    let n = x.dim();
    if d.coefficients.len() != x.rays().len() {
        return Err(Error::DegreeMismatch("coefficient count differs from ray count".into()));
    }
    let mut ech = Echelon::new();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (r, c) in x.rays().iter().zip(&d.coefficients) {
        let row: Vec<Rat> = r.iter().map(|&a| int(a)).collect();
        if ech.insert(&row) {
            rows.push(row);
            rhs.push(c - Rat::one());
        }
        if rows.len() == n {
            break;
        }
    }
    let m = solve(rows, rhs).ok_or_else(|| Error::DegreeMismatch("rays do not span".into()))?;
    for (r, c) in x.rays().iter().zip(&d.coefficients) {
        let val = Rat::one() + crate::rat::dot_int(&m, r);
        if &val != c {
            return Err(Error::DegreeMismatch(
                "divisor is not linearly equivalent to -K_X".into(),
            ));
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NotKSemistable,
    KSemistableEquivariant,
    UniformlyKStableEquivariant,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::NotKSemistable => "NotKSemistable",
            Verdict::KSemistableEquivariant => "KSemistableEquivariant",
            Verdict::UniformlyKStableEquivariant => "UniformlyKStableEquivariant",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityReport {
    pub delta: Witnessed,
    pub alpha_bound: Witnessed,
    pub uniform_margin: Witnessed,
    pub uniform_epsilon: Rat,
    pub verdict: Verdict,
    pub assumption_note: String,
    pub per_ray_profiles: Vec<ValuationProfile>,
    pub search_radius: i64,
    pub sampled_directions: usize,
}

/// Assembles the report. Every primitive `u` with `|u|_inf <= radius` is
/// evaluated as a cross-check; a sampled value below a ray minimum is
/// reported as [`Error::OracleMismatch`].
pub fn verdict(x: &ToricFano, radius: i64) -> Result<StabilityReport> {
    if radius < 1 {
        return Err(Error::InvalidInput("search radius must be at least 1".into()));
    }
    let d = delta(x);
    let al = alpha_bound(x);
    let um = uniform_margin(x);

    let boxed = primitive_box(x.dim(), radius);
    for u in &boxed {
        let sc = scalars(x, u);
        let checks = [
            ("A/S", &sc.a / &sc.s, &d.value),
            ("A/tau", &sc.a / &sc.tau, &al.value),
            ("beta/j", (&sc.a - &sc.s) / (&sc.tau - &sc.s), &um.value),
        ];
        for (name, sampled, closed) in checks {
            if &sampled < closed {
                return Err(Error::OracleMismatch(format!(
                    "{name} at {u:?} is {} below the ray minimum {}",
                    format_rat(&sampled),
                    format_rat(closed)
                )));
            }
        }
    }

    let per_ray_profiles = x
        .ray_valuations()
        .iter()
        .map(|r| profile(x, r))
        .collect::<Result<Vec<_>>>()?;
    let verdict = if d.value < Rat::one() {
        Verdict::NotKSemistable
    } else if um.value.is_positive() {
        Verdict::UniformlyKStableEquivariant
    } else {
        Verdict::KSemistableEquivariant
    };
    Ok(StabilityReport {
        uniform_epsilon: Rat::one() - Rat::one() / &d.value,
        delta: d,
        alpha_bound: al,
        uniform_margin: um,
        verdict,
        assumption_note: ASSUMPTION_NOTE.to_string(),
        per_ray_profiles,
        search_radius: radius,
        sampled_directions: boxed.len(),
    })
}
