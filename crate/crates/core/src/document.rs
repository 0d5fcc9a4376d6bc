//! JSON input documents, the built-in catalog and the rendered reports.
//!
//! Rationals are written as `"p/q"` strings in lowest terms (`"p"` for
//! integers). Inputs also accept plain JSON integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{okounkov_barycenter_check, profile, verdict, StabilityReport, Witnessed};
use crate::quantized::{delta_k_on, QuantizedSlice};
use crate::rat::{format_rat, format_vec, int, parse_rat, to_f64, IntVec, Rat, RatVec};
use crate::ratgeom::Polytope;
use crate::toric::{ToricFano, ToricValuation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    pub fn to_rat(&self) -> Result<Rat> {
        match self {
            Number::Int(n) => Ok(int(*n)),
            Number::Text(s) => parse_rat(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<Vec<IntVec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope_vertices: Option<Vec<Vec<Number>>>,
}

impl InputDocument {
    pub fn from_rays(name: impl Into<String>, rays: Vec<IntVec>) -> Self {
        InputDocument {
            name: Some(name.into()),
            rays: Some(rays),
            polytope_vertices: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let doc: InputDocument =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        match (&doc.rays, &doc.polytope_vertices) {
            (Some(_), None) | (None, Some(_)) => Ok(doc),
            _ => Err(Error::InvalidInput(
                "exactly one of rays and polytope_vertices is required".into(),
            )),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn build(&self) -> Result<ToricFano> {
        let name = self.name.as_deref().unwrap_or("");
        match (&self.rays, &self.polytope_vertices) {
            (Some(rays), None) => {
                check_ragged(rays.iter().map(Vec::len))?;
                ToricFano::build_named(name, rays.clone())
            }
            (None, Some(verts)) => {
                check_ragged(verts.iter().map(Vec::len))?;
                let points = verts
                    .iter()
                    .map(|v| v.iter().map(Number::to_rat).collect::<Result<RatVec>>())
                    .collect::<Result<Vec<_>>>()?;
                let p = Polytope::convex_hull(&points)?;
                let x = ToricFano::build_named(name, rays_of_section_polytope(&p)?)?;
                if x.section_polytope() != &p {
                    return Err(Error::NotFano(
                        "polytope differs from the one its rays induce".into(),
                    ));
                }
                Ok(x)
            }
            _ => Err(Error::InvalidInput(
                "exactly one of rays and polytope_vertices is required".into(),
            )),
        }
    }
}

fn check_ragged(mut lens: impl Iterator<Item = usize>) -> Result<()> {
    let Some(first) = lens.next() else {
        return Err(Error::InvalidInput("no vectors given".into()));
    };
    if lens.any(|l| l != first) {
        return Err(Error::InvalidInput("vectors have different lengths".into()));
    }
    Ok(())
}

/// Facets of `P` must read `<m, v> >= -1` with `v` a primitive integer
/// vector; those `v` are the rays.
fn rays_of_section_polytope(p: &Polytope) -> Result<Vec<IntVec>> {
    let minus_one = int(-1);
    let mut rays = Vec::with_capacity(p.facets().len());
    for f in p.facets() {
        if f.offset != minus_one {
            return Err(Error::NotFano(format!(
                "facet with normal {:?} sits at level {}, not -1",
                f.normal.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                format_rat(&f.offset)
            )));
        }
        let v = f
            .normal
            .iter()
            .map(|c| i64::try_from(c).map_err(|_| Error::InvalidInput("normal overflows i64".into())))
            .collect::<Result<IntVec>>()?;
        rays.push(v);
    }
    rays.sort();
    Ok(rays)
}

pub const CATALOG: &[(&str, &[&[i64]])] = &[
    ("P1", &[&[1], &[-1]]),
    ("P2", &[&[1, 0], &[0, 1], &[-1, -1]]),
    ("P1xP1", &[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
    ("F1", &[&[1, 0], &[0, 1], &[-1, -1], &[1, 1]]),
    ("dP7", &[&[1, 0], &[0, 1], &[1, 1], &[-1, 0], &[-1, -1]]),
    ("dP6", &[&[1, 0], &[0, 1], &[1, 1], &[-1, 0], &[0, -1], &[-1, -1]]),
    ("P3", &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]]),
    ("P113", &[&[1, 0], &[0, 1], &[-1, -3]]),
];

pub fn catalog_names() -> Vec<&'static str> {
    CATALOG.iter().map(|(n, _)| *n).collect()
}

pub fn catalog_document(name: &str) -> Result<InputDocument> {
    CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(n, rays)| InputDocument::from_rays(*n, rays.iter().map(|r| r.to_vec()).collect()))
        .ok_or_else(|| Error::UnknownName(name.to_string()))
}

pub fn catalog_instance(name: &str) -> Result<ToricFano> {
    catalog_document(name)?.build()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessedDoc {
    pub value: String,
    pub witness: IntVec,
}

impl From<&Witnessed> for WitnessedDoc {
    fn from(w: &Witnessed) -> Self {
        WitnessedDoc {
            value: format_rat(&w.value),
            witness: w.witness.as_slice().to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayRow {
    pub ray: IntVec,
    #[serde(rename = "A")]
    pub a: String,
    pub tau: String,
    #[serde(rename = "S")]
    pub s: String,
    pub beta: String,
    pub j: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub name: String,
    pub dim: usize,
    pub degree: String,
    pub cartier_index: u64,
    pub barycenter: Vec<String>,
    pub delta: WitnessedDoc,
    pub alpha_bound: WitnessedDoc,
    pub uniform_margin: WitnessedDoc,
    pub uniform_epsilon: String,
    pub verdict: String,
    pub assumption_note: String,
    pub per_ray: Vec<RayRow>,
    pub search_radius: i64,
}

impl ReportDocument {
    pub fn new(x: &ToricFano, r: &StabilityReport) -> Self {
        ReportDocument {
            name: x.name().to_string(),
            dim: x.dim(),
            degree: format_rat(x.degree()),
            cartier_index: x.cartier_index(),
            barycenter: format_vec(x.barycenter()),
            delta: (&r.delta).into(),
            alpha_bound: (&r.alpha_bound).into(),
            uniform_margin: (&r.uniform_margin).into(),
            uniform_epsilon: format_rat(&r.uniform_epsilon),
            verdict: r.verdict.to_string(),
            assumption_note: r.assumption_note.clone(),
            per_ray: r
                .per_ray_profiles
                .iter()
                .map(|p| RayRow {
                    ray: p.u.as_slice().to_vec(),
                    a: format_rat(&p.a),
                    tau: format_rat(&p.tau),
                    s: format_rat(&p.s),
                    beta: format_rat(&p.beta),
                    j: format_rat(&p.j),
                })
                .collect(),
            search_radius: r.search_radius,
        }
    }

    pub fn compute(x: &ToricFano, radius: i64) -> Result<Self> {
        Ok(Self::new(x, &verdict(x, radius)?))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Long format: one `field,ray,value` row per datum.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |field: &str, ray: &str, value: &str| {
            w.write_record([field, ray, value]).expect("in-memory csv");
        };
        row("field", "ray", "value");
        row("name", "", &self.name);
        row("dim", "", &self.dim.to_string());
        row("degree", "", &self.degree);
        row("cartier_index", "", &self.cartier_index.to_string());
        row("barycenter", "", &self.barycenter.join(","));
        for (k, v) in [
            ("delta", &self.delta),
            ("alpha_bound", &self.alpha_bound),
            ("uniform_margin", &self.uniform_margin),
        ] {
            row(k, &join(&v.witness), &v.value);
        }
        row("uniform_epsilon", "", &self.uniform_epsilon);
        row("verdict", "", &self.verdict);
        row("assumption_note", "", &self.assumption_note);
        row("search_radius", "", &self.search_radius.to_string());
        for r in &self.per_ray {
            let ray = join(&r.ray);
            for (k, v) in [("A", &r.a), ("tau", &r.tau), ("S", &r.s), ("beta", &r.beta), ("j", &r.j)] {
                row(k, &ray, v);
            }
        }
        finish_csv(w)
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write;
        let mut s = String::new();
        let name = if self.name.is_empty() { "X" } else { &self.name };
        let _ = writeln!(s, "{name}: dim {}, degree {}, Cartier index {}", self.dim, self.degree, self.cartier_index);
        let _ = writeln!(s, "barycenter       ({})", self.barycenter.join(", "));
        for (k, v) in [
            ("delta", &self.delta),
            ("alpha_bound", &self.alpha_bound),
            ("uniform_margin", &self.uniform_margin),
        ] {
            let _ = writeln!(s, "{k:<16} {} at ({})", v.value, join(&v.witness));
        }
        let _ = writeln!(s, "uniform_epsilon  {}", self.uniform_epsilon);
        let _ = writeln!(s, "verdict          {}", self.verdict);
        let _ = writeln!(s, "search_radius    {}", self.search_radius);
        let _ = writeln!(s, "note: {}", self.assumption_note);
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10}", "ray", "A", "tau", "S", "beta", "j");
        for r in &self.per_ray {
            let _ = writeln!(
                s,
                "{:<14} {:>10} {:>10} {:>10} {:>10} {:>10}",
                format!("({})", join(&r.ray)),
                r.a,
                r.tau,
                r.s,
                r.beta,
                r.j
            );
        }
        s
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaKRow {
    pub k: u64,
    pub n_k: usize,
    /// `S_k` at the witness.
    pub s_k: Rat,
    pub delta_k: Rat,
    pub witness: IntVec,
    /// `delta - delta_k`.
    pub gap: Rat,
    pub warning: Option<String>,
}

pub fn deltak_table(x: &ToricFano, ks: &[u64], radius: i64) -> Result<Vec<DeltaKRow>> {
    if ks.is_empty() {
        return Err(Error::InvalidInput("k list is empty".into()));
    }
    if ks.contains(&0) {
        return Err(Error::InvalidInput("k values must be positive".into()));
    }
    let delta = crate::invariants::delta(x).value;
    ks.iter()
        .map(|&k| {
            let slice = QuantizedSlice::new(x, k)?;
            let w = delta_k_on(x, &slice, radius)?;
            Ok(DeltaKRow {
                k,
                n_k: slice.n_k(),
                s_k: slice.sk(x, w.witness.as_slice()),
                gap: &delta - &w.value,
                delta_k: w.value,
                witness: w.witness.into_vec(),
                warning: x.index_warning(k).map(|w| {
                    format!("Cartier index {} does not divide k = {}", w.cartier_index, w.k)
                }),
            })
        })
        .collect()
}

pub fn deltak_csv(rows: &[DeltaKRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "N_k", "S_k", "delta_k", "witness", "gap", "warning"])
        .expect("in-memory csv");
    for r in rows {
        w.write_record([
            r.k.to_string(),
            r.n_k.to_string(),
            format_rat(&r.s_k),
            format_rat(&r.delta_k),
            join(&r.witness),
            format_rat(&r.gap),
            r.warning.clone().unwrap_or_default(),
        ])
        .expect("in-memory csv");
    }
    finish_csv(w)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceDoc {
    pub lo: String,
    pub hi: String,
    /// Coefficients of the polynomial in `x`, constant term first.
    pub coefficients: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OkounkovDoc {
    pub eps: String,
    pub b1: String,
    pub hammer_lower: String,
    pub hammer_upper: String,
    pub slice_ratio: String,
    pub slice_identity_ok: bool,
}

/// `x -> vol(-K_X - xF)` on `[0, tau]` along one valuation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveDocument {
    pub name: String,
    pub u: IntVec,
    #[serde(rename = "A")]
    pub a: String,
    pub tau: String,
    #[serde(rename = "S")]
    pub s: String,
    pub breakpoints: Vec<String>,
    pub pieces: Vec<PieceDoc>,
    pub integral: String,
    pub okounkov: OkounkovDoc,
}

impl CurveDocument {
    pub fn compute(x: &ToricFano, u: &[i64], eps: &Rat) -> Result<(Self, crate::ratgeom::VolumeCurve)> {
        if u.iter().all(|&c| c == 0) {
            return Err(Error::ZeroDirection);
        }
        if u.len() != x.dim() {
            return Err(Error::InvalidInput(format!(
                "direction has length {}, expected {}",
                u.len(),
                x.dim()
            )));
        }
        let v = ToricValuation::new(u.to_vec())?;
        let p = profile(x, &v)?;
        let ok = okounkov_barycenter_check(x, &v, eps)?;
        let doc = CurveDocument {
            name: x.name().to_string(),
            u: u.to_vec(),
            a: format_rat(&p.a),
            tau: format_rat(&p.tau),
            s: format_rat(&p.s),
            breakpoints: format_vec(&p.curve.breakpoints()),
            pieces: p
                .curve
                .pieces
                .iter()
                .map(|c| PieceDoc {
                    lo: format_rat(&c.lo),
                    hi: format_rat(&c.hi),
                    coefficients: format_vec(c.poly.coeffs()),
                })
                .collect(),
            integral: format_rat(&p.curve.integral()),
            okounkov: OkounkovDoc {
                eps: format_rat(eps),
                b1: format_rat(&ok.b1),
                hammer_lower: format_rat(&ok.hammer_lower),
                hammer_upper: format_rat(&ok.hammer_upper),
                slice_ratio: format_rat(&ok.slice_ratio),
                slice_identity_ok: ok.slice_identity_ok,
            },
        };
        Ok((doc, p.curve))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("curve serializes");
        s.push('\n');
        s
    }
}

/// Floating-point samples of the curve for plotting, `samples + 1`
/// equally spaced points over `[lo, hi]` of the support.
pub fn curve_samples_csv(curve: &crate::ratgeom::VolumeCurve, samples: usize) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x_float", "vol_float"]).expect("in-memory csv");
    if let (Some(first), Some(last)) = (curve.pieces.first(), curve.pieces.last()) {
        let steps = samples.max(1);
        let width = &last.hi - &first.lo;
        for i in 0..=steps {
            let x = &first.lo + &width * Rat::new(i.into(), steps.into());
            w.write_record([format!("{:.12}", to_f64(&x)), format!("{:.12}", to_f64(&curve.eval(&x)))])
                .expect("in-memory csv");
        }
    }
    finish_csv(w)
}
