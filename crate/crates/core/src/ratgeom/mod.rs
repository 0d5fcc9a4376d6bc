//! Exact rational convex geometry: hulls, polar duals, triangulations,
//! volumes, barycenters, lattice points and slice-volume curves.
//!
//! A [`Polytope`] always carries both representations. Facets are stored as
//! `<normal, m> >= offset` with a primitive integer inward normal and a
//! rational offset; normals are never rescaled to unit length.

mod curve;
mod hull;
mod lattice;
pub(crate) mod linalg;
mod poly;
mod triangulate;

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{dot_int, Rat, RatVec};

pub use curve::{CurvePiece, VolumeCurve};
pub use lattice::DEFAULT_LATTICE_CAP;
pub use poly::Poly;
pub use triangulate::Triangulation;

pub const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
}

impl Facet {
    pub fn normal_rat(&self) -> RatVec {
        self.normal.iter().map(|x| Rat::from_integer(x.clone())).collect()
    }

    /// `<normal, p> - offset`; nonnegative exactly on the inner side.
    pub fn slack(&self, p: &[Rat]) -> Rat {
        let mut acc = -self.offset.clone();
        for (a, x) in self.normal.iter().zip(p) {
            if !a.is_zero() {
                acc += x * a;
            }
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<RatVec>,
    facets: Vec<Facet>,
    incidence: Vec<Vec<usize>>,
    triangulation: OnceLock<Triangulation>,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Eq for Polytope {}

impl Polytope {
    /// Convex hull of a finite point set in dimension at most four.
    pub fn convex_hull(points: &[RatVec]) -> Result<Polytope> {
        hull::convex_hull(points)
    }

    pub(crate) fn from_parts(dim: usize, vertices: Vec<RatVec>, facets: Vec<Facet>) -> Result<Polytope> {
        let incidence: Vec<Vec<usize>> = facets
            .iter()
            .map(|f| {
                (0..vertices.len())
                    .filter(|&i| f.slack(&vertices[i]).is_zero())
                    .collect()
            })
            .collect();
        let p = Polytope {
            dim,
            vertices,
            facets,
            incidence,
            triangulation: OnceLock::new(),
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        for v in &self.vertices {
            if self.facets.iter().any(|f| f.slack(v).is_negative()) {
                return Err(Error::InvalidInput(
                    "vertex violates a facet inequality".into(),
                ));
            }
        }
        for inc in &self.incidence {
            let pts: Vec<&RatVec> = inc.iter().map(|&i| &self.vertices[i]).collect();
            if linalg::affine_basis(&pts).len() != self.dim {
                return Err(Error::InvalidInput(
                    "facet does not support dim affinely independent vertices".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertices, deduplicated and sorted lexicographically.
    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Indices of the vertices lying on facet `i`.
    pub fn facet_vertices(&self, i: usize) -> &[usize] {
        &self.incidence[i]
    }

    pub fn contains(&self, p: &[Rat]) -> bool {
        self.facets.iter().all(|f| !f.slack(p).is_negative())
    }

    /// `max_P <., u>`.
    pub fn support_value(&self, u: &[i64]) -> Result<Rat> {
        self.check_direction(u)?;
        Ok(self
            .vertices
            .iter()
            .map(|v| dot_int(v, u))
            .max()
            .expect("polytope has vertices"))
    }

    /// `min_P <., u>`.
    pub fn min_value(&self, u: &[i64]) -> Result<Rat> {
        self.check_direction(u)?;
        Ok(self
            .vertices
            .iter()
            .map(|v| dot_int(v, u))
            .min()
            .expect("polytope has vertices"))
    }

    pub(crate) fn check_direction(&self, u: &[i64]) -> Result<()> {
        if u.len() != self.dim {
            return Err(Error::InvalidInput(format!(
                "direction has length {}, expected {}",
                u.len(),
                self.dim
            )));
        }
        if u.iter().all(|&x| x == 0) {
            return Err(Error::ZeroDirection);
        }
        Ok(())
    }

    /// `{m : <m, v> >= -1 for all v in self}`, i.e. the negated polar.
    pub fn polar_dual_negated(&self) -> Result<Polytope> {
        if self.facets.iter().any(|f| !f.offset.is_negative()) {
            return Err(Error::OriginNotInterior);
        }
        // facet <a, x> >= c with c < 0 gives the vertex a / |c|
        let pts: Vec<RatVec> = self
            .facets
            .iter()
            .map(|f| {
                let s = -f.offset.clone();
                f.normal.iter().map(|a| Rat::from_integer(a.clone()) / &s).collect()
            })
            .collect();
        Polytope::convex_hull(&pts)
    }

    /// The part of the polytope where `<m, u> >= level`.
    pub fn clip_above(&self, u: &[i64], level: &Rat) -> Result<Polytope> {
        self.check_direction(u)?;
        let heights: Vec<Rat> = self.vertices.iter().map(|v| dot_int(v, u)).collect();
        let mut pts: Vec<RatVec> = Vec::new();
        for (v, h) in self.vertices.iter().zip(&heights) {
            if h >= level {
                pts.push(v.clone());
            }
        }
        for (a, ha) in self.vertices.iter().zip(&heights) {
            if ha <= level {
                continue;
            }
            for (b, hb) in self.vertices.iter().zip(&heights) {
                if hb >= level {
                    continue;
                }
                let t = (ha - level) / (ha - hb);
                pts.push(a.iter().zip(b).map(|(x, y)| x + &t * (y - x)).collect());
            }
        }
        Polytope::convex_hull(&pts)
    }

    /// Barycenter coordinate along `u`, offset by `shift`.
    pub fn barycenter_along(&self, u: &[i64], shift: &Rat) -> Rat {
        let (_, b) = self.volume_barycenter();
        dot_int(&b, u) + shift
    }

    pub fn is_vertex(&self, p: &[Rat]) -> bool {
        self.vertices.binary_search_by(|v| v.as_slice().cmp(p)).is_ok()
    }
}
