//! Pulling triangulation: each face is coned from its lexicographically
//! smallest vertex over the facets of that face not containing it.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;

use super::linalg::{abs_det, affine_basis};
use super::Polytope;
use crate::rat::{factorial, sub, Rat, RatVec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    /// Vertex indices of each full-dimensional simplex.
    pub simplices: Vec<Vec<usize>>,
    /// `n! * vol` of each simplex, i.e. `|det|` of its edge matrix.
    pub normalized_volumes: Vec<Rat>,
}

impl Polytope {
    /// Triangulation pulled from the first (lexicographically smallest)
    /// vertex. Cached.
    pub fn triangulation(&self) -> &Triangulation {
        self.triangulation.get_or_init(|| self.triangulation_from(0))
    }

    /// Triangulation whose top-level apex is vertex `apex`; lower-dimensional
    /// faces are still pulled from their smallest vertex.
    pub fn triangulation_from(&self, apex: usize) -> Triangulation {
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        let mut simplices = Vec::new();
        self.pull(&all, self.dim, Some(apex), &mut simplices);
        let normalized_volumes = simplices
            .iter()
            .map(|s: &Vec<usize>| {
                let v0 = &self.vertices[s[0]];
                abs_det(s[1..].iter().map(|&i| sub(&self.vertices[i], v0)).collect())
            })
            .collect();
        Triangulation {
            simplices,
            normalized_volumes,
        }
    }

    fn pull(&self, face: &[usize], dim: usize, apex: Option<usize>, out: &mut Vec<Vec<usize>>) {
        if dim == 0 {
            out.push(vec![face[0]]);
            return;
        }
        let apex = apex.unwrap_or(face[0]);
        let mut subfaces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for inc in &self.incidence {
            let s: Vec<usize> = face.iter().copied().filter(|i| inc.contains(i)).collect();
            if s.len() < dim || s.len() == face.len() {
                continue;
            }
            let pts: Vec<&RatVec> = s.iter().map(|&i| &self.vertices[i]).collect();
            if affine_basis(&pts).len() == dim {
                subfaces.insert(s);
            }
        }
        for sf in subfaces {
            if sf.contains(&apex) {
                continue;
            }
            let mut sub_simplices = Vec::new();
            self.pull(&sf, dim - 1, None, &mut sub_simplices);
            for mut s in sub_simplices {
                s.insert(0, apex);
                out.push(s);
            }
        }
    }

    /// Exact volume and barycenter from the cached triangulation.
    pub fn volume_barycenter(&self) -> (Rat, RatVec) {
        self.volume_barycenter_with(self.triangulation())
    }

    pub fn volume_barycenter_with(&self, tri: &Triangulation) -> (Rat, RatVec) {
        let n = self.dim;
        let mut total = Rat::zero();
        let mut moment = vec![Rat::zero(); n];
        for (s, w) in tri.simplices.iter().zip(&tri.normalized_volumes) {
            total += w;
            for (c, mc) in moment.iter_mut().enumerate() {
                let sum: Rat = s.iter().map(|&i| self.vertices[i][c].clone()).sum();
                *mc += w * sum / BigInt::from(n + 1);
            }
        }
        let bary = moment.into_iter().map(|m| m / &total).collect();
        (total / factorial(n), bary)
    }
}
