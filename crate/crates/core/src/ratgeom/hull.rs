//! Beneath-beyond convex hull with exact arithmetic.
//!
//! Points are inserted in lexicographic order after an initial simplex.
//! Each facet keeps the set of inserted points lying on its hyperplane, so
//! two facets are adjacent exactly when the shared points span an affine
//! space of dimension `n - 2`. Non-simplicial facets need no special care:
//! a new hyperplane through a horizon ridge and a coplanar facet coincide
//! and the duplicate is dropped.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::linalg::{affine_basis, null_vector, rank, Echelon};
use super::{Facet, Polytope, MAX_DIM};
use crate::error::{Error, Result};
use crate::rat::{primitive_integer_direction, sub, Rat, RatVec};

struct WorkFacet {
    facet: Facet,
    points: Vec<usize>,
}

pub(super) fn convex_hull(input: &[RatVec]) -> Result<Polytope> {
    let dim = input.first().map_or(0, |p| p.len());
    if dim == 0 || dim > MAX_DIM {
        return Err(Error::DimensionCap(dim));
    }
    if input.iter().any(|p| p.len() != dim) {
        return Err(Error::InvalidInput("points of mixed dimension".into()));
    }
    let mut pts: Vec<RatVec> = input.to_vec();
    pts.sort();
    pts.dedup();

    let simplex = initial_simplex(&pts, dim)?;
    let interior: RatVec = (0..dim)
        .map(|c| {
            simplex.iter().map(|&i| pts[i][c].clone()).sum::<Rat>()
                / BigInt::from(simplex.len())
        })
        .collect();

    let mut facets: Vec<WorkFacet> = Vec::new();
    for skip in 0..simplex.len() {
        let on: Vec<usize> = simplex
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != skip)
            .map(|(_, &i)| i)
            .collect();
        let facet = hyperplane(&pts, &on, &interior);
        facets.push(WorkFacet { facet, points: on });
    }

    let mut inserted: Vec<usize> = simplex.clone();
    for p in 0..pts.len() {
        if simplex.contains(&p) {
            continue;
        }
        let slacks: Vec<Rat> = facets.iter().map(|f| f.facet.slack(&pts[p])).collect();
        let visible: Vec<usize> = (0..facets.len())
            .filter(|&i| slacks[i].is_negative())
            .collect();
        inserted.push(p);
        if visible.is_empty() {
            for (f, s) in facets.iter_mut().zip(&slacks) {
                if s.is_zero() {
                    f.points.push(p);
                }
            }
            continue;
        }

        let mut fresh: BTreeSet<Facet> = BTreeSet::new();
        for &v in &visible {
            for (g, s) in facets.iter().zip(&slacks) {
                if !s.is_positive() {
                    continue;
                }
                let ridge: Vec<usize> = facets[v]
                    .points
                    .iter()
                    .copied()
                    .filter(|i| g.points.contains(i))
                    .collect();
                let ridge_pts: Vec<&RatVec> = ridge.iter().map(|&i| &pts[i]).collect();
                let basis = affine_basis(&ridge_pts);
                if basis.len() + 1 != dim {
                    continue;
                }
                let mut on: Vec<usize> = basis.iter().map(|&b| ridge[b]).collect();
                on.push(p);
                fresh.insert(hyperplane(&pts, &on, &interior));
            }
        }

        let mut next: Vec<WorkFacet> = Vec::with_capacity(facets.len() + fresh.len());
        for (mut f, s) in facets.into_iter().zip(&slacks) {
            if s.is_negative() {
                continue;
            }
            if s.is_zero() {
                f.points.push(p);
            }
            next.push(f);
        }
        for facet in fresh {
            let on: Vec<usize> = inserted
                .iter()
                .copied()
                .filter(|&i| facet.slack(&pts[i]).is_zero())
                .collect();
            next.push(WorkFacet { facet, points: on });
        }
        facets = next;
    }

    // A point is a vertex iff the normals of its facets have full rank.
    let vertex_ids: Vec<usize> = inserted
        .iter()
        .copied()
        .filter(|&i| {
            let normals: Vec<RatVec> = facets
                .iter()
                .filter(|f| f.points.contains(&i))
                .map(|f| f.facet.normal_rat())
                .collect();
            rank(&normals) == dim
        })
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let vertices: Vec<RatVec> = vertex_ids.iter().map(|&i| pts[i].clone()).collect();
    let mut out: Vec<Facet> = facets.into_iter().map(|f| f.facet).collect();
    out.sort();
    out.dedup();
    Polytope::from_parts(dim, vertices, out)
}

fn initial_simplex(pts: &[RatVec], dim: usize) -> Result<Vec<usize>> {
    let mut simplex = vec![0];
    let mut ech = Echelon::new();
    for (i, p) in pts.iter().enumerate().skip(1) {
        if ech.insert(&sub(p, &pts[0])) {
            simplex.push(i);
            if simplex.len() == dim + 1 {
                return Ok(simplex);
            }
        }
    }
    Err(Error::NotFullDimensional)
}

/// Hyperplane through `dim` affinely independent points, oriented so that
/// `interior` lies strictly on the nonnegative side.
fn hyperplane(pts: &[RatVec], on: &[usize], interior: &[Rat]) -> Facet {
    let base = &pts[on[0]];
    let rows: Vec<RatVec> = on[1..].iter().map(|&i| sub(&pts[i], base)).collect();
    let dim = base.len();
    let normal = primitive_integer_direction(&null_vector(&rows, dim));
    let mut facet = Facet {
        offset: Rat::zero(),
        normal,
    };
    facet.offset = facet.slack(base);
    if facet.slack(interior).is_negative() {
        facet.normal.iter_mut().for_each(|a| *a = -a.clone());
        facet.offset = -facet.offset;
    }
    debug_assert!(facet.slack(interior).is_positive());
    facet
}
