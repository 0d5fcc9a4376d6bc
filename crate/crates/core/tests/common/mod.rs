#![allow(dead_code)]

use std::thread;

use kstab::document::{catalog_instance, catalog_names};
use kstab::oracle::{random_fano_corpus, CorpusSpec};
use kstab::rat::{int, Rat, RatVec};
use kstab::ToricFano;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

pub fn build(rays: &[&[i64]]) -> ToricFano {
    ToricFano::build(rays.iter().map(|r| r.to_vec()).collect()).unwrap()
}

pub fn catalog() -> Vec<ToricFano> {
    catalog_names().into_iter().map(|n| catalog_instance(n).unwrap()).collect()
}

pub const CORPUS_SIZE_PER_DIM: usize = 100;

/// 100 instances in each of dimensions 2 and 3.
pub fn corpus() -> Vec<ToricFano> {
    let mut out = random_fano_corpus(&CorpusSpec {
        seed: 20_240_501,
        count: CORPUS_SIZE_PER_DIM,
        dim: 2,
        ray_count: 3..=8,
        coordinate_bound: 3,
    })
    .unwrap();
    out.extend(
        random_fano_corpus(&CorpusSpec {
            seed: 20_240_502,
            count: CORPUS_SIZE_PER_DIM,
            dim: 3,
            ray_count: 4..=8,
            coordinate_bound: 2,
        })
        .unwrap(),
    );
    out
}

/// Maps `f` over `items` on all cores, keeping order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(threads).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}

/// Kernel of a matrix with `cols - 1` independent rows, by Gaussian
/// elimination; `None` when the rank is smaller.
pub fn kernel_line(rows: &[RatVec], cols: usize) -> Option<RatVec> {
    let mut m: Vec<RatVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot_row = m[r].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rat::zero(); cols];
    v[free] = int(1);
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = -m[i][free].clone();
    }
    Some(v)
}

pub fn primitive(v: &[Rat]) -> Vec<BigInt> {
    use num_integer::Integer;
    let lcm = v.iter().fold(BigInt::from(1), |a, x| a.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Facets `(normal, offset)` with `<normal, p> >= offset` found by trying
/// every hyperplane through `n` of the points.
pub fn brute_force_facets(points: &[RatVec]) -> Vec<(Vec<BigInt>, Rat)> {
    let n = points[0].len();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let base = &points[idx[0]];
        let rows: Vec<RatVec> = idx[1..]
            .iter()
            .map(|&i| points[i].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        if let Some(normal) = kernel_line(&rows, n) {
            let normal = primitive(&normal);
            let val = |p: &RatVec| -> Rat {
                p.iter().zip(&normal).map(|(a, b)| a * Rat::from_integer(b.clone())).sum()
            };
            let h = val(base);
            let slacks: Vec<Rat> = points.iter().map(|p| val(p) - &h).collect();
            let facet = if slacks.iter().all(|s| !s.is_negative()) {
                Some((normal, h))
            } else if slacks.iter().all(|s| !s.is_positive()) {
                Some((normal.into_iter().map(|x| -x).collect(), -h))
            } else {
                None
            };
            if let Some(f) = facet {
                if !out.contains(&f) {
                    out.push(f);
                }
            }
        }
        // next n-subset
        let mut i = n;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if idx[i] < points.len() - n + i {
                idx[i] += 1;
                for j in i + 1..n {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
