mod common;

use kstab::invariants::scalars;
use kstab::oracle::{random_fano_corpus, CorpusSpec};
use kstab::quantized::QuantizedSlice;
use kstab::rat::{dot_int, int, Rat};
use kstab::{ToricFano, ToricValuation};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::catalog;

fn random_fano() -> impl Strategy<Value = ToricFano> {
    (any::<u64>(), 2usize..=3).prop_map(|(seed, dim)| {
        random_fano_corpus(&CorpusSpec {
            seed,
            count: 1,
            dim,
            ray_count: dim + 1..=dim + 4,
            coordinate_bound: 3,
        })
        .unwrap()
        .remove(0)
    })
}

fn nonzero(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-6i64..=6, dim).prop_filter("nonzero", |u| u.iter().any(|&c| c != 0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauge_is_positive_and_homogeneous((x, u) in random_fano().prop_flat_map(|x| { let d = x.dim(); (Just(x), nonzero(d)) }), t in 1i64..5) {
        let a = x.gauge_exact(&u);
        prop_assert!(a.is_positive());
        let tu: Vec<i64> = u.iter().map(|c| c * t).collect();
        prop_assert_eq!(x.gauge_exact(&tu), &a * BigInt::from(t));
        // the integer fast path agrees where it applies
        if let Ok(v) = ToricValuation::new(u.clone()) {
            prop_assert_eq!(x.log_discrepancy(&v), a);
        }
    }

    #[test]
    fn rays_have_unit_discrepancy(x in random_fano()) {
        for r in x.ray_valuations() {
            prop_assert_eq!(x.log_discrepancy(&r), int(1));
        }
        let built = ToricFano::build(x.rays().to_vec()).unwrap();
        prop_assert_eq!(built.section_polytope(), x.section_polytope());
    }
}

#[test]
fn duality_identity_on_seeded_directions() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for x in catalog() {
        for _ in 0..100 {
            let u: Vec<i64> = loop {
                let u: Vec<i64> = (0..x.dim()).map(|_| rng.gen_range(-9..=9)).collect();
                if u.iter().any(|&c| c != 0) {
                    break u;
                }
            };
            let min_p = x
                .section_polytope()
                .vertices()
                .iter()
                .map(|m| dot_int(m, &u))
                .min()
                .unwrap();
            assert_eq!(min_p, -x.gauge_exact(&u), "{} {u:?}", x.name());
        }
    }
}

#[test]
fn vanishing_orders_on_catalog() {
    for x in catalog() {
        let l = x.cartier_index();
        for k in 1..=3 * l {
            let slice = QuantizedSlice::new(&x, k).unwrap();
            let mut dirs = x.ray_valuations();
            dirs.extend(
                kstab::toric::primitive_box(x.dim(), 2)
                    .into_iter()
                    .map(|u| ToricValuation::new(u).unwrap()),
            );
            for v in &dirs {
                let orders = slice.orders(&x, v);
                for (m, o) in slice.points().iter().zip(&orders) {
                    assert!(!o.is_negative(), "{} {m:?}", x.name());
                    assert_eq!(o, &x.section_vanishing_order(k, m, v));
                    if k % l == 0 {
                        assert!(o.is_integer(), "{} k={k} {m:?} {v}", x.name());
                    }
                }
                if k % l == 0 {
                    let tau = scalars(&x, v.as_slice()).tau;
                    let top = orders.iter().max().unwrap();
                    assert_eq!(top, &(tau * Rat::from_integer(BigInt::from(k))), "{} k={k} {v}", x.name());
                }
            }
        }
    }
}
