mod common;

use kstab::document::catalog_instance;
use kstab::invariants::{delta, lct_invariant, scalars};
use kstab::quantized::{
    delta_k, filtration_counts, h0_count, monomial_basis_divisor, sk_sum, worst_basis_vanishing,
    QuantizedSlice,
};
use kstab::rat::{int, rat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Signed};

use common::catalog;

#[test]
fn convergence_of_sk_along_rays() {
    let mut failures = Vec::new();
    for x in catalog() {
        let l = x.cartier_index();
        for r in x.ray_valuations() {
            let s = scalars(&x, r.as_slice()).s;
            let gaps: Vec<Rat> = (1..=6)
                .map(|i| (sk_sum(&x, i * l, &r).unwrap() - &s).abs())
                .collect();
            if gaps.windows(2).any(|w| w[1] > w[0]) {
                failures.push(format!("{} {r}: {gaps:?}", x.name()));
            }
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn lct_chain() {
    for x in catalog() {
        let d = delta(&x);
        let ray_witness = x.rays().contains(&d.witness.as_slice().to_vec());
        let l = x.cartier_index();
        let mut previous_gap: Option<Rat> = None;
        for k in [l, 2 * l, 3 * l] {
            let lct = lct_invariant(&x, &monomial_basis_divisor(&x, k).unwrap()).unwrap();
            let expected = x
                .ray_valuations()
                .iter()
                .map(|r| Rat::one() / sk_sum(&x, k, r).unwrap())
                .min()
                .unwrap();
            assert_eq!(lct, expected, "{} k={k}", x.name());
            if ray_witness {
                let gap = (&lct - &d.value).abs();
                if let Some(p) = &previous_gap {
                    assert!(&gap <= p, "{} k={k}", x.name());
                }
                previous_gap = Some(gap);
            }
        }
    }
}

#[test]
fn f1_delta_k_increases_to_delta() {
    let f1 = catalog_instance("F1").unwrap();
    let d1 = delta_k(&f1, 1, 3).unwrap().value;
    let d2 = delta_k(&f1, 2, 3).unwrap().value;
    assert_eq!((d1.clone(), d2.clone()), (rat(9, 11), rat(5, 6)));
    assert!(d1 < d2 && d2 < delta(&f1).value);
}

#[test]
fn section_counts_of_smooth_del_pezzos() {
    for name in ["P2", "P1xP1", "F1", "dP7", "dP6"] {
        let x = catalog_instance(name).unwrap();
        for k in 1..=5u64 {
            let expected = Rat::one() + Rat::from_integer(BigInt::from(k * (k + 1) / 2)) * x.degree();
            let got = QuantizedSlice::new(&x, k).unwrap().n_k();
            assert_eq!(int(got as i64), expected, "{name} k={k}");
        }
    }
    let f1 = catalog_instance("F1").unwrap();
    assert_eq!(QuantizedSlice::new(&f1, 1).unwrap().n_k(), 9);
    assert_eq!(QuantizedSlice::new(&f1, 2).unwrap().n_k(), 25);
}

#[test]
fn certificates_agree_with_section_counts() {
    for x in catalog() {
        let k = x.cartier_index();
        for r in x.ray_valuations() {
            let w = worst_basis_vanishing(&x, k, &r).unwrap();
            let counts = filtration_counts(&w.certificate);
            for (a, c) in counts.iter().enumerate() {
                let h = h0_count(&x, k, &r, &int(a as i64 + 1)).unwrap();
                assert_eq!(*c as u64, h, "{} {r} a={}", x.name(), a + 1);
            }
            let total: usize = counts.iter().sum();
            let kn = BigInt::from(k) * BigInt::from(w.certificate.len());
            assert_eq!(Rat::new(BigInt::from(total), kn), w.value);
            assert!(w.certificate.windows(2).all(|p| p[0].1 >= p[1].1));
        }
    }
}
