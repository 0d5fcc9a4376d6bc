mod common;

use kstab::document::{catalog_document, catalog_names, InputDocument, ReportDocument};
use kstab::oracle::{counterexample_document, random_fano_corpus, CorpusSpec};
use kstab::rat::{format_rat, parse_rat, rat};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn emitted_documents_round_trip(seed in any::<u64>(), dim in 2usize..=3) {
        let x = random_fano_corpus(&CorpusSpec {
            seed,
            count: 1,
            dim,
            ray_count: dim + 1..=dim + 3,
            coordinate_bound: 2,
        })
        .unwrap()
        .remove(0);
        let report = ReportDocument::compute(&x, 2).unwrap().to_json();
        let doc = InputDocument::from_rays(x.name(), x.rays().to_vec()).to_json();
        let again = InputDocument::parse(&doc).unwrap().build().unwrap();
        prop_assert_eq!(ReportDocument::compute(&again, 2).unwrap().to_json(), report);

        let dump = counterexample_document(&x, &[1, 0], "test");
        let from_dump = InputDocument::parse(&dump).unwrap().build().unwrap();
        prop_assert_eq!(from_dump.rays(), x.rays());

        // the same variety given by the vertices of its polytope
        let verts: Vec<Vec<String>> = x
            .section_polytope()
            .vertices()
            .iter()
            .map(|v| v.iter().map(format_rat).collect())
            .collect();
        let json = serde_json::json!({ "name": x.name(), "polytope_vertices": verts }).to_string();
        let y = InputDocument::parse(&json).unwrap().build().unwrap();
        prop_assert_eq!(y.section_polytope(), x.section_polytope());
        prop_assert_eq!(y.degree(), x.degree());
    }

    #[test]
    fn rationals_are_canonical(n in -10_000i64..10_000, d in 1i64..10_000) {
        let q = rat(n, d);
        let text = format_rat(&q);
        prop_assert!(!text.contains('+'));
        prop_assert_eq!(text.matches('-').count(), usize::from(n * d < 0 && n != 0));
        prop_assert_eq!(&parse_rat(&text).unwrap(), &q);
        let raw = format!("{n}/{d}");
        prop_assert_eq!(format_rat(&parse_rat(&raw).unwrap()), text);
    }
}

#[test]
fn catalog_documents_round_trip() {
    for name in catalog_names() {
        let doc = catalog_document(name).unwrap();
        let text = doc.to_json();
        assert!(text.ends_with('\n'));
        assert_eq!(InputDocument::parse(&text).unwrap(), doc);
        let a = ReportDocument::compute(&doc.build().unwrap(), 4).unwrap().to_json();
        let b = ReportDocument::compute(&InputDocument::parse(&text).unwrap().build().unwrap(), 4)
            .unwrap()
            .to_json();
        assert_eq!(a, b);
    }
}

#[test]
fn non_canonical_rationals_are_rejected() {
    for bad in ["+1", "1/-2", "1 /2", "", "1/0", "a", "1/2/3"] {
        assert!(parse_rat(bad).is_err(), "{bad:?}");
    }
}
