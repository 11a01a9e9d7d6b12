use std::collections::BTreeSet;

use proptest::prelude::*;

use tridend::algebra::{is_primitive, product, TriAlgebra};
use tridend::harness::{self, AlgebraName, Algebras, QMode};
use tridend::linear::{Element, ProductKind};
use tridend::mperm_algebra::{mperm_product_oracle, mpermutations, MPermutation};
use tridend::pqsym_algebra::alpha;
use tridend::tree_algebra::PlanarTree;
use tridend::words::{corestrict, image_overlap, park, std_word, surjections};

fn pick<A: TriAlgebra>(alg: &A, degree: usize, index: usize) -> A::Basis {
    let b = alg.basis(degree);
    b[index % b.len()].clone()
}

fn sizes_of<A: TriAlgebra>(alg: &A, e: &Element<A::Basis>) -> BTreeSet<usize> {
    e.basis_terms().map(|(b, _)| alg.degree(b)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn std_of_park_is_std(w in proptest::collection::vec(1u32..10, 1..9)) {
        prop_assert_eq!(std_word(&park(&w)), std_word(&w));
    }

    #[test]
    fn degree_additivity(d1 in 1usize..4, d2 in 1usize..4, i in 0usize..1000, j in 0usize..1000) {
        let algs = Algebras::new();
        for kind in ProductKind::PARTIALS {
            let (f, g) = (pick(&algs.st, d1, i), pick(&algs.st, d2, j));
            let p = algs.st.partial(kind, &f, &g);
            prop_assert!(sizes_of(&algs.st, &p).iter().all(|&s| s == d1 + d2));

            let (f, g) = (pick(&algs.pqsym, d1, i), pick(&algs.pqsym, d2, j));
            let p = algs.pqsym.partial(kind, &f, &g);
            prop_assert!(sizes_of(&algs.pqsym, &p).iter().all(|&s| s == d1 + d2));

            let (t, w) = (pick(&algs.tree, d1, i), pick(&algs.tree, d2, j));
            let p = algs.tree.partial(kind, &t, &w);
            prop_assert!(!p.is_zero());
            prop_assert!(sizes_of(&algs.tree, &p).iter().all(|&s| s == d1 + d2));

            // Multipermutation products have size n + m or n + m - 1.
            let (b, d) = (pick(&algs.mperm, d1, i), pick(&algs.mperm, d2, j));
            let p = algs.mperm.partial(kind, &b, &d);
            prop_assert!(sizes_of(&algs.mperm, &p).iter().all(|&s| s == d1 + d2 || s + 1 == d1 + d2));
        }
    }

    #[test]
    fn overlap_splits_across_coproduct(d1 in 1usize..4, d2 in 1usize..4, i in 0usize..1000, j in 0usize..1000) {
        let algs = Algebras::new();
        let (f, g) = (pick(&algs.st, d1, i), pick(&algs.st, d2, j));
        for kind in ProductKind::PARTIALS {
            for (u, _) in algs.st.partial(kind, &f, &g).basis_terms() {
                let (h, k) = u.split_at(d1);
                for cut in 0..=u.max_letter() {
                    let low = image_overlap(&corestrict(h, 1, cut), &corestrict(k, 1, cut));
                    let high = image_overlap(&corestrict(h, cut + 1, u32::MAX), &corestrict(k, cut + 1, u32::MAX));
                    prop_assert_eq!(image_overlap(h, k), low + high);
                }
            }
        }
    }

    #[test]
    fn bilinear_in_scalars(i in 0usize..75, j in 0usize..13, c in -3i64..4, e in 0u32..3) {
        let algs = Algebras::new();
        let x = Element::basis(pick(&algs.st, 4, i));
        let y = Element::basis(pick(&algs.st, 3, j));
        let s = tridend::QPoly::monomial(c, e);
        for kind in [ProductKind::Left, ProductKind::Middle, ProductKind::Right, ProductKind::Star] {
            prop_assert_eq!(product(&algs.st, kind, &x.scale(&s), &y), product(&algs.st, kind, &x, &y).scale(&s));
        }
    }
}

#[test]
fn corollas_are_primitive() {
    let algs = Algebras::new();
    for n in 1..=7 {
        assert!(is_primitive(&algs.tree, &Element::basis(PlanarTree::corolla(n))), "c_{n}");
    }
}

#[test]
fn alpha_is_injective() {
    // Distinct surjections have disjoint supports under alpha.
    for n in 1..=5 {
        let mut seen = BTreeSet::new();
        for f in surjections(n) {
            let a = alpha(&f);
            assert!(!a.is_zero());
            for (h, _) in a.basis_terms() {
                assert!(seen.insert(h.clone()), "{h} reached twice");
            }
        }
    }
}

#[test]
fn star_at_one_is_the_unweighted_w_sum() {
    // At q = 1 each admissible W appears once, with coefficient 1.
    let algs = Algebras::new();
    for n in 1..=3 {
        for m in 1..=3 {
            for b in mpermutations(n) {
                for d in mpermutations(m) {
                    let star = product(&algs.mperm, ProductKind::Star, &Element::basis(b.clone()), &Element::basis(d.clone()))
                        .specialize(1);
                    let mut ws: BTreeSet<MPermutation> = BTreeSet::new();
                    for k in ProductKind::PARTIALS {
                        for (w, _) in mperm_product_oracle(k, &b, &d).basis_terms() {
                            assert!(ws.insert(w.clone()), "{w} admitted by two kinds");
                        }
                    }
                    let support: BTreeSet<MPermutation> = star.basis_terms().map(|(w, _)| w.clone()).collect();
                    assert_eq!(support, ws);
                    assert!(star.basis_terms().all(|(_, c)| *c == tridend::QPoly::one()));
                }
            }
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let strip = |v: serde_json::Value| {
        let mut v = v;
        for c in v["checks"].as_array_mut().unwrap() {
            c.as_object_mut().unwrap().remove("elapsed_ms");
        }
        v
    };
    let opts = harness::VerifyOptions { cap: Some(3), ..Default::default() };
    let a = harness::reports_json(&harness::verify_all(&Algebras::new(), &opts));
    let b = harness::reports_json(&harness::verify_all(&Algebras::new(), &opts));
    assert_eq!(strip(a), strip(b));
}

#[test]
fn specialized_sweeps_agree() {
    let algs = Algebras::new();
    for q in [QMode::Int(0), QMode::Int(5)] {
        assert!(harness::verify_axioms(&algs.pqsym, AlgebraName::Pqsym, 4, q).passed());
        assert!(harness::verify_bialgebra(&algs.tree, AlgebraName::Tree, 4, q).passed());
    }
}
