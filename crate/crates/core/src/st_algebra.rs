//! `ST(q)`: surjections with the three weighted partial products and the
//! co-restriction coproduct.

use std::sync::Arc;

use itertools::Itertools;

use crate::algebra::{kind_index, share_triple, Memo, TriAlgebra, Triple};
use crate::error::Result;
use crate::linear::{Element, ProductKind, Slot, Tensor2};
use crate::qpoly::QPoly;
use crate::words::{corestrict, image_overlap, relabel, std_word, surjections, Surjection};

#[derive(Default)]
pub struct StAlgebra {
    products: Memo<(Surjection, Surjection), Triple<Surjection>>,
    coproducts: Memo<Surjection, Tensor2<Surjection>>,
}

impl StAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    fn triple(&self, f: &Surjection, g: &Surjection) -> Arc<Triple<Surjection>> {
        self.products
            .get_or_insert_with(&(f.clone(), g.clone()), || share_triple(st_products_fast(f, g)))
    }
}

/// Which partial product a pair of maxima selects, and its q-exponent.
pub(crate) fn kind_and_weight(max_h: u32, max_k: u32, overlap: usize) -> (ProductKind, u32) {
    use std::cmp::Ordering::*;
    match max_h.cmp(&max_k) {
        Greater => (ProductKind::Left, overlap as u32),
        Equal => (ProductKind::Middle, overlap as u32 - 1),
        Less => (ProductKind::Right, overlap as u32),
    }
}

/// All three partial products of `f` and `g`, enumerated as pairs of value
/// sets `A ∪ B = [r]` carrying relabelled copies of `f` and `g`.
pub fn st_products_fast(f: &Surjection, g: &Surjection) -> [Element<Surjection>; 3] {
    let a = f.max_letter() as usize;
    let b = g.max_letter() as usize;
    let mut out: [Element<Surjection>; 3] = Default::default();
    for r in a.max(b)..=a + b {
        let overlap = a + b - r;
        for av in (1..=r as u32).combinations(a) {
            let outside: Vec<u32> = (1..=r as u32).filter(|x| !av.contains(x)).collect();
            for shared in av.iter().copied().combinations(overlap) {
                let mut bv = outside.clone();
                bv.extend(shared);
                bv.sort_unstable();
                let (kind, e) = kind_and_weight(av[a - 1], bv[b - 1], overlap);
                let mut word = relabel(f, &av);
                word.extend(relabel(g, &bv));
                out[kind_index(kind)].add_term(Slot::Basis(Surjection::new_unchecked(word)), &QPoly::q_pow(e));
            }
        }
    }
    out
}

/// The literal definition: filter every surjection of length `n + m`.
pub fn st_product_oracle(kind: ProductKind, f: &Surjection, g: &Surjection) -> Element<Surjection> {
    let n = f.len();
    let mut out = Element::zero();
    for u in surjections(n + g.len()) {
        let (h, k) = u.split_at(n);
        if std_word(h) != *f || std_word(k) != *g {
            continue;
        }
        let max_h = *h.iter().max().unwrap();
        let max_k = *k.iter().max().unwrap();
        let (got, e) = kind_and_weight(max_h, max_k, image_overlap(h, k));
        if got == kind {
            out.add_term(Slot::Basis(u.clone()), &QPoly::q_pow(e));
        }
    }
    out
}

/// `Δf = Σ_{j=0}^{r} f|^{[j]} ⊗ std(f|^{(j,r]})`.
pub fn st_coproduct(f: &Surjection) -> Tensor2<Surjection> {
    let r = f.max_letter();
    let mut out = Tensor2::zero();
    for j in 0..=r {
        let left = corestrict(f, 1, j);
        let right = corestrict(f, j + 1, r);
        let ls = if left.is_empty() {
            Slot::Unit
        } else {
            let s = Surjection::new(left.0).expect("co-restriction to [j] is surjective");
            Slot::Basis(s)
        };
        let rs = if right.is_empty() { Slot::Unit } else { Slot::Basis(std_word(&right)) };
        out.add_term(ls, rs, &QPoly::one());
    }
    out
}

impl TriAlgebra for StAlgebra {
    type Basis = Surjection;

    fn name(&self) -> &'static str {
        "st"
    }

    fn partial(&self, kind: ProductKind, a: &Surjection, b: &Surjection) -> Arc<Element<Surjection>> {
        Arc::clone(&self.triple(a, b)[kind_index(kind)])
    }

    fn coproduct_basis(&self, a: &Surjection) -> Arc<Tensor2<Surjection>> {
        self.coproducts.get_or_insert_with(a, || st_coproduct(a))
    }

    fn degree(&self, a: &Surjection) -> usize {
        a.len()
    }

    fn basis(&self, degree: usize) -> Vec<Surjection> {
        surjections(degree)
    }

    fn parse_basis(&self, s: &str) -> Result<Surjection> {
        Surjection::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::parse_element;

    fn s(x: &str) -> Surjection {
        Surjection::parse(x).unwrap()
    }

    fn el(x: &str) -> Element<Surjection> {
        parse_element(x, Surjection::parse).unwrap()
    }

    #[test]
    fn worked_products() {
        let alg = StAlgebra::new();
        let (f, g) = (s("(1,2,1)"), s("(2,1)"));
        let right = el("(1,2,1,4,3) + q*(1,2,1,3,2) + q*(1,2,1,3,1) + (1,3,1,4,2) + (2,3,2,4,1)");
        let middle = el("q*(1,2,1,2,1) + (1,3,1,3,2) + (2,3,2,3,1)");
        let left = el("q*(1,3,1,2,1) + (1,4,1,3,2) + q*(2,3,2,2,1) + (2,4,2,3,1) + (3,4,3,2,1)");
        assert_eq!(*alg.partial(ProductKind::Right, &f, &g), right);
        assert_eq!(*alg.partial(ProductKind::Middle, &f, &g), middle);
        assert_eq!(*alg.partial(ProductKind::Left, &f, &g), left);
    }

    #[test]
    fn fast_matches_oracle_small() {
        for n in 1..=2 {
            for m in 1..=2 {
                for f in surjections(n) {
                    for g in surjections(m) {
                        let fast = st_products_fast(&f, &g);
                        for kind in ProductKind::PARTIALS {
                            assert_eq!(fast[kind_index(kind)], st_product_oracle(kind, &f, &g), "{f} {kind:?} {g}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn worked_coproduct() {
        let d = st_coproduct(&s("(2,1,3,5,3,4,4,1)"));
        let want = "1 # (2,1,3,5,3,4,4,1) + (1,1) # (1,2,4,2,3,3) + (2,1,1) # (1,3,1,2,2) \
                    + (2,1,3,3,1) # (2,1,1) + (2,1,3,3,4,4,1) # (1) + (2,1,3,5,3,4,4,1) # 1";
        assert_eq!(d, crate::linear::parse_tensor2(want, Surjection::parse).unwrap());
        assert_eq!(st_coproduct(&s("(1)")).to_string(), "1 # (1) + (1) # 1");
        assert!(st_coproduct(&s("(1,1)")).reduced().is_zero());
    }
}
