//! `PQSym*(q)`: parking functions, the morphism `α: ST(q) → PQSym*(q)`, the
//! inclusion `ι`, and counts of `×_P`-irreducible parking functions.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;

use crate::algebra::{kind_index, share_triple, Memo, TriAlgebra, Triple};
use crate::error::Result;
use crate::linear::{Element, ProductKind, Slot, Tensor2};
use crate::qpoly::QPoly;
use crate::st_algebra::kind_and_weight;
use crate::words::{
    image_overlap, is_parking, park, parking_functions, relabel, shuffles, std_word, ParkingFunction,
    Surjection,
};

#[derive(Default)]
pub struct PqsymAlgebra {
    products: Memo<(ParkingFunction, ParkingFunction), Triple<ParkingFunction>>,
    coproducts: Memo<ParkingFunction, Tensor2<ParkingFunction>>,
}

impl PqsymAlgebra {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Words of length `len(f)` with values in `[bound]` that park to `f`.
fn park_preimages(f: &ParkingFunction, bound: u32) -> Vec<Vec<u32>> {
    let s = std_word(f);
    let d = s.max_letter() as usize;
    (1..=bound)
        .combinations(d)
        .map(|vals| relabel(&s, &vals))
        .filter(|h| park(h) == *f)
        .collect()
}

/// All three partial products, enumerated over value translations of `f`
/// and `g` inside `[n + m]`.
pub fn pf_products_fast(f: &ParkingFunction, g: &ParkingFunction) -> [Element<ParkingFunction>; 3] {
    let bound = (f.len() + g.len()) as u32;
    let hs = park_preimages(f, bound);
    let ks = park_preimages(g, bound);
    let mut out: [Element<ParkingFunction>; 3] = Default::default();
    for h in &hs {
        for k in &ks {
            let mut word = h.clone();
            word.extend_from_slice(k);
            if !is_parking(&word) {
                continue;
            }
            let max_h = *h.iter().max().unwrap();
            let max_k = *k.iter().max().unwrap();
            let overlap = image_overlap(h, k);
            let (kind, e) = kind_and_weight(max_h, max_k, overlap);
            out[kind_index(kind)].add_term(Slot::Basis(ParkingFunction::new_unchecked(word)), &QPoly::q_pow(e));
        }
    }
    out
}

/// The literal definition: filter every parking function of length `n + m`.
pub fn pf_product_oracle(kind: ProductKind, f: &ParkingFunction, g: &ParkingFunction) -> Element<ParkingFunction> {
    let n = f.len();
    let mut out = Element::zero();
    for u in parking_functions(n + g.len()) {
        let (h, k) = u.split_at(n);
        if park(h) != *f || park(k) != *g {
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

fn pf_slot(letters: Vec<u32>) -> Slot<ParkingFunction> {
    if letters.is_empty() {
        Slot::Unit
    } else {
        Slot::Basis(ParkingFunction::new(letters).expect("coproduct factor is parking"))
    }
}

/// For each `j`, the positions holding letters `<= j` split `f` iff there
/// are exactly `j` of them.
pub fn pf_coproduct(f: &ParkingFunction) -> Tensor2<ParkingFunction> {
    let n = f.len() as u32;
    let mut out = Tensor2::zero();
    for j in 0..=n {
        let low: Vec<u32> = f.iter().copied().filter(|&x| x <= j).collect();
        if low.len() != j as usize {
            continue;
        }
        let high: Vec<u32> = f.iter().copied().filter(|&x| x > j).map(|x| x - j).collect();
        out.add_term(pf_slot(low), pf_slot(high), &QPoly::one());
    }
    out
}

/// Coproduct oracle: every `(f₁, f₂, δ)` with `f = (f₁ ×_P f₂) ∘ δ` for a
/// shuffle `δ`.
pub fn pf_coproduct_oracle(f: &ParkingFunction) -> Tensor2<ParkingFunction> {
    let n = f.len();
    let mut out = Tensor2::zero();
    out.add_term(Slot::Unit, Slot::Basis(f.clone()), &QPoly::one());
    out.add_term(Slot::Basis(f.clone()), Slot::Unit, &QPoly::one());
    for j in 1..n {
        let sh = shuffles(&[j, n - j]);
        for f1 in parking_functions(j) {
            for f2 in parking_functions(n - j) {
                let prod = times_p(&f1, &f2);
                let hits = sh
                    .iter()
                    .filter(|sigma| {
                        let mut w = vec![0u32; n];
                        for (i, &p) in sigma.iter().enumerate() {
                            w[p - 1] = prod[i];
                        }
                        w == f.letters()
                    })
                    .count();
                if hits > 0 {
                    assert_eq!(hits, 1, "decomposition of {f} is not unique");
                    out.add_term(Slot::Basis(f1.clone()), Slot::Basis(f2.clone()), &QPoly::one());
                }
            }
        }
    }
    out
}

/// `f ×_P g = (f(1), …, f(n), g(1) + n, …, g(m) + n)`.
pub fn times_p(f: &[u32], g: &[u32]) -> Vec<u32> {
    let n = f.len() as u32;
    f.iter().copied().chain(g.iter().map(|&x| x + n)).collect()
}

/// `α(f) = Σ_{h ∈ PF_n, std(h) = f} h`.
pub fn alpha(f: &Surjection) -> Element<ParkingFunction> {
    let d = f.max_letter() as usize;
    let mut out = Element::zero();
    for vals in (1..=f.len() as u32).combinations(d) {
        let h = relabel(f, &vals);
        if is_parking(&h) {
            out.add_term(Slot::Basis(ParkingFunction::new_unchecked(h)), &QPoly::one());
        }
    }
    out
}

pub fn alpha_oracle(f: &Surjection) -> Element<ParkingFunction> {
    let mut out = Element::zero();
    for h in parking_functions(f.len()) {
        if std_word(&h) == *f {
            out.add_term(Slot::Basis(h), &QPoly::one());
        }
    }
    out
}

/// The surjection viewed as a parking function.
pub fn iota(f: &Surjection) -> Element<ParkingFunction> {
    let p = ParkingFunction::new(f.letters().to_vec()).expect("every surjection is a parking function");
    Element::basis(p)
}

/// Whether `f = f₁ ×_P f₂` for some split `1 <= i < n`.
pub fn is_decomposable(f: &ParkingFunction) -> bool {
    (1..f.len()).any(|i| {
        let (a, b) = f.split_at(i);
        is_parking(a) && b.iter().all(|&x| x > i as u32) && is_parking(&b.iter().map(|&x| x - i as u32).collect::<Vec<_>>())
    })
}

/// Parking functions of length `n` that are `×_P`-irreducible.
pub fn pirr_count(n: usize) -> usize {
    parking_functions(n).iter().filter(|f| !is_decomposable(f)).count()
}

/// Sorted list of the irreducible parking functions of length `n`.
pub fn pirr(n: usize) -> BTreeSet<ParkingFunction> {
    parking_functions(n).into_iter().filter(|f| !is_decomposable(f)).collect()
}

impl TriAlgebra for PqsymAlgebra {
    type Basis = ParkingFunction;

    fn name(&self) -> &'static str {
        "pqsym"
    }

    fn partial(&self, kind: ProductKind, a: &ParkingFunction, b: &ParkingFunction) -> Arc<Element<ParkingFunction>> {
        let t = self
            .products
            .get_or_insert_with(&(a.clone(), b.clone()), || share_triple(pf_products_fast(a, b)));
        Arc::clone(&t[kind_index(kind)])
    }

    fn coproduct_basis(&self, a: &ParkingFunction) -> Arc<Tensor2<ParkingFunction>> {
        self.coproducts.get_or_insert_with(a, || pf_coproduct(a))
    }

    fn degree(&self, a: &ParkingFunction) -> usize {
        a.len()
    }

    fn basis(&self, degree: usize) -> Vec<ParkingFunction> {
        parking_functions(degree)
    }

    fn parse_basis(&self, s: &str) -> Result<ParkingFunction> {
        ParkingFunction::parse(s)
    }
}
