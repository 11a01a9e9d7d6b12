//! The interface every family implements, and the generic element-level
//! operations built on it.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::linear::{bilinear_extend, BasisObject, Element, ProductKind, Slot, Tensor2, Tensor3};
use crate::qpoly::QPoly;

/// A q-tridendriform bialgebra presented on a combinatorial basis.
pub trait TriAlgebra: Sync {
    type Basis: BasisObject;

    /// Short tag used on the command line (`st`, `pqsym`, `tree`, `mperm`).
    fn name(&self) -> &'static str;

    /// Basis-level partial product. `kind` is never `Star`.
    fn partial(&self, kind: ProductKind, a: &Self::Basis, b: &Self::Basis) -> Arc<Element<Self::Basis>>;

    /// `Δ` on a basis object, boundary terms included.
    fn coproduct_basis(&self, a: &Self::Basis) -> Arc<Tensor2<Self::Basis>>;

    /// Size used for enumeration and for the "total degree" of sweeps.
    fn degree(&self, a: &Self::Basis) -> usize;

    /// Grading of the coalgebra. Defaults to `degree`.
    fn grade(&self, a: &Self::Basis) -> usize {
        self.degree(a)
    }

    /// All basis objects of the given degree, in a fixed order.
    fn basis(&self, degree: usize) -> Vec<Self::Basis>;

    fn parse_basis(&self, s: &str) -> Result<Self::Basis>;
}

/// Basis-level `∗ = ≺ + q· + ≻`.
pub fn star_basis<A: TriAlgebra + ?Sized>(alg: &A, a: &A::Basis, b: &A::Basis) -> Element<A::Basis> {
    let mut out = Element::zero();
    out.add_scaled(&alg.partial(ProductKind::Left, a, b), &QPoly::one());
    out.add_scaled(&alg.partial(ProductKind::Middle, a, b), &QPoly::q());
    out.add_scaled(&alg.partial(ProductKind::Right, a, b), &QPoly::one());
    out
}

/// Element-level product, with the unit conventions of the augmented algebra.
pub fn product<A: TriAlgebra + ?Sized>(
    alg: &A,
    kind: ProductKind,
    a: &Element<A::Basis>,
    b: &Element<A::Basis>,
) -> Element<A::Basis> {
    match kind {
        ProductKind::Star => bilinear_extend(kind, |x, y| star_basis(alg, x, y), a, b),
        _ => bilinear_extend(kind, |x, y| alg.partial(kind, x, y), a, b),
    }
}

pub fn left<A: TriAlgebra + ?Sized>(alg: &A, a: &Element<A::Basis>, b: &Element<A::Basis>) -> Element<A::Basis> {
    product(alg, ProductKind::Left, a, b)
}

pub fn middle<A: TriAlgebra + ?Sized>(alg: &A, a: &Element<A::Basis>, b: &Element<A::Basis>) -> Element<A::Basis> {
    product(alg, ProductKind::Middle, a, b)
}

pub fn right<A: TriAlgebra + ?Sized>(alg: &A, a: &Element<A::Basis>, b: &Element<A::Basis>) -> Element<A::Basis> {
    product(alg, ProductKind::Right, a, b)
}

pub fn star<A: TriAlgebra + ?Sized>(alg: &A, a: &Element<A::Basis>, b: &Element<A::Basis>) -> Element<A::Basis> {
    product(alg, ProductKind::Star, a, b)
}

/// Linear `Δ`, with `Δ(1) = 1 ⊗ 1`.
pub fn coproduct<A: TriAlgebra + ?Sized>(alg: &A, x: &Element<A::Basis>) -> Tensor2<A::Basis> {
    let mut out = Tensor2::zero();
    for (s, c) in x.terms() {
        match s {
            Slot::Unit => out.add_term(Slot::Unit, Slot::Unit, c),
            Slot::Basis(b) => out.add_scaled(&alg.coproduct_basis(b), c),
        }
    }
    out
}

/// `Δ̄(x) = Δ(x) − 1 ⊗ x − x ⊗ 1` on the augmentation ideal.
pub fn reduced_coproduct<A: TriAlgebra + ?Sized>(alg: &A, x: &Element<A::Basis>) -> Tensor2<A::Basis> {
    coproduct(alg, &x.without_unit()).reduced()
}

/// Grade of a homogeneous element without unit part, `None` otherwise.
pub fn homogeneous_grade<A: TriAlgebra + ?Sized>(alg: &A, x: &Element<A::Basis>) -> Option<usize> {
    if !x.unit_coeff().is_zero() {
        return None;
    }
    let mut grades = x.basis_terms().map(|(b, _)| alg.grade(b));
    let g = grades.next()?;
    grades.all(|h| h == g).then_some(g)
}

pub fn is_primitive<A: TriAlgebra + ?Sized>(alg: &A, x: &Element<A::Basis>) -> bool {
    x.unit_coeff().is_zero() && reduced_coproduct(alg, x).is_zero()
}

/// `(Δ ⊗ id)Δ(x)` and `(id ⊗ Δ)Δ(x)`.
pub fn coassociativity_sides<A: TriAlgebra + ?Sized>(
    alg: &A,
    x: &A::Basis,
) -> (Tensor3<A::Basis>, Tensor3<A::Basis>) {
    let d = alg.coproduct_basis(x);
    let lhs = crate::linear::tensor_flatten(&d, crate::linear::Side::Left, |b| (*alg.coproduct_basis(b)).clone());
    let rhs = crate::linear::tensor_flatten(&d, crate::linear::Side::Right, |b| (*alg.coproduct_basis(b)).clone());
    (lhs, rhs)
}

/// Position of a partial product in a `[≺, ·, ≻]` triple.
pub(crate) fn kind_index(kind: ProductKind) -> usize {
    match kind {
        ProductKind::Left => 0,
        ProductKind::Middle => 1,
        ProductKind::Right => 2,
        ProductKind::Star => panic!("star is not a partial product"),
    }
}

/// The three partial products of one pair of basis objects.
pub(crate) type Triple<B> = [Arc<Element<B>>; 3];

pub(crate) fn share_triple<B: BasisObject>(t: [Element<B>; 3]) -> Triple<B> {
    t.map(Arc::new)
}

/// Thread-safe memo table. Values are shared, never mutated after insertion.
pub struct Memo<K, V> {
    map: RwLock<HashMap<K, Arc<V>>>,
}

impl<K: Eq + Hash + Clone, V> Default for Memo<K, V> {
    fn default() -> Self {
        Memo { map: RwLock::new(HashMap::new()) }
    }
}

impl<K: Eq + Hash + Clone, V> Memo<K, V> {
    pub fn get_or_insert_with<F: FnOnce() -> V>(&self, key: &K, f: F) -> Arc<V> {
        if let Some(v) = self.map.read().expect("memo lock poisoned").get(key) {
            return Arc::clone(v);
        }
        // Computed outside the lock: recursive products re-enter the memo.
        let v = Arc::new(f());
        let mut w = self.map.write().expect("memo lock poisoned");
        Arc::clone(w.entry(key.clone()).or_insert(v))
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("memo lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
