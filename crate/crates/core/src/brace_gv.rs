//! Brace operations, the GV_q distributive law, the primitive projector
//! `e_tri`, the coradical filtration and primitive ranks, generic over any
//! [`TriAlgebra`].

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;

use crate::algebra::{coproduct, homogeneous_grade, is_primitive, left, middle, product, reduced_coproduct, right, TriAlgebra};
use crate::error::{Error, Result};
use crate::linalg;
use crate::linear::{Element, ProductKind, Slot, Tensor2};
use crate::qpoly::QPoly;

type El<A> = Element<<A as TriAlgebra>::Basis>;

/// `a ≻̃ b = q (a · b) + a ≻ b`.
pub fn rtilde<A: TriAlgebra + ?Sized>(alg: &A, a: &El<A>, b: &El<A>) -> El<A> {
    right(alg, a, b).add(&middle(alg, a, b).scale(&QPoly::q()))
}

/// `y₁ ≺ (y₂ ≺ (… ≺ yₙ))`.
pub fn omega_left<A: TriAlgebra + ?Sized>(alg: &A, ys: &[El<A>]) -> Result<El<A>> {
    let (last, init) = ys.split_last().ok_or(Error::EmptyList)?;
    Ok(init.iter().rev().fold(last.clone(), |acc, y| left(alg, y, &acc)))
}

fn fold_left_nested<A, F>(ys: &[El<A>], op: F) -> Result<El<A>>
where
    A: TriAlgebra + ?Sized,
    F: Fn(&El<A>, &El<A>) -> El<A>,
{
    let (first, rest) = ys.split_first().ok_or(Error::EmptyList)?;
    Ok(rest.iter().fold(first.clone(), |acc, y| op(&acc, y)))
}

/// `((y₁ ≻̃ y₂) ≻̃ …) ≻̃ yₙ`.
pub fn omega_rtilde<A: TriAlgebra + ?Sized>(alg: &A, ys: &[El<A>]) -> Result<El<A>> {
    fold_left_nested::<A, _>(ys, |a, b| rtilde(alg, a, b))
}

/// `((y₁ ≻ y₂) ≻ …) ≻ yₙ`.
pub fn omega_right<A: TriAlgebra + ?Sized>(alg: &A, ys: &[El<A>]) -> Result<El<A>> {
    fold_left_nested::<A, _>(ys, |a, b| right(alg, a, b))
}

fn or_unit<A: TriAlgebra + ?Sized>(r: Result<El<A>>) -> El<A> {
    r.unwrap_or_else(|_| Element::unit())
}

/// `M_{1n}(x; y₁, …, yₙ) = Σ_i (-1)^{n-i} ω_≺(y₁..yᵢ) ≻̃ x ≺ ω_≻̃(yᵢ₊₁..yₙ)`.
pub fn brace<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>, ys: &[El<A>]) -> El<A> {
    let n = ys.len();
    if n == 0 {
        return x.clone();
    }
    let mut out = Element::zero();
    for i in 0..=n {
        let pre = or_unit::<A>(omega_left(alg, &ys[..i]));
        let post = or_unit::<A>(omega_rtilde(alg, &ys[i..]));
        let term = left(alg, &rtilde(alg, &pre, x), &post);
        let sign = if (n - i).is_multiple_of(2) { 1 } else { -1 };
        out.add_scaled(&term, &QPoly::constant(sign));
    }
    out
}

/// `x₁ · x₂ · … · xₖ` (associative, so folded from the left).
fn middle_chain<A: TriAlgebra + ?Sized>(alg: &A, xs: &[El<A>]) -> El<A> {
    fold_left_nested::<A, _>(xs, |a, b| middle(alg, a, b)).expect("non-empty chain")
}

/// Both sides of the distributive law with the given weight `w` in place of
/// the scalar raised to the power `j - i`.
pub fn gvq_sides<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>, y: &El<A>, zs: &[El<A>], w: &QPoly) -> (El<A>, El<A>) {
    let n = zs.len();
    let lhs = brace(alg, &middle(alg, x, y), zs);
    let mut rhs = Element::zero();
    let mut pow = vec![QPoly::one()];
    for k in 1..=n {
        pow.push(pow[k - 1].mul(w));
    }
    for i in 0..=n {
        for j in i..=n {
            let mut chain = vec![brace(alg, x, &zs[..i])];
            chain.extend(zs[i..j].iter().cloned());
            chain.push(brace(alg, y, &zs[j..]));
            rhs.add_scaled(&middle_chain(alg, &chain), &pow[j - i]);
        }
    }
    (lhs, rhs)
}

/// The GV_q distributive law with weight `(-q)^{j-i}`, which is the sign
/// under which it holds for the brace operations above.
pub fn check_gvq<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>, y: &El<A>, zs: &[El<A>]) -> bool {
    let (l, r) = gvq_sides(alg, x, y, zs, &-QPoly::q());
    l == r
}

/// Weakly increasing sequences `0 <= i₁ <= j₁ <= … <= iₙ <= jₙ <= m`.
fn interleavings(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(k: usize, n: usize, m: usize, lo: usize, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if k == n {
            out.push(acc.clone());
            return;
        }
        for i in lo..=m {
            for j in i..=m {
                acc.push((i, j));
                rec(k + 1, n, m, j, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, m, 0, &mut Vec::new(), &mut out);
    out
}

/// Both sides of the brace relation
/// `M_{1m}(M_{1n}(x; y); z) = Σ M_{1r}(x; z.., M(y₁; z..), …, M(yₙ; z..), .., z)`.
pub fn brace_relation_sides<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>, ys: &[El<A>], zs: &[El<A>]) -> (El<A>, El<A>) {
    let lhs = brace(alg, &brace(alg, x, ys), zs);
    let mut rhs = Element::zero();
    for pattern in interleavings(ys.len(), zs.len()) {
        let mut args = Vec::new();
        let mut pos = 0;
        for (k, &(i, j)) in pattern.iter().enumerate() {
            args.extend(zs[pos..i].iter().cloned());
            args.push(brace(alg, &ys[k], &zs[i..j]));
            pos = j;
        }
        args.extend(zs[pos..].iter().cloned());
        rhs.add_scaled(&brace(alg, x, &args), &QPoly::one());
    }
    (lhs, rhs)
}

pub fn brace_relation_check<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>, ys: &[El<A>], zs: &[El<A>]) -> bool {
    let (l, r) = brace_relation_sides(alg, x, ys, zs);
    l == r
}

/// Memoized `e_tri` on basis objects.
pub struct Projector<'a, A: TriAlgebra + ?Sized> {
    alg: &'a A,
    cache: HashMap<A::Basis, El<A>>,
}

impl<'a, A: TriAlgebra + ?Sized> Projector<'a, A> {
    pub fn new(alg: &'a A) -> Self {
        Projector { alg, cache: HashMap::new() }
    }

    /// `e(b) = b - Σ b₍₁₎ ≻ e(b₍₂₎)` over the reduced coproduct.
    pub fn basis(&mut self, b: &A::Basis) -> El<A> {
        if let Some(v) = self.cache.get(b) {
            return v.clone();
        }
        let x = Element::basis(b.clone());
        let mut out = x.clone();
        for (l, r, c) in reduced_coproduct(self.alg, &x).terms() {
            let (Slot::Basis(l), Slot::Basis(r)) = (l, r) else { unreachable!("reduced coproduct has no unit legs") };
            let er = self.basis(r);
            let term = right(self.alg, &Element::basis(l.clone()), &er);
            out.add_scaled(&term, &-c);
        }
        self.cache.insert(b.clone(), out.clone());
        out
    }

    pub fn apply(&mut self, x: &El<A>) -> El<A> {
        let mut out = Element::zero();
        for (b, c) in x.basis_terms() {
            let e = self.basis(b);
            out.add_scaled(&e, c);
        }
        out
    }
}

/// `e_tri` on a homogeneous element.
pub fn e_tri<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>) -> Result<El<A>> {
    if x.is_zero() {
        return Ok(Element::zero());
    }
    homogeneous_grade(alg, x).ok_or(Error::NotHomogeneous)?;
    Ok(Projector::new(alg).apply(x))
}

/// Iterated reduced coproduct `Δ̄^k(x)` as a map from `k`-tuples of basis
/// objects to coefficients; `Δ̄^1` is the identity on the augmentation ideal.
pub fn iterated_reduced_coproduct<A: TriAlgebra + ?Sized>(
    alg: &A,
    x: &El<A>,
    k: usize,
) -> BTreeMap<Vec<A::Basis>, QPoly> {
    assert!(k >= 1);
    let mut cur: BTreeMap<Vec<A::Basis>, QPoly> =
        x.basis_terms().map(|(b, c)| (vec![b.clone()], c.clone())).collect();
    for _ in 1..k {
        let mut next: BTreeMap<Vec<A::Basis>, QPoly> = BTreeMap::new();
        for (legs, c) in &cur {
            let (last, init) = legs.split_last().unwrap();
            for (l, r, x) in reduced_coproduct(alg, &Element::basis(last.clone())).terms() {
                let (Slot::Basis(l), Slot::Basis(r)) = (l, r) else { unreachable!() };
                let mut key = init.to_vec();
                key.push(l.clone());
                key.push(r.clone());
                let entry = next.entry(key).or_insert_with(QPoly::zero);
                *entry += &c.mul(x);
            }
        }
        next.retain(|_, c| !c.is_zero());
        cur = next;
        if cur.is_empty() {
            break;
        }
    }
    cur
}

/// Oracle for `e_tri`: `Σ_{k>=1} (-1)^{k+1} ≻^k Δ̄^k(x)` with right-nested `≻`.
pub fn e_tri_alternating<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>) -> El<A> {
    let mut out = Element::zero();
    for k in 1.. {
        let legs = iterated_reduced_coproduct(alg, x, k);
        if legs.is_empty() {
            break;
        }
        let sign = QPoly::constant(if k % 2 == 1 { 1 } else { -1 });
        for (tuple, c) in legs {
            let (last, init) = tuple.split_last().unwrap();
            let nested = init
                .iter()
                .rev()
                .fold(Element::basis(last.clone()), |acc, b| right(alg, &Element::basis(b.clone()), &acc));
            out.add_scaled(&nested, &c.mul(&sign));
        }
    }
    out
}

/// Least `n` with `Δ̄^{n+1}(x) = 0`.
pub fn filtration_degree<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>) -> Result<usize> {
    if x.without_unit().is_zero() {
        return Err(Error::ZeroInput);
    }
    homogeneous_grade(alg, x).ok_or(Error::NotHomogeneous)?;
    let mut n = 1;
    while !iterated_reduced_coproduct(alg, x, n + 1).is_empty() {
        n += 1;
    }
    Ok(n)
}

/// `Σ_r Σ ω_≻(e(x₍₁₎), …, e(x₍ᵣ₎))` over the iterated reduced coproducts.
pub fn reconstruct<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>) -> Result<El<A>> {
    if x.is_zero() {
        return Ok(Element::zero());
    }
    homogeneous_grade(alg, x).ok_or(Error::NotHomogeneous)?;
    let mut proj = Projector::new(alg);
    let mut out = Element::zero();
    for r in 1.. {
        let legs = iterated_reduced_coproduct(alg, x, r);
        if legs.is_empty() {
            break;
        }
        for (tuple, c) in legs {
            let es: Vec<El<A>> = tuple.iter().map(|b| proj.basis(b)).collect();
            out.add_scaled(&omega_right(alg, &es)?, &c);
        }
    }
    Ok(out)
}

/// `Δ(ω_≻(x₁..xₙ)) = Σ_i ω_≻(x₁..xᵢ) ⊗ ω_≻(xᵢ₊₁..xₙ)` for primitive `xᵢ`.
pub fn omega_coproduct_check<A: TriAlgebra + ?Sized>(alg: &A, xs: &[El<A>]) -> Result<bool> {
    if xs.is_empty() {
        return Err(Error::EmptyList);
    }
    if let Some(x) = xs.iter().find(|x| !is_primitive(alg, x)) {
        return Err(Error::NotPrimitive(x.to_string()));
    }
    let lhs = coproduct(alg, &omega_right(alg, xs)?);
    let mut rhs = Tensor2::zero();
    for i in 0..=xs.len() {
        let a = or_unit::<A>(omega_right(alg, &xs[..i]));
        let b = or_unit::<A>(omega_right(alg, &xs[i..]));
        rhs.add_product(&a, &b, &QPoly::one());
    }
    Ok(lhs == rhs)
}

/// Columns of a linear map on the degree-`n` basis, specialized at `q = v`,
/// as an integer matrix over the union of target basis objects.
fn specialized_matrix<B: Ord + Clone>(images: &[Vec<(B, BigInt)>]) -> Vec<Vec<BigInt>> {
    let targets: BTreeSet<B> = images.iter().flatten().map(|(b, _)| b.clone()).collect();
    let index: BTreeMap<B, usize> = targets.into_iter().enumerate().map(|(i, b)| (b, i)).collect();
    let mut rows = vec![vec![BigInt::from(0); images.len()]; index.len()];
    for (col, img) in images.iter().enumerate() {
        for (b, c) in img {
            rows[index[b]][col] += c;
        }
    }
    rows
}

/// Rank of `e_tri` on the degree-`n` basis at `q = v`.
pub fn primitive_rank<A: TriAlgebra + ?Sized>(alg: &A, n: usize, v: i64) -> usize {
    let mut proj = Projector::new(alg);
    let images: Vec<Vec<(A::Basis, BigInt)>> = alg
        .basis(n)
        .iter()
        .map(|b| proj.basis(b).basis_terms().map(|(t, c)| (t.clone(), c.eval_i64(v))).collect())
        .collect();
    linalg::rank(specialized_matrix(&images))
}

/// Basis of `ker Δ̄` on the span of the degree-`n` basis at `q = v`, with
/// integer coefficients.
pub fn primitive_kernel<A: TriAlgebra + ?Sized>(alg: &A, n: usize, v: i64) -> Vec<El<A>> {
    let basis = alg.basis(n);
    let images: Vec<Vec<((Slot<A::Basis>, Slot<A::Basis>), BigInt)>> = basis
        .iter()
        .map(|b| {
            reduced_coproduct(alg, &Element::basis(b.clone()))
                .terms()
                .map(|(l, r, c)| ((l.clone(), r.clone()), c.eval_i64(v)))
                .collect()
        })
        .collect();
    let m = specialized_matrix(&images);
    linalg::nullspace(&m, basis.len())
        .iter()
        .map(|vec| {
            let ints = linalg::primitive_integer_vector(vec);
            Element::from_terms(
                basis.iter().zip(ints).map(|(b, c)| (Slot::Basis(b.clone()), QPoly::from_terms([(0u32, c)]))),
            )
        })
        .collect()
}

/// Whether `x · y` and `M_{1n}(x; zs)` are primitive when all inputs are.
pub fn primitive_closure_holds<A: TriAlgebra + ?Sized>(alg: &A, x: &El<A>, y: &El<A>, zs: &[El<A>]) -> bool {
    is_primitive(alg, &product(alg, ProductKind::Middle, x, y)) && is_primitive(alg, &brace(alg, x, zs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::parse_element;
    use crate::st_algebra::StAlgebra;
    use crate::tree_algebra::{PlanarTree, TreeAlgebra};
    use crate::words::Surjection;

    fn st(x: &str) -> Element<Surjection> {
        parse_element(x, Surjection::parse).unwrap()
    }

    #[test]
    fn omegas() {
        let alg = StAlgebra::new();
        let x = st("(1)");
        assert_eq!(omega_left(&alg, &[x.clone()]).unwrap(), x);
        assert_eq!(omega_rtilde(&alg, &[x.clone(), x.clone()]).unwrap(), st("q*(1,1) + (1,2)"));
        assert_eq!(omega_right(&alg, &[x.clone(), x.clone()]).unwrap(), st("(1,2)"));
        assert_eq!(omega_left::<StAlgebra>(&alg, &[]), Err(Error::EmptyList));
    }

    #[test]
    fn brace_examples() {
        let alg = StAlgebra::new();
        let (x, y) = (st("(1)"), st("(2,1,1)"));
        assert_eq!(brace(&alg, &x, &[]), x);
        let m11 = brace(&alg, &x, &[y.clone()]);
        assert_eq!(m11, rtilde(&alg, &y, &x).sub(&left(&alg, &x, &y)));
        assert_eq!(brace(&alg, &x, &[x.clone()]), st("q*(1,1) + (1,2) - (2,1)"));
    }

    #[test]
    fn gvq_examples() {
        let alg = StAlgebra::new();
        let x = st("(1)");
        assert!(check_gvq(&alg, &x, &x, &[]));
        assert!(check_gvq(&alg, &x, &x, &[x.clone()]));
        assert!(check_gvq(&alg, &x, &st("(1,2)"), &[x.clone()]));
    }

    #[test]
    fn unsigned_gvq_weight_fails() {
        let alg = StAlgebra::new();
        let x = st("(1)");
        let (l, r) = gvq_sides(&alg, &x, &x, &[x.clone()], &QPoly::q());
        assert_ne!(l, r);
        let xzy = middle_chain(&alg, &[x.clone(), x.clone(), x.clone()]);
        assert_eq!(l.sub(&r), xzy.scale(&QPoly::monomial(-2, 1)));
    }

    #[test]
    fn brace_relation_examples() {
        let alg = StAlgebra::new();
        let x = st("(1)");
        assert!(brace_relation_check(&alg, &x, &[], &[x.clone()]));
        assert!(brace_relation_check(&alg, &x, &[x.clone()], &[x.clone()]));
        let trees = TreeAlgebra::new();
        let y = Element::basis(PlanarTree::y());
        assert!(brace_relation_check(&trees, &y, &[y.clone()], &[y.clone(), y.clone()]));
    }

    #[test]
    fn e_tri_examples() {
        let alg = StAlgebra::new();
        assert_eq!(e_tri(&alg, &st("(1,1)")).unwrap(), st("(1,1)"));
        assert!(e_tri(&alg, &st("(1,2)")).unwrap().is_zero());
        assert_eq!(e_tri(&alg, &st("(2,1)")).unwrap(), st("(2,1) - (1,2)"));
        assert_eq!(e_tri(&alg, &st("(1) + (1,2)")), Err(Error::NotHomogeneous));
        for x in ["(2,1)", "(1,2,1)", "(3,1,2)", "(2,1,2,1)"] {
            assert_eq!(e_tri(&alg, &st(x)).unwrap(), e_tri_alternating(&alg, &st(x)));
        }
    }

    #[test]
    fn filtration_examples() {
        let alg = StAlgebra::new();
        assert_eq!(filtration_degree(&alg, &st("(1,1)")).unwrap(), 1);
        assert_eq!(filtration_degree(&alg, &st("(1,2)")).unwrap(), 2);
        assert_eq!(filtration_degree(&alg, &Element::zero()), Err(Error::ZeroInput));
        let trees = TreeAlgebra::new();
        assert_eq!(filtration_degree(&trees, &Element::basis(PlanarTree::corolla(2))).unwrap(), 1);
    }

    #[test]
    fn reconstruct_examples() {
        let alg = StAlgebra::new();
        for x in ["(1,1)", "(1,2)", "(2,1)"] {
            assert_eq!(reconstruct(&alg, &st(x)).unwrap(), st(x));
        }
    }

    #[test]
    fn omega_coproduct_examples() {
        let alg = StAlgebra::new();
        assert!(omega_coproduct_check(&alg, &[st("(1)")]).unwrap());
        assert!(omega_coproduct_check(&alg, &[st("(1,1)"), st("(1,1)")]).unwrap());
        assert!(omega_coproduct_check(&alg, &[st("(1)"), st("(1)"), st("(1)")]).unwrap());
        assert!(matches!(omega_coproduct_check(&alg, &[st("(1,2)")]), Err(Error::NotPrimitive(_))));
    }

    #[test]
    fn ranks() {
        let alg = StAlgebra::new();
        for v in [0, 1, 5] {
            assert_eq!(primitive_rank(&alg, 1, v), 1);
        }
        let trees = TreeAlgebra::new();
        assert_eq!(primitive_rank(&trees, 3, 1), 6);
        assert_eq!(primitive_kernel(&trees, 3, 1).len(), 6);
    }
}
