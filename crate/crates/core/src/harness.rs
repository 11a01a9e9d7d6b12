//! Verification sweeps: axioms, bialgebra laws, morphisms, oracle
//! equivalence, the brace layer and the dimension table.
//!
//! Every sweep enumerates its cases in a fixed order, checks them on the
//! rayon pool and merges results by index, so reports are deterministic.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{coassociativity_sides, coproduct, is_primitive, kind_index, product, reduced_coproduct, TriAlgebra};
use crate::brace_gv::{brace_relation_sides, gvq_sides, primitive_kernel, primitive_rank, reconstruct, Projector};
use crate::error::{Error, Result};
use crate::linear::{BasisObject, Element, ProductKind, Slot, Tensor2};
use crate::mperm_algebra::{
    mperm_product_oracle, mperm_products_fast, mpermutations, mpermutations_recursive, phi, std_m,
    std_m_sequential, MPermutation, MpermAlgebra,
};
use crate::pqsym_algebra::{alpha, iota, pf_coproduct, pf_coproduct_oracle, pf_products_fast, pirr_count, PqsymAlgebra};
use crate::qpoly::QPoly;
use crate::st_algebra::{kind_and_weight, st_products_fast, StAlgebra};
use crate::tree_algebra::{PlanarTree, TreeAlgebra};
use crate::words::{
    image_overlap, nd_parking_functions, park, parking_functions, std_word, surjections, ParkingFunction,
    Surjection,
};

/// How `q` is treated when comparing two sides.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum QMode {
    #[default]
    Symbolic,
    Int(i64),
}

impl FromStr for QMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "symbolic" | "q" => Ok(QMode::Symbolic),
            t => t.parse().map(QMode::Int).map_err(|_| Error::Parse(format!("bad q mode `{s}`"))),
        }
    }
}

impl fmt::Display for QMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QMode::Symbolic => write!(f, "symbolic"),
            QMode::Int(v) => write!(f, "{v}"),
        }
    }
}

impl QMode {
    pub fn same<B: BasisObject>(self, a: &Element<B>, b: &Element<B>) -> bool {
        match self {
            QMode::Symbolic => a == b,
            QMode::Int(v) => a.specialize(v) == b.specialize(v),
        }
    }

    pub fn same2<B: BasisObject>(self, a: &Tensor2<B>, b: &Tensor2<B>) -> bool {
        match self {
            QMode::Symbolic => a == b,
            QMode::Int(v) => a.specialize(v) == b.specialize(v),
        }
    }
}

/// The four families, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraName {
    St,
    Pqsym,
    Tree,
    Mperm,
}

impl AlgebraName {
    pub const ALL: [AlgebraName; 4] = [AlgebraName::St, AlgebraName::Pqsym, AlgebraName::Tree, AlgebraName::Mperm];

    pub fn as_str(self) -> &'static str {
        match self {
            AlgebraName::St => "st",
            AlgebraName::Pqsym => "pqsym",
            AlgebraName::Tree => "tree",
            AlgebraName::Mperm => "mperm",
        }
    }
}

impl FromStr for AlgebraName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "st" => Ok(AlgebraName::St),
            "pqsym" | "pf" => Ok(AlgebraName::Pqsym),
            "tree" | "trees" => Ok(AlgebraName::Tree),
            "mperm" | "mmr" => Ok(AlgebraName::Mperm),
            _ => Err(Error::Parse(format!("unknown algebra `{s}`"))),
        }
    }
}

impl fmt::Display for AlgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One instance of each family, sharing product and coproduct caches
/// across sweeps.
#[derive(Default)]
pub struct Algebras {
    pub st: StAlgebra,
    pub pqsym: PqsymAlgebra,
    pub tree: TreeAlgebra,
    pub mperm: MpermAlgebra,
}

impl Algebras {
    pub fn new() -> Self {
        Self::default()
    }
}

/// Outcome of one sweep.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub algebra: Option<AlgebraName>,
    pub max_degree: usize,
    pub checked: usize,
    pub failures: usize,
    pub first_counterexample: Option<String>,
    pub expect_pass: bool,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Passed when expected to, or failed when a failure was expected.
    pub fn as_expected(&self) -> bool {
        self.passed() == self.expect_pass
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.passed(), self.expect_pass) {
            (true, true) => "PASS",
            (false, false) => "XFAIL",
            (true, false) => "XPASS",
            (false, true) => "FAIL",
        };
        let alg = self.algebra.map(|a| format!("[{a}]")).unwrap_or_default();
        write!(
            f,
            "{status:<5} {}{alg} deg<={} checked={} failures={} ({} ms)",
            self.name, self.max_degree, self.checked, self.failures, self.elapsed_ms
        )?;
        if let Some(c) = &self.first_counterexample {
            write!(f, "\n      first counterexample: {c}")?;
        }
        Ok(())
    }
}

/// Runs `check` on every item in parallel. Each item reports how many
/// individual identities it checked and the descriptions of those that
/// failed.
fn sweep<T, F>(name: &str, algebra: Option<AlgebraName>, max_degree: usize, expect_pass: bool, items: &[T], check: F) -> CheckReport
where
    T: Sync,
    F: Fn(&T) -> (usize, Vec<String>) + Sync,
{
    let start = Instant::now();
    let results: Vec<(usize, Vec<String>)> = items.par_iter().map(&check).collect();
    let checked = results.iter().map(|r| r.0).sum();
    let failures = results.iter().map(|r| r.1.len()).sum();
    let first_counterexample = results.into_iter().flat_map(|r| r.1).next();
    CheckReport {
        name: name.to_string(),
        algebra,
        max_degree,
        checked,
        failures,
        first_counterexample,
        expect_pass,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn tally(results: impl IntoIterator<Item = (bool, String)>) -> (usize, Vec<String>) {
    let mut n = 0;
    let mut bad = Vec::new();
    for (ok, what) in results {
        n += 1;
        if !ok {
            bad.push(what);
        }
    }
    (n, bad)
}

/// All tuples of basis objects of positive degree with total degree at most
/// `max_total`, ordered by degree then basis order.
pub fn basis_tuples<A: TriAlgebra + ?Sized>(alg: &A, arity: usize, max_total: usize) -> Vec<Vec<A::Basis>> {
    let by_degree: Vec<Vec<A::Basis>> = (0..=max_total).map(|d| if d == 0 { Vec::new() } else { alg.basis(d) }).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec<B: Clone>(by_degree: &[Vec<B>], arity: usize, budget: usize, cur: &mut Vec<B>, out: &mut Vec<Vec<B>>) {
        if cur.len() == arity {
            out.push(cur.clone());
            return;
        }
        let reserve = arity - cur.len() - 1;
        for d in 1..=budget.saturating_sub(reserve) {
            for b in &by_degree[d] {
                cur.push(b.clone());
                rec(by_degree, arity, budget - d, cur, out);
                cur.pop();
            }
        }
    }
    rec(&by_degree, arity, max_total, &mut cur, &mut out);
    out
}

fn basis_upto<A: TriAlgebra + ?Sized>(alg: &A, max_degree: usize) -> Vec<A::Basis> {
    (1..=max_degree).flat_map(|d| alg.basis(d)).collect()
}

fn el<B: BasisObject>(s: &Slot<B>) -> Element<B> {
    Element::monomial(s.clone(), QPoly::one())
}

/// Both sides of the seven relations and of `∗`-associativity.
pub fn relation_sides<A: TriAlgebra + ?Sized>(
    alg: &A,
    a: &Element<A::Basis>,
    b: &Element<A::Basis>,
    c: &Element<A::Basis>,
) -> [(Element<A::Basis>, Element<A::Basis>); 8] {
    use ProductKind::{Left as L, Middle as M, Right as R, Star as S};
    let p = |k, x: &Element<A::Basis>, y: &Element<A::Basis>| product(alg, k, x, y);
    [
        (p(L, &p(L, a, b), c), p(L, a, &p(S, b, c))),
        (p(L, &p(R, a, b), c), p(R, a, &p(L, b, c))),
        (p(R, &p(S, a, b), c), p(R, a, &p(R, b, c))),
        (p(M, &p(M, a, b), c), p(M, a, &p(M, b, c))),
        (p(M, &p(R, a, b), c), p(R, a, &p(M, b, c))),
        (p(M, &p(L, a, b), c), p(M, a, &p(R, b, c))),
        (p(L, &p(M, a, b), c), p(M, a, &p(L, b, c))),
        (p(S, &p(S, a, b), c), p(S, a, &p(S, b, c))),
    ]
}

/// The seven relations and associativity of `∗` on all basis triples.
pub fn verify_axioms<A: TriAlgebra + ?Sized>(alg: &A, tag: AlgebraName, max_total: usize, q: QMode) -> CheckReport {
    let triples = basis_tuples(alg, 3, max_total);
    sweep("axioms", Some(tag), max_total, true, &triples, |t| {
        let (a, b, c) = (Element::basis(t[0].clone()), Element::basis(t[1].clone()), Element::basis(t[2].clone()));
        tally(relation_sides(alg, &a, &b, &c).into_iter().enumerate().map(|(i, (l, r))| {
            let ok = q.same(&l, &r);
            (ok, format!("relation {} on {}, {}, {}: {} != {}", i + 1, t[0], t[1], t[2], l, r))
        }))
    })
}

/// `Σ (x₁ ∗ y₁) ⊗ (x₂ ∘ y₂)`, with the `x₂ = y₂ = 1` term read as `(x ∘ y) ⊗ 1`.
pub fn compatibility_rhs<A: TriAlgebra + ?Sized>(alg: &A, kind: ProductKind, x: &A::Basis, y: &A::Basis) -> Tensor2<A::Basis> {
    let dx = alg.coproduct_basis(x);
    let dy = alg.coproduct_basis(y);
    let mut out = Tensor2::zero();
    for (x1, x2, c) in dx.terms() {
        for (y1, y2, d) in dy.terms() {
            if x2.is_unit() && y2.is_unit() {
                continue;
            }
            let l = product(alg, ProductKind::Star, &el(x1), &el(y1));
            let r = product(alg, kind, &el(x2), &el(y2));
            out.add_product(&l, &r, &c.mul(d));
        }
    }
    out.add_product(&alg.partial(kind, x, y), &Element::unit(), &QPoly::one());
    out
}

/// Compatibility of `Δ` with the three products on basis pairs, plus the
/// counit laws and grading of `Δ` on single basis objects.
pub fn verify_bialgebra<A: TriAlgebra + ?Sized>(alg: &A, tag: AlgebraName, max_total: usize, q: QMode) -> CheckReport {
    let mut items: Vec<Vec<A::Basis>> = basis_upto(alg, max_total).into_iter().map(|b| vec![b]).collect();
    items.extend(basis_tuples(alg, 2, max_total));
    sweep("bialgebra", Some(tag), max_total, true, &items, |t| {
        if let [x] = t.as_slice() {
            let d = alg.coproduct_basis(x);
            let g = alg.grade(x);
            let mut left = Element::zero();
            let mut right = Element::zero();
            let mut graded = true;
            for (l, r, c) in d.terms() {
                if l.is_unit() {
                    left.add_term(r.clone(), c);
                }
                if r.is_unit() {
                    right.add_term(l.clone(), c);
                }
                let gs = |s: &Slot<A::Basis>| s.basis().map_or(0, |b| alg.grade(b));
                graded &= gs(l) + gs(r) == g;
            }
            let want = Element::basis(x.clone());
            return tally([
                (left == want, format!("left counit law on {x}: {d}")),
                (right == want, format!("right counit law on {x}: {d}")),
                (graded, format!("coproduct of {x} is not graded: {d}")),
            ]);
        }
        let (x, y) = (&t[0], &t[1]);
        tally(ProductKind::PARTIALS.into_iter().map(|k| {
            let lhs = coproduct(alg, &alg.partial(k, x, y));
            let rhs = compatibility_rhs(alg, k, x, y);
            (q.same2(&lhs, &rhs), format!("Δ({x} {} {y}): {lhs} != {rhs}", k.symbol()))
        }))
    })
}

pub fn verify_coassociativity<A: TriAlgebra + ?Sized>(alg: &A, tag: AlgebraName, max_degree: usize) -> CheckReport {
    let items = basis_upto(alg, max_degree);
    sweep("coassociativity", Some(tag), max_degree, true, &items, |x| {
        let (l, r) = coassociativity_sides(alg, x);
        tally([(l == r, format!("on {x}: {l} != {r}"))])
    })
}

/// Checks that a linear map given on basis objects commutes with the three
/// partial products (pairs of total degree `<= max_total`) and with `Δ`.
fn verify_morphism<A, C, F>(name: &str, src: &A, dst: &C, map: F, max_total: usize, q: QMode) -> CheckReport
where
    A: TriAlgebra + ?Sized,
    C: TriAlgebra + ?Sized,
    F: Fn(&A::Basis) -> Element<C::Basis> + Sync,
{
    let mut items: Vec<Vec<A::Basis>> = basis_upto(src, max_total).into_iter().map(|b| vec![b]).collect();
    items.extend(basis_tuples(src, 2, max_total));
    sweep(name, None, max_total, true, &items, |t| {
        if let [x] = t.as_slice() {
            let lhs = coproduct(dst, &map(x));
            let rhs = src.coproduct_basis(x).map_linear(&map);
            return tally([(q.same2(&lhs, &rhs), format!("Δ on {x}: {lhs} != {rhs}"))]);
        }
        let (x, y) = (&t[0], &t[1]);
        let (fx, fy) = (map(x), map(y));
        tally(ProductKind::PARTIALS.into_iter().map(|k| {
            let lhs = src.partial(k, x, y).map_linear(&map);
            let rhs = product(dst, k, &fx, &fy);
            (q.same(&lhs, &rhs), format!("{x} {} {y}: {lhs} != {rhs}", k.symbol()))
        }))
    })
}

pub fn verify_alpha(algs: &Algebras, max_total: usize, q: QMode) -> CheckReport {
    verify_morphism("morphism alpha: st -> pqsym", &algs.st, &algs.pqsym, alpha, max_total, q)
}

pub fn verify_phi(algs: &Algebras, max_total: usize, q: QMode) -> CheckReport {
    verify_morphism("morphism phi: st -> mperm", &algs.st, &algs.mperm, |f| Element::basis(phi(f)), max_total, q)
}

/// Every M-permutation of size `<= max_degree` is `φ` of a surjection of
/// the same length.
pub fn verify_phi_surjective(max_degree: usize) -> CheckReport {
    let sizes: Vec<usize> = (1..=max_degree).collect();
    sweep("phi surjectivity", None, max_degree, true, &sizes, |&n| {
        let image: BTreeSet<MPermutation> = surjections(n).iter().map(phi).collect();
        tally(mpermutations(n).into_iter().map(|w| {
            let hit = image.contains(&w);
            (hit, format!("{w} is not in the image of ST_{n}"))
        }))
    })
}

/// `ι` is not a coalgebra map: `(1,1,2)` is primitive in PQSym* but not in ST.
pub fn verify_iota_witness(algs: &Algebras) -> CheckReport {
    let f = Surjection::parse("(1,1,2)").expect("literal surjection");
    sweep("iota coalgebra check on (1,1,2)", None, 3, false, &[f], |f| {
        let lhs = coproduct(&algs.pqsym, &iota(f));
        let rhs = algs.st.coproduct_basis(f).map_linear(iota);
        tally([(lhs == rhs, format!("Δ(ι{f}) = {lhs} but (ι⊗ι)Δ({f}) = {rhs}"))])
    })
}

type ProductTable<B> = HashMap<(B, B), [Element<B>; 3]>;

/// The literal product definition, run once per total size: every word `u`
/// of size `total` is split at every position, and its halves retracted.
fn table_oracle<B, R>(words: &[B], retract: R) -> ProductTable<B>
where
    B: BasisObject + std::ops::Deref<Target = [u32]>,
    R: Fn(&[u32]) -> B,
{
    let mut table: ProductTable<B> = HashMap::new();
    for u in words {
        for n in 1..u.len() {
            let (h, k) = u.split_at(n);
            let max_h = *h.iter().max().unwrap();
            let max_k = *k.iter().max().unwrap();
            let (kind, e) = kind_and_weight(max_h, max_k, image_overlap(h, k));
            let entry = table.entry((retract(h), retract(k))).or_default();
            entry[kind_index(kind)].add_term(Slot::Basis(u.clone()), &QPoly::q_pow(e));
        }
    }
    table
}

fn compare_with_table<B: BasisObject>(
    pairs: &[Vec<B>],
    table: &ProductTable<B>,
    fast: impl Fn(&B, &B) -> [Element<B>; 3] + Sync,
) -> Vec<(usize, Vec<String>)> {
    pairs
        .par_iter()
        .map(|p| {
            let got = fast(&p[0], &p[1]);
            let empty: [Element<B>; 3] = Default::default();
            let want = table.get(&(p[0].clone(), p[1].clone())).unwrap_or(&empty);
            tally(ProductKind::PARTIALS.into_iter().map(|k| {
                let i = kind_index(k);
                (got[i] == want[i], format!("{} {} {}: fast {} != oracle {}", p[0], k.symbol(), p[1], got[i], want[i]))
            }))
        })
        .collect()
}

fn oracle_report(name: &str, tag: AlgebraName, max_total: usize, start: Instant, results: Vec<(usize, Vec<String>)>) -> CheckReport {
    let checked = results.iter().map(|r| r.0).sum();
    let failures = results.iter().map(|r| r.1.len()).sum();
    CheckReport {
        name: name.to_string(),
        algebra: Some(tag),
        max_degree: max_total,
        checked,
        failures,
        first_counterexample: results.into_iter().flat_map(|r| r.1).next(),
        expect_pass: true,
        elapsed_ms: start.elapsed().as_millis() as u64,
    }
}

fn pairs_of_total<A: TriAlgebra + ?Sized>(alg: &A, total: usize) -> Vec<Vec<A::Basis>> {
    basis_tuples(alg, 2, total).into_iter().filter(|p| alg.degree(&p[0]) + alg.degree(&p[1]) == total).collect()
}

pub fn verify_st_oracle(algs: &Algebras, max_total: usize) -> CheckReport {
    let start = Instant::now();
    let mut results = Vec::new();
    for total in 2..=max_total {
        let table = table_oracle(&surjections(total), std_word);
        results.extend(compare_with_table(&pairs_of_total(&algs.st, total), &table, st_products_fast));
    }
    oracle_report("product oracle", AlgebraName::St, max_total, start, results)
}

pub fn verify_pqsym_oracle(algs: &Algebras, max_total: usize) -> CheckReport {
    let start = Instant::now();
    let mut results = Vec::new();
    for total in 2..=max_total {
        let table = table_oracle(&parking_functions(total), park);
        results.extend(compare_with_table(&pairs_of_total(&algs.pqsym, total), &table, pf_products_fast));
    }
    oracle_report("product oracle", AlgebraName::Pqsym, max_total, start, results)
}

pub fn verify_mperm_oracle(algs: &Algebras, max_total: usize) -> CheckReport {
    let pairs = basis_tuples(&algs.mperm, 2, max_total);
    sweep("product oracle", Some(AlgebraName::Mperm), max_total, true, &pairs, |p| {
        let fast = mperm_products_fast(&p[0], &p[1]);
        tally(ProductKind::PARTIALS.into_iter().map(|k| {
            let want = mperm_product_oracle(k, &p[0], &p[1]);
            let got = &fast[kind_index(k)];
            (*got == want, format!("{} {} {}: fast {got} != oracle {want}", p[0], k.symbol(), p[1]))
        }))
    })
}

pub fn verify_pf_coproduct_oracle(max_degree: usize) -> CheckReport {
    let items: Vec<ParkingFunction> = (1..=max_degree).flat_map(parking_functions).collect();
    sweep("coproduct oracle", Some(AlgebraName::Pqsym), max_degree, true, &items, |f| {
        let (got, want) = (pf_coproduct(f), pf_coproduct_oracle(f));
        tally([(got == want, format!("Δ{f}: {got} != {want}"))])
    })
}

/// Simultaneous deletion against sequential deletion on every ordered set
/// partition of `[n]`.
pub fn verify_std_m(max_degree: usize) -> CheckReport {
    let items: Vec<Surjection> = (1..=max_degree).flat_map(surjections).collect();
    sweep("std_m vs sequential deletion", Some(AlgebraName::Mperm), max_degree, true, &items, |f| {
        let r = f.max_letter() as usize;
        let mut blocks = vec![Vec::new(); r];
        for (i, &x) in f.iter().enumerate() {
            blocks[x as usize - 1].push(i as u32 + 1);
        }
        let a = std_m(&blocks).map(|w| w.to_string());
        let b = std_m_sequential(&blocks).map(|w| w.to_string());
        let idem = a.as_ref().ok().and_then(|w| MPermutation::parse(w).ok()).map(|w| std_m(w.blocks()).ok() == Some(w));
        tally([
            (a.is_ok() && a.as_ref().ok() == b.as_ref().ok(), format!("{blocks:?}: {a:?} != {b:?}")),
            (idem == Some(true), format!("std_m not idempotent on {blocks:?}")),
        ])
    })
}

/// Trees with no interior coproduct term are exactly the corollas.
pub fn verify_corollas(algs: &Algebras, max_degree: usize) -> CheckReport {
    let items = basis_upto(&algs.tree, max_degree);
    sweep("primitive trees are corollas", Some(AlgebraName::Tree), max_degree, true, &items, |t: &PlanarTree| {
        let prim = reduced_coproduct(&algs.tree, &Element::basis(t.clone())).is_zero();
        tally([(prim == t.is_corolla(), format!("{t}: primitive = {prim}, corolla = {}", t.is_corolla()))])
    })
}

/// Idempotence of `e_tri`, `e_tri(y ≻ z) = 0`, and `reconstruct = id`.
pub fn verify_projector<A: TriAlgebra + ?Sized>(alg: &A, tag: AlgebraName, max_degree: usize, q: QMode) -> Vec<CheckReport> {
    let singles = basis_upto(alg, max_degree);
    let idem = sweep("e_tri idempotent", Some(tag), max_degree, true, &singles, |b| {
        let mut proj = Projector::new(alg);
        let e = proj.basis(b);
        let ee = proj.apply(&e);
        let prim = is_primitive(alg, &e);
        tally([
            (q.same(&e, &ee), format!("e(e({b})) = {ee} but e({b}) = {e}")),
            (prim, format!("e({b}) = {e} is not primitive")),
        ])
    });
    let pairs = basis_tuples(alg, 2, max_degree);
    let kills = sweep("e_tri kills y > z", Some(tag), max_degree, true, &pairs, |p| {
        let mut proj = Projector::new(alg);
        let e = proj.apply(&alg.partial(ProductKind::Right, &p[0], &p[1]));
        tally([(e.is_zero(), format!("e({} ≻ {}) = {e}", p[0], p[1]))])
    });
    let rec = sweep("reconstruct is identity", Some(tag), max_degree, true, &singles, |b| {
        let x = Element::basis(b.clone());
        let got = reconstruct(alg, &x);
        let ok = got.as_ref().is_ok_and(|g| q.same(g, &x));
        tally([(ok, format!("reconstruct({b}) = {got:?}"))])
    });
    vec![idem, kills, rec]
}

/// Products and braces of primitives are primitive.
pub fn verify_primitive_closure<A: TriAlgebra + ?Sized>(alg: &A, tag: AlgebraName, max_degree: usize) -> CheckReport {
    // Images of e_tri span the primitives symbolically in q.
    let mut proj = Projector::new(alg);
    let prims: Vec<(usize, Element<A::Basis>)> = (1..max_degree)
        .flat_map(|d| alg.basis(d).into_iter().map(move |b| (d, b)))
        .map(|(d, b)| (d, proj.basis(&b)))
        .filter(|(_, e)| !e.is_zero())
        .collect();
    let mut items: Vec<Vec<usize>> = Vec::new();
    for i in 0..prims.len() {
        for j in 0..prims.len() {
            if prims[i].0 + prims[j].0 <= max_degree {
                items.push(vec![i, j]);
                for k in 0..prims.len() {
                    if prims[i].0 + prims[j].0 + prims[k].0 <= max_degree {
                        items.push(vec![i, j, k]);
                    }
                }
            }
        }
    }
    sweep("primitive closure", Some(tag), max_degree, true, &items, |ix| {
        let x = &prims[ix[0]].1;
        let zs: Vec<Element<A::Basis>> = ix[1..].iter().map(|&i| prims[i].1.clone()).collect();
        let mut checks = vec![];
        if let [y] = zs.as_slice() {
            let m = product(alg, ProductKind::Middle, x, y);
            checks.push((is_primitive(alg, &m), format!("({x}) · ({y}) = {m} is not primitive")));
        }
        let b = crate::brace_gv::brace(alg, x, &zs);
        checks.push((is_primitive(alg, &b), format!("brace of primitives {x}; {zs:?} = {b} is not primitive")));
        tally(checks)
    })
}

/// Brace relation and GV_q law: all argument lists of length `<= 2` from the
/// degree-1 basis, plus single arguments from the degree-`<= 2` basis.
pub fn verify_brace_grid<A: TriAlgebra + ?Sized>(alg: &A, tag: AlgebraName, q: QMode) -> Vec<CheckReport> {
    type Els<A> = Vec<Element<<A as TriAlgebra>::Basis>>;
    let gens: Els<A> = alg.basis(1).into_iter().map(Element::basis).collect();
    let small: Els<A> = (1..=2).flat_map(|d| alg.basis(d)).map(Element::basis).collect();
    let mut lists: Vec<Els<A>> = vec![Vec::new()];
    let mut frontier = lists.clone();
    for _ in 0..2 {
        frontier = frontier
            .iter()
            .flat_map(|l| gens.iter().map(move |g| l.iter().cloned().chain([g.clone()]).collect::<Vec<_>>()))
            .collect();
        lists.extend(frontier.iter().cloned());
    }
    let mut cases: Vec<(Element<A::Basis>, Els<A>, Els<A>)> = Vec::new();
    for x in &gens {
        for ys in &lists {
            for zs in &lists {
                cases.push((x.clone(), ys.clone(), zs.clone()));
            }
        }
    }
    for x in &small {
        for y in &small {
            for z in &small {
                cases.push((x.clone(), vec![y.clone()], vec![z.clone()]));
            }
        }
    }
    let relation = sweep("brace relation", Some(tag), 2, true, &cases, |(x, ys, zs)| {
        let (l, r) = brace_relation_sides(alg, x, ys, zs);
        tally([(q.same(&l, &r), format!("x = {x}, ys = {ys:?}, zs = {zs:?}: {l} != {r}"))])
    });
    let mut gv_cases: Vec<(Element<A::Basis>, Element<A::Basis>, Els<A>)> = Vec::new();
    for x in &gens {
        for y in &gens {
            for zs in &lists {
                gv_cases.push((x.clone(), y.clone(), zs.clone()));
            }
        }
    }
    for x in &small {
        for y in &small {
            for z in &small {
                gv_cases.push((x.clone(), y.clone(), vec![z.clone()]));
            }
        }
    }
    let gv = sweep("GV_q law", Some(tag), 2, true, &gv_cases, |(x, y, zs)| {
        let (l, r) = gvq_sides(alg, x, y, zs, &-QPoly::q());
        tally([(q.same(&l, &r), format!("x = {x}, y = {y}, zs = {zs:?}: {l} != {r}"))])
    });
    vec![relation, gv]
}

/// `C_{n-1}` for the planar-tree primitive claim: 1, 1, 3, 11, 45, …
pub fn super_catalan(n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    // Little Schröder numbers s(n) with s(0) = s(1) = 1.
    let mut s = vec![1usize, 1];
    for k in 2..=n {
        let v = (3 * (2 * k - 1) * s[k - 1] - (k - 2) * s[k - 2]) / (k + 1);
        s.push(v);
    }
    s[n]
}

/// Rank of `e_tri` against `dim ker Δ̄` and the combinatorial counts.
pub fn verify_ranks(algs: &Algebras, max_degree: usize) -> Vec<CheckReport> {
    let qs = [0i64, 1, 5];
    let mut items: Vec<(AlgebraName, usize, i64)> = Vec::new();
    // MMR products change the size, so e_tri of a size-n basis element is not
    // confined to the size-n span and the comparison does not apply there.
    for a in [AlgebraName::St, AlgebraName::Pqsym, AlgebraName::Tree] {
        for n in 1..=max_degree {
            for v in qs {
                items.push((a, n, v));
            }
        }
    }
    let rank_of = |a: AlgebraName, n: usize, v: i64| match a {
        AlgebraName::St => (primitive_rank(&algs.st, n, v), primitive_kernel(&algs.st, n, v).len()),
        AlgebraName::Pqsym => (primitive_rank(&algs.pqsym, n, v), primitive_kernel(&algs.pqsym, n, v).len()),
        AlgebraName::Tree => (primitive_rank(&algs.tree, n, v), primitive_kernel(&algs.tree, n, v).len()),
        AlgebraName::Mperm => (primitive_rank(&algs.mperm, n, v), primitive_kernel(&algs.mperm, n, v).len()),
    };
    let consistent = sweep("rank e_tri = dim ker reduced coproduct", None, max_degree, true, &items, |&(a, n, v)| {
        let (r, k) = rank_of(a, n, v);
        tally([(r == k, format!("{a} degree {n} at q = {v}: rank {r}, kernel {k}"))])
    });
    let pq: Vec<(usize, i64)> = (1..=max_degree).flat_map(|n| qs.map(|v| (n, v))).collect();
    let pirr = sweep("pqsym rank e_tri = pirr_count", Some(AlgebraName::Pqsym), max_degree, true, &pq, |&(n, v)| {
        let r = primitive_rank(&algs.pqsym, n, v);
        let want = pirr_count(n);
        tally([(r == want, format!("degree {n} at q = {v}: rank {r}, pirr_count {want}"))])
    });
    // The claimed C_{n-1} does not hold for trees (the cofree count is larger);
    // kept as an expected failure so the discrepancy stays visible.
    let tr = sweep("tree rank e_tri = C_{n-1}", Some(AlgebraName::Tree), max_degree, false, &pq, |&(n, v)| {
        let r = primitive_rank(&algs.tree, n, v);
        let want = super_catalan(n - 1);
        tally([(r == want, format!("degree {n} at q = {v}: rank {r}, C_{{n-1}} = {want}"))])
    });
    vec![consistent, pirr, tr]
}

/// Degree budgets for a `verify` run; `cap` lowers every budget.
#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    pub axioms: usize,
    pub bialgebra: usize,
    pub coassociativity: usize,
    pub oracle: usize,
}

pub fn default_budgets(a: AlgebraName) -> Budgets {
    match a {
        AlgebraName::St => Budgets { axioms: 6, bialgebra: 5, coassociativity: 6, oracle: 6 },
        AlgebraName::Pqsym => Budgets { axioms: 5, bialgebra: 5, coassociativity: 6, oracle: 6 },
        AlgebraName::Tree => Budgets { axioms: 4, bialgebra: 4, coassociativity: 5, oracle: 0 },
        AlgebraName::Mperm => Budgets { axioms: 4, bialgebra: 4, coassociativity: 5, oracle: 5 },
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub algebras: Vec<AlgebraName>,
    pub q: QMode,
    pub cap: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { algebras: AlgebraName::ALL.to_vec(), q: QMode::Symbolic, cap: None }
    }
}

impl VerifyOptions {
    fn deg(&self, d: usize) -> usize {
        self.cap.map_or(d, |c| d.min(c))
    }
}

fn algebra_suite<A: TriAlgebra + ?Sized>(alg: &A, tag: AlgebraName, opts: &VerifyOptions) -> Vec<CheckReport> {
    let b = default_budgets(tag);
    let q = opts.q;
    let mut out = vec![
        verify_axioms(alg, tag, opts.deg(b.axioms), q),
        verify_bialgebra(alg, tag, opts.deg(b.bialgebra), q),
        verify_coassociativity(alg, tag, opts.deg(b.coassociativity)),
    ];
    out.extend(verify_projector(alg, tag, opts.deg(4), q));
    out.push(verify_primitive_closure(alg, tag, opts.deg(4)));
    out.extend(verify_brace_grid(alg, tag, q));
    out
}

/// The full suite: per-algebra sweeps, oracles, morphisms and ranks.
pub fn verify_all(algs: &Algebras, opts: &VerifyOptions) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let has = |a| opts.algebras.contains(&a);
    for &a in &opts.algebras {
        out.extend(match a {
            AlgebraName::St => algebra_suite(&algs.st, a, opts),
            AlgebraName::Pqsym => algebra_suite(&algs.pqsym, a, opts),
            AlgebraName::Tree => algebra_suite(&algs.tree, a, opts),
            AlgebraName::Mperm => algebra_suite(&algs.mperm, a, opts),
        });
    }
    if has(AlgebraName::St) {
        out.push(verify_st_oracle(algs, opts.deg(6)));
    }
    if has(AlgebraName::Pqsym) {
        out.push(verify_pqsym_oracle(algs, opts.deg(6)));
        out.push(verify_pf_coproduct_oracle(opts.deg(5)));
    }
    if has(AlgebraName::Tree) {
        out.push(verify_corollas(algs, opts.deg(4)));
    }
    if has(AlgebraName::Mperm) {
        out.push(verify_mperm_oracle(algs, opts.deg(5)));
        out.push(verify_std_m(opts.deg(5)));
    }
    if has(AlgebraName::St) && has(AlgebraName::Pqsym) {
        out.push(verify_alpha(algs, opts.deg(4), opts.q));
        out.push(verify_iota_witness(algs));
    }
    if has(AlgebraName::St) && has(AlgebraName::Mperm) {
        out.push(verify_phi(algs, opts.deg(4), opts.q));
        out.push(verify_phi_surjective(opts.deg(4)));
    }
    if opts.algebras.len() == AlgebraName::ALL.len() {
        out.extend(verify_ranks(algs, opts.deg(4)));
    }
    out
}

pub fn all_as_expected(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::as_expected)
}

pub fn reports_text(reports: &[CheckReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s.push_str(&r.to_string());
        s.push('\n');
    }
    let bad = reports.iter().filter(|r| !r.as_expected()).count();
    s.push_str(&format!("{} checks, {} unexpected\n", reports.len(), bad));
    s
}

pub fn reports_json(reports: &[CheckReport]) -> Value {
    json!({ "checks": reports, "ok": all_as_expected(reports) })
}

/// Basis counts of one degree.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DimsRow {
    pub n: usize,
    pub st: usize,
    pub pf: usize,
    pub ndpf: usize,
    pub trees: usize,
    pub mperm: usize,
    pub mperm_recursive: usize,
    pub pirr: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct RankRow {
    pub algebra: AlgebraName,
    pub n: usize,
    pub q: i64,
    pub rank: usize,
    pub kernel: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct DimsReport {
    pub rows: Vec<DimsRow>,
    pub ranks: Vec<RankRow>,
}

pub fn dims_report(algs: &Algebras, max_degree: usize, rank_degree: usize) -> DimsReport {
    let rows = (1..=max_degree)
        .into_par_iter()
        .map(|n| DimsRow {
            n,
            st: surjections(n).len(),
            pf: parking_functions(n).len(),
            ndpf: nd_parking_functions(n).len(),
            trees: algs.tree.basis(n).len(),
            mperm: mpermutations(n).len(),
            mperm_recursive: mpermutations_recursive(n).len(),
            pirr: pirr_count(n),
        })
        .collect();
    let mut jobs = Vec::new();
    for a in AlgebraName::ALL {
        for n in 1..=rank_degree {
            for q in [0i64, 1, 5] {
                jobs.push((a, n, q));
            }
        }
    }
    let ranks = jobs
        .into_par_iter()
        .map(|(a, n, q)| {
            let (rank, kernel) = match a {
                AlgebraName::St => (primitive_rank(&algs.st, n, q), primitive_kernel(&algs.st, n, q).len()),
                AlgebraName::Pqsym => (primitive_rank(&algs.pqsym, n, q), primitive_kernel(&algs.pqsym, n, q).len()),
                AlgebraName::Tree => (primitive_rank(&algs.tree, n, q), primitive_kernel(&algs.tree, n, q).len()),
                AlgebraName::Mperm => (primitive_rank(&algs.mperm, n, q), primitive_kernel(&algs.mperm, n, q).len()),
            };
            RankRow { algebra: a, n, q, rank, kernel }
        })
        .collect();
    DimsReport { rows, ranks }
}

impl fmt::Display for DimsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3} {:>8} {:>8} {:>6} {:>6} {:>6} {:>6} {:>6}", "n", "ST", "PF", "NDPF", "T", "S^M", "S^M'", "PIrr")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>3} {:>8} {:>8} {:>6} {:>6} {:>6} {:>6} {:>6}",
                r.n, r.st, r.pf, r.ndpf, r.trees, r.mperm, r.mperm_recursive, r.pirr
            )?;
        }
        if !self.ranks.is_empty() {
            writeln!(f, "\nrank of e_tri / dim ker reduced coproduct")?;
            writeln!(f, "{:<6} {:>3} {:>4} {:>6} {:>6}", "alg", "n", "q", "rank", "ker")?;
            for r in &self.ranks {
                writeln!(f, "{:<6} {:>3} {:>4} {:>6} {:>6}", r.algebra.as_str(), r.n, r.q, r.rank, r.kernel)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn super_catalan_values() {
        let v: Vec<usize> = (0..6).map(super_catalan).collect();
        assert_eq!(v, vec![1, 1, 3, 11, 45, 197]);
    }

    #[test]
    fn tuples_respect_budget() {
        let alg = StAlgebra::new();
        // 1·1·1 + 3 orderings of degree (2,1,1) with 3 surjections of degree 2
        assert_eq!(basis_tuples(&alg, 3, 3).len(), 1);
        assert_eq!(basis_tuples(&alg, 3, 4).len(), 1 + 3 * 3);
        assert_eq!(basis_tuples(&alg, 2, 3).len(), 1 + 2 * 3);
    }

    #[test]
    fn small_sweeps_pass() {
        let algs = Algebras::new();
        let q = QMode::Symbolic;
        assert!(verify_axioms(&algs.st, AlgebraName::St, 4, q).passed());
        assert!(verify_axioms(&algs.tree, AlgebraName::Tree, 3, q).passed());
        assert!(verify_bialgebra(&algs.pqsym, AlgebraName::Pqsym, 3, q).passed());
        assert!(verify_bialgebra(&algs.mperm, AlgebraName::Mperm, 3, q).passed());
        assert!(verify_coassociativity(&algs.tree, AlgebraName::Tree, 4).passed());
        assert!(verify_alpha(&algs, 3, q).passed());
        assert!(verify_phi(&algs, 3, q).passed());
        assert!(verify_iota_witness(&algs).as_expected());
    }

    #[test]
    fn broken_relation_is_reported() {
        // Dropping the ∗ in relation 1 must be caught on the smallest triple.
        let alg = StAlgebra::new();
        let x = Element::basis(Surjection::parse("(1)").unwrap());
        let lhs = product(&alg, ProductKind::Left, &product(&alg, ProductKind::Left, &x, &x), &x);
        let wrong = product(&alg, ProductKind::Left, &x, &product(&alg, ProductKind::Left, &x, &x));
        assert_ne!(lhs, wrong);
    }

    #[test]
    fn q_mode_parsing() {
        assert_eq!("symbolic".parse::<QMode>().unwrap(), QMode::Symbolic);
        assert_eq!("5".parse::<QMode>().unwrap(), QMode::Int(5));
        assert!("x".parse::<QMode>().is_err());
        assert_eq!("mmr".parse::<AlgebraName>().unwrap(), AlgebraName::Mperm);
    }
}
