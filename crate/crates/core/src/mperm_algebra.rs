//! `MMR(q)`: big multipermutations, `std_M`, the weighted products and the
//! prefix coproduct, the quotient map `φ: ST(q) → MMR(q)`, and word lifting.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{kind_index, share_triple, Memo, TriAlgebra, Triple};
use crate::error::{Error, Result};
use crate::linear::{Element, ProductKind, Slot, Tensor2};
use crate::qpoly::QPoly;
use crate::words::{compress_runs, std_word, surjections, Surjection, Word};

/// Ordered partition of `[n]` with no block containing both `i` and `i + 1`.
/// Blocks are stored sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MPermutation {
    blocks: Vec<Vec<u32>>,
}

fn has_consecutive(block: &[u32]) -> bool {
    block.windows(2).any(|w| w[1] == w[0] + 1)
}

impl MPermutation {
    pub fn new(blocks: Vec<Vec<u32>>) -> Result<Self> {
        let mut blocks = blocks;
        for b in &mut blocks {
            b.sort_unstable();
        }
        let mut all: Vec<u32> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        let n = all.len() as u32;
        let is_partition = n > 0 && all.iter().copied().eq(1..=n) && blocks.iter().all(|b| !b.is_empty());
        if !is_partition || blocks.iter().any(|b| has_consecutive(b)) {
            return Err(Error::InvalidBasis(format!("{blocks:?} is not an M-permutation")));
        }
        Ok(MPermutation { blocks })
    }

    fn new_unchecked(blocks: Vec<Vec<u32>>) -> Self {
        let m = MPermutation { blocks };
        debug_assert!(MPermutation::new(m.blocks.clone()).is_ok(), "{m}");
        m
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `B|_J`: blocks intersected with `lo..=hi`, empty intersections dropped.
    pub fn restrict(&self, lo: u32, hi: u32) -> Vec<Vec<u32>> {
        restrict_blocks(&self.blocks, lo, hi)
    }

    /// Parses `[(1,4,6),(2,7),(3,5)]`; singleton blocks may be bare integers.
    pub fn parse(s: &str) -> Result<Self> {
        Self::new(parse_blocks(s)?)
    }
}

pub fn restrict_blocks(blocks: &[Vec<u32>], lo: u32, hi: u32) -> Vec<Vec<u32>> {
    blocks
        .iter()
        .map(|b| b.iter().copied().filter(|&x| lo <= x && x <= hi).collect::<Vec<_>>())
        .filter(|b| !b.is_empty())
        .collect()
}

/// Parses an ordered list of integer sets without checking the
/// M-permutation conditions.
pub fn parse_blocks(s: &str) -> Result<Vec<Vec<u32>>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("M-permutation must look like [(1,3),2]: `{s}`")))?;
    let num = |t: &str| -> Result<u32> {
        t.trim()
            .parse::<u32>()
            .ok()
            .filter(|&x| x > 0)
            .ok_or_else(|| Error::Parse(format!("bad entry `{}` in `{s}`", t.trim())))
    };
    let mut blocks = Vec::new();
    let mut rest = inner.trim();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('(') {
            let close = r.find(')').ok_or_else(|| Error::Parse(format!("unclosed block in `{s}`")))?;
            blocks.push(r[..close].split(',').map(num).collect::<Result<Vec<u32>>>()?);
            rest = r[close + 1..].trim_start();
        } else {
            let end = rest.find(',').unwrap_or(rest.len());
            blocks.push(vec![num(&rest[..end])?]);
            rest = &rest[end..];
        }
        rest = rest.trim_start();
        if let Some(r) = rest.strip_prefix(',') {
            rest = r.trim_start();
            if rest.is_empty() {
                return Err(Error::Parse(format!("trailing comma in `{s}`")));
            }
        } else if !rest.is_empty() {
            return Err(Error::Parse(format!("expected `,` in `{s}`")));
        }
    }
    Ok(blocks)
}

impl fmt::Display for MPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({})", b.iter().map(u32::to_string).collect::<Vec<_>>().join(","))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for MPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Order-preserving relabel of the support onto `[N]`.
fn relabel_support(blocks: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut support: Vec<u32> = blocks.iter().flatten().copied().collect();
    support.sort_unstable();
    blocks
        .iter()
        .map(|b| b.iter().map(|x| support.binary_search(x).unwrap() as u32 + 1).collect())
        .collect()
}

fn sorted_nonempty(blocks: &[Vec<u32>]) -> Result<Vec<Vec<u32>>> {
    let out: Vec<Vec<u32>> = blocks
        .iter()
        .filter(|b| !b.is_empty())
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    let total: usize = out.iter().map(Vec::len).sum();
    let distinct: BTreeSet<u32> = out.iter().flatten().copied().collect();
    if out.is_empty() {
        return Err(Error::EmptyList);
    }
    if distinct.len() != total {
        return Err(Error::Precondition("blocks are not disjoint".into()));
    }
    Ok(out)
}

/// `std_M`: relabel, then repeatedly delete every `i + 1` sharing a block
/// with `i` and relabel again.
pub fn std_m(blocks: &[Vec<u32>]) -> Result<MPermutation> {
    let mut cur = relabel_support(&sorted_nonempty(blocks)?);
    loop {
        let doomed: BTreeSet<u32> =
            cur.iter().flat_map(|b| b.windows(2).filter(|w| w[1] == w[0] + 1).map(|w| w[1])).collect();
        if doomed.is_empty() {
            return Ok(MPermutation::new_unchecked(cur));
        }
        let kept: Vec<Vec<u32>> = cur.iter().map(|b| b.iter().copied().filter(|x| !doomed.contains(x)).collect()).collect();
        cur = relabel_support(&kept);
    }
}

/// Oracle for `std_m`: delete one offending element at a time, smallest first.
pub fn std_m_sequential(blocks: &[Vec<u32>]) -> Result<MPermutation> {
    let mut cur = relabel_support(&sorted_nonempty(blocks)?);
    loop {
        let hit = cur.iter().flat_map(|b| b.windows(2).filter(|w| w[1] == w[0] + 1).map(|w| w[1])).min();
        let Some(x) = hit else { return Ok(MPermutation::new_unchecked(cur)) };
        let kept: Vec<Vec<u32>> = cur.iter().map(|b| b.iter().copied().filter(|&y| y != x).collect()).collect();
        cur = relabel_support(&kept);
    }
}

/// `S^M_n` via surjections with no equal adjacent letters, read as fibres.
pub fn mpermutations(n: usize) -> Vec<MPermutation> {
    let mut out: Vec<MPermutation> = surjections(n)
        .into_iter()
        .filter(|f| f.windows(2).all(|w| w[0] != w[1]))
        .map(|f| MPermutation::new_unchecked(fibres(&f)))
        .collect();
    out.sort();
    out
}

/// `S^M_n` by inserting `n` into every element of `S^M_{n-1}`.
pub fn mpermutations_recursive(n: usize) -> Vec<MPermutation> {
    if n == 0 {
        return Vec::new();
    }
    let mut level = vec![MPermutation::new_unchecked(vec![vec![1]])];
    for k in 2..=n as u32 {
        let mut next = Vec::new();
        for m in &level {
            let l = m.blocks.len();
            for pos in 0..=l {
                let mut b = m.blocks.clone();
                b.insert(pos, vec![k]);
                next.push(MPermutation::new_unchecked(b));
            }
            for i in 0..l {
                if !m.blocks[i].contains(&(k - 1)) {
                    let mut b = m.blocks.clone();
                    b[i].push(k);
                    next.push(MPermutation::new_unchecked(b));
                }
            }
        }
        level = next;
    }
    level.sort();
    level
}

fn fibres(f: &[u32]) -> Vec<Vec<u32>> {
    let r = *f.iter().max().unwrap() as usize;
    let mut out = vec![Vec::new(); r];
    for (i, &x) in f.iter().enumerate() {
        out[x as usize - 1].push(i as u32 + 1);
    }
    out
}

/// `φ(f) = std_M[f⁻¹(1), …, f⁻¹(r)]`.
pub fn phi(f: &Surjection) -> MPermutation {
    std_m(&fibres(f)).expect("fibres of a surjection are a set partition")
}

/// The unique `h` with `std(h) = f` whose run compression is `hbar`.
pub fn lift_word(f: &Surjection, hbar: &Word) -> Result<Word> {
    let fbar = compress_runs(f);
    if hbar.is_empty() || std_word(hbar).letters() != fbar.as_slice() {
        return Err(Error::Precondition(format!("std({hbar}) must equal the run compression of {f}")));
    }
    let mut out = Vec::with_capacity(f.len());
    let mut j = 0;
    for (i, &x) in f.iter().enumerate() {
        if i > 0 && f[i - 1] != x {
            j += 1;
        }
        out.push(hbar[j]);
    }
    Ok(Word(out))
}

/// Every way of interleaving two block lists, optionally merging a block of
/// each side; `forced` names a pair that must be merged, `forbidden` one that
/// must not. Each output carries its block list and the side pattern of
/// every block.
struct QuasiShuffle<'a> {
    left: &'a [Vec<u32>],
    right: &'a [Vec<u32>],
    forced: Option<(usize, usize)>,
    forbidden: Option<(usize, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Origin {
    Left,
    Both,
    Right,
}

impl QuasiShuffle<'_> {
    fn run(&self, out: &mut Vec<(Vec<Vec<u32>>, Origin, usize)>) {
        let mut acc = Vec::new();
        self.rec(0, 0, &mut acc, Origin::Left, 0, out);
    }

    fn rec(
        &self,
        i: usize,
        j: usize,
        acc: &mut Vec<Vec<u32>>,
        last: Origin,
        merges: usize,
        out: &mut Vec<(Vec<Vec<u32>>, Origin, usize)>,
    ) {
        if i == self.left.len() && j == self.right.len() {
            out.push((acc.clone(), last, merges));
            return;
        }
        // A forced pair must be taken together, so neither member may be
        // emitted alone.
        let forced_left = self.forced.is_some_and(|(a, _)| a == i);
        let forced_right = self.forced.is_some_and(|(_, b)| b == j);
        if i < self.left.len() && !forced_left {
            acc.push(self.left[i].clone());
            self.rec(i + 1, j, acc, Origin::Left, merges, out);
            acc.pop();
        }
        if j < self.right.len() && !forced_right {
            acc.push(self.right[j].clone());
            self.rec(i, j + 1, acc, Origin::Right, merges, out);
            acc.pop();
        }
        if i < self.left.len() && j < self.right.len() && self.forbidden != Some((i, j)) {
            if forced_left != forced_right {
                return;
            }
            let mut b = self.left[i].clone();
            b.extend_from_slice(&self.right[j]);
            b.sort_unstable();
            b.dedup();
            acc.push(b);
            self.rec(i + 1, j + 1, acc, Origin::Both, merges + 1, out);
            acc.pop();
        }
    }
}

fn shift(blocks: &[Vec<u32>], k: u32) -> Vec<Vec<u32>> {
    blocks.iter().map(|b| b.iter().map(|x| x + k).collect()).collect()
}

fn block_index_containing(blocks: &[Vec<u32>], x: u32) -> usize {
    blocks.iter().position(|b| b.contains(&x)).expect("value present")
}

/// All three partial products, as quasi-shuffles of the block lists of `B`
/// and a shifted copy of `D`.
pub fn mperm_products_fast(b: &MPermutation, d: &MPermutation) -> [Element<MPermutation>; 3] {
    let n = b.size() as u32;
    let (r, s) = (b.block_count(), d.block_count());
    let bn = block_index_containing(&b.blocks, n);
    let d1 = block_index_containing(&d.blocks, 1);
    let mut words = Vec::new();
    // Size n + m: the blocks holding n and n + 1 may not merge.
    let disjoint = shift(&d.blocks, n);
    QuasiShuffle { left: &b.blocks, right: &disjoint, forced: None, forbidden: Some((bn, d1)) }.run(&mut words);
    // Size n + m - 1: the value n is shared, so its two blocks merge.
    let overlap = shift(&d.blocks, n - 1);
    QuasiShuffle { left: &b.blocks, right: &overlap, forced: Some((bn, d1)), forbidden: None }.run(&mut words);
    let mut out: [Element<MPermutation>; 3] = Default::default();
    for (w, last, merges) in words {
        debug_assert_eq!(merges, r + s - w.len());
        let (kind, e) = match last {
            Origin::Left => (ProductKind::Left, merges as u32),
            Origin::Both => (ProductKind::Middle, merges as u32 - 1),
            Origin::Right => (ProductKind::Right, merges as u32),
        };
        out[kind_index(kind)].add_term(Slot::Basis(MPermutation::new_unchecked(w)), &QPoly::q_pow(e));
    }
    out
}

/// The literal definition: filter all of `S^M_{n+m}` and `S^M_{n+m-1}`.
pub fn mperm_product_oracle(kind: ProductKind, b: &MPermutation, d: &MPermutation) -> Element<MPermutation> {
    let n = b.size() as u32;
    let m = d.size() as u32;
    let mut out = Element::zero();
    for (size, lo) in [(n + m, n + 1), (n + m - 1, n)] {
        let hi = lo + m - 1;
        for w in mperm_candidates(size as usize) {
            if w.restrict(1, n) != b.blocks || std_m(&w.restrict(lo, hi)).ok().as_ref() != Some(d) {
                continue;
            }
            let last = w.blocks.last().unwrap();
            let meets_b = last.iter().any(|&x| x <= n);
            let meets_d = last.iter().any(|&x| lo <= x && x <= hi);
            let mixed = w.blocks.iter().filter(|blk| {
                blk.iter().any(|&x| x <= n) && blk.iter().any(|&x| lo <= x && x <= hi)
            });
            let cap = mixed.count() as u32;
            let (got, e) = match (meets_b, meets_d) {
                (true, true) => (ProductKind::Middle, cap - 1),
                (true, false) => (ProductKind::Left, cap),
                _ => (ProductKind::Right, cap),
            };
            if got == kind {
                out.add_term(Slot::Basis(w.clone()), &QPoly::q_pow(e));
            }
        }
    }
    out
}

fn mperm_candidates(n: usize) -> Vec<MPermutation> {
    if n == 0 {
        Vec::new()
    } else {
        mpermutations(n)
    }
}

/// `Δ(B) = Σ_{i=0}^{l} std_M(B_{<=i}) ⊗ std_M(B_{>i})`.
pub fn mperm_coproduct(b: &MPermutation) -> Tensor2<MPermutation> {
    let l = b.block_count();
    let side = |blocks: &[Vec<u32>]| {
        if blocks.is_empty() {
            Slot::Unit
        } else {
            Slot::Basis(std_m(blocks).expect("non-empty disjoint blocks"))
        }
    };
    let mut out = Tensor2::zero();
    for i in 0..=l {
        out.add_term(side(&b.blocks[..i]), side(&b.blocks[i..]), &QPoly::one());
    }
    out
}

#[derive(Default)]
pub struct MpermAlgebra {
    products: Memo<(MPermutation, MPermutation), Triple<MPermutation>>,
    coproducts: Memo<MPermutation, Tensor2<MPermutation>>,
}

impl MpermAlgebra {
    pub fn new() -> Self {
        Self::default()
    }
}

impl TriAlgebra for MpermAlgebra {
    type Basis = MPermutation;

    fn name(&self) -> &'static str {
        "mperm"
    }

    fn partial(&self, kind: ProductKind, a: &MPermutation, b: &MPermutation) -> Arc<Element<MPermutation>> {
        let t = self
            .products
            .get_or_insert_with(&(a.clone(), b.clone()), || share_triple(mperm_products_fast(a, b)));
        Arc::clone(&t[kind_index(kind)])
    }

    fn coproduct_basis(&self, a: &MPermutation) -> Arc<Tensor2<MPermutation>> {
        self.coproducts.get_or_insert_with(a, || mperm_coproduct(a))
    }

    fn degree(&self, a: &MPermutation) -> usize {
        a.size()
    }

    fn grade(&self, a: &MPermutation) -> usize {
        a.block_count()
    }

    fn basis(&self, degree: usize) -> Vec<MPermutation> {
        mpermutations(degree)
    }

    fn parse_basis(&self, s: &str) -> Result<MPermutation> {
        MPermutation::parse(s)
    }
}
