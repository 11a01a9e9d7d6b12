//! The free q-tridendriform algebra on one generator: planar rooted trees
//! with grafting products, and its coproduct.

use std::fmt;
use std::sync::Arc;

use itertools::Itertools;

use crate::algebra::{star_basis, Memo, TriAlgebra};
use crate::error::{Error, Result};
use crate::linear::{Element, ProductKind, Slot, Tensor2};
use crate::qpoly::QPoly;

/// `|` or `V(t¹, …, tʳ)` with `r >= 2`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn graft(children: Vec<PlanarTree>) -> Result<Self> {
        if children.len() < 2 {
            return Err(Error::InvalidBasis(format!("graft needs at least 2 children, got {}", children.len())));
        }
        Ok(PlanarTree::Node(children))
    }

    /// `Y = V(|, |)`.
    pub fn y() -> Self {
        PlanarTree::Node(vec![PlanarTree::Leaf, PlanarTree::Leaf])
    }

    /// The corolla with `n + 1` leaves.
    pub fn corolla(n: usize) -> Self {
        PlanarTree::Node(vec![PlanarTree::Leaf; n + 1])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, PlanarTree::Leaf)
    }

    pub fn children(&self) -> &[PlanarTree] {
        match self {
            PlanarTree::Leaf => &[],
            PlanarTree::Node(c) => c,
        }
    }

    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(c) => c.iter().map(PlanarTree::leaves).sum(),
        }
    }

    pub fn degree(&self) -> usize {
        self.leaves() - 1
    }

    pub fn is_corolla(&self) -> bool {
        !self.is_leaf() && self.children().iter().all(PlanarTree::is_leaf)
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut p = TreeParser { s: s.as_bytes(), i: 0 };
        let t = p.tree()?;
        p.skip_ws();
        if p.i != p.s.len() {
            return Err(Error::Parse(format!("trailing input in tree `{s}`")));
        }
        Ok(t)
    }

    /// Like `parse`, but rejects the bare leaf.
    pub fn parse_basis(s: &str) -> Result<Self> {
        let t = Self::parse(s)?;
        if t.is_leaf() {
            return Err(Error::InvalidBasis("the bare leaf is not a basis tree".into()));
        }
        Ok(t)
    }
}

struct TreeParser<'a> {
    s: &'a [u8],
    i: usize,
}

impl TreeParser<'_> {
    fn skip_ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.s.get(self.i) == Some(&c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn tree(&mut self) -> Result<PlanarTree> {
        if self.eat(b'|') {
            return Ok(PlanarTree::Leaf);
        }
        if !(self.eat(b'V') && self.eat(b'(')) {
            return Err(Error::Parse(format!("expected `|` or `V(` at byte {}", self.i)));
        }
        let mut children = vec![self.tree()?];
        while self.eat(b',') {
            children.push(self.tree()?);
        }
        if !self.eat(b')') {
            return Err(Error::Parse(format!("expected `)` at byte {}", self.i)));
        }
        PlanarTree::graft(children).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlanarTree::Leaf => write!(f, "|"),
            PlanarTree::Node(c) => {
                write!(f, "V(")?;
                for (i, t) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All trees with `k` leaves (the leaf itself for `k = 1`).
fn trees_with_leaves(k: usize, table: &mut Vec<Vec<PlanarTree>>) -> Vec<PlanarTree> {
    while table.len() <= k {
        let j = table.len();
        let next = if j == 0 {
            Vec::new()
        } else if j == 1 {
            vec![PlanarTree::Leaf]
        } else {
            let mut out = Vec::new();
            for comp in compositions(j) {
                if comp.len() < 2 {
                    continue;
                }
                let choices: Vec<&Vec<PlanarTree>> = comp.iter().map(|&p| &table[p]).collect();
                for kids in choices.iter().map(|v| v.iter()).multi_cartesian_product() {
                    out.push(PlanarTree::Node(kids.into_iter().cloned().collect()));
                }
            }
            out.sort();
            out
        };
        table.push(next);
    }
    table[k].clone()
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `T_n`: planar trees with `n + 1` leaves, sorted.
pub fn enumerate_trees(n: usize) -> Vec<PlanarTree> {
    trees_with_leaves(n + 1, &mut Vec::new())
}

#[derive(Default)]
pub struct TreeAlgebra {
    products: Memo<(ProductKind, PlanarTree, PlanarTree), Element<PlanarTree>>,
    coproducts: Memo<PlanarTree, Tensor2<PlanarTree>>,
}

impl TreeAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    /// `∗` inside a graft slot, where `|` is a two-sided identity and `|∗| = |`.
    fn slot_star(&self, a: &PlanarTree, b: &PlanarTree) -> Element<PlanarTree> {
        match (a.is_leaf(), b.is_leaf()) {
            (true, _) => Element::basis(b.clone()),
            (false, true) => Element::basis(a.clone()),
            (false, false) => star_basis(self, a, b),
        }
    }

    fn compute_partial(&self, kind: ProductKind, t: &PlanarTree, w: &PlanarTree) -> Element<PlanarTree> {
        let tc = t.children();
        let wc = w.children();
        let r = tc.len();
        let (prefix, slot, suffix): (&[PlanarTree], Element<PlanarTree>, &[PlanarTree]) = match kind {
            ProductKind::Left => (&tc[..r - 1], self.slot_star(&tc[r - 1], w), &[]),
            ProductKind::Middle => (&tc[..r - 1], self.slot_star(&tc[r - 1], &wc[0]), &wc[1..]),
            ProductKind::Right => (&[], self.slot_star(t, &wc[0]), &wc[1..]),
            ProductKind::Star => unreachable!("star is not a partial product"),
        };
        let mut out = Element::zero();
        for (s, c) in slot.basis_terms() {
            let mut kids = prefix.to_vec();
            kids.push(s.clone());
            kids.extend_from_slice(suffix);
            out.add_term(Slot::Basis(PlanarTree::Node(kids)), c);
        }
        out
    }

    fn compute_coproduct(&self, t: &PlanarTree) -> Tensor2<PlanarTree> {
        // Partial sums over the children seen so far: (left product, right children).
        let mut partial: Vec<(Element<PlanarTree>, Vec<PlanarTree>, QPoly)> =
            vec![(Element::unit(), Vec::new(), QPoly::one())];
        for child in t.children() {
            let mut next = Vec::new();
            for (left, rights, c) in &partial {
                if child.is_leaf() {
                    let mut r = rights.clone();
                    r.push(PlanarTree::Leaf);
                    next.push((left.clone(), r, c.clone()));
                    continue;
                }
                for (l, r, x) in self.coproduct_basis(child).terms() {
                    let l_el = match l {
                        Slot::Unit => Element::unit(),
                        Slot::Basis(b) => Element::basis(b.clone()),
                    };
                    let mut rs = rights.clone();
                    rs.push(match r {
                        Slot::Unit => PlanarTree::Leaf,
                        Slot::Basis(b) => b.clone(),
                    });
                    next.push((crate::algebra::star(self, left, &l_el), rs, c.mul(x)));
                }
            }
            partial = next;
        }
        let mut out = Tensor2::zero();
        for (left, rights, c) in partial {
            let right = Element::basis(PlanarTree::Node(rights));
            out.add_product(&left, &right, &c);
        }
        out.add_term(Slot::Basis(t.clone()), Slot::Unit, &QPoly::one());
        out
    }
}

impl TriAlgebra for TreeAlgebra {
    type Basis = PlanarTree;

    fn name(&self) -> &'static str {
        "tree"
    }

    fn partial(&self, kind: ProductKind, a: &PlanarTree, b: &PlanarTree) -> Arc<Element<PlanarTree>> {
        debug_assert!(!a.is_leaf() && !b.is_leaf());
        self.products
            .get_or_insert_with(&(kind, a.clone(), b.clone()), || self.compute_partial(kind, a, b))
    }

    fn coproduct_basis(&self, a: &PlanarTree) -> Arc<Tensor2<PlanarTree>> {
        self.coproducts.get_or_insert_with(a, || self.compute_coproduct(a))
    }

    fn degree(&self, a: &PlanarTree) -> usize {
        a.degree()
    }

    fn basis(&self, degree: usize) -> Vec<PlanarTree> {
        enumerate_trees(degree)
    }

    fn parse_basis(&self, s: &str) -> Result<PlanarTree> {
        PlanarTree::parse_basis(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: &str) -> PlanarTree {
        PlanarTree::parse(x).unwrap()
    }

    #[test]
    fn parse_and_print() {
        for s in ["|", "V(|,|)", "V(V(|,|),|)", "V(|,V(|,|,|),|)"] {
            assert_eq!(t(s).to_string(), s);
        }
        assert!(PlanarTree::parse("V(|)").is_err());
        assert!(PlanarTree::parse("V(|,|").is_err());
        assert!(PlanarTree::parse_basis("|").is_err());
        assert_eq!(t(" V( | , | ) "), PlanarTree::y());
    }

    #[test]
    fn graft_examples() {
        let leaf = PlanarTree::Leaf;
        assert_eq!(PlanarTree::graft(vec![leaf.clone(), leaf.clone()]).unwrap(), PlanarTree::y());
        assert_eq!(PlanarTree::graft(vec![leaf.clone(); 3]).unwrap(), PlanarTree::corolla(2));
        assert_eq!(PlanarTree::graft(vec![PlanarTree::y(), leaf.clone()]).unwrap().degree(), 2);
        assert!(PlanarTree::graft(vec![leaf]).is_err());
    }

    #[test]
    fn counts() {
        let want = [1, 3, 11, 45, 197];
        for (n, &c) in want.iter().enumerate() {
            let ts = enumerate_trees(n + 1);
            assert_eq!(ts.len(), c);
            assert!(ts.iter().all(|x| x.degree() == n + 1));
        }
    }

    #[test]
    fn products_of_y() {
        let alg = TreeAlgebra::new();
        let y = PlanarTree::y();
        assert_eq!(*alg.partial(ProductKind::Right, &y, &y), Element::basis(t("V(V(|,|),|)")));
        assert_eq!(*alg.partial(ProductKind::Middle, &y, &y), Element::basis(t("V(|,|,|)")));
        assert_eq!(*alg.partial(ProductKind::Left, &y, &y), Element::basis(t("V(|,V(|,|))")));
    }

    #[test]
    fn coproduct_examples() {
        let alg = TreeAlgebra::new();
        assert_eq!(alg.coproduct_basis(&PlanarTree::y()).to_string(), "1 # V(|,|) + V(|,|) # 1");
        assert!(alg.coproduct_basis(&PlanarTree::corolla(2)).reduced().is_zero());
        let d = alg.coproduct_basis(&t("V(V(|,|),|)"));
        assert_eq!(d.to_string(), "1 # V(V(|,|),|) + V(|,|) # V(|,|) + V(V(|,|),|) # 1");
    }
}
