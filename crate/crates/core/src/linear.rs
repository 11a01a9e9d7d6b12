//! Free `QPoly`-modules over a basis family, augmented by an adjoined unit,
//! plus the rank-2 and rank-3 tensors that coproducts produce.

use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::qpoly::{parse_scalar_factor, split_summands, QPoly};

/// A basis object of one of the combinatorial families.
pub trait BasisObject: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl<T> BasisObject for T where T: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}

/// Either the adjoined unit `1` or a basis object. `Unit` sorts first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot<B> {
    Unit,
    Basis(B),
}

impl<B> Slot<B> {
    pub fn is_unit(&self) -> bool {
        matches!(self, Slot::Unit)
    }

    pub fn basis(&self) -> Option<&B> {
        match self {
            Slot::Unit => None,
            Slot::Basis(b) => Some(b),
        }
    }
}

impl<B: fmt::Display> fmt::Display for Slot<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slot::Unit => write!(f, "1"),
            Slot::Basis(b) => write!(f, "{b}"),
        }
    }
}

/// The three partial products and their weighted sum `∗ = ≺ + q· + ≻`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProductKind {
    /// `≺`
    Left,
    /// `·`
    Middle,
    /// `≻`
    Right,
    /// `∗`
    Star,
}

impl ProductKind {
    pub const PARTIALS: [ProductKind; 3] = [ProductKind::Left, ProductKind::Middle, ProductKind::Right];

    pub fn symbol(self) -> &'static str {
        match self {
            ProductKind::Left => "≺",
            ProductKind::Middle => "·",
            ProductKind::Right => "≻",
            ProductKind::Star => "∗",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProductKind::Left => "left",
            ProductKind::Middle => "middle",
            ProductKind::Right => "right",
            ProductKind::Star => "star",
        }
    }
}

impl std::str::FromStr for ProductKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" | "<" | "≺" => Ok(ProductKind::Left),
            "middle" | "." | "·" => Ok(ProductKind::Middle),
            "right" | ">" | "≻" => Ok(ProductKind::Right),
            "star" | "*" | "∗" => Ok(ProductKind::Star),
            _ => Err(Error::Parse(format!("unknown product `{s}`"))),
        }
    }
}

/// Finite `QPoly`-linear combination of basis objects and the unit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element<B: Ord> {
    terms: BTreeMap<Slot<B>, QPoly>,
}

impl<B: BasisObject> Default for Element<B> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<B: BasisObject> Element<B> {
    pub fn zero() -> Self {
        Element { terms: BTreeMap::new() }
    }

    pub fn unit() -> Self {
        Self::monomial(Slot::Unit, QPoly::one())
    }

    pub fn basis(b: B) -> Self {
        Self::monomial(Slot::Basis(b), QPoly::one())
    }

    pub fn monomial(slot: Slot<B>, c: QPoly) -> Self {
        let mut e = Self::zero();
        e.add_term(slot, &c);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (Slot<B>, QPoly)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (s, c) in terms {
            e.add_term(s, &c);
        }
        e
    }

    pub fn add_term(&mut self, slot: Slot<B>, c: &QPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(slot) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Adds `c * other` into `self`.
    pub fn add_scaled(&mut self, other: &Self, c: &QPoly) {
        if c.is_zero() {
            return;
        }
        for (s, x) in &other.terms {
            self.add_term(s.clone(), &x.mul(c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Slot<B>, &QPoly)> {
        self.terms.iter()
    }

    pub fn basis_terms(&self) -> impl Iterator<Item = (&B, &QPoly)> {
        self.terms.iter().filter_map(|(s, c)| s.basis().map(|b| (b, c)))
    }

    pub fn coeff(&self, slot: &Slot<B>) -> QPoly {
        self.terms.get(slot).cloned().unwrap_or_default()
    }

    /// The counit: coefficient of the adjoined unit.
    pub fn unit_coeff(&self) -> QPoly {
        self.coeff(&Slot::Unit)
    }

    /// Part of `self` without its unit component.
    pub fn without_unit(&self) -> Self {
        Element {
            terms: self.terms.iter().filter(|(s, _)| !s.is_unit()).map(|(s, c)| (s.clone(), c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &QPoly) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &QPoly::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &QPoly::constant(-1));
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&QPoly::constant(-1))
    }

    /// Substitutes `q = v` in every coefficient.
    pub fn specialize(&self, v: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(s, c)| (s.clone(), c.specialize(v))))
    }

    /// Linear extension of a map on basis objects; the unit maps to the unit.
    pub fn map_linear<C, F, R>(&self, mut f: F) -> Element<C>
    where
        C: BasisObject,
        F: FnMut(&B) -> R,
        R: Borrow<Element<C>>,
    {
        let mut out = Element::zero();
        for (s, c) in &self.terms {
            match s {
                Slot::Unit => out.add_term(Slot::Unit, c),
                Slot::Basis(b) => out.add_scaled(f(b).borrow(), c),
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(s, c)| json!({ "basis": s.to_string(), "coeff": c.to_json() }))
                .collect(),
        )
    }
}

fn write_coeff_prefix(f: &mut fmt::Formatter<'_>, c: &QPoly, first: bool) -> fmt::Result {
    // Leading sign is pulled out for monomials; general polynomials are
    // parenthesized.
    match c.as_monomial() {
        Some((e, k)) => {
            let mono = QPoly::monomial(k.clone(), e);
            let neg = mono.terms()[0].1 < num_bigint::BigInt::from(0);
            let abs = if neg { -&mono } else { mono };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            Ok(())
        }
        None => {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "({c})*")
        }
    }
}

fn write_slot_term<S: fmt::Display>(f: &mut fmt::Formatter<'_>, c: &QPoly, body: S, first: bool) -> fmt::Result {
    write_coeff_prefix(f, c, first)?;
    write!(f, "{body}")
}

impl<B: BasisObject> fmt::Display for Element<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // Basis terms first, the unit last.
        for (s, c) in self.terms.iter().filter(|(s, _)| !s.is_unit()) {
            write_slot_term(f, c, s, first)?;
            first = false;
        }
        if let Some(c) = self.terms.get(&Slot::Unit) {
            if c.is_one() {
                write!(f, "{}1", if first { "" } else { " + " })?;
            } else {
                write_coeff_prefix(f, c, first)?;
                write!(f, "1")?;
            }
        }
        Ok(())
    }
}

impl<B: BasisObject> fmt::Debug for Element<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

fn split_factors(term: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in term.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if ch == '*' && depth == 0 {
            out.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    out.push(cur.trim().to_string());
    out
}

/// Parses one summand into a coefficient and an optional basis literal.
fn parse_term<B, P>(term: &str, parse_basis: &P) -> Result<(QPoly, Slot<B>)>
where
    P: Fn(&str) -> Result<B>,
{
    let mut coeff = QPoly::one();
    let mut slot: Option<Slot<B>> = None;
    for factor in split_factors(term) {
        if factor.is_empty() {
            return Err(Error::Parse(format!("empty factor in `{term}`")));
        }
        if let Ok(s) = parse_scalar_factor(&factor) {
            coeff = coeff.mul(&s);
            continue;
        }
        match parse_basis(&factor) {
            Ok(b) => {
                if slot.is_some() {
                    return Err(Error::Parse(format!("two basis objects in `{term}`")));
                }
                slot = Some(Slot::Basis(b));
            }
            Err(basis_err) => {
                // `(1 + q)` style coefficient.
                let inner = factor.strip_prefix('(').and_then(|s| s.strip_suffix(')'));
                match inner.map(str::parse::<QPoly>) {
                    Some(Ok(c)) => coeff = coeff.mul(&c),
                    _ => return Err(basis_err),
                }
            }
        }
    }
    Ok((coeff, slot.unwrap_or(Slot::Unit)))
}

/// Parses `3*q^2*(1,2,1) + (2,1,1) + q*1`; a term with no basis literal is a
/// multiple of the unit.
pub fn parse_element<B, P>(s: &str, parse_basis: P) -> Result<Element<B>>
where
    B: BasisObject,
    P: Fn(&str) -> Result<B>,
{
    let mut out = Element::zero();
    for (neg, term) in split_summands(s)? {
        let (c, slot) = parse_term(&term, &parse_basis)?;
        out.add_term(slot, &if neg { -c } else { c });
    }
    Ok(out)
}

/// `Σ scalars[i] * elements[i]`.
pub fn lin_combine<B: BasisObject>(scalars: &[QPoly], elements: &[Element<B>]) -> Result<Element<B>> {
    if scalars.len() != elements.len() {
        return Err(Error::LengthMismatch(scalars.len(), elements.len()));
    }
    let mut out = Element::zero();
    for (s, e) in scalars.iter().zip(elements) {
        out.add_scaled(e, s);
    }
    Ok(out)
}

/// Extends a basis-level rule bilinearly, applying the unit conventions of
/// the augmented algebra:
///
/// `x ≻ 1 = x · 1 = 1 · x = 1 ≺ x = 0`, `1 ≻ x = x = x ≺ 1`, and `1 ∗ x = x ∗ 1 = x`,
/// `1 ∗ 1 = 1`. The partial products of two units are undefined and
/// contribute nothing; callers that need the bialgebra boundary convention
/// handle that case themselves.
pub fn bilinear_extend<B, F, R>(kind: ProductKind, rule: F, a: &Element<B>, b: &Element<B>) -> Element<B>
where
    B: BasisObject,
    F: Fn(&B, &B) -> R,
    R: Borrow<Element<B>>,
{
    let mut out = Element::zero();
    for (sa, ca) in a.terms() {
        for (sb, cb) in b.terms() {
            let c = ca.mul(cb);
            match (sa, sb) {
                (Slot::Basis(x), Slot::Basis(y)) => out.add_scaled(rule(x, y).borrow(), &c),
                (Slot::Unit, Slot::Basis(_)) => {
                    if matches!(kind, ProductKind::Right | ProductKind::Star) {
                        out.add_term(sb.clone(), &c);
                    }
                }
                (Slot::Basis(_), Slot::Unit) => {
                    if matches!(kind, ProductKind::Left | ProductKind::Star) {
                        out.add_term(sa.clone(), &c);
                    }
                }
                (Slot::Unit, Slot::Unit) => {
                    if kind == ProductKind::Star {
                        out.add_term(Slot::Unit, &c);
                    }
                }
            }
        }
    }
    out
}

/// Element of `H₊ ⊗ H₊`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tensor2<B: Ord> {
    terms: BTreeMap<(Slot<B>, Slot<B>), QPoly>,
}

impl<B: BasisObject> Default for Tensor2<B> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<B: BasisObject> Tensor2<B> {
    pub fn zero() -> Self {
        Tensor2 { terms: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (Slot<B>, Slot<B>, QPoly)>>(terms: I) -> Self {
        let mut t = Self::zero();
        for (l, r, c) in terms {
            t.add_term(l, r, &c);
        }
        t
    }

    pub fn add_term(&mut self, left: Slot<B>, right: Slot<B>, c: &QPoly) {
        if c.is_zero() {
            return;
        }
        let key = (left, right);
        match self.terms.get_mut(&key) {
            Some(x) => {
                let s = x.add(c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *x = s;
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, c: &QPoly) {
        for ((l, r), x) in &other.terms {
            self.add_term(l.clone(), r.clone(), &x.mul(c));
        }
    }

    /// Adds `c * (a ⊗ b)`.
    pub fn add_product(&mut self, a: &Element<B>, b: &Element<B>, c: &QPoly) {
        for (sa, ca) in a.terms() {
            let cac = ca.mul(c);
            for (sb, cb) in b.terms() {
                self.add_term(sa.clone(), sb.clone(), &cac.mul(cb));
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Slot<B>, &Slot<B>, &QPoly)> {
        self.terms.iter().map(|((l, r), c)| (l, r, c))
    }

    pub fn coeff(&self, left: &Slot<B>, right: &Slot<B>) -> QPoly {
        self.terms.get(&(left.clone(), right.clone())).cloned().unwrap_or_default()
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &QPoly::constant(-1));
        out
    }

    /// Drops the terms with a unit on either side.
    pub fn reduced(&self) -> Self {
        Tensor2 {
            terms: self
                .terms
                .iter()
                .filter(|((l, r), _)| !l.is_unit() && !r.is_unit())
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn specialize(&self, v: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|((l, r), c)| (l.clone(), r.clone(), c.specialize(v))))
    }

    /// `(f ⊗ g)` for linear maps given on basis objects.
    pub fn map_linear<C, F, R>(&self, mut f: F) -> Tensor2<C>
    where
        C: BasisObject,
        F: FnMut(&B) -> R,
        R: Borrow<Element<C>>,
    {
        let mut out = Tensor2::zero();
        let mut image = |s: &Slot<B>| -> Element<C> {
            match s {
                Slot::Unit => Element::unit(),
                Slot::Basis(b) => f(b).borrow().clone(),
            }
        };
        for ((l, r), c) in &self.terms {
            let (il, ir) = (image(l), image(r));
            out.add_product(&il, &ir, c);
        }
        out
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|((l, r), c)| json!({ "left": l.to_string(), "right": r.to_string(), "coeff": c.to_json() }))
                .collect(),
        )
    }
}

impl<B: BasisObject> fmt::Display for Tensor2<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((l, r), c)) in self.terms.iter().enumerate() {
            write_slot_term(f, c, format_args!("{l} # {r}"), i == 0)?;
        }
        Ok(())
    }
}

impl<B: BasisObject> fmt::Debug for Tensor2<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor2({self})")
    }
}

fn parse_slot<B, P: Fn(&str) -> Result<B>>(s: &str, parse_basis: &P) -> Result<Slot<B>> {
    let s = s.trim();
    if s == "1" {
        Ok(Slot::Unit)
    } else {
        parse_basis(s).map(Slot::Basis)
    }
}

/// Parses `(1,1) # (1,2,4,2,3,3) + q*1 # (1)`.
pub fn parse_tensor2<B, P>(s: &str, parse_basis: P) -> Result<Tensor2<B>>
where
    B: BasisObject,
    P: Fn(&str) -> Result<B>,
{
    let mut out = Tensor2::zero();
    for (neg, term) in split_summands(s)? {
        let (lhs, rhs) = term
            .split_once('#')
            .ok_or_else(|| Error::Parse(format!("tensor term without `#`: `{term}`")))?;
        let right = parse_slot(rhs, &parse_basis)?;
        // The coefficient rides on the left factor.
        let (c, left) = match split_factors(lhs).as_slice() {
            [only] => (QPoly::one(), parse_slot(only, &parse_basis)?),
            _ => parse_term(lhs, &parse_basis)?,
        };
        out.add_term(left, right, &if neg { -c } else { c });
    }
    Ok(out)
}

/// Element of `H₊^{⊗3}`; only needed for coassociativity.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor3<B: Ord> {
    terms: BTreeMap<(Slot<B>, Slot<B>, Slot<B>), QPoly>,
}

impl<B: BasisObject> Tensor3<B> {
    pub fn zero() -> Self {
        Tensor3 { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, a: Slot<B>, b: Slot<B>, c: Slot<B>, x: &QPoly) {
        if x.is_zero() {
            return;
        }
        let key = (a, b, c);
        match self.terms.get_mut(&key) {
            Some(v) => {
                let s = v.add(x);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(key, x.clone());
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Slot<B>, &Slot<B>, &Slot<B>, &QPoly)> {
        self.terms.iter().map(|((a, b, c), x)| (a, b, c, x))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<B: BasisObject> fmt::Display for Tensor3<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b, c), x)) in self.terms.iter().enumerate() {
            write_slot_term(f, x, format_args!("{a} # {b} # {c}"), i == 0)?;
        }
        Ok(())
    }
}

impl<B: BasisObject> fmt::Debug for Tensor3<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor3({self})")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Applies a coproduct to one leg of every pair; `Δ(1) = 1 ⊗ 1`.
pub fn tensor_flatten<B, F>(t: &Tensor2<B>, side: Side, mut coproduct: F) -> Tensor3<B>
where
    B: BasisObject,
    F: FnMut(&B) -> Tensor2<B>,
{
    let mut out = Tensor3::zero();
    let mut delta = |s: &Slot<B>| -> Tensor2<B> {
        match s {
            Slot::Unit => Tensor2::from_terms([(Slot::Unit, Slot::Unit, QPoly::one())]),
            Slot::Basis(b) => coproduct(b),
        }
    };
    for (l, r, c) in t.terms() {
        match side {
            Side::Left => {
                for (a, b, x) in delta(l).terms() {
                    out.add_term(a.clone(), b.clone(), r.clone(), &x.mul(c));
                }
            }
            Side::Right => {
                for (a, b, x) in delta(r).terms() {
                    out.add_term(l.clone(), a.clone(), b.clone(), &x.mul(c));
                }
            }
        }
    }
    out
}
