//! Words of positive integers: surjections, parking functions,
//! standardization, the `Park` retraction, (co-)restrictions, shuffles and
//! enumerators.

use std::fmt;
use std::ops::Deref;

use crate::error::{Error, Result};

/// A word of positive integers. The empty word only appears as the result
/// of a restriction; it is never a basis object.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<u32>);

impl Deref for Word {
    type Target = [u32];
    fn deref(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.0)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[u32]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in letters.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

/// Parses `(2,1,3)`. Letters must be positive; the word must be non-empty.
pub fn parse_word(s: &str) -> Result<Word> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("word literal must look like (1,2,1): `{s}`")))?;
    let letters = inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .ok()
                .filter(|&x| x > 0)
                .ok_or_else(|| Error::Parse(format!("bad letter `{}` in `{s}`", t.trim())))
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(Word(letters))
}

macro_rules! word_newtype {
    ($name:ident, $check:expr, $what:literal) => {
        #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Vec<u32>);

        impl $name {
            pub fn new(letters: Vec<u32>) -> Result<Self> {
                let check: fn(&[u32]) -> bool = $check;
                if !letters.is_empty() && letters.iter().all(|&x| x > 0) && check(&letters) {
                    Ok($name(letters))
                } else {
                    Err(Error::InvalidBasis(format!("{:?} is not a {}", letters, $what)))
                }
            }

            pub(crate) fn new_unchecked(letters: Vec<u32>) -> Self {
                debug_assert!(Self::new(letters.clone()).is_ok(), "{:?} is not a {}", letters, $what);
                $name(letters)
            }

            pub fn letters(&self) -> &[u32] {
                &self.0
            }

            pub fn into_letters(self) -> Vec<u32> {
                self.0
            }

            pub fn max_letter(&self) -> u32 {
                *self.0.iter().max().expect("basis words are non-empty")
            }

            pub fn parse(s: &str) -> Result<Self> {
                Self::new(parse_word(s)?.0)
            }
        }

        impl Deref for $name {
            type Target = [u32];
            fn deref(&self) -> &[u32] {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_letters(f, &self.0)
            }
        }
    };
}

word_newtype!(Surjection, is_surjective, "surjection");
word_newtype!(ParkingFunction, is_parking, "parking function");

/// Every value `1..=max` occurs.
pub fn is_surjective(w: &[u32]) -> bool {
    let Some(&max) = w.iter().max() else { return false };
    let mut seen = vec![false; max as usize + 1];
    for &x in w {
        if x == 0 {
            return false;
        }
        seen[x as usize] = true;
    }
    seen[1..].iter().all(|&s| s)
}

/// The sorted word satisfies `sorted(i) <= i`.
pub fn is_parking(w: &[u32]) -> bool {
    let mut s = w.to_vec();
    s.sort_unstable();
    !s.is_empty() && s.iter().enumerate().all(|(i, &x)| x >= 1 && x as usize <= i + 1)
}

/// Unique surjection order- and equality-isomorphic to `w`.
pub fn std_word(w: &[u32]) -> Surjection {
    let mut values = w.to_vec();
    values.sort_unstable();
    values.dedup();
    Surjection::new_unchecked(
        w.iter()
            .map(|x| values.binary_search(x).expect("value present") as u32 + 1)
            .collect(),
    )
}

/// Positions of `w` sorted stably by value.
fn sorting_positions(w: &[u32]) -> Vec<usize> {
    let mut pos: Vec<usize> = (0..w.len()).collect();
    pos.sort_by_key(|&i| w[i]);
    pos
}

/// Canonical retraction of a word onto parking functions.
pub fn park(w: &[u32]) -> ParkingFunction {
    assert!(!w.is_empty(), "park of the empty word");
    let pos = sorting_positions(w);
    let mut out = vec![0u32; w.len()];
    let mut prev_park = 1u32;
    out[pos[0]] = 1;
    for j in 1..pos.len() {
        let jump = w[pos[j]] - w[pos[j - 1]];
        let p = (prev_park + jump).min(j as u32 + 1);
        out[pos[j]] = p;
        prev_park = p;
    }
    ParkingFunction::new_unchecked(out)
}

/// Letters whose value lies in `lo..=hi`, in order.
pub fn corestrict(w: &[u32], lo: u32, hi: u32) -> Word {
    Word(w.iter().copied().filter(|&x| lo <= x && x <= hi).collect())
}

/// Letters at the given 1-based positions, in increasing position order.
pub fn restrict(w: &[u32], positions: &[usize]) -> Word {
    let mut p = positions.to_vec();
    p.sort_unstable();
    p.dedup();
    Word(p.into_iter().filter(|&i| i >= 1 && i <= w.len()).map(|i| w[i - 1]).collect())
}

/// `|Im(h) ∩ Im(k)|`.
pub fn image_overlap(h: &[u32], k: &[u32]) -> usize {
    let mut a = h.to_vec();
    a.sort_unstable();
    a.dedup();
    let mut b = k.to_vec();
    b.sort_unstable();
    b.dedup();
    a.iter().filter(|x| b.binary_search(x).is_ok()).count()
}

/// Permutations (as 1-based image lists) increasing on each block of the
/// composition.
pub fn shuffles(parts: &[usize]) -> Vec<Vec<usize>> {
    let n: usize = parts.iter().sum();
    let mut out = Vec::new();
    let mut remaining = parts.to_vec();
    let mut assignment = Vec::with_capacity(n);
    fn rec(remaining: &mut [usize], assignment: &mut Vec<usize>, n: usize, parts: &[usize], out: &mut Vec<Vec<usize>>) {
        if assignment.len() == n {
            // Value v (1-based) goes to the next unfilled slot of its block.
            let offsets: Vec<usize> = parts.iter().scan(0, |acc, &p| {
                let o = *acc;
                *acc += p;
                Some(o)
            }).collect();
            let mut fill = vec![0usize; parts.len()];
            let mut sigma = vec![0usize; n];
            for (v, &b) in assignment.iter().enumerate() {
                sigma[offsets[b] + fill[b]] = v + 1;
                fill[b] += 1;
            }
            out.push(sigma);
            return;
        }
        for b in 0..remaining.len() {
            if remaining[b] > 0 {
                remaining[b] -= 1;
                assignment.push(b);
                rec(remaining, assignment, n, parts, out);
                assignment.pop();
                remaining[b] += 1;
            }
        }
    }
    if parts.iter().all(|&p| p > 0) {
        rec(&mut remaining, &mut assignment, n, parts, &mut out);
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordFamily {
    St,
    Pf,
    Ndpf,
}

impl std::str::FromStr for WordFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "st" => Ok(WordFamily::St),
            "pf" => Ok(WordFamily::Pf),
            "ndpf" => Ok(WordFamily::Ndpf),
            _ => Err(Error::Parse(format!("unknown word family `{s}`"))),
        }
    }
}

/// All surjective words of length `n`, lexicographically.
pub fn surjections(n: usize) -> Vec<Surjection> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    for k in 1..=n as u32 {
        let mut count = vec![0usize; k as usize + 1];
        surj_rec(n, k, &mut cur, &mut count, 0, &mut out);
    }
    out.sort();
    out
}

fn surj_rec(n: usize, k: u32, cur: &mut Vec<u32>, count: &mut [usize], covered: usize, out: &mut Vec<Surjection>) {
    let missing = k as usize - covered;
    if n - cur.len() < missing {
        return;
    }
    if cur.len() == n {
        out.push(Surjection::new_unchecked(cur.clone()));
        return;
    }
    for v in 1..=k {
        let fresh = count[v as usize] == 0;
        count[v as usize] += 1;
        cur.push(v);
        surj_rec(n, k, cur, count, covered + fresh as usize, out);
        cur.pop();
        count[v as usize] -= 1;
    }
}

/// All parking functions of length `n`, by filtering `[n]^n`.
pub fn parking_functions(n: usize) -> Vec<ParkingFunction> {
    let mut out = Vec::new();
    let mut w = vec![1u32; n];
    loop {
        if is_parking(&w) {
            out.push(ParkingFunction::new_unchecked(w.clone()));
        }
        // Odometer over [n]^n, last letter fastest: lexicographic order.
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if w[i] < n as u32 {
                w[i] += 1;
                for x in &mut w[i + 1..] {
                    *x = 1;
                }
                break;
            }
        }
    }
}

/// Non-decreasing parking functions of length `n`.
pub fn nd_parking_functions(n: usize) -> Vec<ParkingFunction> {
    fn rec(n: usize, cur: &mut Vec<u32>, out: &mut Vec<ParkingFunction>) {
        if cur.len() == n {
            out.push(ParkingFunction::new_unchecked(cur.clone()));
            return;
        }
        let lo = cur.last().copied().unwrap_or(1);
        for v in lo..=cur.len() as u32 + 1 {
            cur.push(v);
            rec(n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, &mut Vec::with_capacity(n), &mut out);
    out
}

pub fn enumerate(family: WordFamily, n: usize) -> Vec<Word> {
    match family {
        WordFamily::St => surjections(n).into_iter().map(|s| Word(s.into_letters())).collect(),
        WordFamily::Pf => parking_functions(n).into_iter().map(|s| Word(s.into_letters())).collect(),
        WordFamily::Ndpf => nd_parking_functions(n).into_iter().map(|s| Word(s.into_letters())).collect(),
    }
}

/// Collapses runs of equal adjacent letters.
pub fn compress_runs(w: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() != Some(&x) {
            out.push(x);
        }
    }
    out
}

/// Increasing relabelling of `w`'s values onto `targets` (sorted, one per
/// distinct value of `w`).
pub(crate) fn relabel(w: &[u32], targets: &[u32]) -> Vec<u32> {
    w.iter().map(|&x| targets[x as usize - 1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn std_examples() {
        assert_eq!(std_word(&w("(2,3,3,5,7)")).to_string(), "(1,2,2,3,4)");
        assert_eq!(std_word(&w("(1,2,1)")).to_string(), "(1,2,1)");
        assert_eq!(std_word(&w("(5,5,5)")).to_string(), "(1,1,1)");
    }

    #[test]
    fn park_examples() {
        assert_eq!(park(&w("(1,1,2)")).to_string(), "(1,1,2)");
        assert_eq!(park(&w("(1,3,3)")).to_string(), "(1,2,2)");
        assert_eq!(park(&w("(3,1,3)")).to_string(), "(2,1,2)");
    }

    #[test]
    fn is_parking_examples() {
        assert!(is_parking(&w("(2,1,3,5,3,4,4,1)")));
        assert!(!is_parking(&w("(2,2)")));
        assert!(is_parking(&w("(1)")));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(nd_parking_functions(3).len(), 5);
        assert_eq!(parking_functions(3).len(), 16);
        assert_eq!(surjections(2).len(), 3);
        let fubini = [1, 3, 13, 75, 541];
        for (n, &c) in fubini.iter().enumerate() {
            assert_eq!(surjections(n + 1).len(), c);
        }
        let catalan = [1, 2, 5, 14, 42];
        for (n, &c) in catalan.iter().enumerate() {
            assert_eq!(nd_parking_functions(n + 1).len(), c);
            assert_eq!(parking_functions(n + 1).len(), (n + 2).pow(n as u32));
        }
    }

    #[test]
    fn surjections_match_brute_force() {
        for n in 1..=5usize {
            let mut brute = Vec::new();
            let total = n.pow(n as u32);
            for code in 0..total {
                let mut c = code;
                let word: Vec<u32> = (0..n).map(|_| { let d = c % n; c /= n; d as u32 + 1 }).collect();
                if is_surjective(&word) {
                    brute.push(word);
                }
            }
            brute.sort();
            let fast: Vec<Vec<u32>> = surjections(n).into_iter().map(|s| s.into_letters()).collect();
            assert_eq!(fast, brute);
        }
    }

    #[test]
    fn ndpf_listing() {
        let got: Vec<String> = nd_parking_functions(3).iter().map(|p| p.to_string()).collect();
        let mut want = vec!["(1,2,3)", "(1,1,2)", "(1,1,3)", "(1,2,2)", "(1,1,1)"];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn restriction_examples() {
        let f = w("(2,1,3,5,3,4,4,1)");
        assert_eq!(corestrict(&f, 1, 1).to_string(), "(1,1)");
        assert_eq!(std_word(&corestrict(&f, 2, 5)).to_string(), "(1,2,4,2,3,3)");
        assert_eq!(restrict(&w("(1,3,1)"), &[1, 3]).to_string(), "(1,1)");
        assert!(corestrict(&w("(1,2)"), 3, 4).is_empty());
    }

    #[test]
    fn overlap_examples() {
        assert_eq!(image_overlap(&w("(1,2,1)"), &w("(2,1)")), 2);
        assert_eq!(image_overlap(&w("(1,3,1)"), &w("(4,4)")), 0);
        assert_eq!(image_overlap(&w("(1,3,1)"), &w("(3,3)")), 1);
    }

    #[test]
    fn shuffle_examples() {
        assert_eq!(shuffles(&[1, 2]).len(), 3);
        assert_eq!(shuffles(&[2, 2]).len(), 6);
        assert_eq!(shuffles(&[1, 1]), vec![vec![1, 2], vec![2, 1]]);
        for s in shuffles(&[2, 1, 2]) {
            assert!(s[0] < s[1] && s[3] < s[4]);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_word("(0,1)").is_err());
        assert!(parse_word("1,2").is_err());
        assert!(parse_word("()").is_err());
        assert!(Surjection::parse("(1,3)").is_err());
        assert!(ParkingFunction::parse("(2,2)").is_err());
    }

    fn arb_word() -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(1u32..9, 1..8)
    }

    proptest! {
        #[test]
        fn std_and_park_are_retractions(x in arb_word()) {
            let s = std_word(&x);
            prop_assert!(is_surjective(&s));
            prop_assert_eq!(&std_word(&s), &s);
            let p = park(&x);
            prop_assert!(is_parking(&p));
            prop_assert_eq!(&park(&p), &p);
            // Park preserves order and equality of letters.
            prop_assert_eq!(std_word(&p), s);
        }

        #[test]
        fn park_fixes_parking_functions(x in arb_word()) {
            if is_parking(&x) {
                prop_assert_eq!(park(&x).into_letters(), x);
            }
        }
    }
}
