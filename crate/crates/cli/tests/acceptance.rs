//! Acceptance criteria 1 to 9. Run with `-- --nocapture` to see the
//! per-criterion summary lines.
//!
//! Two printed values conflict with the definitions they illustrate: the
//! 11-term multipermutation sum in criterion 1 and the tree primitive ranks
//! in criterion 7. Both criteria are evaluated literally and reported as
//! FAIL; the summary test pins down that the failure is exactly that
//! discrepancy, and the literal comparisons live in ignored tests.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use tridend::algebra::{coproduct, product, TriAlgebra};
use tridend::harness::{self, AlgebraName, Algebras, CheckReport, QMode};
use tridend::linear::{parse_element, parse_tensor2, Element};
use tridend::mperm_algebra::{lift_word, mperm_product_oracle, phi, std_m, parse_blocks, MPermutation};
use tridend::pqsym_algebra::pirr_count;
use tridend::words::{nd_parking_functions, parking_functions, parse_word, std_word, surjections, Surjection};
use tridend::ProductKind;

const GOLDEN: &str = include_str!("golden/worked_examples.txt");
const MPERM_PRINTED: &str = include_str!("golden/mperm_star_printed.txt");

struct Outcome {
    pass: bool,
    detail: String,
}

fn line(n: usize, title: &str, o: &Outcome, elapsed: Duration) {
    let status = if o.pass { "PASS" } else { "FAIL" };
    println!("criterion {n} {title}: {status} ({:.2?}) {}", elapsed, o.detail);
}

fn parse_kind(s: &str) -> Option<ProductKind> {
    s.parse().ok()
}

fn check_product<A: TriAlgebra>(alg: &A, op: &str, args: &[&str]) -> std::result::Result<(), String> {
    let el = |s: &str| parse_element(s, |t| alg.parse_basis(t)).map_err(|e| e.to_string());
    let (x, y, want) = (el(args[0])?, el(args[1])?, el(args[2])?);
    let (kind, q1) = match op {
        "star@1" => (ProductKind::Star, true),
        _ => (parse_kind(op).ok_or(format!("bad op {op}"))?, false),
    };
    let mut got = product(alg, kind, &x, &y);
    if q1 {
        got = got.specialize(1);
    }
    if got == want {
        Ok(())
    } else {
        Err(format!("{} {op} {}: got {got}, want {want}", args[0], args[1]))
    }
}

fn check_coproduct<A: TriAlgebra>(alg: &A, args: &[&str]) -> std::result::Result<(), String> {
    let x = parse_element(args[0], |t| alg.parse_basis(t)).map_err(|e| e.to_string())?;
    let want = parse_tensor2(args[1], |t| alg.parse_basis(t)).map_err(|e| e.to_string())?;
    let got = coproduct(alg, &x);
    if got == want {
        Ok(())
    } else {
        Err(format!("Δ{}: got {got}, want {want}", args[0]))
    }
}

fn check_golden_line(algs: &Algebras, raw: &str) -> std::result::Result<(), String> {
    let parts: Vec<&str> = raw.split('|').map(str::trim).collect();
    let (alg, op, args) = (parts[0], parts[1], &parts[2..]);
    let text = |got: String, want: &str| if got == want { Ok(()) } else { Err(format!("{op}: got {got}, want {want}")) };
    match (alg, op) {
        ("words", "std") => text(std_word(&parse_word(args[0]).unwrap()).to_string(), args[1]),
        ("words", "lift") => {
            let f = Surjection::parse(args[0]).unwrap();
            text(lift_word(&f, &parse_word(args[1]).unwrap()).unwrap().to_string(), args[2])
        }
        ("mperm", "std_m") => {
            let want = MPermutation::parse(args[1]).unwrap().to_string();
            text(std_m(&parse_blocks(args[0]).unwrap()).unwrap().to_string(), &want)
        }
        ("mperm", "phi") => {
            let want = MPermutation::parse(args[1]).unwrap().to_string();
            text(phi(&Surjection::parse(args[0]).unwrap()).to_string(), &want)
        }
        (a, "coproduct") => match a.parse::<AlgebraName>().unwrap() {
            AlgebraName::St => check_coproduct(&algs.st, args),
            AlgebraName::Pqsym => check_coproduct(&algs.pqsym, args),
            AlgebraName::Tree => check_coproduct(&algs.tree, args),
            AlgebraName::Mperm => check_coproduct(&algs.mperm, args),
        },
        (a, op) => match a.parse::<AlgebraName>().unwrap() {
            AlgebraName::St => check_product(&algs.st, op, args),
            AlgebraName::Pqsym => check_product(&algs.pqsym, op, args),
            AlgebraName::Tree => check_product(&algs.tree, op, args),
            AlgebraName::Mperm => check_product(&algs.mperm, op, args),
        },
    }
}

fn golden_lines() -> Vec<&'static str> {
    GOLDEN.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).collect()
}

fn mp_el(s: &str) -> Element<MPermutation> {
    parse_element(s, MPermutation::parse).unwrap()
}

fn mperm_star_q1(algs: &Algebras) -> Element<MPermutation> {
    let x = mp_el("[(1,3),2]");
    let y = mp_el("[2,1]");
    product(&algs.mperm, ProductKind::Star, &x, &y).specialize(1)
}

/// Terms of the recomputed MMR sum missing from the printed one.
fn mperm_printed_gap(algs: &Algebras) -> Vec<MPermutation> {
    let printed: BTreeSet<MPermutation> = mp_el(MPERM_PRINTED).basis_terms().map(|(b, _)| b.clone()).collect();
    mperm_star_q1(algs).basis_terms().map(|(b, _)| b.clone()).filter(|b| !printed.contains(b)).collect()
}

fn criterion_1(algs: &Algebras) -> Outcome {
    let lines = golden_lines();
    let errors: Vec<String> = lines.iter().filter_map(|l| check_golden_line(algs, l).err()).collect();
    let printed = mp_el(MPERM_PRINTED);
    let matches_printed = mperm_star_q1(algs) == printed;
    let gap: Vec<String> = mperm_printed_gap(algs).iter().map(|m| m.to_string()).collect();
    let mut detail = format!("{}/{} golden entries match", lines.len() - errors.len(), lines.len());
    if let Some(e) = errors.first() {
        detail.push_str(&format!("; first mismatch: {e}"));
    }
    if !matches_printed {
        detail.push_str(&format!(
            "; MMR ∗₁ of [(1,3),2] and [2,1] has {} terms, the printed 11-term sum lacks {}",
            mperm_star_q1(algs).len(),
            gap.join(", ")
        ));
    }
    Outcome { pass: errors.is_empty() && matches_printed, detail }
}

fn summarize(reports: &[CheckReport]) -> Outcome {
    let bad: Vec<&CheckReport> = reports.iter().filter(|r| !r.as_expected()).collect();
    let checked: usize = reports.iter().map(|r| r.checked).sum();
    let mut detail = format!("{} sweeps, {checked} identities", reports.len());
    if let Some(r) = bad.first() {
        detail.push_str(&format!("; unexpected: {r}"));
    }
    Outcome { pass: bad.is_empty(), detail }
}

fn criterion_2(algs: &Algebras) -> Outcome {
    let q = QMode::Symbolic;
    summarize(&[
        harness::verify_axioms(&algs.st, AlgebraName::St, 6, q),
        harness::verify_axioms(&algs.pqsym, AlgebraName::Pqsym, 5, q),
        harness::verify_axioms(&algs.tree, AlgebraName::Tree, 4, q),
        harness::verify_axioms(&algs.mperm, AlgebraName::Mperm, 4, q),
    ])
}

fn criterion_3(algs: &Algebras) -> Outcome {
    let q = QMode::Symbolic;
    summarize(&[
        harness::verify_bialgebra(&algs.st, AlgebraName::St, 5, q),
        harness::verify_bialgebra(&algs.pqsym, AlgebraName::Pqsym, 5, q),
        harness::verify_bialgebra(&algs.tree, AlgebraName::Tree, 4, q),
        harness::verify_bialgebra(&algs.mperm, AlgebraName::Mperm, 4, q),
        harness::verify_coassociativity(&algs.st, AlgebraName::St, 6),
        harness::verify_coassociativity(&algs.pqsym, AlgebraName::Pqsym, 6),
        harness::verify_coassociativity(&algs.tree, AlgebraName::Tree, 5),
        harness::verify_coassociativity(&algs.mperm, AlgebraName::Mperm, 5),
    ])
}

fn criterion_4(algs: &Algebras) -> Outcome {
    let q = QMode::Symbolic;
    let iota = harness::verify_iota_witness(algs);
    let mut o = summarize(&[
        harness::verify_alpha(algs, 4, q),
        harness::verify_phi(algs, 4, q),
        harness::verify_phi_surjective(4),
        iota.clone(),
    ]);
    o.pass &= !iota.passed();
    o.detail.push_str(if iota.passed() { "; iota unexpectedly compatible" } else { "; iota fails on (1,1,2) as expected" });
    o
}

fn criterion_5(algs: &Algebras) -> Outcome {
    summarize(&[
        harness::verify_st_oracle(algs, 6),
        harness::verify_pqsym_oracle(algs, 6),
        harness::verify_mperm_oracle(algs, 5),
        harness::verify_pf_coproduct_oracle(5),
    ])
}

fn criterion_6(algs: &Algebras) -> Outcome {
    let counts = |f: &dyn Fn(usize) -> usize| (1..=5).map(f).collect::<Vec<_>>();
    let rows = [
        ("NDPF", counts(&|n| nd_parking_functions(n).len()), vec![1, 2, 5, 14, 42]),
        ("PF", counts(&|n| parking_functions(n).len()), vec![1, 3, 16, 125, 1296]),
        ("ST", counts(&|n| surjections(n).len()), vec![1, 3, 13, 75, 541]),
        ("T", counts(&|n| algs.tree.basis(n).len()), vec![1, 3, 11, 45, 197]),
    ];
    let bad: Vec<String> =
        rows.iter().filter(|(_, got, want)| got != want).map(|(name, got, want)| format!("{name}: {got:?} != {want:?}")).collect();
    Outcome { pass: bad.is_empty(), detail: if bad.is_empty() { "all four rows match".into() } else { bad.join("; ") } }
}

fn tree_ranks(algs: &Algebras) -> Vec<Vec<usize>> {
    [0i64, 1, 5].iter().map(|&v| (1..=4).map(|n| tridend::brace_gv::primitive_rank(&algs.tree, n, v)).collect()).collect()
}

fn pqsym_ranks(algs: &Algebras) -> Vec<Vec<usize>> {
    [0i64, 1, 5].iter().map(|&v| (1..=3).map(|n| tridend::brace_gv::primitive_rank(&algs.pqsym, n, v)).collect()).collect()
}

fn criterion_7(algs: &Algebras) -> Outcome {
    let trees = tree_ranks(algs);
    let pq = pqsym_ranks(algs);
    let pirr: Vec<usize> = (1..=3).map(pirr_count).collect();
    let tree_ok = trees.iter().all(|r| *r == [1, 1, 3, 11]);
    let pq_ok = pirr == [1, 2, 11] && pq.iter().all(|r| *r == pirr);
    Outcome {
        pass: tree_ok && pq_ok,
        detail: format!(
            "trees at q = 0, 1, 5: {trees:?} (claimed [1, 1, 3, 11]); pqsym: {pq:?}, pirr_count {pirr:?}"
        ),
    }
}

fn criterion_8(algs: &Algebras) -> Outcome {
    let q = QMode::Symbolic;
    let mut reports = Vec::new();
    reports.extend(harness::verify_projector(&algs.st, AlgebraName::St, 4, q));
    reports.extend(harness::verify_projector(&algs.pqsym, AlgebraName::Pqsym, 4, q));
    reports.extend(harness::verify_projector(&algs.tree, AlgebraName::Tree, 4, q));
    reports.extend(harness::verify_projector(&algs.mperm, AlgebraName::Mperm, 4, q));
    reports.extend(harness::verify_brace_grid(&algs.st, AlgebraName::St, q));
    reports.extend(harness::verify_brace_grid(&algs.pqsym, AlgebraName::Pqsym, q));
    reports.extend(harness::verify_brace_grid(&algs.tree, AlgebraName::Tree, q));
    reports.extend(harness::verify_brace_grid(&algs.mperm, AlgebraName::Mperm, q));
    summarize(&reports)
}

fn criterion_9() -> (Outcome, Duration) {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_tridend")).arg("verify").output().expect("binary runs");
    let elapsed = start.elapsed();
    let text = String::from_utf8_lossy(&out.stdout);
    let summary = text.lines().last().unwrap_or("").to_string();
    let pass = out.status.success() && elapsed < Duration::from_secs(600);
    (Outcome { pass, detail: format!("exit {:?}, {summary}", out.status.code()) }, elapsed)
}

#[test]
fn acceptance_summary() {
    let algs = Algebras::new();
    let mut outcomes = Vec::new();
    let titles = [
        "golden examples",
        "axiom suites",
        "bialgebra suites",
        "morphism suites",
        "oracle equivalence",
        "dimension table",
        "primitive ranks",
        "brace and GV_q layer",
    ];
    type Criterion = fn(&Algebras) -> Outcome;
    let runs: [Criterion; 8] = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8];
    for (i, (title, run)) in titles.iter().zip(runs).enumerate() {
        let start = Instant::now();
        let o = run(&algs);
        let elapsed = start.elapsed();
        line(i + 1, title, &o, elapsed);
        outcomes.push((o, elapsed));
    }
    let (o9, t9) = criterion_9();
    line(9, "full verify run", &o9, t9);
    outcomes.push((o9, t9));

    assert!(outcomes[0].1 < Duration::from_secs(1), "golden examples took {:?}", outcomes[0].1);
    assert!(outcomes[1].1 < Duration::from_secs(300), "axiom suites took {:?}", outcomes[1].1);
    for i in [1, 2, 3, 4, 5, 7, 8] {
        assert!(outcomes[i].0.pass, "criterion {} failed: {}", i + 1, outcomes[i].0.detail);
    }

    // Criterion 1 fails only on the printed multipermutation sum: every golden
    // entry matches, and the two missing terms are genuine terms of the
    // product by the brute-force definition.
    let golden_errors: Vec<String> = golden_lines().iter().filter_map(|l| check_golden_line(&algs, l).err()).collect();
    assert!(golden_errors.is_empty(), "{golden_errors:?}");
    let gap = mperm_printed_gap(&algs);
    assert_eq!(
        gap.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
        vec!["[(1,3),(5),(2,4)]", "[(5),(1,3),(2,4)]"]
    );
    let (b, d) = (MPermutation::parse("[(1,3),2]").unwrap(), MPermutation::parse("[2,1]").unwrap());
    let mut oracle = Element::zero();
    for k in ProductKind::PARTIALS {
        oracle = oracle.add(&mperm_product_oracle(k, &b, &d));
    }
    for w in &gap {
        assert!(oracle.basis_terms().any(|(t, _)| t == w), "{w} not produced by the oracle");
    }

    // Criterion 7 fails only on the tree claim; the computed ranks are the
    // kernel dimensions 1, 2, 6, 22 at every specialization.
    assert_eq!(tree_ranks(&algs), vec![vec![1, 2, 6, 22]; 3]);
    assert_eq!(pqsym_ranks(&algs), vec![vec![1, 2, 11]; 3]);
}

#[test]
#[ignore = "the printed 11-term sum omits two terms required by the definition"]
fn printed_mperm_star_sum() {
    let algs = Algebras::new();
    assert_eq!(mperm_star_q1(&algs), mp_el(MPERM_PRINTED));
}

#[test]
#[ignore = "computed tree primitive ranks are 1, 2, 6, 22, not 1, 1, 3, 11"]
fn claimed_tree_primitive_ranks() {
    let algs = Algebras::new();
    assert_eq!(tree_ranks(&algs), vec![vec![1, 1, 3, 11]; 3]);
}
