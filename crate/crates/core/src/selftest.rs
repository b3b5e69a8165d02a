//! Built-in acceptance checks over generated corpora.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::betti_chern::{c_integer, chern_number_from_betti};
use crate::corpus::{gen_product, gen_standard_cpn, mutate, MutationKind};
use crate::laurent::{laurent_ratio, LaurentPoly};
use crate::localization::{abbv_integral, chern_number_c1cn1, ChernMonomial};
use crate::model::{morse_profile, BettiVector, FixedPointData};
use crate::rigidity::{detect_defect, rigidity_verdict, Detection};
use crate::skeleton::{analyze_skeleton, enumerate_skeletons, enumerate_with, EnumerationOptions};

/// Candidates examined per corpus dataset when every skeleton is analysed.
pub const CORPUS_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn from_failures(name: &str, checked: usize, failures: Vec<String>) -> Self {
        let passed = failures.is_empty();
        let detail = if passed {
            format!("{checked} case(s) checked")
        } else {
            let shown: Vec<_> = failures.iter().take(5).cloned().collect();
            format!("{} of {checked} case(s) failed: {}", failures.len(), shown.join("; "))
        };
        Self { name: name.into(), passed, detail }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            out.push_str(&format!("[{}] {}: {}\n", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail));
        }
        let failed = self.results.iter().filter(|r| !r.passed).count();
        out.push_str(&format!("{} of {} checks passed\n", self.results.len() - failed, self.results.len()));
        out
    }
}

/// Standard `CP^n` for `n <= 6` and products `CP^a x CP^b` with `a + b <= 6`.
pub fn corpus() -> Vec<(String, FixedPointData)> {
    let mut out = Vec::new();
    for n in 1..=6i64 {
        let m: Vec<i64> = (0..=n).collect();
        out.push((format!("CP{n}{m:?}"), gen_standard_cpn(&m).expect("distinct entries")));
    }
    out.push(("CP2[0, 1, 3]".into(), gen_standard_cpn(&[0, 1, 3]).expect("distinct entries")));
    out.push(("CP3[0, 1, 2, 4]".into(), gen_standard_cpn(&[0, 1, 2, 4]).expect("distinct entries")));
    for a in 1..=5i64 {
        for b in a..=6 - a {
            let ma: Vec<i64> = (0..=a).collect();
            let mb: Vec<i64> = (0..=b).map(|j| 2 * j).collect();
            let d = gen_product(&gen_standard_cpn(&ma).expect("distinct"), &gen_standard_cpn(&mb).expect("distinct"))
                .expect("valid factors");
            out.push((format!("CP{a}{ma:?} x CP{b}{mb:?}"), d));
        }
    }
    out
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    let corpus = corpus();
    let results = vec![
        check_cpn_rigidity(seed),
        check_chern_betti(&corpus),
        check_abbv_structure(&corpus),
        check_c_consistency(&corpus),
        check_bounds(&corpus, seed),
        check_matching_independence(),
        check_detection_matrix(),
        check_laurent_oracle(seed),
    ];
    SelftestReport { seed, results }
}

fn random_tuple(rng: &mut impl Rng, n: usize) -> Vec<i64> {
    let pool: Vec<i64> = (-50..=50).collect();
    let mut m: Vec<i64> = pool.choose_multiple(rng, n + 1).copied().collect();
    m.sort_unstable();
    m
}

pub fn check_cpn_rigidity(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for _ in 0..50 {
        let n = rng.gen_range(1..=8usize);
        let m = random_tuple(&mut rng, n);
        let cert = rigidity_verdict(&gen_standard_cpn(&m).expect("distinct entries"));
        let one = BigRational::one();
        if !cert.verdict.is_pass() {
            failures.push(format!("{m:?}: {}", cert.verdict));
        } else if cert.rho != Some(BigInt::from(n + 1)) {
            failures.push(format!("{m:?}: rho = {:?}", cert.rho));
        } else if cert.c_value != Some(BigInt::zero()) {
            failures.push(format!("{m:?}: C = {:?}", cert.c_value));
        } else if cert.tau1_power.as_ref() != Some(&one) {
            failures.push(format!("{m:?}: int tau_1^n = {:?}", cert.tau1_power));
        }
    }
    CheckResult::from_failures("CP^n rigidity on 50 random tuples", 50, failures)
}

pub fn check_chern_betti(corpus: &[(String, FixedPointData)]) -> CheckResult {
    let mut failures = Vec::new();
    for (name, d) in corpus {
        let betti = morse_profile(d).betti;
        match (chern_number_from_betti(d.n(), &betti), chern_number_c1cn1(d)) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => failures.push(format!("{name}: from Betti {a:?}, by localization {b:?}")),
        }
    }
    let spot = [
        (gen_product(&gen_standard_cpn(&[0, 1]).expect("ok"), &gen_standard_cpn(&[0, 2]).expect("ok")), 8),
        (gen_standard_cpn(&[0, 1, 2, 4]), 24),
    ];
    for (d, want) in spot {
        let d = d.expect("valid corpus entry");
        match chern_number_c1cn1(&d) {
            Ok(v) if v == BigInt::from(want) => {}
            other => failures.push(format!("spot value {other:?}, expected {want}")),
        }
    }
    CheckResult::from_failures("int c1 c_(n-1) from Betti numbers", corpus.len() + 2, failures)
}

pub fn check_abbv_structure(corpus: &[(String, FixedPointData)]) -> CheckResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, d) in corpus {
        let n = d.n();
        for deg in 0..=n {
            for m in ChernMonomial::all_of_degree(deg, n) {
                checked += 1;
                match abbv_integral(d, &m) {
                    Ok(v) if deg < n && !v.is_zero() => failures.push(format!("{name}: int {m} = {v}")),
                    Ok(v) if deg == n && !v.is_integer() => failures.push(format!("{name}: int {m} = {v}")),
                    Ok(_) => {}
                    Err(e) => failures.push(format!("{name}: {m}: {e}")),
                }
            }
        }
        let cn = ChernMonomial::new(vec![n], n).expect("index n is in range");
        match abbv_integral(d, &cn) {
            Ok(v) if v == BigRational::from_integer(BigInt::from(d.len())) => {}
            other => failures.push(format!("{name}: int c_n = {other:?}, chi = {}", d.len())),
        }
    }
    CheckResult::from_failures("localization vanishing, integrality, int c_n = chi", checked, failures)
}

pub fn check_c_consistency(corpus: &[(String, FixedPointData)]) -> CheckResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (name, d) in corpus {
        let betti = morse_profile(d).betti;
        for (i, s) in enumerate_skeletons(d, CORPUS_CAP, false).skeletons.iter().enumerate() {
            checked += 1;
            let a = match analyze_skeleton(d, s) {
                Ok(a) => a,
                Err(e) => {
                    failures.push(format!("{name}[{i}]: {e}"));
                    continue;
                }
            };
            let c = match c_integer(&a.rho, d.n(), &betti) {
                Ok(c) => c.value,
                Err(e) => {
                    failures.push(format!("{name}[{i}]: {e}"));
                    continue;
                }
            };
            let direct = &a.c1_sum - &a.rho * BigInt::from(a.edge_count);
            if c != direct || c < BigInt::zero() || c.is_zero() != a.all_equal_rho {
                failures
                    .push(format!("{name}[{i}]: C = {c}, sum - rho*edges = {direct}, all equal {}", a.all_equal_rho));
            }
        }
    }
    CheckResult::from_failures("C(rho, n, b) = c1_sum - rho * edges", checked, failures)
}

/// Random palindromic Betti vector with `b_0 = 1`, non-decreasing up to the middle.
pub fn random_unimodal_betti(rng: &mut impl Rng, n: usize) -> BettiVector {
    let mut lower = vec![1usize];
    for _ in 1..=n / 2 {
        let last = *lower.last().expect("non-empty");
        lower.push(last + rng.gen_range(0..=3));
    }
    let b = (0..=n).map(|k| lower[k.min(n - k)]).collect();
    BettiVector(b)
}

pub fn check_bounds(corpus: &[(String, FixedPointData)], seed: u64) -> CheckResult {
    let mut failures = Vec::new();
    for (name, d) in corpus {
        let n = d.n();
        let mut over_2n = EnumerationOptions::new(1);
        over_2n.min_edge_c1 = Some(BigInt::from(2 * n + 1));
        if !enumerate_with(d, &over_2n).skeletons.is_empty() {
            failures.push(format!("{name}: candidate with rho > 2n"));
        }
        if morse_profile(d).unimodal {
            let mut over = EnumerationOptions::new(1);
            over.min_edge_c1 = Some(BigInt::from(n + 2));
            if !enumerate_with(d, &over).skeletons.is_empty() {
                failures.push(format!("{name}: unimodal but a candidate has rho > n+1"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0b5);
    for _ in 0..100 {
        let n = rng.gen_range(1..=12usize);
        let b = random_unimodal_betti(&mut rng, n);
        match c_integer(&BigInt::from(n + 2), n, &b) {
            Ok(c) if c.value < BigInt::zero() => {}
            other => failures.push(format!("b = {:?}: C(n+2) = {other:?}", b.0)),
        }
    }
    CheckResult::from_failures("pseudo-index bounds", corpus.len() + 100, failures)
}

pub fn check_matching_independence() -> CheckResult {
    let d = gen_product(&gen_standard_cpn(&[0, 1]).expect("ok"), &gen_standard_cpn(&[0, 2]).expect("ok"))
        .expect("valid factors");
    let set = enumerate_skeletons(&d, 100, false);
    let mut failures = Vec::new();
    if set.skeletons.len() != 4 {
        failures.push(format!("{} candidates, expected 4", set.skeletons.len()));
    }
    let mut rhos = std::collections::BTreeSet::new();
    let mut product_rho = None;
    for s in &set.skeletons {
        match analyze_skeleton(&d, s) {
            Ok(a) => {
                if a.c1_sum != BigInt::from(8) {
                    failures.push(format!("c1_sum = {}", a.c1_sum));
                }
                // factor-wise edges only join points that differ in one factor
                let factorwise = s.edges.iter().all(|e| {
                    let (sa, sb) = e.source.split_once('x').unwrap_or_default();
                    let (ta, tb) = e.target.split_once('x').unwrap_or_default();
                    (sa == ta) != (sb == tb)
                });
                if factorwise {
                    product_rho = Some(a.rho.clone());
                }
                rhos.insert(a.rho);
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    let expected: std::collections::BTreeSet<BigInt> = [BigInt::from(2), BigInt::from(-2)].into();
    if rhos != expected {
        let got: Vec<String> = rhos.iter().map(BigInt::to_string).collect();
        failures.push(format!("pseudo-indices {{{}}}, expected {{2, -2}}", got.join(", ")));
    }
    if product_rho != Some(BigInt::from(2)) {
        failures.push(format!("product matching rho = {product_rho:?}"));
    }
    CheckResult::from_failures("matching independence on CP1 x CP1", 1, failures)
}

/// Detecting check for each mutation kind on `CP^3(0,1,2,4)`.
pub fn detection_matrix(seed: u64) -> Vec<(MutationKind, Option<Detection>)> {
    let base = gen_standard_cpn(&[0, 1, 2, 4]).expect("distinct entries");
    let delta = std::num::NonZeroI64::new(1).expect("nonzero");
    [
        MutationKind::FlipWeightSign,
        MutationKind::PerturbWeight(delta),
        MutationKind::SwapWeightsBetweenPoints,
        MutationKind::DropFixedPoint,
    ]
    .into_iter()
    .map(|k| (k, detect_defect(&mutate(&base, k, seed))))
    .collect()
}

pub fn check_detection_matrix() -> CheckResult {
    let mut failures = Vec::new();
    let mut checked = 0;
    for seed in 0..20 {
        let first = detection_matrix(seed);
        if first != detection_matrix(seed) {
            failures.push(format!("seed {seed}: detection not stable"));
        }
        for (k, det) in first {
            checked += 1;
            if det.is_none() {
                failures.push(format!("seed {seed}: {k} undetected"));
            }
        }
    }
    CheckResult::from_failures("mutation detection matrix on CP3(0,1,2,4)", checked, failures)
}

fn dense_product(exps: &[i64]) -> BTreeMap<i64, BigInt> {
    let mut acc: BTreeMap<i64, BigInt> = [(0, BigInt::one())].into();
    for &e in exps {
        let mut next = acc.clone();
        for (k, v) in &acc {
            *next.entry(k + e).or_insert_with(BigInt::zero) -= v;
        }
        next.retain(|_, v| !v.is_zero());
        acc = next;
    }
    acc
}

fn dense_times(p: &BTreeMap<i64, BigInt>, q: &LaurentPoly) -> BTreeMap<i64, BigInt> {
    let mut out: BTreeMap<i64, BigInt> = BTreeMap::new();
    for (a, x) in p {
        for (b, y) in q.terms() {
            *out.entry(a + b).or_insert_with(BigInt::zero) += x * y;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn random_exps(rng: &mut impl Rng, len: usize) -> Vec<i64> {
    (0..len)
        .map(|_| {
            let e = rng.gen_range(1..=6i64);
            if rng.gen_bool(0.5) {
                e
            } else {
                -e
            }
        })
        .collect()
}

pub fn check_laurent_oracle(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1a0);
    let mut failures = Vec::new();
    let mut succeeded = 0;
    for i in 0..2000 {
        let (num, den) = if i < 1000 {
            let (dl, nl) = (rng.gen_range(1..=4), rng.gen_range(0..=3));
            let den = random_exps(&mut rng, dl);
            let mut num = random_exps(&mut rng, nl);
            num.extend(&den);
            num.shuffle(&mut rng);
            (num, den)
        } else {
            let n = rng.gen_range(1..=5);
            let d = rng.gen_range(1..=4);
            (random_exps(&mut rng, n), random_exps(&mut rng, d))
        };
        match laurent_ratio(&num, &den) {
            Ok(Ok(q)) => {
                if i >= 1000 {
                    succeeded += 1;
                }
                if dense_times(&dense_product(&den), &q) != dense_product(&num) {
                    failures.push(format!("{num:?} / {den:?}: quotient does not reconstruct"));
                }
            }
            Ok(Err(_)) if i < 1000 => failures.push(format!("{num:?} / {den:?}: constructed quotient reported absent")),
            Ok(Err(_)) => {}
            Err(e) => failures.push(format!("{num:?} / {den:?}: {e}")),
        }
    }
    let mut r = CheckResult::from_failures("Laurent division oracle", 2000, failures);
    r.detail.push_str(&format!(" ({succeeded} of 1000 unconstrained pairs divisible)"));
    r
}
