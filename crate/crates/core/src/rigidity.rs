//! Certifying the standard `CP^n` weight structure.
//!
//! Given `n + 1` fixed points and an admissible skeleton whose pseudo-index is
//! `n + 1`, the sums `Gamma_i` (points ordered by Morse index) must satisfy
//! `Gamma_i = (n+1) a_i + d` with `a_0 > ... > a_n`, and then the weights at
//! `P_i` must be exactly `{a_i - a_j : j != i}`. Each step is checked
//! independently here, together with the Laurent-polynomial divisibility that
//! forces the weights and the generator check on the cohomology ring.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::betti_chern::c_integer;
use crate::error::{Error, Result};
use crate::exact::is_unit;
use crate::laurent::{laurent_ratio, LaurentPoly, Quotient};
use crate::localization::{chern_number, ChernMonomial};
use crate::model::{gamma_sum, morse_profile, validate, FixedPointData};
use crate::skeleton::{enumerate_skeletons, enumerate_with, EnumerationOptions, ToricSkeleton};

/// Upper limit on candidates examined while looking for a pseudo-index `n + 1` skeleton.
pub const SKELETON_SEARCH_CAP: usize = 4096;

/// Point indices sorted by number of negative weights, provided those numbers
/// are exactly `0, 1, ..., n` (one point each).
pub fn morse_order(data: &FixedPointData) -> Option<Vec<usize>> {
    let n = data.n();
    if data.len() != n + 1 {
        return None;
    }
    let mut order = vec![usize::MAX; n + 1];
    for (i, p) in data.points().iter().enumerate() {
        let l = p.negative_count();
        if order[l] != usize::MAX {
            return None;
        }
        order[l] = i;
    }
    Some(order)
}

/// The integers `a_0 > ... > a_n` and `d` with `Gamma_i = (n+1) a_i + d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extraction {
    /// `order[i]` is the point with `i` negative weights.
    pub order: Vec<usize>,
    #[serde(with = "crate::exact::serde_str::bigint_vec")]
    pub a: Vec<BigInt>,
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub d: BigInt,
}

/// Extracts `a` and `d` using `a_0 = 0`, `d = Gamma_0`.
///
/// The shift `a -> a + c, d -> d - (n+1) c` leaves every weight set
/// `{a_i - a_j}` unchanged; with `a_0 = 0` the relation `d = -sum a_j` holds
/// exactly when the `Gamma_i` sum to zero, which is checked.
pub fn extract_ad(data: &FixedPointData) -> Result<Extraction> {
    let n = data.n();
    let betti = morse_profile(data).betti;
    let order = match morse_order(data) {
        Some(o) if betti.is_projective() => o,
        _ => {
            return Err(Error::WrongFixedPointCount { expected: n + 1, found: data.len(), betti: betti.0 });
        }
    };
    let gammas: Vec<BigInt> = order.iter().map(|&i| data.points()[i].gamma()).collect();
    let modulus = BigInt::from(n + 1);

    let mut a = Vec::with_capacity(n + 1);
    for (i, g) in gammas.iter().enumerate() {
        let diff = g - &gammas[0];
        let (q, r) = diff.div_rem(&modulus);
        if !r.is_zero() {
            return Err(Error::DivisibilityFailure { index: i, modulus: n + 1, difference: diff.to_string() });
        }
        a.push(q);
    }
    for i in 1..=n {
        if gammas[i - 1] <= gammas[i] {
            return Err(Error::GammaOrderFailure {
                index: i,
                previous: gammas[i - 1].to_string(),
                current: gammas[i].to_string(),
            });
        }
    }
    let d = gammas[0].clone();
    let a_sum: BigInt = a.iter().sum();
    if d != -a_sum {
        let total: BigInt = gammas.iter().sum();
        return Err(Error::GammaSumNonzero(total.to_string()));
    }
    Ok(Extraction { order, a, d })
}

/// `true` at position `i` iff the point with `i` negative weights carries
/// exactly `{a_i - a_j : j != i}`.
pub fn verify_cpn_weights(data: &FixedPointData, a: &[BigInt]) -> Vec<bool> {
    let Some(order) = morse_order(data).filter(|_| a.len() == data.n() + 1) else {
        return vec![false; data.len()];
    };
    order
        .iter()
        .enumerate()
        .map(|(i, &pi)| {
            let mut expected = expected_weights(a, i);
            expected.sort();
            let mut actual: Vec<BigInt> = data.points()[pi].weights.iter().map(|&w| BigInt::from(w)).collect();
            actual.sort();
            expected == actual
        })
        .collect()
}

fn expected_weights(a: &[BigInt], i: usize) -> Vec<BigInt> {
    (0..a.len()).filter(|&j| j != i).map(|j| &a[i] - &a[j]).collect()
}

/// `prod_{j != i} (1 - t^{a_i - a_j}) / prod_k (1 - t^{w_ik})` for every point,
/// in Morse-index order.
pub fn laurent_certificates(data: &FixedPointData, a: &[BigInt]) -> Result<Vec<Quotient>> {
    let order = morse_order(data)
        .filter(|_| a.len() == data.n() + 1)
        .ok_or_else(|| Error::Domain("Laurent certificates need n + 1 points with distinct Morse indices".into()))?;
    order
        .iter()
        .enumerate()
        .map(|(i, &pi)| {
            let num: Vec<i64> = expected_weights(a, i)
                .iter()
                .map(|e| i64::try_from(e).map_err(|_| Error::Domain(format!("exponent {e} does not fit in i64"))))
                .collect::<Result<_>>()?;
            laurent_ratio(&num, &data.points()[pi].weights)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TolmanGenerators {
    /// `tau_i = coeffs[i] * c_1^i` generates `H^2i`.
    #[serde(with = "crate::exact::serde_str::rational_vec")]
    pub coeffs: Vec<BigRational>,
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub c1_top: BigInt,
    /// `int tau_i tau_{n-i}` for `i = 0..=n`; `i = 0` is `int tau_n`.
    #[serde(with = "crate::exact::serde_str::rational_vec")]
    pub pairings: Vec<BigRational>,
    /// `int tau_1^n`.
    #[serde(with = "crate::exact::serde_str::rational")]
    pub tau1_power: BigRational,
    /// Every pairing and `int tau_1^n` is `+-1`.
    pub ok: bool,
}

/// Generators `tau_i = Lambda_i^- / prod_{j<i} (Gamma_i - Gamma_j) * c_1^i`
/// and the check that they pair like the powers of the hyperplane class.
pub fn tolman_generators(data: &FixedPointData) -> Result<TolmanGenerators> {
    let n = data.n();
    let order = morse_order(data)
        .ok_or_else(|| Error::Domain("generators need n + 1 points with distinct Morse indices".into()))?;
    let pts: Vec<_> = order.iter().map(|&i| &data.points()[i]).collect();
    let gammas: Vec<BigInt> = pts.iter().map(|p| p.gamma()).collect();

    let mut coeffs = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut denom = BigInt::one();
        for j in 0..i {
            let diff = &gammas[i] - &gammas[j];
            if diff.is_zero() {
                return Err(Error::Domain(format!("Gamma_{i} = Gamma_{j}, generators undefined")));
            }
            denom *= diff;
        }
        coeffs.push(BigRational::new(pts[i].lambda_minus(), denom));
    }

    let c1_top = chern_number(data, &ChernMonomial::c1_pow(n))?;
    let top = BigRational::from_integer(c1_top.clone());
    let pairings: Vec<BigRational> = (0..=n).map(|i| &coeffs[i] * &coeffs[n - i] * &top).collect();
    let tau1_power = num_traits::pow(coeffs[1].clone(), n) * &top;
    let ok = pairings.iter().all(is_unit) && is_unit(&tau1_power);
    Ok(TolmanGenerators { coeffs, c1_top, pairings, tau1_power, ok })
}

/// Pipeline stage, in execution order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Stage {
    Validation,
    Skeleton,
    BettiNumbers,
    EdgeValues,
    Extraction,
    WeightMatch,
    Laurent,
    Generators,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Validation => "validation",
            Stage::Skeleton => "skeleton",
            Stage::BettiNumbers => "betti-numbers",
            Stage::EdgeValues => "edge-values",
            Stage::Extraction => "extraction",
            Stage::WeightMatch => "weight-match",
            Stage::Laurent => "laurent",
            Stage::Generators => "generators",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail { stage: Stage, reason: String },
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => f.write_str("PASS"),
            Verdict::Fail { stage, reason } => write!(f, "FAIL at {stage}: {reason}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub n: usize,
    pub betti: Vec<usize>,
    /// `n <= 5` or unimodal Betti numbers. Outside this range a PASS still
    /// certifies the weights, but the classification result does not apply.
    pub within_hypotheses: bool,
    /// Position of the chosen skeleton among candidates with every edge `c1 >= n + 1`.
    pub skeleton_index: Option<usize>,
    pub skeleton: Option<ToricSkeleton>,
    #[serde(with = "crate::exact::serde_str::bigint_opt")]
    pub rho: Option<BigInt>,
    /// `C(n + 1, n, b)`.
    #[serde(with = "crate::exact::serde_str::bigint_opt")]
    pub c_value: Option<BigInt>,
    pub all_c1_equal_ok: bool,
    /// Point ids in Morse-index order.
    pub order: Vec<String>,
    #[serde(with = "crate::exact::serde_str::bigint_vec")]
    pub a: Vec<BigInt>,
    #[serde(with = "crate::exact::serde_str::bigint_opt")]
    pub d: Option<BigInt>,
    pub divisibility_ok: bool,
    pub gamma_order_ok: bool,
    pub weight_match: Vec<bool>,
    pub laurent_ok: Vec<bool>,
    /// The quotient at each point, `None` where it is not a Laurent polynomial.
    pub laurent: Vec<Option<LaurentPoly>>,
    #[serde(with = "crate::exact::serde_str::rational_vec")]
    pub tolman_coeffs: Vec<BigRational>,
    #[serde(with = "crate::exact::serde_str::rational_opt")]
    pub tau1_power: Option<BigRational>,
    pub generator_check_ok: bool,
    pub verdict: Verdict,
}

impl RigidityCertificate {
    fn new(data: &FixedPointData) -> Self {
        let profile = morse_profile(data);
        Self {
            n: data.n(),
            within_hypotheses: data.n() <= 5 || profile.unimodal,
            betti: profile.betti.0,
            skeleton_index: None,
            skeleton: None,
            rho: None,
            c_value: None,
            all_c1_equal_ok: false,
            order: Vec::new(),
            a: Vec::new(),
            d: None,
            divisibility_ok: false,
            gamma_order_ok: false,
            weight_match: Vec::new(),
            laurent_ok: Vec::new(),
            laurent: Vec::new(),
            tolman_coeffs: Vec::new(),
            tau1_power: None,
            generator_check_ok: false,
            verdict: Verdict::Pass,
        }
    }

    fn fail(mut self, stage: Stage, reason: impl Into<String>) -> Self {
        if self.verdict.is_pass() {
            self.verdict = Verdict::Fail { stage, reason: reason.into() };
        }
        self
    }
}

/// Runs validation, skeleton search, the C-integer and Betti checks, edge
/// values, extraction of `a` and `d`, weight match, Laurent certificates and
/// generators, in that order. The verdict names the first failing stage.
pub fn rigidity_verdict(data: &FixedPointData) -> RigidityCertificate {
    let n = data.n();
    let target = BigInt::from(n + 1);
    let mut cert = RigidityCertificate::new(data);

    let report = validate(data);
    if !report.is_ok() {
        return cert.fail(Stage::Validation, report.messages.join("; "));
    }

    let mut opts = EnumerationOptions::new(SKELETON_SEARCH_CAP);
    opts.min_edge_c1 = Some(target.clone());
    let restricted = enumerate_with(data, &opts);
    let found = restricted.skeletons.iter().position(|s| s.rho() == Some(&target));
    let Some(index) = found else {
        let all = enumerate_skeletons(data, SKELETON_SEARCH_CAP, false);
        let best = all.skeletons.iter().filter_map(|s| s.rho()).max();
        let reason = match best {
            Some(best) => {
                format!("rho != n+1: no admissible skeleton has pseudo-index {target} (largest found: {best})")
            }
            None => "no admissible skeleton exists".to_string(),
        };
        let capped = if restricted.truncated || all.truncated { " (search capped)" } else { "" };
        return cert.fail(Stage::Skeleton, format!("{reason}{capped}"));
    };
    let skeleton = restricted.skeletons[index].clone();
    cert.skeleton_index = Some(index);
    cert.rho = Some(target.clone());

    let betti = morse_profile(data).betti;
    match c_integer(&target, n, &betti) {
        Ok(c) => cert.c_value = Some(c.value),
        Err(e) => return cert.fail(Stage::BettiNumbers, e.to_string()),
    }
    if !betti.is_projective() {
        let err = Error::WrongFixedPointCount { expected: n + 1, found: data.len(), betti: betti.0.clone() };
        cert.skeleton = Some(skeleton);
        return cert.fail(Stage::BettiNumbers, err.to_string());
    }

    cert.all_c1_equal_ok = skeleton.edges.iter().all(|e| e.c1 == target);
    cert.skeleton = Some(skeleton);
    if !cert.all_c1_equal_ok {
        return cert.fail(Stage::EdgeValues, format!("not every edge has c1 = {target}"));
    }

    let extraction = match extract_ad(data) {
        Ok(x) => x,
        Err(e) => {
            cert.divisibility_ok = !matches!(e, Error::DivisibilityFailure { .. } | Error::WrongFixedPointCount { .. });
            return cert.fail(Stage::Extraction, e.to_string());
        }
    };
    cert.divisibility_ok = true;
    cert.gamma_order_ok = true;
    cert.order = extraction.order.iter().map(|&i| data.points()[i].id.clone()).collect();
    cert.d = Some(extraction.d.clone());
    cert.a = extraction.a.clone();

    cert.weight_match = verify_cpn_weights(data, &cert.a);
    match laurent_certificates(data, &cert.a) {
        Ok(qs) => {
            cert.laurent_ok = qs.iter().map(Result::is_ok).collect();
            cert.laurent = qs.into_iter().map(Result::ok).collect();
        }
        Err(e) => cert = cert.fail(Stage::Laurent, e.to_string()),
    }
    match tolman_generators(data) {
        Ok(t) => {
            cert.tolman_coeffs = t.coeffs;
            cert.tau1_power = Some(t.tau1_power);
            cert.generator_check_ok = t.ok;
        }
        Err(e) => cert = cert.fail(Stage::Generators, e.to_string()),
    }

    if let Some(i) = cert.weight_match.iter().position(|ok| !ok) {
        let reason = format!("weights at {} differ from {{a_i - a_j}}", cert.order[i]);
        cert = cert.fail(Stage::WeightMatch, reason);
    }
    if let Some(i) = cert.laurent_ok.iter().position(|ok| !ok) {
        let reason = format!("quotient at {} is not a Laurent polynomial", cert.order[i]);
        cert = cert.fail(Stage::Laurent, reason);
    }
    if !cert.generator_check_ok {
        cert = cert.fail(Stage::Generators, "generator pairings are not all +-1");
    }
    cert
}

/// Checks used for negative testing, in the order they are tried.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Detection {
    Hattori,
    GammaSum,
    FixedPointCount,
    Divisibility,
    GammaOrder,
    WeightMatch,
    Laurent,
}

/// First check that rejects `data` as standard `CP^n` fixed-point data, or
/// `None` if all pass.
pub fn detect_defect(data: &FixedPointData) -> Option<Detection> {
    if !validate(data).hattori_ok {
        return Some(Detection::Hattori);
    }
    if !gamma_sum(data).is_zero() {
        return Some(Detection::GammaSum);
    }
    let x = match extract_ad(data) {
        Ok(x) => x,
        Err(Error::WrongFixedPointCount { .. }) => return Some(Detection::FixedPointCount),
        Err(Error::DivisibilityFailure { .. }) => return Some(Detection::Divisibility),
        Err(Error::GammaOrderFailure { .. }) => return Some(Detection::GammaOrder),
        Err(Error::GammaSumNonzero(_)) => return Some(Detection::GammaSum),
        Err(_) => return Some(Detection::FixedPointCount),
    };
    if verify_cpn_weights(data, &x.a).iter().any(|ok| !ok) {
        return Some(Detection::WeightMatch);
    }
    match laurent_certificates(data, &x.a) {
        Ok(qs) if qs.iter().all(Result::is_ok) => None,
        _ => Some(Detection::Laurent),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{gen_product, gen_standard_cpn, mutate, MutationKind};
    use crate::model::FixedPoint;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn cp2() -> FixedPointData {
        gen_standard_cpn(&[0, 1, 3]).unwrap()
    }

    fn with_weights(d: &FixedPointData, i: usize, w: &[i64]) -> FixedPointData {
        let mut pts = d.points().to_vec();
        pts[i].weights = w.to_vec();
        FixedPointData::new(d.n(), pts).unwrap()
    }

    #[test]
    fn cp2_extraction() {
        let x = extract_ad(&cp2()).unwrap();
        assert_eq!(x.a, big(&[0, -1, -3]));
        assert_eq!(x.d, BigInt::from(4));
        assert_eq!(x.order, vec![0, 1, 2]);
    }

    #[test]
    fn extraction_preconditions() {
        let prod = gen_product(&gen_standard_cpn(&[0, 1]).unwrap(), &gen_standard_cpn(&[0, 2]).unwrap()).unwrap();
        assert!(matches!(extract_ad(&prod), Err(Error::WrongFixedPointCount { .. })));

        // Gamma = (4, 2, -6)
        let d = FixedPointData::new(
            2,
            vec![
                FixedPoint::new("A", vec![1, 3]),
                FixedPoint::new("B", vec![-1, 3]),
                FixedPoint::new("C", vec![-3, -3]),
            ],
        )
        .unwrap();
        assert!(matches!(extract_ad(&d), Err(Error::DivisibilityFailure { index: 1, .. })));
    }

    #[test]
    fn extraction_is_permutation_invariant() {
        let d = gen_standard_cpn(&[2, -1, 7, 3]).unwrap();
        let mut pts = d.points().to_vec();
        pts.rotate_left(2);
        let e = FixedPointData::new(3, pts).unwrap();
        assert_eq!(extract_ad(&d).unwrap().a, extract_ad(&e).unwrap().a);
        assert_eq!(rigidity_verdict(&e).verdict, Verdict::Pass);
    }

    #[test]
    fn weight_verification() {
        let a = big(&[0, -1, -3]);
        assert_eq!(verify_cpn_weights(&cp2(), &a), vec![true, true, true]);
        let bad = with_weights(&cp2(), 1, &[-1, 3]);
        assert_eq!(verify_cpn_weights(&bad, &a), vec![true, false, true]);

        let cp3 = gen_standard_cpn(&[0, 1, 2, 4]).unwrap();
        let x = extract_ad(&cp3).unwrap();
        assert_eq!(x.a, big(&[0, -1, -2, -4]));
        assert!(verify_cpn_weights(&cp3, &x.a).iter().all(|&ok| ok));
    }

    #[test]
    fn laurent_on_cp2() {
        let qs = laurent_certificates(&cp2(), &big(&[0, -1, -3])).unwrap();
        assert!(qs.iter().all(|q| q.as_ref().is_ok_and(LaurentPoly::is_one)));
    }

    #[test]
    fn laurent_refutes_wrong_minimum() {
        // weights {1, 4} against the expected {2, 3}
        let d = FixedPointData::new(
            2,
            vec![
                FixedPoint::new("A", vec![1, 4]),
                FixedPoint::new("B", vec![-1, 2]),
                FixedPoint::new("C", vec![-2, -4]),
            ],
        )
        .unwrap();
        let a = big(&[0, -2, -3]);
        let qs = laurent_certificates(&d, &a).unwrap();
        assert!(qs[0].is_err());
    }

    #[test]
    fn cp2_generators() {
        let t = tolman_generators(&cp2()).unwrap();
        assert_eq!(t.coeffs, vec![q(1, 1), q(1, 3), q(1, 9)]);
        assert_eq!(t.c1_top, BigInt::from(9));
        assert_eq!(t.pairings, vec![q(1, 1); 3]);
        assert!(t.ok);
    }

    #[test]
    fn generators_are_scale_invariant() {
        let base = tolman_generators(&cp2()).unwrap();
        let scaled = tolman_generators(&cp2().scaled(2).unwrap()).unwrap();
        assert_eq!(scaled.coeffs, base.coeffs);
        assert_eq!(scaled.c1_top, base.c1_top);
        assert_eq!(scaled.pairings, base.pairings);
        assert!(scaled.ok);
    }

    #[test]
    fn verdicts() {
        let pass = rigidity_verdict(&cp2());
        assert_eq!(pass.verdict, Verdict::Pass);
        assert_eq!(pass.a, big(&[0, -1, -3]));
        assert_eq!(pass.c_value, Some(BigInt::zero()));
        assert!(pass.laurent.iter().all(|l| l.as_ref().is_some_and(LaurentPoly::is_one)));
        assert_eq!(pass.tau1_power, Some(q(1, 1)));

        let prod = gen_product(&gen_standard_cpn(&[0, 1]).unwrap(), &gen_standard_cpn(&[0, 2]).unwrap()).unwrap();
        match rigidity_verdict(&prod).verdict {
            Verdict::Fail { stage: Stage::Skeleton, reason } => assert!(reason.contains("rho != n+1"), "{reason}"),
            other => panic!("unexpected {other:?}"),
        }

        let bad = with_weights(&cp2(), 1, &[-1, 3]);
        assert!(matches!(rigidity_verdict(&bad).verdict, Verdict::Fail { stage: Stage::Validation, .. }));
    }

    #[test]
    fn scaled_standard_data_still_passes() {
        let d = gen_standard_cpn(&[0, 1, 2, 4]).unwrap();
        let s = d.scaled(3).unwrap();
        let (cd, cs) = (rigidity_verdict(&d), rigidity_verdict(&s));
        assert!(cs.verdict.is_pass());
        let three = BigInt::from(3);
        assert_eq!(cs.a, cd.a.iter().map(|x| x * &three).collect::<Vec<_>>());
        assert_eq!(cs.weight_match, cd.weight_match);
    }

    #[test]
    fn swap_mutation_is_caught_by_divisibility() {
        let d = gen_standard_cpn(&[0, 1, 2, 4]).unwrap();
        for seed in 0..10 {
            let m = mutate(&d, MutationKind::SwapWeightsBetweenPoints, seed);
            assert_eq!(detect_defect(&m), Some(Detection::Divisibility), "seed {seed}");
        }
        assert_eq!(detect_defect(&d), None);
    }
}
