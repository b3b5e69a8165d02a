//! Fixed-point data of a Hamiltonian circle space and its structural checks.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One isolated fixed point: an identifier, the weights of the isotropy
/// representation (order irrelevant) and an optional exact moment value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub id: String,
    pub weights: Vec<i64>,
    pub moment: Option<BigRational>,
}

impl FixedPoint {
    pub fn new(id: impl Into<String>, weights: Vec<i64>) -> Self {
        Self { id: id.into(), weights, moment: None }
    }

    pub fn with_moment(mut self, moment: BigRational) -> Self {
        self.moment = Some(moment);
        self
    }

    /// Number of negative weights (half the Morse index).
    pub fn negative_count(&self) -> usize {
        self.weights.iter().filter(|&&w| w < 0).count()
    }

    /// Sum of the weights, i.e. the restriction of the equivariant `c_1`.
    pub fn gamma(&self) -> BigInt {
        self.weights.iter().map(|&w| BigInt::from(w)).sum()
    }

    /// Product of the negative weights; 1 when there are none.
    pub fn lambda_minus(&self) -> BigInt {
        self.weights.iter().filter(|&&w| w < 0).fold(BigInt::one(), |acc, &w| acc * w)
    }

    /// Product of all weights (the equivariant Euler class coefficient).
    pub fn euler_weight(&self) -> BigInt {
        self.weights.iter().fold(BigInt::one(), |acc, &w| acc * w)
    }
}

/// Half-dimension `n` and the fixed points in file order.
///
/// Construction enforces the structural invariants: `n >= 1`, unique ids,
/// exactly `n` weights per point, all weights nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointData {
    n: usize,
    points: Vec<FixedPoint>,
    synthetic_moments: bool,
}

impl FixedPointData {
    pub fn new(n: usize, points: Vec<FixedPoint>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Malformed("half-dimension n must be at least 1".into()));
        }
        let mut ids = HashSet::new();
        for p in &points {
            if !ids.insert(p.id.as_str()) {
                return Err(Error::Malformed(format!("duplicate fixed point id {:?}", p.id)));
            }
            if p.weights.len() != n {
                return Err(Error::Malformed(format!(
                    "fixed point {:?} has {} weights, expected n = {n}",
                    p.id,
                    p.weights.len()
                )));
            }
            if p.weights.contains(&0) {
                return Err(Error::Malformed(format!("fixed point {:?} has a zero weight", p.id)));
            }
        }
        Ok(Self { n, points, synthetic_moments: false })
    }

    /// Skips the nonzero-weight check so a document with zero weights can still
    /// be validated flag by flag.
    pub(crate) fn with_zero_weights(n: usize, points: Vec<FixedPoint>) -> Result<Self> {
        let masked = points
            .iter()
            .map(|p| FixedPoint {
                weights: p.weights.iter().map(|&w| if w == 0 { 1 } else { w }).collect(),
                ..p.clone()
            })
            .collect();
        Self::new(n, masked)?;
        Ok(Self { n, points, synthetic_moments: false })
    }

    /// Marks the moment values as generated rather than measured.
    pub fn with_synthetic_moments(mut self, synthetic: bool) -> Self {
        self.synthetic_moments = synthetic;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn points(&self) -> &[FixedPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn synthetic_moments(&self) -> bool {
        self.synthetic_moments
    }

    pub fn has_moments(&self) -> bool {
        self.points.iter().any(|p| p.moment.is_some())
    }

    pub fn gammas(&self) -> Vec<BigInt> {
        self.points.iter().map(FixedPoint::gamma).collect()
    }

    /// Same data with every weight multiplied by `s`.
    pub fn scaled(&self, s: i64) -> Result<Self> {
        if s == 0 {
            return Err(Error::Domain("scale factor must be nonzero".into()));
        }
        let points = self
            .points
            .iter()
            .map(|p| FixedPoint {
                id: p.id.clone(),
                weights: p.weights.iter().map(|w| w * s).collect(),
                moment: p.moment.clone(),
            })
            .collect();
        Ok(Self { n: self.n, points, synthetic_moments: self.synthetic_moments })
    }
}

/// Multiset of weight values, `value -> multiplicity`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightMultiset(pub BTreeMap<i64, usize>);

impl WeightMultiset {
    pub fn from_values(values: impl IntoIterator<Item = i64>) -> Self {
        let mut m = BTreeMap::new();
        for v in values {
            *m.entry(v).or_insert(0) += 1;
        }
        Self(m)
    }

    /// `W_+`: all positive weights over all fixed points.
    pub fn positive(data: &FixedPointData) -> Self {
        Self::from_values(data.points.iter().flat_map(|p| p.weights.iter().copied()).filter(|&w| w > 0))
    }

    /// `W_-`: all negative weights over all fixed points.
    pub fn negative(data: &FixedPointData) -> Self {
        Self::from_values(data.points.iter().flat_map(|p| p.weights.iter().copied()).filter(|&w| w < 0))
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|(&v, &m)| (-v, m)).collect())
    }

    pub fn multiplicity(&self, value: i64) -> usize {
        self.0.get(&value).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

/// Even Betti numbers `b_0, b_2, ..., b_2n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn n(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `b_0 <= b_2 <= ... <= b_{2 floor(n/2)}`.
    pub fn is_unimodal(&self) -> bool {
        let half = self.n() / 2;
        self.0[..=half.min(self.0.len().saturating_sub(1))].windows(2).all(|w| w[0] <= w[1])
    }

    /// `b_2k = b_2(n-k)` for every `k`.
    pub fn is_palindromic(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }

    pub fn is_projective(&self) -> bool {
        self.0.iter().all(|&b| b == 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// `W_+ = -W_-` as multisets.
    pub hattori_ok: bool,
    pub nonzero_ok: bool,
    /// At least `n + 1` fixed points.
    pub min_count_ok: bool,
    /// Betti vector is palindromic.
    pub poincare_ok: bool,
    pub unimodal: bool,
    /// Moments (when present) put the unique index-0 point at the unique minimum
    /// and the unique index-2n point at the unique maximum.
    pub moment_consistent: bool,
    pub messages: Vec<String>,
}

impl ValidationReport {
    /// Every hard check passed. Unimodality is informational only.
    pub fn is_ok(&self) -> bool {
        self.hattori_ok && self.nonzero_ok && self.min_count_ok && self.poincare_ok && self.moment_consistent
    }

    /// Report for a document that was rejected before a dataset could be built.
    pub fn rejected(message: String) -> Self {
        Self {
            hattori_ok: false,
            nonzero_ok: false,
            min_count_ok: false,
            poincare_ok: false,
            unimodal: false,
            moment_consistent: false,
            messages: vec![message],
        }
    }
}

pub fn validate(data: &FixedPointData) -> ValidationReport {
    let mut messages = Vec::new();
    let n = data.n();

    let plus = WeightMultiset::positive(data);
    let minus = WeightMultiset::negative(data);
    let hattori_ok = plus == minus.negated();
    if !hattori_ok {
        let keys: std::collections::BTreeSet<i64> = plus.0.keys().copied().chain(minus.0.keys().map(|k| -k)).collect();
        for k in keys {
            let (p, m) = (plus.multiplicity(k), minus.multiplicity(-k));
            if p != m {
                messages
                    .push(format!("weight symmetry: {k} occurs {p} time(s) in W+ but {} occurs {m} time(s) in W-", -k));
            }
        }
    }

    let nonzero_ok = data.points().iter().all(|p| !p.weights.contains(&0));
    for p in data.points().iter().filter(|p| p.weights.contains(&0)) {
        messages.push(format!("fixed point {:?} has a zero weight", p.id));
    }

    let min_count_ok = data.len() > n;
    if !min_count_ok {
        messages.push(format!("only {} fixed points, at least n + 1 = {} required", data.len(), n + 1));
    }

    let profile = morse_profile(data);
    let poincare_ok = profile.betti.is_palindromic();
    if !poincare_ok {
        messages.push(format!("Betti vector {:?} violates Poincare duality", profile.betti.0));
    }

    let moment_consistent = check_moments(data, &profile.lambda, &mut messages);

    ValidationReport {
        hattori_ok,
        nonzero_ok,
        min_count_ok,
        poincare_ok,
        unimodal: profile.unimodal,
        moment_consistent,
        messages,
    }
}

fn check_moments(data: &FixedPointData, lambda: &[usize], messages: &mut Vec<String>) -> bool {
    let with = data.points().iter().filter(|p| p.moment.is_some()).count();
    if with == 0 {
        return true;
    }
    if with != data.len() {
        messages.push(format!("moments given for {with} of {} fixed points", data.len()));
        return false;
    }
    let n = data.n();
    let mut ok = true;
    for (target, label, want_min) in [(0, "minimum", true), (n, "maximum", false)] {
        let idx: Vec<usize> = (0..data.len()).filter(|&i| lambda[i] == target).collect();
        if idx.len() != 1 {
            messages.push(format!(
                "moment map: expected a unique fixed point with {target} negative weights, found {}",
                idx.len()
            ));
            ok = false;
            continue;
        }
        let i = idx[0];
        let mi = data.points()[i].moment.as_ref().expect("all moments present");
        let extreme = data.points().iter().enumerate().filter(|&(j, _)| j != i).all(|(_, p)| {
            let mj = p.moment.as_ref().expect("all moments present");
            if want_min {
                mi < mj
            } else {
                mi > mj
            }
        });
        if !extreme {
            messages.push(format!(
                "moment map: {:?} has {target} negative weights but is not the unique {label}",
                data.points()[i].id
            ));
            ok = false;
        }
    }
    ok
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseProfile {
    /// Number of negative weights per fixed point, in file order.
    pub lambda: Vec<usize>,
    pub betti: BettiVector,
    pub euler: usize,
    pub unimodal: bool,
}

pub fn morse_profile(data: &FixedPointData) -> MorseProfile {
    let lambda: Vec<usize> = data.points().iter().map(FixedPoint::negative_count).collect();
    let mut betti = vec![0usize; data.n() + 1];
    for &l in &lambda {
        betti[l] += 1;
    }
    let betti = BettiVector(betti);
    MorseProfile { euler: data.len(), unimodal: betti.is_unimodal(), lambda, betti }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointInvariants {
    pub lambda: usize,
    /// Sum of the weights.
    pub gamma: BigInt,
    /// Product of the negative weights.
    pub lambda_minus: BigInt,
}

pub fn point_invariants(data: &FixedPointData, i: usize) -> Result<PointInvariants> {
    let p = data.points().get(i).ok_or(Error::IndexOutOfRange { index: i, len: data.len() })?;
    Ok(PointInvariants { lambda: p.negative_count(), gamma: p.gamma(), lambda_minus: p.lambda_minus() })
}

/// Sum of `Gamma_i` over all fixed points; zero whenever `W_+ = -W_-`.
pub fn gamma_sum(data: &FixedPointData) -> BigInt {
    data.points().iter().map(FixedPoint::gamma).fold(BigInt::zero(), |a, g| a + g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::gen_standard_cpn;

    fn cp2() -> FixedPointData {
        gen_standard_cpn(&[0, 1, 3]).unwrap()
    }

    fn pt(id: &str, w: &[i64]) -> FixedPoint {
        FixedPoint::new(id, w.to_vec())
    }

    #[test]
    fn standard_cp2_passes_every_check() {
        let r = validate(&cp2());
        assert!(r.is_ok(), "{r:?}");
        assert!(r.unimodal);
        assert!(r.messages.is_empty());
    }

    #[test]
    fn asymmetric_weights_fail_hattori() {
        let d = FixedPointData::new(2, vec![pt("A", &[1, 2]), pt("B", &[-1, -3])]).unwrap();
        let r = validate(&d);
        assert!(!r.hattori_ok);
        assert!(!r.min_count_ok);
        assert!(!r.is_ok());
    }

    #[test]
    fn construction_rejects_structural_defects() {
        assert!(FixedPointData::new(2, vec![pt("A", &[1, 0])]).is_err());
        assert!(FixedPointData::new(2, vec![pt("A", &[1])]).is_err());
        assert!(FixedPointData::new(1, vec![pt("A", &[1]), pt("A", &[-1])]).is_err());
        assert!(FixedPointData::new(0, vec![]).is_err());
    }

    #[test]
    fn cp2_profile() {
        let p = morse_profile(&cp2());
        assert_eq!(p.lambda, vec![0, 1, 2]);
        assert_eq!(p.betti.0, vec![1, 1, 1]);
        assert_eq!(p.euler, 3);
        assert!(p.unimodal);
    }

    #[test]
    fn product_profile() {
        let d = crate::corpus::gen_product(&gen_standard_cpn(&[0, 1]).unwrap(), &gen_standard_cpn(&[0, 2]).unwrap())
            .unwrap();
        let p = morse_profile(&d);
        assert_eq!(p.betti.0, vec![1, 2, 1]);
        assert_eq!(p.euler, 4);
        assert!(p.unimodal);
    }

    #[test]
    fn lopsided_profile_breaks_poincare() {
        let d = FixedPointData::new(2, vec![pt("A", &[1, 2]), pt("B", &[-1, 2]), pt("C", &[-2, 1])]).unwrap();
        let p = morse_profile(&d);
        assert_eq!(p.betti.0, vec![1, 2, 0]);
        assert!(!validate(&d).poincare_ok);
    }

    #[test]
    fn cp2_point_invariants() {
        let d = cp2();
        let inv = |i| point_invariants(&d, i).unwrap();
        assert_eq!(inv(0), PointInvariants { lambda: 0, gamma: 4.into(), lambda_minus: 1.into() });
        assert_eq!(inv(1), PointInvariants { lambda: 1, gamma: 1.into(), lambda_minus: (-1).into() });
        assert_eq!(inv(2), PointInvariants { lambda: 2, gamma: (-5).into(), lambda_minus: 6.into() });
        assert!(matches!(point_invariants(&d, 3), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn unimodality() {
        assert!(BettiVector(vec![1, 2, 3, 2, 1]).is_unimodal());
        assert!(!BettiVector(vec![1, 3, 2, 3, 1]).is_unimodal());
        assert!(BettiVector(vec![1, 1]).is_unimodal());
        // only the lower half matters
        assert!(BettiVector(vec![1, 2, 1, 5]).is_unimodal());
    }

    #[test]
    fn moments_must_order_extremes() {
        let half = |p: i64, q: i64| BigRational::new(p.into(), q.into());
        let good =
            FixedPointData::new(1, vec![pt("S", &[1]).with_moment(half(0, 1)), pt("N", &[-1]).with_moment(half(1, 2))])
                .unwrap();
        assert!(validate(&good).moment_consistent);

        let flipped =
            FixedPointData::new(1, vec![pt("S", &[1]).with_moment(half(1, 1)), pt("N", &[-1]).with_moment(half(1, 2))])
                .unwrap();
        assert!(!validate(&flipped).moment_consistent);

        let partial = FixedPointData::new(1, vec![pt("S", &[1]).with_moment(half(0, 1)), pt("N", &[-1])]).unwrap();
        assert!(!validate(&partial).moment_consistent);
    }

    #[test]
    fn profile_is_permutation_invariant() {
        let d = gen_standard_cpn(&[0, 1, 2, 4]).unwrap();
        let mut pts = d.points().to_vec();
        pts.reverse();
        for p in &mut pts {
            p.weights.reverse();
        }
        let e = FixedPointData::new(3, pts).unwrap();
        assert_eq!(morse_profile(&d).betti, morse_profile(&e).betti);
        assert_eq!(gamma_sum(&e), BigInt::zero());
    }
}
