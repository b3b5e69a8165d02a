//! Admissible toric 1-skeletons.
//!
//! A candidate skeleton is a bijection `W_+ -> W_-` with `f(w) = -w`, drawn as
//! oriented edges from the point carrying `+w` to the point carrying `-w`.
//! Only necessary conditions are checkable from fixed-point data: distinct
//! endpoints, `w | Gamma_source - Gamma_target`, and optionally increasing
//! moment along the edge. Every result is an admissible candidate; whether the
//! invariant spheres exist is geometric input this crate cannot decide.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::gcd_all;
use crate::localization::chern_number_c1cn1;
use crate::model::FixedPointData;

/// Edges of one weight value as `(source, target, c1)`.
type Pairing = Vec<(usize, usize, BigInt)>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonEdge {
    /// Id of the point carrying `+w`.
    pub source: String,
    /// Id of the point carrying `-w`.
    pub target: String,
    pub source_index: usize,
    pub target_index: usize,
    pub w: i64,
    /// `(Gamma_source - Gamma_target) / w`.
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub c1: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricSkeleton {
    pub edges: Vec<SkeletonEdge>,
}

impl ToricSkeleton {
    pub fn rho(&self) -> Option<&BigInt> {
        self.edges.iter().map(|e| &e.c1).min()
    }
}

/// Enumeration result. `truncated` is set when the cap cut the list short.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonSet {
    pub skeletons: Vec<ToricSkeleton>,
    pub truncated: bool,
}

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Maximum number of skeletons returned.
    pub cap: usize,
    /// Require `moment(target) > moment(source)` when moments are present.
    pub moment_filter: bool,
    /// Only admit edges with `c1 >= bound`.
    pub min_edge_c1: Option<BigInt>,
}

impl EnumerationOptions {
    pub fn new(cap: usize) -> Self {
        Self { cap, moment_filter: false, min_edge_c1: None }
    }
}

/// All admissible skeletons in canonical order, up to `cap`.
///
/// Ordering: weight values ascending, positive occurrences in file order, and
/// per value the matchings in lexicographic order of their targets; the first
/// weight value varies slowest. Matchings that differ only by permuting equal
/// weights at the same point are reported once.
pub fn enumerate_skeletons(data: &FixedPointData, cap: usize, use_moment_filter: bool) -> SkeletonSet {
    enumerate_with(data, &EnumerationOptions { cap, moment_filter: use_moment_filter, min_edge_c1: None })
}

pub fn enumerate_with(data: &FixedPointData, opts: &EnumerationOptions) -> SkeletonSet {
    if opts.cap == 0 {
        return SkeletonSet { skeletons: Vec::new(), truncated: true };
    }
    let gammas = data.gammas();
    let moments_on = opts.moment_filter && data.points().iter().all(|p| p.moment.is_some());

    // value -> (points carrying +value, points carrying -value), one entry per occurrence
    let mut occ: BTreeMap<i64, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for (i, p) in data.points().iter().enumerate() {
        for &w in &p.weights {
            let slot = occ.entry(w.abs()).or_default();
            if w > 0 {
                slot.0.push(i);
            } else {
                slot.1.push(i);
            }
        }
    }
    if occ.values().any(|(pos, neg)| pos.len() != neg.len()) {
        return SkeletonSet::default();
    }

    let admissible = |w: i64, s: usize, t: usize| -> Option<BigInt> {
        if s == t {
            return None;
        }
        let (c1, r) = (&gammas[s] - &gammas[t]).div_rem(&BigInt::from(w));
        if !r.is_zero() {
            return None;
        }
        if moments_on {
            let (ms, mt) = (data.points()[s].moment.as_ref()?, data.points()[t].moment.as_ref()?);
            if mt <= ms {
                return None;
            }
        }
        if let Some(bound) = &opts.min_edge_c1 {
            if &c1 < bound {
                return None;
            }
        }
        Some(c1)
    };

    let mut truncated = false;
    let mut per_value: Vec<(i64, Vec<Pairing>)> = Vec::with_capacity(occ.len());
    for (&w, (pos, neg)) in &occ {
        let mut found = Vec::new();
        let mut used = vec![false; neg.len()];
        let mut current = Vec::with_capacity(pos.len());
        let complete = match_value(w, pos, neg, &admissible, opts.cap, &mut used, &mut current, &mut found);
        truncated |= !complete;
        if found.is_empty() {
            return SkeletonSet { skeletons: Vec::new(), truncated };
        }
        per_value.push((w, found));
    }

    // odometer over the per-value matchings, last value fastest
    let mut skeletons = Vec::new();
    let mut idx = vec![0usize; per_value.len()];
    loop {
        if skeletons.len() == opts.cap {
            truncated = true;
            break;
        }
        let mut edges = Vec::new();
        for (slot, (w, matchings)) in idx.iter().zip(&per_value) {
            for (s, t, c1) in &matchings[*slot] {
                edges.push(SkeletonEdge {
                    source: data.points()[*s].id.clone(),
                    target: data.points()[*t].id.clone(),
                    source_index: *s,
                    target_index: *t,
                    w: *w,
                    c1: c1.clone(),
                });
            }
        }
        skeletons.push(ToricSkeleton { edges });

        let mut k = per_value.len();
        loop {
            if k == 0 {
                return SkeletonSet { skeletons, truncated };
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < per_value[k].1.len() {
                break;
            }
            idx[k] = 0;
        }
    }
    SkeletonSet { skeletons, truncated }
}

/// Backtracking over perfect matchings of the `+w` occurrences onto the `-w`
/// occurrences. Returns `false` if the search stopped at `cap`.
#[allow(clippy::too_many_arguments)]
fn match_value(
    w: i64,
    pos: &[usize],
    neg: &[usize],
    admissible: &impl Fn(i64, usize, usize) -> Option<BigInt>,
    cap: usize,
    used: &mut [bool],
    current: &mut Pairing,
    found: &mut Vec<Pairing>,
) -> bool {
    let i = current.len();
    if i == pos.len() {
        if found.len() == cap {
            return false;
        }
        found.push(current.clone());
        return true;
    }
    let s = pos[i];
    // equal weights at one point are interchangeable: keep targets non-decreasing
    let floor = match current.last() {
        Some(&(prev_s, prev_t, _)) if prev_s == s => prev_t,
        _ => 0,
    };
    for j in 0..neg.len() {
        let t = neg[j];
        if used[j] || t < floor {
            continue;
        }
        // only the first unused occurrence at each target point
        if (0..j).any(|k| !used[k] && neg[k] == t) {
            continue;
        }
        let Some(c1) = admissible(w, s, t) else { continue };
        used[j] = true;
        current.push((s, t, c1));
        let complete = match_value(w, pos, neg, admissible, cap, used, current, found);
        current.pop();
        used[j] = false;
        if !complete {
            return false;
        }
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonAnalysis {
    /// Equivariant pseudo-index: the minimum edge `c1`.
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub rho: BigInt,
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub c1_sum: BigInt,
    /// gcd of all edge values; every divisor of `c_1` divides it.
    #[serde(with = "crate::exact::serde_str::bigint")]
    pub c1_gcd: BigInt,
    pub all_equal_rho: bool,
    pub edge_count: usize,
}

/// Pseudo-index, total and gcd of the edge Chern values.
///
/// The total must equal `int c_1 c_{n-1}` computed by localization, since the
/// skeleton is Poincare dual to `c_{n-1}`. A mismatch means the weights cannot
/// come from a genuine space.
pub fn analyze_skeleton(data: &FixedPointData, s: &ToricSkeleton) -> Result<SkeletonAnalysis> {
    let gammas = data.gammas();
    for e in &s.edges {
        let (s_i, t_i) = (e.source_index, e.target_index);
        if s_i >= data.len() || t_i >= data.len() || s_i == t_i || e.w <= 0 {
            return Err(Error::Domain(format!("edge {} -> {} is not a valid skeleton edge", e.source, e.target)));
        }
        let (c1, r) = (&gammas[s_i] - &gammas[t_i]).div_rem(&BigInt::from(e.w));
        if !r.is_zero() || c1 != e.c1 {
            return Err(Error::Internal(format!(
                "edge {} -> {} records c1 = {} but the data give ({} - {}) / {}",
                e.source, e.target, e.c1, gammas[s_i], gammas[t_i], e.w
            )));
        }
    }
    let rho = s.rho().cloned().ok_or_else(|| Error::Domain("skeleton has no edges".into()))?;
    let c1_sum: BigInt = s.edges.iter().map(|e| &e.c1).sum();
    let expected = chern_number_c1cn1(data)?;
    if c1_sum != expected {
        return Err(Error::InvalidDataset(format!(
            "edge Chern values sum to {c1_sum} but the localization integral of c1*c_(n-1) is {expected}"
        )));
    }
    Ok(SkeletonAnalysis {
        all_equal_rho: s.edges.iter().all(|e| e.c1 == rho),
        c1_gcd: gcd_all(s.edges.iter().map(|e| &e.c1)),
        edge_count: s.edges.len(),
        rho,
        c1_sum,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{gen_product, gen_standard_cpn, gen_standard_cpn_with_moments};
    use crate::model::{FixedPoint, FixedPointData};

    fn cp1xcp1() -> FixedPointData {
        gen_product(&gen_standard_cpn(&[0, 1]).unwrap(), &gen_standard_cpn(&[0, 2]).unwrap()).unwrap()
    }

    fn c1s(s: &ToricSkeleton) -> Vec<i64> {
        s.edges.iter().map(|e| i64::try_from(&e.c1).unwrap()).collect()
    }

    #[test]
    fn cp2_has_one_skeleton() {
        let d = gen_standard_cpn(&[0, 1, 3]).unwrap();
        let set = enumerate_skeletons(&d, 100, false);
        assert!(!set.truncated);
        assert_eq!(set.skeletons.len(), 1);
        let s = &set.skeletons[0];
        assert_eq!(s.edges.len(), 3);
        let a = analyze_skeleton(&d, s).unwrap();
        assert_eq!(a.rho, 3.into());
        assert_eq!(a.c1_sum, 9.into());
        assert_eq!(a.c1_gcd, 3.into());
        assert!(a.all_equal_rho);
    }

    #[test]
    fn product_candidates() {
        let d = cp1xcp1();
        let set = enumerate_skeletons(&d, 100, false);
        assert_eq!(set.skeletons.len(), 4);
        // value 1 then value 2; the first candidate is the product matching
        assert_eq!(c1s(&set.skeletons[0]), vec![2, 2, 2, 2]);
        assert_eq!(c1s(&set.skeletons[1]), vec![2, 2, 3, 1]);
        assert_eq!(c1s(&set.skeletons[2]), vec![6, -2, 2, 2]);
        assert_eq!(c1s(&set.skeletons[3]), vec![6, -2, 3, 1]);

        let product = analyze_skeleton(&d, &set.skeletons[0]).unwrap();
        assert_eq!((product.rho.clone(), product.c1_sum.clone()), (2.into(), 8.into()));
        assert!(product.all_equal_rho);

        let crossed = analyze_skeleton(&d, &set.skeletons[2]).unwrap();
        assert_eq!((crossed.rho.clone(), crossed.c1_sum.clone()), ((-2).into(), 8.into()));
        assert!(!crossed.all_equal_rho);
    }

    #[test]
    fn moment_filter_keeps_only_increasing_edges() {
        let d = gen_product(
            &gen_standard_cpn_with_moments(&[0, 1]).unwrap(),
            &gen_standard_cpn_with_moments(&[0, 2]).unwrap(),
        )
        .unwrap();
        let set = enumerate_skeletons(&d, 100, true);
        for s in &set.skeletons {
            for e in &s.edges {
                assert!(d.points()[e.target_index].moment > d.points()[e.source_index].moment);
            }
        }
        assert_eq!(set.skeletons.len(), 2);
        assert_eq!(enumerate_skeletons(&d, 100, false).skeletons.len(), 4);
    }

    #[test]
    fn sign_flip_leaves_nothing_to_match() {
        let d = gen_standard_cpn(&[0, 1, 3]).unwrap();
        let mut pts = d.points().to_vec();
        pts[0].weights[0] = -pts[0].weights[0];
        let d = FixedPointData::new(2, pts).unwrap();
        assert!(enumerate_skeletons(&d, 100, false).skeletons.is_empty());
    }

    #[test]
    fn cap_truncates() {
        let d = cp1xcp1();
        let set = enumerate_skeletons(&d, 3, false);
        assert_eq!(set.skeletons.len(), 3);
        assert!(set.truncated);
        let exact = enumerate_skeletons(&d, 4, false);
        assert!(!exact.truncated);
    }

    #[test]
    fn repeated_weights_at_a_point_are_not_double_counted() {
        // A carries 1 twice, B carries -1 twice: one distinct skeleton
        let d =
            FixedPointData::new(2, vec![FixedPoint::new("A", vec![1, 1]), FixedPoint::new("B", vec![-1, -1])]).unwrap();
        let set = enumerate_skeletons(&d, 100, false);
        assert_eq!(set.skeletons.len(), 1);
        assert_eq!(c1s(&set.skeletons[0]), vec![4, 4]);
    }

    #[test]
    fn min_c1_filter() {
        let d = cp1xcp1();
        let mut opts = EnumerationOptions::new(100);
        opts.min_edge_c1 = Some(2.into());
        let set = enumerate_with(&d, &opts);
        assert_eq!(set.skeletons.len(), 1);
        assert_eq!(c1s(&set.skeletons[0]), vec![2, 2, 2, 2]);
    }

    #[test]
    fn tampered_edge_is_caught() {
        let d = gen_standard_cpn(&[0, 1, 3]).unwrap();
        let mut s = enumerate_skeletons(&d, 1, false).skeletons.remove(0);
        s.edges[0].c1 += 1;
        assert!(matches!(analyze_skeleton(&d, &s), Err(Error::Internal(_))));
    }
}
