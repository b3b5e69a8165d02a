//! Dataset generators: standard `CP^n` actions, products, and controlled
//! mutations for negative tests.

use std::fmt;
use std::num::NonZeroI64;
use std::str::FromStr;

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FixedPoint, FixedPointData};

/// Fixed-point data of `[z_0 : ... : z_n] -> [t^{m_0} z_0 : ... : t^{m_n} z_n]`.
///
/// Point `P_j` carries the weights `{m_i - m_j : i != j}`, listed in index order.
pub fn gen_standard_cpn(m: &[i64]) -> Result<FixedPointData> {
    if m.len() < 2 {
        return Err(Error::Domain(format!("need at least two entries (n >= 1), got {}", m.len())));
    }
    for (i, a) in m.iter().enumerate() {
        if m[..i].contains(a) {
            return Err(Error::DegenerateAction(*a));
        }
    }
    let points = (0..m.len())
        .map(|j| {
            let weights = (0..m.len()).filter(|&i| i != j).map(|i| m[i] - m[j]).collect();
            FixedPoint::new(format!("P{j}"), weights)
        })
        .collect();
    FixedPointData::new(m.len() - 1, points)
}

/// [`gen_standard_cpn`] with synthetic moment values `psi(P_j) = m_j`.
///
/// The point with the smallest `m_j` has only positive weights and sits at the
/// minimum, as it must.
pub fn gen_standard_cpn_with_moments(m: &[i64]) -> Result<FixedPointData> {
    let data = gen_standard_cpn(m)?;
    let n = data.n();
    let points = data
        .points()
        .iter()
        .zip(m)
        .map(|(p, &mj)| p.clone().with_moment(BigRational::from_integer(mj.into())))
        .collect();
    Ok(FixedPointData::new(n, points)?.with_synthetic_moments(true))
}

/// Diagonal circle action on a product: fixed points are pairs, weights
/// concatenate, moments add when both factors carry them.
pub fn gen_product(d1: &FixedPointData, d2: &FixedPointData) -> Result<FixedPointData> {
    let moments = d1.points().iter().chain(d2.points()).all(|p| p.moment.is_some());
    let mut points = Vec::with_capacity(d1.len() * d2.len());
    for p in d1.points() {
        for q in d2.points() {
            let mut weights = p.weights.clone();
            weights.extend_from_slice(&q.weights);
            let mut fp = FixedPoint::new(format!("{}x{}", p.id, q.id), weights);
            if moments {
                fp.moment = Some(p.moment.clone().unwrap() + q.moment.clone().unwrap());
            }
            points.push(fp);
        }
    }
    Ok(FixedPointData::new(d1.n() + d2.n(), points)?
        .with_synthetic_moments(moments && (d1.synthetic_moments() || d2.synthetic_moments())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutationKind {
    /// Negate one weight.
    FlipWeightSign,
    /// Add `delta` to one weight (twice if a single step would hit zero).
    PerturbWeight(NonZeroI64),
    /// Exchange two distinct weights of the same sign between two fixed points.
    /// `W_+` and `W_-` are unchanged.
    SwapWeightsBetweenPoints,
    /// Remove one fixed point.
    DropFixedPoint,
}

impl MutationKind {
    pub const NAMES: [&'static str; 4] = ["flip-weight-sign", "perturb-weight", "swap-weights", "drop-fixed-point"];

    pub fn name(&self) -> &'static str {
        match self {
            Self::FlipWeightSign => Self::NAMES[0],
            Self::PerturbWeight(_) => Self::NAMES[1],
            Self::SwapWeightsBetweenPoints => Self::NAMES[2],
            Self::DropFixedPoint => Self::NAMES[3],
        }
    }

    /// Parses a kind name; `delta` only matters for `perturb-weight`.
    pub fn parse(name: &str, delta: NonZeroI64) -> Result<Self> {
        match name {
            "flip-weight-sign" => Ok(Self::FlipWeightSign),
            "perturb-weight" => Ok(Self::PerturbWeight(delta)),
            "swap-weights" => Ok(Self::SwapWeightsBetweenPoints),
            "drop-fixed-point" => Ok(Self::DropFixedPoint),
            other => Err(Error::Domain(format!("unknown mutation kind {other:?}, expected one of {:?}", Self::NAMES))),
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PerturbWeight(d) => write!(f, "perturb-weight({d})"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for MutationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, NonZeroI64::new(1).unwrap())
    }
}

/// Deterministic mutation of `data` driven by `seed`. The output is allowed to
/// be invalid; that is its purpose.
pub fn mutate(data: &FixedPointData, kind: MutationKind, seed: u64) -> FixedPointData {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = data.points().to_vec();
    if points.is_empty() {
        return data.clone();
    }
    match kind {
        MutationKind::FlipWeightSign => {
            let i = rng.gen_range(0..points.len());
            let k = rng.gen_range(0..data.n());
            points[i].weights[k] = -points[i].weights[k];
        }
        MutationKind::PerturbWeight(delta) => {
            let i = rng.gen_range(0..points.len());
            let k = rng.gen_range(0..data.n());
            let w = &mut points[i].weights[k];
            *w += delta.get();
            if *w == 0 {
                *w += delta.get();
            }
        }
        MutationKind::SwapWeightsBetweenPoints => {
            let mut same_sign = Vec::new();
            let mut any = Vec::new();
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    for (a, &wa) in points[i].weights.iter().enumerate() {
                        for (b, &wb) in points[j].weights.iter().enumerate() {
                            if wa == wb {
                                continue;
                            }
                            any.push((i, a, j, b));
                            if (wa > 0) == (wb > 0) {
                                same_sign.push((i, a, j, b));
                            }
                        }
                    }
                }
            }
            let pool = if same_sign.is_empty() { &any } else { &same_sign };
            if let Some(&(i, a, j, b)) = pool.choose(&mut rng) {
                let wa = points[i].weights[a];
                points[i].weights[a] = points[j].weights[b];
                points[j].weights[b] = wa;
            }
        }
        MutationKind::DropFixedPoint => {
            let i = rng.gen_range(0..points.len());
            points.remove(i);
        }
    }
    FixedPointData::new(data.n(), points)
        .expect("mutations keep weights nonzero and ids unique")
        .with_synthetic_moments(data.synthetic_moments())
}
