//! Reports for each command, rendered as text or JSON.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::betti_chern::{check_bounds, BoundReport};
use crate::error::Result;
use crate::exact::{fmt_rational, is_integer};
use crate::localization::{abbv_integral, ChernMonomial};
use crate::model::{morse_profile, validate, FixedPointData, ValidationReport};
use crate::rigidity::{rigidity_verdict, RigidityCertificate, Verdict};
use crate::skeleton::{analyze_skeleton, enumerate_skeletons, SkeletonAnalysis, SkeletonEdge};

pub const CANDIDATE_LABEL: &str = "admissible candidate";
pub const OUTSIDE_HYPOTHESES: &str = "outside theorem hypotheses";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub n: usize,
    pub points: usize,
    pub betti: Vec<usize>,
    pub euler: usize,
    pub unimodal: bool,
}

impl DatasetSummary {
    pub fn of(data: &FixedPointData) -> Self {
        let p = morse_profile(data);
        Self { n: data.n(), points: data.len(), euler: p.euler, unimodal: p.unimodal, betti: p.betti.0 }
    }
}

/// The mathematical result a check relies on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Citation {
    pub check: String,
    pub result: String,
}

impl Citation {
    fn new(check: &str, result: &str) -> Self {
        Self { check: check.into(), result: result.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralEntry {
    pub monomial: String,
    pub degree: usize,
    #[serde(with = "crate::exact::serde_str::rational")]
    pub value: BigRational,
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub index: usize,
    pub label: String,
    pub edges: Vec<SkeletonEdge>,
    pub analysis: Option<SkeletonAnalysis>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonSection {
    pub cap: usize,
    pub moment_filter: bool,
    pub truncated: bool,
    pub candidates: Vec<Candidate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateBounds {
    pub index: usize,
    pub report: BoundReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsSection {
    /// Candidate with the largest pseudo-index.
    pub primary: Option<usize>,
    pub candidates: Vec<CandidateBounds>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub summary: DatasetSummary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub integrals: Vec<IntegralEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skeleton: Option<SkeletonSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<BoundsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rigidity: Option<RigidityCertificate>,
    pub citations: Vec<Citation>,
    pub passed: bool,
}

fn validation_citations() -> Vec<Citation> {
    vec![
        Citation::new("hattori_ok", "Hattori: W+ = -W- for isolated fixed points"),
        Citation::new("betti", "perfect Morse function: b_2k counts fixed points with k negative weights"),
        Citation::new("min_count_ok", "at least n+1 fixed points, since b_0, ..., b_2n are nonzero"),
        Citation::new("poincare_ok", "Poincare duality b_2k = b_2(n-k)"),
    ]
}

fn skeleton_citations() -> Vec<Citation> {
    vec![
        Citation::new("edge c1", "c1 on an invariant sphere with weight w: (Gamma_source - Gamma_target) / w"),
        Citation::new(
            "c1_sum",
            "the toric 1-skeleton is Poincare dual to c_(n-1), so edge values sum to int c1 c_(n-1)",
        ),
    ]
}

impl Report {
    fn new(command: &str, data: &FixedPointData) -> Self {
        Self {
            command: command.into(),
            summary: DatasetSummary::of(data),
            validation: None,
            integrals: Vec::new(),
            skeleton: None,
            bounds: None,
            rigidity: None,
            citations: Vec::new(),
            passed: true,
        }
    }

    pub fn validation(summary: DatasetSummary, report: ValidationReport) -> Self {
        Self {
            command: "validate".into(),
            summary,
            passed: report.is_ok(),
            validation: Some(report),
            integrals: Vec::new(),
            skeleton: None,
            bounds: None,
            rigidity: None,
            citations: validation_citations(),
        }
    }

    pub fn validate(data: &FixedPointData) -> Self {
        Self::validation(DatasetSummary::of(data), validate(data))
    }

    pub fn analyze(data: &FixedPointData, monomials: &[ChernMonomial]) -> Result<Self> {
        let mut r = Self::new("analyze", data);
        for m in monomials {
            let value = abbv_integral(data, m)?;
            let integral = is_integer(&value);
            if m.degree() == data.n() && !integral {
                r.passed = false;
            }
            r.integrals.push(IntegralEntry { monomial: m.to_string(), degree: m.degree(), value, integral });
        }
        r.citations = vec![
            Citation::new("integrals", "Atiyah-Bott-Berline-Vergne localization over isolated fixed points"),
            Citation::new("degree < n", "integrals below top degree vanish"),
        ];
        Ok(r)
    }

    pub fn skeleton(data: &FixedPointData, cap: usize, moment_filter: bool) -> Self {
        let mut r = Self::new("skeleton", data);
        let section = skeleton_section(data, cap, moment_filter);
        r.passed = !section.candidates.is_empty() && section.candidates.iter().all(|c| c.error.is_none());
        r.skeleton = Some(section);
        r.citations = skeleton_citations();
        r
    }

    pub fn bounds(data: &FixedPointData, cap: usize, moment_filter: bool) -> Self {
        let mut r = Self::new("bounds", data);
        let section = skeleton_section(data, cap, moment_filter);
        let mut bounds = Vec::new();
        let mut ok = !section.candidates.is_empty();
        for c in &section.candidates {
            match c.analysis.as_ref().map(|a| check_bounds(data, a)) {
                Some(Ok(report)) => {
                    ok &= report.all_ok();
                    bounds.push(CandidateBounds { index: c.index, report });
                }
                _ => ok = false,
            }
        }
        let primary = bounds.iter().max_by(|a, b| a.report.rho.cmp(&b.report.rho).then(b.index.cmp(&a.index)));
        r.bounds = Some(BoundsSection { primary: primary.map(|b| b.index), candidates: bounds });
        r.skeleton = Some(section);
        r.passed = ok;
        r.citations = skeleton_citations();
        r.citations.extend([
            Citation::new("c_integer", "int c1 c_(n-1) depends only on the Betti numbers"),
            Citation::new(
                "c_nonneg_ok",
                "C(rho, n, b) = sum over edges of (c1 - rho) >= 0, zero iff every edge has c1 = rho",
            ),
            Citation::new("bound_2n_ok", "pseudo-index bound rho <= 2n"),
            Citation::new("bound_n_plus_1_ok", "unimodal Betti numbers force rho <= n+1"),
            Citation::new(
                "index_divisor_bound",
                "gcd of edge values: divisibility certificate for the index of c1, not the index",
            ),
        ]);
        r
    }

    pub fn rigidity(data: &FixedPointData) -> Self {
        let mut r = Self::new("rigidity", data);
        let cert = rigidity_verdict(data);
        r.passed = cert.verdict.is_pass();
        r.rigidity = Some(cert);
        r.citations = vec![
            Citation::new("skeleton", "an admissible toric 1-skeleton with pseudo-index n+1"),
            Citation::new("betti", "pseudo-index n+1 with n <= 5 or unimodal Betti numbers forces b = (1, ..., 1)"),
            Citation::new("edge values", "pseudo-index n+1 with b = (1, ..., 1) forces every edge to have c1 = n+1"),
            Citation::new("extraction", "Gamma_i = (n+1) a_i + d with a_0 > ... > a_n"),
            Citation::new("weight_match", "the weights at P_i are {a_i - a_j : j != i}"),
            Citation::new("laurent", "prod (1 - t^(a_i - a_j)) / prod (1 - t^w) is a Laurent polynomial"),
            Citation::new("generators", "Tolman generators tau_i of H*(CP^n; Z) pair to +-1"),
        ];
        r
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let s = &self.summary;
        let _ = writeln!(
            out,
            "{}: n = {}, {} fixed points, betti = {:?}, chi = {}",
            self.command, s.n, s.points, s.betti, s.euler
        );
        if let Some(v) = &self.validation {
            render_validation(&mut out, v);
        }
        for e in &self.integrals {
            let _ = writeln!(out, "  int {} = {}", e.monomial, fmt_rational(&e.value));
        }
        if let Some(sk) = &self.skeleton {
            render_skeleton(&mut out, sk);
        }
        if let Some(b) = &self.bounds {
            render_bounds(&mut out, b);
        }
        if let Some(c) = &self.rigidity {
            render_rigidity(&mut out, c);
        }
        if !self.citations.is_empty() {
            out.push_str("  references:\n");
            for c in &self.citations {
                let _ = writeln!(out, "    {}: {}", c.check, c.result);
            }
        }
        let _ = writeln!(out, "result: {}", if self.passed { "PASS" } else { "FAIL" });
        out
    }
}

fn skeleton_section(data: &FixedPointData, cap: usize, moment_filter: bool) -> SkeletonSection {
    let set = enumerate_skeletons(data, cap, moment_filter);
    let candidates = set
        .skeletons
        .into_iter()
        .enumerate()
        .map(|(index, s)| {
            let (analysis, error) = match analyze_skeleton(data, &s) {
                Ok(a) => (Some(a), None),
                Err(e) => (None, Some(e.to_string())),
            };
            Candidate { index, label: CANDIDATE_LABEL.into(), edges: s.edges, analysis, error }
        })
        .collect();
    SkeletonSection { cap, moment_filter, truncated: set.truncated, candidates }
}

fn flag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn render_validation(out: &mut String, v: &ValidationReport) {
    for (name, ok) in [
        ("hattori_ok", v.hattori_ok),
        ("nonzero_ok", v.nonzero_ok),
        ("min_count_ok", v.min_count_ok),
        ("poincare_ok", v.poincare_ok),
        ("moment_consistent", v.moment_consistent),
    ] {
        let _ = writeln!(out, "  {name}: {}", flag(ok));
    }
    let _ = writeln!(out, "  unimodal: {}", v.unimodal);
    for m in &v.messages {
        let _ = writeln!(out, "  note: {m}");
    }
}

fn render_skeleton(out: &mut String, sk: &SkeletonSection) {
    let _ = writeln!(
        out,
        "  {} {}(s) (cap {}, moment filter {}){}",
        sk.candidates.len(),
        CANDIDATE_LABEL,
        sk.cap,
        if sk.moment_filter { "on" } else { "off" },
        if sk.truncated { ", truncated" } else { "" }
    );
    for c in &sk.candidates {
        let edges: Vec<String> =
            c.edges.iter().map(|e| format!("{}->{} (w={}, c1={})", e.source, e.target, e.w, e.c1)).collect();
        let _ = writeln!(out, "  [{}] {}: {}", c.index, c.label, edges.join(", "));
        if let Some(a) = &c.analysis {
            let _ = writeln!(
                out,
                "      rho = {}, c1_sum = {}, gcd = {}, all equal rho: {}",
                a.rho, a.c1_sum, a.c1_gcd, a.all_equal_rho
            );
        }
        if let Some(e) = &c.error {
            let _ = writeln!(out, "      error: {e}");
        }
    }
}

fn render_bounds(out: &mut String, b: &BoundsSection) {
    let Some(primary) = b.primary else {
        out.push_str("  bounds: no analysable candidate\n");
        return;
    };
    for cb in &b.candidates {
        let r = &cb.report;
        let mark = if cb.index == primary { " (primary)" } else { "" };
        let _ = writeln!(out, "  bounds for [{}]{}: rho = {}", cb.index, mark, r.rho);
        let _ = writeln!(out, "      bound_2n_ok: {}", flag(r.bound_2n_ok));
        let _ = writeln!(
            out,
            "      bound_n_plus_1_ok: {}{}",
            flag(r.bound_n_plus_1_ok),
            if r.unimodal_applicable { "" } else { " (not applicable)" }
        );
        let _ = writeln!(out, "      c_nonneg_ok: {}", flag(r.c_nonneg_ok));
        let _ = writeln!(out, "      c_zero_iff_all_equal_ok: {}", flag(r.c_zero_iff_all_equal_ok));
        let c = &r.c_integer;
        let _ = writeln!(
            out,
            "      C = {}, A = [{}], M = {}, lambda index = {}",
            c.value,
            join(&c.coeffs_a),
            c.m_value,
            c.lambda_index.map_or("none".to_string(), |l| l.to_string())
        );
        let _ = writeln!(out, "      index divisibility certificate (gcd of edge values): {}", r.index_divisor_bound);
    }
}

fn render_rigidity(out: &mut String, c: &RigidityCertificate) {
    if !c.within_hypotheses {
        let _ = writeln!(out, "  note: {OUTSIDE_HYPOTHESES} (n > 5 and Betti numbers not unimodal)");
    }
    if let (Some(i), Some(rho)) = (c.skeleton_index, &c.rho) {
        let _ = writeln!(out, "  skeleton: {CANDIDATE_LABEL} [{i}] with rho = {rho}");
    }
    if let Some(v) = &c.c_value {
        let _ = writeln!(out, "  C(n+1, n, b) = {v}");
    }
    if !c.order.is_empty() {
        let _ = writeln!(out, "  order by index: {}", c.order.join(", "));
        let _ = writeln!(out, "  a = [{}], d = {}", join(&c.a), c.d.as_ref().map_or(String::new(), BigInt::to_string));
    }
    if !c.weight_match.is_empty() {
        let _ = writeln!(out, "  weight match: {:?}", c.weight_match);
        let _ = writeln!(out, "  laurent: {:?}", c.laurent_ok);
    }
    if !c.tolman_coeffs.is_empty() {
        let coeffs: Vec<String> = c.tolman_coeffs.iter().map(fmt_rational).collect();
        let _ = writeln!(out, "  generator coefficients: [{}]", coeffs.join(", "));
        if let Some(t) = &c.tau1_power {
            let _ = writeln!(out, "  int tau_1^n = {}", fmt_rational(t));
        }
        let _ = writeln!(out, "  generator check: {}", flag(c.generator_check_ok));
    }
    let _ = match &c.verdict {
        Verdict::Pass => writeln!(out, "  verdict: PASS"),
        Verdict::Fail { stage, reason } => writeln!(out, "  verdict: FAIL at {stage}: {reason}"),
    };
}

fn join(v: &[BigInt]) -> String {
    v.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", ")
}
