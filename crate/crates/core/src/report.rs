//! The end-to-end classification report for a design with a group and an
//! invariant partition.
//!
//! Stages run in dependency order. A stage whose inputs failed or are
//! missing is recorded as not evaluated, with the reason. The conclusion
//! only ever matches parameters and verified structure; it never asserts
//! isomorphism with a known design.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::action::{self, ActionError, BlockSystem};
use crate::catalog::{match_catalog, CatalogMatch};
use crate::design::{self, DesignError, DesignParams, IncidenceStructure};
use crate::format::{read_design_file, DesignFile, FormatError};
use crate::group::{GroupError, PermutationGroup};
use crate::params::{self, Family};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("generator {generator} is not an automorphism: it maps block {block} to a non-block")]
    NotAutomorphism { generator: usize, block: usize },
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotEvaluated,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotEvaluated => "not-evaluated",
        })
    }
}

/// One stage: a stable key, the verdict, and its witness or reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub key: String,
    pub verdict: Verdict,
    pub detail: String,
}

/// The block-size gate `k > λ(λ−3)/2` with its arithmetic, and the
/// `λ ≥ 3` condition for `k₀ ≥ 3` to be possible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateRecord {
    pub k: usize,
    pub lambda: usize,
    pub threshold: i64,
    pub block_size_gate: bool,
    pub arithmetic: String,
    pub lambda_at_least_3: bool,
    pub note: Option<String>,
}

pub fn hypothesis_gate(params: &DesignParams) -> GateRecord {
    let (k, lambda) = (params.k, params.lambda);
    let l = lambda as i64;
    let threshold = l * (l - 3) / 2;
    let block_size_gate = (k as i64) > threshold;
    let factor = if l >= 3 { format!("{}", l - 3) } else { format!("({})", l - 3) };
    let arithmetic = format!(
        "{k} {} {l}·{factor}/2 = {threshold}",
        if block_size_gate { ">" } else { "<=" }
    );
    let note = match lambda {
        0 | 1 => Some("lambda < 2: no block meets a class in 3 or more points (outside the k0 >= 3 scope)".to_string()),
        2 => Some("lambda = 2 forces k0 = 2 (outside the k0 >= 3 scope)".to_string()),
        _ => None,
    };
    GateRecord { k, lambda, threshold, block_size_gate, arithmetic, lambda_at_least_3: lambda >= 3, note }
}

/// Parameters of the induced design on one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedSummary {
    pub class: usize,
    pub params: DesignParams,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Conclusion {
    /// All hypotheses hold and the parameters are one of the two surviving
    /// cases.
    Matches { v: usize, k: usize, lambda: usize, c: usize, d: usize },
    /// All hypotheses hold but the parameters are not one of the surviving
    /// cases; no such design exists, so the input is suspect.
    ContradictsClassification { v: usize, k: usize, lambda: usize },
    OutsideHypotheses { failed: Vec<String> },
    Undetermined { missing: Vec<String> },
}

impl fmt::Display for Conclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conclusion::Matches { v, k, lambda, c, d } => write!(
                f,
                "matches the 2-({v},{k},{lambda}) case with {d} classes of size {c} \
                 (parameters and verified structure only; isomorphism is not tested)"
            ),
            Conclusion::ContradictsClassification { v, k, lambda } => write!(
                f,
                "2-({v},{k},{lambda}) satisfies every hypothesis but is excluded by the classification; \
                 input contradicts the classification, re-verify input"
            ),
            Conclusion::OutsideHypotheses { failed } => {
                write!(f, "outside the classification hypotheses (failed: {})", failed.join(", "))
            }
            Conclusion::Undetermined { missing } => {
                write!(f, "undetermined (not evaluated: {})", missing.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub v: usize,
    pub b: usize,
    pub params: Option<DesignParams>,
    pub group_order: Option<BigUint>,
    pub num_classes: Option<usize>,
    pub class_size: Option<usize>,
    pub k0: Option<usize>,
    pub theta: Option<usize>,
    /// Histogram of `|Σ(B)|` over blocks: classes met → number of blocks.
    pub classes_met: BTreeMap<usize, usize>,
    pub gate: Option<GateRecord>,
    pub induced: Vec<InducedSummary>,
    pub catalog: Vec<CatalogMatch>,
    pub families: Vec<Family>,
    pub checks: Vec<Check>,
    pub conclusion: Conclusion,
}

/// Keys of the checks that form the hypotheses of the classification.
pub const HYPOTHESIS_KEYS: &[&str] = &[
    "two_design",
    "symmetric",
    "flag_transitive",
    "partition_invariant",
    "partition_nontrivial",
    "trace_constant",
    "overlap_constant",
    "gate_block_size",
    "gate_trace_at_least_3",
];

impl ClassificationReport {
    pub fn check(&self, key: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.key == key)
    }

    pub fn verdict(&self, key: &str) -> Verdict {
        self.check(key).map_or(Verdict::NotEvaluated, |c| c.verdict)
    }

    /// Human-readable summary followed by a `key = value` section.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        writeln!(w, "classification report").unwrap();
        match &self.params {
            Some(p) => writeln!(w, "  design: {p}, b = {}, r = {}", p.b, p.r).unwrap(),
            None => writeln!(w, "  design: v = {}, b = {} (not a 2-design)", self.v, self.b).unwrap(),
        }
        if let Some(o) = &self.group_order {
            writeln!(w, "  group order: {o}").unwrap();
        }
        if let (Some(d), Some(c)) = (self.num_classes, self.class_size) {
            writeln!(w, "  partition: {d} classes of size {c}").unwrap();
        }
        for c in &self.checks {
            writeln!(w, "  [{}] {}: {}", c.verdict, c.key, c.detail).unwrap();
        }
        for m in &self.catalog {
            writeln!(w, "  catalog {}: {} ({}; group: {})", m.label, m.pattern, m.fit, m.group).unwrap();
        }
        writeln!(w, "  conclusion: {}", self.conclusion).unwrap();
        writeln!(w).unwrap();
        writeln!(w, "[machine]").unwrap();
        for (k, v) in self.machine_lines() {
            writeln!(w, "{k} = {v}").unwrap();
        }
        out
    }

    fn machine_lines(&self) -> Vec<(String, String)> {
        fn opt<T: ToString>(x: &Option<T>) -> String {
            x.as_ref().map_or_else(|| "none".to_string(), T::to_string)
        }
        let mut lines = vec![
            ("v".to_string(), self.v.to_string()),
            ("b".to_string(), self.b.to_string()),
            ("k".to_string(), opt(&self.params.map(|p| p.k))),
            ("lambda".to_string(), opt(&self.params.map(|p| p.lambda))),
            ("group_order".to_string(), opt(&self.group_order)),
            ("num_classes".to_string(), opt(&self.num_classes)),
            ("class_size".to_string(), opt(&self.class_size)),
            ("k0".to_string(), opt(&self.k0)),
            ("theta".to_string(), opt(&self.theta)),
        ];
        let hist: Vec<String> = self.classes_met.iter().map(|(s, n)| format!("{s}:{n}")).collect();
        lines.push(("classes_met".to_string(), if hist.is_empty() { "none".into() } else { hist.join(",") }));
        let mut induced: Vec<String> = self.induced.iter().map(|i| i.params.to_string()).collect();
        induced.dedup();
        lines.push(("induced".to_string(), if induced.is_empty() { "none".into() } else { induced.join(",") }));
        let labels: Vec<&str> = self.catalog.iter().map(|m| m.label.as_str()).collect();
        lines.push(("catalog".to_string(), if labels.is_empty() { "none".into() } else { labels.join(",") }));
        let fams: Vec<String> = self.families.iter().map(Family::to_string).collect();
        lines.push(("families".to_string(), if fams.is_empty() { "none".into() } else { fams.join(",") }));
        for c in &self.checks {
            lines.push((format!("check.{}", c.key), c.verdict.to_string()));
        }
        let kind = match &self.conclusion {
            Conclusion::Matches { v, k, lambda, .. } => format!("matches-{v}-{k}-{lambda}"),
            Conclusion::ContradictsClassification { .. } => "contradicts-classification".into(),
            Conclusion::OutsideHypotheses { .. } => "outside-hypotheses".into(),
            Conclusion::Undetermined { .. } => "undetermined".into(),
        };
        lines.push(("conclusion".to_string(), kind));
        lines
    }
}

struct Stages {
    checks: Vec<Check>,
}

impl Stages {
    fn push(&mut self, key: &str, verdict: Verdict, detail: impl Into<String>) -> Verdict {
        self.checks.push(Check { key: key.to_string(), verdict, detail: detail.into() });
        verdict
    }

    fn pass(&mut self, key: &str, detail: impl Into<String>) -> Verdict {
        self.push(key, Verdict::Pass, detail)
    }

    fn fail(&mut self, key: &str, detail: impl Into<String>) -> Verdict {
        self.push(key, Verdict::Fail, detail)
    }

    fn skip(&mut self, key: &str, reason: impl Into<String>) -> Verdict {
        self.push(key, Verdict::NotEvaluated, reason)
    }

    fn verdict(&self, key: &str) -> Verdict {
        self.checks.iter().find(|c| c.key == key).map_or(Verdict::NotEvaluated, |c| c.verdict)
    }

    /// `None` when every listed stage passed, else the reason to skip.
    fn blocked(&self, deps: &[&str]) -> Option<String> {
        let bad: Vec<String> = deps
            .iter()
            .filter(|k| self.verdict(k) != Verdict::Pass)
            .map(|k| format!("{k} {}", self.verdict(k)))
            .collect();
        (!bad.is_empty()).then(|| format!("depends on {}", bad.join(", ")))
    }
}

/// Reads a design file and runs [`full_report`].
pub fn full_report_path(path: &Path) -> Result<ClassificationReport, ReportError> {
    full_report(&read_design_file(path, true)?)
}

/// Runs every stage on a parsed design file.
pub fn full_report(file: &DesignFile) -> Result<ClassificationReport, ReportError> {
    let d: &IncidenceStructure = &file.design;
    let group: Option<PermutationGroup> = file.group.as_ref().map(|g| g.build()).transpose()?;
    let sigma: Option<&BlockSystem> = file.partition.as_ref();
    if let Some(g) = &group {
        if !d.is_multiset() {
            match design::block_action(d, g) {
                Err(DesignError::NotAutomorphism { generator, block }) => {
                    return Err(ReportError::NotAutomorphism { generator, block })
                }
                Err(e) => return Err(e.into()),
                Ok(_) => {}
            }
        }
    }

    let mut s = Stages { checks: Vec::new() };
    let mut r = ClassificationReport {
        v: d.v(),
        b: d.b(),
        params: None,
        group_order: group.as_ref().map(PermutationGroup::order),
        num_classes: sigma.map(BlockSystem::num_classes),
        class_size: sigma.map(BlockSystem::class_size),
        k0: None,
        theta: None,
        classes_met: BTreeMap::new(),
        gate: None,
        induced: Vec::new(),
        catalog: Vec::new(),
        families: Vec::new(),
        checks: Vec::new(),
        conclusion: Conclusion::Undetermined { missing: Vec::new() },
    };
    let no_group = "no group in input";
    let no_partition = "no partition in input";

    match design::is_2design(d) {
        Ok(p) => {
            r.params = Some(p);
            s.pass("two_design", format!("{p}, b = {}, r = {}", p.b, p.r))
        }
        Err(f) => s.fail("two_design", f.to_string()),
    };

    if let Some(reason) = s.blocked(&["two_design"]) {
        s.skip("symmetric", reason);
    } else if d.is_multiset() {
        s.fail("symmetric", "repeated blocks; multiset structures are never treated as symmetric");
    } else if d.b() == d.v() {
        s.pass("symmetric", format!("b = v = {}", d.v()));
    } else {
        s.fail("symmetric", format!("b = {} differs from v = {}", d.b(), d.v()));
    }

    match &group {
        None => s.skip("flag_transitive", no_group),
        Some(_) if d.is_multiset() => s.skip("flag_transitive", "repeated blocks; flags need distinct blocks"),
        Some(g) => {
            let fo = design::flag_orbit(d, g)?;
            let detail = format!("flag orbit {} of {}", fo.orbit_size, fo.flags);
            if fo.transitive {
                s.pass("flag_transitive", detail)
            } else {
                s.fail("flag_transitive", detail)
            }
        }
    };

    match (&group, sigma) {
        (_, None) => s.skip("partition_invariant", no_partition),
        (None, _) => s.skip("partition_invariant", no_group),
        (Some(g), Some(sig)) => match sig.check_invariant(g) {
            Ok(()) => s.pass("partition_invariant", "every generator permutes the classes"),
            Err(e @ ActionError::NotInvariant { .. }) => s.fail("partition_invariant", e.to_string()),
            Err(e) => return Err(e.into()),
        },
    };

    match sigma {
        None => s.skip("partition_nontrivial", no_partition),
        Some(sig) => {
            let detail = format!("{} classes of size {}", sig.num_classes(), sig.class_size());
            if sig.is_nontrivial() {
                s.pass("partition_nontrivial", detail)
            } else {
                s.fail("partition_nontrivial", detail)
            }
        }
    };

    match sigma {
        None => s.skip("trace_constant", no_partition),
        Some(sig) => match design::trace_profile(d, sig)? {
            Ok(t) => {
                r.k0 = Some(t.k0);
                for &m in &t.classes_met {
                    *r.classes_met.entry(m).or_default() += 1;
                }
                s.pass("trace_constant", format!("every nonempty trace has size k0 = {}", t.k0))
            }
            Err(f) => s.fail("trace_constant", f.to_string()),
        },
    };

    if let Some(reason) = s.blocked(&["trace_constant"]) {
        s.skip("overlap_constant", reason);
    } else {
        match design::overlap_number(d, sigma.expect("trace passed"))? {
            Ok(o) => {
                r.theta = Some(o.theta);
                s.pass("overlap_constant", format!("every trace is shared by theta = {} blocks", o.theta));
            }
            Err(f) => {
                s.fail("overlap_constant", f.to_string());
            }
        }
    }

    if let Some(reason) = s.blocked(&["two_design"]) {
        s.skip("gate_block_size", reason);
    } else {
        let gate = hypothesis_gate(r.params.as_ref().expect("design passed"));
        let mut detail = gate.arithmetic.clone();
        if let Some(n) = &gate.note {
            write!(detail, "; {n}").unwrap();
        }
        if gate.block_size_gate {
            s.pass("gate_block_size", detail);
        } else {
            s.fail("gate_block_size", detail);
        }
        r.gate = Some(gate);
    }

    if let Some(reason) = s.blocked(&["trace_constant"]) {
        s.skip("gate_trace_at_least_3", reason);
    } else {
        let k0 = r.k0.expect("trace passed");
        if k0 >= 3 {
            s.pass("gate_trace_at_least_3", format!("k0 = {k0} >= 3"));
        } else {
            s.fail("gate_trace_at_least_3", format!("k0 = {k0} < 3"));
        }
    }

    if let Some(reason) = s.blocked(&["two_design", "overlap_constant", "gate_trace_at_least_3"]) {
        s.skip("induced_designs", reason);
    } else {
        let sig = sigma.expect("overlap passed");
        let mut failure = None;
        for i in 0..sig.num_classes() {
            match design::induced_design(d, sig, i)? {
                Ok(ind) => r.induced.push(InducedSummary { class: i, params: ind.params }),
                Err(f) => {
                    failure = Some(f.to_string());
                    break;
                }
            }
        }
        match failure {
            Some(f) => {
                r.induced.clear();
                s.fail("induced_designs", f);
            }
            None => {
                let mut kinds: Vec<String> = r.induced.iter().map(|i| i.params.to_string()).collect();
                kinds.dedup();
                s.pass("induced_designs", format!("every class carries {}", kinds.join(" / ")));
            }
        }
    }

    if let Some(reason) = s.blocked(&["induced_designs"]) {
        s.skip("catalog", reason);
    } else {
        let c = r.class_size.expect("partition present") as u64;
        let k0 = r.k0.expect("trace passed") as u64;
        let lambda = r.params.expect("design passed").lambda as u64;
        let theta = r.theta.expect("overlap passed") as u64;
        let query = format!("(c, k0, lambda, theta) = ({c}, {k0}, {lambda}, {theta})");
        match match_catalog(c, k0, lambda, theta) {
            Ok(m) if m.is_empty() => {
                s.fail("catalog", format!("{query} matches no catalog row"));
            }
            Ok(m) => {
                let labels: Vec<&str> = m.iter().map(|e| e.label.as_str()).collect();
                s.pass("catalog", format!("{query} matches {}", labels.join(", ")));
                r.catalog = m;
            }
            Err(e) => {
                s.fail("catalog", format!("{query}: {e}"));
            }
        }
    }

    if let Some(reason) = s.blocked(&["partition_invariant", "partition_nontrivial"]) {
        s.skip("class_action_primitive", reason);
    } else {
        let (g, sig) = (group.as_ref().expect("invariance passed"), sigma.expect("invariance passed"));
        let mut bad = None;
        for i in 0..sig.num_classes() {
            let act = action::class_stabilizer_restricted(g, sig, i)?;
            match action::is_primitive(&act.target) {
                Ok(true) => {}
                Ok(false) => {
                    bad = Some(format!("class {i}: the stabilizer preserves a nontrivial block system"));
                    break;
                }
                Err(ActionError::Intransitive) => {
                    bad = Some(format!("class {i}: the stabilizer is intransitive on the class"));
                    break;
                }
                Err(e) => return Err(e.into()),
            }
        }
        match bad {
            Some(w) => s.fail("class_action_primitive", w),
            None => s.pass("class_action_primitive", "each class stabilizer acts primitively on its class"),
        };
    }

    if let Some(reason) = s.blocked(&["partition_invariant", "partition_nontrivial"]) {
        s.skip("quotient_2_transitive", reason);
    } else {
        let (g, sig) = (group.as_ref().expect("invariance passed"), sigma.expect("invariance passed"));
        let q = action::induced_action_on_classes(g, sig)?;
        let detail = format!("action on {} classes has order {}, kernel order {}", sig.num_classes(), q.target.order(), q.kernel_order);
        if action::is_2_transitive(&q.target)? {
            s.pass("quotient_2_transitive", detail);
        } else {
            s.fail("quotient_2_transitive", detail);
        }
    }

    if let (Some(p), Some(c), Some(dd)) = (r.params, r.class_size, r.num_classes) {
        r.families = family_matches(&p, c, dd, r.k0);
    }

    r.conclusion = conclude(&s, &r);
    let (verdict, detail) = match &r.conclusion {
        Conclusion::Matches { .. } => (Verdict::Pass, r.conclusion.to_string()),
        Conclusion::Undetermined { .. } => (Verdict::NotEvaluated, r.conclusion.to_string()),
        _ => (Verdict::Fail, r.conclusion.to_string()),
    };
    s.push("conclusion", verdict, detail);
    r.checks = s.checks;
    Ok(r)
}

/// Symmetric families whose closed form matches `(v, k, λ, c, d, k₀)`.
fn family_matches(p: &DesignParams, c: usize, d: usize, k0: Option<usize>) -> Vec<Family> {
    let lambda = p.lambda as u64;
    let candidates = [
        params::type1_params(lambda),
        params::type2_params(lambda),
        params::k0eq2_params(lambda, params::PairsVariant::First),
        params::k0eq2_params(lambda, params::PairsVariant::Second),
    ];
    candidates
        .into_iter()
        .flatten()
        .filter(|f| {
            (f.v, f.k, f.c, f.d) == (p.v as u64, p.k as u64, c as u64, d as u64)
                && k0.is_none_or(|k0| k0 as u64 == f.k0)
        })
        .map(|f| f.family)
        .collect()
}

fn conclude(s: &Stages, r: &ClassificationReport) -> Conclusion {
    let failed: Vec<String> = HYPOTHESIS_KEYS
        .iter()
        .filter(|k| s.verdict(k) == Verdict::Fail)
        .map(|k| k.to_string())
        .collect();
    if !failed.is_empty() {
        return Conclusion::OutsideHypotheses { failed };
    }
    let missing: Vec<String> = HYPOTHESIS_KEYS
        .iter()
        .filter(|k| s.verdict(k) != Verdict::Pass)
        .map(|k| k.to_string())
        .collect();
    if !missing.is_empty() {
        return Conclusion::Undetermined { missing };
    }
    let p = r.params.expect("all hypotheses passed");
    let (c, d) = (r.class_size.expect("partition present"), r.num_classes.expect("partition present"));
    match (p.v, p.k, p.lambda, c, d) {
        (45, 12, 3, 9, 5) | (96, 20, 4, 16, 6) => Conclusion::Matches { v: p.v, k: p.k, lambda: p.lambda, c, d },
        _ => Conclusion::ContradictsClassification { v: p.v, k: p.k, lambda: p.lambda },
    }
}
