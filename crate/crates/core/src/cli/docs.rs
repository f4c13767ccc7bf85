//! JSON documents written by the command-line tool, and their re-validation.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::instance::InstanceSpec;
use crate::certify::{
    les_vanish, simplicity_certificate, stability_certificate, vanishing_explicit,
    SimplicityCertificate, SimplicityVerdict, StabilityCertificate, StabilityVerdict,
};
use crate::cohomology::{binomial, exterior_power, h_sum};
use crate::error::{Error, Result};
use crate::monad::{
    floystad_check, verify_monad, DisplaySummary, FloystadCondition, MapReport, MonadParams,
    MonadReport, MonadSpec, MonadVerdict,
};
use crate::polyring::modp::rank_mod_p;
use crate::polyring::{common_zero, MatrixDoc, MonadMatrix, SparsePoly, TriangularWitness};
use crate::space::{FactorGroup, MultiDegree};
use crate::cohomology::LineBundleSum;

pub const TOOL: &str = "monadkit";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FloystadRecord {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub n: u64,
    pub condition: FloystadCondition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildDoc {
    pub tool: String,
    pub version: String,
    pub instance: InstanceSpec,
    pub factors: Vec<usize>,
    pub groups: Vec<FactorGroup>,
    pub term_a: LineBundleSum,
    pub term_m: LineBundleSum,
    pub term_c: LineBundleSum,
    pub params: MonadParams,
    pub reading: String,
    pub floystad: FloystadRecord,
    pub display: DisplaySummary,
    pub map_f: MatrixDoc,
    pub map_g: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyDoc {
    pub tool: String,
    pub version: String,
    pub instance: InstanceSpec,
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
    pub report: MonadReport,
}

/// The parts of a monad report a certificate depends on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadStatus {
    pub composite_zero: bool,
    pub maximal_rank_proved: bool,
    pub grading_consistent: bool,
    pub verdict: MonadVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityDoc {
    pub tool: String,
    pub version: String,
    pub instance: InstanceSpec,
    pub prime: u64,
    pub seed: u64,
    pub monad: MonadStatus,
    pub certificate: StabilityCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityDoc {
    pub tool: String,
    pub version: String,
    pub instance: InstanceSpec,
    pub prime: u64,
    pub seed: u64,
    pub monad: MonadStatus,
    pub stability: StabilityCertificate,
    pub certificate: SimplicityCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Document {
    MonadSpec(BuildDoc),
    MonadReport(VerifyDoc),
    StabilityCertificate(StabilityDoc),
    SimplicityCertificate(SimplicityDoc),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Self::MonadSpec(_) => "monad-spec",
            Self::MonadReport(_) => "monad-report",
            Self::StabilityCertificate(_) => "stability-certificate",
            Self::SimplicityCertificate(_) => "simplicity-certificate",
        }
    }

    pub fn instance(&self) -> &InstanceSpec {
        match self {
            Self::MonadSpec(d) => &d.instance,
            Self::MonadReport(d) => &d.instance,
            Self::StabilityCertificate(d) => &d.instance,
            Self::SimplicityCertificate(d) => &d.instance,
        }
    }

    /// Pretty JSON with a trailing newline; keys follow declaration order.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Whether the verdict is positive (exit status 0).
    pub fn positive(&self) -> bool {
        match self {
            Self::MonadSpec(_) => true,
            Self::MonadReport(d) => d.report.verdict == MonadVerdict::Valid,
            Self::StabilityCertificate(d) => {
                d.monad.verdict == MonadVerdict::Valid && d.certificate.verdict == StabilityVerdict::Stable
            }
            Self::SimplicityCertificate(d) => {
                d.monad.verdict == MonadVerdict::Valid && d.certificate.verdict == SimplicityVerdict::Simple
            }
        }
    }
}

fn status(r: &MonadReport) -> MonadStatus {
    MonadStatus {
        composite_zero: r.composite_zero,
        maximal_rank_proved: r.map_f.maximal_rank_proved && r.map_g.maximal_rank_proved,
        grading_consistent: r.grading_consistent,
        verdict: r.verdict,
    }
}

pub fn build_doc(inst: &InstanceSpec) -> Result<Document> {
    let (inst, spec) = inst.resolved()?;
    let (a, b, c) = (spec.term_a.rank(), spec.term_m.rank(), spec.term_c.rank());
    let n = spec.space.dim() as u64;
    Ok(Document::MonadSpec(BuildDoc {
        tool: TOOL.into(),
        version: VERSION.into(),
        factors: spec.space.factors().to_vec(),
        groups: spec.space.groups().to_vec(),
        term_a: spec.term_a.clone(),
        term_m: spec.term_m.clone(),
        term_c: spec.term_c.clone(),
        params: spec.params.clone(),
        reading: spec.reading.clone(),
        floystad: FloystadRecord {
            a,
            b,
            c,
            n,
            condition: floystad_check(a, b, c, n),
        },
        display: spec.display_summary()?,
        map_f: spec.map_f.to_doc(),
        map_g: spec.map_g.to_doc(),
        instance: inst,
    }))
}

pub fn verify_doc(inst: &InstanceSpec) -> Result<Document> {
    let (inst, spec) = inst.resolved()?;
    let report = verify_monad(&spec, inst.prime, inst.trials, inst.seed)?;
    Ok(Document::MonadReport(VerifyDoc {
        tool: TOOL.into(),
        version: VERSION.into(),
        prime: inst.prime,
        trials: inst.trials,
        seed: inst.seed,
        instance: inst,
        report,
    }))
}

fn certify_common(inst: &InstanceSpec) -> Result<(InstanceSpec, MonadSpec, MonadStatus, StabilityCertificate)> {
    let (inst, spec) = inst.resolved()?;
    let report = verify_monad(&spec, inst.prime, inst.trials, inst.seed)?;
    let pol = inst.resolved_polarization(&spec)?;
    let cert = stability_certificate(&spec, &pol, inst.resolved_constraint())?;
    Ok((inst, spec, status(&report), cert))
}

pub fn stability_doc(inst: &InstanceSpec) -> Result<Document> {
    let (inst, _, monad, certificate) = certify_common(inst)?;
    Ok(Document::StabilityCertificate(StabilityDoc {
        tool: TOOL.into(),
        version: VERSION.into(),
        prime: inst.prime,
        seed: inst.seed,
        instance: inst,
        monad,
        certificate,
    }))
}

pub fn simplicity_doc(inst: &InstanceSpec) -> Result<Document> {
    let (inst, spec, monad, stability) = certify_common(inst)?;
    let certificate = simplicity_certificate(&spec, &stability)?;
    Ok(Document::SimplicityCertificate(SimplicityDoc {
        tool: TOOL.into(),
        version: VERSION.into(),
        prime: inst.prime,
        seed: inst.seed,
        instance: inst,
        monad,
        stability,
        certificate,
    }))
}

/// Outcome of re-validating a stored document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recheck {
    pub kind: String,
    /// Recomputing the document from its instance gives identical bytes.
    pub reproduced: bool,
    /// Independent checks of the recorded sub-results, by name.
    pub checks: Vec<(String, bool)>,
}

impl Recheck {
    pub fn ok(&self) -> bool {
        self.reproduced && self.checks.iter().all(|(_, ok)| *ok)
    }
}

pub fn recheck(text: &str) -> Result<Recheck> {
    let doc = Document::from_json(text)?;
    let inst = doc.instance().clone();
    let fresh = match &doc {
        Document::MonadSpec(_) => build_doc(&inst)?,
        Document::MonadReport(_) => verify_doc(&inst)?,
        Document::StabilityCertificate(_) => stability_doc(&inst)?,
        Document::SimplicityCertificate(_) => simplicity_doc(&inst)?,
    };
    let reproduced = fresh.to_json() == doc.to_json();
    let spec = inst.build()?;
    let mut checks = Vec::new();
    match &doc {
        Document::MonadSpec(d) => {
            let f = MonadMatrix::from_doc(spec.ring().clone(), &d.map_f)?;
            let g = MonadMatrix::from_doc(spec.ring().clone(), &d.map_g)?;
            checks.push(("stored maps parse".into(), true));
            checks.push(("composite of stored maps is zero".into(), g.mat_mul(&f)?.is_zero()));
        }
        Document::MonadReport(d) => {
            checks.extend(check_monad_report(&spec, &d.report)?);
        }
        Document::StabilityCertificate(d) => {
            checks.extend(check_stability(&spec, &d.certificate)?);
        }
        Document::SimplicityCertificate(d) => {
            checks.extend(check_stability(&spec, &d.stability)?);
            checks.extend(check_simplicity(&spec, &d.certificate)?);
        }
    }
    Ok(Recheck {
        kind: doc.kind().to_string(),
        reproduced,
        checks,
    })
}

fn check_map(name: &str, m: &MonadMatrix, r: &MapReport) -> Result<Vec<(String, bool)>> {
    let ring = m.ring();
    let mut out = Vec::new();
    let mut context = Vec::new();
    let mut chain_ok = true;
    for w in &r.witnesses {
        let pivot = SparsePoly::parse(ring, &w.pivot)?;
        let Some((mono, _)) = pivot.terms().next() else {
            chain_ok = false;
            continue;
        };
        let tw = TriangularWitness {
            pivot: mono.clone(),
            rows: w.rows.clone(),
            cols: w.cols.clone(),
            exponents: w.exponents.clone(),
        };
        chain_ok &= tw.size() == r.target_rank && tw.verify(m, &context);
        context.push(mono.clone());
    }
    out.push((format!("{name}: every witness is triangular in its context"), chain_ok));
    out.push((
        format!("{name}: recorded uncovered point matches"),
        common_zero(ring, &context) == r.uncovered_point,
    ));
    let proved = r.target_rank == 0 || (!context.is_empty() && r.uncovered_point.is_none());
    out.push((format!("{name}: maximal-rank flag matches the chain"), proved == r.maximal_rank_proved));
    let ranks: Vec<usize> = r
        .evidence
        .points
        .iter()
        .map(|pt| rank_mod_p(m.eval_mod(pt, r.evidence.prime), r.evidence.prime))
        .collect();
    out.push((format!("{name}: sampled ranks reproduce"), ranks == r.evidence.ranks));
    Ok(out)
}

fn check_monad_report(spec: &MonadSpec, r: &MonadReport) -> Result<Vec<(String, bool)>> {
    let mut out = vec![(
        "composite zero flag".to_string(),
        spec.composite()?.is_zero() == r.composite_zero,
    )];
    out.extend(check_map("f", &spec.map_f, &r.map_f)?);
    out.extend(check_map("g", &spec.map_g, &r.map_g)?);
    Ok(out)
}

fn check_stability(spec: &MonadSpec, c: &StabilityCertificate) -> Result<Vec<(String, bool)>> {
    let x = &spec.space;
    let pol = crate::space::Polarization::new(c.polarization.clone())?;
    let summary = spec.display_summary()?;
    let mut out = vec![(
        "degree of the kernel".to_string(),
        summary.kernel.c1 == c.c1_t && x.degree(&pol, &c.c1_t)? == c.deg_t,
    )];
    let m = &spec.term_m;
    for r in &c.results {
        let total: BigUint = r.profiles.iter().map(|p| p.count.clone()).sum();
        out.push((format!("q={}: profiles count every subset", r.q), total == binomial(m.rank(), r.q)));
        match &r.witness {
            Some(w) => {
                let mut pool = m.expanded();
                let in_m = w.subset.iter().all(|d| match pool.iter().position(|e| e == d) {
                    Some(i) => {
                        pool.swap_remove(i);
                        true
                    }
                    None => false,
                });
                let t_s = w
                    .subset
                    .iter()
                    .fold(MultiDegree::zero(x.picard_rank()), |acc, d| &acc + d);
                let h0 = h_sum(x, &exterior_power(m, r.q)?.twist(&w.b), 0)?;
                let ok = !r.pass
                    && in_m
                    && w.subset.len() as u64 == r.q
                    && t_s == w.t_s
                    && c.constraint.admits(x, &w.b)
                    && (&w.b + &t_s).is_nonnegative()
                    && h0 == w.h0
                    && !h0.is_zero();
                out.push((format!("q={}: witness B = {} has a section", r.q, w.b), ok));
            }
            None => {
                let explicit = vanishing_explicit(x, m, r.q, c.constraint);
                let ok = r.pass && explicit.is_none_or(|e| e);
                out.push((format!("q={}: no subset violates the constraint", r.q), ok));
            }
        }
    }
    Ok(out)
}

fn check_simplicity(spec: &MonadSpec, c: &SimplicityCertificate) -> Result<Vec<(String, bool)>> {
    let x = &spec.space;
    let mut out = Vec::new();
    for chk in &c.checks {
        let left = spec.term_c.dual().twist(&chk.twist);
        let middle = spec.term_m.dual().twist(&chk.twist);
        let ok = left == chk.left
            && middle == chk.middle
            && les_vanish(x, &left, &middle, 0)? == chk.h0
            && les_vanish(x, &left, &middle, 1)? == chk.h1;
        out.push((format!("dual sequence twisted by {}", chk.twist), ok));
    }
    let forced = c.checks.iter().all(|k| k.h0.forced_zero && k.h1.forced_zero);
    out.push((
        "verdict follows from the forced steps".into(),
        (c.verdict == SimplicityVerdict::Simple) == (forced && c.premise_t_simple),
    ));
    Ok(out)
}
