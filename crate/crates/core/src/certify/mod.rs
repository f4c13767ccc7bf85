//! Stability and simplicity certificates for the kernel and cohomology
//! bundles of a monad.
//!
//! Everything here is exact. A positive verdict is backed by the recorded
//! sub-checks; any step that cannot be forced yields a negative or
//! inconclusive verdict, never a positive one.

mod vanishing;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cohomology::{h_sum, LineBundleSum};
use crate::error::Result;
use crate::monad::MonadSpec;
use crate::space::{MultiDegree, Polarization, ProductSpace};

pub use vanishing::{
    subset_profiles, vanishing_all_twists, vanishing_explicit, SubsetProfile, TwistConstraint,
    TwistWitness, VanishingResult, EXPLICIT_RANK_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StabilityVerdict {
    /// `deg T < 0` and every `q` passes.
    Stable,
    /// Some `q` has a twist `B` in the family with a nonzero section.
    Fail,
    /// `deg T >= 0`; a normalization twist search is not implemented.
    NormalizationRequired,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilityCertificate {
    pub polarization: MultiDegree,
    pub constraint: TwistConstraint,
    /// The twists the vanishing was checked over.
    pub twist_family: String,
    pub rank_t: u64,
    pub c1_t: MultiDegree,
    #[serde(with = "crate::serde_util")]
    pub deg_t: BigInt,
    #[serde(with = "crate::serde_util")]
    pub slope_t: BigRational,
    /// Normalization exponent of `T`: `T(-k, 0, .., 0)` has degree in
    /// `(-d rk T, 0]`, `d = deg O(1, 0, .., 0)`.
    #[serde(rename = "k_E")]
    pub k_e: i64,
    /// `k_E = 0`, i.e. `T` is its own normalization.
    pub normalization_trivial: bool,
    pub results: Vec<VanishingResult>,
    pub verdict: StabilityVerdict,
}

/// Computes the invariants of `T = ker g` and decides
/// `h^0(Lambda^q(M)(B)) = 0` for every `q` in `1..rk T` and every `B` in the
/// constrained family, which bounds `h^0(Lambda^q(T)(B))` through
/// `Lambda^q T -> Lambda^q M`.
pub fn stability_certificate(
    spec: &MonadSpec,
    polarization: &Polarization,
    constraint: TwistConstraint,
) -> Result<StabilityCertificate> {
    let x = &spec.space;
    let summary = spec.display_summary()?;
    let rank_t = summary.kernel.rank;
    let c1_t = summary.kernel.c1;
    let deg_t = x.degree(polarization, &c1_t)?;
    let slope_t = crate::space::slope(&deg_t, rank_t as usize)?;
    let norm = x.normalize(polarization, &c1_t, rank_t as usize)?;
    let (results, verdict) = if !deg_t.is_negative() {
        (Vec::new(), StabilityVerdict::NormalizationRequired)
    } else {
        let results = (1..rank_t)
            .into_par_iter()
            .map(|q| vanishing_all_twists(x, &spec.term_m, q, constraint))
            .collect::<Result<Vec<_>>>()?;
        let verdict = if results.iter().all(|r| r.pass) {
            StabilityVerdict::Stable
        } else {
            StabilityVerdict::Fail
        };
        (results, verdict)
    };
    Ok(StabilityCertificate {
        polarization: polarization.degree().clone(),
        constraint,
        twist_family: constraint.describe(x),
        rank_t,
        c1_t,
        deg_t,
        slope_t,
        k_e: norm.k,
        normalization_trivial: norm.k == 0,
        results,
        verdict,
    })
}

/// One step of a cohomology sequence `0 -> A -> M -> C -> 0` of split
/// bundles: `h^p(C) = 0` is forced when `h^p(M) = 0 = h^(p+1)(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LesStep {
    pub p: usize,
    #[serde(with = "crate::serde_util")]
    pub h_p_middle: BigUint,
    #[serde(with = "crate::serde_util")]
    pub h_p1_left: BigUint,
    pub forced_zero: bool,
}

pub fn les_vanish(x: &ProductSpace, a: &LineBundleSum, m: &LineBundleSum, p: usize) -> Result<LesStep> {
    let h_p_middle = h_sum(x, m, p)?;
    let h_p1_left = h_sum(x, a, p + 1)?;
    let forced_zero = h_p_middle.is_zero() && h_p1_left.is_zero();
    Ok(LesStep {
        p,
        h_p_middle,
        h_p1_left,
        forced_zero,
    })
}

/// The twisted dual sequence `0 -> C^*(a) -> M^*(a) -> T^*(a) -> 0` for one
/// summand degree `a` of the left term, with both vanishing steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualTwistCheck {
    pub twist: MultiDegree,
    pub left: LineBundleSum,
    pub middle: LineBundleSum,
    pub h0: LesStep,
    pub h1: LesStep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimplicityVerdict {
    /// `h^0(E (x) E^*) = 1`.
    Simple,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicityCertificate {
    /// `T` is stable, hence simple: `h^0(T (x) T^*) = 1`.
    pub premise_t_simple: bool,
    pub checks: Vec<DualTwistCheck>,
    /// `1 <= h^0(T (x) T^*) <= h^0(E (x) E^*) <= h^0(E (x) T^*) <= 1`,
    /// with the upper bound present only when every step is forced.
    pub lower_bound: u32,
    pub upper_bound: Option<u32>,
    pub reason: Option<String>,
    pub verdict: SimplicityVerdict,
}

/// Bounds `h^0(E (x) E^*)` through `0 -> A -> T -> E -> 0`. Tensoring with
/// `T^*` gives `h^0(E (x) T^*) <= h^0(T (x) T^*) + h^1(A (x) T^*)`, and the
/// right-hand correction vanishes once `H^0` and `H^1` of `T^*(a)` vanish
/// for every summand `O(a)` of `A`.
pub fn simplicity_certificate(
    spec: &MonadSpec,
    stability: &StabilityCertificate,
) -> Result<SimplicityCertificate> {
    let x = &spec.space;
    let premise = stability.verdict == StabilityVerdict::Stable;
    let c_dual = spec.term_c.dual();
    let m_dual = spec.term_m.dual();
    let checks = spec
        .term_a
        .summands()
        .iter()
        .map(|(a, _)| {
            let left = c_dual.twist(a);
            let middle = m_dual.twist(a);
            Ok(DualTwistCheck {
                twist: a.clone(),
                h0: les_vanish(x, &left, &middle, 0)?,
                h1: les_vanish(x, &left, &middle, 1)?,
                left,
                middle,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let all_forced = checks.iter().all(|c| c.h0.forced_zero && c.h1.forced_zero);
    let reason = if !premise {
        Some("the kernel is not certified stable".to_string())
    } else if !all_forced {
        let gaps: Vec<String> = checks
            .iter()
            .flat_map(|c| {
                [&c.h0, &c.h1]
                    .into_iter()
                    .filter(|s| !s.forced_zero)
                    .map(move |s| format!("H^{}(T^*{}) is not forced to vanish", s.p, c.twist))
            })
            .collect();
        Some(gaps.join("; "))
    } else {
        None
    };
    let simple = reason.is_none();
    Ok(SimplicityCertificate {
        premise_t_simple: premise,
        checks,
        lower_bound: 1,
        upper_bound: simple.then_some(1),
        reason,
        verdict: if simple {
            SimplicityVerdict::Simple
        } else {
            SimplicityVerdict::Inconclusive
        },
    })
}
