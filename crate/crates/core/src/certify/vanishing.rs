use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cohomology::{binomial, exterior_power, h_sum, LineBundleSum};
use crate::error::{Error, Result};
use crate::space::{MultiDegree, ProductSpace};

/// Explicit subset enumeration is only attempted up to this middle rank.
pub const EXPLICIT_RANK_CAP: u64 = 16;

/// The family of twists `B` the vanishing is checked over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwistConstraint {
    /// Every group of factors has negative component sum.
    PerGroupNegative,
    /// The sum of all components is negative.
    TotalNegative,
}

impl TwistConstraint {
    pub fn describe(self, x: &ProductSpace) -> String {
        match self {
            Self::PerGroupNegative => {
                let groups: Vec<String> = x
                    .groups()
                    .iter()
                    .map(|g| {
                        let idx: Vec<String> = g.members.iter().map(|i| format!("b{}", i + 1)).collect();
                        format!("{} < 0", idx.join(" + "))
                    })
                    .collect();
                format!("all B with {}", groups.join(", "))
            }
            Self::TotalNegative => {
                let idx: Vec<String> = (1..=x.picard_rank()).map(|i| format!("b{i}")).collect();
                format!("all B with {} < 0", idx.join(" + "))
            }
        }
    }

    /// The sums the constraint bounds, as a vector.
    pub fn key(self, x: &ProductSpace, d: &MultiDegree) -> Vec<i64> {
        match self {
            Self::PerGroupNegative => x.groups().iter().map(|g| d.group_sum(g)).collect(),
            Self::TotalNegative => vec![d.total()],
        }
    }

    pub fn admits(self, x: &ProductSpace, b: &MultiDegree) -> bool {
        self.key(x, b).iter().all(|&s| s < 0)
    }
}

/// Degree of a `q`-subset of summands, with the number of subsets of that
/// constrained profile.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetProfile {
    /// A representative `t_S`.
    pub t_s: MultiDegree,
    /// The constrained sums of `t_S`, shared by every subset counted here.
    pub key: Vec<i64>,
    #[serde(with = "crate::serde_util")]
    pub count: BigUint,
}

/// A twist `B` in the family and a subset with `B + t_S >= 0`, so that
/// `h^0(Lambda^q(M)(B)) > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistWitness {
    pub b: MultiDegree,
    pub t_s: MultiDegree,
    /// The chosen summand degrees, with repetition.
    pub subset: Vec<MultiDegree>,
    #[serde(with = "crate::serde_util")]
    pub h0: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanishingResult {
    pub q: u64,
    pub pass: bool,
    pub profiles: Vec<SubsetProfile>,
    pub witness: Option<TwistWitness>,
    /// Outcome of explicit subset enumeration, when the rank allows it.
    pub explicit_agrees: Option<bool>,
}

fn violates(key: &[i64]) -> bool {
    key.iter().all(|&s| s > 0)
}

/// Profiles of all `q`-subsets of the summands of `middle`, aggregated by
/// constrained sums. Each entry keeps one representative choice.
pub fn subset_profiles(
    x: &ProductSpace,
    middle: &LineBundleSum,
    q: u64,
    constraint: TwistConstraint,
) -> Vec<(SubsetProfile, Vec<MultiDegree>)> {
    type Entry = (BigUint, Vec<(usize, u64)>);
    // layer[c] maps a key to (count, representative choice) for c chosen
    let mut layer: Vec<BTreeMap<Vec<i64>, Entry>> = vec![BTreeMap::new(); q as usize + 1];
    let width = constraint.key(x, &MultiDegree::zero(x.picard_rank())).len();
    layer[0].insert(vec![0; width], (BigUint::one(), Vec::new()));
    for (idx, (d, mult)) in middle.summands().iter().enumerate() {
        let step = constraint.key(x, d);
        let mut next: Vec<BTreeMap<Vec<i64>, Entry>> = vec![BTreeMap::new(); q as usize + 1];
        for (c, table) in layer.iter().enumerate() {
            for (key, (count, choice)) in table {
                for j in 0..=(*mult).min(q - c as u64) {
                    let nk: Vec<i64> = key.iter().zip(&step).map(|(a, s)| a + s * j as i64).collect();
                    let ways = count * binomial(*mult, j);
                    let slot = next[c + j as usize].entry(nk).or_insert_with(|| {
                        let mut ch = choice.clone();
                        if j > 0 {
                            ch.push((idx, j));
                        }
                        (BigUint::zero(), ch)
                    });
                    slot.0 += ways;
                }
            }
        }
        layer = next;
    }
    let summands = middle.summands();
    layer
        .pop()
        .unwrap_or_default()
        .into_iter()
        .map(|(key, (count, choice))| {
            let subset: Vec<MultiDegree> = choice
                .iter()
                .flat_map(|&(i, j)| std::iter::repeat_n(summands[i].0.clone(), j as usize))
                .collect();
            let t_s = subset
                .iter()
                .fold(MultiDegree::zero(x.picard_rank()), |acc, d| &acc + d);
            (SubsetProfile { t_s, key, count }, subset)
        })
        .collect()
}

/// Applies the decision rule to every explicit `q`-subset of the expanded
/// summand list. Returns `None` above [`EXPLICIT_RANK_CAP`].
pub fn vanishing_explicit(
    x: &ProductSpace,
    middle: &LineBundleSum,
    q: u64,
    constraint: TwistConstraint,
) -> Option<bool> {
    if middle.rank() > EXPLICIT_RANK_CAP {
        return None;
    }
    let items = middle.expanded();
    let n = items.len();
    let q = q as usize;
    let mut idx: Vec<usize> = (0..q).collect();
    if q > n {
        return Some(true);
    }
    loop {
        let t = idx
            .iter()
            .fold(MultiDegree::zero(x.picard_rank()), |acc, &i| &acc + &items[i]);
        if violates(&constraint.key(x, &t)) {
            return Some(false);
        }
        // next combination in lexicographic order
        let mut i = q;
        while i > 0 && idx[i - 1] == i - 1 + n - q {
            i -= 1;
        }
        if i == 0 {
            return Some(true);
        }
        idx[i - 1] += 1;
        for j in i..q {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Decides whether `h^0(Lambda^q(middle)(B)) = 0` for every `B` in the
/// constrained family. `h^0(O(e)) != 0` iff `e >= 0`, so a violating `B`
/// exists iff some subset degree `t_S` has every constrained sum positive;
/// then `B = -t_S` is a witness.
pub fn vanishing_all_twists(
    x: &ProductSpace,
    middle: &LineBundleSum,
    q: u64,
    constraint: TwistConstraint,
) -> Result<VanishingResult> {
    if middle.picard_rank().is_some_and(|l| l != x.picard_rank()) {
        return Err(Error::Dimension {
            expected: x.picard_rank(),
            got: middle.picard_rank().unwrap(),
        });
    }
    if q == 0 || q >= middle.rank() {
        return Err(Error::InvalidInput(format!(
            "q = {q} is outside 1..{} for a middle term of rank {}",
            middle.rank().saturating_sub(1),
            middle.rank()
        )));
    }
    let profiles = subset_profiles(x, middle, q, constraint);
    let bad = profiles.iter().find(|(p, _)| violates(&p.key));
    let witness = match bad {
        Some((p, subset)) => {
            let b = -&p.t_s;
            let h0 = h_sum(x, &exterior_power(middle, q)?.twist(&b), 0)?;
            Some(TwistWitness {
                b,
                t_s: p.t_s.clone(),
                subset: subset.clone(),
                h0,
            })
        }
        None => None,
    };
    let pass = witness.is_none();
    let explicit_agrees = vanishing_explicit(x, middle, q, constraint).map(|e| e == pass);
    Ok(VanishingResult {
        q,
        pass,
        profiles: profiles.into_iter().map(|(p, _)| p).collect(),
        witness,
        explicit_agrees,
    })
}
