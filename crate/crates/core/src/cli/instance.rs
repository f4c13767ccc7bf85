use serde::{Deserialize, Serialize};

use crate::certify::TwistConstraint;
use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::monad::{build_section3, build_section4, factors_from_copies, MonadParams, MonadSpec};
use crate::polyring::{CoordinateRing, MatrixDoc, MonadMatrix, DEFAULT_PRIME, DEFAULT_TRIALS};
use crate::space::{FactorGroup, MultiDegree, Polarization, ProductSpace};

fn default_prime() -> u64 {
    DEFAULT_PRIME
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

/// A monad given explicitly by its terms and matrices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomMonad {
    pub factors: Vec<usize>,
    /// Factor groups for per-group twist constraints; one per factor if
    /// omitted. Members are 1-based.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<FactorGroup>>,
    #[serde(default)]
    pub term_a: LineBundleSum,
    pub term_m: LineBundleSum,
    #[serde(default)]
    pub term_c: LineBundleSum,
    pub map_f: MatrixDoc,
    pub map_g: MatrixDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Section3 {
        /// `l_j` copies of `P^(2j-1)`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        copies: Option<Vec<u32>>,
        /// Explicit factor dimensions, as an alternative to `copies`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        factors: Option<Vec<usize>>,
        k: usize,
    },
    Section4 {
        n: usize,
        m: usize,
        l: usize,
        alpha: u32,
        beta: u32,
        gamma: u32,
        k: usize,
    },
    Custom(Box<CustomMonad>),
}

/// An instance file: family parameters plus pipeline settings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polarization: Option<MultiDegree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<TwistConstraint>,
    #[serde(default = "default_prime")]
    pub prime: u64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
}

impl InstanceSpec {
    pub fn new(family: Family) -> Self {
        Self {
            name: None,
            family,
            polarization: None,
            constraint: None,
            prime: DEFAULT_PRIME,
            trials: DEFAULT_TRIALS,
            seed: 0,
        }
    }

    pub fn section3(factors: &[usize], k: usize) -> Self {
        Self::new(Family::Section3 {
            copies: None,
            factors: Some(factors.to_vec()),
            k,
        })
    }

    pub fn section4(n: usize, m: usize, l: usize, alpha: u32, beta: u32, gamma: u32, k: usize) -> Self {
        Self::new(Family::Section4 {
            n,
            m,
            l,
            alpha,
            beta,
            gamma,
            k,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    /// A file-name friendly identifier.
    pub fn id(&self) -> String {
        if let Some(name) = &self.name {
            return name.clone();
        }
        let join = |v: &[usize]| v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join("x");
        match &self.family {
            Family::Section3 { copies, factors, k } => {
                let f = match (copies, factors) {
                    (Some(c), _) => factors_from_copies(c),
                    (None, Some(f)) => f.clone(),
                    _ => Vec::new(),
                };
                format!("section3-{}-k{k}", join(&f))
            }
            Family::Section4 {
                n,
                m,
                l,
                alpha,
                beta,
                gamma,
                k,
            } => format!("section4-{n}-{m}-{l}-a{alpha}-b{beta}-g{gamma}-k{k}"),
            Family::Custom(c) => format!("custom-{}", join(&c.factors)),
        }
    }

    pub fn build(&self) -> Result<MonadSpec> {
        match &self.family {
            Family::Section3 { copies, factors, k } => {
                let f = match (copies, factors) {
                    (Some(c), None) => factors_from_copies(c),
                    (None, Some(f)) => f.clone(),
                    _ => {
                        return Err(Error::InvalidInput(
                            "section3 needs exactly one of `copies` and `factors`".into(),
                        ))
                    }
                };
                build_section3(&f, *k)
            }
            Family::Section4 {
                n,
                m,
                l,
                alpha,
                beta,
                gamma,
                k,
            } => build_section4(*n, *m, *l, *alpha, *beta, *gamma, *k),
            Family::Custom(c) => build_custom(c),
        }
    }

    /// The polarization: as given, or `O(1,..,1)` for section3 and custom
    /// instances and `O(a,a,b,b,c,c)` for section4.
    pub fn resolved_polarization(&self, spec: &MonadSpec) -> Result<Polarization> {
        let d = match (&self.polarization, &spec.params) {
            (Some(d), _) => d.clone(),
            (None, MonadParams::Section4 { alpha, beta, gamma, .. }) => {
                let (a, b, c) = (*alpha as i64, *beta as i64, *gamma as i64);
                MultiDegree::new(vec![a, a, b, b, c, c])
            }
            (None, _) => MultiDegree::uniform(spec.space.picard_rank(), 1),
        };
        spec.space.check_degree(&d)?;
        Polarization::new(d)
    }

    /// Per-group negativity for section3 and custom instances, total
    /// negativity for section4, unless given.
    pub fn resolved_constraint(&self) -> TwistConstraint {
        self.constraint.unwrap_or(match self.family {
            Family::Section4 { .. } => TwistConstraint::TotalNegative,
            _ => TwistConstraint::PerGroupNegative,
        })
    }

    /// The instance with every default written out, as recorded in reports.
    pub fn resolved(&self) -> Result<(Self, MonadSpec)> {
        let spec = self.build()?;
        let mut out = self.clone();
        out.polarization = Some(self.resolved_polarization(&spec)?.degree().clone());
        out.constraint = Some(self.resolved_constraint());
        Ok((out, spec))
    }
}

fn build_custom(c: &CustomMonad) -> Result<MonadSpec> {
    let space = match &c.groups {
        None => ProductSpace::new(c.factors.clone())?,
        Some(groups) => {
            let zero_based = groups
                .iter()
                .map(|g| {
                    let members = g
                        .members
                        .iter()
                        .map(|&m| {
                            m.checked_sub(1).ok_or_else(|| {
                                Error::InvalidInput(format!("group {}: members are 1-based", g.name))
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(FactorGroup {
                        name: g.name.clone(),
                        members,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            ProductSpace::with_groups(c.factors.clone(), zero_based)?
        }
    };
    let ring = CoordinateRing::new(&space);
    let map_f = MonadMatrix::from_doc(ring.clone(), &c.map_f).map_err(|e| Error::Parse(format!("map_f: {e}")))?;
    let map_g = MonadMatrix::from_doc(ring, &c.map_g).map_err(|e| Error::Parse(format!("map_g: {e}")))?;
    MonadSpec::new(
        space,
        c.term_a.clone(),
        c.term_m.clone(),
        c.term_c.clone(),
        map_f,
        map_g,
        MonadParams::Custom,
        "explicit matrices as given".to_string(),
    )
}
