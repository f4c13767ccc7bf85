//! Linear monads `0 -> A --f--> M --g--> C -> 0` on products of projective
//! spaces: the two explicit families, existence conditions, and
//! verification.

mod build;
mod verify;

use serde::{Deserialize, Serialize};

use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::polyring::{CoordinateRing, MonadMatrix};
use crate::space::{MultiDegree, ProductSpace};

pub use build::{build_section3, build_section4, factors_from_copies, SECTION3_READING, SECTION4_READING};
pub use verify::{verify_monad, MapReport, MonadReport, MonadVerdict, WitnessRecord};

/// Mixed-radix bijection between coordinate tuples (one coordinate per
/// factor) and Segre indices, factor 1 most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegreIndexer {
    radices: Vec<usize>,
    total: usize,
}

impl SegreIndexer {
    pub fn new(factors: &[usize]) -> Result<Self> {
        let radices: Vec<usize> = factors.iter().map(|n| n + 1).collect();
        let total = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| Error::Overflow("number of Segre coordinates".into()))?;
        Ok(Self { radices, total })
    }

    /// `prod (n_i + 1)`, the number of Segre coordinates.
    pub fn total(&self) -> usize {
        self.total
    }

    /// `total / 2 - 1`; needs an even total.
    pub fn nu(&self) -> Result<usize> {
        if !self.total.is_multiple_of(2) {
            return Err(Error::Unsupported(format!(
                "{} Segre coordinates cannot be split into x and y halves",
                self.total
            )));
        }
        Ok(self.total / 2 - 1)
    }

    pub fn tuple(&self, mut index: usize) -> Vec<usize> {
        assert!(index < self.total, "Segre index out of range");
        let mut out = vec![0; self.radices.len()];
        for (slot, &r) in out.iter_mut().zip(&self.radices).rev() {
            *slot = index % r;
            index /= r;
        }
        out
    }

    pub fn index(&self, tuple: &[usize]) -> usize {
        assert_eq!(tuple.len(), self.radices.len());
        tuple.iter().zip(&self.radices).fold(0, |acc, (&t, &r)| {
            assert!(t < r, "coordinate out of range");
            acc * r + t
        })
    }
}

/// `nu = 2^(l_1 - 1) 4^(l_2) ... (2m)^(l_m) - 1` where `l_j` copies of
/// `P^(2j-1)` make up `X`.
pub fn nu(copies: &[u32]) -> Result<u64> {
    let overflow = || Error::Overflow("nu".into());
    let first = copies
        .iter()
        .position(|&l| l > 0)
        .ok_or_else(|| Error::InvalidInput("copy vector has no factors".into()))?;
    let mut acc: u64 = 1;
    for (j, &l) in copies.iter().enumerate().skip(first).filter(|(_, &l)| l > 0) {
        let radix = 2 * (j as u64 + 1);
        // one factor of 2 is taken out of the first nonempty block
        let (base_power, extra) = if j == first { (l - 1, radix / 2) } else { (l, 1) };
        acc = acc.checked_mul(extra).ok_or_else(overflow)?;
        acc = acc
            .checked_mul(radix.checked_pow(base_power).ok_or_else(overflow)?)
            .ok_or_else(overflow)?;
    }
    Ok(acc - 1)
}

/// Which of the two existence conditions hold for ranks `(a, b, c)` on an
/// `N`-dimensional space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FloystadCondition {
    Cond1,
    Cond2,
    Both,
    Fails,
}

impl FloystadCondition {
    pub fn cond1(self) -> bool {
        matches!(self, Self::Cond1 | Self::Both)
    }

    pub fn cond2(self) -> bool {
        matches!(self, Self::Cond2 | Self::Both)
    }
}

/// (1) `b >= a + c` and `b >= 2c + N - 1`; (2) `b >= a + c + N`.
pub fn floystad_check(a: u64, b: u64, c: u64, n: u64) -> FloystadCondition {
    let (a, b, c, n) = (a as u128, b as u128, c as u128, n as u128);
    let one = b >= a + c && b + 1 >= 2 * c + n;
    let two = b >= a + c + n;
    match (one, two) {
        (true, true) => FloystadCondition::Both,
        (true, false) => FloystadCondition::Cond1,
        (false, true) => FloystadCondition::Cond2,
        (false, false) => FloystadCondition::Fails,
    }
}

/// Construction parameters recorded alongside a monad.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum MonadParams {
    Section3 {
        factors: Vec<usize>,
        k: usize,
        nu: usize,
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
    Custom,
}

/// A candidate monad: terms, maps and construction parameters. Maps are
/// stored target-rows by source-columns, so `map_f` is `rk M x rk A` and
/// `map_g` is `rk C x rk M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadSpec {
    pub space: ProductSpace,
    pub term_a: LineBundleSum,
    pub term_m: LineBundleSum,
    pub term_c: LineBundleSum,
    pub map_f: MonadMatrix,
    pub map_g: MonadMatrix,
    pub params: MonadParams,
    /// How the construction's notation was interpreted.
    pub reading: String,
}

impl MonadSpec {
    /// Checks shapes and labels against the terms. Entry degrees are not
    /// checked here; [`verify_monad`] reports them.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        space: ProductSpace,
        term_a: LineBundleSum,
        term_m: LineBundleSum,
        term_c: LineBundleSum,
        map_f: MonadMatrix,
        map_g: MonadMatrix,
        params: MonadParams,
        reading: String,
    ) -> Result<Self> {
        let l = space.picard_rank();
        for (name, t) in [("A", &term_a), ("M", &term_m), ("C", &term_c)] {
            if let Some(r) = t.picard_rank() {
                if r != l {
                    return Err(Error::InvalidInput(format!(
                        "term {name} has degrees of length {r}, expected {l}"
                    )));
                }
            }
        }
        let ring = CoordinateRing::new(&space);
        for (name, map) in [("f", &map_f), ("g", &map_g)] {
            if map.ring() != &ring {
                return Err(Error::InvalidInput(format!("map {name} lives on a different space")));
            }
        }
        let check = |name: &str, labels: &[MultiDegree], term: &LineBundleSum| {
            if labels != term.expanded().as_slice() {
                return Err(Error::LabelMismatch(format!(
                    "{name} labels do not list the summands of the term in canonical order"
                )));
            }
            Ok(())
        };
        check("f row", map_f.row_labels(), &term_m)?;
        check("f column", map_f.col_labels(), &term_a)?;
        check("g row", map_g.row_labels(), &term_c)?;
        check("g column", map_g.col_labels(), &term_m)?;
        if term_m.rank() < term_a.rank() + term_c.rank() {
            return Err(Error::InvalidInput(format!(
                "rank M = {} is below rank A + rank C = {}",
                term_m.rank(),
                term_a.rank() + term_c.rank()
            )));
        }
        Ok(Self {
            space,
            term_a,
            term_m,
            term_c,
            map_f,
            map_g,
            params,
            reading,
        })
    }

    pub fn ring(&self) -> &CoordinateRing {
        self.map_g.ring()
    }

    /// The composite `g . f`, a `rk C x rk A` matrix.
    pub fn composite(&self) -> Result<MonadMatrix> {
        self.map_g.mat_mul(&self.map_f)
    }

    pub fn display_summary(&self) -> Result<DisplaySummary> {
        display_summary(self)
    }
}

/// Rank and first Chern class of a derived bundle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleInvariants {
    pub rank: u64,
    pub c1: MultiDegree,
}

/// Invariants of `T = ker g`, `E = ker g / im f` and `Q = coker f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplaySummary {
    pub kernel: BundleInvariants,
    pub cohomology: BundleInvariants,
    pub cokernel: BundleInvariants,
}

pub fn display_summary(spec: &MonadSpec) -> Result<DisplaySummary> {
    let l = spec.space.picard_rank();
    let (a, m, c) = (&spec.term_a, &spec.term_m, &spec.term_c);
    let sub = |x: u64, y: u64| {
        x.checked_sub(y)
            .ok_or_else(|| Error::InvalidInput("negative rank in the display".into()))
    };
    let (ca, cm, cc) = (a.c1(l), m.c1(l), c.c1(l));
    Ok(DisplaySummary {
        kernel: BundleInvariants {
            rank: sub(m.rank(), c.rank())?,
            c1: &cm - &cc,
        },
        cohomology: BundleInvariants {
            rank: sub(sub(m.rank(), a.rank())?, c.rank())?,
            c1: &(&cm - &ca) - &cc,
        },
        cokernel: BundleInvariants {
            rank: sub(m.rank(), a.rank())?,
            c1: &cm - &ca,
        },
    })
}
