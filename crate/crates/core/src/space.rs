//! The ambient product of projective spaces `X = P^{n_1} x ... x P^{n_l}`,
//! its Picard lattice `Z^l`, and the intersection pairing used for degrees
//! and slopes.
//!
//! The intersection ring is `Z[h_1, ..., h_l] / (h_i^{n_i + 1})` and the class
//! of a point is `h_1^{n_1} ... h_l^{n_l}`. Everything is computed over
//! arbitrary-precision integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A named set of factor indices. Twist constraints are stated per group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorGroup {
    pub name: String,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSpace {
    factors: Vec<usize>,
    groups: Vec<FactorGroup>,
}

impl ProductSpace {
    /// One group per factor.
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        let groups = (0..factors.len())
            .map(|i| FactorGroup {
                name: format!("f{}", i + 1),
                members: vec![i],
            })
            .collect();
        Self::with_groups(factors, groups)
    }

    pub fn with_groups(factors: Vec<usize>, groups: Vec<FactorGroup>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidInput("product space needs at least one factor".into()));
        }
        if let Some(i) = factors.iter().position(|&n| n == 0) {
            return Err(Error::InvalidInput(format!("factor {} has dimension 0", i + 1)));
        }
        let mut seen = vec![false; factors.len()];
        for g in &groups {
            if g.members.is_empty() {
                return Err(Error::InvalidInput(format!("group {} is empty", g.name)));
            }
            for &m in &g.members {
                if m >= factors.len() {
                    return Err(Error::InvalidInput(format!(
                        "group {} references factor {} of {}",
                        g.name,
                        m + 1,
                        factors.len()
                    )));
                }
                if seen[m] {
                    return Err(Error::InvalidInput(format!(
                        "factor {} appears in more than one group",
                        m + 1
                    )));
                }
                seen[m] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("factor {} is not in any group", i + 1)));
        }
        Ok(Self { factors, groups })
    }

    /// Groups consecutive factors of equal dimension, e.g. `(P^1)^2 x P^3`
    /// gets the groups `P1 = {1, 2}` and `P3 = {3}`.
    pub fn grouped_by_dimension(factors: Vec<usize>) -> Result<Self> {
        let mut groups: Vec<FactorGroup> = Vec::new();
        for (i, &n) in factors.iter().enumerate() {
            let name = format!("P{n}");
            match groups.iter_mut().find(|g| g.name == name) {
                Some(g) => g.members.push(i),
                None => groups.push(FactorGroup { name, members: vec![i] }),
            }
        }
        Self::with_groups(factors, groups)
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn groups(&self) -> &[FactorGroup] {
        &self.groups
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().sum()
    }

    pub fn picard_rank(&self) -> usize {
        self.factors.len()
    }

    /// Number of homogeneous coordinates on each factor.
    pub fn coordinate_counts(&self) -> Vec<usize> {
        self.factors.iter().map(|n| n + 1).collect()
    }

    pub fn check_degree(&self, d: &MultiDegree) -> Result<()> {
        if d.len() != self.picard_rank() {
            return Err(Error::Dimension {
                expected: self.picard_rank(),
                got: d.len(),
            });
        }
        Ok(())
    }

    /// Coefficient of the point class in `prod_j (sum_i classes[j]_i h_i)`.
    pub fn intersection_number(&self, classes: &[MultiDegree]) -> Result<BigInt> {
        if classes.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                got: classes.len(),
            });
        }
        let mut prod = TruncatedProduct::one(&self.factors);
        for c in classes {
            self.check_degree(c)?;
            prod.mul_linear(c);
        }
        Ok(prod.top_coefficient())
    }

    /// `deg_L(F) = c_1(F) . L^{d-1}`.
    pub fn degree(&self, polarization: &Polarization, c1: &MultiDegree) -> Result<BigInt> {
        self.check_degree(polarization.degree())?;
        self.check_degree(c1)?;
        let mut classes = Vec::with_capacity(self.dim());
        classes.push(c1.clone());
        classes.extend(std::iter::repeat_n(polarization.degree().clone(), self.dim() - 1));
        self.intersection_number(&classes)
    }

    /// Returns the normalization exponent `k_E = ceil(slope / d)` with
    /// `d = deg_L O(1, 0, ..., 0)`, and the first Chern class of
    /// `E(-k_E, 0, ..., 0)`, whose degree lies in `[1 - d * rank, 0]`.
    pub fn normalize(
        &self,
        polarization: &Polarization,
        c1: &MultiDegree,
        rank: usize,
    ) -> Result<Normalization> {
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be positive".into()));
        }
        let unit = MultiDegree::unit(self.picard_rank(), 0);
        let d = self.degree(polarization, &unit)?;
        if d <= BigInt::zero() {
            return Err(Error::InvalidInput("polarization is not ample".into()));
        }
        let deg = self.degree(polarization, c1)?;
        let k = deg.div_ceil(&(BigInt::from(rank) * &d));
        let k_i64 = k
            .to_i64()
            .ok_or_else(|| Error::Overflow(format!("normalization exponent {k}")))?;
        let shift = (rank as i64)
            .checked_mul(k_i64)
            .ok_or_else(|| Error::Overflow("normalization twist".into()))?;
        let mut twisted = c1.clone();
        twisted.0[0] -= shift;
        let twisted_degree = deg - BigInt::from(rank) * &d * &k;
        Ok(Normalization {
            k: k_i64,
            unit_degree: d,
            c1: twisted,
            degree: twisted_degree,
        })
    }
}

impl fmt::Display for ProductSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|n| format!("P^{n}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub k: i64,
    /// `deg_L O(1, 0, ..., 0)`.
    pub unit_degree: BigInt,
    pub c1: MultiDegree,
    pub degree: BigInt,
}

/// `deg / rank` in lowest terms.
pub fn slope(degree: &BigInt, rank: usize) -> Result<BigRational> {
    if rank == 0 {
        return Err(Error::InvalidInput("slope of a rank 0 sheaf".into()));
    }
    Ok(BigRational::new(degree.clone(), BigInt::from(rank)))
}

/// An element of `Pic(X) = Z^l`; doubles as a line bundle label and a
/// divisor class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiDegree(pub Vec<i64>);

impl MultiDegree {
    pub fn new(components: Vec<i64>) -> Self {
        Self(components)
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn uniform(len: usize, value: i64) -> Self {
        Self(vec![value; len])
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut v = vec![0; len];
        v[index] = 1;
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn components(&self) -> &[i64] {
        &self.0
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scale(&self, s: i64) -> Self {
        Self(self.0.iter().map(|c| c * s).collect())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn group_sum(&self, group: &FactorGroup) -> i64 {
        group.members.iter().map(|&i| self.0[i]).sum()
    }
}

impl Add for &MultiDegree {
    type Output = MultiDegree;
    fn add(self, rhs: &MultiDegree) -> MultiDegree {
        debug_assert_eq!(self.len(), rhs.len());
        MultiDegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiDegree {
    type Output = MultiDegree;
    fn sub(self, rhs: &MultiDegree) -> MultiDegree {
        debug_assert_eq!(self.len(), rhs.len());
        MultiDegree(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &MultiDegree {
    type Output = MultiDegree;
    fn neg(self) -> MultiDegree {
        MultiDegree(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for MultiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An ample line bundle used to measure degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MultiDegree", into = "MultiDegree")]
pub struct Polarization(MultiDegree);

impl Polarization {
    pub fn new(degree: MultiDegree) -> Result<Self> {
        if degree.is_empty() || degree.0.iter().any(|&c| c < 1) {
            return Err(Error::InvalidInput(format!(
                "polarization {degree} is not ample (every component must be >= 1)"
            )));
        }
        Ok(Self(degree))
    }

    pub fn degree(&self) -> &MultiDegree {
        &self.0
    }
}

impl TryFrom<MultiDegree> for Polarization {
    type Error = Error;
    fn try_from(d: MultiDegree) -> Result<Self> {
        Self::new(d)
    }
}

impl From<Polarization> for MultiDegree {
    fn from(p: Polarization) -> Self {
        p.0
    }
}

/// Dense element of the truncated ring, indexed in mixed radix with the
/// last factor varying fastest.
struct TruncatedProduct<'a> {
    factors: &'a [usize],
    strides: Vec<usize>,
    coeffs: Vec<BigInt>,
}

impl<'a> TruncatedProduct<'a> {
    fn one(factors: &'a [usize]) -> Self {
        let mut strides = vec![1usize; factors.len()];
        for i in (0..factors.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * (factors[i + 1] + 1);
        }
        let size = strides[0] * (factors[0] + 1);
        let mut coeffs = vec![BigInt::zero(); size];
        coeffs[0] = BigInt::from(1);
        Self {
            factors,
            strides,
            coeffs,
        }
    }

    fn mul_linear(&mut self, class: &MultiDegree) {
        let mut next = vec![BigInt::zero(); self.coeffs.len()];
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, &ci) in class.components().iter().enumerate() {
                if ci == 0 {
                    continue;
                }
                let e = (idx / self.strides[i]) % (self.factors[i] + 1);
                if e == self.factors[i] {
                    // h_i^{n_i + 1} = 0
                    continue;
                }
                next[idx + self.strides[i]] += c * ci;
            }
        }
        self.coeffs = next;
    }

    fn top_coefficient(&self) -> BigInt {
        let top: usize = self
            .factors
            .iter()
            .zip(&self.strides)
            .map(|(n, s)| n * s)
            .sum();
        self.coeffs[top].clone()
    }
}
