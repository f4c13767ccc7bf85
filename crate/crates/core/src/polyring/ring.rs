use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{MultiDegree, ProductSpace};

/// A homogeneous coordinate `a{factor}_{coord}` (factor 1-based in names,
/// 0-based here).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub factor: usize,
    pub coord: usize,
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}_{}", self.factor + 1, self.coord)
    }
}

/// The multigraded coordinate ring of a product of projective spaces:
/// factor `i` contributes the variables `a{i}_0 .. a{i}_{n_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateRing {
    factors: Vec<usize>,
    offsets: Vec<usize>,
}

impl CoordinateRing {
    pub fn new(space: &ProductSpace) -> Self {
        Self::from_factors(space.factors().to_vec())
    }

    pub fn from_factors(factors: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(factors.len());
        let mut acc = 0;
        for n in &factors {
            offsets.push(acc);
            acc += n + 1;
        }
        Self { factors, offsets }
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn num_vars(&self) -> usize {
        self.offsets.last().map_or(0, |o| o + self.factors.last().unwrap() + 1)
    }

    pub fn var_index(&self, v: Variable) -> usize {
        debug_assert!(v.coord <= self.factors[v.factor]);
        self.offsets[v.factor] + v.coord
    }

    pub fn variable(&self, index: usize) -> Variable {
        let factor = match self.offsets.binary_search(&index) {
            Ok(f) => f,
            Err(f) => f - 1,
        };
        Variable {
            factor,
            coord: index - self.offsets[factor],
        }
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        (0..self.num_vars()).map(|i| self.variable(i))
    }

    pub fn factor_range(&self, factor: usize) -> std::ops::Range<usize> {
        self.offsets[factor]..self.offsets[factor] + self.factors[factor] + 1
    }

    pub fn one(&self) -> Monomial {
        Monomial(vec![0; self.num_vars()])
    }

    pub fn var(&self, v: Variable) -> Monomial {
        self.var_pow(v, 1)
    }

    pub fn var_pow(&self, v: Variable, e: u32) -> Monomial {
        let mut m = self.one();
        m.0[self.var_index(v)] = e;
        m
    }

    /// Product of one coordinate per factor.
    pub fn segre_monomial(&self, coords: &[usize]) -> Result<Monomial> {
        if coords.len() != self.num_factors() {
            return Err(Error::Dimension {
                expected: self.num_factors(),
                got: coords.len(),
            });
        }
        let mut m = self.one();
        for (factor, &c) in coords.iter().enumerate() {
            if c > self.factors[factor] {
                return Err(Error::InvalidInput(format!(
                    "coordinate {c} out of range on factor {}",
                    factor + 1
                )));
            }
            m.0[self.offsets[factor] + c] += 1;
        }
        Ok(m)
    }

    pub fn multidegree(&self, m: &Monomial) -> MultiDegree {
        MultiDegree::new(
            (0..self.num_factors())
                .map(|f| self.factor_range(f).map(|i| m.0[i] as i64).sum())
                .collect(),
        )
    }

    pub fn parse_variable(&self, s: &str) -> Result<Variable> {
        let bad = || Error::Parse(format!("bad variable name {s:?}, expected a<factor>_<coord>"));
        let rest = s.strip_prefix('a').ok_or_else(bad)?;
        let (f, c) = rest.split_once('_').ok_or_else(bad)?;
        let factor: usize = f.parse().map_err(|_| bad())?;
        let coord: usize = c.parse().map_err(|_| bad())?;
        if factor == 0 || factor > self.num_factors() || coord > self.factors[factor - 1] {
            return Err(Error::Parse(format!("variable {s} does not exist on this space")));
        }
        Ok(Variable {
            factor: factor - 1,
            coord,
        })
    }

    pub fn display_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let v = self.variable(i);
                if e == 1 {
                    v.to_string()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

/// Exponent vector over all variables of a [`CoordinateRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Indices of the variables that occur.
    pub fn support(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// If `self = base^e` for some `e >= 1`, returns `e`. The constant
    /// monomial is `1^0`.
    pub fn power_of(&self, base: &Monomial) -> Option<u32> {
        if base.is_one() {
            return self.is_one().then_some(0);
        }
        let mut exp: Option<u32> = None;
        for (&s, &b) in self.0.iter().zip(&base.0) {
            match (s, b) {
                (0, 0) => {}
                (_, 0) | (0, _) => return None,
                (s, b) => {
                    if s % b != 0 {
                        return None;
                    }
                    let q = s / b;
                    match exp {
                        None => exp = Some(q),
                        Some(e) if e == q => {}
                        Some(_) => return None,
                    }
                }
            }
        }
        exp
    }
}
