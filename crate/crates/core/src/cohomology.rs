//! Cohomology dimensions of direct sums of line bundles on a product of
//! projective spaces, from the cohomology of `O(d)` on `P^n` and the
//! Kunneth decomposition.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{MultiDegree, ProductSpace};

/// `C(n, k)` for `n >= 0`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `h^i(P^n, O(d))`.
pub fn h_pn(n: usize, d: i64, i: usize) -> BigUint {
    let n64 = n as i64;
    if i == 0 {
        if d >= 0 {
            binomial((n64 + d) as u64, n as u64)
        } else {
            BigUint::zero()
        }
    } else if i == n {
        // Serre duality: h^n(O(d)) = h^0(O(-d-n-1))
        let dual = -d - n64 - 1;
        if dual >= 0 {
            binomial((dual + n64) as u64, n as u64)
        } else {
            BigUint::zero()
        }
    } else {
        BigUint::zero()
    }
}

/// The unique cohomological degree in which `O(d)` on `P^n` can be nonzero,
/// together with the dimension there, or `None` if all cohomology vanishes.
fn nonvanishing_degree(n: usize, d: i64) -> Option<(usize, BigUint)> {
    if d >= 0 {
        Some((0, h_pn(n, d, 0)))
    } else if d < -(n as i64) {
        Some((n, h_pn(n, d, n)))
    } else {
        None
    }
}

/// `h^p(X, O_X(D))` by Kunneth. Each factor contributes in at most one
/// degree, so the sum over compositions of `p` collapses to at most one
/// product; a factor with no cohomology at all kills the whole sum.
pub fn h_line(x: &ProductSpace, d: &MultiDegree, p: usize) -> Result<BigUint> {
    x.check_degree(d)?;
    let mut total_degree = 0usize;
    let mut value = BigUint::one();
    for (&n, &di) in x.factors().iter().zip(d.components()) {
        match nonvanishing_degree(n, di) {
            None => return Ok(BigUint::zero()),
            Some((q, h)) => {
                total_degree += q;
                value *= h;
            }
        }
    }
    Ok(if total_degree == p { value } else { BigUint::zero() })
}

/// A formal direct sum of line bundles `O(d_1)^{m_1} + ... + O(d_s)^{m_s}`,
/// kept sorted lexicographically by degree with equal degrees merged.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LineBundleSum {
    summands: Vec<(MultiDegree, u64)>,
}

#[derive(Serialize, Deserialize)]
struct SummandDoc {
    degree: MultiDegree,
    multiplicity: u64,
}

impl Serialize for LineBundleSum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let docs: Vec<SummandDoc> = self
            .summands
            .iter()
            .map(|(d, m)| SummandDoc {
                degree: d.clone(),
                multiplicity: *m,
            })
            .collect();
        docs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LineBundleSum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let docs = Vec::<SummandDoc>::deserialize(d)?;
        LineBundleSum::from_summands(docs.into_iter().map(|s| (s.degree, s.multiplicity)))
            .map_err(serde::de::Error::custom)
    }
}

impl LineBundleSum {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_summands<I>(summands: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MultiDegree, u64)>,
    {
        let mut merged: BTreeMap<MultiDegree, u64> = BTreeMap::new();
        let mut len: Option<usize> = None;
        for (d, m) in summands {
            if m == 0 {
                return Err(Error::InvalidInput(format!("summand {d} has multiplicity 0")));
            }
            match len {
                None => len = Some(d.len()),
                Some(l) if l != d.len() => {
                    return Err(Error::Dimension {
                        expected: l,
                        got: d.len(),
                    })
                }
                _ => {}
            }
            let slot = merged.entry(d).or_insert(0);
            *slot = slot
                .checked_add(m)
                .ok_or_else(|| Error::Overflow("summand multiplicity".into()))?;
        }
        Ok(Self {
            summands: merged.into_iter().collect(),
        })
    }

    pub fn single(d: MultiDegree, multiplicity: u64) -> Result<Self> {
        Self::from_summands([(d, multiplicity)])
    }

    pub fn summands(&self) -> &[(MultiDegree, u64)] {
        &self.summands
    }

    pub fn rank(&self) -> u64 {
        self.summands.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Length of the degree vectors, if there is at least one summand.
    pub fn picard_rank(&self) -> Option<usize> {
        self.summands.first().map(|(d, _)| d.len())
    }

    pub fn c1(&self, picard_rank: usize) -> MultiDegree {
        let mut acc = MultiDegree::zero(picard_rank);
        for (d, m) in &self.summands {
            acc = &acc + &d.scale(*m as i64);
        }
        acc
    }

    pub fn twist(&self, b: &MultiDegree) -> Self {
        Self {
            summands: self.summands.iter().map(|(d, m)| (d + b, *m)).collect(),
        }
    }

    pub fn dual(&self) -> Self {
        let mut summands: Vec<_> = self.summands.iter().map(|(d, m)| (-d, *m)).collect();
        summands.sort();
        Self { summands }
    }

    /// Summands repeated by multiplicity, in canonical order.
    pub fn expanded(&self) -> Vec<MultiDegree> {
        self.summands
            .iter()
            .flat_map(|(d, m)| std::iter::repeat_n(d.clone(), *m as usize))
            .collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        Self::from_summands(self.summands.iter().chain(&other.summands).cloned())
    }
}

impl fmt::Display for LineBundleSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(d, m)| {
                if *m == 1 {
                    format!("O{d}")
                } else {
                    format!("O{d}^{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `h^p` of a direct sum: multiplicity-weighted sum of `h_line`.
pub fn h_sum(x: &ProductSpace, g: &LineBundleSum, p: usize) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for (d, m) in g.summands() {
        total += h_line(x, d, p)? * *m;
    }
    Ok(total)
}

/// `Lambda^q G` for a sum of line bundles: one summand per `q`-element
/// multisubset, of degree the sum of the chosen degrees and multiplicity
/// `prod C(m_i, j_i)`. Returns the empty sum when `q > rank G`.
pub fn exterior_power(g: &LineBundleSum, q: u64) -> Result<LineBundleSum> {
    if q > g.rank() {
        return Ok(LineBundleSum::empty());
    }
    let Some(l) = g.picard_rank() else {
        // Lambda^0 of the zero bundle is the trivial line bundle, but with
        // no summands there is no Picard rank to label it with.
        return Ok(LineBundleSum::empty());
    };
    // states: (number chosen, degree) -> count
    let mut states: BTreeMap<(u64, MultiDegree), BigUint> = BTreeMap::new();
    states.insert((0, MultiDegree::zero(l)), BigUint::one());
    for (d, m) in g.summands() {
        let mut next: BTreeMap<(u64, MultiDegree), BigUint> = BTreeMap::new();
        for ((count, deg), ways) in &states {
            let max_j = (*m).min(q - count);
            for j in 0..=max_j {
                let key = (count + j, deg + &d.scale(j as i64));
                *next.entry(key).or_insert_with(BigUint::zero) += ways * binomial(*m, j);
            }
        }
        states = next;
    }
    let summands = states
        .into_iter()
        .filter(|((count, _), _)| *count == q)
        .map(|((_, deg), ways)| {
            ways.to_u64()
                .map(|w| (deg, w))
                .ok_or_else(|| Error::Overflow("exterior power multiplicity exceeds u64".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    LineBundleSum::from_summands(summands)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn md(v: &[i64]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    /// Number of monomials of degree `d` in `vars` variables.
    fn count_monomials(vars: usize, d: i64) -> u64 {
        if d < 0 {
            return 0;
        }
        fn rec(vars: usize, d: i64) -> u64 {
            if vars == 1 {
                return 1;
            }
            (0..=d).map(|e| rec(vars - 1, d - e)).sum()
        }
        rec(vars, d)
    }

    /// h^p via explicit enumeration of compositions `q_1 + ... + q_l = p`.
    fn h_line_compositions(factors: &[usize], d: &[i64], p: usize) -> BigUint {
        fn rec(factors: &[usize], d: &[i64], p: usize) -> BigUint {
            if factors.is_empty() {
                return if p == 0 { BigUint::one() } else { BigUint::zero() };
            }
            let mut total = BigUint::zero();
            for q in 0..=p.min(factors[0]) {
                total += h_pn(factors[0], d[0], q) * rec(&factors[1..], &d[1..], p - q);
            }
            total
        }
        rec(factors, d, p)
    }

    #[test]
    fn h_pn_examples() {
        assert_eq!(h_pn(3, 2, 0), 10u32.into());
        for i in 0..=2 {
            assert!(h_pn(2, -1, i).is_zero());
        }
        assert_eq!(h_pn(2, -4, 2), 3u32.into());
        assert!(h_pn(2, 5, 3).is_zero());
    }

    #[test]
    fn h_pn_matches_monomial_count() {
        for n in 1..=4usize {
            for d in -10i64..=10 {
                for i in 0..=n {
                    let expected = if i == 0 {
                        count_monomials(n + 1, d)
                    } else if i == n {
                        count_monomials(n + 1, -d - n as i64 - 1)
                    } else {
                        0
                    };
                    assert_eq!(h_pn(n, d, i), expected.into(), "n={n} d={d} i={i}");
                }
            }
        }
    }

    #[test]
    fn h_line_examples() {
        let x = ProductSpace::new(vec![1, 1]).unwrap();
        assert_eq!(h_line(&x, &md(&[1, 2]), 0).unwrap(), 6u32.into());
        let y = ProductSpace::new(vec![1, 3]).unwrap();
        assert_eq!(h_line(&y, &md(&[-2, 0]), 1).unwrap(), 1u32.into());
        for n in 1..=4 {
            let z = ProductSpace::new(vec![1, n]).unwrap();
            for d in -6..=6 {
                for p in 0..=z.dim() {
                    assert!(h_line(&z, &md(&[-1, d]), p).unwrap().is_zero());
                }
            }
        }
        assert!(h_line(&y, &md(&[1]), 0).is_err());
    }

    #[test]
    fn h_sum_examples() {
        let y = ProductSpace::new(vec![1, 3]).unwrap();
        let triv = LineBundleSum::single(md(&[0, 0]), 8).unwrap();
        assert_eq!(h_sum(&y, &triv, 0).unwrap(), 8u32.into());
        let neg = LineBundleSum::single(md(&[-1, -1]), 2).unwrap();
        assert!(h_sum(&y, &neg, 0).unwrap().is_zero());
        let x = ProductSpace::new(vec![1, 1]).unwrap();
        let g = LineBundleSum::from_summands([(md(&[1, 0]), 1), (md(&[0, 1]), 1)]).unwrap();
        assert_eq!(h_sum(&x, &g, 0).unwrap(), 4u32.into());
    }

    #[test]
    fn exterior_power_examples() {
        let a = md(&[2, -1]);
        let b = md(&[0, 3]);
        let g = LineBundleSum::from_summands([(a.clone(), 1), (b.clone(), 1)]).unwrap();
        assert_eq!(
            exterior_power(&g, 2).unwrap(),
            LineBundleSum::single(&a + &b, 1).unwrap()
        );
        assert_eq!(exterior_power(&g, 1).unwrap(), g);
        assert!(exterior_power(&g, 3).unwrap().is_empty());
        let d = md(&[1, 1]);
        let g3 = LineBundleSum::single(d.clone(), 3).unwrap();
        assert_eq!(
            exterior_power(&g3, 2).unwrap(),
            LineBundleSum::single(d.scale(2), 3).unwrap()
        );
    }

    #[test]
    fn sums_are_canonical() {
        let g = LineBundleSum::from_summands([
            (md(&[1, 0]), 2),
            (md(&[0, 1]), 1),
            (md(&[1, 0]), 3),
        ])
        .unwrap();
        assert_eq!(g.summands(), &[(md(&[0, 1]), 1), (md(&[1, 0]), 5)]);
        assert!(LineBundleSum::from_summands([(md(&[1, 0]), 0)]).is_err());
        assert!(LineBundleSum::from_summands([(md(&[1, 0]), 1), (md(&[1]), 1)]).is_err());
        assert_eq!(g.c1(2), md(&[5, 1]));
        assert_eq!(g.to_string(), "O(0,1) + O(1,0)^5");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn serre_duality_per_factor(n in 1usize..=5, d in -12i64..=12, i in 0usize..=5) {
            prop_assume!(i <= n);
            prop_assert_eq!(h_pn(n, d, i), h_pn(n, -d - n as i64 - 1, n - i));
        }

        #[test]
        fn kunneth_total_dimension(
            factors in prop::collection::vec(1usize..=4, 1..=4),
            d in prop::collection::vec(-8i64..=8, 4),
        ) {
            let x = ProductSpace::new(factors.clone()).unwrap();
            let d = MultiDegree::new(d[..factors.len()].to_vec());
            let total: BigUint = (0..=x.dim()).map(|p| h_line(&x, &d, p).unwrap()).sum();
            let product: BigUint = factors
                .iter()
                .zip(d.components())
                .map(|(&n, &di)| (0..=n).map(|q| h_pn(n, di, q)).sum::<BigUint>())
                .product();
            prop_assert_eq!(total, product);
        }

        #[test]
        fn pruned_kunneth_matches_composition_sum(
            factors in prop::collection::vec(1usize..=3, 1..=4),
            d in prop::collection::vec(-6i64..=4, 4),
        ) {
            let x = ProductSpace::new(factors.clone()).unwrap();
            let dv = &d[..factors.len()];
            for p in 0..=x.dim() {
                prop_assert_eq!(
                    h_line(&x, &MultiDegree::new(dv.to_vec()), p).unwrap(),
                    h_line_compositions(&factors, dv, p)
                );
            }
        }

        #[test]
        fn negative_total_kills_h0_h1_without_deep_negative_factor(
            factors in prop::collection::vec(1usize..=4, 1..=4),
            d in prop::collection::vec(-6i64..=6, 4),
        ) {
            let x = ProductSpace::new(factors.clone()).unwrap();
            let mut d = d[..factors.len()].to_vec();
            let total: i64 = d.iter().sum();
            if total >= 0 {
                d[0] -= total + 1;
            }
            let d = MultiDegree::new(d);
            prop_assert!(h_line(&x, &d, 0).unwrap().is_zero());
            let deep = factors.iter().zip(d.components()).any(|(&n, &di)| di < -(n as i64));
            if !deep {
                prop_assert!(h_line(&x, &d, 1).unwrap().is_zero());
            }
        }

        #[test]
        fn exterior_power_rank_law(
            summands in prop::collection::vec((prop::collection::vec(-2i64..=2, 2), 1u64..=4), 1..=4),
        ) {
            let g = LineBundleSum::from_summands(summands.into_iter().map(|(d, m)| (MultiDegree::new(d), m))).unwrap();
            let r = g.rank();
            // coefficients of prod (1 + x)^{m_i} = (1 + x)^r
            for q in 0..=r + 1 {
                let lam = exterior_power(&g, q).unwrap();
                prop_assert_eq!(BigUint::from(lam.rank()), binomial(r, q));
            }
        }
    }

    #[test]
    fn h0_matches_multimonomial_count() {
        // every X with dim <= 4 and every D in [0, 3]^l
        fn spaces(dim_left: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if !acc.is_empty() {
                out.push(acc.clone());
            }
            for n in 1..=dim_left {
                acc.push(n);
                spaces(dim_left - n, acc, out);
                acc.pop();
            }
        }
        let mut all = Vec::new();
        spaces(4, &mut Vec::new(), &mut all);
        for factors in all {
            let x = ProductSpace::new(factors.clone()).unwrap();
            let l = factors.len();
            let mut d = vec![0i64; l];
            loop {
                let count: u64 = factors
                    .iter()
                    .zip(&d)
                    .map(|(&n, &di)| count_monomials(n + 1, di))
                    .product();
                assert_eq!(h_line(&x, &MultiDegree::new(d.clone()), 0).unwrap(), count.into());
                let mut i = 0;
                while i < l && d[i] == 3 {
                    d[i] = 0;
                    i += 1;
                }
                if i == l {
                    break;
                }
                d[i] += 1;
            }
        }
    }
}
