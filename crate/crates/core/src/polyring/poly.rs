use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::modp::{mul_mod, pow_mod};
use super::ring::{CoordinateRing, Monomial};
use crate::error::{Error, Result};
use crate::space::MultiDegree;

/// A sparse polynomial: monomial -> nonzero integer coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl SparsePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// `None` for the zero polynomial; an error if the terms do not share a
    /// multidegree.
    pub fn multidegree(&self, ring: &CoordinateRing) -> Result<Option<MultiDegree>> {
        let mut deg: Option<MultiDegree> = None;
        for m in self.terms.keys() {
            let d = ring.multidegree(m);
            match &deg {
                None => deg = Some(d),
                Some(e) if *e == d => {}
                Some(e) => {
                    return Err(Error::InvalidInput(format!(
                        "polynomial is not multi-homogeneous: terms of degree {e} and {d}"
                    )))
                }
            }
        }
        Ok(deg)
    }

    /// Drops every term divisible by one of `zeros`, i.e. the restriction to
    /// the locus where those monomials vanish.
    pub fn reduce_modulo(&self, zeros: &[Monomial]) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !zeros.iter().any(|z| z.divides(m)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// If the polynomial is `c * base^e` with `c != 0`, `e >= 1`, returns `e`.
    pub fn pure_power_of(&self, base: &Monomial) -> Option<u32> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, _) = self.terms.iter().next()?;
        m.power_of(base)
    }

    /// Evaluates modulo `p` at `point` (indexed by variable).
    pub fn eval_mod(&self, point: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let mut v = bigint_mod(c, p);
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    v = mul_mod(v, pow_mod(point[i], e as u64, p), p);
                }
            }
            acc = (acc + v) % p;
        }
        acc
    }

    pub fn display(&self, ring: &CoordinateRing) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mono = ring.display_monomial(m);
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_one() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    /// Parses sums of terms like `a1_0*a2_3 - 2*a1_1^2 + 5`.
    pub fn parse(ring: &CoordinateRing, s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut out = Self::zero();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = BigInt::one();
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -sign;
                rest = r;
            } else if !first {
                return Err(Error::Parse(format!("expected + or - in {s:?}")));
            }
            first = false;
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (term, tail) = rest.split_at(end);
            rest = tail;
            if term.is_empty() {
                return Err(Error::Parse(format!("empty term in {s:?}")));
            }
            let mut coeff = sign;
            let mut mono = ring.one();
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {s:?}")));
                }
                if factor.chars().all(|c| c.is_ascii_digit()) {
                    let n: BigInt = factor
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient {factor:?}")))?;
                    coeff *= n;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<u32>()
                            .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                    ),
                    None => (factor, 1),
                };
                let v = ring.parse_variable(name)?;
                mono = mono.mul(&ring.var_pow(v, exp));
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

pub(crate) fn bigint_mod(c: &BigInt, p: u64) -> u64 {
    let r = c % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}
