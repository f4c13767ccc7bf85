//! Oracle suites run by `monadkit selftest`: each engine is compared with an
//! independent brute-force computation.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::certify::{vanishing_all_twists, vanishing_explicit, TwistConstraint};
use crate::cohomology::{h_line, h_pn, LineBundleSum};
use crate::monad::{build_section3, build_section4, nu, SegreIndexer};
use crate::space::{MultiDegree, ProductSpace};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            cases: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(what());
            }
        }
    }

    fn finish(self) -> SuiteResult {
        SuiteResult {
            name: self.name.to_string(),
            cases: self.cases,
            failures: self.failures,
            first_failure: self.first_failure,
        }
    }
}

/// Number of integer vectors of length `len` with entries in `[lo, hi]`
/// summing to `total`, by enumeration.
fn count_vectors(len: usize, lo: i64, hi: i64, total: i64) -> u64 {
    if len == 0 {
        return u64::from(total == 0);
    }
    (lo..=hi).map(|e| count_vectors(len - 1, lo, hi, total - e)).sum()
}

/// Cech count on `P^n`: `H^0` is spanned by monomials of degree `d`, `H^n`
/// by Laurent monomials with every exponent negative; nothing in between.
pub fn h_pn_by_monomials(n: usize, d: i64, i: usize) -> u64 {
    let span = d.unsigned_abs() as i64 + n as i64 + 1;
    if i == 0 {
        if d < 0 {
            return 0;
        }
        count_vectors(n + 1, 0, d, d)
    } else if i == n {
        count_vectors(n + 1, -span, -1, d)
    } else {
        0
    }
}

fn cohomology_suite() -> SuiteResult {
    let mut t = Tally::new("h_pn against monomial counts (n <= 4, |d| <= 10)");
    for n in 1..=4 {
        for d in -10..=10 {
            for i in 0..=n {
                let got = h_pn(n, d, i);
                let want = BigUint::from(h_pn_by_monomials(n, d, i));
                t.check(got == want, || format!("n={n} d={d} i={i}: {got} != {want}"));
            }
        }
    }
    t.finish()
}

fn duality_kunneth_suite(seed: u64) -> SuiteResult {
    let mut t = Tally::new("Serre duality and Kunneth totals (1000 random line bundles)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..1000 {
        let l = rng.gen_range(1..=4);
        let factors: Vec<usize> = (0..l).map(|_| rng.gen_range(1..=4)).collect();
        let d: Vec<i64> = (0..l).map(|_| rng.gen_range(-8..=8)).collect();
        let x = ProductSpace::new(factors.clone()).expect("valid factors");
        let dim = x.dim();
        let canonical: Vec<i64> = d.iter().zip(&factors).map(|(di, &n)| -di - n as i64 - 1).collect();
        let md = MultiDegree::new(d.clone());
        let dual = MultiDegree::new(canonical);
        let mut ok = true;
        for p in 0..=dim {
            ok &= h_line(&x, &md, p).ok() == h_line(&x, &dual, dim - p).ok();
        }
        let total: BigUint = (0..=dim).filter_map(|p| h_line(&x, &md, p).ok()).sum();
        let product: BigUint = factors
            .iter()
            .zip(&d)
            .map(|(&n, &di)| (0..=n).map(|q| h_pn(n, di, q)).sum::<BigUint>())
            .product();
        ok &= total == product;
        t.check(ok, || format!("X={factors:?} d={d:?}"));
    }
    t.finish()
}

/// Brute force over `B` in `[-5, 5]^l` and explicit subsets.
pub fn vanishing_by_box(
    x: &ProductSpace,
    middle: &LineBundleSum,
    q: u64,
    constraint: TwistConstraint,
) -> bool {
    let l = x.picard_rank();
    let items = middle.expanded();
    let mut subsets: Vec<MultiDegree> = Vec::new();
    let n = items.len();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as u64 != q {
            continue;
        }
        let t = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(MultiDegree::zero(l), |acc, i| &acc + &items[i]);
        subsets.push(t);
    }
    let mut b = vec![-5i64; l];
    loop {
        let bd = MultiDegree::new(b.clone());
        if constraint.admits(x, &bd) && subsets.iter().any(|t| (&bd + t).is_nonnegative()) {
            return false;
        }
        let mut i = 0;
        while i < l && b[i] == 5 {
            b[i] = -5;
            i += 1;
        }
        if i == l {
            return true;
        }
        b[i] += 1;
    }
}

fn vanishing_suite(seed: u64) -> SuiteResult {
    let mut t = Tally::new("vanishing decision against box enumeration (200 random instances)");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..200 {
        let l = rng.gen_range(1..=3);
        let factors: Vec<usize> = (0..l).map(|_| rng.gen_range(1..=3)).collect();
        let x = if rng.gen_bool(0.5) {
            ProductSpace::new(factors.clone())
        } else {
            ProductSpace::grouped_by_dimension(factors.clone())
        }
        .expect("valid factors");
        let rank = rng.gen_range(2..=6);
        let summands: Vec<(MultiDegree, u64)> = (0..rank)
            .map(|_| (MultiDegree::new((0..l).map(|_| rng.gen_range(-1..=1)).collect()), 1))
            .collect();
        let middle = LineBundleSum::from_summands(summands).expect("valid summands");
        let constraint = if rng.gen_bool(0.5) {
            TwistConstraint::PerGroupNegative
        } else {
            TwistConstraint::TotalNegative
        };
        let q = rng.gen_range(1..middle.rank());
        let dp = vanishing_all_twists(&x, &middle, q, constraint).map(|r| r.pass);
        let explicit = vanishing_explicit(&x, &middle, q, constraint);
        let brute = vanishing_by_box(&x, &middle, q, constraint);
        t.check(dp == Ok(brute) && explicit == Some(brute), || {
            format!("X={factors:?} M={middle} q={q} {constraint:?}: dp={dp:?} box={brute}")
        });
    }
    t.finish()
}

fn construction_suite() -> SuiteResult {
    let mut t = Tally::new("Segre indexing, nu and symbolic composites");
    for copies in [vec![2], vec![1, 1], vec![2, 1], vec![1, 0, 1], vec![3]] {
        let factors = crate::monad::factors_from_copies(&copies);
        let seg = SegreIndexer::new(&factors).expect("small");
        let rt = (0..seg.total()).all(|i| seg.index(&seg.tuple(i)) == i);
        t.check(rt, || format!("round trip for {factors:?}"));
        let nu_ok = nu(&copies).ok() == seg.nu().ok().map(|v| v as u64);
        t.check(nu_ok, || format!("nu for {copies:?}"));
    }
    for k in 1..=2 {
        for factors in [vec![1, 1], vec![1, 3]] {
            let ok = build_section3(&factors, k)
                .and_then(|s| s.composite())
                .is_ok_and(|c| c.is_zero());
            t.check(ok, || format!("section3 composite {factors:?} k={k}"));
        }
        let ok = build_section4(1, 1, 1, 1, 2, 1, k)
            .and_then(|s| s.composite())
            .is_ok_and(|c| c.is_zero());
        t.check(ok, || format!("section4 composite k={k}"));
    }
    t.finish()
}

pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    vec![
        cohomology_suite(),
        duality_kunneth_suite(seed),
        vanishing_suite(seed),
        construction_suite(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(h_pn_by_monomials(1, 2, 0), 3);
        assert_eq!(h_pn_by_monomials(1, -3, 1), 2);
        assert_eq!(h_pn_by_monomials(3, -4, 3), 1);
        assert_eq!(h_pn_by_monomials(2, -1, 2), 0);
    }

    #[test]
    fn suites_pass() {
        for s in run_all(0) {
            assert!(s.passed(), "{s:?}");
        }
    }
}
