//! Symbolic maximal-rank certificates.
//!
//! A [`TriangularWitness`] for a pivot monomial `v` is a `k x k` submatrix
//! which, once every monomial of a context list is set to zero, is upper
//! triangular with diagonal entries `c * v^e`, where `v = 1` admits
//! constants. It proves rank `>= k` on the locus where the context monomials
//! vanish and `v` does not.
//!
//! A [`RankCover`] chains witnesses: the `j`-th witness is checked in the
//! context of pivots `1..j`. The strata `{v_1 = .. = v_{j-1} = 0, v_j != 0}`
//! exhaust every point where some pivot is nonzero, so if the pivots have no
//! common zero on `X`, the matrix has rank `>= k` everywhere.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::matrix::MonadMatrix;
use super::poly::SparsePoly;
use super::ring::{CoordinateRing, Monomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangularWitness {
    pub pivot: Monomial,
    /// Diagonal cells are `(rows[i], cols[i])`; cells `(rows[i], cols[j])`
    /// with `i > j` reduce to zero.
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub exponents: Vec<u32>,
}

impl TriangularWitness {
    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Independent re-check against `m` under `context`.
    pub fn verify(&self, m: &MonadMatrix, context: &[Monomial]) -> bool {
        let k = self.rows.len();
        if self.cols.len() != k || self.exponents.len() != k || k == 0 {
            return false;
        }
        let distinct = |v: &[usize]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
        if !distinct(&self.rows) || !distinct(&self.cols) {
            return false;
        }
        if self.rows.iter().any(|&r| r >= m.rows()) || self.cols.iter().any(|&c| c >= m.cols()) {
            return false;
        }
        for i in 0..k {
            let diag = m.get(self.rows[i], self.cols[i]).reduce_modulo(context);
            if diag.pure_power_of(&self.pivot) != Some(self.exponents[i]) {
                return false;
            }
            for j in 0..i {
                if !m.get(self.rows[i], self.cols[j]).reduce_modulo(context).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// Searches for a `k x k` triangular witness for `pivot` under `context`.
///
/// Ladder-shaped maps put each pivot on a shifted diagonal, so the search
/// matches along the shorter side of the matrix (leftmost or rightmost free
/// candidate, scanning forwards or backwards), slides a window of `k`
/// matched cells, and keeps the first window that is triangular in either
/// orientation.
pub fn triangular_witness(
    m: &MonadMatrix,
    pivot: &Monomial,
    k: usize,
    context: &[Monomial],
) -> Option<TriangularWitness> {
    if k == 0 || k > m.rows().min(m.cols()) {
        return None;
    }
    let reduced: Vec<Vec<SparsePoly>> = (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m.get(r, c).reduce_modulo(context)).collect())
        .collect();
    let power = |r: usize, c: usize| reduced[r][c].pure_power_of(pivot);
    let by_rows = m.rows() <= m.cols();
    let (outer, inner) = if by_rows {
        (m.rows(), m.cols())
    } else {
        (m.cols(), m.rows())
    };
    let cell = |o: usize, i: usize| if by_rows { (o, i) } else { (i, o) };

    for forward in [true, false] {
        for leftmost in [true, false] {
            let mut used = vec![false; inner];
            let mut pairs: Vec<(usize, usize, u32)> = Vec::new();
            let order: Vec<usize> = if forward {
                (0..outer).collect()
            } else {
                (0..outer).rev().collect()
            };
            for o in order {
                let candidates: Vec<usize> = (0..inner)
                    .filter(|&i| !used[i] && power(cell(o, i).0, cell(o, i).1).is_some())
                    .collect();
                let pick = if leftmost {
                    candidates.first()
                } else {
                    candidates.last()
                };
                if let Some(&i) = pick {
                    used[i] = true;
                    let (r, c) = cell(o, i);
                    pairs.push((r, c, power(r, c).unwrap()));
                }
            }
            if pairs.len() < k {
                continue;
            }
            for start in 0..=pairs.len() - k {
                let window = &pairs[start..start + k];
                for sort_by_col in [true, false] {
                    let mut w = window.to_vec();
                    if sort_by_col {
                        w.sort_by_key(|p| p.1);
                    } else {
                        w.sort_by_key(|p| p.0);
                    }
                    for reversed in [false, true] {
                        if reversed {
                            w.reverse();
                        }
                        let lower_zero = (0..k).all(|i| {
                            (0..i).all(|j| reduced[w[i].0][w[j].1].is_zero())
                        });
                        if lower_zero {
                            let witness = TriangularWitness {
                                pivot: pivot.clone(),
                                rows: w.iter().map(|p| p.0).collect(),
                                cols: w.iter().map(|p| p.1).collect(),
                                exponents: w.iter().map(|p| p.2).collect(),
                            };
                            debug_assert!(witness.verify(m, context));
                            return Some(witness);
                        }
                    }
                }
            }
        }
    }
    None
}

/// `m` divided by the gcd of its exponents, e.g. `u^3 -> u`,
/// `x^2 y^2 -> x y`.
fn root(m: &Monomial) -> Monomial {
    let g = m.exponents().iter().fold(0u32, |acc, &e| acc.gcd(&e));
    if g <= 1 {
        return m.clone();
    }
    Monomial(m.exponents().iter().map(|e| e / g).collect())
}

/// If every pivot vanishes at some point of `X`, returns the support of such
/// a point (one nonzero coordinate per factor).
pub fn common_zero(ring: &CoordinateRing, pivots: &[Monomial]) -> Option<Vec<usize>> {
    // per pivot and factor: None if the pivot has no variable on that factor,
    // Some(c) if its only variable there is coordinate c, and pivots with two
    // or more variables on one factor can be dropped: they vanish at every
    // point with a single nonzero coordinate on that factor.
    let l = ring.num_factors();
    let mut profiles: Vec<Vec<Option<usize>>> = Vec::new();
    'pivots: for p in pivots {
        let mut prof = vec![None; l];
        for (f, slot) in prof.iter_mut().enumerate() {
            let coords: Vec<usize> = ring
                .factor_range(f)
                .enumerate()
                .filter(|(_, idx)| p.exponents()[*idx] > 0)
                .map(|(c, _)| c)
                .collect();
            match coords.len() {
                0 => {}
                1 => *slot = Some(coords[0]),
                _ => continue 'pivots,
            }
        }
        profiles.push(prof);
    }
    fn search(
        ring: &CoordinateRing,
        f: usize,
        alive: &[&Vec<Option<usize>>],
        choice: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if alive.iter().any(|p| p[f..].iter().all(Option::is_none)) {
            // some pivot is nonzero whatever the remaining coordinates are
            return None;
        }
        if f == ring.num_factors() {
            return Some(choice.clone());
        }
        for c in 0..=ring.factors()[f] {
            let next: Vec<&Vec<Option<usize>>> = alive
                .iter()
                .filter(|p| p[f].is_none_or(|pc| pc == c))
                .copied()
                .collect();
            choice.push(c);
            if let Some(found) = search(ring, f + 1, &next, choice) {
                return Some(found);
            }
            choice.pop();
        }
        None
    }
    let alive: Vec<&Vec<Option<usize>>> = profiles.iter().collect();
    search(ring, 0, &alive, &mut Vec::new())
}

/// A chain of triangular witnesses for one map and target rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCover {
    pub target_rank: usize,
    pub steps: Vec<TriangularWitness>,
    /// Candidate pivots for which no witness was found.
    pub unused: Vec<Monomial>,
    /// Every variable occurs in some pivot.
    pub variables_covered: bool,
    /// Support of a point where all pivots vanish, if one exists.
    pub uncovered_point: Option<Vec<usize>>,
}

impl RankCover {
    /// Rank `>= target_rank` holds at every point of `X`.
    pub fn is_complete(&self) -> bool {
        self.target_rank == 0 || (!self.steps.is_empty() && self.uncovered_point.is_none())
    }

    pub fn pivots(&self) -> Vec<Monomial> {
        self.steps.iter().map(|w| w.pivot.clone()).collect()
    }

    /// Re-checks every step in its context and the no-common-zero property.
    pub fn verify(&self, m: &MonadMatrix) -> bool {
        let mut context = Vec::new();
        for w in &self.steps {
            if w.size() != self.target_rank || !w.verify(m, &context) {
                return false;
            }
            context.push(w.pivot.clone());
        }
        common_zero(m.ring(), &context) == self.uncovered_point
    }
}

/// Builds a witness chain greedily. Candidate pivots are the roots of
/// single-term entries in row-major order of first appearance; each round
/// appends every candidate that has a witness in the current context.
pub fn rank_cover(m: &MonadMatrix, k: usize) -> RankCover {
    let ring = m.ring();
    let mut candidates: Vec<Monomial> = Vec::new();
    let mut seen = BTreeSet::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let e = m.get(r, c);
            if e.num_terms() == 1 {
                let (mono, _) = e.terms().next().unwrap();
                let base = root(mono);
                if seen.insert(base.clone()) {
                    candidates.push(base);
                }
            }
        }
    }
    let mut steps: Vec<TriangularWitness> = Vec::new();
    let mut context: Vec<Monomial> = Vec::new();
    let mut remaining = candidates;
    if k > 0 {
        loop {
            let mut progressed = false;
            let mut still = Vec::new();
            for cand in remaining {
                match triangular_witness(m, &cand, k, &context) {
                    Some(w) => {
                        context.push(cand);
                        steps.push(w);
                        progressed = true;
                    }
                    None => still.push(cand),
                }
            }
            remaining = still;
            if !progressed || remaining.is_empty() {
                break;
            }
        }
    }
    let mut covered = vec![false; ring.num_vars()];
    for p in &context {
        for i in p.support() {
            covered[i] = true;
        }
    }
    RankCover {
        target_rank: k,
        uncovered_point: common_zero(ring, &context),
        steps,
        unused: remaining,
        variables_covered: covered.iter().all(|&c| c),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::MultiDegree;

    fn md(v: &[i64]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    fn matrix(ring: &CoordinateRing, rows: &[&[&str]], row_deg: &[i64], col_deg: &[i64]) -> MonadMatrix {
        let entries = rows
            .iter()
            .map(|r| r.iter().map(|s| SparsePoly::parse(ring, s).unwrap()).collect())
            .collect::<Vec<Vec<_>>>();
        MonadMatrix::new(
            ring.clone(),
            vec![md(row_deg); rows.len()],
            vec![md(col_deg); rows[0].len()],
            entries,
        )
        .unwrap()
    }

    #[test]
    fn zero_matrix_has_no_witness() {
        let ring = CoordinateRing::from_factors(vec![1, 1]);
        let z = MonadMatrix::zeros(ring.clone(), vec![md(&[1, 1]); 2], vec![md(&[0, 0]); 3]);
        let v = ring.var(ring.parse_variable("a1_0").unwrap());
        assert!(triangular_witness(&z, &v, 1, &[]).is_none());
        let cover = rank_cover(&z, 2);
        assert!(!cover.is_complete());
    }

    #[test]
    fn ladder_witness_needs_context_in_the_middle() {
        // k = 2 ladder over three coordinates of P^2: [x0 x1 x2 0; 0 x0 x1 x2]
        let ring = CoordinateRing::from_factors(vec![2]);
        let m = matrix(
            &ring,
            &[&["a1_0", "a1_1", "a1_2", "0"], &["0", "a1_0", "a1_1", "a1_2"]],
            &[1],
            &[0],
        );
        let x: Vec<Monomial> = (0..3).map(|c| ring.var(ring.parse_variable(&format!("a1_{c}")).unwrap())).collect();
        let w0 = triangular_witness(&m, &x[0], 2, &[]).unwrap();
        assert_eq!((w0.rows.clone(), w0.cols.clone()), (vec![0, 1], vec![0, 1]));
        assert!(w0.verify(&m, &[]));
        assert!(triangular_witness(&m, &x[1], 2, &[]).is_none());
        let w1 = triangular_witness(&m, &x[1], 2, &x[..1]).unwrap();
        assert!(w1.verify(&m, &x[..1]));
        assert!(!w1.verify(&m, &[]));
        let cover = rank_cover(&m, 2);
        assert!(cover.is_complete());
        assert!(cover.variables_covered);
        assert!(cover.verify(&m));
    }

    #[test]
    fn common_zero_detection() {
        let ring = CoordinateRing::from_factors(vec![1, 1]);
        let v = |s: &str| ring.var(ring.parse_variable(s).unwrap());
        let all = vec![v("a1_0"), v("a1_1")];
        assert_eq!(common_zero(&ring, &all), None);
        let one = vec![v("a1_0")];
        assert_eq!(common_zero(&ring, &one), Some(vec![1, 0]));
        let mixed = vec![v("a1_0").mul(&v("a2_0")), v("a1_1"), v("a2_1")];
        assert_eq!(common_zero(&ring, &mixed), None);
        let gap = vec![v("a1_0").mul(&v("a2_0")), v("a1_1")];
        assert_eq!(common_zero(&ring, &gap), Some(vec![0, 1]));
        assert!(common_zero(&ring, &[]).is_some());
    }

    #[test]
    fn constant_pivot_covers_everything() {
        let ring = CoordinateRing::from_factors(vec![1, 1]);
        let m = matrix(&ring, &[&["1", "0"], &["0", "3"]], &[0, 0], &[0, 0]);
        let w = triangular_witness(&m, &ring.one(), 2, &[]).unwrap();
        assert_eq!(w.exponents, vec![0, 0]);
        let cover = rank_cover(&m, 2);
        assert!(cover.is_complete());
        assert_eq!(common_zero(&ring, &[ring.one()]), None);
    }

    #[test]
    fn roots_of_powers() {
        let ring = CoordinateRing::from_factors(vec![1, 1]);
        let u = ring.var(ring.parse_variable("a1_0").unwrap());
        let u3 = u.mul(&u).mul(&u);
        assert_eq!(root(&u3), u);
        let w = ring.var(ring.parse_variable("a2_1").unwrap());
        assert_eq!(root(&u.mul(&u).mul(&w)), u.mul(&u).mul(&w));
    }
}
