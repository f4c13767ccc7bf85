use rayon::join;
use serde::{Deserialize, Serialize};

use super::MonadSpec;
use crate::error::Result;
use crate::polyring::{
    rank_at_random_points, rank_cover, DegreeMismatch, MonadMatrix, RankCover, RankEvidence,
};

/// Mismatches listed in a report; the total is always given.
const MISMATCH_SAMPLE: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonadVerdict {
    Valid,
    Invalid,
}

/// One triangular witness in readable form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub pivot: String,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapReport {
    pub rows: usize,
    pub cols: usize,
    pub target_rank: usize,
    /// Witnesses in chain order; each is checked with the earlier pivots
    /// set to zero.
    pub witnesses: Vec<WitnessRecord>,
    pub variables_covered: bool,
    /// Support of a point where every pivot vanishes, if any.
    pub uncovered_point: Option<Vec<usize>>,
    pub maximal_rank_proved: bool,
    pub evidence: RankEvidence,
    pub degree_mismatch_count: usize,
    pub degree_mismatches: Vec<DegreeMismatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonadReport {
    pub composite_zero: bool,
    /// Positions `(row, col)` of nonzero entries of `g . f`.
    pub composite_nonzero: Vec<(usize, usize)>,
    pub map_f: MapReport,
    pub map_g: MapReport,
    /// Every entry has the degree its row and column labels require.
    pub grading_consistent: bool,
    /// Sampled ranks never exceed nor fall short of the proved rank.
    pub evidence_consistent: bool,
    pub reading: String,
    /// `valid` iff the composite vanishes and both maps have maximal rank
    /// everywhere.
    pub verdict: MonadVerdict,
}

fn map_report(m: &MonadMatrix, target: usize, prime: u64, trials: usize, seed: u64) -> Result<(MapReport, RankCover)> {
    let (cover, evidence) = join(|| rank_cover(m, target), || rank_at_random_points(m, prime, trials, seed));
    let evidence = evidence?;
    let ring = m.ring();
    let mismatches = m.degree_mismatches();
    let report = MapReport {
        rows: m.rows(),
        cols: m.cols(),
        target_rank: target,
        witnesses: cover
            .steps
            .iter()
            .map(|w| WitnessRecord {
                pivot: ring.display_monomial(&w.pivot),
                rows: w.rows.clone(),
                cols: w.cols.clone(),
                exponents: w.exponents.clone(),
            })
            .collect(),
        variables_covered: cover.variables_covered,
        uncovered_point: cover.uncovered_point.clone(),
        maximal_rank_proved: cover.is_complete(),
        evidence,
        degree_mismatch_count: mismatches.len(),
        degree_mismatches: mismatches.into_iter().take(MISMATCH_SAMPLE).collect(),
    };
    Ok((report, cover))
}

/// Checks `g . f = 0` symbolically, proves maximal rank of both maps with
/// triangular witness chains, and samples ranks at random points over
/// `F_prime` (map f with `seed`, map g with `seed + 1`).
pub fn verify_monad(spec: &MonadSpec, prime: u64, trials: usize, seed: u64) -> Result<MonadReport> {
    let composite = spec.composite()?;
    let composite_nonzero: Vec<(usize, usize)> = (0..composite.rows())
        .flat_map(|r| (0..composite.cols()).map(move |c| (r, c)))
        .filter(|&(r, c)| !composite.get(r, c).is_zero())
        .collect();
    let rank_a = spec.term_a.rank() as usize;
    let rank_c = spec.term_c.rank() as usize;
    let (f, g) = join(
        || map_report(&spec.map_f, rank_a, prime, trials, seed),
        || map_report(&spec.map_g, rank_c, prime, trials, seed.wrapping_add(1)),
    );
    let (map_f, _) = f?;
    let (map_g, _) = g?;
    let evidence_consistent = [&map_f, &map_g].iter().all(|r| {
        r.evidence.ranks.iter().all(|&x| x <= r.target_rank)
            && (!r.maximal_rank_proved || r.evidence.ranks.iter().all(|&x| x == r.target_rank))
    });
    let composite_zero = composite_nonzero.is_empty();
    let verdict = if composite_zero && map_f.maximal_rank_proved && map_g.maximal_rank_proved {
        MonadVerdict::Valid
    } else {
        MonadVerdict::Invalid
    };
    Ok(MonadReport {
        composite_zero,
        composite_nonzero,
        grading_consistent: map_f.degree_mismatch_count == 0 && map_g.degree_mismatch_count == 0,
        map_f,
        map_g,
        evidence_consistent,
        reading: spec.reading.clone(),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monad::{build_section3, build_section4, MonadSpec};
    use crate::polyring::{MonadMatrix, SparsePoly, DEFAULT_PRIME};

    #[test]
    fn section3_p1_p3_is_valid() {
        let spec = build_section3(&[1, 3], 1).unwrap();
        let r = verify_monad(&spec, DEFAULT_PRIME, 5, 0).unwrap();
        assert!(r.composite_zero);
        assert!(r.map_f.maximal_rank_proved && r.map_g.maximal_rank_proved);
        assert!(r.map_g.variables_covered);
        assert!(r.grading_consistent && r.evidence_consistent);
        assert_eq!(r.verdict, MonadVerdict::Valid);
    }

    #[test]
    fn flipped_sign_breaks_composite() {
        let spec = build_section3(&[1, 3], 1).unwrap();
        let f = &spec.map_f;
        // negate the x-block rows of f
        let entries: Vec<Vec<SparsePoly>> = (0..f.rows())
            .map(|r| {
                (0..f.cols())
                    .map(|c| if r >= f.rows() / 2 { f.get(r, c).neg() } else { f.get(r, c).clone() })
                    .collect()
            })
            .collect();
        let flipped = MonadMatrix::new(f.ring().clone(), f.row_labels().to_vec(), f.col_labels().to_vec(), entries).unwrap();
        let bad = MonadSpec {
            map_f: flipped,
            ..spec
        };
        let r = verify_monad(&bad, DEFAULT_PRIME, 3, 0).unwrap();
        assert!(!r.composite_zero);
        assert_eq!(r.verdict, MonadVerdict::Invalid);
    }

    #[test]
    fn section4_smallest_is_valid_but_not_graded() {
        let spec = build_section4(1, 1, 1, 1, 1, 1, 1).unwrap();
        let r = verify_monad(&spec, DEFAULT_PRIME, 5, 0).unwrap();
        assert!(r.composite_zero);
        assert!(r.map_g.maximal_rank_proved && r.map_f.maximal_rank_proved);
        assert_eq!(r.verdict, MonadVerdict::Valid);
        assert!(!r.grading_consistent);
        assert_eq!(r.map_g.witnesses.len(), 12);
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = build_section3(&[1, 1], 2).unwrap();
        let a = serde_json::to_string(&verify_monad(&spec, DEFAULT_PRIME, 4, 9).unwrap()).unwrap();
        let b = serde_json::to_string(&verify_monad(&spec, DEFAULT_PRIME, 4, 9).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
