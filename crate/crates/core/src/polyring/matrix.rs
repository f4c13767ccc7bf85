use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::poly::SparsePoly;
use super::ring::CoordinateRing;
use crate::error::{Error, Result};
use crate::space::MultiDegree;

/// A matrix of multi-homogeneous forms representing a map between sums of
/// line bundles. Rows are target summands, columns are source summands, and
/// a nonzero entry `(r, c)` should have multidegree
/// `row_labels[r] - col_labels[c]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadMatrix {
    ring: CoordinateRing,
    rows: usize,
    cols: usize,
    entries: Vec<SparsePoly>,
    row_labels: Vec<MultiDegree>,
    col_labels: Vec<MultiDegree>,
}

/// An entry whose degree disagrees with its row and column labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeMismatch {
    pub row: usize,
    pub col: usize,
    /// Multidegree of the entry, or `None` if it is not multi-homogeneous.
    pub found: Option<MultiDegree>,
    pub expected: MultiDegree,
}

/// Text form used in instance and report files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub row_labels: Vec<MultiDegree>,
    pub col_labels: Vec<MultiDegree>,
    pub entries: Vec<Vec<String>>,
}

impl MonadMatrix {
    /// Builds a matrix and rejects any entry whose degree does not match its
    /// labels.
    pub fn new(
        ring: CoordinateRing,
        row_labels: Vec<MultiDegree>,
        col_labels: Vec<MultiDegree>,
        entries: Vec<Vec<SparsePoly>>,
    ) -> Result<Self> {
        let m = Self::with_declared_labels(ring, row_labels, col_labels, entries)?;
        if let Some(bad) = m.degree_mismatches().into_iter().next() {
            return Err(Error::DegreeMismatch {
                row: bad.row,
                col: bad.col,
                found: bad
                    .found
                    .map_or_else(|| "an inhomogeneous form".to_string(), |d| d.to_string()),
                expected: bad.expected.to_string(),
            });
        }
        Ok(m)
    }

    /// Builds a matrix whose labels are taken as declared; degree agreement is
    /// left to [`MonadMatrix::degree_mismatches`].
    pub fn with_declared_labels(
        ring: CoordinateRing,
        row_labels: Vec<MultiDegree>,
        col_labels: Vec<MultiDegree>,
        entries: Vec<Vec<SparsePoly>>,
    ) -> Result<Self> {
        let rows = row_labels.len();
        let cols = col_labels.len();
        if entries.len() != rows {
            return Err(Error::Dimension {
                expected: rows,
                got: entries.len(),
            });
        }
        for row in &entries {
            if row.len() != cols {
                return Err(Error::Dimension {
                    expected: cols,
                    got: row.len(),
                });
            }
        }
        let l = ring.num_factors();
        for label in row_labels.iter().chain(&col_labels) {
            if label.len() != l {
                return Err(Error::Dimension {
                    expected: l,
                    got: label.len(),
                });
            }
        }
        let nvars = ring.num_vars();
        for p in entries.iter().flatten() {
            if p.terms().any(|(m, _)| m.exponents().len() != nvars) {
                return Err(Error::InvalidInput("entry uses a different coordinate ring".into()));
            }
        }
        Ok(Self {
            ring,
            rows,
            cols,
            entries: entries.into_iter().flatten().collect(),
            row_labels,
            col_labels,
        })
    }

    pub fn zeros(
        ring: CoordinateRing,
        row_labels: Vec<MultiDegree>,
        col_labels: Vec<MultiDegree>,
    ) -> Self {
        let entries = vec![vec![SparsePoly::zero(); col_labels.len()]; row_labels.len()];
        Self::new(ring, row_labels, col_labels, entries).expect("zero matrix is well formed")
    }

    pub fn ring(&self) -> &CoordinateRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> &[MultiDegree] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[MultiDegree] {
        &self.col_labels
    }

    pub fn get(&self, r: usize, c: usize) -> &SparsePoly {
        &self.entries[r * self.cols + c]
    }

    pub fn degree_mismatches(&self) -> Vec<DegreeMismatch> {
        let mut out = Vec::new();
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.get(r, c);
                if e.is_zero() {
                    continue;
                }
                let expected = &self.row_labels[r] - &self.col_labels[c];
                let found = e.multidegree(&self.ring).ok().flatten();
                if found.as_ref() != Some(&expected) {
                    out.push(DegreeMismatch {
                        row: r,
                        col: c,
                        found,
                        expected,
                    });
                }
            }
        }
        out
    }

    pub fn is_degree_consistent(&self) -> bool {
        self.degree_mismatches().is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(SparsePoly::is_zero)
    }

    /// Exact product `self * other`; the inner labels must agree.
    pub fn mat_mul(&self, other: &MonadMatrix) -> Result<MonadMatrix> {
        if self.ring != other.ring {
            return Err(Error::InvalidInput("matrices live over different rings".into()));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                got: other.rows,
            });
        }
        if self.col_labels != other.row_labels {
            return Err(Error::LabelMismatch(
                "column labels of the left factor differ from row labels of the right factor"
                    .into(),
            ));
        }
        let entries: Vec<SparsePoly> = (0..self.rows * other.cols)
            .into_par_iter()
            .map(|idx| {
                let (r, c) = (idx / other.cols, idx % other.cols);
                let mut acc = SparsePoly::zero();
                for j in 0..self.cols {
                    let a = self.get(r, j);
                    let b = other.get(j, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc.add_assign(&a.mul(b));
                    }
                }
                acc
            })
            .collect();
        Ok(MonadMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: other.cols,
            entries,
            row_labels: self.row_labels.clone(),
            col_labels: other.col_labels.clone(),
        })
    }

    pub fn eval_mod(&self, point: &[u64], p: u64) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).eval_mod(point, p)).collect())
            .collect()
    }

    pub fn to_doc(&self) -> MatrixDoc {
        MatrixDoc {
            rows: self.rows,
            cols: self.cols,
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: (0..self.rows)
                .map(|r| (0..self.cols).map(|c| self.get(r, c).display(&self.ring)).collect())
                .collect(),
        }
    }

    /// Parses a [`MatrixDoc`]; labels are taken as declared.
    pub fn from_doc(ring: CoordinateRing, doc: &MatrixDoc) -> Result<Self> {
        if doc.row_labels.len() != doc.rows || doc.col_labels.len() != doc.cols {
            return Err(Error::InvalidInput(format!(
                "matrix declares {}x{} but has {} row and {} column labels",
                doc.rows,
                doc.cols,
                doc.row_labels.len(),
                doc.col_labels.len()
            )));
        }
        let entries = doc
            .entries
            .iter()
            .enumerate()
            .map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .map(|(c, s)| {
                        SparsePoly::parse(&ring, s)
                            .map_err(|e| Error::Parse(format!("entry ({r}, {c}): {e}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_declared_labels(ring, doc.row_labels.clone(), doc.col_labels.clone(), entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::modp::{rank_at_random_points, sample_point, DEFAULT_PRIME};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn md(v: &[i64]) -> MultiDegree {
        MultiDegree::new(v.to_vec())
    }

    fn parse_matrix(ring: &CoordinateRing, rows: &[&[&str]]) -> Vec<Vec<SparsePoly>> {
        rows.iter()
            .map(|r| r.iter().map(|s| SparsePoly::parse(ring, s).unwrap()).collect())
            .collect()
    }

    #[test]
    fn antisymmetric_product_is_zero() {
        let ring = CoordinateRing::from_factors(vec![1, 1]);
        let row = MonadMatrix::new(
            ring.clone(),
            vec![md(&[1, 1])],
            vec![md(&[0, 1]), md(&[0, 1])],
            parse_matrix(&ring, &[&["a1_0", "a1_1"]]),
        )
        .unwrap();
        let col = MonadMatrix::new(
            ring.clone(),
            vec![md(&[0, 1]), md(&[0, 1])],
            vec![md(&[-1, 1])],
            parse_matrix(&ring, &[&["-a1_1"], &["a1_0"]]),
        )
        .unwrap();
        let prod = row.mat_mul(&col).unwrap();
        assert_eq!((prod.rows(), prod.cols()), (1, 1));
        assert!(prod.is_zero());
        assert!(prod.is_degree_consistent());
    }

    #[test]
    fn identity_pattern_is_neutral() {
        let ring = CoordinateRing::from_factors(vec![1, 1]);
        let labels = vec![md(&[0, 0]), md(&[0, 0])];
        let id = MonadMatrix::new(
            ring.clone(),
            labels.clone(),
            labels.clone(),
            parse_matrix(&ring, &[&["1", "0"], &["0", "1"]]),
        )
        .unwrap();
        let m = MonadMatrix::new(
            ring.clone(),
            labels,
            vec![md(&[-1, -1])],
            parse_matrix(&ring, &[&["a1_0*a2_1"], &["a1_1*a2_1 - a1_0*a2_0"]]),
        )
        .unwrap();
        assert_eq!(id.mat_mul(&m).unwrap(), m);
    }

    #[test]
    fn shape_and_label_errors() {
        let ring = CoordinateRing::from_factors(vec![1, 1]);
        let a = MonadMatrix::zeros(ring.clone(), vec![md(&[0, 0])], vec![md(&[1, 0])]);
        let b = MonadMatrix::zeros(ring.clone(), vec![md(&[0, 1])], vec![md(&[0, 0])]);
        assert!(matches!(a.mat_mul(&b), Err(Error::LabelMismatch(_))));
        let c = MonadMatrix::zeros(ring.clone(), vec![md(&[0, 0]); 2], vec![md(&[0, 0])]);
        assert!(matches!(a.mat_mul(&c), Err(Error::Dimension { .. })));
        let bad = MonadMatrix::new(
            ring.clone(),
            vec![md(&[1, 1])],
            vec![md(&[0, 0])],
            parse_matrix(&ring, &[&["a1_0"]]),
        );
        assert!(matches!(bad, Err(Error::DegreeMismatch { .. })));
        let lenient = MonadMatrix::with_declared_labels(
            ring.clone(),
            vec![md(&[1, 1])],
            vec![md(&[0, 0])],
            parse_matrix(&ring, &[&["a1_0"]]),
        )
        .unwrap();
        assert_eq!(lenient.degree_mismatches().len(), 1);
        assert!(MonadMatrix::zeros(ring, vec![md(&[0, 0])], vec![md(&[0, 0])]).is_zero());
    }

    #[test]
    fn random_rank_of_a_row_of_coordinates() {
        let ring = CoordinateRing::from_factors(vec![1, 3]);
        let names: Vec<String> = (0..2)
            .flat_map(|i| (0..4).map(move |j| format!("a1_{i}*a2_{j}")))
            .collect();
        let row: Vec<&str> = names.iter().map(String::as_str).collect();
        let m = MonadMatrix::new(
            ring.clone(),
            vec![md(&[1, 1])],
            vec![md(&[0, 0]); 8],
            parse_matrix(&ring, &[&row]),
        )
        .unwrap();
        let ev = rank_at_random_points(&m, DEFAULT_PRIME, 20, 0).unwrap();
        assert_eq!(ev.max_rank_seen, 1);
        assert_eq!(ev.points.len(), 20);
        let z = MonadMatrix::zeros(ring, vec![md(&[0, 0]); 3], vec![md(&[0, 0]); 2]);
        assert_eq!(rank_at_random_points(&z, DEFAULT_PRIME, 5, 1).unwrap().max_rank_seen, 0);
        assert!(rank_at_random_points(&m, 1_000_001, 5, 1).is_err());
        assert!(rank_at_random_points(&m, DEFAULT_PRIME, 0, 1).is_err());
        let again = rank_at_random_points(&m, DEFAULT_PRIME, 20, 0).unwrap();
        assert_eq!(ev, again);
    }

    fn random_form(ring: &CoordinateRing, deg: &[u32], seeds: &[(i64, Vec<usize>)]) -> SparsePoly {
        // sum of c * prod_f prod a_f_{idx}, with deg[f] factors from factor f
        let mut p = SparsePoly::zero();
        for (c, idx) in seeds {
            let mut m = ring.one();
            let mut k = 0;
            for (f, &d) in deg.iter().enumerate() {
                for _ in 0..d {
                    let coord = idx[k % idx.len()] % (ring.factors()[f] + 1);
                    k += 1;
                    m = m.mul(&ring.var(crate::polyring::ring::Variable { factor: f, coord }));
                }
            }
            p.add_assign(&SparsePoly::term(m, *c));
        }
        p
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn product_is_a_ring_homomorphism(
            dims in (1usize..=3, 1usize..=3),
            shape in (1usize..=3, 1usize..=3, 1usize..=3),
            coeffs in prop::collection::vec((-3i64..=3, prop::collection::vec(0usize..4, 1..4)), 1..4),
            seed in any::<u64>(),
        ) {
            let ring = CoordinateRing::from_factors(vec![dims.0, dims.1]);
            let (r, k, c) = shape;
            // labels: rows degree (2,2), middle (1,1), columns (0,0)
            let mk = |rows: usize, cols: usize, deg: [u32; 2], salt: usize| {
                (0..rows).map(|i| (0..cols).map(|j| {
                    let rot: Vec<_> = coeffs.iter().map(|(cf, idx)| {
                        (*cf, idx.iter().map(|x| x + i + 2 * j + salt).collect::<Vec<_>>())
                    }).collect();
                    random_form(&ring, &deg, &rot)
                }).collect::<Vec<_>>()).collect::<Vec<_>>()
            };
            let a = MonadMatrix::new(ring.clone(), vec![md(&[2, 2]); r], vec![md(&[1, 1]); k], mk(r, k, [1, 1], 0)).unwrap();
            let b = MonadMatrix::new(ring.clone(), vec![md(&[1, 1]); k], vec![md(&[0, 0]); c], mk(k, c, [1, 1], 5)).unwrap();
            let ab = a.mat_mul(&b).unwrap();
            prop_assert!(ab.is_degree_consistent());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = DEFAULT_PRIME;
            let pt = sample_point(&ring, p, &mut rng).unwrap();
            let (ea, eb, eab) = (a.eval_mod(&pt, p), b.eval_mod(&pt, p), ab.eval_mod(&pt, p));
            for i in 0..r {
                for j in 0..c {
                    let mut s = 0u64;
                    for t in 0..k {
                        s = (s + crate::polyring::modp::mul_mod(ea[i][t], eb[t][j], p)) % p;
                    }
                    prop_assert_eq!(s, eab[i][j]);
                }
            }
            let ev = rank_at_random_points(&ab, p, 3, seed).unwrap();
            prop_assert!(ev.max_rank_seen <= r.min(c));
        }
    }
}
