//! Multigraded polynomial matrices over the Cox ring of a product of
//! projective spaces.

pub mod matrix;
pub mod modp;
pub mod poly;
pub mod ring;
pub mod witness;

pub use matrix::{DegreeMismatch, MatrixDoc, MonadMatrix};
pub use modp::{rank_at_random_points, RankEvidence, DEFAULT_PRIME, DEFAULT_TRIALS};
pub use poly::SparsePoly;
pub use ring::{CoordinateRing, Monomial, Variable};
pub use witness::{common_zero, rank_cover, triangular_witness, RankCover, TriangularWitness};
