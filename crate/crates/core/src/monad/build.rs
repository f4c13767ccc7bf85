use super::{MonadParams, MonadSpec, SegreIndexer};
use crate::cohomology::LineBundleSum;
use crate::error::{Error, Result};
use crate::polyring::{CoordinateRing, MonadMatrix, SparsePoly, Variable};
use crate::space::{MultiDegree, ProductSpace};

pub const SECTION3_READING: &str = "Segre coordinates are indexed in mixed radix with factor 1 most \
significant; x_t is index t and y_t is index nu+1+t. g = [L_x | L_y] with L[r][r+j] = x_j; \
f = [-R_y ; R_x] with R[c][s] = x_(nu+s-c), the reversed ladder, so that g.f = 0 for every k.";

pub const SECTION4_READING: &str = "Factors u,v,w,x,y,z are 1..6. An entry u^a_i is the a-th power \
of coordinate i of its factor; superscript offsets are column placements. g = [L_u|L_v|L_w|L_x|L_y|L_z] \
and f = [R_v; -R_u; R_x; -R_w; R_z; -R_y], the transposes of the printed matrices. Labels are the \
declared terms; entry degrees are not those labels, see grading in the report.";

/// Factor list for `l_j` copies of `P^(2j-1)`.
pub fn factors_from_copies(copies: &[u32]) -> Vec<usize> {
    copies
        .iter()
        .enumerate()
        .flat_map(|(j, &l)| std::iter::repeat_n(2 * j + 1, l as usize))
        .collect()
}

/// `rows x (span + rows)` band: row `r` carries `seq` starting at column `r`.
fn ladder(seq: &[SparsePoly], rows: usize) -> Vec<Vec<SparsePoly>> {
    let cols = seq.len() - 1 + rows;
    (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| match c.checked_sub(r) {
                    Some(j) if j < seq.len() => seq[j].clone(),
                    _ => SparsePoly::zero(),
                })
                .collect()
        })
        .collect()
}

/// `(span + cols) x cols` reversed band: entry `(c, s)` is `seq[top + s - c]`
/// with `top = seq.len() - 1`.
fn reversed_ladder(seq: &[SparsePoly], cols: usize, sign: i64) -> Vec<Vec<SparsePoly>> {
    let top = seq.len() - 1;
    let rows = top + cols;
    (0..rows)
        .map(|c| {
            (0..cols)
                .map(|s| match (top + s).checked_sub(c) {
                    Some(j) if j <= top => {
                        if sign < 0 {
                            seq[j].neg()
                        } else {
                            seq[j].clone()
                        }
                    }
                    _ => SparsePoly::zero(),
                })
                .collect()
        })
        .collect()
}

fn hcat(blocks: Vec<Vec<Vec<SparsePoly>>>) -> Vec<Vec<SparsePoly>> {
    let rows = blocks[0].len();
    (0..rows)
        .map(|r| blocks.iter().flat_map(|b| b[r].iter().cloned()).collect())
        .collect()
}

fn vcat(blocks: Vec<Vec<Vec<SparsePoly>>>) -> Vec<Vec<SparsePoly>> {
    blocks.into_iter().flatten().collect()
}

/// The monad `O(-1,..,-1)^k -> O^(2 nu + 2k) -> O(1,..,1)^k` on a product of
/// odd-dimensional projective spaces.
pub fn build_section3(factors: &[usize], k: usize) -> Result<MonadSpec> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if let Some(n) = factors.iter().find(|&&n| n % 2 == 0) {
        return Err(Error::Unsupported(format!(
            "factor P^{n} is even-dimensional; this construction needs odd factors"
        )));
    }
    let space = ProductSpace::grouped_by_dimension(factors.to_vec())?;
    let l = space.picard_rank();
    let ring = CoordinateRing::new(&space);
    let seg = SegreIndexer::new(factors)?;
    let nu = seg.nu()?;
    let coord = |t: usize| -> Result<SparsePoly> {
        Ok(SparsePoly::term(ring.segre_monomial(&seg.tuple(t))?, 1))
    };
    let xs = (0..=nu).map(coord).collect::<Result<Vec<_>>>()?;
    let ys = (nu + 1..=2 * nu + 1).map(coord).collect::<Result<Vec<_>>>()?;

    let g = hcat(vec![ladder(&xs, k), ladder(&ys, k)]);
    let f = vcat(vec![reversed_ladder(&ys, k, -1), reversed_ladder(&xs, k, 1)]);

    let k64 = k as u64;
    let term_a = LineBundleSum::single(MultiDegree::uniform(l, -1), k64)?;
    let term_m = LineBundleSum::single(MultiDegree::zero(l), 2 * nu as u64 + 2 * k64)?;
    let term_c = LineBundleSum::single(MultiDegree::uniform(l, 1), k64)?;
    let map_f = MonadMatrix::new(ring.clone(), term_m.expanded(), term_a.expanded(), f)?;
    let map_g = MonadMatrix::new(ring, term_c.expanded(), term_m.expanded(), g)?;
    MonadSpec::new(
        space,
        term_a,
        term_m,
        term_c,
        map_f,
        map_g,
        MonadParams::Section3 {
            factors: factors.to_vec(),
            k,
            nu,
        },
        SECTION3_READING.to_string(),
    )
}

/// The monad `O(-a,-a,-b,-b,-c,-c)^k -> G_a + G_b + G_c -> O(a,a,b,b,c,c)^k`
/// on `(P^n)^2 x (P^m)^2 x (P^l)^2`.
pub fn build_section4(
    n: usize,
    m: usize,
    l: usize,
    alpha: u32,
    beta: u32,
    gamma: u32,
    k: usize,
) -> Result<MonadSpec> {
    if [n, m, l, k].contains(&0) || [alpha, beta, gamma].contains(&0) {
        return Err(Error::InvalidInput("all parameters must be positive".into()));
    }
    let factors = vec![n, n, m, m, l, l];
    let space = ProductSpace::with_groups(
        factors.clone(),
        ["u", "v", "w", "x", "y", "z"]
            .iter()
            .enumerate()
            .map(|(i, name)| crate::space::FactorGroup {
                name: name.to_string(),
                members: vec![i],
            })
            .collect(),
    )?;
    let ring = CoordinateRing::new(&space);
    let powers = [alpha, alpha, beta, beta, gamma, gamma];
    let seq = |factor: usize| -> Vec<SparsePoly> {
        (0..=factors[factor])
            .map(|coord| {
                let v = Variable { factor, coord };
                SparsePoly::term(ring.var_pow(v, powers[factor]), 1)
            })
            .collect()
    };
    let blocks: Vec<Vec<SparsePoly>> = (0..6).map(seq).collect();

    let g = hcat((0..6).map(|i| ladder(&blocks[i], k)).collect());
    // pair (2p, 2p+1): rows of the first block carry R of the second and
    // vice versa with a sign, so that L_a R_b - L_b R_a = 0
    let f = vcat(
        (0..6)
            .map(|i| {
                let partner = i ^ 1;
                let sign = if i % 2 == 0 { 1 } else { -1 };
                reversed_ladder(&blocks[partner], k, sign)
            })
            .collect(),
    );

    let (a, b, c) = (alpha as i64, beta as i64, gamma as i64);
    let k64 = k as u64;
    let term_a = LineBundleSum::single(MultiDegree::new(vec![-a, -a, -b, -b, -c, -c]), k64)?;
    let term_c = LineBundleSum::single(MultiDegree::new(vec![a, a, b, b, c, c]), k64)?;
    let term_m = LineBundleSum::from_summands((0..6).map(|i| {
        let mult = (factors[i] + k) as u64;
        (MultiDegree::unit(6, i).scale(-(powers[i] as i64)), mult)
    }))?;
    // the canonical summand order must be the block order u, v, w, x, y, z
    debug_assert!(term_m
        .summands()
        .iter()
        .enumerate()
        .all(|(i, (d, _))| d.components()[i] < 0));

    let map_f = MonadMatrix::with_declared_labels(ring.clone(), term_m.expanded(), term_a.expanded(), f)?;
    let map_g = MonadMatrix::with_declared_labels(ring, term_c.expanded(), term_m.expanded(), g)?;
    MonadSpec::new(
        space,
        term_a,
        term_m,
        term_c,
        map_f,
        map_g,
        MonadParams::Section4 {
            n,
            m,
            l,
            alpha,
            beta,
            gamma,
            k,
        },
        SECTION4_READING.to_string(),
    )
}
