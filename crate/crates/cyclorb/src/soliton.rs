//! Arithmetic of topological soliton sectors of the n-fold tensor product:
//! conjugation, the action of product sectors, composition for n = 2, the
//! vacuum-channel decomposition and induction/restriction matrices.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::fusion::{FusionError, SectorSum};
use crate::modular::ModularData;
use crate::orbifold::{cyclic_orbits, OrbifoldError};

#[derive(Debug, Error)]
pub enum SolitonError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Orbifold(#[from] OrbifoldError),
    #[error("n must be at least 2")]
    TooSmallN,
    #[error(
        "soliton composition is only defined for n = 2 (got n = {0}); \
         the nature of composed twists for larger n is open"
    )]
    CompositionUnsupported(usize),
    #[error(
        "plain conjugation is only available for n = 2; for n = {n} the conjugate \
         also reorders tensor slots by m -> -m (returned alongside this error)"
    )]
    GeneralConjugation {
        n: usize,
        /// Conjugated label sum.
        conjugated: SolitonSector,
        /// Slot permutation `p(m) = -m mod n`.
        permutation: Vec<usize>,
    },
}

/// A topological soliton sector, linear in its label sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolitonSector {
    pub lambda: SectorSum,
}

impl SolitonSector {
    pub fn new(lambda: SectorSum) -> Self {
        SolitonSector { lambda }
    }

    pub fn single(label: usize) -> Self {
        SolitonSector {
            lambda: SectorSum::single(label),
        }
    }

    /// Dimension `mu^{(n-1)/2} * sum mult * d(label)`.
    pub fn dim(&self, md: &ModularData, n: usize) -> f64 {
        let base = md.global_index().powf((n as f64 - 1.0) / 2.0);
        base * md.ring().sum_dim(&self.lambda, md.dims())
    }
}

/// Finitely supported sum of ordered n-tuple sectors of the tensor product.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ProductSectorSum {
    coeffs: BTreeMap<Vec<usize>, u64>,
}

impl ProductSectorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_multiple(&mut self, tuple: Vec<usize>, mult: u64) {
        if mult == 0 {
            return;
        }
        let slot = self.coeffs.entry(tuple).or_insert(0);
        *slot = slot.checked_add(mult).expect("product multiplicity overflow");
    }

    pub fn coeff(&self, tuple: &[usize]) -> u64 {
        self.coeffs.get(tuple).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], u64)> + '_ {
        self.coeffs.iter().map(|(t, &m)| (t.as_slice(), m))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total dimension: `sum mult * prod d(label)`.
    pub fn dim(&self, md: &ModularData) -> f64 {
        self.coeffs
            .iter()
            .map(|(t, &m)| m as f64 * t.iter().map(|&l| md.dim(l)).product::<f64>())
            .sum()
    }

    /// Render with the ring's label names, ascending tuple order.
    pub fn format(&self, md: &ModularData) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        self.coeffs
            .iter()
            .map(|(tuple, &mult)| {
                let names: Vec<&str> = tuple.iter().map(|&l| md.ring().label(l)).collect();
                let body = format!("({})", names.join(","));
                if mult == 1 {
                    body
                } else {
                    format!("{mult}*{body}")
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Conjugate soliton for n = 2: replace each label by its conjugate.
/// For larger n the conjugate involves the slot reordering `m -> -m`; that
/// pair is reported through [`SolitonError::GeneralConjugation`].
pub fn soliton_conjugate(
    md: &ModularData,
    n: usize,
    s: &SolitonSector,
) -> Result<SolitonSector, SolitonError> {
    let conjugated = SolitonSector::new(md.ring().conj_sum(&s.lambda));
    if n == 2 {
        Ok(conjugated)
    } else {
        let permutation = (0..n).map(|m| (n - m) % n).collect();
        Err(SolitonError::GeneralConjugation {
            n,
            conjugated,
            permutation,
        })
    }
}

/// Action of the product sector `(mu1, mu2)` on a soliton (n = 2):
/// the label sum becomes `mu1 . mu2 . lambda`.
pub fn act_product_sector(
    md: &ModularData,
    mu1: usize,
    mu2: usize,
    s: &SolitonSector,
) -> Result<SolitonSector, SolitonError> {
    let ring = md.ring();
    let step = ring.fuse(&SectorSum::single(mu1), &SectorSum::single(mu2))?;
    let lambda = ring.fuse(&step, &s.lambda)?;
    Ok(SolitonSector::new(lambda))
}

/// Composition of two solitons for n = 2, landing in honest product
/// sectors: for irreducible labels the coefficient of `(v1, v2)` is
/// `sum_delta <lambda delta, v1> <mu conj(delta), v2>`, extended bilinearly.
pub fn soliton_compose(
    md: &ModularData,
    n: usize,
    a: &SolitonSector,
    b: &SolitonSector,
) -> Result<ProductSectorSum, SolitonError> {
    if n != 2 {
        return Err(SolitonError::CompositionUnsupported(n));
    }
    let ring = md.ring();
    let m = ring.len();
    let mut out = ProductSectorSum::zero();
    for (la, ma) in a.lambda.iter() {
        for (lb, mb) in b.lambda.iter() {
            let weight = ma
                .checked_mul(mb)
                .ok_or(FusionError::Overflow)
                .map_err(SolitonError::from)?;
            for delta in 0..m {
                let left = ring.fuse_labels(la, delta)?;
                let right = ring.fuse_labels(lb, ring.conj(delta))?;
                for (v1, m1) in left.iter() {
                    for (v2, m2) in right.iter() {
                        out.add_multiple(vec![v1, v2], weight * m1 * m2);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Vacuum channel of the n-fold soliton: the coefficient of each ordered
/// tuple is the multiplicity of the unit in its fusion product. Its total
/// dimension is `mu^{n-1}`.
pub fn vacuum_channel(md: &ModularData, n: usize) -> Result<ProductSectorSum, SolitonError> {
    if n < 2 {
        return Err(SolitonError::TooSmallN);
    }
    let ring = md.ring();
    let mut out = ProductSectorSum::zero();
    let mut stack = vec![0usize; n];
    enumerate_tuples(ring.len(), &mut stack, 0, &mut |tuple| {
        let mult = ring.vacuum_multiplicity(tuple)?;
        if mult > 0 {
            out.add_multiple(tuple.to_vec(), mult);
        }
        Ok(())
    })?;
    Ok(out)
}

fn enumerate_tuples(
    labels: usize,
    tuple: &mut Vec<usize>,
    depth: usize,
    f: &mut impl FnMut(&[usize]) -> Result<(), SolitonError>,
) -> Result<(), SolitonError> {
    if depth == tuple.len() {
        return f(tuple);
    }
    for l in 0..labels {
        tuple[depth] = l;
        enumerate_tuples(labels, tuple, depth + 1, f)?;
    }
    Ok(())
}

/// Whether the vacuum channel is invariant under cyclic rotation of the
/// tuple slots and under the inverse reordering `m -> -m`.
pub fn cyclic_symmetry_check(md: &ModularData, n: usize) -> Result<bool, SolitonError> {
    let channel = vacuum_channel(md, n)?;
    for (tuple, mult) in channel.iter() {
        let mut rotated = tuple.to_vec();
        rotated.rotate_left(1);
        if channel.coeff(&rotated) != mult {
            return Ok(false);
        }
        let reversed: Vec<usize> = (0..n).map(|m| tuple[(n - m) % n]).collect();
        if channel.coeff(&reversed) != mult {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Restriction matrix from tuple sectors of the tensor product to
/// untwisted orbifold sectors, together with the independently computed
/// induction matrix transpose check.
#[derive(Debug, Clone)]
pub struct ReciprocityMatrices {
    /// Ordered lexicographically.
    pub tuples: Vec<Vec<usize>>,
    /// Untwisted column labels as (orbit index, branch).
    pub columns: Vec<(usize, usize)>,
    /// `restriction[t][col] = <tuple restricted, column sector>`.
    pub restriction: Vec<Vec<u64>>,
    /// `induction[col][t] = <induced column sector, tuple sector>`.
    pub induction: Vec<Vec<u64>>,
    /// `induction == transpose(restriction)`, checked exactly.
    pub transpose_identity: bool,
}

/// Build restriction and induction matrices between tuple sectors and
/// untwisted orbifold sectors for n in {2, 3, 4}.
///
/// Restriction: a tuple restricts once onto every branch of its own orbit.
/// Induction: inducing the branch `(orbit; i)` gives the sum of the orbit's
/// rotations, each once. Reciprocity says the two matrices are mutually
/// transpose; both sides are computed from scratch and compared entrywise.
pub fn frobenius_reciprocity_matrix(
    md: &ModularData,
    n: usize,
) -> Result<ReciprocityMatrices, SolitonError> {
    if !(2..=4).contains(&n) {
        return Err(SolitonError::Orbifold(OrbifoldError::UnsupportedN { n }));
    }
    let orbits = cyclic_orbits(md, n)?;
    let mut columns = Vec::new();
    for (oi, orbit) in orbits.iter().enumerate() {
        for branch in 0..orbit.k1 {
            columns.push((oi, branch));
        }
    }

    let mut tuples = Vec::new();
    let mut stack = vec![0usize; n];
    enumerate_tuples(md.len(), &mut stack, 0, &mut |tuple| {
        tuples.push(tuple.to_vec());
        Ok(())
    })?;

    // restriction side: canonicalize each tuple and mark its orbit's branches
    let mut restriction = vec![vec![0u64; columns.len()]; tuples.len()];
    for (ti, tuple) in tuples.iter().enumerate() {
        let mut canonical = tuple.clone();
        let mut probe = tuple.clone();
        for _ in 0..n {
            probe.rotate_left(1);
            if probe < canonical {
                canonical.clone_from(&probe);
            }
        }
        let oi = orbits
            .iter()
            .position(|o| o.representative == canonical)
            .expect("every tuple belongs to an orbit");
        for (ci, &(o, _)) in columns.iter().enumerate() {
            if o == oi {
                restriction[ti][ci] = 1;
            }
        }
    }

    // induction side: rotate each orbit representative through its orbit
    let mut induction = vec![vec![0u64; tuples.len()]; columns.len()];
    for (ci, &(oi, _)) in columns.iter().enumerate() {
        let orbit = &orbits[oi];
        let mut image = orbit.representative.clone();
        for _ in 0..orbit.n1 {
            let ti = tuples
                .iter()
                .position(|t| *t == image)
                .expect("rotations stay inside the tuple list");
            induction[ci][ti] += 1;
            image.rotate_left(1);
        }
    }

    let transpose_identity = (0..tuples.len()).all(|t| {
        (0..columns.len()).all(|c| restriction[t][c] == induction[c][t])
    });

    Ok(ReciprocityMatrices {
        tuples,
        columns,
        restriction,
        induction,
        transpose_identity,
    })
}
