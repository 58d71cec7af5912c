//! Fusion-ring arithmetic: validation, products, quantum dimensions,
//! global index and hom-space dimensions.
//!
//! A [`FusionRing`] is the combinatorial skeleton of a braided tensor
//! category: a finite label set with a rank-3 multiplicity tensor
//! `N[a][b][c]`, a distinguished unit at index 0, and a conjugation
//! involution. Everything downstream (modular data, orbifold spectra,
//! soliton fusion) is computed from this data.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Hard cap on power iteration when extracting Perron-Frobenius eigenvalues.
const MAX_POWER_ITERATIONS: usize = 10_000;
/// Convergence threshold for the power iteration.
const POWER_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FusionError {
    #[error("label index {index} out of range (ring has {count} labels)")]
    LabelOutOfRange { index: usize, count: usize },
    #[error("fusion tensor has shape {found}, expected {expected} for {labels} labels")]
    BadTensorShape {
        labels: usize,
        expected: String,
        found: String,
    },
    #[error("conjugation table has length {found}, expected {expected}")]
    BadConjLength { expected: usize, found: usize },
    #[error("conjugation entry {index} -> {target} out of range")]
    BadConjEntry { index: usize, target: usize },
    #[error("ring must have at least one label (the unit)")]
    Empty,
    #[error("multiplicity overflow in fusion product")]
    Overflow,
    #[error("empty fusion product")]
    EmptyProduct,
    #[error("quantum dimension iteration for label {label} did not converge")]
    NonConvergence { label: usize },
}

/// Formal non-negative-integer combination of ring labels.
///
/// Coefficients iterate in ascending label order; zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SectorSum {
    coeffs: BTreeMap<usize, u64>,
}

impl SectorSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(label: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(label, 1);
        SectorSum { coeffs }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u64)>) -> Self {
        let mut sum = SectorSum::zero();
        for (label, mult) in pairs {
            sum.add_multiple(label, mult);
        }
        sum
    }

    pub fn add_multiple(&mut self, label: usize, mult: u64) {
        if mult == 0 {
            return;
        }
        let slot = self.coeffs.entry(label).or_insert(0);
        *slot = slot.checked_add(mult).expect("sector multiplicity overflow");
    }

    pub fn coeff(&self, label: usize) -> u64 {
        self.coeffs.get(&label).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.coeffs.iter().map(|(&l, &m)| (l, m))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of irreducible summands counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.coeffs.values().sum()
    }

    pub fn max_label(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }
}

/// One named validation check with the index tuples that violate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub violations: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of [`FusionRing::validate`]: one entry per invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            if check.passed() {
                writeln!(f, "check {}: PASS", check.name)?;
            } else {
                writeln!(f, "check {}: FAIL ({} violations)", check.name, check.violations.len())?;
                for v in &check.violations {
                    writeln!(f, "  at {v}")?;
                }
            }
        }
        Ok(())
    }
}

/// Finite commutative fusion ring with unit at label index 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FusionRing {
    labels: Vec<String>,
    fusion: Vec<Vec<Vec<u64>>>,
    conj: Vec<usize>,
}

impl FusionRing {
    /// Build a ring from raw parts, checking only structural shape.
    /// Algebraic invariants are checked separately by [`Self::validate`].
    pub fn new(
        labels: Vec<String>,
        fusion: Vec<Vec<Vec<u64>>>,
        conj: Vec<usize>,
    ) -> Result<Self, FusionError> {
        let m = labels.len();
        if m == 0 {
            return Err(FusionError::Empty);
        }
        if fusion.len() != m
            || fusion.iter().any(|p| p.len() != m)
            || fusion.iter().flatten().any(|r| r.len() != m)
        {
            let found = format!(
                "{}x{}x{}",
                fusion.len(),
                fusion.first().map_or(0, Vec::len),
                fusion.first().and_then(|p| p.first()).map_or(0, Vec::len)
            );
            return Err(FusionError::BadTensorShape {
                labels: m,
                expected: format!("{m}x{m}x{m}"),
                found,
            });
        }
        if conj.len() != m {
            return Err(FusionError::BadConjLength {
                expected: m,
                found: conj.len(),
            });
        }
        if let Some((i, &t)) = conj.iter().enumerate().find(|(_, &t)| t >= m) {
            return Err(FusionError::BadConjEntry { index: i, target: t });
        }
        Ok(FusionRing { labels, fusion, conj })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    /// Multiplicity `N[a][b][c]` of `c` inside `a.b`.
    pub fn n(&self, a: usize, b: usize, c: usize) -> u64 {
        self.fusion[a][b][c]
    }

    pub fn conj(&self, a: usize) -> usize {
        self.conj[a]
    }

    pub fn conj_table(&self) -> &[usize] {
        &self.conj
    }

    fn check_index(&self, index: usize) -> Result<(), FusionError> {
        if index >= self.len() {
            Err(FusionError::LabelOutOfRange {
                index,
                count: self.len(),
            })
        } else {
            Ok(())
        }
    }

    /// Run every algebraic invariant and report all violations.
    pub fn validate(&self) -> ValidationReport {
        let m = self.len();
        let n = |a: usize, b: usize, c: usize| self.fusion[a][b][c];

        let mut unit = Vec::new();
        for b in 0..m {
            for c in 0..m {
                let expect = u64::from(b == c);
                if n(0, b, c) != expect {
                    unit.push(format!("N[0][{b}][{c}] = {}", n(0, b, c)));
                }
                if n(b, 0, c) != expect {
                    unit.push(format!("N[{b}][0][{c}] = {}", n(b, 0, c)));
                }
            }
        }

        let mut pairing = Vec::new();
        for a in 0..m {
            for b in 0..m {
                let expect = u64::from(b == self.conj[a]);
                if n(a, b, 0) != expect {
                    pairing.push(format!("N[{a}][{b}][0] = {}", n(a, b, 0)));
                }
            }
        }

        let mut involution = Vec::new();
        for a in 0..m {
            if self.conj[self.conj[a]] != a {
                involution.push(format!("conj(conj({a})) = {}", self.conj[self.conj[a]]));
            }
        }

        let mut commutativity = Vec::new();
        for a in 0..m {
            for b in 0..a {
                for c in 0..m {
                    if n(a, b, c) != n(b, a, c) {
                        commutativity.push(format!("({a},{b},{c})"));
                    }
                }
            }
        }

        let mut associativity = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    for d in 0..m {
                        let lhs: u64 = (0..m).map(|e| n(a, b, e) * n(e, c, d)).sum();
                        let rhs: u64 = (0..m).map(|f| n(b, c, f) * n(a, f, d)).sum();
                        if lhs != rhs {
                            associativity.push(format!("({a},{b},{c},{d})"));
                        }
                    }
                }
            }
        }

        let mut frobenius = Vec::new();
        for a in 0..m {
            for b in 0..m {
                for c in 0..m {
                    let base = n(a, b, c);
                    if base != n(self.conj[a], c, b) {
                        frobenius.push(format!("N[{a}][{b}][{c}] vs N[conj {a}][{c}][{b}]"));
                    }
                    if base != n(c, self.conj[b], a) {
                        frobenius.push(format!("N[{a}][{b}][{c}] vs N[{c}][conj {b}][{a}]"));
                    }
                }
            }
        }

        ValidationReport {
            checks: vec![
                CheckResult { name: "unit_law", violations: unit },
                CheckResult { name: "conjugate_pairing", violations: pairing },
                CheckResult { name: "conjugation_involution", violations: involution },
                CheckResult { name: "commutativity", violations: commutativity },
                CheckResult { name: "associativity", violations: associativity },
                CheckResult { name: "frobenius_symmetry", violations: frobenius },
            ],
        }
    }

    /// Bilinear fusion product of two sector sums.
    pub fn fuse(&self, a: &SectorSum, b: &SectorSum) -> Result<SectorSum, FusionError> {
        if let Some(l) = a.max_label() {
            self.check_index(l)?;
        }
        if let Some(l) = b.max_label() {
            self.check_index(l)?;
        }
        let mut out: BTreeMap<usize, u64> = BTreeMap::new();
        for (la, ma) in a.iter() {
            for (lb, mb) in b.iter() {
                let pair = ma.checked_mul(mb).ok_or(FusionError::Overflow)?;
                for c in 0..self.len() {
                    let mult = self.n(la, lb, c);
                    if mult == 0 {
                        continue;
                    }
                    let add = pair.checked_mul(mult).ok_or(FusionError::Overflow)?;
                    let slot = out.entry(c).or_insert(0);
                    *slot = slot.checked_add(add).ok_or(FusionError::Overflow)?;
                }
            }
        }
        out.retain(|_, m| *m > 0);
        Ok(SectorSum { coeffs: out })
    }

    /// Fusion of two irreducible labels.
    pub fn fuse_labels(&self, a: usize, b: usize) -> Result<SectorSum, FusionError> {
        self.check_index(a)?;
        self.check_index(b)?;
        self.fuse(&SectorSum::single(a), &SectorSum::single(b))
    }

    /// Conjugate of a sector sum, label by label.
    pub fn conj_sum(&self, s: &SectorSum) -> SectorSum {
        SectorSum::from_pairs(s.iter().map(|(l, m)| (self.conj[l], m)))
    }

    /// Quantum dimension of every label: the Perron-Frobenius eigenvalue of
    /// the fusion matrix `(N_a)_{bc}`.
    ///
    /// The iteration runs on `N_a + 1` (same eigenvectors, spectrum shifted
    /// by one) because fusion matrices are often bipartite and plain power
    /// iteration would oscillate. Deterministic all-ones start.
    pub fn quantum_dims(&self) -> Result<Vec<f64>, FusionError> {
        let m = self.len();
        let mut dims = Vec::with_capacity(m);
        for a in 0..m {
            let mut v = vec![1.0f64; m];
            let mut eigenvalue = 0.0f64;
            let mut converged = false;
            for _ in 0..MAX_POWER_ITERATIONS {
                let mut w = vec![0.0f64; m];
                for b in 0..m {
                    let mut acc = v[b]; // the +1 shift
                    for c in 0..m {
                        acc += self.fusion[a][b][c] as f64 * v[c];
                    }
                    w[b] = acc;
                }
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm == 0.0 {
                    return Err(FusionError::NonConvergence { label: a });
                }
                for x in &mut w {
                    *x /= norm;
                }
                let delta = w
                    .iter()
                    .zip(&v)
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max);
                v = w;
                eigenvalue = norm;
                if delta < POWER_TOLERANCE {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(FusionError::NonConvergence { label: a });
            }
            dims.push(eigenvalue - 1.0);
        }
        Ok(dims)
    }

    /// Global index: the sum of squared quantum dimensions.
    pub fn global_index(&self) -> Result<f64, FusionError> {
        Ok(self.quantum_dims()?.iter().map(|d| d * d).sum())
    }

    /// Dimension of a sector sum given precomputed label dimensions.
    pub fn sum_dim(&self, s: &SectorSum, dims: &[f64]) -> f64 {
        s.iter().map(|(l, m)| m as f64 * dims[l]).sum()
    }

    /// Multiplicity of `target` inside the iterated product of `product`.
    pub fn hom_dim(&self, product: &[usize], target: usize) -> Result<u64, FusionError> {
        if product.is_empty() {
            return Err(FusionError::EmptyProduct);
        }
        self.check_index(target)?;
        let mut acc = SectorSum::single(product[0]);
        self.check_index(product[0])?;
        for &l in &product[1..] {
            acc = self.fuse(&acc, &SectorSum::single(l))?;
        }
        Ok(acc.coeff(target))
    }

    /// Multiplicity of the unit in the product of an n-tuple of labels.
    pub fn vacuum_multiplicity(&self, tuple: &[usize]) -> Result<u64, FusionError> {
        self.hom_dim(tuple, 0)
    }

    /// Render a sector sum using this ring's label names.
    pub fn format_sum(&self, s: &SectorSum) -> String {
        if s.is_zero() {
            return "0".into();
        }
        s.iter()
            .map(|(l, m)| {
                if m == 1 {
                    self.labels[l].clone()
                } else {
                    format!("{m}*{}", self.labels[l])
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }
}
