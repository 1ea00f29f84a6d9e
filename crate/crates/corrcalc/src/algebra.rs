//! The convolution algebra on a finite composition table: involution, time
//! evolutions, the operator representation with creation/annihilation
//! operators, Hamiltonians, and the ratio generator with its commutators.
//!
//! Tables are finite truncations. Any operation that would need a label
//! outside the table fails loudly with a truncation error rather than
//! silently dropping terms.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("label {0} missing from table")]
    UnknownLabel(String),
    #[error("label {0} contains the reserved separator '|'")]
    ReservedSeparator(String),
    #[error("degree of label {0} must be positive")]
    ZeroDegree(String),
    #[error("transpose of {label} is {transpose}, which is inconsistent")]
    BadTranspose { label: String, transpose: String },
    #[error("entry ({left},{right}) violates graph composability")]
    NotComposable { left: String, right: String },
    #[error(
        "entry ({left},{right}) lists component {component} with inconsistent endpoint graphs"
    )]
    BadComponentGraphs {
        left: String,
        right: String,
        component: String,
    },
    #[error("entry ({left},{right}) breaks the degree product rule: components sum to ({sum_n},{sum_m}), expected ({expected_n},{expected_m})")]
    DegreeProductRule {
        left: String,
        right: String,
        sum_n: usize,
        sum_m: usize,
        expected_n: usize,
        expected_m: usize,
    },
    #[error("entry ({left},{right}) repeats component {component}")]
    RepeatedComponent {
        left: String,
        right: String,
        component: String,
    },
    #[error("composition of ({left},{right}) leaves the table")]
    TruncationEscape { left: String, right: String },
    #[error("label {0} escapes the chosen basis")]
    BasisEscape(String),
    #[error("basis labels do not share a common target graph: {0} vs {1}")]
    MixedBasis(String, String),
    #[error("division uniqueness fails: {product} factors as {left}∘{right1} and {left}∘{right2}")]
    UniquenessViolation {
        left: String,
        product: String,
        right1: String,
        right2: String,
    },
    #[error("empty basis")]
    EmptyBasis,
}

/// Degree and endpoint data for one correspondence label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelInfo {
    /// Generic multiplicity of the left covering map.
    pub n: usize,
    /// Generic multiplicity of the right covering map.
    pub m: usize,
    pub source: String,
    pub target: String,
    pub transpose: String,
}

/// A finite, validated composition table. Multi-component composites are
/// already expanded: every entry lists its component labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositionTable {
    labels: BTreeMap<String, LabelInfo>,
    entries: BTreeMap<(String, String), Vec<String>>,
    division_ok: bool,
}

impl CompositionTable {
    pub fn new(
        labels: BTreeMap<String, LabelInfo>,
        entries: BTreeMap<(String, String), Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        for (label, info) in &labels {
            if label.contains('|') {
                return Err(AlgebraError::ReservedSeparator(label.clone()));
            }
            if info.n == 0 || info.m == 0 {
                return Err(AlgebraError::ZeroDegree(label.clone()));
            }
            let t = labels
                .get(&info.transpose)
                .ok_or_else(|| AlgebraError::UnknownLabel(info.transpose.clone()))?;
            let consistent = t.transpose == *label
                && t.n == info.m
                && t.m == info.n
                && t.source == info.target
                && t.target == info.source;
            if !consistent {
                return Err(AlgebraError::BadTranspose {
                    label: label.clone(),
                    transpose: info.transpose.clone(),
                });
            }
        }
        for ((a, b), components) in &entries {
            let ia = labels
                .get(a)
                .ok_or_else(|| AlgebraError::UnknownLabel(a.clone()))?;
            let ib = labels
                .get(b)
                .ok_or_else(|| AlgebraError::UnknownLabel(b.clone()))?;
            if ia.target != ib.source {
                return Err(AlgebraError::NotComposable {
                    left: a.clone(),
                    right: b.clone(),
                });
            }
            let mut seen = BTreeSet::new();
            let (mut sum_n, mut sum_m) = (0usize, 0usize);
            for c in components {
                let ic = labels
                    .get(c)
                    .ok_or_else(|| AlgebraError::UnknownLabel(c.clone()))?;
                if !seen.insert(c.clone()) {
                    return Err(AlgebraError::RepeatedComponent {
                        left: a.clone(),
                        right: b.clone(),
                        component: c.clone(),
                    });
                }
                if ic.source != ia.source || ic.target != ib.target {
                    return Err(AlgebraError::BadComponentGraphs {
                        left: a.clone(),
                        right: b.clone(),
                        component: c.clone(),
                    });
                }
                sum_n += ic.n;
                sum_m += ic.m;
            }
            if sum_n != ia.n * ib.n || sum_m != ia.m * ib.m {
                return Err(AlgebraError::DegreeProductRule {
                    left: a.clone(),
                    right: b.clone(),
                    sum_n,
                    sum_m,
                    expected_n: ia.n * ib.n,
                    expected_m: ia.m * ib.m,
                });
            }
        }
        let division_ok = check_division(&entries).is_ok();
        Ok(CompositionTable {
            labels,
            entries,
            division_ok,
        })
    }

    /// Class-level tables may repeat a component (two cobordant components
    /// of one composite) and their degree sums no longer match the product
    /// rule; build with those two checks relaxed, everything else intact.
    pub fn new_relaxed(
        labels: BTreeMap<String, LabelInfo>,
        entries: BTreeMap<(String, String), Vec<String>>,
    ) -> Result<Self, AlgebraError> {
        match CompositionTable::new(labels.clone(), entries.clone()) {
            Ok(t) => Ok(t),
            Err(AlgebraError::DegreeProductRule { .. })
            | Err(AlgebraError::RepeatedComponent { .. }) => {
                for (label, info) in &labels {
                    if label.contains('|') {
                        return Err(AlgebraError::ReservedSeparator(label.clone()));
                    }
                    if info.n == 0 || info.m == 0 {
                        return Err(AlgebraError::ZeroDegree(label.clone()));
                    }
                    let t = labels
                        .get(&info.transpose)
                        .ok_or_else(|| AlgebraError::UnknownLabel(info.transpose.clone()))?;
                    if t.transpose != *label || t.n != info.m || t.m != info.n {
                        return Err(AlgebraError::BadTranspose {
                            label: label.clone(),
                            transpose: info.transpose.clone(),
                        });
                    }
                }
                for ((a, b), components) in &entries {
                    let ia = labels
                        .get(a)
                        .ok_or_else(|| AlgebraError::UnknownLabel(a.clone()))?;
                    let ib = labels
                        .get(b)
                        .ok_or_else(|| AlgebraError::UnknownLabel(b.clone()))?;
                    if ia.target != ib.source {
                        return Err(AlgebraError::NotComposable {
                            left: a.clone(),
                            right: b.clone(),
                        });
                    }
                    for c in components {
                        labels
                            .get(c)
                            .ok_or_else(|| AlgebraError::UnknownLabel(c.clone()))?;
                    }
                }
                let division_ok = check_division(&entries).is_ok();
                Ok(CompositionTable {
                    labels,
                    entries,
                    division_ok,
                })
            }
            Err(e) => Err(e),
        }
    }

    pub fn labels(&self) -> &BTreeMap<String, LabelInfo> {
        &self.labels
    }

    pub fn entries(&self) -> &BTreeMap<(String, String), Vec<String>> {
        &self.entries
    }

    pub fn info(&self, label: &str) -> Result<&LabelInfo, AlgebraError> {
        self.labels
            .get(label)
            .ok_or_else(|| AlgebraError::UnknownLabel(label.to_string()))
    }

    pub fn entry(&self, a: &str, b: &str) -> Option<&Vec<String>> {
        self.entries.get(&(a.to_string(), b.to_string()))
    }

    /// Graph-level composability (the semigroupoid's partial product).
    pub fn composable(&self, a: &str, b: &str) -> bool {
        match (self.labels.get(a), self.labels.get(b)) {
            (Some(ia), Some(ib)) => ia.target == ib.source,
            _ => false,
        }
    }

    /// Whether left factors divide uniquely, the precondition for the
    /// annihilation/creation operators.
    pub fn division_ok(&self) -> bool {
        self.division_ok
    }

    pub fn division_witness(&self) -> Option<AlgebraError> {
        check_division(&self.entries).err()
    }
}

fn check_division(entries: &BTreeMap<(String, String), Vec<String>>) -> Result<(), AlgebraError> {
    // for fixed left factor, a product component must come from one right factor
    let mut seen: BTreeMap<(String, String), String> = BTreeMap::new();
    for ((a, b), components) in entries {
        for c in components {
            if let Some(previous) = seen.get(&(a.clone(), c.clone())) {
                if previous != b {
                    return Err(AlgebraError::UniquenessViolation {
                        left: a.clone(),
                        product: c.clone(),
                        right1: previous.clone(),
                        right2: b.clone(),
                    });
                }
            } else {
                seen.insert((a.clone(), c.clone()), b.clone());
            }
        }
    }
    Ok(())
}

/// A finitely supported complex function on correspondence labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AlgebraElement {
    pub coeffs: BTreeMap<String, Complex64>,
}

impl AlgebraElement {
    pub fn delta(label: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(label.to_string(), Complex64::new(1.0, 0.0));
        AlgebraElement { coeffs }
    }

    pub fn zero() -> Self {
        AlgebraElement::default()
    }

    pub fn add_term(&mut self, label: &str, value: Complex64) {
        let entry = self
            .coeffs
            .entry(label.to_string())
            .or_insert(Complex64::new(0.0, 0.0));
        *entry += value;
        if entry.norm() == 0.0 {
            self.coeffs.remove(label);
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        AlgebraElement {
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.coeffs {
            out.add_term(k, *v);
        }
        out
    }

    pub fn coeff(&self, label: &str) -> Complex64 {
        self.coeffs
            .get(label)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn max_norm_diff(&self, other: &Self) -> f64 {
        let keys: BTreeSet<&String> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter()
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Convolution `(f1 * f2)(M) = sum over M1∘M2 = M`, expanded over entry
/// components. Pairs whose endpoint graphs do not match contribute zero;
/// graph-composable pairs missing from the table are a truncation error.
pub fn convolve(
    f1: &AlgebraElement,
    f2: &AlgebraElement,
    table: &CompositionTable,
) -> Result<AlgebraElement, AlgebraError> {
    let mut out = AlgebraElement::zero();
    for (a, va) in &f1.coeffs {
        table.info(a)?;
        for (b, vb) in &f2.coeffs {
            table.info(b)?;
            if !table.composable(a, b) {
                continue;
            }
            let components = table
                .entry(a, b)
                .ok_or_else(|| AlgebraError::TruncationEscape {
                    left: a.clone(),
                    right: b.clone(),
                })?;
            for c in components {
                out.add_term(c, va * vb);
            }
        }
    }
    Ok(out)
}

/// The involution `f∨(M) = conj f(M∨)`.
pub fn involve(
    f: &AlgebraElement,
    table: &CompositionTable,
) -> Result<AlgebraElement, AlgebraError> {
    let mut out = AlgebraElement::zero();
    for (label, value) in &f.coeffs {
        let info = table.info(label)?;
        out.add_term(&info.transpose, value.conj());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionMode {
    /// Phase `n^{it}` from the left covering degree.
    Left,
    /// Phase `m^{it}` from the right covering degree.
    Right,
    /// Phase `(n/m)^{it}`, the composite of left at `t` and right at `-t`.
    Ratio,
}

/// Coefficientwise time evolution by covering-degree phases.
pub fn evolve(
    f: &AlgebraElement,
    t: f64,
    mode: EvolutionMode,
    table: &CompositionTable,
) -> Result<AlgebraElement, AlgebraError> {
    let mut out = AlgebraElement::zero();
    for (label, value) in &f.coeffs {
        let info = table.info(label)?;
        let log_ratio = match mode {
            EvolutionMode::Left => (info.n as f64).ln(),
            EvolutionMode::Right => (info.m as f64).ln(),
            EvolutionMode::Ratio => (info.n as f64 / info.m as f64).ln(),
        };
        let phase = Complex64::new(0.0, t * log_ratio).exp();
        out.add_term(label, value * phase);
    }
    Ok(out)
}

/// Dense complex matrix over an ordered label basis.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = OperatorMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = OperatorMatrix::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn mul(&self, other: &OperatorMatrix) -> OperatorMatrix {
        debug_assert_eq!(self.dim, other.dim);
        let mut out = OperatorMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for k in 0..self.dim {
                let a = self[(r, k)];
                if a.norm() == 0.0 {
                    continue;
                }
                for c in 0..self.dim {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        out
    }

    pub fn conj_transpose(&self) -> OperatorMatrix {
        let mut out = OperatorMatrix::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= y;
        }
        out
    }

    pub fn scaled(&self, factor: Complex64) -> OperatorMatrix {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x *= factor;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_norm_diff(&self, other: &OperatorMatrix) -> f64 {
        self.sub(other).max_abs()
    }

    /// Induced 1-norm: maximum column absolute sum.
    pub fn max_column_norm(&self) -> f64 {
        (0..self.dim)
            .map(|c| (0..self.dim).map(|r| self[(r, c)].norm()).sum())
            .fold(0.0, f64::max)
    }

    /// Conjugation `e^{i s H} self e^{-i s H}` for diagonal `H`.
    pub fn phase_conjugated(&self, diag: &[f64], s: f64) -> OperatorMatrix {
        debug_assert_eq!(diag.len(), self.dim);
        let mut out = self.clone();
        for r in 0..self.dim {
            for c in 0..self.dim {
                let phase = Complex64::new(0.0, s * (diag[r] - diag[c])).exp();
                out[(r, c)] *= phase;
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for OperatorMatrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for OperatorMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

fn basis_index(basis: &[String]) -> BTreeMap<&str, usize> {
    basis
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect()
}

fn validate_basis(basis: &[String], table: &CompositionTable) -> Result<(), AlgebraError> {
    if basis.is_empty() {
        return Err(AlgebraError::EmptyBasis);
    }
    let mut target: Option<&str> = None;
    for label in basis {
        let info = table.info(label)?;
        match target {
            None => target = Some(&info.target),
            Some(t) if t != info.target => {
                return Err(AlgebraError::MixedBasis(t.to_string(), info.target.clone()))
            }
            _ => {}
        }
    }
    Ok(())
}

/// Matrix of the regular-type representation of `f` on the span of the
/// basis: `(ρ(f)ξ)(M) = Σ_{M∘M₂ ∋ M component} f(M₁) ξ(M₂)`. Compositions
/// that land outside the basis are a truncation error.
pub fn represent(
    f: &AlgebraElement,
    basis: &[String],
    table: &CompositionTable,
) -> Result<OperatorMatrix, AlgebraError> {
    validate_basis(basis, table)?;
    let index = basis_index(basis);
    let mut out = OperatorMatrix::zeros(basis.len());
    for (m1, value) in &f.coeffs {
        table.info(m1)?;
        for (col, m2) in basis.iter().enumerate() {
            if !table.composable(m1, m2) {
                continue;
            }
            let components = table
                .entry(m1, m2)
                .ok_or_else(|| AlgebraError::TruncationEscape {
                    left: m1.clone(),
                    right: m2.clone(),
                })?;
            for c in components {
                let row = *index
                    .get(c.as_str())
                    .ok_or_else(|| AlgebraError::BasisEscape(c.clone()))?;
                out[(row, col)] += value;
            }
        }
    }
    Ok(out)
}

/// Annihilation operator `A_M = ρ(δ_M)` as a 0/1 matrix. Requires division
/// uniqueness so that `(A_M ξ)(M') = ξ(M'')` is well defined.
pub fn annihilator(
    m: &str,
    basis: &[String],
    table: &CompositionTable,
) -> Result<OperatorMatrix, AlgebraError> {
    if let Some(witness) = table.division_witness() {
        return Err(witness);
    }
    represent(&AlgebraElement::delta(m), basis, table)
}

/// Creation operator `A_M*`, the conjugate transpose of the annihilator.
pub fn creator(
    m: &str,
    basis: &[String],
    table: &CompositionTable,
) -> Result<OperatorMatrix, AlgebraError> {
    Ok(annihilator(m, basis, table)?.conj_transpose())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianMode {
    Left,
    Right,
}

pub fn hamiltonian_diag(
    basis: &[String],
    mode: HamiltonianMode,
    table: &CompositionTable,
) -> Result<Vec<f64>, AlgebraError> {
    validate_basis(basis, table)?;
    basis
        .iter()
        .map(|label| {
            let info = table.info(label)?;
            Ok(match mode {
                HamiltonianMode::Left => (info.n as f64).ln(),
                HamiltonianMode::Right => (info.m as f64).ln(),
            })
        })
        .collect()
}

/// Diagonal Hamiltonian `log n` (left) or `log m` (right) over the basis.
pub fn hamiltonian(
    basis: &[String],
    mode: HamiltonianMode,
    table: &CompositionTable,
) -> Result<OperatorMatrix, AlgebraError> {
    Ok(OperatorMatrix::diagonal(&hamiltonian_diag(
        basis, mode, table,
    )?))
}

/// Diagonal generator `log(n/m)` of the ratio evolution.
pub fn dirac_generator(
    basis: &[String],
    table: &CompositionTable,
) -> Result<OperatorMatrix, AlgebraError> {
    validate_basis(basis, table)?;
    let diag: Result<Vec<f64>, AlgebraError> = basis
        .iter()
        .map(|label| {
            let info = table.info(label)?;
            Ok((info.n as f64 / info.m as f64).ln())
        })
        .collect();
    Ok(OperatorMatrix::diagonal(&diag?))
}

/// Max-column-norm of the commutator `[D, X]`.
pub fn commutator_norm(d: &OperatorMatrix, x: &OperatorMatrix) -> f64 {
    d.mul(x).sub(&x.mul(d)).max_column_norm()
}

/// Residual of the Hamiltonian conjugation identity
/// `ρ(σ_t(f)) = e^{itH} ρ(f) e^{-itH}` in max norm. For the ratio mode the
/// generator is `log(n/m)`.
pub fn conjugation_check(
    f: &AlgebraElement,
    t: f64,
    basis: &[String],
    table: &CompositionTable,
    mode: EvolutionMode,
) -> Result<f64, AlgebraError> {
    let diag: Vec<f64> = match mode {
        EvolutionMode::Left => hamiltonian_diag(basis, HamiltonianMode::Left, table)?,
        EvolutionMode::Right => hamiltonian_diag(basis, HamiltonianMode::Right, table)?,
        EvolutionMode::Ratio => {
            let left = hamiltonian_diag(basis, HamiltonianMode::Left, table)?;
            let right = hamiltonian_diag(basis, HamiltonianMode::Right, table)?;
            left.iter().zip(&right).map(|(l, r)| l - r).collect()
        }
    };
    let lhs = represent(&evolve(f, t, mode, table)?, basis, table)?;
    let rhs = represent(f, basis, table)?.phase_conjugated(&diag, t);
    Ok(lhs.max_norm_diff(&rhs))
}

/// Inner product `<ξ, ζ> = Σ conj(ξ(M)) ζ(M)` over the basis coordinates.
pub fn inner_product(xi: &[Complex64], zeta: &[Complex64]) -> Complex64 {
    xi.iter().zip(zeta).map(|(a, b)| a.conj() * b).sum()
}
