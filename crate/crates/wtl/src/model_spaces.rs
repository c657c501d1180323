//! Hilbert model spaces with explicitly known spectra.
//!
//! A model space is a tensor product of univariate eigenvalue families; its
//! d-variate spectrum is the nonincreasing rearrangement of all d-fold
//! products of univariate eigenvalues. In the Hilbert case the linear and
//! Gelfand widths coincide with the singular values of the embedding,
//! `a_n = c_n = sigma_{n+1}`, so exact widths and the exact information
//! complexity for arbitrary linear measurements are available in closed
//! form. The nonlinear sampling width has no algorithm here and is obtained
//! only empirically via the sampler module.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::Real;

/// Univariate eigenvalue family descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum EigenFamily<F> {
    /// `lambda_k = omega^(k-1)` with `0 < omega < 1`.
    Geometric { omega: F },
    /// `lambda_k = exp(-c * k^kappa)` with `c > 0`, `kappa > 0`.
    StretchedExponential { c: F, kappa: F },
    /// A stored nonincreasing list; ties permitted.
    Explicit(Vec<F>),
}

impl<F: Real> EigenFamily<F> {
    pub fn validate(&self) -> Result<()> {
        match self {
            EigenFamily::Geometric { omega } => {
                if !(*omega > F::zero() && *omega < F::one()) {
                    return Err(Error::InvalidParameter(format!(
                        "geometric family needs omega in (0,1), got {omega}"
                    )));
                }
            }
            EigenFamily::StretchedExponential { c, kappa } => {
                if !(*c > F::zero()) || !(*kappa > F::zero()) {
                    return Err(Error::InvalidParameter(format!(
                        "stretched-exponential family needs c > 0 and kappa > 0, got c={c}, kappa={kappa}"
                    )));
                }
            }
            EigenFamily::Explicit(values) => {
                if values.is_empty() {
                    return Err(Error::InvalidParameter("explicit family is empty".into()));
                }
                if !(values[0] > F::zero()) {
                    return Err(Error::InvalidParameter(
                        "explicit family needs values[1] > 0".into(),
                    ));
                }
                for w in values.windows(2) {
                    if !(w[1] >= F::zero() && w[0] >= w[1]) {
                        return Err(Error::InvalidParameter(
                            "explicit family must be nonincreasing and nonnegative".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Number of terms the family can produce, if bounded.
    pub fn max_len(&self) -> Option<usize> {
        match self {
            EigenFamily::Explicit(values) => Some(values.len()),
            _ => None,
        }
    }

    /// First `count` eigenvalues, nonincreasing, indexed from 1.
    pub fn eigenvalues(&self, count: usize) -> Result<Vec<F>> {
        self.validate()?;
        if count == 0 {
            return Err(Error::InvalidParameter("count must be >= 1".into()));
        }
        match self {
            EigenFamily::Geometric { omega } => Ok((0..count)
                .map(|k| omega.powi(k as i32))
                .collect()),
            EigenFamily::StretchedExponential { c, kappa } => Ok((1..=count)
                .map(|k| (-*c * F::of_usize(k).powf(*kappa)).exp())
                .collect()),
            EigenFamily::Explicit(values) => {
                if count > values.len() {
                    return Err(Error::InsufficientLength(format!(
                        "explicit family holds {} values, {} requested",
                        values.len(),
                        count
                    )));
                }
                Ok(values[..count].to_vec())
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            EigenFamily::Geometric { omega } => format!("geometric(omega={omega})"),
            EigenFamily::StretchedExponential { c, kappa } => {
                format!("stretched-exponential(c={c}, kappa={kappa})")
            }
            EigenFamily::Explicit(values) => format!("explicit({} values)", values.len()),
        }
    }
}

/// Nonincreasing nonnegative squared singular values of a Hilbert embedding,
/// indexed from 1 (`lambda(1)` is the largest).
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSequence<F> {
    values: Vec<F>,
    source: String,
}

impl<F: Real> EigenSequence<F> {
    pub fn new(values: Vec<F>, source: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty eigenvalue sequence".into()));
        }
        if !(values[0] > F::zero()) {
            return Err(Error::InvalidParameter(
                "degenerate embedding: lambda_1 must be > 0".into(),
            ));
        }
        for w in values.windows(2) {
            if !(w[1] >= F::zero() && w[0] >= w[1]) {
                return Err(Error::InvalidParameter(
                    "eigenvalues must be nonincreasing and nonnegative".into(),
                ));
            }
        }
        Ok(Self {
            values,
            source: source.into(),
        })
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    /// 1-based access matching the standard indexing of singular values.
    pub fn lambda(&self, k: usize) -> Result<F> {
        if k == 0 || k > self.values.len() {
            return Err(Error::InsufficientLength(format!(
                "lambda({k}) requested, {} stored",
                self.values.len()
            )));
        }
        Ok(self.values[k - 1])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Scale every eigenvalue by `s > 0` (widths scale by `sqrt(s)`).
    pub fn scaled(&self, s: F) -> Result<Self> {
        if !(s > F::zero()) {
            return Err(Error::InvalidParameter("scale must be > 0".into()));
        }
        Self::new(
            self.values.iter().map(|&v| v * s).collect(),
            format!("{} scaled by {s}", self.source),
        )
    }
}

/// First `count` eigenvalues of a univariate family.
pub fn univariate_eigenvalues<F: Real>(
    family: &EigenFamily<F>,
    count: usize,
) -> Result<EigenSequence<F>> {
    EigenSequence::new(family.eigenvalues(count)?, family.describe())
}

/// Basis descriptor for the sampler's orthonormal system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisKind {
    /// Complex exponentials on the torus, tensorized and ordered by the
    /// eigenvalue enumeration; uniform Christoffel density.
    #[default]
    Fourier,
}

/// A d-fold tensor product of univariate eigenvalue families.
#[derive(Debug, Clone)]
pub struct ModelSpace<F> {
    families: Vec<EigenFamily<F>>,
    basis: BasisKind,
}

impl<F: Real> ModelSpace<F> {
    pub fn isotropic(d: usize, family: EigenFamily<F>) -> Result<Self> {
        family.validate()?;
        if d == 0 {
            return Err(Error::InvalidParameter("d must be >= 1".into()));
        }
        Ok(Self {
            families: vec![family; d],
            basis: BasisKind::default(),
        })
    }

    pub fn anisotropic(families: Vec<EigenFamily<F>>) -> Result<Self> {
        if families.is_empty() {
            return Err(Error::InvalidParameter("d must be >= 1".into()));
        }
        for f in &families {
            f.validate()?;
        }
        Ok(Self {
            families,
            basis: BasisKind::default(),
        })
    }

    pub fn dim(&self) -> usize {
        self.families.len()
    }

    pub fn families(&self) -> &[EigenFamily<F>] {
        &self.families
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn describe(&self) -> String {
        format!(
            "tensor d={} of [{}]",
            self.families.len(),
            self.families
                .iter()
                .map(|f| f.describe())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// Multi-index into the univariate factors, entries 1-based.
pub type MultiIndex = Vec<u32>;

struct HeapEntry<F> {
    value: F,
    log_sum: F,
    idx: MultiIndex,
}

impl<F: Real> HeapEntry<F> {
    /// Pop order: larger value first; exact value ties break by
    /// lexicographically smaller multi-index. Among underflowed-to-zero
    /// products, larger log-space sum first.
    fn cmp_entries(a: &Self, b: &Self) -> Ordering {
        match a.value.partial_cmp(&b.value).expect("no NaN eigenvalues") {
            Ordering::Equal => {
                if a.value == F::zero() && a.log_sum != b.log_sum {
                    a.log_sum
                        .partial_cmp(&b.log_sum)
                        .unwrap_or(Ordering::Equal)
                } else {
                    b.idx.cmp(&a.idx)
                }
            }
            ord => ord,
        }
    }
}

impl<F: Real> PartialEq for HeapEntry<F> {
    fn eq(&self, other: &Self) -> bool {
        Self::cmp_entries(self, other) == Ordering::Equal
    }
}
impl<F: Real> Eq for HeapEntry<F> {}
impl<F: Real> PartialOrd for HeapEntry<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(Self::cmp_entries(self, other))
    }
}
impl<F: Real> Ord for HeapEntry<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        Self::cmp_entries(self, other)
    }
}

/// Left-to-right product over coordinates, with the log-space sum carried
/// alongside so that ordering survives underflow.
fn tensor_product<F: Real>(per_coord: &[Vec<F>], idx: &[u32]) -> (F, F) {
    let mut value = F::one();
    let mut log_sum = F::zero();
    for (i, &k) in idx.iter().enumerate() {
        let lam = per_coord[i][(k - 1) as usize];
        value = value * lam;
        log_sum = log_sum + lam.ln();
    }
    (value, log_sum)
}

/// The `n` largest d-fold eigenvalue products with their multi-indices,
/// sorted nonincreasing. Ties are broken by lexicographic order of the
/// multi-index and every multi-index is emitted at most once; the result
/// matches brute-force enumeration of the full product grid.
pub fn tensor_top_eigenvalues_indexed<F: Real>(
    space: &ModelSpace<F>,
    n: usize,
) -> Result<(EigenSequence<F>, Vec<MultiIndex>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    let d = space.dim();
    let per_coord: Vec<Vec<F>> = space
        .families()
        .iter()
        .map(|f| {
            let avail = f.max_len().unwrap_or(n).min(n);
            f.eigenvalues(avail)
        })
        .collect::<Result<_>>()?;

    let mut grid_total: usize = 1;
    for c in &per_coord {
        grid_total = grid_total.saturating_mul(c.len());
    }
    if grid_total < n {
        return Err(Error::InsufficientLength(format!(
            "product grid holds {grid_total} multi-indices, {n} requested"
        )));
    }

    let mut heap: BinaryHeap<HeapEntry<F>> = BinaryHeap::new();
    let mut seen: HashSet<MultiIndex> = HashSet::new();
    let start: MultiIndex = vec![1; d];
    let (v, ls) = tensor_product(&per_coord, &start);
    seen.insert(start.clone());
    heap.push(HeapEntry {
        value: v,
        log_sum: ls,
        idx: start,
    });

    let mut values = Vec::with_capacity(n);
    let mut indices = Vec::with_capacity(n);
    while values.len() < n {
        let top = heap.pop().ok_or_else(|| {
            Error::InsufficientLength("enumeration frontier exhausted".into())
        })?;
        if !top.value.is_finite() {
            return Err(Error::Range(format!(
                "eigenvalue product overflowed at multi-index {:?}",
                top.idx
            )));
        }
        for coord in 0..d {
            let mut succ = top.idx.clone();
            succ[coord] += 1;
            if (succ[coord] as usize) <= per_coord[coord].len() && !seen.contains(&succ) {
                let (v, ls) = tensor_product(&per_coord, &succ);
                seen.insert(succ.clone());
                heap.push(HeapEntry {
                    value: v,
                    log_sum: ls,
                    idx: succ,
                });
            }
        }
        values.push(top.value);
        indices.push(top.idx);
    }

    let eigs = EigenSequence::new(values, space.describe())?;
    Ok((eigs, indices))
}

/// The `n` largest tensor-product eigenvalues, nonincreasing.
pub fn tensor_top_eigenvalues<F: Real>(space: &ModelSpace<F>, n: usize) -> Result<EigenSequence<F>> {
    tensor_top_eigenvalues_indexed(space, n).map(|(eigs, _)| eigs)
}

/// Which width family a sequence represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WidthKind {
    /// Linear widths `a_n` (optimal rank-n operators).
    Linear,
    /// Gelfand widths `c_n` (n arbitrary linear measurements).
    Gelfand,
    /// Linear sampling widths `e_n` (n point evaluations); no closed form,
    /// obtained only empirically.
    SamplingLinear,
}

impl WidthKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WidthKind::Linear => "linear",
            WidthKind::Gelfand => "gelfand",
            WidthKind::SamplingLinear => "sampling-linear",
        }
    }
}

/// A width sequence indexed from 0: `values[n]` is the n-th width, and
/// `values[0]` is the operator norm of the embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthSequence<F> {
    kind: WidthKind,
    values: Vec<F>,
}

impl<F: Real> WidthSequence<F> {
    pub fn new(kind: WidthKind, values: Vec<F>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("empty width sequence".into()));
        }
        for w in values.windows(2) {
            if !(w[1] >= F::zero() && w[0] >= w[1]) {
                return Err(Error::InvalidParameter(
                    "widths must be nonincreasing and nonnegative".into(),
                ));
            }
        }
        Ok(Self { kind, values })
    }

    pub fn kind(&self) -> WidthKind {
        self.kind
    }

    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The n-th width; fails loudly past the stored range instead of
    /// extrapolating.
    pub fn value(&self, n: usize) -> Result<F> {
        self.values.get(n).copied().ok_or_else(|| {
            Error::InsufficientLength(format!(
                "width index {n} requested, {} stored",
                self.values.len()
            ))
        })
    }

    /// Smallest stored index with `values[n] <= eps`, if any.
    pub fn first_index_below(&self, eps: F) -> Option<usize> {
        self.values.iter().position(|&v| v <= eps)
    }
}

/// Exact widths in the Hilbert case: `values[n] = sqrt(lambda_{n+1})`.
///
/// Only `linear` and `gelfand` are supported (they coincide); the sampling
/// width has no closed form.
pub fn widths_from_eigenvalues<F: Real>(
    eigs: &EigenSequence<F>,
    kind: WidthKind,
) -> Result<WidthSequence<F>> {
    match kind {
        WidthKind::Linear | WidthKind::Gelfand => {}
        WidthKind::SamplingLinear => {
            return Err(Error::Unsupported(
                "sampling-linear widths have no closed form; use the sampler module".into(),
            ))
        }
    }
    WidthSequence::new(kind, eigs.values().iter().map(|v| v.sqrt()).collect())
}

/// Exact information complexity for arbitrary linear measurements:
/// the smallest stored `n` with `c_n <= eps`.
///
/// Requires a Gelfand width sequence. Fails with a truncation error when no
/// stored index qualifies — never a silent answer.
pub fn n_all<F: Real>(widths: &WidthSequence<F>, eps: F) -> Result<usize> {
    if widths.kind() != WidthKind::Gelfand {
        return Err(Error::InvalidParameter(format!(
            "n_all needs Gelfand widths, got {}",
            widths.kind().as_str()
        )));
    }
    if !(eps > F::zero() && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "eps must be positive and finite, got {eps}"
        )));
    }
    widths.first_index_below(eps).ok_or_else(|| {
        Error::InsufficientLength(format!(
            "no stored width <= {eps}; {} entries available",
            widths.len()
        ))
    })
}
