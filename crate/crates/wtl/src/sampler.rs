//! Constructive sampling recovery: weighted least squares from i.i.d.
//! evaluation points drawn from the Christoffel density of an orthonormal
//! system, plus exact worst-case error evaluation of any linear sampling
//! rule on truncated Hilbert model spaces.
//!
//! The default system is the tensor Fourier basis on the torus (uniform
//! reference measure), ordered coordinate-wise by the model space's
//! eigenvalue enumeration, so its Christoffel density is uniform for every
//! truncation size and all quadrature oracles stay exact.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::fmt_sci;
use crate::model_spaces::{tensor_top_eigenvalues_indexed, ModelSpace, MultiIndex};
use crate::transfer::{dku_bound, pietsch_bound, BoundConstants, TailSource};
use crate::Real;

/// An orthonormal system on a product domain with a reference probability
/// measure. Basis indices are 0-based and follow the eigenvalue enumeration
/// of the model space the system was built for.
pub trait OrthonormalSystem<F: Real>: Send + Sync {
    fn dim(&self) -> usize;
    /// Number of basis functions available.
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
    fn eval(&self, k: usize, x: &[F]) -> Complex<F>;
    /// An upper bound on the Christoffel density `rho_m`.
    fn density_sup(&self, m: usize) -> F;
    fn describe(&self) -> String;
}

fn frequency_of_index(k: u32) -> i64 {
    // eigenvalue index 1, 2, 3, 4, 5, ... -> frequency 0, 1, -1, 2, -2, ...
    if k % 2 == 0 {
        (k / 2) as i64
    } else {
        -(((k - 1) / 2) as i64)
    }
}

/// Complex exponentials `prod_i exp(2 pi i f_i x_i)` on the d-torus with the
/// uniform measure; `|b_k| = 1` everywhere, so the Christoffel density is
/// uniform for every truncation size.
pub struct TensorFourierBasis<F> {
    dim: usize,
    freqs: Vec<Vec<i64>>,
    _marker: std::marker::PhantomData<F>,
}

impl<F: Real> TensorFourierBasis<F> {
    /// Basis of the first `len` singular functions of the space, ordered by
    /// the tensor eigenvalue enumeration.
    pub fn for_space(space: &ModelSpace<F>, len: usize) -> Result<Self> {
        let (_, idxs) = tensor_top_eigenvalues_indexed(space, len)?;
        Ok(Self::from_multi_indices(space.dim(), &idxs))
    }

    pub fn from_multi_indices(dim: usize, idxs: &[MultiIndex]) -> Self {
        let freqs = idxs
            .iter()
            .map(|mi| mi.iter().map(|&k| frequency_of_index(k)).collect())
            .collect();
        Self {
            dim,
            freqs,
            _marker: std::marker::PhantomData,
        }
    }

    /// Univariate basis of length `len` (frequencies 0, 1, -1, 2, -2, ...).
    pub fn univariate(len: usize) -> Self {
        let idxs: Vec<MultiIndex> = (1..=len as u32).map(|k| vec![k]).collect();
        Self::from_multi_indices(1, &idxs)
    }
}

impl<F: Real> OrthonormalSystem<F> for TensorFourierBasis<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn len(&self) -> usize {
        self.freqs.len()
    }

    fn eval(&self, k: usize, x: &[F]) -> Complex<F> {
        let two_pi = F::of(std::f64::consts::TAU);
        let mut angle = F::zero();
        for (i, &f) in self.freqs[k].iter().enumerate() {
            angle += F::of(f as f64) * x[i];
        }
        angle = two_pi * angle;
        Complex::new(angle.cos(), angle.sin())
    }

    fn density_sup(&self, _m: usize) -> F {
        F::one()
    }

    fn describe(&self) -> String {
        format!("tensor Fourier basis (d={}, len={})", self.dim, self.freqs.len())
    }
}

/// Real trigonometric basis on the unit circle: `1, sqrt(2) cos(2 pi j x),
/// sqrt(2) sin(2 pi j x), ...`. Its Christoffel density is non-uniform for
/// even truncation sizes, which exercises the rejection sampler.
pub struct RealTrigBasis<F> {
    len: usize,
    _marker: std::marker::PhantomData<F>,
}

impl<F: Real> RealTrigBasis<F> {
    pub fn new(len: usize) -> Self {
        Self {
            len,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<F: Real> OrthonormalSystem<F> for RealTrigBasis<F> {
    fn dim(&self) -> usize {
        1
    }

    fn len(&self) -> usize {
        self.len
    }

    fn eval(&self, k: usize, x: &[F]) -> Complex<F> {
        let two_pi = F::of(std::f64::consts::TAU);
        let sqrt2 = F::of(2.0).sqrt();
        let re = if k == 0 {
            F::one()
        } else {
            let j = F::of_usize(k.div_ceil(2));
            if k % 2 == 1 {
                sqrt2 * (two_pi * j * x[0]).cos()
            } else {
                sqrt2 * (two_pi * j * x[0]).sin()
            }
        };
        Complex::new(re, F::zero())
    }

    fn density_sup(&self, m: usize) -> F {
        if m % 2 == 1 {
            F::one()
        } else {
            F::of_usize(m + 1) / F::of_usize(m)
        }
    }

    fn describe(&self) -> String {
        format!("real trigonometric basis (len={})", self.len)
    }
}

/// The sampling density `rho_m(x) = (1/m) sum_{k<m} |b_k(x)|^2`.
pub struct ChristoffelDensity<'a, F: Real> {
    system: &'a dyn OrthonormalSystem<F>,
    m: usize,
}

/// Build the Christoffel density for the first `m` basis functions.
pub fn christoffel_density<F: Real>(
    system: &dyn OrthonormalSystem<F>,
    m: usize,
) -> Result<ChristoffelDensity<'_, F>> {
    if m == 0 {
        return Err(Error::Domain("density needs m >= 1".into()));
    }
    if m > system.len() {
        return Err(Error::InsufficientLength(format!(
            "m = {m} exceeds system length {}",
            system.len()
        )));
    }
    Ok(ChristoffelDensity { system, m })
}

impl<F: Real> ChristoffelDensity<'_, F> {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eval(&self, x: &[F]) -> F {
        let mut sum = F::zero();
        for k in 0..self.m {
            sum += self.system.eval(k, x).norm_sqr();
        }
        sum / F::of_usize(self.m)
    }

    /// Midpoint-rule mass over the unit cube; should be 1 to quadrature
    /// accuracy for a genuinely orthonormal system.
    pub fn quadrature_mass(&self, grid_per_dim: usize) -> Result<F> {
        let pts = product_grid(self.system.dim(), grid_per_dim)?;
        let total: F = pts.iter().map(|x| self.eval(x)).sum();
        Ok(total / F::of_usize(pts.len()))
    }
}

fn product_grid<F: Real>(dim: usize, grid_per_dim: usize) -> Result<Vec<Vec<F>>> {
    if grid_per_dim == 0 {
        return Err(Error::InvalidParameter("grid must be nonempty".into()));
    }
    if dim > 3 {
        return Err(Error::Unsupported(
            "quadrature grids supported for d <= 3 only".into(),
        ));
    }
    let line: Vec<F> = (0..grid_per_dim)
        .map(|i| (F::of_usize(i) + F::of(0.5)) / F::of_usize(grid_per_dim))
        .collect();
    let mut pts: Vec<Vec<F>> = vec![Vec::new()];
    for _ in 0..dim {
        let mut next = Vec::with_capacity(pts.len() * grid_per_dim);
        for p in &pts {
            for &t in &line {
                let mut q = p.clone();
                q.push(t);
                next.push(q);
            }
        }
        pts = next;
    }
    Ok(pts)
}

/// Verify pairwise orthonormality of the first `m` functions on a midpoint
/// quadrature grid. Returns the max Gram deviation; fails above 1e-8.
pub fn verify_orthonormality<F: Real>(
    system: &dyn OrthonormalSystem<F>,
    m: usize,
    grid_per_dim: usize,
) -> Result<F> {
    if m == 0 || m > system.len() {
        return Err(Error::InvalidParameter(format!(
            "m must lie in 1..={}, got {m}",
            system.len()
        )));
    }
    let pts = product_grid::<F>(system.dim(), grid_per_dim)?;
    let npts = F::of_usize(pts.len());
    let mut max_dev = F::zero();
    for j in 0..m {
        for k in j..m {
            let mut acc = Complex::new(F::zero(), F::zero());
            for x in &pts {
                acc += self_conj_product(system.eval(j, x), system.eval(k, x));
            }
            let gram = Complex::new(acc.re / npts, acc.im / npts);
            let target = if j == k { F::one() } else { F::zero() };
            let dev = ((gram.re - target) * (gram.re - target) + gram.im * gram.im).sqrt();
            max_dev = max_dev.max(dev);
        }
    }
    if max_dev > F::of(1e-8) {
        return Err(Error::Validation(format!(
            "orthonormality deviation {} exceeds 1e-8",
            fmt_sci(max_dev)
        )));
    }
    Ok(max_dev)
}

fn self_conj_product<F: Real>(a: Complex<F>, b: Complex<F>) -> Complex<F> {
    // a * conj(b)
    Complex::new(a.re * b.re + a.im * b.im, a.im * b.re - a.re * b.im)
}

/// Point set, weights and basis size for one weighted least-squares run.
/// Weights are `1 / rho_m(x_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan<F> {
    pub points: Vec<Vec<F>>,
    pub weights: Vec<F>,
    pub m: usize,
    pub seed: u64,
    pub stream: u64,
}

impl<F: Real> SamplingPlan<F> {
    /// Deterministic plan from explicit points; weights must be positive.
    pub fn explicit(points: Vec<Vec<F>>, weights: Vec<F>, m: usize) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidParameter(
                "need equally many points and weights, at least one".into(),
            ));
        }
        if m == 0 {
            return Err(Error::InvalidParameter("m must be >= 1".into()));
        }
        if weights.iter().any(|w| !(*w > F::zero())) {
            return Err(Error::InvalidParameter("weights must be positive".into()));
        }
        let dim = points[0].len();
        if points.iter().any(|p| p.len() != dim) {
            return Err(Error::InvalidParameter("ragged point set".into()));
        }
        Ok(Self {
            points,
            weights,
            m,
            seed: 0,
            stream: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// JSON-shaped structured text with seed, points, weights and m.
    pub fn to_text(&self) -> String {
        let mut out = String::from("{\n");
        out.push_str(&format!("  \"seed\": {},\n", self.seed));
        out.push_str(&format!("  \"stream\": {},\n", self.stream));
        out.push_str(&format!("  \"m\": {},\n", self.m));
        out.push_str("  \"points\": [\n");
        for (i, p) in self.points.iter().enumerate() {
            let coords = p.iter().map(|c| fmt_sci(*c)).collect::<Vec<_>>().join(", ");
            let sep = if i + 1 == self.points.len() { "" } else { "," };
            out.push_str(&format!("    [{coords}]{sep}\n"));
        }
        out.push_str("  ],\n  \"weights\": [\n");
        for (i, w) in self.weights.iter().enumerate() {
            let sep = if i + 1 == self.weights.len() { "" } else { "," };
            out.push_str(&format!("    {}{}\n", fmt_sci(*w), sep));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

const REJECTION_BUDGET_PER_POINT: u64 = 10_000;

/// Draw `n` i.i.d. points from the Christoffel density by rejection against
/// the uniform proposal, bit-reproducible for a given `(seed, stream)` pair.
///
/// Stream-splitting rule for repeated trials: the base seed stays fixed and
/// trial `t` of grid row `r` uses `stream = (r << 16) | t`.
pub fn draw_plan_stream<F: Real>(
    system: &dyn OrthonormalSystem<F>,
    m: usize,
    n: usize,
    seed: u64,
    stream: u64,
) -> Result<SamplingPlan<F>> {
    if n < m {
        return Err(Error::InvalidParameter(format!(
            "n = {n} < m = {m}: the design cannot determine {m} coefficients"
        )));
    }
    let density = christoffel_density(system, m)?;
    let sup = system.density_sup(m);
    if !(sup > F::zero() && sup.is_finite()) {
        return Err(Error::InvalidParameter("density sup bound must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let dim = system.dim();
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let mut budget = REJECTION_BUDGET_PER_POINT.saturating_mul(n as u64);
    while points.len() < n {
        if budget == 0 {
            return Err(Error::Sampling(format!(
                "rejection sampling exceeded its iteration budget ({} per point)",
                REJECTION_BUDGET_PER_POINT
            )));
        }
        budget -= 1;
        let x: Vec<F> = (0..dim).map(|_| F::of(rng.gen::<f64>())).collect();
        let u = F::of(rng.gen::<f64>());
        let rho = density.eval(&x);
        if u * sup <= rho {
            weights.push(rho.recip());
            points.push(x);
        }
    }
    Ok(SamplingPlan {
        points,
        weights,
        m,
        seed,
        stream,
    })
}

/// [`draw_plan_stream`] on the default stream 0.
pub fn draw_plan<F: Real>(
    system: &dyn OrthonormalSystem<F>,
    m: usize,
    n: usize,
    seed: u64,
) -> Result<SamplingPlan<F>> {
    draw_plan_stream(system, m, n, seed, 0)
}

/// Weighted design matrix with its SVD factorization and condition
/// diagnostic; applies the linear recovery map to sample vectors.
pub struct RecoveryOperator<F: Real + RealField> {
    svd: nalgebra::SVD<Complex<F>, nalgebra::Dyn, nalgebra::Dyn>,
    sqrt_weights: Vec<F>,
    pub condition: F,
    n: usize,
    m: usize,
}

impl<F: Real + RealField> RecoveryOperator<F> {
    pub fn build(system: &dyn OrthonormalSystem<F>, plan: &SamplingPlan<F>) -> Result<Self> {
        let n = plan.points.len();
        let m = plan.m;
        if m > system.len() {
            return Err(Error::InsufficientLength(format!(
                "plan needs {m} basis functions, system holds {}",
                system.len()
            )));
        }
        if n < m {
            return Err(Error::Singular {
                condition: f64::INFINITY,
                detail: format!("n = {n} < m = {m}: cannot determine {m} coefficients"),
            });
        }
        if plan.points.iter().any(|p| p.len() != system.dim()) {
            return Err(Error::InvalidParameter(
                "plan dimension does not match the system".into(),
            ));
        }
        let sqrt_weights: Vec<F> = plan.weights.iter().map(|w| Float::sqrt(*w)).collect();
        let design = DMatrix::<Complex<F>>::from_fn(n, m, |i, j| {
            let b = system.eval(j, &plan.points[i]);
            Complex::new(sqrt_weights[i] * b.re, sqrt_weights[i] * b.im)
        });
        let svd = nalgebra::SVD::new(design, true, true);
        let mut smax = F::zero();
        let mut smin = Float::infinity();
        for s in svd.singular_values.iter() {
            smax = Float::max(smax, *s);
            smin = Float::min(smin, *s);
        }
        let rank_floor = smax * Float::epsilon() * F::of_usize(n.max(m)) * F::of(16.0);
        let condition = if smin > F::zero() {
            smax / smin
        } else {
            Float::infinity()
        };
        if !(smin > rank_floor) {
            return Err(Error::Singular {
                condition: condition.as_f64(),
                detail: format!("design matrix is rank-deficient (n={n}, m={m})"),
            });
        }
        Ok(Self {
            svd,
            sqrt_weights,
            condition,
            n,
            m,
        })
    }

    pub fn sample_count(&self) -> usize {
        self.n
    }

    pub fn basis_size(&self) -> usize {
        self.m
    }

    /// Coefficients minimizing the weighted residual sum of squares; linear
    /// in the samples.
    pub fn solve(&self, samples: &[Complex<F>]) -> Result<Vec<Complex<F>>> {
        if samples.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "{} samples supplied, plan has {} points",
                samples.len(),
                self.n
            )));
        }
        let rhs = DVector::<Complex<F>>::from_fn(self.n, |i, _| {
            Complex::new(
                self.sqrt_weights[i] * samples[i].re,
                self.sqrt_weights[i] * samples[i].im,
            )
        });
        let sol = self
            .svd
            .solve(&rhs, F::of(1e-300))
            .map_err(|e| Error::Singular {
                condition: self.condition.as_f64(),
                detail: e.to_string(),
            })?;
        Ok(sol.iter().copied().collect())
    }

    /// Recovery coefficients for every column of a raw sample matrix.
    fn solve_matrix(&self, raw_columns: &DMatrix<Complex<F>>) -> Result<DMatrix<Complex<F>>> {
        let mut rhs = raw_columns.clone();
        for i in 0..self.n {
            for j in 0..rhs.ncols() {
                let v = rhs[(i, j)];
                rhs[(i, j)] = Complex::new(self.sqrt_weights[i] * v.re, self.sqrt_weights[i] * v.im);
            }
        }
        self.svd.solve(&rhs, F::of(1e-300)).map_err(|e| Error::Singular {
            condition: self.condition.as_f64(),
            detail: e.to_string(),
        })
    }
}

/// Weighted least-squares recovery of expansion coefficients from samples.
pub fn solve_weighted_ls<F: Real + RealField>(
    system: &dyn OrthonormalSystem<F>,
    plan: &SamplingPlan<F>,
    samples: &[Complex<F>],
) -> Result<Vec<Complex<F>>> {
    RecoveryOperator::build(system, plan)?.solve(samples)
}

/// Exact worst-case L2 error of a plan's linear recovery rule over the unit
/// ball of the truncated model space.
#[derive(Debug, Clone, Copy)]
pub struct WorstCaseError<F> {
    /// Largest singular value of the error operator on the truncated space.
    pub error: F,
    /// Exact information floor `sigma_{n+1}` for `n` sample points.
    pub floor_sigma: F,
    /// The unresolved remainder `sigma_{M+1}` of the truncation.
    pub truncation_remainder: F,
    /// Condition number of the weighted design.
    pub condition: F,
}

/// Evaluate the worst-case error of the weighted least-squares rule defined
/// by `plan` over the unit ball of the space truncated to its `trunc`
/// leading singular functions.
pub fn empirical_worst_case_error<F: Real + RealField>(
    space: &ModelSpace<F>,
    plan: &SamplingPlan<F>,
    trunc: usize,
) -> Result<WorstCaseError<F>> {
    if trunc < plan.m {
        return Err(Error::InvalidParameter(format!(
            "truncation {trunc} smaller than plan basis size {}",
            plan.m
        )));
    }
    let n = plan.points.len();
    let need = trunc.max(n) + 1;
    let (eigs, idxs) = tensor_top_eigenvalues_indexed(space, need)?;
    let basis = TensorFourierBasis::from_multi_indices(space.dim(), &idxs[..trunc]);
    let op = RecoveryOperator::build(&basis, plan)?;

    // raw samples of each of the `trunc` singular functions at the plan
    // points
    let raw = DMatrix::<Complex<F>>::from_fn(n, trunc, |i, k| basis.eval(k, &plan.points[i]));
    let coef = op.solve_matrix(&raw)?; // m x trunc

    let sigma: Vec<F> = eigs.values().iter().map(|&v| Float::sqrt(v)).collect();
    let mut err_op = DMatrix::<Complex<F>>::zeros(trunc, trunc);
    for k in 0..trunc {
        for j in 0..plan.m {
            let c = coef[(j, k)];
            err_op[(j, k)] = Complex::new(-c.re * sigma[k], -c.im * sigma[k]);
        }
        err_op[(k, k)] += Complex::new(sigma[k], F::zero());
    }
    let svd = nalgebra::SVD::new(err_op, false, false);
    let mut error = F::zero();
    for s in svd.singular_values.iter() {
        error = Float::max(error, *s);
    }
    Ok(WorstCaseError {
        error,
        floor_sigma: sigma[n],
        truncation_remainder: sigma[trunc],
        condition: op.condition,
    })
}

/// One row of an empirical decay curve.
#[derive(Debug, Clone, Copy)]
pub struct CurveRow<F> {
    pub n: usize,
    pub m: usize,
    pub median_error: F,
    pub best_error: F,
    /// Exact information floor `sigma_{n+1}`.
    pub floor_sigma: F,
    /// Tail-sum ceiling from the transfer chain at index `n / b`, evaluated
    /// with the configured (idealized by default) constants.
    pub ceiling_bound: F,
}

#[derive(Debug, Clone)]
pub struct CurveOptions<F> {
    /// Oversampling rule `n = ceil(factor * m * ln(m + 1))`, inverted to
    /// pick `m` from `n`.
    pub oversample_factor: F,
    /// Fixed basis size overriding the oversampling rule.
    pub m_override: Option<usize>,
    /// Truncation `M = trunc_factor * m` for the exact error evaluation.
    pub trunc_factor: usize,
    pub consts: BoundConstants<F>,
}

impl<F: Real> Default for CurveOptions<F> {
    fn default() -> Self {
        Self {
            oversample_factor: F::of(2.0),
            m_override: None,
            trunc_factor: 4,
            consts: BoundConstants::idealized(),
        }
    }
}

/// Recommended sample count for a basis size under the oversampling rule.
pub fn oversampled_n<F: Real>(m: usize, factor: F) -> usize {
    let v = factor * F::of_usize(m) * F::of_usize(m + 1).ln();
    Float::ceil(v).as_f64() as usize
}

/// Largest `m >= 1` whose recommended sample count stays within `n`.
pub fn basis_size_for<F: Real>(n: usize, factor: F) -> usize {
    let mut m = 1;
    while oversampled_n(m + 1, factor) <= n {
        m += 1;
    }
    m
}

/// Trace the empirical worst-case error of weighted least squares over a
/// grid of sample counts: `trials` i.i.d. plans per count, median and best
/// reported, floor and ceiling columns alongside.
pub fn e_n_empirical_curve<F: Real + RealField>(
    space: &ModelSpace<F>,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    opts: &CurveOptions<F>,
) -> Result<Vec<CurveRow<F>>> {
    if n_grid.is_empty() {
        return Err(Error::InvalidParameter("empty n grid".into()));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("n grid must be increasing".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    if trials > (1 << 16) {
        return Err(Error::InvalidParameter("at most 65536 trials".into()));
    }
    if !(opts.oversample_factor > F::zero()) || opts.trunc_factor < 1 {
        return Err(Error::InvalidParameter(
            "oversample factor must be > 0 and trunc factor >= 1".into(),
        ));
    }

    let n_max = *n_grid.last().unwrap();
    let rows: Vec<(usize, usize, usize)> = n_grid
        .iter()
        .map(|&n| {
            let m = match opts.m_override {
                Some(m) => m,
                None => basis_size_for(n, opts.oversample_factor),
            };
            let trunc = (opts.trunc_factor * m).max(m + 1);
            (n, m, trunc)
        })
        .collect();
    for &(n, m, _) in &rows {
        if n < m {
            return Err(Error::Singular {
                condition: f64::INFINITY,
                detail: format!("n = {n} < m = {m}: cannot determine {m} coefficients"),
            });
        }
    }

    // exact widths once, long enough for floors and the summed-tail ceiling
    let trunc_max = rows.iter().map(|r| r.2).max().unwrap();
    let ceil_len = 4 * n_max + 16;
    let eigen_len = ceil_len.max(trunc_max.max(n_max) + 1);
    let eigs = tensor_top_eigenvalues_indexed(space, eigen_len)?.0;
    let sigma: Vec<F> = eigs.values().iter().map(|&v| Float::sqrt(v)).collect();
    let a_seq: Vec<F> = (1..eigen_len)
        .map(|k| pietsch_bound(sigma[k], k as u64))
        .collect::<Result<_>>()?;

    let cells: Vec<(usize, usize)> = (0..rows.len())
        .flat_map(|r| (0..trials).map(move |t| (r, t)))
        .collect();
    let errors: Vec<Result<F>> = cells
        .par_iter()
        .map(|&(r, t)| {
            let (n, m, trunc) = rows[r];
            let basis = TensorFourierBasis::for_space(space, trunc)?;
            let stream = ((r as u64) << 16) | t as u64;
            let plan = draw_plan_stream(&basis, m, n, seed, stream)?;
            Ok(empirical_worst_case_error(space, &plan, trunc)?.error)
        })
        .collect();

    let mut out = Vec::with_capacity(rows.len());
    for (r, &(n, m, _)) in rows.iter().enumerate() {
        let mut errs = Vec::with_capacity(trials);
        for t in 0..trials {
            match &errors[r * trials + t] {
                Ok(e) => errs.push(*e),
                Err(err) => {
                    return Err(Error::Sampling(format!(
                        "trial {t} at n = {n} failed: {err}"
                    )))
                }
            }
        }
        errs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let median = if trials % 2 == 1 {
            errs[trials / 2]
        } else {
            (errs[trials / 2 - 1] + errs[trials / 2]) / F::of(2.0)
        };
        let dku_n = ((n as u64) / opts.consts.dku_b).max(2);
        let ceiling = dku_bound(TailSource::Sequence(&a_seq), dku_n, &opts.consts)?.value;
        out.push(CurveRow {
            n,
            m,
            median_error: median,
            best_error: errs[0],
            floor_sigma: sigma[n],
            ceiling_bound: ceiling,
        });
    }
    Ok(out)
}

/// CSV serialization of a curve: `n,median_error,best_error,floor_sigma,ceiling_bound`.
pub fn curve_csv<F: Real>(rows: &[CurveRow<F>]) -> String {
    let mut out = String::from("n,median_error,best_error,floor_sigma,ceiling_bound\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n,
            fmt_sci(row.median_error),
            fmt_sci(row.best_error),
            fmt_sci(row.floor_sigma),
            fmt_sci(row.ceiling_bound)
        ));
    }
    out
}
