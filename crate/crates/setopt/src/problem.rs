//! Objective families `F(x) = {f^1(x), ..., f^p(x)}` with analytic
//! derivative oracles and a finite-difference validator.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("oracle {kind} for function {index} returned a non-finite value at the query point")]
    NonFinite { kind: &'static str, index: usize },
    #[error("unknown example name `{0}`")]
    UnknownExample(String),
    #[error("point has dimension {got}, problem expects {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

type ValueOracle = dyn Fn(usize, &DVector<f64>) -> DVector<f64> + Send + Sync;
type JacobianOracle = dyn Fn(usize, &DVector<f64>) -> DMatrix<f64> + Send + Sync;
type HessianOracle = dyn Fn(usize, &DVector<f64>) -> Vec<DMatrix<f64>> + Send + Sync;

/// A family of `p` twice continuously differentiable maps `R^n -> R^m`,
/// indexed from 0, with a sampling box for random starts.
///
/// Oracles are pure functions of `(i, x)`; instances are immutable and can be
/// shared freely across threads.
#[derive(Clone)]
pub struct ProblemInstance {
    name: String,
    n: usize,
    m: usize,
    p: usize,
    value: Arc<ValueOracle>,
    jacobian: Arc<JacobianOracle>,
    hessian: Arc<HessianOracle>,
    sample_box: Vec<(f64, f64)>,
    rho_hint: Option<f64>,
}

impl fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("m", &self.m)
            .field("p", &self.p)
            .field("sample_box", &self.sample_box)
            .field("rho_hint", &self.rho_hint)
            .finish()
    }
}

/// Finite-difference validation report, maximum relative errors over all
/// functions, components and entries.
#[derive(Debug, Clone, Copy)]
pub struct FdReport {
    pub max_rel_err_jac: f64,
    pub max_rel_err_hess: f64,
}

impl ProblemInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        n: usize,
        m: usize,
        p: usize,
        value: Arc<ValueOracle>,
        jacobian: Arc<JacobianOracle>,
        hessian: Arc<HessianOracle>,
        sample_box: Vec<(f64, f64)>,
        rho_hint: Option<f64>,
    ) -> Self {
        assert!(p >= 1, "family must contain at least one function");
        assert_eq!(sample_box.len(), n, "sample box must be per-coordinate");
        assert!(sample_box.iter().all(|(lo, hi)| lo < hi), "degenerate sample box");
        Self { name: name.into(), n, m, p, value, jacobian, hessian, sample_box, rho_hint }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decision_dim(&self) -> usize {
        self.n
    }

    pub fn objective_dim(&self) -> usize {
        self.m
    }

    pub fn family_size(&self) -> usize {
        self.p
    }

    pub fn sample_box(&self) -> &[(f64, f64)] {
        &self.sample_box
    }

    pub fn rho_hint(&self) -> Option<f64> {
        self.rho_hint
    }

    fn check_point(&self, x: &DVector<f64>) -> Result<(), ProblemError> {
        if x.len() != self.n {
            return Err(ProblemError::DimensionMismatch { got: x.len(), expected: self.n });
        }
        Ok(())
    }

    /// Value of the i-th function (0-based).
    pub fn value(&self, i: usize, x: &DVector<f64>) -> Result<DVector<f64>, ProblemError> {
        self.check_point(x)?;
        assert!(i < self.p, "function index out of range");
        let v = (self.value)(i, x);
        debug_assert_eq!(v.len(), self.m);
        if v.iter().any(|t| !t.is_finite()) {
            return Err(ProblemError::NonFinite { kind: "value", index: i });
        }
        Ok(v)
    }

    /// All `p` values at `x`, in index order.
    pub fn evaluate_family(&self, x: &DVector<f64>) -> Result<Vec<DVector<f64>>, ProblemError> {
        (0..self.p).map(|i| self.value(i, x)).collect()
    }

    /// Jacobian of the i-th function at `x`; row `l` is the gradient of
    /// component `l`.
    pub fn jacobian(&self, i: usize, x: &DVector<f64>) -> Result<DMatrix<f64>, ProblemError> {
        self.check_point(x)?;
        assert!(i < self.p, "function index out of range");
        let j = (self.jacobian)(i, x);
        debug_assert_eq!((j.nrows(), j.ncols()), (self.m, self.n));
        if j.iter().any(|t| !t.is_finite()) {
            return Err(ProblemError::NonFinite { kind: "jacobian", index: i });
        }
        Ok(j)
    }

    /// Hessians of all `m` components of the i-th function at `x`.
    pub fn hessian_stack(&self, i: usize, x: &DVector<f64>) -> Result<Vec<DMatrix<f64>>, ProblemError> {
        self.check_point(x)?;
        assert!(i < self.p, "function index out of range");
        let h = (self.hessian)(i, x);
        debug_assert_eq!(h.len(), self.m);
        for hl in &h {
            debug_assert_eq!((hl.nrows(), hl.ncols()), (self.n, self.n));
            if hl.iter().any(|t| !t.is_finite()) {
                return Err(ProblemError::NonFinite { kind: "hessian", index: i });
            }
        }
        Ok(h)
    }

    /// Central-difference check of both derivative oracles at `x`.
    ///
    /// Jacobians are differenced from values; Hessians are differenced from
    /// Jacobian rows, which keeps the roundoff of second derivatives at the
    /// level of first differences.
    pub fn fd_check(&self, x: &DVector<f64>, h: f64) -> Result<FdReport, ProblemError> {
        self.check_point(x)?;
        assert!(h > 0.0, "step must be positive");
        let rel = |approx: f64, exact: f64| (approx - exact).abs() / (1.0 + exact.abs());
        let mut err_jac: f64 = 0.0;
        let mut err_hess: f64 = 0.0;
        for i in 0..self.p {
            let jac = self.jacobian(i, x)?;
            let hess = self.hessian_stack(i, x)?;
            for k in 0..self.n {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                let vp = self.value(i, &xp)?;
                let vm = self.value(i, &xm)?;
                let jp = self.jacobian(i, &xp)?;
                let jm = self.jacobian(i, &xm)?;
                for l in 0..self.m {
                    let d = (vp[l] - vm[l]) / (2.0 * h);
                    if !d.is_finite() {
                        return Err(ProblemError::NonFinite { kind: "fd-jacobian", index: i });
                    }
                    err_jac = err_jac.max(rel(d, jac[(l, k)]));
                    for q in 0..self.n {
                        let dd = (jp[(l, q)] - jm[(l, q)]) / (2.0 * h);
                        if !dd.is_finite() {
                            return Err(ProblemError::NonFinite { kind: "fd-hessian", index: i });
                        }
                        err_hess = err_hess.max(rel(dd, hess[l][(q, k)]));
                    }
                }
            }
        }
        Ok(FdReport { max_rel_err_jac: err_jac, max_rel_err_hess: err_hess })
    }

    /// Uniform sample from the instance's box.
    pub fn sample_start<R: rand::Rng>(&self, rng: &mut R) -> DVector<f64> {
        DVector::from_iterator(
            self.n,
            self.sample_box.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)),
        )
    }
}
