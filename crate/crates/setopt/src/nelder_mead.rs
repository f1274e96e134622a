//! A small Nelder-Mead simplex minimizer.
//!
//! Used as the derivative-free cross-check for the certified direction
//! solver. Standard coefficients (reflection 1, expansion 2, contraction 0.5,
//! shrink 0.5) and a combined domain/value stopping rule.

use nalgebra::DVector;

#[derive(Debug, Clone, Copy)]
pub struct NelderMeadOpts {
    /// Initial simplex edge length.
    pub scale: f64,
    /// Stop when the simplex collapses below this sup-norm diameter.
    pub x_tol: f64,
    /// Stop when the value spread over the simplex falls below this.
    pub f_tol: f64,
    pub max_iters: usize,
}

impl Default for NelderMeadOpts {
    fn default() -> Self {
        Self { scale: 1.0, x_tol: 1e-8, f_tol: 1e-12, max_iters: 2000 }
    }
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: DVector<f64>,
    pub value: f64,
    pub iters: usize,
}

/// Minimizes `f` from `x0` with a right-angled initial simplex.
pub fn minimize<F: Fn(&DVector<f64>) -> f64>(
    f: F,
    x0: &DVector<f64>,
    opts: &NelderMeadOpts,
) -> NelderMeadResult {
    let n = x0.len();
    assert!(n >= 1);
    let mut simplex: Vec<(DVector<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.clone(), f(x0)));
    for k in 0..n {
        let mut xk = x0.clone();
        xk[k] += opts.scale;
        let fx = f(&xk);
        simplex.push((xk, fx));
    }

    let mut iters = 0;
    while iters < opts.max_iters {
        iters += 1;
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| (x - &simplex[0].0).amax())
            .fold(0.0, f64::max);
        if (worst - best).abs() <= opts.f_tol && diameter <= opts.x_tol {
            break;
        }

        // centroid of all but the worst
        let mut centroid = DVector::zeros(n);
        for (x, _) in &simplex[..n] {
            centroid += x;
        }
        centroid /= n as f64;

        let reflected = &centroid * 2.0 - &simplex[n].0;
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = &centroid + (&reflected - &centroid) * 2.0;
            let fe = f(&expanded);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted = if fr < worst {
                &centroid + (&reflected - &centroid) * 0.5
            } else {
                &centroid + (&simplex[n].0 - &centroid) * 0.5
            };
            let fc = f(&contracted);
            if fc < worst.min(fr) {
                simplex[n] = (contracted, fc);
            } else {
                // shrink toward the best vertex
                let anchor = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    entry.0 = &anchor + (&entry.0 - &anchor) * 0.5;
                    entry.1 = f(&entry.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    NelderMeadResult { x: simplex[0].0.clone(), value: simplex[0].1, iters }
}

/// Multistart wrapper: runs from each start, then restarts once from the
/// incumbent with a smaller simplex to escape stagnation on ridges.
pub fn minimize_multistart<F: Fn(&DVector<f64>) -> f64>(
    f: F,
    starts: &[DVector<f64>],
    opts: &NelderMeadOpts,
) -> NelderMeadResult {
    assert!(!starts.is_empty());
    let mut best: Option<NelderMeadResult> = None;
    let mut total = 0;
    for start in starts {
        let run = minimize(&f, start, opts);
        total += run.iters;
        if best.as_ref().is_none_or(|b| run.value < b.value) {
            best = Some(run);
        }
    }
    let incumbent = best.expect("at least one start");
    let polish_opts = NelderMeadOpts { scale: (opts.scale * 1e-2).max(10.0 * opts.x_tol), ..*opts };
    let polished = minimize(&f, &incumbent.x, &polish_opts);
    total += polished.iters;
    let mut result = if polished.value < incumbent.value { polished } else { incumbent };
    result.iters = total;
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_bowl() {
        let f = |x: &DVector<f64>| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2);
        let res = minimize(f, &DVector::from_vec(vec![0.0, 0.0]), &NelderMeadOpts::default());
        assert_relative_eq!(res.x[0], 1.5, epsilon = 1e-5);
        assert_relative_eq!(res.x[1], -0.5, epsilon = 1e-5);
    }

    #[test]
    fn max_of_quadratics_ridge() {
        // minimum on the ridge where both branches tie
        let f = |x: &DVector<f64>| ((x[0] - 1.0).powi(2)).max((x[0] + 1.0).powi(2)) + x[1] * x[1];
        let starts = vec![
            DVector::from_vec(vec![0.7, 0.3]),
            DVector::from_vec(vec![-2.0, -1.0]),
            DVector::from_vec(vec![3.0, 2.0]),
        ];
        let res = minimize_multistart(f, &starts, &NelderMeadOpts::default());
        assert!(res.x[0].abs() < 1e-4, "x0 {}", res.x[0]);
        assert!(res.x[1].abs() < 1e-4, "x1 {}", res.x[1]);
        assert_relative_eq!(res.value, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn one_dimensional() {
        let f = |x: &DVector<f64>| (2.0 * x[0] + x[0] * x[0]).max(-1.0);
        let res = minimize(f, &DVector::from_vec(vec![0.0]), &NelderMeadOpts::default());
        assert_relative_eq!(res.value, -1.0, epsilon = 1e-8);
    }
}
