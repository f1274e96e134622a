//! Built-in test problems `ex5_1` .. `ex5_7`.
//!
//! All families are indexed from 0 internally. Offsets written as
//! `theta_i = 2 pi (i - 1) / p` in 1-based notation become `2 pi i / p` here.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::cone::{max_slack_interior_direction, Cone};
use crate::problem::{ProblemError, ProblemInstance};

/// Optional construction overrides for scaled-down property tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct ExampleOverrides {
    /// Family size for the angle-indexed instances.
    pub p: Option<usize>,
    /// Grid side for the facility-location instance (family size is its square).
    pub grid: Option<usize>,
}

/// Names of all built-in instances, in registry order.
pub fn list_examples() -> &'static [&'static str] {
    &["ex5_1", "ex5_2", "ex5_3", "ex5_4", "ex5_5", "ex5_6", "ex5_7"]
}

/// Builds a named instance together with its ordering cone.
pub fn make_example(
    name: &str,
    overrides: ExampleOverrides,
) -> Result<(ProblemInstance, Cone), ProblemError> {
    match name {
        "ex5_1" => Ok(ex5_1(overrides.p.unwrap_or(20))),
        "ex5_2" => Ok(ex5_2(overrides.p.unwrap_or(50))),
        "ex5_3" => Ok(ex5_3(overrides.p.unwrap_or(14))),
        "ex5_4" => Ok(ex5_4(overrides.p.unwrap_or(30))),
        "ex5_5" => Ok(ex5_5(overrides.grid.unwrap_or(10))),
        "ex5_6" => Ok(ex5_6()),
        "ex5_7" => Ok(ex5_7(overrides.p.unwrap_or(100))),
        other => Err(ProblemError::UnknownExample(other.to_string())),
    }
}

fn angle(i: usize, p: usize) -> f64 {
    2.0 * PI * i as f64 / p as f64
}

/// Twenty shifted copies of a planar quadratic: component Hessians 2I and 4I.
fn ex5_1(p: usize) -> (ProblemInstance, Cone) {
    let value = move |i: usize, x: &DVector<f64>| {
        let t = angle(i, p);
        let s = x[0] * x[0] + x[1] * x[1];
        DVector::from_vec(vec![s + 0.5 * t.sin(), 2.0 * s + 0.5 * t.cos()])
    };
    let jacobian = |_i: usize, x: &DVector<f64>| {
        DMatrix::from_row_slice(2, 2, &[2.0 * x[0], 2.0 * x[1], 4.0 * x[0], 4.0 * x[1]])
    };
    let hessian = |_i: usize, _x: &DVector<f64>| {
        vec![DMatrix::identity(2, 2) * 2.0, DMatrix::identity(2, 2) * 4.0]
    };
    let inst = ProblemInstance::new(
        "ex5_1",
        2,
        2,
        p,
        Arc::new(value),
        Arc::new(jacobian),
        Arc::new(hessian),
        vec![(-4.0, 4.0), (-4.0, 4.0)],
        Some(2.0),
    );
    (inst, Cone::nonnegative(2))
}

/// Scalar family with a logistic and an oscillatory component.
fn ex5_2(p: usize) -> (ProblemInstance, Cone) {
    // s(x) = 1 / (1 + exp(2x)); s' = -2 s (1 - s); s'' = 4 s (1 - s)(1 - 2s)
    let sig = |x: f64| 1.0 / (1.0 + (2.0 * x).exp());
    let value = move |i: usize, x: &DVector<f64>| {
        let t = angle(i, p);
        let u = x[0];
        DVector::from_vec(vec![
            0.35 * t.sin() * t.cos() + u * u,
            0.35 * t.cos() + sig(u) + (2.0 * u).cos(),
        ])
    };
    let jacobian = move |_i: usize, x: &DVector<f64>| {
        let u = x[0];
        let s = sig(u);
        DMatrix::from_row_slice(2, 1, &[2.0 * u, -2.0 * s * (1.0 - s) - 2.0 * (2.0 * u).sin()])
    };
    let hessian = move |_i: usize, x: &DVector<f64>| {
        let u = x[0];
        let s = sig(u);
        vec![
            DMatrix::from_element(1, 1, 2.0),
            DMatrix::from_element(1, 1, 4.0 * s * (1.0 - s) * (1.0 - 2.0 * s) - 4.0 * (2.0 * u).cos()),
        ]
    };
    let inst = ProblemInstance::new(
        "ex5_2",
        1,
        2,
        p,
        Arc::new(value),
        Arc::new(jacobian),
        Arc::new(hessian),
        vec![(0.77, 6.3)],
        None,
    );
    (inst, Cone::nonnegative(2))
}

/// Three-component planar quadratic family; third component offsets by index.
fn ex5_3(p: usize) -> (ProblemInstance, Cone) {
    let value = move |i: usize, x: &DVector<f64>| {
        let t = angle(i, p);
        let s = x[0] * x[0] + x[1] * x[1];
        DVector::from_vec(vec![
            s + 0.25 * t.sin(),
            4.0 * s + 0.25 * t.cos(),
            s + (i + 1) as f64,
        ])
    };
    let jacobian = |_i: usize, x: &DVector<f64>| {
        DMatrix::from_row_slice(
            3,
            2,
            &[
                2.0 * x[0],
                2.0 * x[1],
                8.0 * x[0],
                8.0 * x[1],
                2.0 * x[0],
                2.0 * x[1],
            ],
        )
    };
    let hessian = |_i: usize, _x: &DVector<f64>| {
        vec![
            DMatrix::identity(2, 2) * 2.0,
            DMatrix::identity(2, 2) * 8.0,
            DMatrix::identity(2, 2) * 2.0,
        ]
    };
    let inst = ProblemInstance::new(
        "ex5_3",
        2,
        3,
        p,
        Arc::new(value),
        Arc::new(jacobian),
        Arc::new(hessian),
        vec![(-3.0, 4.0), (-3.0, 4.0)],
        Some(2.0),
    );
    (inst, Cone::nonnegative(3))
}

/// Scalar family with an oscillatory second component; the first function has
/// an identically zero third component.
fn ex5_4(p: usize) -> (ProblemInstance, Cone) {
    let value = move |i: usize, x: &DVector<f64>| {
        let c = i as f64 / p as f64;
        let u = x[0];
        let s = u * u - 4.0;
        DVector::from_vec(vec![u * u + c, s * s.sin() + c, c * u * u])
    };
    let jacobian = move |i: usize, x: &DVector<f64>| {
        let c = i as f64 / p as f64;
        let u = x[0];
        let s = u * u - 4.0;
        DMatrix::from_row_slice(
            3,
            1,
            &[2.0 * u, 2.0 * u * (s.sin() + s * s.cos()), 2.0 * c * u],
        )
    };
    let hessian = move |i: usize, x: &DVector<f64>| {
        let c = i as f64 / p as f64;
        let u = x[0];
        let s = u * u - 4.0;
        let d2 = 2.0 * (s.sin() + s * s.cos()) + 4.0 * u * u * (2.0 * s.cos() - s * s.sin());
        vec![
            DMatrix::from_element(1, 1, 2.0),
            DMatrix::from_element(1, 1, d2),
            DMatrix::from_element(1, 1, 2.0 * c),
        ]
    };
    let inst = ProblemInstance::new(
        "ex5_4",
        1,
        3,
        p,
        Arc::new(value),
        Arc::new(jacobian),
        Arc::new(hessian),
        vec![(1.54, 2.16)],
        None,
    );
    (inst, Cone::nonnegative(3))
}

/// Facility location under uncertainty: squared distances to three anchors,
/// perturbed over a `grid x grid` enumeration of a square.
///
/// The grid points are enumerated row-major with coordinates ascending, so
/// `u_i = (U[i / grid], U[i % grid])` with `U` uniform on `[-1, 1]`.
fn ex5_5(grid: usize) -> (ProblemInstance, Cone) {
    assert!(grid >= 2);
    let p = grid * grid;
    let points: Arc<Vec<DVector<f64>>> = Arc::new(
        (0..p)
            .map(|i| {
                let step = 2.0 / (grid - 1) as f64;
                let a = -1.0 + step * (i / grid) as f64;
                let b = -1.0 + step * (i % grid) as f64;
                DVector::from_vec(vec![a, b])
            })
            .collect(),
    );
    let anchors = Arc::new([
        DVector::from_vec(vec![0.0, 8.0]),
        DVector::from_vec(vec![0.0, 0.0]),
        DVector::from_vec(vec![8.0, 0.0]),
    ]);
    let value = {
        let points = points.clone();
        let anchors = anchors.clone();
        move |i: usize, x: &DVector<f64>| {
            DVector::from_iterator(
                3,
                anchors.iter().map(|l| 0.5 * (x - l - &points[i]).norm_squared()),
            )
        }
    };
    let jacobian = {
        let points = points.clone();
        let anchors = anchors.clone();
        move |i: usize, x: &DVector<f64>| {
            let mut j = DMatrix::zeros(3, 2);
            for (c, l) in anchors.iter().enumerate() {
                let g = x - l - &points[i];
                j[(c, 0)] = g[0];
                j[(c, 1)] = g[1];
            }
            j
        }
    };
    let hessian = |_i: usize, _x: &DVector<f64>| {
        vec![DMatrix::identity(2, 2), DMatrix::identity(2, 2), DMatrix::identity(2, 2)]
    };
    let inst = ProblemInstance::new(
        "ex5_5",
        2,
        3,
        p,
        Arc::new(value),
        Arc::new(jacobian),
        Arc::new(hessian),
        vec![(-50.0, 50.0), (-50.0, 50.0)],
        Some(1.0),
    );
    (inst, Cone::nonnegative(3))
}

/// Four scalar functions ordered by the planar cone with dual rows
/// (5, -1) and (-9, 10).
fn ex5_6() -> (ProblemInstance, Cone) {
    let coeff = |i: usize| (i as f64 - 2.0) / 2.0;
    let value = move |i: usize, x: &DVector<f64>| {
        let c = coeff(i);
        let u = x[0];
        DVector::from_vec(vec![2.0 * u * u + c + 4.0 * u, 0.5 * u * u.cos() - c * u.sin()])
    };
    let jacobian = move |i: usize, x: &DVector<f64>| {
        let c = coeff(i);
        let u = x[0];
        DMatrix::from_row_slice(
            2,
            1,
            &[4.0 * u + 4.0, 0.5 * u.cos() - 0.5 * u * u.sin() - c * u.cos()],
        )
    };
    let hessian = move |i: usize, x: &DVector<f64>| {
        let c = coeff(i);
        let u = x[0];
        vec![
            DMatrix::from_element(1, 1, 4.0),
            DMatrix::from_element(1, 1, -u.sin() - 0.5 * u * u.cos() + c * u.sin()),
        ]
    };
    let cone = Cone::new(
        DMatrix::from_row_slice(2, 2, &[5.0, -1.0, -9.0, 10.0]),
        DVector::from_vec(vec![1.0, 1.0]),
    )
    .expect("stated direction is interior");
    let inst = ProblemInstance::new(
        "ex5_6",
        1,
        2,
        4,
        Arc::new(value),
        Arc::new(jacobian),
        Arc::new(hessian),
        vec![(2.335, 4.401)],
        None,
    );
    (inst, cone)
}

/// Planar family with exponential coupling, ordered by the cone with dual
/// rows (2, -6) and (-6, 7).
///
/// The all-ones vector is not interior to this cone, so the interior
/// direction for the scalarization is computed at construction as the
/// max-slack direction with unit sup norm.
fn ex5_7(p: usize) -> (ProblemInstance, Cone) {
    let value = move |i: usize, x: &DVector<f64>| {
        let t = angle(i, p);
        let (a, b) = (x[0], x[1]);
        let e = (a + b).exp();
        DVector::from_vec(vec![
            a * a + a.sin() + a * a * b.cos() + 0.25 * t.cos() * t.sin().powi(2) + e + b * b,
            2.0 * a * a + b * b * a.cos() + 0.25 * t.cos().powi(2) * t.sin() + b.cos() + e + 2.0 * b * b,
        ])
    };
    let jacobian = move |_i: usize, x: &DVector<f64>| {
        let (a, b) = (x[0], x[1]);
        let e = (a + b).exp();
        DMatrix::from_row_slice(
            2,
            2,
            &[
                2.0 * a + a.cos() + 2.0 * a * b.cos() + e,
                -a * a * b.sin() + e + 2.0 * b,
                4.0 * a - b * b * a.sin() + e,
                2.0 * b * a.cos() - b.sin() + e + 4.0 * b,
            ],
        )
    };
    let hessian = move |_i: usize, x: &DVector<f64>| {
        let (a, b) = (x[0], x[1]);
        let e = (a + b).exp();
        let h1 = DMatrix::from_row_slice(
            2,
            2,
            &[
                2.0 - a.sin() + 2.0 * b.cos() + e,
                -2.0 * a * b.sin() + e,
                -2.0 * a * b.sin() + e,
                -a * a * b.cos() + e + 2.0,
            ],
        );
        let h2 = DMatrix::from_row_slice(
            2,
            2,
            &[
                4.0 - b * b * a.cos() + e,
                -2.0 * b * a.sin() + e,
                -2.0 * b * a.sin() + e,
                2.0 * a.cos() - b.cos() + e + 4.0,
            ],
        );
        vec![h1, h2]
    };
    let rows = DMatrix::from_row_slice(2, 2, &[2.0, -6.0, -6.0, 7.0]);
    let e = max_slack_interior_direction(&rows).expect("cone is solid");
    let cone = Cone::new(rows, e).expect("construction uses an interior direction");
    let inst = ProblemInstance::new(
        "ex5_7",
        2,
        2,
        p,
        Arc::new(value),
        Arc::new(jacobian),
        Arc::new(hessian),
        vec![(-1.0, 1.0), (-1.0, 1.0)],
        None,
    );
    (inst, cone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn registry_shapes() {
        let (p1, k1) = make_example("ex5_1", Default::default()).unwrap();
        assert_eq!((p1.decision_dim(), p1.objective_dim(), p1.family_size()), (2, 2, 20));
        assert_eq!(k1.rows(), &DMatrix::identity(2, 2));
        assert_eq!(k1.e(), &DVector::from_vec(vec![1.0, 1.0]));

        let (p5, _) = make_example("ex5_5", Default::default()).unwrap();
        assert_eq!(p5.family_size(), 100);

        let (p6, k6) = make_example("ex5_6", Default::default()).unwrap();
        assert_eq!(p6.family_size(), 4);
        assert_eq!(k6.rows(), &DMatrix::from_row_slice(2, 2, &[5.0, -1.0, -9.0, 10.0]));
        assert!(k6.row_dot_e().iter().all(|&s| s > 0.0));

        assert!(matches!(
            make_example("ex9_9", Default::default()),
            Err(ProblemError::UnknownExample(_))
        ));
    }

    #[test]
    fn overrides_shrink_families() {
        let (p, _) = make_example("ex5_1", ExampleOverrides { p: Some(6), grid: None }).unwrap();
        assert_eq!(p.family_size(), 6);
        let (p, _) = make_example("ex5_5", ExampleOverrides { p: None, grid: Some(3) }).unwrap();
        assert_eq!(p.family_size(), 9);
    }

    #[test]
    fn steep_cone_direction_is_interior() {
        let (_p, k) = make_example("ex5_7", Default::default()).unwrap();
        assert_relative_eq!(k.e()[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(k.e()[1], -8.0 / 13.0, epsilon = 1e-14);
    }

    #[test]
    fn facility_grid_enumeration_is_row_major() {
        let (p, _) = make_example("ex5_5", Default::default()).unwrap();
        let x = DVector::from_vec(vec![-5.0, -5.0]);
        // 1-based index 25 -> internal 24 -> (U[2], U[4])
        let f25 = p.value(24, &x).unwrap();
        assert_relative_eq!(f25[0], 92.9382, epsilon = 5e-5);
        assert_relative_eq!(f25[1], 21.8270, epsilon = 5e-5);
        assert_relative_eq!(f25[2], 89.3822, epsilon = 5e-5);
    }

    #[test]
    fn strong_convexity_probe_on_quadratic_instances() {
        use rand::Rng as _;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        for name in ["ex5_1", "ex5_3", "ex5_5"] {
            let (p, k) = make_example(name, Default::default()).unwrap();
            let rho = p.rho_hint().unwrap();
            let mut probe = f64::INFINITY;
            for _ in 0..10 {
                let x = p.sample_start(&mut rng);
                let mut u = DVector::from_iterator(
                    p.decision_dim(),
                    (0..p.decision_dim()).map(|_| rng.gen_range(-1.0f64..1.0)),
                );
                if u.norm() == 0.0 {
                    u[0] = 1.0;
                }
                u /= u.norm();
                for i in 0..p.family_size() {
                    let h = p.hessian_stack(i, &x).unwrap();
                    let quad = DVector::from_iterator(
                        p.objective_dim(),
                        h.iter().map(|hl| (u.transpose() * hl * &u)[(0, 0)]),
                    );
                    // quad - rho * e must stay in the cone
                    assert!(k.contains(&(&quad - k.e() * rho), false), "{name}: probe violation");
                    probe = probe.min(quad.min());
                }
            }
            assert!(probe >= 0.5, "{name}: probe {probe}");
        }
    }
}
