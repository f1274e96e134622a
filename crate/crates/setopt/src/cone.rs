//! Polyhedral ordering cones and the Gerstewitz scalarizing functional.
//!
//! A cone is stored through its dual description `K = { y : A y >= 0 }`,
//! where the rows of `A` are the generators of the dual cone. Together with
//! an interior direction `e` this gives a closed form for the scalarization
//! `psi_e(z) = max_i (a_i . z) / (a_i . e)`, which makes every order test and
//! merit computation on finite sets exact up to floating point.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default absolute slack on `A z` for boundary decisions.
pub const DEFAULT_MEMBERSHIP_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("cone has no rows")]
    NoRows,
    #[error("row {0} of the dual description is zero")]
    ZeroRow(usize),
    #[error("direction e is not interior: row {row} gives slack {slack}")]
    NotInterior { row: usize, slack: f64 },
    #[error("dimension mismatch: rows are {rows_dim}-dimensional, e is {e_dim}-dimensional")]
    DimensionMismatch { rows_dim: usize, e_dim: usize },
    #[error("empty vector set rejected")]
    EmptySet,
    #[error("non-finite entry in cone data")]
    NonFinite,
}

/// A closed convex pointed solid cone `K = { y in R^m : A y >= 0 }` with a
/// fixed interior direction `e`.
///
/// Values are immutable after construction; every operation is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct Cone {
    rows: DMatrix<f64>,
    e: DVector<f64>,
    tol: f64,
    // cached A e, strictly positive in every entry
    row_dot_e: DVector<f64>,
}

impl Cone {
    /// Builds a cone from the dual rows and an interior direction.
    ///
    /// Rows are stored as given; all derived quantities are invariant to
    /// positive row scaling. Fails if a row is zero, dimensions disagree or
    /// `e` does not satisfy `A e > 0` in every row.
    pub fn new(rows: DMatrix<f64>, e: DVector<f64>) -> Result<Self, ConeError> {
        if rows.nrows() == 0 {
            return Err(ConeError::NoRows);
        }
        if rows.ncols() != e.len() {
            return Err(ConeError::DimensionMismatch {
                rows_dim: rows.ncols(),
                e_dim: e.len(),
            });
        }
        if rows.iter().any(|v| !v.is_finite()) || e.iter().any(|v| !v.is_finite()) {
            return Err(ConeError::NonFinite);
        }
        for i in 0..rows.nrows() {
            if rows.row(i).iter().all(|&v| v == 0.0) {
                return Err(ConeError::ZeroRow(i));
            }
        }
        let row_dot_e = DVector::from_iterator(rows.nrows(), (0..rows.nrows()).map(|i| rows.row(i).dot(&e.transpose())));
        for (i, &s) in row_dot_e.iter().enumerate() {
            if s <= 0.0 {
                return Err(ConeError::NotInterior { row: i, slack: s });
            }
        }
        Ok(Self { rows, e, tol: DEFAULT_MEMBERSHIP_TOL, row_dot_e })
    }

    /// The nonnegative orthant of `R^m` with `e = (1, ..., 1)`.
    pub fn nonnegative(m: usize) -> Self {
        Self::new(DMatrix::identity(m, m), DVector::repeat(m, 1.0))
            .expect("orthant construction cannot fail")
    }

    /// Replaces the membership tolerance (absolute slack on `A z`).
    pub fn with_membership_tol(mut self, tol: f64) -> Self {
        assert!(tol >= 0.0, "membership tolerance must be nonnegative");
        self.tol = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn e(&self) -> &DVector<f64> {
        &self.e
    }

    pub fn membership_tol(&self) -> f64 {
        self.tol
    }

    /// Dot products `a_i . e`, cached at construction.
    pub fn row_dot_e(&self) -> &DVector<f64> {
        &self.row_dot_e
    }

    /// Cone membership: `A z >= -tol` elementwise, or `A z > +tol` when
    /// `strict` asks for the interior.
    pub fn contains(&self, z: &DVector<f64>, strict: bool) -> bool {
        assert_eq!(z.len(), self.dim(), "contains: dimension mismatch");
        (0..self.rows.nrows()).all(|i| {
            let s = self.rows.row(i).dot(&z.transpose());
            if strict {
                s > self.tol
            } else {
                s >= -self.tol
            }
        })
    }

    /// Order test `y <= z` (or `y < z` when strict), i.e. `z - y in K`.
    pub fn leq(&self, y: &DVector<f64>, z: &DVector<f64>, strict: bool) -> bool {
        assert_eq!(y.len(), self.dim(), "leq: dimension mismatch");
        assert_eq!(z.len(), self.dim(), "leq: dimension mismatch");
        self.contains(&(z - y), strict)
    }

    /// Gerstewitz scalarization `min { t : t e in z + K }` in closed form:
    /// `max_i (a_i . z) / (a_i . e)`.
    pub fn gerstewitz(&self, z: &DVector<f64>) -> f64 {
        assert_eq!(z.len(), self.dim(), "gerstewitz: dimension mismatch");
        let mut best = f64::NEG_INFINITY;
        for i in 0..self.rows.nrows() {
            let v = self.rows.row(i).dot(&z.transpose()) / self.row_dot_e[i];
            if v > best {
                best = v;
            }
        }
        best
    }

    /// A Lipschitz constant of the scalarization: `max_i ||a_i|| / (a_i . e)`.
    pub fn gerstewitz_lipschitz(&self) -> f64 {
        (0..self.rows.nrows())
            .map(|i| self.rows.row(i).norm() / self.row_dot_e[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lower set less relation between finite sets: `a <=_l b` iff every
    /// element of `b` is dominated by some element of `a` (strictly when
    /// `strict` is set).
    pub fn lower_set_less(
        &self,
        a: &[DVector<f64>],
        b: &[DVector<f64>],
        strict: bool,
    ) -> Result<bool, ConeError> {
        if a.is_empty() || b.is_empty() {
            return Err(ConeError::EmptySet);
        }
        Ok(b.iter().all(|bv| a.iter().any(|av| self.leq(av, bv, strict))))
    }

    /// Merit scalar of a finite set: the least scalarization value over it.
    pub fn varsigma(&self, a: &[DVector<f64>]) -> Result<f64, ConeError> {
        if a.is_empty() {
            return Err(ConeError::EmptySet);
        }
        Ok(a.iter().map(|z| self.gerstewitz(z)).fold(f64::INFINITY, f64::min))
    }
}

/// Interior direction for a two-row planar cone, maximizing the minimum row
/// slack subject to the sup-norm bound `||e||_inf = 1`.
///
/// The maximin sits where both slacks agree, so `e` is the correctly oriented
/// perpendicular of `a_1 - a_2`, rescaled to unit sup norm. Returns `None`
/// for parallel rows or when no orientation is interior.
pub fn max_slack_interior_direction(rows: &DMatrix<f64>) -> Option<DVector<f64>> {
    if rows.nrows() != 2 || rows.ncols() != 2 {
        return None;
    }
    let d0 = rows[(0, 0)] - rows[(1, 0)];
    let d1 = rows[(0, 1)] - rows[(1, 1)];
    let perp = DVector::from_vec(vec![-d1, d0]);
    let norm = perp.amax();
    if norm == 0.0 {
        return None;
    }
    for cand in [&perp / norm, -&perp / norm] {
        let s0 = rows.row(0).dot(&cand.transpose());
        let s1 = rows.row(1).dot(&cand.transpose());
        if s0 > 0.0 && s1 > 0.0 {
            return Some(cand);
        }
    }
    None
}

/// JSON wire form of a cone: `{"m": int, "rows": [[...]], "e": [...]}`.
#[derive(Debug, Serialize, Deserialize)]
struct ConeJson {
    m: usize,
    rows: Vec<Vec<f64>>,
    e: Vec<f64>,
}

impl Serialize for Cone {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows = (0..self.rows.nrows())
            .map(|i| self.rows.row(i).iter().copied().collect())
            .collect();
        ConeJson { m: self.dim(), rows, e: self.e.iter().copied().collect() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let json = ConeJson::deserialize(deserializer)?;
        if json.rows.iter().any(|r| r.len() != json.m) || json.e.len() != json.m {
            return Err(D::Error::custom("cone rows/e do not match the declared dimension"));
        }
        let nrows = json.rows.len();
        let rows = DMatrix::from_row_iterator(nrows, json.m, json.rows.into_iter().flatten());
        Cone::new(rows, DVector::from_vec(json.e)).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn v(values: &[f64]) -> DVector<f64> {
        DVector::from_row_slice(values)
    }

    /// Cone of the fourth built-in planar instance: rows (5,-1), (-9,10).
    pub(crate) fn planar_cone() -> Cone {
        Cone::new(DMatrix::from_row_slice(2, 2, &[5.0, -1.0, -9.0, 10.0]), v(&[1.0, 1.0])).unwrap()
    }

    #[test]
    fn orthant_membership_boundary_and_interior() {
        let k = Cone::nonnegative(2);
        assert!(k.contains(&v(&[0.0, 1.0]), false));
        assert!(!k.contains(&v(&[0.0, 1.0]), true));
        assert!(k.contains(&v(&[1.0, 1.0]), true));
        assert!(!k.contains(&v(&[-1.0, 1.0]), false));
    }

    #[test]
    fn planar_cone_membership() {
        let k = planar_cone();
        // A (1,1) = (4, 1) > 0
        assert!(k.contains(&v(&[1.0, 1.0]), true));
        // A (1,0) = (5, -9): second row negative
        assert!(!k.leq(&v(&[0.0, 0.0]), &v(&[1.0, 0.0]), false));
    }

    #[test]
    fn leq_orthant() {
        let k = Cone::nonnegative(2);
        assert!(k.leq(&v(&[0.0, 0.0]), &v(&[1.0, 1.0]), false));
        assert!(k.leq(&v(&[0.0, 0.0]), &v(&[1.0, 1.0]), true));
        let y = v(&[0.3, -0.7]);
        assert!(k.leq(&y, &y, false));
        assert!(!k.leq(&y, &y, true));
    }

    #[test]
    fn gerstewitz_closed_form() {
        let k = Cone::nonnegative(2);
        assert_relative_eq!(k.gerstewitz(&v(&[3.0, -1.0])), 3.0);
        assert_relative_eq!(k.gerstewitz(&v(&[0.0, 0.0])), 0.0);
        // translativity at the origin: z = t e
        assert_relative_eq!(k.gerstewitz(&v(&[0.25, 0.25])), 0.25);
        let kp = planar_cone();
        // max(5/4, -9/1) = 1.25
        assert_relative_eq!(kp.gerstewitz(&v(&[1.0, 0.0])), 1.25);
    }

    #[test]
    fn lipschitz_constant() {
        let k = Cone::nonnegative(2);
        assert_relative_eq!(k.gerstewitz_lipschitz(), 1.0);
        let kp = planar_cone();
        let expected = (26.0f64.sqrt() / 4.0).max(181.0f64.sqrt());
        assert_relative_eq!(kp.gerstewitz_lipschitz(), expected);
        // invariance under positive row scaling
        let scaled = Cone::new(
            DMatrix::from_row_slice(2, 2, &[15.0, -3.0, -9.0, 10.0]),
            v(&[1.0, 1.0]),
        )
        .unwrap();
        assert_relative_eq!(scaled.gerstewitz_lipschitz(), expected, epsilon = 1e-14);
    }

    #[test]
    fn lower_set_less_examples() {
        let k = Cone::nonnegative(2);
        let a = vec![v(&[0.0, 0.0])];
        let b = vec![v(&[1.0, 1.0]), v(&[2.0, 0.0])];
        assert!(k.lower_set_less(&a, &b, false).unwrap());
        // (2,0) - (0,0) sits on the boundary of K
        assert!(!k.lower_set_less(&a, &b, true).unwrap());
        assert!(k.lower_set_less(&b, &b, false).unwrap());
        assert!(matches!(k.lower_set_less(&[], &b, false), Err(ConeError::EmptySet)));
    }

    #[test]
    fn varsigma_examples() {
        let k = Cone::nonnegative(2);
        let a = vec![v(&[3.0, -1.0]), v(&[0.0, 2.0])];
        assert_relative_eq!(k.varsigma(&a).unwrap(), 2.0);
        assert_relative_eq!(k.varsigma(&[v(&[0.0, 0.0])]).unwrap(), 0.0);
        assert!(matches!(k.varsigma(&[]), Err(ConeError::EmptySet)));
    }

    #[test]
    fn varsigma_monotone_under_set_order() {
        let k = planar_cone();
        let mut rng = 2654435769u64;
        let mut next = move || {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((rng >> 33) as f64 / (1u64 << 31) as f64) * 8.0 - 4.0
        };
        for _ in 0..200 {
            let a: Vec<_> = (0..4).map(|_| v(&[next(), next()])).collect();
            // b = a shifted along e, so a <=_l b by construction
            let t = next().abs();
            let b: Vec<_> = a.iter().map(|z| z + k.e() * t).collect();
            assert!(k.lower_set_less(&a, &b, false).unwrap());
            assert!(k.varsigma(&a).unwrap() <= k.varsigma(&b).unwrap() + 1e-12);
        }
    }

    #[test]
    fn construction_rejects_bad_data() {
        assert!(matches!(
            Cone::new(DMatrix::from_row_slice(1, 2, &[0.0, 0.0]), v(&[1.0, 1.0])),
            Err(ConeError::ZeroRow(0))
        ));
        // (1,1) is not interior to the cone with rows (2,-6), (-6,7)
        assert!(matches!(
            Cone::new(DMatrix::from_row_slice(2, 2, &[2.0, -6.0, -6.0, 7.0]), v(&[1.0, 1.0])),
            Err(ConeError::NotInterior { .. })
        ));
        assert!(matches!(
            Cone::new(DMatrix::identity(2, 2), v(&[1.0, 1.0, 1.0])),
            Err(ConeError::DimensionMismatch { .. })
        ));
    }

    #[test]
    #[should_panic(expected = "dimension mismatch")]
    fn gerstewitz_panics_on_wrong_dimension() {
        Cone::nonnegative(2).gerstewitz(&v(&[1.0, 2.0, 3.0]));
    }

    #[test]
    fn interior_direction_for_steep_cone() {
        let rows = DMatrix::from_row_slice(2, 2, &[2.0, -6.0, -6.0, 7.0]);
        let e = max_slack_interior_direction(&rows).unwrap();
        assert_relative_eq!(e[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(e[1], -8.0 / 13.0, epsilon = 1e-14);
        let k = Cone::new(rows, e).unwrap();
        assert_relative_eq!(k.row_dot_e()[0], 22.0 / 13.0, epsilon = 1e-13);
        assert_relative_eq!(k.row_dot_e()[1], 22.0 / 13.0, epsilon = 1e-13);
    }

    #[test]
    fn json_round_trip_matches_wire_schema() {
        let k = planar_cone();
        let text = serde_json::to_string(&k).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["m"], 2);
        assert_eq!(value["rows"][0][0], 5.0);
        assert_eq!(value["e"][1], 1.0);
        let back: Cone = serde_json::from_str(&text).unwrap();
        assert_eq!(back.rows, k.rows);
        assert_eq!(back.e, k.e);
        // e must be interior on the way back in
        let bad = r#"{"m":2,"rows":[[2.0,-6.0],[-6.0,7.0]],"e":[1.0,1.0]}"#;
        assert!(serde_json::from_str::<Cone>(bad).is_err());
    }
}
