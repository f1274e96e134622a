//! Minimal and weakly minimal elements of finite value sets, value classes
//! and the partition set.
//!
//! Dominance is decided by plain pairwise comparison, the same native scheme
//! the outer algorithm assumes; the point clouds involved are small.

use nalgebra::DVector;
use thiserror::Error;

use crate::cone::Cone;
use crate::problem::{ProblemError, ProblemInstance};

/// Tolerance for grouping equal minimal values into one class.
pub const DEFAULT_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MinimalError {
    #[error("empty value list rejected")]
    EmptyInput,
    #[error("partition set has cardinality {cardinality}, exceeding the cap {cap}")]
    PartitionBlowUp { cardinality: u128, cap: u128 },
    #[error(transparent)]
    Problem(#[from] ProblemError),
}

/// Two values are tied when their difference is below `tie_tol` relative to
/// the larger sup norm.
fn values_equal(a: &DVector<f64>, b: &DVector<f64>, tie_tol: f64) -> bool {
    let scale = 1.0 + a.amax().max(b.amax());
    (a - b).amax() <= tie_tol * scale
}

/// Indices of minimal elements: `i` survives iff no other value dominates it
/// without being a tie. All indices of a duplicated minimal value are kept.
pub fn minimal_indices(values: &[DVector<f64>], cone: &Cone) -> Result<Vec<usize>, MinimalError> {
    minimal_indices_with_tol(values, cone, DEFAULT_TIE_TOL)
}

pub fn minimal_indices_with_tol(
    values: &[DVector<f64>],
    cone: &Cone,
    tie_tol: f64,
) -> Result<Vec<usize>, MinimalError> {
    if values.is_empty() {
        return Err(MinimalError::EmptyInput);
    }
    let mut kept = Vec::new();
    for i in 0..values.len() {
        let dominated = (0..values.len()).any(|j| {
            j != i
                && cone.leq(&values[j], &values[i], false)
                && !values_equal(&values[j], &values[i], tie_tol)
        });
        if !dominated {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// Indices of weakly minimal elements: `i` survives iff no other value beats
/// it strictly. Ties never exclude, so the minimal indices are a subset.
pub fn weakly_minimal_indices(
    values: &[DVector<f64>],
    cone: &Cone,
) -> Result<Vec<usize>, MinimalError> {
    weakly_minimal_indices_with_tol(values, cone, DEFAULT_TIE_TOL)
}

pub fn weakly_minimal_indices_with_tol(
    values: &[DVector<f64>],
    cone: &Cone,
    tie_tol: f64,
) -> Result<Vec<usize>, MinimalError> {
    if values.is_empty() {
        return Err(MinimalError::EmptyInput);
    }
    let mut kept = Vec::new();
    for i in 0..values.len() {
        let beaten = (0..values.len()).any(|j| {
            j != i
                && cone.leq(&values[j], &values[i], true)
                && !values_equal(&values[j], &values[i], tie_tol)
        });
        if !beaten {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// One value class: all minimal indices sharing a representative value.
#[derive(Debug, Clone)]
pub struct ValueClass {
    pub representative: DVector<f64>,
    pub members: Vec<usize>,
}

/// The image family at a point together with its minimal structure.
#[derive(Debug, Clone)]
pub struct MinimalDecomposition {
    values: Vec<DVector<f64>>,
    min_indices: Vec<usize>,
    wmin_indices: Vec<usize>,
    classes: Vec<ValueClass>,
}

impl MinimalDecomposition {
    /// Groups a value list directly; `decompose` is the oracle-backed entry.
    pub fn from_values(
        values: Vec<DVector<f64>>,
        cone: &Cone,
        tie_tol: f64,
    ) -> Result<Self, MinimalError> {
        let min_indices = minimal_indices_with_tol(&values, cone, tie_tol)?;
        let wmin_indices = weakly_minimal_indices_with_tol(&values, cone, tie_tol)?;
        let mut classes: Vec<ValueClass> = Vec::new();
        for &i in &min_indices {
            match classes
                .iter_mut()
                .find(|c| values_equal(&c.representative, &values[i], tie_tol))
            {
                Some(class) => class.members.push(i),
                None => classes.push(ValueClass {
                    representative: values[i].clone(),
                    members: vec![i],
                }),
            }
        }
        Ok(Self { values, min_indices, wmin_indices, classes })
    }

    pub fn values(&self) -> &[DVector<f64>] {
        &self.values
    }

    pub fn min_indices(&self) -> &[usize] {
        &self.min_indices
    }

    pub fn wmin_indices(&self) -> &[usize] {
        &self.wmin_indices
    }

    pub fn classes(&self) -> &[ValueClass] {
        &self.classes
    }

    /// Number of distinct minimal values.
    pub fn w(&self) -> usize {
        self.classes.len()
    }

    /// Product of the class sizes.
    pub fn partition_cardinality(&self) -> u128 {
        self.classes.iter().map(|c| c.members.len() as u128).product()
    }

    /// Whether the minimal and weakly minimal index sets coincide.
    pub fn is_regular_diagnostic(&self) -> bool {
        self.min_indices == self.wmin_indices
    }

    /// Lazily enumerates every partition tuple `(a_1, ..., a_w)` with `a_j`
    /// drawn from class `j`, in lexicographic order over ascending member
    /// indices. Fails up front when the cardinality exceeds `cap`.
    pub fn partition_tuples(&self, cap: u128) -> Result<PartitionTuples<'_>, MinimalError> {
        assert!(cap >= 1, "partition cap must be at least 1");
        let cardinality = self.partition_cardinality();
        if cardinality > cap {
            return Err(MinimalError::PartitionBlowUp { cardinality, cap });
        }
        Ok(PartitionTuples { classes: &self.classes, cursor: vec![0; self.classes.len()], done: false })
    }
}

/// Iterator over partition tuples; behaves like a mixed-radix odometer.
pub struct PartitionTuples<'a> {
    classes: &'a [ValueClass],
    cursor: Vec<usize>,
    done: bool,
}

impl Iterator for PartitionTuples<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let tuple: Vec<usize> = self
            .cursor
            .iter()
            .zip(self.classes)
            .map(|(&c, class)| class.members[c])
            .collect();
        // advance, most significant digit first for lexicographic order
        let mut pos = self.classes.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.cursor[pos] += 1;
            if self.cursor[pos] < self.classes[pos].members.len() {
                break;
            }
            self.cursor[pos] = 0;
        }
        Some(tuple)
    }
}

/// Evaluates the family at `x` and decomposes its minimal structure.
pub fn decompose(
    problem: &ProblemInstance,
    cone: &Cone,
    x: &DVector<f64>,
) -> Result<MinimalDecomposition, MinimalError> {
    decompose_with_tol(problem, cone, x, DEFAULT_TIE_TOL)
}

pub fn decompose_with_tol(
    problem: &ProblemInstance,
    cone: &Cone,
    x: &DVector<f64>,
    tie_tol: f64,
) -> Result<MinimalDecomposition, MinimalError> {
    let values = problem.evaluate_family(x)?;
    MinimalDecomposition::from_values(values, cone, tie_tol)
}
