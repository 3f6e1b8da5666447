use crate::geometry::{PlanarPoint, Point3};

use super::EvalError;

/// Anything with three Cartesian components.
pub trait Coordinates {
    fn components(&self) -> [f64; 3];
}

impl Coordinates for Point3 {
    fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

/// `(u, v, z_residual)`; on-plane points have a zero third component.
impl Coordinates for PlanarPoint {
    fn components(&self) -> [f64; 3] {
        [self.u, self.v, self.z_residual]
    }
}

pub fn euclidean_error<P: Coordinates>(a: &P, b: &P) -> f64 {
    let (a, b) = (a.components(), b.components());
    let [dx, dy, dz] = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Slice form for callers holding raw coordinate vectors.
pub fn euclidean_error_slices(a: &[f64], b: &[f64]) -> Result<f64, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt())
}

/// Mean of the first `n` samples.
pub fn ground_truth(samples: &[Point3], n: usize) -> Result<Point3, EvalError> {
    if n == 0 || samples.len() < n {
        return Err(EvalError::InsufficientSamples {
            needed: n.max(1),
            got: samples.len(),
        });
    }
    // Offsets from the first sample keep identical inputs exact.
    let k = n as f64;
    let first = samples[0];
    let (x, y, z) = samples[1..n].iter().fold((0.0, 0.0, 0.0), |acc, p| {
        (acc.0 + (p.x - first.x), acc.1 + (p.y - first.y), acc.2 + (p.z - first.z))
    });
    Ok(Point3::new(first.x + x / k, first.y + y / k, first.z + z / k))
}

/// Default sample count for [`ground_truth`].
pub const GROUND_TRUTH_SAMPLES: usize = 100;

/// Mean and sample standard deviation; `(0, 0)` for an empty slice.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
