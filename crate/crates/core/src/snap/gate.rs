use crate::geometry::PlanarPoint;

use super::SnapError;

/// Selection threshold on each sample's radial distance from the mean.
pub const STABILITY_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Stable { mean: PlanarPoint, max_deviation: f64 },
    Unstable { mean: PlanarPoint, max_deviation: f64 },
}

impl Gate {
    pub fn is_stable(&self) -> bool {
        matches!(self, Gate::Stable { .. })
    }

    pub fn mean(&self) -> PlanarPoint {
        match *self {
            Gate::Stable { mean, .. } | Gate::Unstable { mean, .. } => mean,
        }
    }

    pub fn max_deviation(&self) -> f64 {
        match *self {
            Gate::Stable { max_deviation, .. } | Gate::Unstable { max_deviation, .. } => max_deviation,
        }
    }
}

/// Stable iff every sample lies strictly closer than `threshold` to the
/// sample mean (distance measured in the plane).
pub fn stability_gate(samples: &[PlanarPoint], threshold: f64) -> Result<Gate, SnapError> {
    let mean = PlanarPoint::mean(samples).ok_or(SnapError::EmptySamples)?;
    let max_deviation = samples
        .iter()
        .map(|p| p.planar_distance(&mean))
        .fold(0.0, f64::max);
    Ok(if max_deviation < threshold {
        Gate::Stable { mean, max_deviation }
    } else {
        Gate::Unstable { mean, max_deviation }
    })
}
