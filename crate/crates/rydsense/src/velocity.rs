//! Velocity quadrature for Doppler averaging over the thermal vapor.

use serde::{Deserialize, Serialize};

use crate::constants::KB;
use crate::error::{Result, RydError};

/// Quadrature nodes and weights over the 1D Maxwell-Boltzmann distribution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VelocityGrid {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub temperature: f64,
    pub atomic_mass: f64,
}

impl VelocityGrid {
    /// Zero-temperature limit: a single velocity class with unit weight.
    pub fn single(velocity: f64) -> Self {
        VelocityGrid {
            nodes: vec![velocity],
            weights: vec![1.0],
            temperature: 0.0,
            atomic_mass: 0.0,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes.len() != self.weights.len() || self.nodes.is_empty() {
            return Err(RydError::Validation(
                "velocity nodes/weights length mismatch".into(),
            ));
        }
        if self.weights.iter().any(|&w| w < 0.0) {
            return Err(RydError::Validation("negative velocity weight".into()));
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(RydError::Validation(format!(
                "velocity weights sum to {sum}, not 1"
            )));
        }
        Ok(())
    }
}

/// 1D rms thermal velocity sqrt(kT/m).
pub fn sigma_v(temperature: f64, mass: f64) -> f64 {
    (KB * temperature / mass).sqrt()
}

/// Symmetric uniform trapezoid grid over +-span*sigma_v with Maxwell-Boltzmann
/// weights normalized to 1. `n_points` must be odd (>= 3) so v = 0 is a node.
pub fn make_velocity_grid(
    temperature: f64,
    mass: f64,
    n_points: usize,
    span: f64,
) -> Result<VelocityGrid> {
    if temperature <= 0.0 || mass <= 0.0 {
        return Err(RydError::Validation(format!(
            "temperature and mass must be positive, got {temperature} K, {mass} kg"
        )));
    }
    if n_points < 3 || n_points % 2 == 0 {
        return Err(RydError::Validation(format!(
            "n_points must be odd and >= 3, got {n_points}"
        )));
    }
    if span < 3.0 {
        return Err(RydError::Validation(format!(
            "span must be >= 3 thermal widths, got {span}"
        )));
    }
    let sigma = sigma_v(temperature, mass);
    let half = (n_points - 1) / 2;
    let dv = span * sigma / half as f64;
    // Build mirrored halves so the grid is symmetric to the bit.
    let mut nodes = Vec::with_capacity(n_points);
    let mut weights = Vec::with_capacity(n_points);
    for i in 0..n_points {
        let k = i as i64 - half as i64;
        let v = k as f64 * dv;
        let trap = if i == 0 || i == n_points - 1 {
            0.5
        } else {
            1.0
        };
        nodes.push(v);
        weights.push(trap * (-v * v / (2.0 * sigma * sigma)).exp());
    }
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    // Renormalize residual rounding so the sum is exactly 1.
    let sum2: f64 = weights.iter().sum();
    let center = half;
    weights[center] += 1.0 - sum2;
    let grid = VelocityGrid {
        nodes,
        weights,
        temperature,
        atomic_mass: mass,
    };
    grid.validate()?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::CS_MASS;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn cs_room_temperature_sigma() {
        // sqrt(kT/m) for Cs at 294 K ~ 135.6 m/s.
        assert_relative_eq!(
            sigma_v(294.0, CS_MASS),
            135.61863206207573,
            max_relative = 1e-12
        );
    }

    #[test]
    fn three_point_grid_peaks_at_zero() {
        let g = make_velocity_grid(294.0, CS_MASS, 3, 4.0).unwrap();
        assert_eq!(g.nodes[1], 0.0);
        assert!(g.weights[1] > g.weights[0]);
        assert!(g.weights[1] > g.weights[2]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(make_velocity_grid(-1.0, CS_MASS, 11, 4.0).is_err());
        assert!(make_velocity_grid(294.0, 0.0, 11, 4.0).is_err());
        assert!(make_velocity_grid(294.0, CS_MASS, 10, 4.0).is_err());
        assert!(make_velocity_grid(294.0, CS_MASS, 11, 2.0).is_err());
    }

    proptest! {
        #[test]
        fn weights_sum_to_one_and_nodes_symmetric(
            t in 1.0f64..500.0,
            half in 1usize..400,
            span in 3.0f64..8.0,
        ) {
            let n = 2 * half + 1;
            let g = make_velocity_grid(t, CS_MASS, n, span).unwrap();
            let sum: f64 = g.weights.iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-12);
            for i in 0..g.len() {
                prop_assert_eq!(g.nodes[i], -g.nodes[g.len() - 1 - i]);
            }
        }
    }
}
