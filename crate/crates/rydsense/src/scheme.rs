//! Ladder-system description: levels, couplings and their validation.

use serde::{Deserialize, Serialize};

use crate::error::{Result, RydError};

/// One atomic level of the ladder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub label: String,
    /// Total population decay rate out of this level, rad/s.
    pub population_decay_out: f64,
    /// Explicit decay branches as (target level index, rate rad/s). Any
    /// remainder up to `population_decay_out` is routed to the ground state,
    /// so the dissipator stays trace preserving (loss treated as decay to
    /// ground).
    pub decay_branches: Vec<(usize, f64)>,
    /// Marks Rydberg levels; drives the default dephasing assignment.
    pub is_rydberg: bool,
}

impl Level {
    pub fn new(label: &str, population_decay_out: f64) -> Self {
        Level {
            label: label.to_string(),
            population_decay_out,
            decay_branches: Vec::new(),
            is_rydberg: false,
        }
    }

    pub fn rydberg(label: &str, population_decay_out: f64) -> Self {
        Level {
            is_rydberg: true,
            ..Level::new(label, population_decay_out)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    Optical,
    Rf,
}

/// A driven transition between two adjacent ladder levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub lower: usize,
    pub upper: usize,
    /// Rabi frequency, rad/s.
    pub rabi: f64,
    /// Detuning from resonance, rad/s.
    pub detuning: f64,
    /// Signed wavevector, rad/m. Positive along the reference axis, negative
    /// for counterpropagating beams, 0 for RF fields treated Doppler free.
    pub wavevector: f64,
    pub kind: CouplingKind,
}

impl Coupling {
    pub fn optical(lower: usize, upper: usize, rabi: f64, detuning: f64, wavevector: f64) -> Self {
        Coupling {
            lower,
            upper,
            rabi,
            detuning,
            wavevector,
            kind: CouplingKind::Optical,
        }
    }

    pub fn rf(lower: usize, upper: usize, rabi: f64, detuning: f64) -> Self {
        Coupling {
            lower,
            upper,
            rabi,
            detuning,
            wavevector: 0.0,
            kind: CouplingKind::Rf,
        }
    }
}

/// An N-level ladder with its couplings. `probe_index` selects the coupling
/// whose coherence is read out as absorption/dispersion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderScheme {
    pub levels: Vec<Level>,
    pub couplings: Vec<Coupling>,
    pub probe_index: usize,
}

impl LadderScheme {
    pub fn new(levels: Vec<Level>, couplings: Vec<Coupling>, probe_index: usize) -> Result<Self> {
        let scheme = LadderScheme {
            levels,
            couplings,
            probe_index,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn probe(&self) -> &Coupling {
        &self.couplings[self.probe_index]
    }

    /// Index into `couplings` of the rung connecting levels (i, i+1).
    /// Valid after `validate`.
    pub fn rung(&self, i: usize) -> usize {
        self.couplings
            .iter()
            .position(|c| c.lower.min(c.upper) == i)
            .expect("validated ladder has a coupling on every rung")
    }

    pub fn rf_coupling_index(&self) -> Option<usize> {
        self.couplings
            .iter()
            .position(|c| c.kind == CouplingKind::Rf)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return Err(RydError::InvalidScheme(format!(
                "need at least 2 levels, got {n}"
            )));
        }
        for (i, level) in self.levels.iter().enumerate() {
            if level.population_decay_out < 0.0 {
                return Err(RydError::InvalidRate {
                    name: "population_decay_out",
                    value: level.population_decay_out,
                });
            }
            let mut branch_sum = 0.0;
            for &(target, rate) in &level.decay_branches {
                if rate < 0.0 {
                    return Err(RydError::InvalidRate {
                        name: "decay_branch",
                        value: rate,
                    });
                }
                if target >= n || target == i {
                    return Err(RydError::InvalidScheme(format!(
                        "level {i} decays to invalid target {target}"
                    )));
                }
                branch_sum += rate;
            }
            if branch_sum > level.population_decay_out * (1.0 + 1e-9) {
                return Err(RydError::InvalidScheme(format!(
                    "level {i}: branch rates sum {branch_sum} exceeds total decay {}",
                    level.population_decay_out
                )));
            }
        }

        if self.couplings.len() != n - 1 {
            return Err(RydError::InvalidScheme(format!(
                "{} levels need {} couplings to form a ladder, got {}",
                n,
                n - 1,
                self.couplings.len()
            )));
        }
        let mut rung_seen = vec![false; n - 1];
        for c in &self.couplings {
            if c.lower >= c.upper {
                return Err(RydError::InvalidScheme(format!(
                    "coupling must have lower < upper, got ({}, {})",
                    c.lower, c.upper
                )));
            }
            if c.upper >= n {
                return Err(RydError::InvalidScheme(format!(
                    "coupling upper index {} out of range",
                    c.upper
                )));
            }
            if c.upper - c.lower != 1 {
                return Err(RydError::InvalidScheme(format!(
                    "non-ladder coupling ({}, {}): couplings must connect adjacent levels",
                    c.lower, c.upper
                )));
            }
            if c.rabi < 0.0 {
                return Err(RydError::InvalidRate {
                    name: "rabi",
                    value: c.rabi,
                });
            }
            if rung_seen[c.lower] {
                return Err(RydError::InvalidScheme(format!(
                    "duplicate coupling on rung ({}, {})",
                    c.lower, c.upper
                )));
            }
            rung_seen[c.lower] = true;
        }
        if self.probe_index >= self.couplings.len() {
            return Err(RydError::InvalidScheme(format!(
                "probe_index {} out of range",
                self.probe_index
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::TAU;

    fn two_level() -> LadderScheme {
        LadderScheme::new(
            vec![Level::new("g", 0.0), Level::new("e", TAU * 5.2e6)],
            vec![Coupling::optical(0, 1, TAU * 1e6, 0.0, TAU / 852e-9)],
            0,
        )
        .unwrap()
    }

    #[test]
    fn valid_two_level_passes() {
        let s = two_level();
        assert_eq!(s.n(), 2);
        assert_eq!(s.rung(0), 0);
    }

    #[test]
    fn non_adjacent_coupling_rejected() {
        let err = LadderScheme::new(
            vec![
                Level::new("g", 0.0),
                Level::new("e", 1.0),
                Level::new("r", 1.0),
            ],
            vec![
                Coupling::optical(0, 2, 1.0, 0.0, 0.0),
                Coupling::optical(1, 2, 1.0, 0.0, 0.0),
            ],
            0,
        )
        .unwrap_err();
        assert!(matches!(err, RydError::InvalidScheme(_)));
    }

    #[test]
    fn branch_sum_exceeding_total_rejected() {
        let mut e = Level::new("e", 1.0);
        e.decay_branches = vec![(0, 2.0)];
        let err = LadderScheme::new(
            vec![Level::new("g", 0.0), e],
            vec![Coupling::optical(0, 1, 1.0, 0.0, 0.0)],
            0,
        )
        .unwrap_err();
        assert!(matches!(err, RydError::InvalidScheme(_)));
    }

    #[test]
    fn negative_rabi_rejected() {
        let err = LadderScheme::new(
            vec![Level::new("g", 0.0), Level::new("e", 1.0)],
            vec![Coupling::optical(0, 1, -1.0, 0.0, 0.0)],
            0,
        )
        .unwrap_err();
        assert!(matches!(err, RydError::InvalidRate { name: "rabi", .. }));
    }
}
