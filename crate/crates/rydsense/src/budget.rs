//! Dephasing budget: the rates entering the relaxation matrix beyond
//! population decay, and their assignment to coherences.
//!
//! Budget rates are FWHM-type angular rates (2π times the quoted kHz value).
//! The relaxation builder adds rate/2 to each assigned coherence decay so
//! that each term contributes its nominal value to the observed linewidth.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{Result, RydError};
use crate::scheme::{CouplingKind, LadderScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DephasingChannel {
    Transit,
    Collisional,
    Laser,
    Magnetic,
    RydbergRydberg,
}

/// One explicit assignment entry: which budget terms dephase the coherence
/// between `lower` and `upper`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceAssignment {
    pub lower: usize,
    pub upper: usize,
    pub channels: Vec<DephasingChannel>,
}

/// Which coherences each budget term dephases.
///
/// `Default` encodes the conventions used throughout: laser dephasing on
/// coherences between the ground state and every level reached from it by an
/// all-optical chain; collisional, magnetic and Rydberg-Rydberg dephasing on
/// every coherence involving a Rydberg level. Transit is never part of the
/// map: it acts globally as relaxation toward the thermal ground state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assignment {
    Default,
    Explicit(Vec<CoherenceAssignment>),
}

/// The dephasing rates Γ_t, Γ_col, Γ_l, Γ_m, Γ_Ryd-Ryd (all rad/s, FWHM type).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DephasingBudget {
    pub transit: f64,
    pub collisional: f64,
    pub laser: f64,
    pub magnetic: f64,
    pub rydberg_rydberg: f64,
    pub assignment: Assignment,
}

impl DephasingBudget {
    pub fn zero() -> Self {
        DephasingBudget {
            transit: 0.0,
            collisional: 0.0,
            laser: 0.0,
            magnetic: 0.0,
            rydberg_rydberg: 0.0,
            assignment: Assignment::Default,
        }
    }

    pub fn rate(&self, channel: DephasingChannel) -> f64 {
        match channel {
            DephasingChannel::Transit => self.transit,
            DephasingChannel::Collisional => self.collisional,
            DephasingChannel::Laser => self.laser,
            DephasingChannel::Magnetic => self.magnetic,
            DephasingChannel::RydbergRydberg => self.rydberg_rydberg,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("transit", self.transit),
            ("collisional", self.collisional),
            ("laser", self.laser),
            ("magnetic", self.magnetic),
            ("rydberg_rydberg", self.rydberg_rydberg),
        ] {
            if !(v >= 0.0) {
                return Err(RydError::InvalidRate {
                    name: match name {
                        "transit" => "transit",
                        "collisional" => "collisional",
                        "laser" => "laser",
                        "magnetic" => "magnetic",
                        _ => "rydberg_rydberg",
                    },
                    value: v,
                });
            }
        }
        Ok(())
    }

    /// Resolve the assignment against a scheme into a per-coherence sum of
    /// assigned budget rates, keyed by (lower, upper) with lower < upper.
    pub fn resolve(&self, scheme: &LadderScheme) -> Result<BTreeMap<(usize, usize), f64>> {
        self.validate()?;
        let n = scheme.n();
        let mut map = BTreeMap::new();
        match &self.assignment {
            Assignment::Default => {
                // Levels reached from ground through optical couplings only.
                let mut optical_chain = vec![false; n];
                for j in 1..n {
                    let rung = &scheme.couplings[scheme.rung(j - 1)];
                    let below = j == 1 || optical_chain[j - 1];
                    optical_chain[j] = below && rung.kind == CouplingKind::Optical;
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        let mut total = 0.0;
                        if i == 0 && optical_chain[j] {
                            total += self.laser;
                        }
                        if scheme.levels[i].is_rydberg || scheme.levels[j].is_rydberg {
                            total += self.collisional + self.magnetic + self.rydberg_rydberg;
                        }
                        if total > 0.0 {
                            map.insert((i, j), total);
                        }
                    }
                }
            }
            Assignment::Explicit(entries) => {
                for e in entries {
                    if e.lower >= e.upper || e.upper >= n {
                        return Err(RydError::Validation(format!(
                            "assignment coherence ({}, {}) out of range",
                            e.lower, e.upper
                        )));
                    }
                    if e.channels.contains(&DephasingChannel::Transit) {
                        return Err(RydError::Validation(
                            "transit acts globally and cannot be assigned per coherence".into(),
                        ));
                    }
                    let total: f64 = e.channels.iter().map(|&c| self.rate(c)).sum();
                    *map.entry((e.lower, e.upper)).or_insert(0.0) += total;
                }
                // Coverage: every coherence involving a Rydberg level must appear.
                for i in 0..n {
                    for j in (i + 1)..n {
                        let rydberg = scheme.levels[i].is_rydberg || scheme.levels[j].is_rydberg;
                        if rydberg && !entries.iter().any(|e| e.lower == i && e.upper == j) {
                            return Err(RydError::Validation(format!(
                                "assignment does not cover Rydberg coherence ({i}, {j})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(map)
    }
}
