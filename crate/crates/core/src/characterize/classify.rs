//! Boolean characteristic flags used to bucket series into groups.

use super::CharacteristicProfile;
use crate::stats;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub trend: f64,
    pub seasonality: f64,
    pub shifting: f64,
    pub transition: f64,
}

impl Default for Thresholds {
    /// Strength cutoffs of 0.5; shifting and transition use the midpoints of
    /// their ranges. Prefer [`Thresholds::median_split`] when a collection
    /// is available.
    fn default() -> Self {
        Self { trend: 0.5, seasonality: 0.5, shifting: 0.5, transition: 1.0 / 6.0 }
    }
}

impl Thresholds {
    /// Strength cutoffs of 0.5, shifting and transition split at the
    /// collection medians.
    pub fn median_split(profiles: &[CharacteristicProfile]) -> Self {
        if profiles.is_empty() {
            return Self::default();
        }
        let shifting: Vec<f64> = profiles.iter().map(|p| p.shifting).collect();
        let transition: Vec<f64> = profiles.iter().map(|p| p.transition).collect();
        Self {
            shifting: stats::median(&shifting),
            transition: stats::median(&transition),
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CharacteristicFlags {
    pub seasonality: bool,
    pub trend: bool,
    pub shifting: bool,
    pub transition: bool,
    pub stationarity: bool,
}

pub fn classify_characteristics(p: &CharacteristicProfile, t: &Thresholds) -> CharacteristicFlags {
    CharacteristicFlags {
        seasonality: p.seasonality_strength >= t.seasonality,
        trend: p.trend_strength >= t.trend,
        shifting: p.shifting >= t.shifting,
        transition: p.transition >= t.transition,
        stationarity: p.stationary,
    }
}
