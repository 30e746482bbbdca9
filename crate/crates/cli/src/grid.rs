//! The inverse-temperature grid used by every sweep.

/// Sorted inverse temperatures, each tagged with the index used to derive
/// its optimiser seed.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaGrid {
    values: Vec<f64>,
    seed_indices: Vec<usize>,
}

pub const LISTED_GRID_LEN: usize = 55;

/// How the 55 listed values are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridReading {
    /// Each value is an inverse temperature `beta`.
    InverseTemperature,
    /// Each value is a temperature `T`; the sweep runs at `beta = 1/T`.
    Temperature,
}

impl GridReading {
    pub fn grid(self) -> BetaGrid {
        match self {
            GridReading::InverseTemperature => BetaGrid::listed(),
            GridReading::Temperature => BetaGrid::listed_temperatures(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GridReading::InverseTemperature => "beta",
            GridReading::Temperature => "temperature",
        }
    }
}

impl std::str::FromStr for GridReading {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "beta" | "inverse-temperature" => Ok(GridReading::InverseTemperature),
            "temperature" | "t" => Ok(GridReading::Temperature),
            other => Err(format!("unknown grid reading {other:?} (expected beta or temperature)")),
        }
    }
}

/// The listed values `m * 10^e` for `m = 1..=9`, `e = -3..=2`, then `10^3`.
/// Parsing the decimal literal gives the nearest double to each value,
/// which repeated multiplication would not.
pub fn listed_values() -> Vec<f64> {
    let mut values: Vec<f64> = (-3..=2)
        .flat_map(|e| (1..=9).map(move |m| format!("{m}e{e}")))
        .map(|s| s.parse().expect("valid float literal"))
        .collect();
    values.push(1e3);
    values
}

impl BetaGrid {
    /// The listed values read as inverse temperatures.
    pub fn listed() -> Self {
        let values = listed_values();
        Self {
            seed_indices: (0..values.len()).collect(),
            values,
        }
    }

    /// The listed values read as temperatures, so `beta = 1 / T`. Seed
    /// indices follow the position of `T` in the list.
    pub fn listed_temperatures() -> Self {
        let mut pairs: Vec<(f64, usize)> = listed_values()
            .into_iter()
            .enumerate()
            .map(|(k, t)| (1.0 / t, k))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self {
            values: pairs.iter().map(|p| p.0).collect(),
            seed_indices: pairs.iter().map(|p| p.1).collect(),
        }
    }

    /// A grid from arbitrary inverse temperatures; they are sorted and
    /// deduplicated. Values on the listed grid keep their seed index.
    pub fn custom(mut values: Vec<f64>) -> Option<Self> {
        if values.is_empty() || values.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return None;
        }
        values.sort_by(f64::total_cmp);
        values.dedup();
        let listed = listed_values();
        let seed_indices = values
            .iter()
            .map(|&b| {
                listed
                    .iter()
                    .position(|&l| l == b)
                    .unwrap_or_else(|| LISTED_GRID_LEN + (b.to_bits() % 1_000_003) as usize)
            })
            .collect();
        Some(Self { values, seed_indices })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn seed_index(&self, k: usize) -> usize {
        self.seed_indices[k]
    }

    /// `(seed index, beta)` pairs in grid order.
    pub fn points(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.seed_indices.iter().copied().zip(self.values.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_grid_shape() {
        let g = BetaGrid::listed();
        assert_eq!(g.len(), LISTED_GRID_LEN);
        assert_eq!(g.values()[0], 1e-3);
        assert_eq!(g.values()[54], 1e3);
        assert_eq!(g.values()[9], 1e-2);
        assert_eq!(g.values()[53], 900.0);
        assert!(g.values().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn temperature_reading_inverts_values() {
        let g = BetaGrid::listed_temperatures();
        assert_eq!(g.len(), LISTED_GRID_LEN);
        assert!(g.values().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(g.values()[0], 1e-3);
        assert_eq!(g.seed_index(0), 54);
        assert!((g.values()[54] - 1e3).abs() < 1e-9);
        assert_eq!(g.seed_index(54), 0);
        // T = 2e-3 gives beta = 500.
        let k = g.values().iter().position(|&b| (b - 500.0).abs() < 1e-9).unwrap();
        assert_eq!(g.seed_index(k), 1);
    }

    #[test]
    fn custom_grid_rejects_bad_values() {
        assert!(BetaGrid::custom(vec![]).is_none());
        assert!(BetaGrid::custom(vec![1.0, 0.0]).is_none());
        assert!(BetaGrid::custom(vec![1.0, f64::NAN]).is_none());
        assert_eq!(BetaGrid::custom(vec![2.0, 1.0, 2.0]).unwrap().values(), &[1.0, 2.0]);
    }

    #[test]
    fn custom_grid_keeps_listed_seed_indices() {
        let g = BetaGrid::custom(vec![0.6, 1e-3, 0.65]).unwrap();
        assert_eq!(g.seed_index(0), 0);
        assert_eq!(g.seed_index(1), 23);
        assert!(g.seed_index(2) >= LISTED_GRID_LEN);
    }
}
