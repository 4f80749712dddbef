use crate::error::{Error, Result};

use super::config::{FamilyGrid, FamilyKind, SweepConfig, SweepMode};

pub const PRESET_NAMES: [&str; 4] = ["kloosterman", "inverse", "small_d", "gkrs"];

const FIGURE_M: [u64; 4] = [2, 4, 8, 16];

/// Parameter grids of the four standard datasets.
pub fn figure_presets(name: &str) -> Result<SweepConfig> {
    let grid = |label: &str, kind| FamilyGrid { m: FIGURE_M.to_vec(), ..FamilyGrid::new(label, kind) };
    let (primes, families) = match name {
        "kloosterman" => ((3, 2048), vec![FamilyGrid { e: vec![1], ..grid("kloosterman", FamilyKind::Kloosterman) }]),
        "inverse" => ((3, 2048), vec![grid("inverse", FamilyKind::Inverse)]),
        "small_d" => {
            ((3, 2048), vec![FamilyGrid { d: (1..=5).collect(), ..grid("small_d", FamilyKind::PowerResidue) }])
        }
        "gkrs" => {
            ((3, 1024), vec![FamilyGrid { pairs: vec![(3, 5), (5, 7)], ..FamilyGrid::new("gkrs", FamilyKind::Grassi) }])
        }
        other => {
            return Err(Error::param(format!("unknown preset `{other}`; valid presets: {}", PRESET_NAMES.join(", "))))
        }
    };
    Ok(SweepConfig { primes, families, mode: SweepMode::Reduced, ..SweepConfig::default() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preset_grids() {
        let g = figure_presets("gkrs").unwrap();
        assert_eq!(g.primes, (3, 1024));
        assert_eq!(g.families[0].pairs, vec![(3, 5), (5, 7)]);
        let s = figure_presets("small_d").unwrap();
        assert_eq!(s.primes, (3, 2048));
        assert_eq!(s.families[0].d, vec![1, 2, 3, 4, 5]);
        assert_eq!(s.families[0].m, vec![2, 4, 8, 16]);
        assert_eq!(s.families[0].instances().len(), 20);
        for name in PRESET_NAMES {
            figure_presets(name).unwrap().validate().unwrap();
        }
        let err = figure_presets("unknown").unwrap_err().to_string();
        assert!(err.contains("kloosterman") && err.contains("gkrs"));
    }
}
