//! Prime sweeps over family grids, certification against the bounds, and
//! CSV/JSON output.

mod config;
mod emit;
mod presets;
mod run;
mod sieve;

pub use config::{parse_range, FamilyGrid, FamilyKind, Instance, SweepConfig, SweepMode};
pub use emit::{csv_string, emit_csv, emit_json, json_string, CSV_HEADER};
pub use presets::{figure_presets, PRESET_NAMES};
pub use run::{run_sweep, FamilySummary, Skip, SweepOutcome, SweepRow, SweepSummary, CROSS_TOLERANCE};
pub use sieve::sieve_primes;
