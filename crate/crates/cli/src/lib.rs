//! Scan driver for the confined two-electron solver: run specifications,
//! parallel execution, flat-file output and regression against tabulated
//! entropies.

pub mod error;
pub mod output;
pub mod reference;
pub mod regress;
pub mod run;
pub mod species;
pub mod spec;

pub use error::{CliError, CliResult};
pub use output::{read_combined, read_scan, write_outputs, CombinedRow, ScanRow, Written};
pub use reference::{ReferenceRow, ReferenceTable};
pub use regress::{regress, Report, RowStatus};
pub use run::{execute, CrossingResult, Failure, PointResult, RunOptions, RunOutcome, Solver};
pub use species::Species;
pub use spec::{parse_run_spec, parse_run_spec_str, CrossingSpec, Quantity, ReferenceSource, Regression, RunSpec, Unit};

/// Loads the reference table named by a regression request.
pub fn load_reference(regression: &Regression) -> CliResult<ReferenceTable> {
    match &regression.reference {
        ReferenceSource::Builtin => Ok(ReferenceTable::builtin()),
        ReferenceSource::File(path) => ReferenceTable::from_file(path),
    }
}
