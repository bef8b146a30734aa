//! Scan harness: parallel per-prime record construction, density reports,
//! CSV/JSON export with a byte-determinism contract, verify suites, and
//! oscillation tables.

pub mod cache;
pub mod config;
pub mod osc;
pub mod report;
pub mod scan;
pub mod verify;

pub use config::{ScanConfig, SuiteToggles};
pub use report::DensityReport;
pub use scan::{run_scan, ScanOutcome};
