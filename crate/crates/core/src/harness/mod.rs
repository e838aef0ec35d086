//! Oracles, measurements, bound tables and instance generators used to
//! check the pipeline.

pub mod bounds;
pub mod lower_bound;
pub mod oracle;
pub mod random;
pub mod ratios;
pub mod verify;

pub use bounds::{error_bound_table, Bounds, ErrorBoundTable};
pub use lower_bound::{lower_bound_instance, LowerBoundInstance};
pub use oracle::{dijkstra_all_pairs, wspd_exactness_check, ExactnessReport, ShortestPaths};
pub use ratios::{
    check_step_uniqueness, measure_ratios, route_all_pairs, MeasureOptions, PairRecord, RatioReport,
    RatioSummary, UniquenessReport,
};
pub use verify::{verify_files, verify_network, SuiteResult, VerifyOptions, VerifyReport};
