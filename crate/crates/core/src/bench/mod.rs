//! Instance sets, batch runs and reports.

mod dataset;
mod report;
mod runner;

pub use dataset::{
    builtin_dataset, load_dataset, load_instance_file, parse_instances, Dataset, DatasetError,
    Instance, BUILTIN_DATASETS,
};
pub use report::{
    emit_report, summarize, write_csv, write_markdown, ReportFormat, Summary, CSV_HEADER,
    DELTA_BUCKETS,
};
pub use runner::{
    run_benchmark, run_benchmark_with_cache, Algorithm, ConfigError, ReportRow, RowStatus,
    RunConfig,
};
