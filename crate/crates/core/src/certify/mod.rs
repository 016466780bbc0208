//! Certificates, the realization pipeline and plot data.

mod certificate;
mod pipeline;
mod plot;
mod transcript;

pub use certificate::{Certificate, Provenance, Subject, SCHEMA_VERSION};
pub use pipeline::{
    auto_height, reproduce, run_realization, usable_cycle, DeltaKSummary, PeriodRun, Pipeline, RealizationInputs,
    RealizationOptions, RealizationPayload, SeedRun, TrackedCycle, XiChoice, MAX_BOUND, MAX_HEAD,
};
pub use plot::{
    emit_plot_data, write_fibre_csv, write_trajectory_csv, write_trajectory_file, FIBRE_HEADER, TRAJECTORY_HEADER,
};
pub use transcript::{all_hold, InequalityLine};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("stage {stage}: {message}")]
    Stage { stage: &'static str, message: String },
    #[error("serialization: {0}")]
    Serialize(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
