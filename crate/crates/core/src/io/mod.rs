//! Configuration files, run pipelines and their outputs (JSON reports, CSV
//! time series and SVG snapshots).

mod config;
mod emit;
mod run;

pub use config::{Config, ConfigError, CrosscheckSpec, CurveSpec, LocalModelSpec, OutputSpec, PolySpec, SlagSpec};
pub use emit::{scene, series_csv, to_json, write_csv, write_json, Svg, CSV_HEADER};
pub use run::{
    crosscheck_command, decompose_command, flow_command, localmodel_command, random_sample, reference_connectors,
    shoot_command, stability_command, connect_command, CrosscheckReport, CrosscheckSample, Decomposition, FinalPiece,
    FlowRunReport, LocalModelEntry, RunError, SlagOutput,
};
