//! Problem files and exporters.

mod export;
mod problem;

pub use export::{format_sig9, obj_mesh, rulings_csv, samples_csv, ObjError};
pub use problem::{
    canonical_json, file_digest, load, parse_problem, problem_digest, GridOverrides, IoError, LoadedProblem,
    ProblemFile, FORMAT_VERSION,
};
