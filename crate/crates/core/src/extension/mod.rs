//! Extension of the Cauchy data along the rulings, and its verification.

mod certify;
mod local;

pub use certify::{
    b_samples, certify, solve, default_b_max, CertifyConfig, Certificate, FailureReason, FiberSample, GridSpec,
    HypothesisRecord, PointRecord, Solution, Summary, Tolerances, Verdict, CERTIFICATE_VERSION,
};
pub use local::{
    ruling_field, second_order_data, sigma, ExtensionSample, SecondOrder, LocalSolution, RulingOptions, DEFAULT_FD_STEP, IMMERSION_TOL,
};
