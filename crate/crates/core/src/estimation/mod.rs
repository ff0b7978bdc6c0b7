//! Linear-in-parameters baselines: the widely-linear memory polynomial (WLMP)
//! fitted by least squares, sample-wise complex LMS, and the exact expansion
//! of an IQ + PA cascade into WLMP coefficients.

mod expand;
mod lms;
mod wlmp;

pub use expand::{binomial, expand_to_wlmp};
pub use lms::{lms_step, LmsState};
pub use wlmp::{build_wlmp_basis, fit_wlmp, wlmp_coefficient_count, WlmpModel};
