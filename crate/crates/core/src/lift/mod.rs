//! Order-by-order quantisation: liftings, anomaly cocycles, the extension
//! step, certificates, and a generator of involutive test systems.
//!
//! An `l`-lifting is a tuple of series whose pairwise star-commutators vanish
//! modulo `hbar^(l+2)`. Given a lift `G` one order higher, the anomaly
//! `chi_ij` is the `hbar^(l+2)` coefficient of `[G_i, G_j]`; replacing
//! `G` by `G - hbar^(l+1) m` changes it by `-(delta m)`, so the correction
//! solves `delta m = -chi`, i.e. `{f_i, m_j} - {f_j, m_i} = chi_ij`.

mod certificate;
mod lifting;
mod shear;

pub use certificate::{
    quantize, verify_certificate, Certificate, Quantization, VerificationFailure,
    VerificationReport,
};
pub use lifting::{
    anomaly, check_lifting, extend_from_lift, extend_lifting, CorrectionStep, DegreePolicy,
    Extension, Lifting, LiftingCheck, Obstruction, ObstructionKind,
};
pub use shear::{gen_involutive_shear, Shear, ShearShape};
