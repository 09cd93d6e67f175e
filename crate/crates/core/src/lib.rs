//! Exact algorithms for linear actions of Z^k on tori and nilmanifolds:
//! Anosov detection, Lyapunov data, Weyl chambers, free nilpotent lifts and
//! normal-form dimensions.

pub mod config;
pub mod error;
pub mod exactnum;
pub mod freenil;
pub mod actions;
pub mod linalg;
pub mod normalforms;
pub mod oracle;
pub mod report;
pub mod samples;
pub mod weyl;

pub use config::Config;
pub use error::{Error, Result};
pub use exactnum::modulus::{
    certify_multiplicative_relation, compare_moduli, has_unit_modulus_root, root_modulus_classes,
    ModulusClass, OrderingVerdict, Verdict3,
};
pub use exactnum::poly::IntPolynomial;
pub use exactnum::rational::{Interval, Q};
pub use exactnum::sturm::sturm_real_root_count;
