#![no_std]
extern crate alloc;

pub mod decider;
pub mod error;
pub mod forms;
pub(crate) mod lattice;
pub mod oracle;
pub mod padic;
pub mod witness;

pub use decider::{decide, Leaf, Verdict};
pub use error::{Error, Result};
pub use forms::{BinaryForm, DiscFactorization, GeneralForm, QuadraticForm};
pub use oracle::{coverage, cross_check, CoverageReport, CoverageSchedule, CrossCheckReport};
pub use padic::{Prime, Valuation};
pub use witness::{
    approximate_quotient, exclusion_certificate, ExclusionCertificate, Strategy, Witness,
};
