//! Constructive witnesses for k consecutive abundant numbers: greedy
//! prime blocks, a CRT-solved starting point, and an independently
//! checkable certificate.

pub mod blocks;
pub mod certificate;

pub use blocks::{build_blocks, Block, WitnessBudget};
pub use certificate::{
    build_certificate, verify_certificate, CertBlock, CheckResult, Verdict, WitnessCertificate,
};
