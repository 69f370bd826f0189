//! A transfinite progression of arithmetic theories: each stage adds the
//! Rosser sentence of the stages below it, or its negation, and axiom
//! membership is decided by a walk over stage axiom codes.

pub mod cache;
pub mod digits;
pub mod error;
pub mod host;
pub mod ir;
pub mod policy;
pub mod stage;
pub mod verify;

pub use cache::CacheError;
pub use error::{Result, TowerError};
pub use policy::{PolicyError, Sign, SignPolicy};
pub use stage::{stage_code, Entry, LimitAnswer, Membership, Tower};
