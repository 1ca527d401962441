//! Finite-group machinery for network coding: group-characterizable random
//! variables, coordinate-wise-linear (CWL) codes, and verified conversions
//! between linear, group-characterizable, and CWL encoding functions in both
//! local and global form.

pub mod charac;
pub mod cli;
pub mod convert;
pub mod corpus;
pub mod cwl;
pub mod dist;
pub mod group;
pub mod net;
pub mod parse_util;
mod radix;
pub mod render;
pub mod report;
pub mod survey;
