//! Conversions among the encoding-function families: linear
//! local<->global, Abelian characterization -> CWL, CWL -> characterization,
//! local CWL -> global CWL, global Abelian CWL -> local CWL, and the full
//! Abelian round trip.

mod group_cwl;
pub mod linear;
mod localglobal;
mod roundtrip;

pub use group_cwl::{abelian_char_to_cwl, cwl_to_characterization, CharToCwl, CwlToChar};
pub use linear::{
    linear_global_to_local, linear_joint_distribution, linear_local_to_global, matrix_rank,
    parse_linear_file, solve_right, GfMatrix, LinError, LinearCode,
};
pub use localglobal::{global_cwl_to_local_cwl, local_cwl_to_global_cwl};
pub use roundtrip::{abelian_roundtrip, thm5_joint_matches, RoundTrip};

use thiserror::Error;

use crate::charac::CharError;
use crate::cwl::CwlError;
use crate::group::GroupError;
use crate::net::NetError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConvertError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Cwl(#[from] CwlError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("ambient group {0} is not Abelian")]
    NotAbelian(String),
    #[error("source subgroups intersect in {0} elements, not 1")]
    NontrivialSourceIntersection(usize),
    #[error("source-independence equation violated: |G|/|G_S| = {lhs} but the product of |G|/|G_i| = {rhs}")]
    EquationOneViolated { lhs: usize, rhs: usize },
    #[error("coset tuple {0:?} has empty intersection")]
    EmptyCosetIntersection(Vec<usize>),
    #[error("function {name} is not a homomorphism (witness {witness:?})")]
    NotAHomomorphism {
        name: String,
        witness: Option<(Vec<usize>, Vec<usize>)>,
    },
    #[error("function {0} is not surjective")]
    NotSurjective(String),
    #[error("family inconsistent: {0}")]
    InconsistentFamily(String),
    #[error("family has no function for edge {0}")]
    IncompleteCover(String),
    #[error("function for edge {edge} malformed: {detail}")]
    MalformedFamily { edge: String, detail: String },
    #[error("edge {edge}: source tuples {tuple_a:?} and {tuple_b:?} agree on In(u) but disagree on the edge; no local function can realize these globals")]
    IllDefinedRestriction {
        edge: String,
        tuple_a: Vec<usize>,
        tuple_b: Vec<usize>,
    },
    #[error("edge {edge}: homomorphism extension failed (obstructing subgroup {obstruction:?})")]
    ExtensionNotFound {
        edge: String,
        obstruction: Vec<usize>,
    },
    #[error("composed global for edge {edge} failed the exhaustive CWL check")]
    ComposedNotCwl { edge: String },
    #[error("recomposed locals do not reproduce the input global at edge {edge}")]
    RecompositionMismatch { edge: String },
    #[error("stage {stage}: {inner}")]
    AtStage {
        stage: &'static str,
        inner: Box<ConvertError>,
    },
}

impl ConvertError {
    pub fn at_stage(self, stage: &'static str) -> ConvertError {
        ConvertError::AtStage {
            stage,
            inner: Box::new(self),
        }
    }

    /// The stage tag, when the error carries one.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            ConvertError::AtStage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}
