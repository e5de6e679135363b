//! Exact verification engine for braided ternary algebras of parastatistics.

pub mod artifact;
pub mod braiding;
pub mod commands;
pub mod error;
pub mod exactscalar;
pub mod freealg;
pub mod grading;
pub mod linalg;
pub mod parastat;
pub mod report;
pub mod schur;
pub mod ternary;

pub use error::{Error, Result};
pub use exactscalar::{Rat, Scalar};
pub use grading::{Grade, GradeGroup, PhaseConvention, SigmaForm};
pub use freealg::{AlgebraSpec, Element, GenId, Generator, SpeciesTag, Word};
pub use report::{Report, Status, Verdict};
pub use braiding::{BraidLetter, Braiding, Preset, StrandOperator};
pub use ternary::{BracketVariant, Side, Signs, TernaryBracket};
pub use parastat::{QBracket, QForm, QRule, Species, SpeciesSpec};
pub use schur::{Perm, PermOp, Which};
pub use artifact::{parse_spec, parse_spec_file, ArtifactSpec, RunOptions};
pub use commands::{error_exit_code, run_command, Command, Format, Outcome};
