//! Shared inputs for the benches.

use parabraid_core::{Braiding, GradeGroup, PhaseConvention, SigmaForm};

pub fn z2sq_identity() -> Braiding {
    let g = GradeGroup::new(2, 2).expect("valid group");
    Braiding::diagonal(PhaseConvention::plus(2), SigmaForm::identity(g)).expect("valid braiding")
}

pub fn z3sq_identity() -> Braiding {
    let g = GradeGroup::new(3, 2).expect("valid group");
    Braiding::diagonal(PhaseConvention::plus(3), SigmaForm::identity(g)).expect("valid braiding")
}
