//! JSON report types. Every subcommand writes exactly one of these; the
//! field order here is the output order, and all types deserialize with
//! unknown fields rejected, so a successful parse checks the schema.

use serde::{Deserialize, Serialize};

use symflat::forms::{FormLike, MatrixForm};

use crate::config::JobConfig;

/// Rows of DSL strings.
pub type MatrixOut = Vec<Vec<String>>;

pub fn matrix_out(m: &MatrixForm) -> MatrixOut {
    m.rows().iter().map(|r| r.iter().map(|f| f.to_string()).collect()).collect()
}

/// `decompose` writes an array of these, one per nonzero component
/// `omega^r /\ form`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub r: usize,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatnessOut {
    pub config: JobConfig,
    pub is_symplectically_flat: bool,
    #[serde(rename = "F")]
    pub f: MatrixOut,
    #[serde(rename = "F0")]
    pub f0: MatrixOut,
    #[serde(rename = "Phi")]
    pub phi: MatrixOut,
    #[serde(rename = "d_A_Phi")]
    pub d_a_phi: MatrixOut,
    /// For `n >= 2` with `F0 = 0`: whether `d_A Phi = 0`, as the Bianchi
    /// identity forces.
    pub bianchi_consistent: Option<bool>,
    /// `d_A(Phi omega^{n-1})`, present when `F0 = 0`.
    pub yang_mills_residual: Option<MatrixOut>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counterexample {
    pub inputs: Vec<String>,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationOut {
    pub k: usize,
    pub trials: usize,
    pub failures: usize,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AinftyOut {
    pub config: JobConfig,
    pub passed: bool,
    pub relations: Vec<RelationOut>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistSquareOut {
    pub config: JobConfig,
    pub flat: bool,
    pub residual_failures: usize,
    pub witness: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarginDim {
    pub margin: u32,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionOut {
    pub position: String,
    pub grading: i32,
    pub dim: usize,
    pub stabilized: bool,
    pub by_margin: Vec<MarginDim>,
    /// One entry per class; each lists the DSL strings of the fiber
    /// components (for the cone: `eta_1, xi_1, eta_2, xi_2, ...`).
    pub witnesses: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyOut {
    pub config: JobConfig,
    pub complex: String,
    pub stabilized: bool,
    pub dims: Vec<usize>,
    pub positions: Vec<PositionOut>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityOut {
    pub name: String,
    pub checked: usize,
    pub failures: usize,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeVerifyOut {
    pub config: JobConfig,
    pub passed: bool,
    pub identities: Vec<IdentityOut>,
}

/// Written for usage and parse errors (exit 1) and for connections that
/// violate a command's flatness precondition (exit 2).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorOut {
    pub error: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub config: Option<JobConfig>,
}

/// Renders a payload's scalar parts.
pub fn parts_out<T: FormLike>(p: &T) -> Vec<String> {
    p.parts().iter().map(|f| f.to_string()).collect()
}
