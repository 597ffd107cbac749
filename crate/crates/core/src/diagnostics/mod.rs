//! Checks of computed states against functional identities, a-priori
//! bounds, decay and the exponent conditions behind radial symmetry.

mod apriori;
mod assumption;
mod pohozaev;
mod tail;

pub use apriori::{apriori_report, AprioriReport, NormEntry};
pub use assumption::{
    assumption12_feasible, check_witness, explicit_witness, FeasibilityReport, Witness, WitnessCheck,
};
pub use pohozaev::{pohozaev_for, pohozaev_report, PohozaevReport};
pub use tail::{exp_tail_integral, tail_bracket_ratio, TAIL_BRACKET};

pub use crate::solver::{fit_decay, Decay};
