//! Perfect simulation of finite-range Gibbs point processes.
//!
//! A stationary free birth-death process is thinned forward in time: a point
//! born at `t` survives with probability `exp(-beta * Δ)`, where `Δ` is its
//! energy increment against the accepted points alive just before `t`.
//! Only the ancestor clans of points alive at time 0 are ever drawn.

mod clan;
mod enclosing;
mod energy;
mod free_process;
mod model;
mod perfect;

pub use clan::{
    clan_tail_probe, clan_tail_probe_to, origin_clan, ClanStats, ClanTail, TailRow, DEFAULT_TAIL_DEPTH,
};
pub use enclosing::{min_enclosing_circle, Circle};
pub use energy::delta_psi;
pub use free_process::{Acceptance, BirthDeathEvent};
pub use model::{GibbsModel, Interaction, PairPotential, PotentialStep, DEFAULT_AREA_RESOLUTION};
pub use perfect::{
    default_padding, sample_gibbs_perfect, Padding, PerfectSampler, ThinningSummary, DEFAULT_EVENT_BUDGET,
    DEFAULT_PADDING_TOLERANCE,
};
