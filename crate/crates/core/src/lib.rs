//! Agnostic learning of functions of halfspaces by L1 polynomial regression,
//! together with the moment-matching machinery that backs it: finite-support
//! moment LPs and their sandwiching-polynomial duals, samplers for smoothed
//! and k-wise independent distributions, moment tables and growth profiles,
//! statistical distances, and a deterministic simplex solver underneath.
//!
//! The `exp` module and the `momentmatch` binary drive reproducible
//! experiment suites (`learn`, `sandwich`, `fool`, `probe`, `moments`) from
//! flat key=value config files.

pub mod dist;
pub mod error;
pub mod geom;
pub mod learner;
pub mod lp;
pub mod moments;
pub mod poly;
pub mod rng;

pub use dist::{
    isotropize, kwise_construct, sample, smooth, smooth_with_cov, AffineMap, DistributionSpec,
    FiniteDistribution,
};
pub use error::{CoreError, DistError};
pub use geom::{sign_pm, Halfspace, HalfspaceFunction, LabeledSample, Point};
pub use learner::{
    agnostic_learn, evaluate, fit_l1, select_threshold, DegreeSchedule, Hypothesis, L1Fit,
    LearnError, ScheduleFamily,
};
pub use moments::{
    beta_profile, directional_moment, empirical_moments, exact_moments, BetaProfile, MomentError,
    MomentSource, MomentVector,
};
pub use lp::{
    solve as solve_lp, Constraint, LinearProgram, LpError, LpSolution, LpStatus, PivotRule,
    Relation, Sense,
};
pub use poly::{binomial, enumerate_multi_indices, MultiIndex, Polynomial};
