//! Hypergame engine for two-player normal-form games.
//!
//! - [`model`]: base games, subjective games, hypergames and constraint sets.
//! - [`dsl`]: the fact-based `.hg` description language.
//! - [`solver`]: weak best responses, pure Nash equilibria, strong and weak
//!   hypergame Nash equilibria.
//! - [`constraints`]: social attitudes and the symmetric-expectation test.
//! - [`rationaliser`]: generate-and-filter search for the hypergames that make
//!   a given profile rational.

pub mod constraints;
pub mod dsl;
pub mod model;
pub mod rationaliser;
pub mod scenarios;
pub mod solver;

pub use dsl::{parse, render, ParseError, Parsed, ProblemSpec};
pub use model::{
    validate_problem, Attitude, BaseGame, Concept, ConstraintSet, GameDraft, Hypergame, Level,
    ModelError, OptionId, OwnActionPolicy, PlayerConstraints, PlayerId, RankTable, Role,
    StrategyProfile, SubjectiveGame, ValidationReport,
};
pub use rationaliser::{rationalise, rationalise_with, RationalisationResult, RationaliseError};
pub use solver::{
    best_response_set, is_strong_hne, is_weak_hne, nash_components, nash_equilibria,
    ordinal_from_cardinal, GameView,
};
