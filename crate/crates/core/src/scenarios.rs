//! Bundled example problems.

use crate::dsl;
use crate::model::{
    Attitude, BaseGame, Concept, ConstraintSet, Level, PlayerConstraints, Role, StrategyProfile,
};

/// Prisoner's dilemma with mutual cooperation as the chosen profile.
pub const PD: &str = include_str!("../scenarios/pd.hg");
/// Fall of France: 3x3 base game with the German view declared for `row`.
pub const FRANCE: &str = include_str!("../scenarios/france.hg");
/// Same base game with the two-option French view declared for `column`.
pub const FRANCE_VIEW: &str = include_str!("../scenarios/france_view.hg");

/// `(file name, contents)` of every bundled description.
pub const FILES: [(&str, &str); 3] = [
    ("pd.hg", PD),
    ("france.hg", FRANCE),
    ("france_view.hg", FRANCE_VIEW),
];

/// A ready-to-run rationalisation problem.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub base: BaseGame,
    pub target: StrategyProfile,
    pub constraints: ConstraintSet,
}

fn parse_bundled(text: &str) -> dsl::ProblemSpec {
    dsl::parse(text).expect("bundled scenario parses").spec
}

/// Rationalise mutual cooperation over attitude-consistent strict rank
/// tables for both players, strong concept.
pub fn pd_attitudes(level: Level) -> Scenario {
    let spec = parse_bundled(PD);
    let entry = PlayerConstraints {
        enumerate_rank_tables: true,
        own_attitudes: Some(Attitude::ALL.to_vec()),
        opponent_attitudes: Some(Attitude::ALL.to_vec()),
        ..Default::default()
    };
    let mut constraints = ConstraintSet::new(Concept::StrongHne, level);
    for (p, _) in spec.base.players() {
        constraints = constraints.with_player(p.clone(), entry.clone());
    }
    Scenario {
        target: spec.target.expect("pd.hg has a chosen profile"),
        base: spec.base,
        constraints,
    }
}

/// Rationalise the Ardennes attack: France keeps its two-option game,
/// Germany keeps its ranks and varies which French moves it believes in.
/// Weak concept, level 2.
pub fn fall_of_france() -> Scenario {
    let spec = parse_bundled(FRANCE);
    let view = parse_bundled(FRANCE_VIEW);
    let germany = spec.base.player_with_role(Role::Row).clone();
    let france = spec.base.player_with_role(Role::Column).clone();
    let german_ranks = spec.view(Role::Row).expect("german view").table().clone();
    let french_game = view.view(Role::Column).expect("french view").clone();
    let constraints = ConstraintSet::new(Concept::WeakHne, Level::Two)
        .with_player(
            germany,
            PlayerConstraints {
                fixed_ranks: Some(german_ranks),
                enumerate_opponent_actions: true,
                ..Default::default()
            },
        )
        .with_player(france, PlayerConstraints::fixed(french_game));
    Scenario {
        target: spec.target.expect("france.hg has a chosen profile"),
        base: spec.base,
        constraints,
    }
}
