//! The umpire: generate candidate subjective games around a target profile,
//! keep the ones under which the target is rational, and assemble them into
//! hypergames.

use std::sync::Arc;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::constraints::{self, ConstraintError, DilemmaContext};
use crate::model::{
    Attitude, BaseGame, Concept, ConstraintSet, Hypergame, Level, ModelError, OptionId,
    OwnActionPolicy, PlayerConstraints, PlayerId, RankTable, Role, StrategyProfile, SubjectiveGame,
};
use crate::solver;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationaliseError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Constraint(#[from] ConstraintError),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("self-check failed: hypergame {index} does not satisfy {concept} for {target}")]
    SelfCheck {
        index: usize,
        concept: Concept,
        target: StrategyProfile,
    },
}

fn config<T>(msg: impl Into<String>) -> Result<T, RationaliseError> {
    Err(RationaliseError::Config(msg.into()))
}

// ---------------------------------------------------------------------------
// rank tables

/// One perspective's rank vectors (row-major over the cells) in
/// lexicographic order, optionally filtered by attitudes.
#[derive(Debug, Clone)]
struct PerspectiveOrders {
    next: Option<Vec<u32>>,
    strict: bool,
    attitudes: Option<(Vec<Attitude>, Role)>,
}

impl PerspectiveOrders {
    fn new(cells: usize, strict: bool, attitudes: Option<(Vec<Attitude>, Role)>) -> Self {
        let first = if strict {
            (1..=cells as u32).collect()
        } else {
            vec![1; cells]
        };
        PerspectiveOrders {
            next: Some(first),
            strict,
            attitudes,
        }
    }

    fn accepts(&self, ranks: &[u32]) -> bool {
        if !self.strict && !is_dense(ranks) {
            return false;
        }
        match &self.attitudes {
            None => true,
            Some((set, role)) => set
                .iter()
                .any(|&a| constraints::ranks_match_attitude(ranks, *role, a).unwrap_or(false)),
        }
    }
}

impl Iterator for PerspectiveOrders {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        loop {
            let current = self.next.take()?;
            let mut following = current.clone();
            let more = if self.strict {
                next_permutation(&mut following)
            } else {
                odometer_step(&mut following)
            };
            if more {
                self.next = Some(following);
            }
            if self.accepts(&current) {
                return Some(current);
            }
        }
    }
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

// counts in base k over digits 1..=k
fn odometer_step(v: &mut [u32]) -> bool {
    let k = v.len() as u32;
    for d in v.iter_mut().rev() {
        if *d < k {
            *d += 1;
            return true;
        }
        *d = 1;
    }
    false
}

// uses every rank 1..=max
fn is_dense(ranks: &[u32]) -> bool {
    let max = ranks.iter().copied().max().unwrap_or(0) as usize;
    let mut seen = vec![false; max];
    for &r in ranks {
        if r == 0 {
            return false;
        }
        seen[r as usize - 1] = true;
    }
    seen.into_iter().all(|s| s)
}

/// Stream of rank tables over a fixed pair of action lists: row-perspective
/// vectors in the outer loop, column-perspective vectors inside.
#[derive(Debug, Clone)]
pub struct RankTables {
    rows: Vec<OptionId>,
    cols: Vec<OptionId>,
    outer: PerspectiveOrders,
    inner: PerspectiveOrders,
    current: Option<(Vec<u32>, PerspectiveOrders)>,
}

impl Iterator for RankTables {
    type Item = RankTable;

    fn next(&mut self) -> Option<RankTable> {
        loop {
            if self.current.is_none() {
                let row = self.outer.next()?;
                self.current = Some((row, self.inner.clone()));
            }
            let (row, inner) = self.current.as_mut().unwrap();
            match inner.next() {
                Some(col) => {
                    let ranks = row.iter().copied().zip(col).collect();
                    return Some(RankTable::from_parts_unchecked(
                        self.rows.clone(),
                        self.cols.clone(),
                        ranks,
                    ));
                }
                None => self.current = None,
            }
        }
    }
}

fn attitude_sets(entry: &PlayerConstraints) -> (Vec<Attitude>, Vec<Attitude>) {
    let own = entry
        .own_attitudes
        .clone()
        .unwrap_or_else(|| Attitude::ALL.to_vec());
    let opp = entry
        .opponent_attitudes
        .clone()
        .unwrap_or_else(|| Attitude::ALL.to_vec());
    (own, opp)
}

/// Every rank table over `rows x cols` allowed by `entry`, for a subjective
/// game owned by the holder of `owner_role`. With strict ranks each
/// perspective is a permutation of `1..=cells`; otherwise every weak order,
/// written as a dense ranking.
pub fn enumerate_rank_tables(
    base: &BaseGame,
    rows: &[OptionId],
    cols: &[OptionId],
    owner_role: Role,
    entry: &PlayerConstraints,
) -> Result<RankTables, RationaliseError> {
    if rows.is_empty() || cols.is_empty() {
        return config("rank tables need non-empty action sets");
    }
    let cells = rows.len() * cols.len();
    let (row_filter, col_filter) = if entry.has_attitudes() {
        if !entry.strict_ranks {
            return config("attitude constraints require strict ranks");
        }
        let ctx = DilemmaContext::from_base(base)?;
        let dilemma = [ctx.coop.clone(), ctx.defect.clone()];
        if rows != dilemma || cols != dilemma {
            return Err(ConstraintError::NotDilemma(format!(
                "domain is {}x{}, not the full dilemma",
                rows.len(),
                cols.len()
            ))
            .into());
        }
        let (own, opp) = attitude_sets(entry);
        let (row_set, col_set) = if owner_role == Role::Row {
            (own, opp)
        } else {
            (opp, own)
        };
        (Some((row_set, Role::Row)), Some((col_set, Role::Column)))
    } else {
        (None, None)
    };
    let outer = PerspectiveOrders::new(cells, entry.strict_ranks, row_filter);
    let inner = PerspectiveOrders::new(cells, entry.strict_ranks, col_filter);
    Ok(RankTables {
        rows: rows.to_vec(),
        cols: cols.to_vec(),
        outer,
        inner,
        current: None,
    })
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

// ordered Bell numbers: weak orders on n items
fn weak_orders(n: usize) -> u128 {
    let mut a = vec![1u128; n + 1];
    for m in 1..=n {
        a[m] = (1..=m).fold(0u128, |acc, i| {
            acc.saturating_add(binomial(m, i).saturating_mul(a[m - i]))
        });
    }
    a[n]
}

/// Number of tables [`enumerate_rank_tables`] yields for a domain of `cells`.
pub fn rank_table_count(cells: usize, entry: &PlayerConstraints) -> u128 {
    if entry.has_attitudes() {
        let (own, opp) = attitude_sets(entry);
        let distinct = |s: &[Attitude]| s.iter().unique().count() as u128;
        return distinct(&own) * distinct(&opp);
    }
    let per = if entry.strict_ranks {
        factorial(cells)
    } else {
        weak_orders(cells)
    };
    per.saturating_mul(per)
}

// ---------------------------------------------------------------------------
// action spaces

/// Believed action sets for one candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSpace {
    pub rows: Vec<OptionId>,
    pub cols: Vec<OptionId>,
}

fn subsets(options: &[OptionId]) -> impl Iterator<Item = Vec<OptionId>> + '_ {
    (1..=options.len()).flat_map(move |size| {
        (0..options.len())
            .combinations(size)
            .map(move |idx| idx.into_iter().map(|i| options[i].clone()).collect())
    })
}

/// Believed action spaces for `owner`: the owner's side per `policy`, the
/// opponent's side over all non-empty subsets when `enumerate_opponent`,
/// each side ordered by subset size then lexicographically.
pub fn enumerate_action_spaces(
    base: &BaseGame,
    owner: &PlayerId,
    target: &StrategyProfile,
    policy: OwnActionPolicy,
    enumerate_opponent: bool,
) -> Result<Vec<ActionSpace>, RationaliseError> {
    base.check_profile(target)?;
    let Some(role) = base.role_of(owner) else {
        return config(format!("`{owner}` is not a player"));
    };
    let own_opts = base.options(role);
    let opp_opts = base.options(role.opposite());
    let own_sets: Vec<Vec<OptionId>> = match policy {
        OwnActionPolicy::FullOptions => vec![own_opts.to_vec()],
        OwnActionPolicy::ContainsOwnComponent => subsets(own_opts)
            .filter(|s| s.contains(target.component(role)))
            .collect(),
    };
    let opp_sets: Vec<Vec<OptionId>> = if enumerate_opponent {
        subsets(opp_opts).collect()
    } else {
        vec![opp_opts.to_vec()]
    };
    let mut out = Vec::with_capacity(own_sets.len() * opp_sets.len());
    for own in &own_sets {
        for opp in &opp_sets {
            let (rows, cols) = match role {
                Role::Row => (own.clone(), opp.clone()),
                Role::Column => (opp.clone(), own.clone()),
            };
            out.push(ActionSpace { rows, cols });
        }
    }
    Ok(out)
}

// (set size, number of sets of that size)
fn size_profile(n: usize, policy: Option<OwnActionPolicy>, enumerate: bool) -> Vec<(usize, u128)> {
    match (policy, enumerate) {
        (Some(OwnActionPolicy::ContainsOwnComponent), _) => {
            (1..=n).map(|s| (s, binomial(n - 1, s - 1))).collect()
        }
        (Some(OwnActionPolicy::FullOptions), _) | (None, false) => vec![(n, 1)],
        (None, true) => (1..=n).map(|s| (s, binomial(n, s))).collect(),
    }
}

/// Candidate count for one player before any generation happens.
pub fn candidate_estimate(base: &BaseGame, player: &PlayerId, entry: &PlayerConstraints) -> u128 {
    if entry.fixed_game.is_some() {
        return 1;
    }
    let Some(role) = base.role_of(player) else {
        return 0;
    };
    let own = size_profile(
        base.options(role).len(),
        Some(entry.own_action_policy),
        false,
    );
    let opp = size_profile(
        base.options(role.opposite()).len(),
        None,
        entry.enumerate_opponent_actions,
    );
    let mut total: u128 = 0;
    for &(s_own, n_own) in &own {
        for &(s_opp, n_opp) in &opp {
            let tables = if entry.enumerate_rank_tables {
                rank_table_count(s_own * s_opp, entry)
            } else {
                1
            };
            total = total.saturating_add(n_own.saturating_mul(n_opp).saturating_mul(tables));
        }
    }
    total
}

// ---------------------------------------------------------------------------
// configuration

fn check_entry(
    base: &BaseGame,
    player: &PlayerId,
    entry: &PlayerConstraints,
) -> Result<(), RationaliseError> {
    if base.role_of(player).is_none() {
        return config(format!("`{player}` is not a player of the base game"));
    }
    if let Some(game) = &entry.fixed_game {
        if entry.enumerate_rank_tables
            || entry.enumerates_actions()
            || entry.fixed_ranks.is_some()
            || entry.has_attitudes()
        {
            return config(format!(
                "`{player}`: fixed_game provided simultaneously with enumeration flags"
            ));
        }
        if game.owner() != player {
            return config(format!(
                "`{player}`: fixed game is owned by `{}`",
                game.owner()
            ));
        }
        let checked = SubjectiveGame::new(base, game.owner().clone(), game.table().clone())?;
        if checked != *game {
            return config(format!(
                "`{player}`: fixed game does not match the base game"
            ));
        }
    }
    if let Some(ranks) = &entry.fixed_ranks {
        if entry.enumerate_rank_tables {
            return config(format!(
                "`{player}`: fixed ranks provided together with rank-table enumeration"
            ));
        }
        if ranks.rows() != base.row_options() || ranks.cols() != base.col_options() {
            return config(format!(
                "`{player}`: fixed ranks must cover every base option in declaration order"
            ));
        }
    }
    if entry.has_attitudes() {
        if !entry.enumerate_rank_tables {
            return config(format!(
                "`{player}`: attitude constraints only apply to rank-table enumeration"
            ));
        }
        if !entry.strict_ranks {
            return config(format!(
                "`{player}`: attitude constraints require strict ranks"
            ));
        }
        if entry.enumerates_actions() {
            return Err(ConstraintError::NotDilemma(
                "action-space enumeration leaves the 2x2 domain".into(),
            )
            .into());
        }
        DilemmaContext::from_base(base)?;
    }
    Ok(())
}

/// Checks level, target and every player entry, including the guard on
/// enumerating both generation axes at once.
pub fn validate_constraints(
    base: &BaseGame,
    target: &StrategyProfile,
    constraints: &ConstraintSet,
) -> Result<(), RationaliseError> {
    if constraints.level == Level::Zero {
        return config("rationalisation level must be 1 or 2");
    }
    base.check_profile(target)?;
    for (player, _) in &constraints.players {
        if base.role_of(player).is_none() {
            return config(format!("`{player}` is not a player of the base game"));
        }
    }
    for (player, _) in base.players() {
        let entry = constraints.entry(player);
        check_entry(base, player, &entry)?;
        if entry.enumerate_rank_tables
            && entry.enumerates_actions()
            && !constraints.allow_joint_enumeration
        {
            return config(format!(
                "`{player}`: enumerating rank tables and action spaces together needs explicit permission"
            ));
        }
    }
    Ok(())
}

/// Pre-generation size estimate per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preflight {
    pub per_player: Vec<(PlayerId, u128)>,
}

impl Preflight {
    pub fn total(&self) -> u128 {
        self.per_player
            .iter()
            .fold(0u128, |acc, (_, n)| acc.saturating_add(*n))
    }
}

pub fn preflight(
    base: &BaseGame,
    target: &StrategyProfile,
    constraints: &ConstraintSet,
) -> Result<Preflight, RationaliseError> {
    validate_constraints(base, target, constraints)?;
    Ok(Preflight {
        per_player: base
            .players()
            .iter()
            .map(|(p, _)| {
                (
                    p.clone(),
                    candidate_estimate(base, p, &constraints.entry(p)),
                )
            })
            .collect(),
    })
}

// ---------------------------------------------------------------------------
// generation and filtering

pub type Candidates = Box<dyn Iterator<Item = SubjectiveGame> + Send>;

/// Candidate subjective games for `player`. Every yielded game contains the
/// player's own target component.
pub fn generate_candidates(
    base: &BaseGame,
    target: &StrategyProfile,
    player: &PlayerId,
    entry: &PlayerConstraints,
) -> Result<Candidates, RationaliseError> {
    base.check_profile(target)?;
    check_entry(base, player, entry)?;
    let role = base.role_of(player).unwrap();
    let own_component = target.component(role).clone();

    if let Some(game) = &entry.fixed_game {
        let keep = game.believed(role).contains(&own_component);
        return Ok(Box::new(keep.then(|| game.clone()).into_iter()));
    }

    let spaces = enumerate_action_spaces(
        base,
        player,
        target,
        entry.own_action_policy,
        entry.enumerate_opponent_actions,
    )?;
    let owner = player.clone();
    if entry.enumerate_rank_tables {
        let mut streams = Vec::with_capacity(spaces.len());
        for space in &spaces {
            streams.push(enumerate_rank_tables(
                base,
                &space.rows,
                &space.cols,
                role,
                entry,
            )?);
        }
        Ok(Box::new(streams.into_iter().flatten().map(move |table| {
            SubjectiveGame::from_parts_unchecked(owner.clone(), table)
        })))
    } else {
        let full = match &entry.fixed_ranks {
            Some(t) => t.clone(),
            None => solver::ordinal_from_cardinal(base),
        };
        let games = spaces
            .iter()
            .map(|s| {
                full.restrict(&s.rows, &s.cols)
                    .map(|t| SubjectiveGame::from_parts_unchecked(owner.clone(), t))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Box::new(games.into_iter()))
    }
}

fn retains(game: &SubjectiveGame, target: &StrategyProfile, concept: Concept, role: Role) -> bool {
    match concept {
        Concept::StrongHne => solver::is_equilibrium(game.table(), target),
        Concept::WeakHne => solver::in_nash_component(game.table(), role, target.component(role)),
    }
}

/// Keeps the candidates under which the target satisfies `concept` from the
/// point of view of `player_role`.
pub fn filter_candidates(
    candidates: impl IntoIterator<Item = SubjectiveGame>,
    target: &StrategyProfile,
    concept: Concept,
    player_role: Role,
) -> Vec<SubjectiveGame> {
    candidates
        .into_iter()
        .filter(|g| retains(g, target, concept, player_role))
        .collect()
}

const BATCH: usize = 4096;

/// Same result as [`filter_candidates`], evaluated on `pool` in ordered
/// batches. Also returns how many candidates were examined.
pub fn filter_candidates_parallel(
    candidates: impl IntoIterator<Item = SubjectiveGame>,
    target: &StrategyProfile,
    concept: Concept,
    player_role: Role,
    pool: &rayon::ThreadPool,
) -> (Vec<SubjectiveGame>, u64) {
    let mut kept = Vec::new();
    let mut seen = 0u64;
    let mut iter = candidates.into_iter();
    loop {
        let batch: Vec<SubjectiveGame> = iter.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            break;
        }
        seen += batch.len() as u64;
        let mut part: Vec<SubjectiveGame> = pool.install(|| {
            batch
                .into_par_iter()
                .filter(|g| retains(g, target, concept, player_role))
                .collect()
        });
        kept.append(&mut part);
    }
    (kept, seen)
}

/// Cartesian product of the retained candidates, first player outermost.
/// At level 1 only candidates passing the symmetric-expectation test take
/// part; level 0 has no views to vary and yields nothing.
pub fn assemble_hypergames(
    base: &Arc<BaseGame>,
    retained: &[(PlayerId, Vec<SubjectiveGame>)],
    level: Level,
) -> Vec<Hypergame> {
    if level == Level::Zero {
        return Vec::new();
    }
    let pools: Vec<Vec<&SubjectiveGame>> = base
        .players()
        .iter()
        .map(|(p, _)| {
            retained
                .iter()
                .filter(|(q, _)| q == p)
                .flat_map(|(_, games)| games.iter())
                .filter(|g| level != Level::One || constraints::is_symmetric_expectation(base, g))
                .collect()
        })
        .collect();
    pools
        .iter()
        .map(|pool| pool.iter())
        .multi_cartesian_product()
        .map(|views| {
            Hypergame::from_parts_unchecked(
                level,
                Arc::clone(base),
                views.into_iter().map(|g| (*g).clone()).collect(),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// the umpire

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerOutcome {
    pub player: PlayerId,
    pub role: Role,
    /// Preflight size of this player's candidate space.
    pub estimate: u128,
    /// Candidates actually generated before filtering.
    pub generated: u64,
    /// Candidates satisfying the concept, in generation order.
    pub retained: Vec<SubjectiveGame>,
    /// How many retained candidates survive the level requirement.
    pub level_retained: usize,
}

/// Every belief structure found for the target, plus the sizes involved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalisationResult {
    pub target: StrategyProfile,
    pub concept: Concept,
    pub level: Level,
    pub players: Vec<PlayerOutcome>,
    pub hypergames: Vec<Hypergame>,
}

impl RationalisationResult {
    pub fn candidates(&self, player: &PlayerId) -> &[SubjectiveGame] {
        self.players
            .iter()
            .find(|o| o.player == *player)
            .map(|o| o.retained.as_slice())
            .unwrap_or(&[])
    }

    /// Retained candidates per player and the number of hypergames.
    pub fn counts(&self) -> (Vec<(PlayerId, usize)>, usize) {
        (
            self.players
                .iter()
                .map(|o| (o.player.clone(), o.retained.len()))
                .collect(),
            self.hypergames.len(),
        )
    }

    /// False when no belief structure rationalises the target.
    pub fn is_rationalisable(&self) -> bool {
        !self.hypergames.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Filtering pool size; `None` uses rayon's default.
    pub threads: Option<usize>,
}

pub fn rationalise(
    base: &BaseGame,
    target: &StrategyProfile,
    constraints: &ConstraintSet,
) -> Result<RationalisationResult, RationaliseError> {
    rationalise_with(base, target, constraints, &RunOptions::default())
}

pub fn rationalise_with(
    base: &BaseGame,
    target: &StrategyProfile,
    constraints: &ConstraintSet,
    options: &RunOptions,
) -> Result<RationalisationResult, RationaliseError> {
    let estimates = preflight(base, target, constraints)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = options.threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| RationaliseError::Config(format!("thread pool: {e}")))?;

    let base = Arc::new(base.clone());
    let mut players = Vec::with_capacity(2);
    for ((player, role), (_, estimate)) in base.players().iter().zip(&estimates.per_player) {
        let entry = constraints.entry(player);
        let candidates = generate_candidates(&base, target, player, &entry)?;
        let (retained, generated) =
            filter_candidates_parallel(candidates, target, constraints.concept, *role, &pool);
        let level_retained = match constraints.level {
            Level::One => retained
                .iter()
                .filter(|g| constraints::is_symmetric_expectation(&base, g))
                .count(),
            _ => retained.len(),
        };
        players.push(PlayerOutcome {
            player: player.clone(),
            role: *role,
            estimate: *estimate,
            generated,
            retained,
            level_retained,
        });
    }

    let retained: Vec<(PlayerId, Vec<SubjectiveGame>)> = players
        .iter()
        .map(|o| (o.player.clone(), o.retained.clone()))
        .collect();
    let hypergames = assemble_hypergames(&base, &retained, constraints.level);

    for (index, h) in hypergames.iter().enumerate() {
        let ok = match constraints.concept {
            Concept::StrongHne => solver::is_strong_hne(h, target),
            Concept::WeakHne => solver::is_weak_hne(h, target),
        };
        if !ok {
            return Err(RationaliseError::SelfCheck {
                index,
                concept: constraints.concept,
                target: target.clone(),
            });
        }
    }

    Ok(RationalisationResult {
        target: target.clone(),
        concept: constraints.concept,
        level: constraints.level,
        players,
        hypergames,
    })
}
