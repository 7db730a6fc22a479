//! Domain types shared by the parser, the solver and the rationaliser.
//!
//! Everything here is plain data. Invariants are checked once, when a value
//! is built, so the downstream search code can index freely.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::constraints;

/// True when `s` matches `[a-z][a-z0-9_]*`.
pub fn is_symbol(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

macro_rules! symbol_newtype {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(String);

        impl $name {
            pub fn new(name: impl Into<String>) -> Result<Self, ModelError> {
                let name = name.into();
                if is_symbol(&name) {
                    Ok($name(name))
                } else {
                    Err(ModelError::InvalidSymbol(name))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl FromStr for $name {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                $name::new(s)
            }
        }
    };
}

symbol_newtype!(
    /// A move that exists in the base game.
    OptionId
);
symbol_newtype!(
    /// An agent taking part in the game.
    PlayerId
);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Row,
    Column,
}

impl Role {
    pub const BOTH: [Role; 2] = [Role::Row, Role::Column];

    pub fn opposite(self) -> Role {
        match self {
            Role::Row => Role::Column,
            Role::Column => Role::Row,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Role::Row => "row",
            Role::Column => "column",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "row" => Ok(Role::Row),
            "column" => Ok(Role::Column),
            other => Err(ModelError::InvalidRole(other.to_string())),
        }
    }
}

/// One action per role: the outcome under evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StrategyProfile {
    pub row: OptionId,
    pub col: OptionId,
}

impl StrategyProfile {
    pub fn new(row: OptionId, col: OptionId) -> Self {
        StrategyProfile { row, col }
    }

    pub fn component(&self, role: Role) -> &OptionId {
        match role {
            Role::Row => &self.row,
            Role::Column => &self.col,
        }
    }

    pub fn transposed(&self) -> StrategyProfile {
        StrategyProfile {
            row: self.col.clone(),
            col: self.row.clone(),
        }
    }
}

impl fmt::Display for StrategyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    PlayerCount(usize),
    DuplicatePlayer(PlayerId),
    RoleNotHeld(Role),
    RoleHeldTwice(Role),
    NoOptions(Role),
    DuplicateOption(Role, OptionId),
    UnknownPayoffOption(Role, OptionId),
    DuplicatePayoff(OptionId, OptionId),
    IncompletePayoffTable(Vec<(OptionId, OptionId)>),
    UnknownTargetAction(Role, OptionId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::PlayerCount(n) => write!(f, "expected exactly 2 players, found {n}"),
            Violation::DuplicatePlayer(p) => write!(f, "duplicate player `{p}`"),
            Violation::RoleNotHeld(r) => write!(f, "no player holds the {r} role"),
            Violation::RoleHeldTwice(r) => write!(f, "more than one player holds the {r} role"),
            Violation::NoOptions(r) => write!(f, "no options declared for {r}"),
            Violation::DuplicateOption(r, o) => write!(f, "duplicate option `{o}` for {r}"),
            Violation::UnknownPayoffOption(r, o) => {
                write!(f, "payoff references undeclared {r} option `{o}`")
            }
            Violation::DuplicatePayoff(a, b) => write!(f, "duplicate payoff cell ({a}, {b})"),
            Violation::IncompletePayoffTable(missing) => {
                write!(f, "incomplete payoff table: missing")?;
                for (i, (a, b)) in missing.iter().enumerate() {
                    let sep = if i == 0 { " " } else { ", " };
                    write!(f, "{sep}({a}, {b})")?;
                }
                Ok(())
            }
            Violation::UnknownTargetAction(Role::Row, o) => write!(f, "unknown row action `{o}`"),
            Violation::UnknownTargetAction(Role::Column, o) => {
                write!(f, "unknown column action `{o}`")
            }
        }
    }
}

/// Outcome of [`validate_problem`]; empty means the problem is well formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("`{0}` is not a valid symbol (expected [a-z][a-z0-9_]*)")]
    InvalidSymbol(String),
    #[error("`{0}` is not a role (expected `row` or `column`)")]
    InvalidRole(String),
    #[error("invalid base game: {0}")]
    InvalidGame(ValidationReport),
    #[error("invalid rank table: {0}")]
    InvalidRankTable(String),
    #[error("invalid subjective game: {0}")]
    InvalidSubjectiveGame(String),
    #[error("invalid hypergame: {0}")]
    InvalidHypergame(String),
    #[error("profile {0} is not a profile of the base game")]
    UnknownProfile(StrategyProfile),
    #[error("hypergame level must be 0, 1 or 2, got {0}")]
    InvalidLevel(u8),
}

/// Unvalidated base-game data as read from a description.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GameDraft {
    pub players: Vec<(PlayerId, Role)>,
    pub row_options: Vec<OptionId>,
    pub col_options: Vec<OptionId>,
    pub payoffs: Vec<(OptionId, OptionId, i64, i64)>,
}

/// Checks a draft base game and an optional target profile, listing every
/// violation instead of stopping at the first.
pub fn validate_problem(draft: &GameDraft, target: Option<&StrategyProfile>) -> ValidationReport {
    let mut violations = Vec::new();

    if draft.players.len() != 2 {
        violations.push(Violation::PlayerCount(draft.players.len()));
    }
    let mut seen = HashSet::new();
    for (p, _) in &draft.players {
        if !seen.insert(p) {
            violations.push(Violation::DuplicatePlayer(p.clone()));
        }
    }
    for role in Role::BOTH {
        match draft.players.iter().filter(|(_, r)| *r == role).count() {
            0 => violations.push(Violation::RoleNotHeld(role)),
            1 => {}
            _ => violations.push(Violation::RoleHeldTwice(role)),
        }
    }

    for (role, options) in [
        (Role::Row, &draft.row_options),
        (Role::Column, &draft.col_options),
    ] {
        if options.is_empty() {
            violations.push(Violation::NoOptions(role));
        }
        let mut seen = HashSet::new();
        for o in options {
            if !seen.insert(o) {
                violations.push(Violation::DuplicateOption(role, o.clone()));
            }
        }
    }

    let mut cells = HashSet::new();
    for (a, b, _, _) in &draft.payoffs {
        let mut known = true;
        if !draft.row_options.contains(a) {
            violations.push(Violation::UnknownPayoffOption(Role::Row, a.clone()));
            known = false;
        }
        if !draft.col_options.contains(b) {
            violations.push(Violation::UnknownPayoffOption(Role::Column, b.clone()));
            known = false;
        }
        if known && !cells.insert((a, b)) {
            violations.push(Violation::DuplicatePayoff(a.clone(), b.clone()));
        }
    }
    let mut missing = Vec::new();
    for a in &draft.row_options {
        for b in &draft.col_options {
            if !cells.contains(&(a, b)) {
                missing.push((a.clone(), b.clone()));
            }
        }
    }
    if !missing.is_empty() {
        violations.push(Violation::IncompletePayoffTable(missing));
    }

    if let Some(t) = target {
        if !draft.row_options.contains(&t.row) {
            violations.push(Violation::UnknownTargetAction(Role::Row, t.row.clone()));
        }
        if !draft.col_options.contains(&t.col) {
            violations.push(Violation::UnknownTargetAction(Role::Column, t.col.clone()));
        }
    }

    ValidationReport { violations }
}

/// The ground-truth game: two players, each role's options, and a cardinal
/// payoff pair for every profile.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BaseGame {
    players: Vec<(PlayerId, Role)>,
    row_options: Vec<OptionId>,
    col_options: Vec<OptionId>,
    // row-major over row_options x col_options
    payoffs: Vec<(i64, i64)>,
}

impl BaseGame {
    pub fn new(draft: GameDraft) -> Result<Self, ModelError> {
        let report = validate_problem(&draft, None);
        if !report.is_ok() {
            return Err(ModelError::InvalidGame(report));
        }
        let cols = draft.col_options.len();
        let mut payoffs = vec![(0, 0); draft.row_options.len() * cols];
        for (a, b, u, v) in &draft.payoffs {
            let i = draft.row_options.iter().position(|o| o == a).unwrap();
            let j = draft.col_options.iter().position(|o| o == b).unwrap();
            payoffs[i * cols + j] = (*u, *v);
        }
        Ok(BaseGame {
            players: draft.players,
            row_options: draft.row_options,
            col_options: draft.col_options,
            payoffs,
        })
    }

    /// Players in declaration order.
    pub fn players(&self) -> &[(PlayerId, Role)] {
        &self.players
    }

    pub fn player_with_role(&self, role: Role) -> &PlayerId {
        &self.players.iter().find(|(_, r)| *r == role).unwrap().0
    }

    pub fn role_of(&self, player: &PlayerId) -> Option<Role> {
        self.players
            .iter()
            .find(|(p, _)| p == player)
            .map(|(_, r)| *r)
    }

    pub fn options(&self, role: Role) -> &[OptionId] {
        match role {
            Role::Row => &self.row_options,
            Role::Column => &self.col_options,
        }
    }

    pub fn row_options(&self) -> &[OptionId] {
        &self.row_options
    }

    pub fn col_options(&self) -> &[OptionId] {
        &self.col_options
    }

    pub fn option_index(&self, role: Role, option: &OptionId) -> Option<usize> {
        self.options(role).iter().position(|o| o == option)
    }

    pub fn payoff_at(&self, row: usize, col: usize) -> (i64, i64) {
        self.payoffs[row * self.col_options.len() + col]
    }

    pub fn payoff(&self, row: &OptionId, col: &OptionId) -> Option<(i64, i64)> {
        let i = self.option_index(Role::Row, row)?;
        let j = self.option_index(Role::Column, col)?;
        Some(self.payoff_at(i, j))
    }

    /// Number of payoff cells; always `rows * cols`.
    pub fn cell_count(&self) -> usize {
        self.payoffs.len()
    }

    pub fn check_profile(&self, profile: &StrategyProfile) -> Result<(), ModelError> {
        if self.option_index(Role::Row, &profile.row).is_some()
            && self.option_index(Role::Column, &profile.col).is_some()
        {
            Ok(())
        } else {
            Err(ModelError::UnknownProfile(profile.clone()))
        }
    }

    /// Maps an option of `role` onto its counterpart among the opposite
    /// role's options: by name when both roles declare the same option set,
    /// otherwise by declaration position when the lists are equally long.
    pub fn mirror(&self, role: Role, option: &OptionId) -> Option<&OptionId> {
        let own = self.options(role);
        let other = self.options(role.opposite());
        let same_names = own.len() == other.len() && own.iter().all(|o| other.contains(o));
        if same_names {
            other.iter().find(|o| *o == option)
        } else if own.len() == other.len() {
            own.iter().position(|o| o == option).map(|i| &other[i])
        } else {
            None
        }
    }

    pub fn to_draft(&self) -> GameDraft {
        let mut payoffs = Vec::with_capacity(self.payoffs.len());
        for (i, a) in self.row_options.iter().enumerate() {
            for (j, b) in self.col_options.iter().enumerate() {
                let (u, v) = self.payoff_at(i, j);
                payoffs.push((a.clone(), b.clone(), u, v));
            }
        }
        GameDraft {
            players: self.players.clone(),
            row_options: self.row_options.clone(),
            col_options: self.col_options.clone(),
            payoffs,
        }
    }
}

/// Ordinal ranks for both perspectives over a rectangular set of profiles.
/// Higher means more preferred.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RankTable {
    rows: Vec<OptionId>,
    cols: Vec<OptionId>,
    // row-major, (row perspective, column perspective)
    ranks: Vec<(u32, u32)>,
}

impl RankTable {
    pub fn new(
        rows: Vec<OptionId>,
        cols: Vec<OptionId>,
        ranks: Vec<(u32, u32)>,
    ) -> Result<Self, ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidRankTable(msg));
        if rows.is_empty() || cols.is_empty() {
            return bad("empty action list".into());
        }
        if let Some(o) = first_duplicate(&rows).or_else(|| first_duplicate(&cols)) {
            return bad(format!("duplicate action `{o}`"));
        }
        if ranks.len() != rows.len() * cols.len() {
            return bad(format!(
                "expected {} rank pairs, got {}",
                rows.len() * cols.len(),
                ranks.len()
            ));
        }
        Ok(RankTable { rows, cols, ranks })
    }

    /// Builds a table from `(row, col, r_row, r_col)` cells in any order.
    pub fn from_cells<'a>(
        rows: Vec<OptionId>,
        cols: Vec<OptionId>,
        cells: impl IntoIterator<Item = (&'a OptionId, &'a OptionId, u32, u32)>,
    ) -> Result<Self, ModelError> {
        let mut slots: Vec<Option<(u32, u32)>> = vec![None; rows.len() * cols.len()];
        for (a, b, u, v) in cells {
            let (Some(i), Some(j)) = (
                rows.iter().position(|o| o == a),
                cols.iter().position(|o| o == b),
            ) else {
                return Err(ModelError::InvalidRankTable(format!(
                    "cell ({a}, {b}) lies outside the table's actions"
                )));
            };
            let slot = &mut slots[i * cols.len() + j];
            if slot.is_some() {
                return Err(ModelError::InvalidRankTable(format!(
                    "duplicate cell ({a}, {b})"
                )));
            }
            *slot = Some((u, v));
        }
        let mut ranks = Vec::with_capacity(slots.len());
        for (k, slot) in slots.into_iter().enumerate() {
            match slot {
                Some(r) => ranks.push(r),
                None => {
                    let (a, b) = (&rows[k / cols.len()], &cols[k % cols.len()]);
                    return Err(ModelError::InvalidRankTable(format!(
                        "missing cell ({a}, {b})"
                    )));
                }
            }
        }
        RankTable::new(rows, cols, ranks)
    }

    /// Like [`RankTable::new`] but additionally requires each perspective to
    /// be a permutation of `1..=cells`.
    pub fn strict(
        rows: Vec<OptionId>,
        cols: Vec<OptionId>,
        ranks: Vec<(u32, u32)>,
    ) -> Result<Self, ModelError> {
        let table = RankTable::new(rows, cols, ranks)?;
        if !table.is_strict() {
            return Err(ModelError::InvalidRankTable(
                "ranks are not a permutation of 1..n for each perspective".into(),
            ));
        }
        Ok(table)
    }

    pub(crate) fn from_parts_unchecked(
        rows: Vec<OptionId>,
        cols: Vec<OptionId>,
        ranks: Vec<(u32, u32)>,
    ) -> Self {
        debug_assert_eq!(ranks.len(), rows.len() * cols.len());
        RankTable { rows, cols, ranks }
    }

    pub fn rows(&self) -> &[OptionId] {
        &self.rows
    }

    pub fn cols(&self) -> &[OptionId] {
        &self.cols
    }

    pub fn actions(&self, role: Role) -> &[OptionId] {
        match role {
            Role::Row => &self.rows,
            Role::Column => &self.cols,
        }
    }

    pub fn rank_at(&self, row: usize, col: usize) -> (u32, u32) {
        self.ranks[row * self.cols.len() + col]
    }

    pub fn get(&self, row: &OptionId, col: &OptionId) -> Option<(u32, u32)> {
        let i = self.rows.iter().position(|o| o == row)?;
        let j = self.cols.iter().position(|o| o == col)?;
        Some(self.rank_at(i, j))
    }

    /// Row-major rank pairs.
    pub fn ranks(&self) -> &[(u32, u32)] {
        &self.ranks
    }

    /// One perspective's ranks, row-major.
    pub fn perspective(&self, role: Role) -> Vec<u32> {
        self.ranks
            .iter()
            .map(|&(u, v)| if role == Role::Row { u } else { v })
            .collect()
    }

    /// Iterates `(row, col, (r_row, r_col))` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (&OptionId, &OptionId, (u32, u32))> + '_ {
        self.rows.iter().enumerate().flat_map(move |(i, a)| {
            self.cols
                .iter()
                .enumerate()
                .map(move |(j, b)| (a, b, self.rank_at(i, j)))
        })
    }

    pub fn is_strict(&self) -> bool {
        let n = self.ranks.len();
        Role::BOTH.iter().all(|&role| {
            let mut seen = vec![false; n];
            self.perspective(role).into_iter().all(|r| {
                let ok = r >= 1 && (r as usize) <= n && !seen[r as usize - 1];
                if ok {
                    seen[r as usize - 1] = true;
                }
                ok
            })
        })
    }

    /// The sub-table over the given actions, keeping the original integers.
    pub fn restrict(&self, rows: &[OptionId], cols: &[OptionId]) -> Result<RankTable, ModelError> {
        let idx = |list: &[OptionId], wanted: &[OptionId]| -> Result<Vec<usize>, ModelError> {
            wanted
                .iter()
                .map(|o| {
                    list.iter().position(|x| x == o).ok_or_else(|| {
                        ModelError::InvalidRankTable(format!("`{o}` is not in the table"))
                    })
                })
                .collect()
        };
        let ri = idx(&self.rows, rows)?;
        let ci = idx(&self.cols, cols)?;
        let mut ranks = Vec::with_capacity(ri.len() * ci.len());
        for &i in &ri {
            for &j in &ci {
                ranks.push(self.rank_at(i, j));
            }
        }
        RankTable::new(rows.to_vec(), cols.to_vec(), ranks)
    }

    /// Swaps the roles: rows become columns and each rank pair is flipped.
    pub fn transposed(&self) -> RankTable {
        let mut ranks = Vec::with_capacity(self.ranks.len());
        for j in 0..self.cols.len() {
            for i in 0..self.rows.len() {
                let (u, v) = self.rank_at(i, j);
                ranks.push((v, u));
            }
        }
        RankTable {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            ranks,
        }
    }
}

fn first_duplicate(list: &[OptionId]) -> Option<&OptionId> {
    let mut seen = HashSet::new();
    list.iter().find(|o| !seen.insert(*o))
}

/// One player's private interpretation of the base game.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubjectiveGame {
    owner: PlayerId,
    table: RankTable,
}

impl SubjectiveGame {
    /// Validates the view against `base`. Believed actions must be options of
    /// the base game; they are reordered into declaration order.
    pub fn new(base: &BaseGame, owner: PlayerId, table: RankTable) -> Result<Self, ModelError> {
        if base.role_of(&owner).is_none() {
            return Err(ModelError::InvalidSubjectiveGame(format!(
                "`{owner}` is not a player of the base game"
            )));
        }
        for role in Role::BOTH {
            for o in table.actions(role) {
                if base.option_index(role, o).is_none() {
                    return Err(ModelError::InvalidSubjectiveGame(format!(
                        "believed {role} action `{o}` is not a base option"
                    )));
                }
            }
        }
        let sorted = |role: Role| {
            let mut v = table.actions(role).to_vec();
            v.sort_by_key(|o| base.option_index(role, o));
            v
        };
        let (rows, cols) = (sorted(Role::Row), sorted(Role::Column));
        let table = if rows != table.rows || cols != table.cols {
            table.restrict(&rows, &cols)?
        } else {
            table
        };
        Ok(SubjectiveGame { owner, table })
    }

    pub(crate) fn from_parts_unchecked(owner: PlayerId, table: RankTable) -> Self {
        SubjectiveGame { owner, table }
    }

    pub fn owner(&self) -> &PlayerId {
        &self.owner
    }

    pub fn table(&self) -> &RankTable {
        &self.table
    }

    pub fn believed(&self, role: Role) -> &[OptionId] {
        self.table.actions(role)
    }

    pub fn believed_rows(&self) -> &[OptionId] {
        self.table.rows()
    }

    pub fn believed_cols(&self) -> &[OptionId] {
        self.table.cols()
    }

    /// True when `profile` lies inside the believed action sets.
    pub fn contains(&self, profile: &StrategyProfile) -> bool {
        self.table.rows().contains(&profile.row) && self.table.cols().contains(&profile.col)
    }

    fn check_against(&self, base: &BaseGame) -> Result<(), ModelError> {
        SubjectiveGame::new(base, self.owner.clone(), self.table.clone()).and_then(|g| {
            if g == *self {
                Ok(())
            } else {
                Err(ModelError::InvalidSubjectiveGame(
                    "believed actions are not in declaration order".into(),
                ))
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Zero,
    One,
    Two,
}

impl Level {
    pub fn as_u8(self) -> u8 {
        match self {
            Level::Zero => 0,
            Level::One => 1,
            Level::Two => 2,
        }
    }
}

impl TryFrom<u8> for Level {
    type Error = ModelError;

    fn try_from(value: u8) -> Result<Self, Self::Error> {
        match value {
            0 => Ok(Level::Zero),
            1 => Ok(Level::One),
            2 => Ok(Level::Two),
            n => Err(ModelError::InvalidLevel(n)),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// A leveled collection of subjective games, one per player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergame {
    level: Level,
    base: Arc<BaseGame>,
    // base player order
    views: Vec<SubjectiveGame>,
}

impl Hypergame {
    /// Level 0: the base game is common knowledge.
    pub fn level0(base: Arc<BaseGame>) -> Self {
        Hypergame {
            level: Level::Zero,
            base,
            views: Vec::new(),
        }
    }

    /// Level 1 or 2 from one view per player (any order). Level 1 requires
    /// every view to expect the same rationality from the opponent.
    pub fn new(
        level: Level,
        base: Arc<BaseGame>,
        views: Vec<SubjectiveGame>,
    ) -> Result<Self, ModelError> {
        let bad = |msg: String| Err(ModelError::InvalidHypergame(msg));
        if level == Level::Zero {
            if views.is_empty() {
                return Ok(Hypergame::level0(base));
            }
            return bad("a level-0 hypergame carries no subjective views".into());
        }
        let mut ordered = Vec::with_capacity(2);
        for (player, _) in base.players() {
            let mut mine = views.iter().filter(|v| v.owner() == player);
            match (mine.next(), mine.next()) {
                (Some(v), None) => ordered.push(v.clone()),
                (None, _) => return bad(format!("no view for player `{player}`")),
                (Some(_), Some(_)) => return bad(format!("more than one view for `{player}`")),
            }
        }
        if views.len() != ordered.len() {
            return bad("view owned by a non-player".into());
        }
        for v in &ordered {
            v.check_against(&base)?;
            if level == Level::One && !constraints::is_symmetric_expectation(&base, v) {
                return bad(format!(
                    "view of `{}` does not expect the same rationality from the opponent",
                    v.owner()
                ));
            }
        }
        Ok(Hypergame {
            level,
            base,
            views: ordered,
        })
    }

    pub(crate) fn from_parts_unchecked(
        level: Level,
        base: Arc<BaseGame>,
        views: Vec<SubjectiveGame>,
    ) -> Self {
        Hypergame { level, base, views }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn base(&self) -> &BaseGame {
        &self.base
    }

    /// Views in base player order; empty at level 0.
    pub fn views(&self) -> &[SubjectiveGame] {
        &self.views
    }

    pub fn view(&self, player: &PlayerId) -> Option<&SubjectiveGame> {
        self.views.iter().find(|v| v.owner() == player)
    }
}

/// Social attitude: a strict order over the dilemma outcome classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attitude {
    /// Self-orientation.
    SO,
    /// Positive other-orientation.
    PO,
    /// Negative other-orientation.
    NO,
    /// Joint positive self/other-orientation.
    JO,
}

impl Attitude {
    pub const ALL: [Attitude; 4] = [Attitude::SO, Attitude::PO, Attitude::NO, Attitude::JO];

    /// Outcome classes from most to least preferred.
    pub fn ordering(self) -> [constraints::OutcomeClass; 4] {
        use constraints::OutcomeClass::*;
        match self {
            Attitude::SO => [T, R, P, S],
            Attitude::PO => [S, R, P, T],
            Attitude::NO => [T, P, R, S],
            Attitude::JO => [R, T, P, S],
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Attitude::SO => "so",
            Attitude::PO => "po",
            Attitude::NO => "no",
            Attitude::JO => "jo",
        }
    }
}

impl fmt::Display for Attitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Attitude {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "so" => Ok(Attitude::SO),
            "po" => Ok(Attitude::PO),
            "no" => Ok(Attitude::NO),
            "jo" => Ok(Attitude::JO),
            other => Err(format!(
                "unknown attitude `{other}` (expected so, po, no or jo)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Concept {
    StrongHne,
    WeakHne,
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Concept::StrongHne => "strong_hne",
            Concept::WeakHne => "weak_hne",
        })
    }
}

/// How the owner's own believed action set is chosen during generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OwnActionPolicy {
    /// The owner knows their complete option set.
    #[default]
    FullOptions,
    /// Every subset that still contains the owner's target component.
    ContainsOwnComponent,
}

/// Generation settings for one player.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerConstraints {
    /// A complete subjective game used as the single candidate.
    pub fixed_game: Option<SubjectiveGame>,
    /// Full-domain ranks restricted to each generated action space. When
    /// neither this nor rank enumeration is set, ranks come from the base
    /// payoffs.
    pub fixed_ranks: Option<RankTable>,
    pub own_attitudes: Option<Vec<Attitude>>,
    pub opponent_attitudes: Option<Vec<Attitude>>,
    pub enumerate_rank_tables: bool,
    pub enumerate_opponent_actions: bool,
    pub own_action_policy: OwnActionPolicy,
    pub strict_ranks: bool,
}

impl Default for PlayerConstraints {
    fn default() -> Self {
        PlayerConstraints {
            fixed_game: None,
            fixed_ranks: None,
            own_attitudes: None,
            opponent_attitudes: None,
            enumerate_rank_tables: false,
            enumerate_opponent_actions: false,
            own_action_policy: OwnActionPolicy::FullOptions,
            strict_ranks: true,
        }
    }
}

impl PlayerConstraints {
    pub fn fixed(game: SubjectiveGame) -> Self {
        PlayerConstraints {
            fixed_game: Some(game),
            ..Default::default()
        }
    }

    pub fn enumerates_actions(&self) -> bool {
        self.enumerate_opponent_actions
            || self.own_action_policy == OwnActionPolicy::ContainsOwnComponent
    }

    pub fn has_attitudes(&self) -> bool {
        self.own_attitudes.is_some() || self.opponent_attitudes.is_some()
    }
}

/// The filter configuration handed to the rationaliser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    pub concept: Concept,
    pub level: Level,
    pub players: Vec<(PlayerId, PlayerConstraints)>,
    /// Permits enumerating rank tables and action spaces for the same player.
    pub allow_joint_enumeration: bool,
}

impl ConstraintSet {
    pub fn new(concept: Concept, level: Level) -> Self {
        ConstraintSet {
            concept,
            level,
            players: Vec::new(),
            allow_joint_enumeration: false,
        }
    }

    pub fn with_player(mut self, player: PlayerId, entry: PlayerConstraints) -> Self {
        self.players.retain(|(p, _)| *p != player);
        self.players.push((player, entry));
        self
    }

    /// The entry for `player`, or the default when none was configured.
    pub fn entry(&self, player: &PlayerId) -> PlayerConstraints {
        self.players
            .iter()
            .find(|(p, _)| p == player)
            .map(|(_, e)| e.clone())
            .unwrap_or_default()
    }
}
