//! Pure-strategy equilibria over ordinal game views and the two hypergame
//! solution concepts.
//!
//! Best responses are weak: every action attaining the maximum rank counts,
//! so ties produce several best responses and never an empty set.

use thiserror::Error;

use crate::model::{BaseGame, Hypergame, Level, OptionId, RankTable, Role, StrategyProfile};

/// The object equilibria are computed over: action lists for both roles and
/// a rank pair per profile. Subjective games expose theirs directly through
/// [`crate::model::SubjectiveGame::table`]; the base game's comes from
/// [`ordinal_from_cardinal`].
pub type GameView = RankTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("`{0}` is not a {1} action of this view")]
    UnknownAction(OptionId, Role),
}

/// Dense ranking of each perspective's cardinal payoffs, starting at 1.
pub fn ordinal_from_cardinal(base: &BaseGame) -> GameView {
    let dense = |values: Vec<i64>| -> Vec<u32> {
        let mut distinct = values.clone();
        distinct.sort_unstable();
        distinct.dedup();
        values
            .iter()
            .map(|v| distinct.binary_search(v).unwrap() as u32 + 1)
            .collect()
    };
    let (rows, cols) = (base.row_options().len(), base.col_options().len());
    let cells: Vec<(i64, i64)> = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .map(|(i, j)| base.payoff_at(i, j))
        .collect();
    let u = dense(cells.iter().map(|c| c.0).collect());
    let v = dense(cells.iter().map(|c| c.1).collect());
    RankTable::from_parts_unchecked(
        base.row_options().to_vec(),
        base.col_options().to_vec(),
        u.into_iter().zip(v).collect(),
    )
}

fn column_maxima(view: &GameView) -> Vec<u32> {
    (0..view.cols().len())
        .map(|j| {
            (0..view.rows().len())
                .map(|i| view.rank_at(i, j).0)
                .max()
                .unwrap()
        })
        .collect()
}

fn row_maxima(view: &GameView) -> Vec<u32> {
    (0..view.rows().len())
        .map(|i| {
            (0..view.cols().len())
                .map(|j| view.rank_at(i, j).1)
                .max()
                .unwrap()
        })
        .collect()
}

/// Actions of `role` attaining the highest rank for `role` against
/// `opponent_action`, in declaration order.
pub fn best_response_set(
    view: &GameView,
    role: Role,
    opponent_action: &OptionId,
) -> Result<Vec<OptionId>, SolverError> {
    let other = role.opposite();
    let k = view
        .actions(other)
        .iter()
        .position(|o| o == opponent_action)
        .ok_or_else(|| SolverError::UnknownAction(opponent_action.clone(), other))?;
    let rank = |own: usize| match role {
        Role::Row => view.rank_at(own, k).0,
        Role::Column => view.rank_at(k, own).1,
    };
    let own = view.actions(role);
    let best = (0..own.len()).map(rank).max().unwrap();
    Ok((0..own.len())
        .filter(|&i| rank(i) == best)
        .map(|i| own[i].clone())
        .collect())
}

/// Indices of equilibrium cells, row-major.
pub(crate) fn equilibrium_cells(view: &GameView) -> Vec<(usize, usize)> {
    let col_max = column_maxima(view);
    let row_max = row_maxima(view);
    let mut out = Vec::new();
    for (i, rmax) in row_max.iter().enumerate() {
        for (j, cmax) in col_max.iter().enumerate() {
            let (u, v) = view.rank_at(i, j);
            if u == *cmax && v == *rmax {
                out.push((i, j));
            }
        }
    }
    out
}

pub(crate) fn is_equilibrium(view: &GameView, profile: &StrategyProfile) -> bool {
    let (Some(i), Some(j)) = (
        view.rows().iter().position(|o| *o == profile.row),
        view.cols().iter().position(|o| *o == profile.col),
    ) else {
        return false;
    };
    let (u, v) = view.rank_at(i, j);
    (0..view.rows().len()).all(|a| view.rank_at(a, j).0 <= u)
        && (0..view.cols().len()).all(|b| view.rank_at(i, b).1 <= v)
}

/// Pure Nash equilibria as mutual weak best responses, row-major.
pub fn nash_equilibria(view: &GameView) -> Vec<StrategyProfile> {
    equilibrium_cells(view)
        .into_iter()
        .map(|(i, j)| StrategyProfile::new(view.rows()[i].clone(), view.cols()[j].clone()))
        .collect()
}

/// Actions of `role` that appear in at least one equilibrium.
pub fn nash_components(view: &GameView, role: Role) -> Vec<OptionId> {
    let cells = equilibrium_cells(view);
    let mut hit = vec![false; view.actions(role).len()];
    for (i, j) in cells {
        hit[if role == Role::Row { i } else { j }] = true;
    }
    view.actions(role)
        .iter()
        .zip(hit)
        .filter(|(_, h)| *h)
        .map(|(o, _)| o.clone())
        .collect()
}

pub(crate) fn in_nash_component(view: &GameView, role: Role, action: &OptionId) -> bool {
    let Some(k) = view.actions(role).iter().position(|o| o == action) else {
        return false;
    };
    equilibrium_cells(view)
        .into_iter()
        .any(|(i, j)| if role == Role::Row { i == k } else { j == k })
}

/// `a` is an equilibrium of every player's subjective game. A level-0
/// hypergame is judged on the base game's ordinal view.
pub fn is_strong_hne(h: &Hypergame, a: &StrategyProfile) -> bool {
    if h.level() == Level::Zero {
        return is_equilibrium(&ordinal_from_cardinal(h.base()), a);
    }
    h.views().iter().all(|v| is_equilibrium(v.table(), a))
}

/// Each player's own component of `a` belongs to some equilibrium of that
/// player's subjective game.
pub fn is_weak_hne(h: &Hypergame, a: &StrategyProfile) -> bool {
    if h.level() == Level::Zero {
        let view = ordinal_from_cardinal(h.base());
        return Role::BOTH
            .iter()
            .all(|&r| in_nash_component(&view, r, a.component(r)));
    }
    h.views().iter().all(|v| {
        let role = h.base().role_of(v.owner()).expect("view owner is a player");
        in_nash_component(v.table(), role, a.component(role))
    })
}
