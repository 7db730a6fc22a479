//! Social-attitude machinery for symmetric 2x2 dilemmas and the
//! symmetric-expectation test used by level-1 hypergames.

use std::fmt;

use thiserror::Error;

use crate::model::{
    Attitude, BaseGame, OptionId, RankTable, Role, StrategyProfile, SubjectiveGame,
};

/// Temptation, reward, punishment and sucker outcomes, seen from one side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OutcomeClass {
    T,
    R,
    P,
    S,
}

impl fmt::Display for OutcomeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OutcomeClass::T => "T",
            OutcomeClass::R => "R",
            OutcomeClass::P => "P",
            OutcomeClass::S => "S",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("action `{0}` is neither the cooperate nor the defect option")]
    OutsideDilemma(OptionId),
    #[error("attitude matching needs strict ranks")]
    NonStrict,
    #[error("attitude constraints need a symmetric 2x2 game: {0}")]
    NotDilemma(String),
}

/// Which option plays "cooperate" and which "defect".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilemmaContext {
    pub coop: OptionId,
    pub defect: OptionId,
}

impl DilemmaContext {
    pub fn new(coop: OptionId, defect: OptionId) -> Self {
        DilemmaContext { coop, defect }
    }

    /// Requires both roles to declare the same two options in the same
    /// order and the payoffs to be symmetric. The first declared option is
    /// taken as the cooperative one.
    pub fn from_base(base: &BaseGame) -> Result<Self, ConstraintError> {
        let rows = base.row_options();
        let cols = base.col_options();
        if rows.len() != 2 || cols.len() != 2 {
            return Err(ConstraintError::NotDilemma(format!(
                "game is {}x{}",
                rows.len(),
                cols.len()
            )));
        }
        if rows != cols {
            return Err(ConstraintError::NotDilemma(
                "row and column options differ".into(),
            ));
        }
        for i in 0..2 {
            for j in 0..2 {
                if base.payoff_at(i, j).0 != base.payoff_at(j, i).1 {
                    return Err(ConstraintError::NotDilemma("payoffs are asymmetric".into()));
                }
            }
        }
        Ok(DilemmaContext::new(rows[0].clone(), rows[1].clone()))
    }

    /// Profiles in row-major order over (coop, defect) x (coop, defect).
    pub fn profiles(&self) -> [StrategyProfile; 4] {
        let (c, d) = (&self.coop, &self.defect);
        [
            StrategyProfile::new(c.clone(), c.clone()),
            StrategyProfile::new(c.clone(), d.clone()),
            StrategyProfile::new(d.clone(), c.clone()),
            StrategyProfile::new(d.clone(), d.clone()),
        ]
    }
}

pub fn classify_outcome(
    profile: &StrategyProfile,
    perspective: Role,
    coop: &OptionId,
    defect: &OptionId,
) -> Result<OutcomeClass, ConstraintError> {
    let defects = |o: &OptionId| {
        if o == defect {
            Ok(true)
        } else if o == coop {
            Ok(false)
        } else {
            Err(ConstraintError::OutsideDilemma(o.clone()))
        }
    };
    let own = defects(profile.component(perspective))?;
    let other = defects(profile.component(perspective.opposite()))?;
    Ok(match (own, other) {
        (true, false) => OutcomeClass::T,
        (false, false) => OutcomeClass::R,
        (true, true) => OutcomeClass::P,
        (false, true) => OutcomeClass::S,
    })
}

// Classes of the four row-major cells for one perspective.
fn cell_classes(perspective: Role) -> [OutcomeClass; 4] {
    use OutcomeClass::*;
    match perspective {
        // (C,C) (C,D) (D,C) (D,D)
        Role::Row => [R, S, T, P],
        Role::Column => [R, T, S, P],
    }
}

/// Attitude test on raw row-major ranks over the dilemma's four cells.
pub(crate) fn ranks_match_attitude(
    ranks: &[u32],
    perspective: Role,
    attitude: Attitude,
) -> Result<bool, ConstraintError> {
    if ranks.len() != 4 {
        return Err(ConstraintError::NotDilemma(format!(
            "{} cells",
            ranks.len()
        )));
    }
    let mut sorted = ranks.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 4 {
        return Err(ConstraintError::NonStrict);
    }
    let classes = cell_classes(perspective);
    let mut order: Vec<(u32, OutcomeClass)> =
        ranks.iter().copied().zip(classes.iter().copied()).collect();
    order.sort_by_key(|&(r, _)| std::cmp::Reverse(r));
    Ok(order.iter().map(|(_, c)| *c).eq(attitude.ordering()))
}

/// True iff the order `perspective` induces over T, R, P, S in `table` is
/// exactly the attitude's ordering.
pub fn matches_attitude(
    table: &RankTable,
    perspective: Role,
    attitude: Attitude,
    ctx: &DilemmaContext,
) -> Result<bool, ConstraintError> {
    let mut ranks = Vec::with_capacity(4);
    for p in ctx.profiles() {
        match table.get(&p.row, &p.col) {
            Some((u, v)) => ranks.push(if perspective == Role::Row { u } else { v }),
            None => {
                let stray = if table.rows().contains(&p.row) {
                    p.col
                } else {
                    p.row
                };
                return Err(ConstraintError::NotDilemma(format!(
                    "table lacks action `{stray}`"
                )));
            }
        }
    }
    if table.ranks().len() != 4 {
        return Err(ConstraintError::NotDilemma("table is not 2x2".into()));
    }
    ranks_match_attitude(&ranks, perspective, attitude)
}

/// True iff the owner believes the opponent reasons exactly as they do:
/// the believed action sets mirror each other and the column ranks of every
/// profile equal the row ranks of its transpose.
pub fn is_symmetric_expectation(base: &BaseGame, game: &SubjectiveGame) -> bool {
    let rows = game.believed_rows();
    let cols = game.believed_cols();
    if rows.len() != cols.len() {
        return false;
    }
    let mirrored: Option<Vec<&OptionId>> = rows.iter().map(|a| base.mirror(Role::Row, a)).collect();
    let Some(mirrored) = mirrored else {
        return false;
    };
    if !mirrored.iter().all(|b| cols.contains(b)) {
        return false;
    }
    let table = game.table();
    for (a, b, (_, col_rank)) in table.cells() {
        let (Some(b_as_row), Some(a_as_col)) =
            (base.mirror(Role::Column, b), base.mirror(Role::Row, a))
        else {
            return false;
        };
        match table.get(b_as_row, a_as_col) {
            Some((row_rank, _)) if row_rank == col_rank => {}
            _ => return false,
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{GameDraft, PlayerId};
    use itertools::Itertools;

    fn o(s: &str) -> OptionId {
        OptionId::new(s).unwrap()
    }

    fn pd() -> BaseGame {
        let (c, d) = (o("c"), o("d"));
        BaseGame::new(GameDraft {
            players: vec![
                (PlayerId::new("alice").unwrap(), Role::Row),
                (PlayerId::new("bob").unwrap(), Role::Column),
            ],
            row_options: vec![c.clone(), d.clone()],
            col_options: vec![c.clone(), d.clone()],
            payoffs: vec![
                (c.clone(), c.clone(), 3, 3),
                (c.clone(), d.clone(), 0, 5),
                (d.clone(), c.clone(), 5, 0),
                (d.clone(), d.clone(), 1, 1),
            ],
        })
        .unwrap()
    }

    fn view(ranks: [(u32, u32); 4]) -> SubjectiveGame {
        let t = RankTable::new(vec![o("c"), o("d")], vec![o("c"), o("d")], ranks.to_vec()).unwrap();
        SubjectiveGame::new(&pd(), PlayerId::new("alice").unwrap(), t).unwrap()
    }

    const MUTUAL_PO: [(u32, u32); 4] = [(3, 3), (4, 1), (1, 4), (2, 2)];
    const JO_PO: [(u32, u32); 4] = [(4, 3), (1, 1), (3, 4), (2, 2)];
    const MUTUAL_JO: [(u32, u32); 4] = [(4, 4), (1, 3), (3, 1), (2, 2)];

    #[test]
    fn classify_examples() {
        let (c, d) = (o("c"), o("d"));
        let dc = StrategyProfile::new(d.clone(), c.clone());
        assert_eq!(
            classify_outcome(&dc, Role::Row, &c, &d),
            Ok(OutcomeClass::T)
        );
        assert_eq!(
            classify_outcome(&dc, Role::Column, &c, &d),
            Ok(OutcomeClass::S)
        );
        let cc = StrategyProfile::new(c.clone(), c.clone());
        for role in Role::BOTH {
            assert_eq!(classify_outcome(&cc, role, &c, &d), Ok(OutcomeClass::R));
        }
        let bad = StrategyProfile::new(o("x"), c.clone());
        assert!(classify_outcome(&bad, Role::Row, &c, &d).is_err());
    }

    #[test]
    fn classify_is_bijective_per_perspective() {
        let ctx = DilemmaContext::from_base(&pd()).unwrap();
        for role in Role::BOTH {
            let classes: Vec<_> = ctx
                .profiles()
                .iter()
                .map(|p| classify_outcome(p, role, &ctx.coop, &ctx.defect).unwrap())
                .sorted()
                .collect();
            assert_eq!(
                classes,
                vec![
                    OutcomeClass::T,
                    OutcomeClass::R,
                    OutcomeClass::P,
                    OutcomeClass::S
                ]
            );
            let from_cells: Vec<_> = ctx
                .profiles()
                .iter()
                .map(|p| classify_outcome(p, role, &ctx.coop, &ctx.defect).unwrap())
                .collect();
            assert_eq!(from_cells, cell_classes(role).to_vec());
        }
    }

    #[test]
    fn attitude_examples() {
        let ctx = DilemmaContext::from_base(&pd()).unwrap();
        let a = view(MUTUAL_PO);
        assert_eq!(
            matches_attitude(a.table(), Role::Row, Attitude::PO, &ctx),
            Ok(true)
        );
        let c = view(MUTUAL_JO);
        assert_eq!(
            matches_attitude(c.table(), Role::Row, Attitude::PO, &ctx),
            Ok(false)
        );
        assert_eq!(
            matches_attitude(c.table(), Role::Row, Attitude::JO, &ctx),
            Ok(true)
        );
        // T=4, R=3, P=2, S=1 in row-major (C,C) (C,D) (D,C) (D,D)
        assert_eq!(
            ranks_match_attitude(&[3, 1, 4, 2], Role::Row, Attitude::SO),
            Ok(true)
        );
        let tied = view([(1, 1), (1, 2), (3, 3), (4, 4)]);
        assert_eq!(
            matches_attitude(tied.table(), Role::Row, Attitude::SO, &ctx),
            Err(ConstraintError::NonStrict)
        );
    }

    #[test]
    fn one_ranking_per_template() {
        for role in Role::BOTH {
            for att in Attitude::ALL {
                let hits = (1..=4u32)
                    .permutations(4)
                    .filter(|r| ranks_match_attitude(r, role, att).unwrap())
                    .count();
                assert_eq!(hits, 1, "{att} from {role}");
            }
        }
    }

    #[test]
    fn reward_above_temptation_only_for_po_and_jo() {
        use OutcomeClass::*;
        let pos = |att: Attitude, c| att.ordering().iter().position(|x| *x == c).unwrap();
        let cooperative: Vec<_> = Attitude::ALL
            .into_iter()
            .filter(|a| pos(*a, R) < pos(*a, T))
            .collect();
        assert_eq!(cooperative, vec![Attitude::PO, Attitude::JO]);
    }

    #[test]
    fn symmetric_expectation_examples() {
        let base = pd();
        assert!(is_symmetric_expectation(&base, &view(MUTUAL_PO)));
        assert!(!is_symmetric_expectation(&base, &view(JO_PO)));
        assert!(is_symmetric_expectation(&base, &view(MUTUAL_JO)));

        let t = RankTable::new(vec![o("c")], vec![o("c")], vec![(1, 1)]).unwrap();
        let single = SubjectiveGame::new(&base, PlayerId::new("bob").unwrap(), t).unwrap();
        assert!(is_symmetric_expectation(&base, &single));

        let t = RankTable::new(vec![o("c"), o("d")], vec![o("c")], vec![(1, 1), (2, 2)]).unwrap();
        let narrow = SubjectiveGame::new(&base, PlayerId::new("bob").unwrap(), t).unwrap();
        assert!(!is_symmetric_expectation(&base, &narrow));
    }

    #[test]
    fn non_dilemma_is_rejected() {
        let mut draft = pd().to_draft();
        draft.payoffs[1].2 = 7;
        let base = BaseGame::new(draft).unwrap();
        assert!(matches!(
            DilemmaContext::from_base(&base),
            Err(ConstraintError::NotDilemma(_))
        ));
    }
}
