//! Solver properties checked against an independent brute-force scan.

use std::sync::Arc;

use hypergame::model::{GameDraft, Level};
use hypergame::{
    best_response_set, is_strong_hne, is_weak_hne, nash_components, nash_equilibria,
    ordinal_from_cardinal, BaseGame, Hypergame, OptionId, PlayerId, RankTable, Role,
    StrategyProfile, SubjectiveGame,
};
use proptest::prelude::*;

fn names(prefix: &str, n: usize) -> Vec<OptionId> {
    (0..n)
        .map(|i| OptionId::new(format!("{prefix}{i}")).unwrap())
        .collect()
}

/// Mutual weak best response, checked cell by cell against every deviation.
fn brute_force_nash(t: &RankTable) -> Vec<StrategyProfile> {
    let mut out = Vec::new();
    for (i, a) in t.rows().iter().enumerate() {
        for (j, b) in t.cols().iter().enumerate() {
            let (u, v) = t.rank_at(i, j);
            let mut row_ok = true;
            for k in 0..t.rows().len() {
                if t.rank_at(k, j).0 > u {
                    row_ok = false;
                }
            }
            let mut col_ok = true;
            for k in 0..t.cols().len() {
                if t.rank_at(i, k).1 > v {
                    col_ok = false;
                }
            }
            if row_ok && col_ok {
                out.push(StrategyProfile::new(a.clone(), b.clone()));
            }
        }
    }
    out
}

prop_compose! {
    fn view(max_side: usize, max_rank: u32)
        (r in 1..=max_side, c in 1..=max_side)
        (ranks in proptest::collection::vec((0..=max_rank, 0..=max_rank), r * c), r in Just(r), c in Just(c))
        -> RankTable
    {
        RankTable::new(names("r", r), names("c", c), ranks).unwrap()
    }
}

fn base_for(rows: usize, cols: usize) -> BaseGame {
    let (ro, co) = (names("r", rows), names("c", cols));
    let mut payoffs = Vec::new();
    for a in &ro {
        for b in &co {
            payoffs.push((a.clone(), b.clone(), 0, 0));
        }
    }
    BaseGame::new(GameDraft {
        players: vec![
            (PlayerId::new("p").unwrap(), Role::Row),
            (PlayerId::new("q").unwrap(), Role::Column),
        ],
        row_options: ro,
        col_options: co,
        payoffs,
    })
    .unwrap()
}

prop_compose! {
    /// A level-2 hypergame over a random base with random (possibly narrowed)
    /// views, plus a random base profile.
    fn hypergame_and_profile()
        (r in 1..=3usize, c in 1..=3usize)
        (r in Just(r), c in Just(c),
         masks in proptest::collection::vec((1u32..8, 1u32..8), 2),
         ranks in proptest::collection::vec(proptest::collection::vec((0u32..5, 0u32..5), 9), 2),
         pick in (0..r, 0..c))
        -> (Hypergame, StrategyProfile)
    {
        let base = Arc::new(base_for(r, c));
        let subset = |all: &[OptionId], mask: u32| -> Vec<OptionId> {
            let s: Vec<_> = all.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, o)| o.clone()).collect();
            if s.is_empty() { vec![all[0].clone()] } else { s }
        };
        let mut views = Vec::new();
        for (k, (p, _)) in base.players().iter().enumerate() {
            let rows = subset(base.row_options(), masks[k].0);
            let cols = subset(base.col_options(), masks[k].1);
            let n = rows.len() * cols.len();
            let t = RankTable::new(rows, cols, ranks[k][..n].to_vec()).unwrap();
            views.push(SubjectiveGame::new(&base, p.clone(), t).unwrap());
        }
        let h = Hypergame::new(Level::Two, Arc::clone(&base), views).unwrap();
        let a = StrategyProfile::new(base.row_options()[pick.0].clone(), base.col_options()[pick.1].clone());
        (h, a)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn nash_matches_brute_force(t in view(4, 9)) {
        prop_assert_eq!(nash_equilibria(&t), brute_force_nash(&t));
    }

    #[test]
    fn best_response_never_empty(t in view(4, 9)) {
        for role in Role::BOTH {
            for b in t.actions(role.opposite()) {
                let br = best_response_set(&t, role, b).unwrap();
                prop_assert!(!br.is_empty());
            }
        }
    }

    #[test]
    fn components_are_projections(t in view(4, 9)) {
        let ne = brute_force_nash(&t);
        for role in Role::BOTH {
            let expected: Vec<OptionId> = t.actions(role).iter()
                .filter(|o| ne.iter().any(|p| p.component(role) == *o))
                .cloned().collect();
            prop_assert_eq!(nash_components(&t, role), expected);
        }
    }

    #[test]
    fn transposition_preserves_equilibria(t in view(4, 9)) {
        let flipped = t.transposed();
        let mut via_transpose: Vec<StrategyProfile> =
            nash_equilibria(&flipped).iter().map(StrategyProfile::transposed).collect();
        let mut direct = nash_equilibria(&t);
        via_transpose.sort_by(|a, b| (a.row.as_str(), a.col.as_str()).cmp(&(b.row.as_str(), b.col.as_str())));
        direct.sort_by(|a, b| (a.row.as_str(), a.col.as_str()).cmp(&(b.row.as_str(), b.col.as_str())));
        prop_assert_eq!(via_transpose, direct);
    }

    #[test]
    fn monotone_rank_maps_keep_equilibria(
        t in view(4, 9),
        steps_u in proptest::collection::vec(1u32..5, 10),
        steps_v in proptest::collection::vec(1u32..5, 10),
    ) {
        // strictly increasing maps on 0..=9 built from positive steps
        let map = |steps: &[u32], x: u32| steps[..=x as usize].iter().sum::<u32>();
        let ranks = t.ranks().iter().map(|&(u, v)| (map(&steps_u, u), map(&steps_v, v))).collect();
        let mapped = RankTable::new(t.rows().to_vec(), t.cols().to_vec(), ranks).unwrap();
        prop_assert_eq!(nash_equilibria(&mapped), nash_equilibria(&t));
    }

    #[test]
    fn ordinal_view_ignores_monotone_payoff_maps(
        payoffs in proptest::collection::vec((-20i64..20, -20i64..20), 9),
        scale in 1i64..7,
        shift in -50i64..50,
    ) {
        let base = base_for(3, 3);
        let mut draft = base.to_draft();
        for (cell, (u, v)) in draft.payoffs.iter_mut().zip(&payoffs) {
            cell.2 = *u;
            cell.3 = *v;
        }
        let original = BaseGame::new(draft.clone()).unwrap();
        for cell in draft.payoffs.iter_mut() {
            // cubing is strictly increasing on the integers
            cell.2 = scale * cell.2.pow(3) + shift;
        }
        let mapped = BaseGame::new(draft).unwrap();
        prop_assert_eq!(ordinal_from_cardinal(&original), ordinal_from_cardinal(&mapped));
    }

    #[test]
    fn strong_implies_weak((h, a) in hypergame_and_profile()) {
        if is_strong_hne(&h, &a) {
            prop_assert!(is_weak_hne(&h, &a));
        }
    }

    #[test]
    fn level_zero_collapse(payoffs in proptest::collection::vec((-5i64..5, -5i64..5), 9)) {
        let mut draft = base_for(3, 3).to_draft();
        for (cell, (u, v)) in draft.payoffs.iter_mut().zip(&payoffs) {
            cell.2 = *u;
            cell.3 = *v;
        }
        let base = Arc::new(BaseGame::new(draft).unwrap());
        let ordinal = ordinal_from_cardinal(&base);
        let views = base.players().iter()
            .map(|(p, _)| SubjectiveGame::new(&base, p.clone(), ordinal.clone()).unwrap())
            .collect();
        let h = Hypergame::new(Level::Two, Arc::clone(&base), views).unwrap();
        let h0 = Hypergame::level0(Arc::clone(&base));
        let mut shne = Vec::new();
        for a in base.row_options() {
            for b in base.col_options() {
                let p = StrategyProfile::new(a.clone(), b.clone());
                prop_assert_eq!(is_strong_hne(&h, &p), is_strong_hne(&h0, &p));
                if is_strong_hne(&h, &p) {
                    shne.push(p);
                }
            }
        }
        prop_assert_eq!(shne, brute_force_nash(&ordinal));
    }
}
