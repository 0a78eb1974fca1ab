//! Admissible bounds that drive search pruning: minimum game length, its
//! remaining-move form, per-move and n-move centroid increase caps, and the
//! transfer lower bound.

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::board::{Board, CellSet, GamePos, Player, RuleSet};
use crate::metrics::army_distance;

/// Minimum length of any game between equal armies `blue` and `red`:
/// the armies must close to jumping range before men can start filing
/// into the opposing base.
pub fn game_lower_bound(board: &Board, rules: RuleSet, blue: &CellSet, red: &CellSet) -> i64 {
    assert_eq!(blue.len(), red.len(), "game armies must be equal");
    assert!(!blue.is_empty(), "game armies must be nonempty");
    let d = army_distance(board, rules, blue, red);
    (d - 2).max(0) + 2 * blue.len() as i64 - 1
}

/// Admissible bound on the moves left in a game from `pos`. Zero when either
/// side has already won. Taking the min over both candidate winners keeps the
/// bound valid no matter who ends up winning; turn parity is deliberately not
/// exploited.
pub fn remaining_game_bound(board: &Board, rules: RuleSet, pos: &GamePos) -> i64 {
    let blue_out = pos.blue.minus(board.base(Player::Red));
    let red_out = pos.red.minus(board.base(Player::Blue));
    if blue_out.is_empty() || red_out.is_empty() {
        return 0;
    }
    let gap = (army_distance(board, rules, &pos.blue, &pos.red) - 2).max(0);
    let h_blue = gap + 2 * blue_out.len() as i64 - 1;
    let h_red = gap + 2 * red_out.len() as i64 - 1;
    h_blue.min(h_red)
}

/// Largest centroid increase a single move of army `a` can achieve:
/// delta = max per-man centroid - min per-man centroid + step gain.
pub fn centroid_step_bound(board: &Board, rules: RuleSet, a: &CellSet) -> i64 {
    assert!(!a.is_empty(), "centroid_step_bound on empty army");
    let (mut lo, mut hi) = (i64::MAX, i64::MIN);
    for i in a.iter() {
        let c = board.cell_centroid(i);
        lo = lo.min(c);
        hi = hi.max(c);
    }
    hi - lo + rules.ell()
}

/// Sound cap on the centroid increase after exactly `n` moves of army `a`:
/// U(n) = n*delta + ell*n*(n-1)/2. Each move widens the possible spread by
/// at most ell, so the cap holds however the moves interact.
pub fn centroid_n_move_bound(board: &Board, rules: RuleSet, a: &CellSet, n: i64) -> i64 {
    assert!(n >= 0, "move count must be nonnegative");
    let delta = centroid_step_bound(board, rules, a);
    n * delta + rules.ell() * n * (n - 1) / 2
}

/// Minimum length of any transfer of army `a` into `goal`: reaching the goal
/// costs d moves and each further man needs at least one more.
pub fn transfer_lower_bound(board: &Board, rules: RuleSet, a: &CellSet, goal: &CellSet) -> i64 {
    assert_eq!(a.len(), goal.len(), "transfer armies must be equal");
    assert!(!a.is_empty(), "transfer army must be nonempty");
    army_distance(board, rules, a, goal) + a.len() as i64 - 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum BoundKind {
    GameLower,
    RemainingLower,
    CentroidStep,
    CentroidNMove,
    TransferLower,
}

/// A bound value with the inputs that produced it, for offline audit of
/// prune decisions.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value: i64,
    pub inputs: Map<String, Value>,
}

impl BoundReport {
    pub fn game_lower(board: &Board, rules: RuleSet, blue: &CellSet, red: &CellSet) -> BoundReport {
        let mut inputs = Map::new();
        inputs.insert(
            "distance".into(),
            json!(army_distance(board, rules, blue, red)),
        );
        inputs.insert("armySize".into(), json!(blue.len()));
        BoundReport {
            kind: BoundKind::GameLower,
            value: game_lower_bound(board, rules, blue, red),
            inputs,
        }
    }

    pub fn centroid_step(board: &Board, rules: RuleSet, a: &CellSet) -> BoundReport {
        let mut inputs = Map::new();
        inputs.insert("armySize".into(), json!(a.len()));
        inputs.insert("stepGain".into(), json!(rules.ell()));
        BoundReport {
            kind: BoundKind::CentroidStep,
            value: centroid_step_bound(board, rules, a),
            inputs,
        }
    }

    pub fn transfer_lower(board: &Board, rules: RuleSet, a: &CellSet, goal: &CellSet) -> BoundReport {
        let mut inputs = Map::new();
        inputs.insert(
            "distance".into(),
            json!(army_distance(board, rules, a, goal)),
        );
        inputs.insert("armySize".into(), json!(a.len()));
        BoundReport {
            kind: BoundKind::TransferLower,
            value: transfer_lower_bound(board, rules, a, goal),
            inputs,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::Preset;

    fn preset(name: &str) -> Preset {
        Preset::make(name, None).unwrap()
    }

    fn bound_of(name: &str) -> i64 {
        let p = preset(name);
        game_lower_bound(&p.board, p.rules, p.start(), p.goal())
    }

    #[test]
    fn game_lower_bound_table() {
        assert_eq!(bound_of("cc10"), 27);
        assert_eq!(bound_of("halma19"), 45);
        assert_eq!(bound_of("grasshopper10"), 21);
        assert_eq!(bound_of("cc15"), 35);
        let cc8 = Preset::make("cc10", Some(RuleSet::EightMove)).unwrap();
        assert_eq!(
            game_lower_bound(&cc8.board, cc8.rules, cc8.start(), cc8.goal()),
            22
        );
    }

    #[test]
    fn game_lower_bound_at_the_distance_floor() {
        // Armies two apart: the gap term vanishes and 2s - 1 remains.
        let board = Board::rect(7, 1, CellSet::EMPTY, CellSet::EMPTY).unwrap();
        let blue = CellSet::from_indices([0, 1, 2]);
        let red = CellSet::from_indices([4, 5, 6]);
        assert_eq!(game_lower_bound(&board, RuleSet::FourMove, &blue, &red), 5);
    }

    #[test]
    #[should_panic(expected = "equal")]
    fn game_lower_bound_rejects_unequal_armies() {
        let board = Board::rect(4, 1, CellSet::EMPTY, CellSet::EMPTY).unwrap();
        let blue = CellSet::from_indices([0, 1]);
        let red = CellSet::from_indices([3]);
        game_lower_bound(&board, RuleSet::FourMove, &blue, &red);
    }

    #[test]
    fn remaining_bound_matches_game_bound_at_start() {
        for name in crate::board::PRESET_NAMES {
            let p = preset(name);
            assert_eq!(
                remaining_game_bound(&p.board, p.rules, &p.game_start()),
                game_lower_bound(&p.board, p.rules, p.start(), p.goal()),
                "{name}"
            );
        }
    }

    #[test]
    fn remaining_bound_is_zero_once_won() {
        let p = preset("cc10");
        let finished = GamePos {
            blue: *p.goal(),
            red: *p.start(),
            to_move: Player::Blue,
        };
        assert_eq!(remaining_game_bound(&p.board, p.rules, &finished), 0);
    }

    #[test]
    fn remaining_bound_with_one_man_out() {
        // Blue has one man left to bring home and the armies are in contact.
        let board = Board::rect(
            7,
            1,
            CellSet::from_indices([0, 1]),
            CellSet::from_indices([5, 6]),
        )
        .unwrap();
        let pos = GamePos {
            blue: CellSet::from_indices([4, 5]),
            red: CellSet::from_indices([2, 6]),
            to_move: Player::Red,
        };
        assert_eq!(remaining_game_bound(&board, RuleSet::FourMove, &pos), 1);
    }

    #[test]
    fn centroid_step_examples() {
        let cc = preset("cc10");
        assert_eq!(centroid_step_bound(&cc.board, RuleSet::SixMove, cc.start()), 4);
        let halma = preset("halma19");
        assert_eq!(
            centroid_step_bound(&halma.board, RuleSet::EightMove, halma.start()),
            7
        );
        let lone = CellSet::from_indices([3]);
        let board = Board::rect(4, 1, CellSet::EMPTY, CellSet::EMPTY).unwrap();
        assert_eq!(centroid_step_bound(&board, RuleSet::FourMove, &lone), 1);
    }

    #[test]
    #[should_panic(expected = "empty")]
    fn centroid_step_rejects_empty_army() {
        let board = Board::rect(4, 1, CellSet::EMPTY, CellSet::EMPTY).unwrap();
        centroid_step_bound(&board, RuleSet::FourMove, &CellSet::EMPTY);
    }

    #[test]
    fn n_move_cap_examples() {
        let cc = preset("cc10");
        let u = |n| centroid_n_move_bound(&cc.board, RuleSet::SixMove, cc.start(), n);
        assert_eq!(u(0), 0);
        assert_eq!(u(1), 4);
        assert_eq!(u(3), 15);
        // Each extra move is worth at least delta.
        for n in 0..20 {
            assert!(u(n + 1) >= u(n) + 4);
        }
    }

    #[test]
    fn transfer_lower_bound_examples() {
        let cc = preset("cc10");
        assert_eq!(
            transfer_lower_bound(&cc.board, RuleSet::SixMove, cc.start(), cc.goal()),
            19
        );
        let halma = preset("halma19");
        assert_eq!(
            transfer_lower_bound(&halma.board, RuleSet::EightMove, halma.start(), halma.goal()),
            28
        );
        let board = Board::rect(4, 1, CellSet::EMPTY, CellSet::EMPTY).unwrap();
        let man = CellSet::from_indices([0]);
        let goal = CellSet::from_indices([1]);
        assert_eq!(transfer_lower_bound(&board, RuleSet::FourMove, &man, &goal), 1);
    }

    #[test]
    fn reports_carry_inputs() {
        let cc = preset("cc10");
        let r = BoundReport::game_lower(&cc.board, cc.rules, cc.start(), cc.goal());
        assert_eq!(r.value, 27);
        assert_eq!(r.inputs["distance"], json!(10));
        assert_eq!(r.inputs["armySize"], json!(10));
        let t = BoundReport::transfer_lower(&cc.board, cc.rules, cc.start(), cc.goal());
        assert_eq!(t.value, 19);
        assert_eq!(
            serde_json::to_value(&t).unwrap()["kind"],
            json!("transferLower")
        );
    }
}
