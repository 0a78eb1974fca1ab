//! Shortest cooperative game search: breadth-first level sets over
//! alternating moves with duplicate elimination, admissible pruning against
//! a target length, and optional finding-mode filters.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::board::{GamePos, Player, Preset};
use crate::bounds::remaining_game_bound;
use crate::movegen::{
    apply_army, apply_game, expand_level, legal_moves, legal_moves_into, MemoryBudget, Move,
    ResourceError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameMode {
    /// Exhaust all lengths up to the target; any win found is a counterexample.
    ProveNone,
    /// Stop at the first (hence shortest) win within the target.
    FindOne,
    /// Count distinct winning move sequences of length exactly the target.
    CountAll,
}

/// Finding-mode heuristics. Each can discard genuine solutions, so they are
/// rejected outside `FindOne`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Filters {
    /// 1: the designated winner never plays step moves.
    pub winner_only_jumps: bool,
    /// 4: from the critical move on, the winner banks men in the opposing
    /// base on schedule.
    pub base_fill_schedule: bool,
    /// 5: across the middle of the game, every diagonal between the bases
    /// stays occupied.
    pub diagonals_occupied: bool,
}

impl Filters {
    pub fn any(&self) -> bool {
        self.winner_only_jumps || self.base_fill_schedule || self.diagonals_occupied
    }

    pub fn from_ids(ids: &[u8]) -> Result<Filters, GameError> {
        let mut f = Filters::default();
        for &id in ids {
            match id {
                1 => f.winner_only_jumps = true,
                4 => f.base_fill_schedule = true,
                5 => f.diagonals_occupied = true,
                other => return Err(GameError::UnknownFilter(other)),
            }
        }
        Ok(f)
    }
}

pub struct GameConfig<'a> {
    pub preset: &'a Preset,
    /// Target game length in moves.
    pub target: u32,
    pub mode: GameMode,
    pub filters: Filters,
    pub budget: MemoryBudget,
}

#[derive(Clone, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelStat {
    pub depth: u32,
    /// Kept (non-terminal, deduplicated) positions at this depth.
    pub size: u64,
    /// Successors discarded by the length bound or a filter.
    pub pruned: u64,
}

#[derive(Clone, Debug)]
pub enum GameVerdict {
    Found {
        length: u32,
        winner: Player,
        moves: Vec<Move>,
    },
    NoneWithin {
        target: u32,
    },
    Count {
        sequences: u64,
    },
}

#[derive(Debug)]
pub struct GameOutcome {
    pub verdict: GameVerdict,
    pub levels: Vec<LevelStat>,
    /// Sealed level sets, retained for audits. Empty in count mode.
    pub level_sets: Vec<Vec<GamePos>>,
}

#[derive(Debug, Error)]
pub enum GameError {
    #[error("filters apply to find mode only")]
    FiltersOutsideFindMode,
    #[error("unknown filter id {0}; known ids are 1, 4, 5")]
    UnknownFilter(u8),
    #[error("{error}")]
    Resource {
        error: ResourceError,
        /// Stats for the levels completed before the cap tripped.
        levels: Vec<LevelStat>,
    },
}

/// The player on move at game level `level` (1-based): blue plays first.
pub fn mover_at(level: u32) -> Player {
    if level % 2 == 1 {
        Player::Blue
    } else {
        Player::Red
    }
}

/// The player whose move ends a game of length `target`.
pub fn designated_winner(target: u32) -> Player {
    mover_at(target)
}

/// First move by which the winner can have a man banked in the opposing
/// base: a game of length L spends the winner's last 2(s - 1) moves filling,
/// so filling starts at L - 2(s - 1).
pub fn critical_move(target: u32, army_size: u32) -> i64 {
    target as i64 - 2 * (army_size as i64 - 1)
}

fn is_win(preset: &Preset, pos: &GamePos, mover: Player) -> bool {
    *pos.army(mover) == *preset.board.base(mover.other())
}

/// Diagonal window for the occupancy filter: every `x - y` value strictly
/// between the bases' facing edges.
fn diagonal_window(preset: &Preset) -> (i64, i64) {
    let board = &preset.board;
    let blue_hi = board
        .blue_base()
        .iter()
        .map(|i| board.cell_centroid(i))
        .max()
        .unwrap();
    let red_lo = board
        .red_base()
        .iter()
        .map(|i| board.cell_centroid(i))
        .min()
        .unwrap();
    (blue_hi + 1, red_lo - 1)
}

fn diagonals_covered(preset: &Preset, pos: &GamePos, lo: i64, hi: i64) -> bool {
    let board = &preset.board;
    // Centroids span 1 - height ..= width - 1; boards are at most 16 wide.
    let mut seen = [false; 64];
    let offset = board.height() as i64;
    for i in pos.occupied().iter() {
        seen[(board.cell_centroid(i) + offset) as usize] = true;
    }
    (lo..=hi).all(|k| seen[(k + offset) as usize])
}

/// Search for cooperative wins up to `cfg.target` moves.
///
/// Levels hold exact-move-count positions deduplicated within the level
/// (folded to canonical representatives when the preset's symmetry allows).
/// Wins are detected on raw successors, kept out of the level sets, and the
/// lexicographically least one is expanded into a move list by walking the
/// sealed levels backward.
///
/// With filters off, successors already present two levels up are also
/// dropped: whatever they reach within the target was reachable two moves
/// sooner through the earlier copy. The diagonal filter is level-windowed,
/// which breaks that argument, so filtered runs keep revisits.
pub fn search_game(cfg: GameConfig) -> Result<GameOutcome, GameError> {
    if cfg.filters.any() && cfg.mode != GameMode::FindOne {
        return Err(GameError::FiltersOutsideFindMode);
    }
    if cfg.mode == GameMode::CountAll {
        return count_games(cfg);
    }
    let preset = cfg.preset;
    let board = &preset.board;
    let rules = preset.rules;
    let target = cfg.target;
    let canonical = preset.canonical_enabled;
    let fold = |q: &GamePos| if canonical { preset.canonical_game(q) } else { *q };
    let winner = designated_winner(target);
    let alpha = critical_move(target, board.blue_base().len());
    let (diag_lo, diag_hi) = diagonal_window(preset);
    let ancestor_dedup = !cfg.filters.any();

    let mut budget = cfg.budget;
    let mut levels: Vec<Vec<GamePos>> = vec![vec![fold(&preset.game_start())]];
    let mut stats = vec![LevelStat {
        depth: 0,
        size: 1,
        pruned: 0,
    }];

    for depth in 1..=target {
        let mover = mover_at(depth);
        let jumps_only = cfg.filters.winner_only_jumps && mover == winner;
        let fill_quota =
            if cfg.filters.base_fill_schedule && mover == winner && depth as i64 >= alpha {
                Some(((depth as i64 - alpha) / 2 + 1) as u32)
            } else {
                None
            };
        let check_diagonals = cfg.filters.diagonals_occupied
            && (depth as i64) * 2 >= alpha
            && (depth as i64) <= alpha;
        let pruned = AtomicU64::new(0);
        let wins: Mutex<Vec<GamePos>> = Mutex::new(Vec::new());

        let next = {
            let grandparent: &[GamePos] = if ancestor_dedup && depth >= 2 {
                &levels[depth as usize - 2]
            } else {
                &[]
            };
            expand_level(
                &levels[depth as usize - 1],
                |p: &GamePos, moves: &mut Vec<Move>, out: &mut Vec<GamePos>| {
                    let occupied = p.occupied();
                    legal_moves_into(board, rules, &occupied, p.army(mover), jumps_only, moves);
                    for &m in moves.iter() {
                        let q = apply_game(p, m);
                        if is_win(preset, &q, mover) {
                            wins.lock().unwrap().push(q);
                            continue;
                        }
                        if depth as i64 + remaining_game_bound(board, rules, &q) > target as i64 {
                            pruned.fetch_add(1, Ordering::Relaxed);
                            continue;
                        }
                        if let Some(quota) = fill_quota {
                            let banked = q.army(mover).intersect(board.base(mover.other())).len();
                            if banked < quota {
                                pruned.fetch_add(1, Ordering::Relaxed);
                                continue;
                            }
                        }
                        if check_diagonals && !diagonals_covered(preset, &q, diag_lo, diag_hi) {
                            pruned.fetch_add(1, Ordering::Relaxed);
                            continue;
                        }
                        let key = fold(&q);
                        if !grandparent.is_empty() && grandparent.binary_search(&key).is_ok() {
                            continue;
                        }
                        out.push(key);
                    }
                },
                &mut budget,
            )
        };
        let next = match next {
            Ok(v) => v,
            Err(error) => return Err(GameError::Resource { error, levels: stats }),
        };

        let mut wins = wins.into_inner().unwrap();
        if !wins.is_empty() {
            wins.sort_unstable();
            let moves = reconstruct(preset, &levels, wins[0], depth, canonical);
            stats.push(LevelStat {
                depth,
                size: next.len() as u64,
                pruned: pruned.load(Ordering::Relaxed),
            });
            return Ok(GameOutcome {
                verdict: GameVerdict::Found {
                    length: depth,
                    winner: mover,
                    moves,
                },
                levels: stats,
                level_sets: levels,
            });
        }

        stats.push(LevelStat {
            depth,
            size: next.len() as u64,
            pruned: pruned.load(Ordering::Relaxed),
        });
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }

    Ok(GameOutcome {
        verdict: GameVerdict::NoneWithin { target },
        levels: stats,
        level_sets: levels,
    })
}

/// Sizes of the raw game level sets: distinct (folded) positions reachable
/// after exactly 0..=depth moves, with no length pruning and no win cutoff.
pub fn game_level_counts(
    preset: &Preset,
    depth: u32,
    mut budget: MemoryBudget,
) -> Result<Vec<LevelStat>, GameError> {
    let board = &preset.board;
    let rules = preset.rules;
    let canonical = preset.canonical_enabled;
    let fold = |q: &GamePos| if canonical { preset.canonical_game(q) } else { *q };

    let mut level = vec![fold(&preset.game_start())];
    let mut stats = vec![LevelStat {
        depth: 0,
        size: 1,
        pruned: 0,
    }];
    for d in 1..=depth {
        let mover = mover_at(d);
        let next = expand_level(
            &level,
            |p: &GamePos, moves: &mut Vec<Move>, out: &mut Vec<GamePos>| {
                let occupied = p.occupied();
                legal_moves_into(board, rules, &occupied, p.army(mover), false, moves);
                for &m in moves.iter() {
                    out.push(fold(&apply_game(p, m)));
                }
            },
            &mut budget,
        );
        level = match next {
            Ok(v) => v,
            Err(error) => return Err(GameError::Resource { error, levels: stats }),
        };
        stats.push(LevelStat {
            depth: d,
            size: level.len() as u64,
            pruned: 0,
        });
        if level.is_empty() {
            break;
        }
    }
    Ok(stats)
}

/// Rebuild the move list for a win found at `win_level` by walking the
/// sealed levels backward. Moves are reversible, so the predecessors of the
/// actual position are exactly its own legal moves played by the level's
/// mover; a reverse move is accepted when the resulting position folds into
/// the previous level. Instance symmetry keeps this sound when the sealed
/// member is the mirror of the actual predecessor.
fn reconstruct(
    preset: &Preset,
    levels: &[Vec<GamePos>],
    win: GamePos,
    win_level: u32,
    canonical: bool,
) -> Vec<Move> {
    let board = &preset.board;
    let rules = preset.rules;
    let fold = |q: &GamePos| if canonical { preset.canonical_game(q) } else { *q };
    let mut moves = vec![Move { from: 0, to: 0 }; win_level as usize];
    let mut actual = win;
    for depth in (1..=win_level).rev() {
        let mover = mover_at(depth);
        let occupied = actual.occupied();
        let (prev, rev) = legal_moves(board, rules, &occupied, actual.army(mover), false)
            .into_iter()
            .find_map(|r| {
                let army = apply_army(actual.army(mover), r);
                let q = match mover {
                    Player::Blue => GamePos {
                        blue: army,
                        red: actual.red,
                        to_move: Player::Blue,
                    },
                    Player::Red => GamePos {
                        blue: actual.blue,
                        red: army,
                        to_move: Player::Red,
                    },
                };
                levels[depth as usize - 1]
                    .binary_search(&fold(&q))
                    .is_ok()
                    .then_some((q, r.reversed()))
            })
            .expect("win reached from the start through sealed levels");
        actual = prev;
        moves[depth as usize - 1] = rev;
    }
    debug_assert_eq!(actual, preset.game_start());
    moves
}

/// Count winning move sequences of length exactly the target: a counted
/// breadth-first pass over raw positions with path multiplicities. No
/// symmetry folding and no revisit dropping, since distinct sequences
/// through mirrored or revisited positions all count. Wins before the
/// target are terminal and counted zero.
fn count_games(cfg: GameConfig) -> Result<GameOutcome, GameError> {
    let preset = cfg.preset;
    let board = &preset.board;
    let rules = preset.rules;
    let target = cfg.target;
    let mut budget = cfg.budget;
    let cost = (std::mem::size_of::<(GamePos, u64)>() * 2 + 8) as u64;

    let mut level: FxHashMap<GamePos, u64> = FxHashMap::default();
    level.insert(preset.game_start(), 1);
    let mut stats = vec![LevelStat {
        depth: 0,
        size: 1,
        pruned: 0,
    }];
    let mut sequences = 0u64;
    let mut moves = Vec::new();

    for depth in 1..=target {
        let mover = mover_at(depth);
        let mut next: FxHashMap<GamePos, u64> = FxHashMap::default();
        let mut pruned = 0u64;
        let mut inserted = 0u64;
        for (p, count) in &level {
            let occupied = p.occupied();
            legal_moves_into(board, rules, &occupied, p.army(mover), false, &mut moves);
            for &m in moves.iter() {
                let q = apply_game(p, m);
                if is_win(preset, &q, mover) {
                    if depth == target {
                        sequences += count;
                    }
                    continue;
                }
                if depth as i64 + remaining_game_bound(board, rules, &q) > target as i64 {
                    pruned += 1;
                    continue;
                }
                let entry = next.entry(q).or_insert(0);
                if *entry == 0 {
                    inserted += 1;
                    if let Err(error) = budget.charge(cost, inserted) {
                        return Err(GameError::Resource { error, levels: stats });
                    }
                }
                *entry += count;
            }
        }
        stats.push(LevelStat {
            depth,
            size: next.len() as u64,
            pruned,
        });
        level = next;
        if level.is_empty() {
            break;
        }
    }

    Ok(GameOutcome {
        verdict: GameVerdict::Count { sequences },
        levels: stats,
        level_sets: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{Board, CellSet, RuleSet, Transform};
    use crate::movegen::witness_path;

    /// 3x3 board, single men in opposite corners.
    fn toy3() -> Preset {
        let board = Board::rect(3, 3, CellSet::from_indices([0]), CellSet::from_indices([8]))
            .unwrap();
        Preset::from_board("toy3".into(), board, RuleSet::FourMove, Transform::Rotate180)
    }

    /// 4x4 board, two-man armies in opposite corners.
    fn toy4(rules: RuleSet) -> Preset {
        let board = Board::rect(
            4,
            4,
            CellSet::from_indices([0, 1]),
            CellSet::from_indices([14, 15]),
        )
        .unwrap();
        Preset::from_board(format!("toy4-{rules:?}"), board, rules, Transform::Rotate180)
    }

    fn run(preset: &Preset, target: u32, mode: GameMode) -> GameOutcome {
        search_game(GameConfig {
            preset,
            target,
            mode,
            filters: Filters::default(),
            budget: MemoryBudget::unlimited(),
        })
        .unwrap()
    }

    /// Plain breadth-first search, no pruning, no symmetry, no revisit
    /// dropping: the oracle for reduced instances.
    fn oracle_shortest(preset: &Preset, cap: u32) -> Option<u32> {
        let board = &preset.board;
        let mut level = vec![preset.game_start()];
        for depth in 1..=cap {
            let mover = mover_at(depth);
            let mut next = rustc_hash::FxHashSet::default();
            for p in &level {
                let occupied = p.occupied();
                for m in legal_moves(board, preset.rules, &occupied, p.army(mover), false) {
                    let q = apply_game(p, m);
                    if is_win(preset, &q, mover) {
                        return Some(depth);
                    }
                    next.insert(q);
                }
            }
            level = next.into_iter().collect();
        }
        None
    }

    /// Hand-checked: single men crossing a 3x3 board cannot pass in under
    /// six moves; red wins at six with a final jump into the vacated corner.
    #[test]
    fn toy_game_oracle() {
        let p = toy3();
        assert_eq!(oracle_shortest(&p, 10), Some(6));
        let outcome = run(&p, 10, GameMode::FindOne);
        match outcome.verdict {
            GameVerdict::Found { length, winner, .. } => {
                assert_eq!(length, 6);
                assert_eq!(winner, Player::Red);
            }
            other => panic!("expected a win, got {other:?}"),
        }
        // Search stops at the first winning level.
        assert_eq!(outcome.levels.len(), 7);
        match run(&p, 5, GameMode::ProveNone).verdict {
            GameVerdict::NoneWithin { target } => assert_eq!(target, 5),
            other => panic!("expected none, got {other:?}"),
        }
    }

    #[test]
    fn witness_replays_to_a_win() {
        let p = toy3();
        let outcome = run(&p, 10, GameMode::FindOne);
        let GameVerdict::Found { length, winner, moves } = outcome.verdict else {
            panic!("expected a win");
        };
        assert_eq!(moves.len(), length as usize);
        let mut pos = p.game_start();
        for (i, &m) in moves.iter().enumerate() {
            let mover = mover_at(i as u32 + 1);
            assert_eq!(pos.to_move, mover);
            let occupied = pos.occupied();
            assert!(
                legal_moves(&p.board, p.rules, &occupied, pos.army(mover), false).contains(&m),
                "move {i} illegal"
            );
            assert!(witness_path(&p.board, p.rules, &occupied, m).is_some());
            pos = apply_game(&pos, m);
        }
        assert!(is_win(&p, &pos, winner));
    }

    #[test]
    fn pruned_search_matches_oracle_on_toys() {
        for rules in [RuleSet::FourMove, RuleSet::SixMove, RuleSet::EightMove] {
            let p = toy4(rules);
            let truth = oracle_shortest(&p, 12).unwrap();
            let outcome = run(&p, 12, GameMode::FindOne);
            let GameVerdict::Found { length, .. } = outcome.verdict else {
                panic!("{rules:?}: expected a win");
            };
            assert_eq!(length, truth, "{rules:?}");
            // Proving below the optimum really exhausts.
            match run(&p, truth - 1, GameMode::ProveNone).verdict {
                GameVerdict::NoneWithin { .. } => {}
                other => panic!("{rules:?}: expected none, got {other:?}"),
            }
        }
    }

    #[test]
    fn witnesses_replay_on_every_toy_rule_set() {
        for rules in [RuleSet::FourMove, RuleSet::SixMove, RuleSet::EightMove] {
            let p = toy4(rules);
            let outcome = run(&p, 12, GameMode::FindOne);
            let GameVerdict::Found { length, winner, moves } = outcome.verdict else {
                panic!("{rules:?}: expected a win");
            };
            let mut pos = p.game_start();
            for &m in &moves {
                let occupied = pos.occupied();
                assert!(legal_moves(&p.board, p.rules, &occupied, pos.army(pos.to_move), false)
                    .contains(&m));
                pos = apply_game(&pos, m);
            }
            assert!(is_win(&p, &pos, winner));
            assert_eq!(moves.len(), length as usize);
        }
    }

    #[test]
    fn count_mode_counts_sequences() {
        let p = toy3();
        let shortest = oracle_shortest(&p, 10).unwrap();
        let outcome = run(&p, shortest, GameMode::CountAll);
        let GameVerdict::Count { sequences } = outcome.verdict else {
            panic!("expected a count");
        };
        // Oracle: walk the full game tree to the exact length.
        fn walk(p: &Preset, pos: &GamePos, depth: u32, target: u32) -> u64 {
            let mover = mover_at(depth);
            let occupied = pos.occupied();
            let mut total = 0;
            for m in legal_moves(&p.board, p.rules, &occupied, pos.army(mover), false) {
                let q = apply_game(pos, m);
                if is_win(p, &q, mover) {
                    if depth == target {
                        total += 1;
                    }
                    continue;
                }
                if depth < target {
                    total += walk(p, &q, depth + 1, target);
                }
            }
            total
        }
        let expected = walk(&p, &p.game_start(), 1, shortest);
        assert!(expected > 0);
        assert_eq!(sequences, expected);
    }

    #[test]
    fn filters_are_find_mode_only() {
        let p = toy3();
        let err = search_game(GameConfig {
            preset: &p,
            target: 5,
            mode: GameMode::ProveNone,
            filters: Filters::from_ids(&[1]).unwrap(),
            budget: MemoryBudget::unlimited(),
        })
        .unwrap_err();
        assert!(matches!(err, GameError::FiltersOutsideFindMode));
        assert!(matches!(
            Filters::from_ids(&[2]),
            Err(GameError::UnknownFilter(2))
        ));
    }

    /// The fill schedule keeps every shortest solution on a two-man army:
    /// one man is already banked after the winner's second-to-last move.
    #[test]
    fn fill_schedule_filter_preserves_toy_optimum() {
        let p = toy4(RuleSet::SixMove);
        let truth = oracle_shortest(&p, 12).unwrap();
        let outcome = search_game(GameConfig {
            preset: &p,
            target: 12,
            mode: GameMode::FindOne,
            filters: Filters::from_ids(&[4]).unwrap(),
            budget: MemoryBudget::unlimited(),
        })
        .unwrap();
        let GameVerdict::Found { length, .. } = outcome.verdict else {
            panic!("expected a win");
        };
        assert_eq!(length, truth);
    }

    #[test]
    fn critical_move_example() {
        // A 30 move game with ten-man armies starts filling at move 12.
        assert_eq!(critical_move(30, 10), 12);
    }

    /// Below the opening length bound the prune empties level one outright.
    #[test]
    fn below_lower_bound_exhausts_instantly() {
        let p = Preset::make("cc10", None).unwrap();
        let outcome = run(&p, 24, GameMode::ProveNone);
        assert!(matches!(outcome.verdict, GameVerdict::NoneWithin { .. }));
        assert_eq!(outcome.levels.last().unwrap().size, 0);
    }

    #[test]
    fn raw_level_counts_match_plain_bfs() {
        let preset = toy4(RuleSet::FourMove);
        let stats = game_level_counts(&preset, 4, MemoryBudget::unlimited()).unwrap();

        let mut level: rustc_hash::FxHashSet<GamePos> = [preset.game_start()].into_iter().collect();
        let mut expected = vec![1u64];
        for depth in 1..=4 {
            let mover = mover_at(depth);
            let mut next = rustc_hash::FxHashSet::default();
            for p in &level {
                let occupied = p.occupied();
                for m in legal_moves(&preset.board, preset.rules, &occupied, p.army(mover), false) {
                    next.insert(apply_game(p, m));
                }
            }
            expected.push(next.len() as u64);
            level = next;
        }
        let sizes: Vec<u64> = stats.iter().map(|s| s.size).collect();
        assert_eq!(sizes, expected);
    }

    #[test]
    fn prune_audit_on_toy_levels() {
        // Every successor of a sealed level member is accounted for: a win,
        // pruned by the length bound, kept in the next level, or a revisit
        // of the level two up.
        let p = toy3();
        let target = 5u32;
        let outcome = run(&p, target, GameMode::ProveNone);
        assert!(matches!(outcome.verdict, GameVerdict::NoneWithin { .. }));
        let sets = &outcome.level_sets;
        for depth in 0..sets.len() - 1 {
            let mover = mover_at(depth as u32 + 1);
            for pos in &sets[depth] {
                let occupied = pos.occupied();
                for m in legal_moves(&p.board, p.rules, &occupied, pos.army(mover), false) {
                    let q = apply_game(pos, m);
                    let win = is_win(&p, &q, mover);
                    let pruned = depth as i64 + 1 + remaining_game_bound(&p.board, p.rules, &q)
                        > target as i64;
                    let kept = sets[depth + 1].binary_search(&q).is_ok();
                    let revisit = depth >= 1 && sets[depth - 1].binary_search(&q).is_ok();
                    assert!(win || pruned || kept || revisit, "unaccounted successor");
                    if kept {
                        assert!(!pruned, "kept position violates the bound");
                    }
                }
            }
        }
    }
}
