//! Legal move enumeration (steps and jump chains), move application and
//! validation, and breadth-first level expansion with duplicate elimination.

use std::hash::Hash;


use rayon::prelude::*;
use rustc_hash::FxHashSet;
use thiserror::Error;

use crate::board::{Board, CellSet, GamePos, Player, Preset, RuleSet};

/// A move as a state transition. Jumped men stay on the board, so origin and
/// destination determine the successor position; witness paths are produced
/// separately for notation and verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Move {
    pub from: u16,
    pub to: u16,
}

impl Move {
    pub fn reversed(self) -> Move {
        Move {
            from: self.to,
            to: self.from,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Step,
    JumpChain,
}

/// Classify a move by displacement parity: chains displace by sums of
/// doubled directions, so both components are even; steps never are.
pub fn move_kind(board: &Board, m: Move) -> MoveKind {
    let a = board.cell(m.from);
    let b = board.cell(m.to);
    let dx = b.x as i16 - a.x as i16;
    let dy = b.y as i16 - a.y as i16;
    if dx % 2 == 0 && dy % 2 == 0 {
        MoveKind::JumpChain
    } else {
        MoveKind::Step
    }
}

/// Append every legal move of `army` to `out`: all steps into empty
/// neighbors (unless `jumps_only`), plus every jump-chain endpoint found by
/// breadth-first reachability over landing cells. Occupancy is static during
/// a chain with the mover's origin vacated. Chains returning to the origin
/// are not moves. Output order is deterministic.
pub fn legal_moves_into(
    board: &Board,
    rules: RuleSet,
    occupied: &CellSet,
    army: &CellSet,
    jumps_only: bool,
    out: &mut Vec<Move>,
) {
    out.clear();
    let ndirs = rules.directions().len();
    for from in army.iter() {
        if !jumps_only {
            for d in 0..ndirs {
                let t = board.step_to(from, d);
                if t >= 0 && !occupied.contains(t as u16) {
                    out.push(Move {
                        from,
                        to: t as u16,
                    });
                }
            }
        }
        let mut occ = *occupied;
        occ.remove(from);
        let mut visited = CellSet::EMPTY;
        visited.insert(from);
        let mut queue = [0u16; 256];
        queue[0] = from;
        let (mut head, mut tail) = (0usize, 1usize);
        while head < tail {
            let cur = queue[head];
            head += 1;
            for d in 0..ndirs {
                let land = board.jump_to(cur, d);
                if land < 0 {
                    continue;
                }
                let land = land as u16;
                // jump_to valid implies the midpoint cell is valid.
                let mid = board.step_to(cur, d) as u16;
                if occ.contains(mid) && !occ.contains(land) && !visited.contains(land) {
                    visited.insert(land);
                    queue[tail] = land;
                    tail += 1;
                    out.push(Move { from, to: land });
                }
            }
        }
    }
}

pub fn legal_moves(
    board: &Board,
    rules: RuleSet,
    occupied: &CellSet,
    army: &CellSet,
    jumps_only: bool,
) -> Vec<Move> {
    let mut out = Vec::new();
    legal_moves_into(board, rules, occupied, army, jumps_only, &mut out);
    out
}

/// One witness path for the move `(from, to)` in the given occupancy, as the
/// full cell sequence including both endpoints. Steps yield the two-cell
/// path; chains yield a shortest jump sequence. `None` if the move is not
/// legal.
pub fn witness_path(
    board: &Board,
    rules: RuleSet,
    occupied: &CellSet,
    m: Move,
) -> Option<Vec<u16>> {
    if m.from == m.to || !occupied.contains(m.from) {
        return None;
    }
    let ndirs = rules.directions().len();
    if move_kind(board, m) == MoveKind::Step {
        let found = (0..ndirs).any(|d| board.step_to(m.from, d) == m.to as i16);
        return (found && !occupied.contains(m.to)).then(|| vec![m.from, m.to]);
    }
    let mut occ = *occupied;
    occ.remove(m.from);
    let mut parent = [u16::MAX; 256];
    let mut visited = CellSet::EMPTY;
    visited.insert(m.from);
    let mut queue = [0u16; 256];
    queue[0] = m.from;
    let (mut head, mut tail) = (0usize, 1usize);
    while head < tail {
        let cur = queue[head];
        head += 1;
        for d in 0..ndirs {
            let land = board.jump_to(cur, d);
            if land < 0 {
                continue;
            }
            let land = land as u16;
            let mid = board.step_to(cur, d) as u16;
            if occ.contains(mid) && !occ.contains(land) && !visited.contains(land) {
                visited.insert(land);
                parent[land as usize] = cur;
                if land == m.to {
                    let mut path = vec![land];
                    let mut c = land;
                    while c != m.from {
                        c = parent[c as usize];
                        path.push(c);
                    }
                    path.reverse();
                    return Some(path);
                }
                queue[tail] = land;
                tail += 1;
            }
        }
    }
    None
}

/// The army after playing `m`.
pub fn apply_army(a: &CellSet, m: Move) -> CellSet {
    debug_assert!(a.contains(m.from) && !a.contains(m.to));
    let mut b = *a;
    b.remove(m.from);
    b.insert(m.to);
    b
}

/// The game position after the side to move plays `m`.
pub fn apply_game(p: &GamePos, m: Move) -> GamePos {
    match p.to_move {
        Player::Blue => GamePos {
            blue: apply_army(&p.blue, m),
            red: p.red,
            to_move: Player::Red,
        },
        Player::Red => GamePos {
            blue: p.blue,
            red: apply_army(&p.red, m),
            to_move: Player::Blue,
        },
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("a move needs at least two cells")]
    TooShort,
    #[error("cell {0} is off the board")]
    OffBoard(String),
    #[error("origin {0} is empty")]
    OriginEmpty(String),
    #[error("{0} holds an opposing man")]
    WrongArmy(String),
    #[error("destination {0} is occupied")]
    DestinationOccupied(String),
    #[error("illegal displacement from {0} to {1}")]
    BadDisplacement(String, String),
    #[error("no man to jump over at {0}")]
    MissingJumpedMan(String),
    #[error("destination equals origin")]
    NullMove,
}

/// Validate an explicit move path for `army` within `occupied` and classify
/// it. Checks run in path order and report the first violated condition.
/// Cells are given as board indices; use `Board::parse_cell` upstream.
pub fn validate_path(
    board: &Board,
    rules: RuleSet,
    occupied: &CellSet,
    army: &CellSet,
    path: &[u16],
) -> Result<MoveKind, MoveError> {
    let name = |idx: u16| board.cell_name(board.cell(idx));
    if path.len() < 2 {
        return Err(MoveError::TooShort);
    }
    let cell_span = board.width() as u16 * board.height() as u16;
    for &c in path {
        if c >= cell_span {
            return Err(MoveError::OffBoard(format!("index {c}")));
        }
        if !board.cells().contains(c) {
            return Err(MoveError::OffBoard(name(c)));
        }
    }
    let origin = path[0];
    if !occupied.contains(origin) {
        return Err(MoveError::OriginEmpty(name(origin)));
    }
    if !army.contains(origin) {
        return Err(MoveError::WrongArmy(name(origin)));
    }
    let dirs = rules.directions();
    let delta = |a: u16, b: u16| {
        let ca = board.cell(a);
        let cb = board.cell(b);
        (cb.x as i16 - ca.x as i16, cb.y as i16 - ca.y as i16)
    };
    if path.len() == 2 {
        let (dx, dy) = delta(path[0], path[1]);
        if dirs.contains(&(dx as i8, dy as i8)) {
            if occupied.contains(path[1]) {
                return Err(MoveError::DestinationOccupied(name(path[1])));
            }
            return Ok(MoveKind::Step);
        }
    }
    // Jump chain: static occupancy with the origin vacated.
    let mut occ = *occupied;
    occ.remove(origin);
    for hop in path.windows(2) {
        let (dx, dy) = delta(hop[0], hop[1]);
        let half = (dx / 2, dy / 2);
        if dx % 2 != 0 || dy % 2 != 0 || !dirs.contains(&(half.0 as i8, half.1 as i8)) {
            return Err(MoveError::BadDisplacement(name(hop[0]), name(hop[1])));
        }
        let mid = board.index(crate::board::Cell::new(
            (board.cell(hop[0]).x as i16 + half.0) as u8,
            (board.cell(hop[0]).y as i16 + half.1) as u8,
        ));
        if !occ.contains(mid) {
            return Err(MoveError::MissingJumpedMan(name(mid)));
        }
        if occ.contains(hop[1]) {
            return Err(MoveError::DestinationOccupied(name(hop[1])));
        }
    }
    if path[path.len() - 1] == origin {
        return Err(MoveError::NullMove);
    }
    Ok(MoveKind::JumpChain)
}

/// Memory accounting for level expansion. Charges accumulate across levels
/// because sealed levels are retained for witness reconstruction.
#[derive(Clone, Debug)]
pub struct MemoryBudget {
    cap: u64,
    used: u64,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("memory cap exceeded: {used} of {cap} bytes held after {positions} positions")]
pub struct ResourceError {
    pub cap: u64,
    pub used: u64,
    pub positions: u64,
}

impl MemoryBudget {
    pub fn unlimited() -> MemoryBudget {
        MemoryBudget {
            cap: u64::MAX,
            used: 0,
        }
    }

    pub fn bytes(cap: u64) -> MemoryBudget {
        MemoryBudget { cap, used: 0 }
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub(crate) fn charge(&mut self, bytes: u64, positions: u64) -> Result<(), ResourceError> {
        self.used += bytes;
        if self.used > self.cap {
            return Err(ResourceError {
                cap: self.cap,
                used: self.used,
                positions,
            });
        }
        Ok(())
    }
}

const PAR_THRESHOLD: usize = 512;
const WAVE: usize = 1 << 16;
const CHUNK: usize = 256;

/// Expand one sealed level into the next: run `succ` on every member and
/// deduplicate the results. The successor callback receives reusable scratch
/// buffers. Level content is a set, so it is independent of thread count and
/// chunk order; the returned vector is sorted for determinism and later
/// binary-search membership tests.
pub fn expand_level<P, F>(
    level: &[P],
    succ: F,
    budget: &mut MemoryBudget,
) -> Result<Vec<P>, ResourceError>
where
    P: Clone + Ord + Hash + Send + Sync,
    F: Fn(&P, &mut Vec<Move>, &mut Vec<P>) + Sync,
{
    let cost = (std::mem::size_of::<P>() * 2 + 8) as u64;
    let mut set: FxHashSet<P> = FxHashSet::default();
    if level.len() < PAR_THRESHOLD {
        let mut moves = Vec::new();
        let mut out = Vec::new();
        for p in level {
            out.clear();
            succ(p, &mut moves, &mut out);
            for q in out.drain(..) {
                if set.insert(q) {
                    budget.charge(cost, set.len() as u64)?;
                }
            }
        }
    } else {
        // Expand a bounded wave of positions in parallel, then merge on the
        // calling thread; waves keep the undeduplicated spike small and the
        // merge never blocks a pool worker.
        for wave in level.chunks(WAVE) {
            let batches: Vec<Vec<P>> = wave
                .par_chunks(CHUNK)
                .map(|chunk| {
                    let mut moves = Vec::new();
                    let mut out = Vec::new();
                    let mut buf = Vec::new();
                    for p in chunk {
                        buf.clear();
                        succ(p, &mut moves, &mut buf);
                        out.extend_from_slice(&buf);
                    }
                    out.sort_unstable();
                    out.dedup();
                    out
                })
                .collect();
            for batch in batches {
                for q in batch {
                    if set.insert(q) {
                        budget.charge(cost, set.len() as u64)?;
                    }
                }
            }
        }
    }
    let mut v: Vec<P> = set.into_iter().collect();
    v.sort_unstable();
    Ok(v)
}

/// How successive game levels are deduplicated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountingMode {
    /// Identical positions merge within a level; no symmetry folding.
    Raw,
    /// Every level is folded to canonical representatives. Matches published
    /// hand counts of opening lines.
    Canonical,
}

/// Game level sets from the preset's start, including the root level.
/// Diagnostic counting: terminal positions receive no special treatment.
/// On presets without a usable board symmetry the folds degrade to identity.
pub fn game_levels(
    preset: &Preset,
    depth: u32,
    mode: CountingMode,
    budget: &mut MemoryBudget,
) -> Result<Vec<Vec<GamePos>>, ResourceError> {
    let board = &preset.board;
    let rules = preset.rules;
    let fold = |q: &GamePos| {
        if preset.canonical_enabled {
            preset.canonical_game(q)
        } else {
            *q
        }
    };
    let mut levels = vec![vec![preset.game_start()]];
    for _ in 0..depth {
        let prior = levels.last().unwrap();
        let next = expand_level(
            prior,
            |p: &GamePos, moves: &mut Vec<Move>, out: &mut Vec<GamePos>| {
                let occupied = p.occupied();
                legal_moves_into(board, rules, &occupied, p.army(p.to_move), false, moves);
                for &m in moves.iter() {
                    let q = apply_game(p, m);
                    out.push(match mode {
                        CountingMode::Raw => q,
                        CountingMode::Canonical => fold(&q),
                    });
                }
            },
            budget,
        )?;
        levels.push(next);
    }
    Ok(levels)
}

pub fn game_level_sizes(preset: &Preset, depth: u32, mode: CountingMode) -> Vec<u64> {
    game_levels(preset, depth, mode, &mut MemoryBudget::unlimited())
        .unwrap()
        .iter()
        .map(|l| l.len() as u64)
        .collect()
}
