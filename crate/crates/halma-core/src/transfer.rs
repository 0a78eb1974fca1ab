//! Army transfer search: bidirectional minimum-centroid-constraint proofs
//! with a self-consistent centroid ceiling, beam search for finding
//! solutions, and palindrome-constrained variants.

use std::sync::atomic::{AtomicU64, Ordering};

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::board::{CellSet, Preset, Transform};
use crate::bounds::{centroid_n_move_bound, centroid_step_bound};
use crate::metrics::{army_symmetry, centroid};
use crate::movegen::{
    apply_army, expand_level, legal_moves, legal_moves_into, move_kind, witness_path,
    MemoryBudget, Move, MoveKind, ResourceError,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransferMode {
    /// Exhaustive verdict for the exact target length.
    ProveNone,
    /// Beam search; failure is not a nonexistence proof.
    Find,
    /// Exhaustive verdict restricted to palindromic solutions.
    PalindromeProve,
    /// Find (or enumerate) palindromic solutions.
    PalindromeFind,
}

pub struct TransferConfig<'a> {
    pub preset: &'a Preset,
    /// Exact solution length sought.
    pub target: u32,
    pub mode: TransferMode,
    pub jumps_only: bool,
    /// Per-level truncation for find modes; `None` runs untruncated.
    /// Prove modes reject truncation.
    pub beam_width: Option<usize>,
    /// Symmetry weight in the beam score `c(A) + beta * sym(A)`.
    pub beta: i64,
    /// Odd palindromes: require a middle-move witness path that is its own
    /// reflected reverse, not merely one reaching the mirrored position.
    pub strict_middle: bool,
    /// Palindrome modes: count every solution instead of stopping at one.
    pub enumerate: bool,
    pub budget: MemoryBudget,
}

impl<'a> TransferConfig<'a> {
    pub fn new(preset: &'a Preset, target: u32, mode: TransferMode) -> TransferConfig<'a> {
        TransferConfig {
            preset,
            target,
            mode,
            jumps_only: false,
            beam_width: None,
            beta: 0,
            strict_middle: true,
            enumerate: false,
            budget: MemoryBudget::unlimited(),
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TransferLevelStat {
    pub depth: u32,
    pub size: u64,
    /// Largest centroid in the level; `None` for an empty level.
    pub cmax: Option<i64>,
    pub pruned: u64,
}

/// One run of the centroid-ceiling loop: the ceiling the run pruned with
/// and whether that run certified it.
#[derive(Clone, Copy, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CmaxRecord {
    pub n: u32,
    pub value: i64,
    pub self_consistent: bool,
}

#[derive(Clone, Debug)]
pub enum TransferVerdict {
    Found { length: u32, moves: Vec<Move> },
    NoneAt { length: u32 },
    /// Find-mode miss within the target length; not a proof.
    BeamMiss { length: u32 },
    /// Palindromic solution count (up to the board's diagonal reflection
    /// when canonicalization is on) with sample witnesses.
    Palindromes { count: u64, witnesses: Vec<Vec<Move>> },
}

#[derive(Debug)]
pub struct TransferOutcome {
    pub verdict: TransferVerdict,
    /// Stats of the final (certified) pass.
    pub levels: Vec<TransferLevelStat>,
    /// Every centroid-ceiling run, restarts included. Empty in find mode.
    pub cmax_trail: Vec<CmaxRecord>,
    /// Folded positions of the deepest sealed level, for checkpoints.
    /// Empty outside prove modes.
    pub last_level: Vec<CellSet>,
}

#[derive(Debug, Error)]
pub enum TransferError {
    #[error("prove modes run untruncated; clear the beam width")]
    BeamInProveMode,
    #[error("{error}")]
    Resource {
        error: ResourceError,
        levels: Vec<TransferLevelStat>,
        cmax_trail: Vec<CmaxRecord>,
    },
}

/// Search context. The mirror maps the start onto the goal, and centroids
/// obey c(mirror(A)) = K - c(A) for a board constant K, which turns goal
/// proximity into a centroid floor on midpoints.
struct Ctx<'a> {
    preset: &'a Preset,
    jumps_only: bool,
    canonical: bool,
    k: i64,
}

impl<'a> Ctx<'a> {
    fn new(preset: &'a Preset, jumps_only: bool) -> Ctx<'a> {
        let board = &preset.board;
        let k = centroid(board, preset.start()) + centroid(board, preset.goal());
        Ctx {
            preset,
            jumps_only,
            canonical: preset.canonical_enabled,
            k,
        }
    }

    fn fold(&self, a: &CellSet) -> CellSet {
        if self.canonical {
            self.preset.canonical_army(a)
        } else {
            *a
        }
    }

    fn mirror(&self, a: &CellSet) -> CellSet {
        self.preset.mirror_set(a)
    }

    fn mirror_idx(&self, idx: u16) -> u16 {
        self.preset.board.perm(self.preset.mirror).expect("mirror supported")[idx as usize]
    }

    /// Ceiling on the single-move centroid gain of any level-n army: the
    /// starting spread grows by at most ell per move and never exceeds the
    /// board's centroid range.
    fn step_gain_cap(&self, n: u32) -> i64 {
        let board = &self.preset.board;
        let rules = self.preset.rules;
        let board_span = board.width() as i64 - 1 + board.height() as i64 - 1;
        (centroid_step_bound(board, rules, self.preset.start()) + n as i64 * rules.ell())
            .min(board_span + rules.ell())
    }

    fn sym(&self, a: &CellSet) -> i64 {
        army_symmetry(&self.preset.board, self.preset.mirror, a) as i64
    }
}

struct Pass {
    levels: Vec<Vec<CellSet>>,
    stats: Vec<TransferLevelStat>,
    /// Max centroid over the sealed level `n`; `None` when it is empty.
    observed: Option<i64>,
}

fn level_cmax(preset: &Preset, level: &[CellSet]) -> Option<i64> {
    level.iter().map(|a| centroid(&preset.board, a)).max()
}

/// One forward pass to level `n`, keeping positions whose centroid can
/// still reach `floor` by level `n` (and, with `sym_t`, whose symmetry can
/// still reach `sym_t`). The root is never filtered.
fn constrained_pass(
    ctx: &Ctx,
    n: u32,
    floor: i64,
    sym_t: Option<i64>,
    budget: &mut MemoryBudget,
) -> Result<Pass, (ResourceError, Vec<TransferLevelStat>)> {
    let preset = ctx.preset;
    let board = &preset.board;
    let rules = preset.rules;
    let mut levels = vec![vec![*preset.start()]];
    let mut stats = vec![TransferLevelStat {
        depth: 0,
        size: 1,
        cmax: Some(centroid(board, preset.start())),
        pruned: 0,
    }];
    for depth in 1..=n {
        let horizon = (n - depth) as i64;
        let pruned = AtomicU64::new(0);
        let next = expand_level(
            &levels[depth as usize - 1],
            |a: &CellSet, moves: &mut Vec<Move>, out: &mut Vec<CellSet>| {
                legal_moves_into(board, rules, a, a, ctx.jumps_only, moves);
                for &m in moves.iter() {
                    let b = apply_army(a, m);
                    if centroid(board, &b) + centroid_n_move_bound(board, rules, &b, horizon)
                        < floor
                    {
                        pruned.fetch_add(1, Ordering::Relaxed);
                        continue;
                    }
                    if let Some(t) = sym_t {
                        if ctx.sym(&b) < t - 2 * horizon {
                            pruned.fetch_add(1, Ordering::Relaxed);
                            continue;
                        }
                    }
                    out.push(ctx.fold(&b));
                }
            },
            budget,
        );
        let next = match next {
            Ok(v) => v,
            Err(e) => return Err((e, stats)),
        };
        stats.push(TransferLevelStat {
            depth,
            size: next.len() as u64,
            cmax: level_cmax(preset, &next),
            pruned: pruned.load(Ordering::Relaxed),
        });
        let empty = next.is_empty();
        levels.push(next);
        if empty {
            break;
        }
    }
    let observed = levels.get(n as usize).and_then(|l| level_cmax(preset, l));
    Ok(Pass {
        levels,
        stats,
        observed,
    })
}

/// Beam estimate of the maximum level-`n` centroid: truncate every level to
/// the `m` largest centroids. `None` when level `n` is unreachable.
pub fn estimate_cmax(preset: &Preset, n: u32, m: usize, jumps_only: bool) -> Option<CmaxRecord> {
    assert!(m >= 1);
    let board = &preset.board;
    let rules = preset.rules;
    let mut level = vec![*preset.start()];
    let mut budget = MemoryBudget::unlimited();
    for _ in 0..n {
        let mut next = expand_level(
            &level,
            |a: &CellSet, moves: &mut Vec<Move>, out: &mut Vec<CellSet>| {
                legal_moves_into(board, rules, a, a, jumps_only, moves);
                for &m in moves.iter() {
                    out.push(apply_army(a, m));
                }
            },
            &mut budget,
        )
        .expect("unlimited budget");
        if next.len() > m {
            next.sort_unstable_by(|a, b| {
                centroid(board, b).cmp(&centroid(board, a)).then(a.cmp(b))
            });
            next.truncate(m);
        }
        level = next;
        if level.is_empty() {
            return None;
        }
    }
    Some(CmaxRecord {
        n,
        value: level_cmax(preset, &level)?,
        self_consistent: false,
    })
}

const BOOTSTRAP_BEAM: usize = 1_000_000;

/// Run constrained passes until the centroid ceiling certifies itself.
///
/// A pass pruned with ceiling E uses the floor max(K - E - margin,
/// min_floor) and can hide level-n positions only strictly below that
/// floor. The true level-n maximum is therefore at most max(observed,
/// floor - 1); the ceiling is raised to that bound until it stops growing,
/// then until the leak bound no longer tops the observed maximum, so the
/// reported value is the exact maximum whenever level n is nonempty.
fn certified_pass(
    ctx: &Ctx,
    n: u32,
    margin: i64,
    min_floor: i64,
    sym_t: Option<i64>,
    budget: &mut MemoryBudget,
    trail: &mut Vec<CmaxRecord>,
) -> Result<(Pass, i64), TransferError> {
    let mut e = match estimate_cmax(ctx.preset, n, BOOTSTRAP_BEAM, ctx.jumps_only) {
        Some(rec) => rec.value,
        // Level n is unreachable outright; one pass will confirm.
        None => ctx.k,
    };
    loop {
        let floor = (ctx.k - e - margin).max(min_floor);
        let pass = match constrained_pass(ctx, n, floor, sym_t, budget) {
            Ok(p) => p,
            Err((error, levels)) => {
                return Err(TransferError::Resource {
                    error,
                    levels,
                    cmax_trail: trail.clone(),
                })
            }
        };
        let leak = floor - 1;
        let observed = pass.observed;
        let ceiling_ok = observed.unwrap_or(i64::MIN).max(leak) <= e;
        let exact = observed.is_none() || leak <= observed.unwrap();
        if ceiling_ok && exact {
            let value = observed.unwrap_or(e);
            trail.push(CmaxRecord {
                n,
                value,
                self_consistent: true,
            });
            return Ok((pass, value));
        }
        trail.push(CmaxRecord {
            n,
            value: e,
            self_consistent: false,
        });
        // Each restart strictly raises the ceiling (loosening the prune),
        // bounded by the board's centroid range, so the loop terminates.
        e = if ceiling_ok {
            ctx.k - margin - observed.unwrap()
        } else {
            observed.unwrap_or(i64::MIN).max(leak)
        };
    }
}

/// Walk a sealed level stack backward from `target` at `depth`, returning
/// the forward move list. Reversibility makes the legal moves of the actual
/// army exactly its predecessor candidates; membership is tested on folded
/// representatives, which is sound because the start is fold-invariant.
fn reconstruct_path(ctx: &Ctx, levels: &[Vec<CellSet>], target: &CellSet, depth: u32) -> Vec<Move> {
    let preset = ctx.preset;
    let board = &preset.board;
    let rules = preset.rules;
    let mut moves = vec![Move { from: 0, to: 0 }; depth as usize];
    let mut actual = *target;
    for d in (1..=depth).rev() {
        let (prev, rev) = legal_moves(board, rules, &actual, &actual, ctx.jumps_only)
            .into_iter()
            .find_map(|r| {
                let b = apply_army(&actual, r);
                levels[d as usize - 1]
                    .binary_search(&ctx.fold(&b))
                    .is_ok()
                    .then_some((b, r.reversed()))
            })
            .expect("level member reached from the start");
        actual = prev;
        moves[d as usize - 1] = rev;
    }
    debug_assert_eq!(actual, *preset.start());
    moves
}

/// Append the mirrored reverse of `first_half` to `moves`.
fn append_mirrored_reverse(ctx: &Ctx, moves: &mut Vec<Move>, first_half: &[Move]) {
    for m in first_half.iter().rev() {
        moves.push(Move {
            from: ctx.mirror_idx(m.to),
            to: ctx.mirror_idx(m.from),
        });
    }
}

/// Every hop of `full` is a jump over an occupied midpoint onto an empty
/// cell, with no cell revisited.
fn chain_ok(ctx: &Ctx, occ: &CellSet, full: &[u16]) -> bool {
    let board = &ctx.preset.board;
    let ndirs = ctx.preset.rules.directions().len();
    let mut seen = CellSet::EMPTY;
    for &c in full {
        if seen.contains(c) {
            return false;
        }
        seen.insert(c);
    }
    full.windows(2).all(|hop| {
        (0..ndirs).any(|d| {
            board.jump_to(hop[0], d) == hop[1] as i16
                && occ.contains(board.step_to(hop[0], d) as u16)
                && !occ.contains(hop[1])
        })
    })
}

/// DFS over simple jump prefixes from the last cell of `path`, completing
/// each prefix into its own reflected reverse either through a
/// self-mirrored pivot cell or through a hop crossing onto the mirror
/// image. Occupancy is static, the moving man's origin already removed.
fn mirrored_completion(ctx: &Ctx, occ: &CellSet, path: &mut Vec<u16>) -> Option<Vec<u16>> {
    let board = &ctx.preset.board;
    let ndirs = ctx.preset.rules.directions().len();
    let cur = *path.last().unwrap();
    if ctx.mirror_idx(cur) == cur {
        let mut full = path.clone();
        full.extend(path[..path.len() - 1].iter().rev().map(|&c| ctx.mirror_idx(c)));
        if chain_ok(ctx, occ, &full) {
            return Some(full);
        }
    } else {
        let mut full = path.clone();
        full.extend(path.iter().rev().map(|&c| ctx.mirror_idx(c)));
        if chain_ok(ctx, occ, &full) {
            return Some(full);
        }
    }
    for d in 0..ndirs {
        let land = board.jump_to(cur, d);
        if land < 0 {
            continue;
        }
        let land = land as u16;
        let mid = board.step_to(cur, d) as u16;
        if occ.contains(mid) && !occ.contains(land) && !path.contains(&land) {
            path.push(land);
            if let Some(found) = mirrored_completion(ctx, occ, path) {
                return Some(found);
            }
            path.pop();
        }
    }
    None
}

/// A witness path for `m` in army `a` that equals its own reflected
/// reverse. Steps qualify exactly when they cross onto their mirror image;
/// chains are searched over simple hop paths.
fn self_mirrored_witness(ctx: &Ctx, a: &CellSet, m: Move) -> Option<Vec<u16>> {
    let board = &ctx.preset.board;
    let rules = ctx.preset.rules;
    if m.to != ctx.mirror_idx(m.from) {
        return None;
    }
    if move_kind(board, m) == MoveKind::Step {
        // A two-cell path [c, mirror(c)] is its own reflected reverse.
        if ctx.jumps_only {
            return None;
        }
        return witness_path(board, rules, a, m);
    }
    let mut occ = *a;
    occ.remove(m.from);
    let mut path = vec![m.from];
    let full = mirrored_completion(ctx, &occ, &mut path)?;
    debug_assert_eq!(*full.last().unwrap(), m.to);
    Some(full)
}

/// The middle moves from `p` that close an odd palindrome: they must land
/// exactly on the mirrored position (which forces to = mirror(from)), and
/// in strict mode must carry a self-mirrored witness path.
fn palindrome_middles(ctx: &Ctx, p: &CellSet, strict: bool) -> Vec<Move> {
    let preset = ctx.preset;
    let mirrored = ctx.mirror(p);
    if mirrored == *p {
        return Vec::new();
    }
    legal_moves(&preset.board, preset.rules, p, p, ctx.jumps_only)
        .into_iter()
        .filter(|&m| {
            apply_army(p, m) == mirrored && (!strict || self_mirrored_witness(ctx, p, m).is_some())
        })
        .collect()
}

/// Path counts to each folded level member under the same filters as the
/// proof pass. With `invariant_only`, restrict to positions fixed by the
/// diagonal reflection (for counting solutions fixed by it).
fn path_counts(
    ctx: &Ctx,
    n: u32,
    floor: i64,
    sym_t: Option<i64>,
    invariant_only: bool,
    budget: &mut MemoryBudget,
) -> Result<Vec<FxHashMap<CellSet, u64>>, ResourceError> {
    let preset = ctx.preset;
    let board = &preset.board;
    let rules = preset.rules;
    let anti = invariant_only.then(|| board.perm(Transform::ReflectXminusY).unwrap());
    let cost = std::mem::size_of::<CellSet>() as u64 * 2 + 8;
    let mut counts: Vec<FxHashMap<CellSet, u64>> = vec![FxHashMap::default()];
    counts[0].insert(*preset.start(), 1);
    let mut moves = Vec::new();
    for depth in 1..=n {
        let horizon = (n - depth) as i64;
        let mut next: FxHashMap<CellSet, u64> = FxHashMap::default();
        let mut inserted = 0u64;
        let prior = &counts[depth as usize - 1];
        for (a, k) in prior {
            legal_moves_into(board, rules, a, a, ctx.jumps_only, &mut moves);
            for &m in moves.iter() {
                let b = apply_army(a, m);
                if centroid(board, &b) + centroid_n_move_bound(board, rules, &b, horizon) < floor {
                    continue;
                }
                if let Some(t) = sym_t {
                    if ctx.sym(&b) < t - 2 * horizon {
                        continue;
                    }
                }
                if let Some(perm) = anti {
                    if b.map(perm) != b {
                        continue;
                    }
                }
                match next.entry(ctx.fold(&b)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += k;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(*k);
                        inserted += 1;
                    }
                }
            }
        }
        budget.charge(cost * inserted, inserted)?;
        counts.push(next);
    }
    Ok(counts)
}

pub fn search_transfer(cfg: TransferConfig) -> Result<TransferOutcome, TransferError> {
    let prove = matches!(
        cfg.mode,
        TransferMode::ProveNone | TransferMode::PalindromeProve
    );
    if prove && cfg.beam_width.is_some() {
        return Err(TransferError::BeamInProveMode);
    }
    match cfg.mode {
        TransferMode::Find => beam_find(cfg),
        TransferMode::ProveNone => mcc_prove(cfg),
        TransferMode::PalindromeProve | TransferMode::PalindromeFind => palindrome_search(cfg),
    }
}

/// Bidirectional proof for the exact target length. Reversing and
/// mirroring the second half of any solution makes both halves forward
/// paths from the start, so both midpoints lie in level N and their
/// centroids sum to K (even target) or to at least K minus one move's gain
/// (odd). Even targets therefore test level N against its own mirror
/// image; odd targets look for one middle move from level N into it.
fn mcc_prove(mut cfg: TransferConfig) -> Result<TransferOutcome, TransferError> {
    let ctx = Ctx::new(cfg.preset, cfg.jumps_only);
    let target = cfg.target;
    let n = target / 2;
    let odd = target % 2 == 1;
    let margin = if odd { ctx.step_gain_cap(n) } else { 0 };
    let mut trail = Vec::new();
    let (pass, _value) = certified_pass(
        &ctx,
        n,
        margin,
        i64::MIN,
        None,
        &mut cfg.budget,
        &mut trail,
    )?;
    let level_n: &[CellSet] = pass.levels.get(n as usize).map_or(&[], |v| &v[..]);

    let witness = if odd {
        level_n.iter().find_map(|p| {
            legal_moves(&ctx.preset.board, ctx.preset.rules, p, p, ctx.jumps_only)
                .into_iter()
                .find_map(|m| {
                    let q = apply_army(p, m);
                    level_n
                        .binary_search(&ctx.fold(&ctx.mirror(&q)))
                        .is_ok()
                        .then(|| {
                            let mut full = reconstruct_path(&ctx, &pass.levels, p, n);
                            full.push(m);
                            let second = reconstruct_path(&ctx, &pass.levels, &ctx.mirror(&q), n);
                            append_mirrored_reverse(&ctx, &mut full, &second);
                            full
                        })
                })
        })
    } else {
        level_n.iter().find_map(|p| {
            level_n
                .binary_search(&ctx.fold(&ctx.mirror(p)))
                .is_ok()
                .then(|| {
                    let mut full = reconstruct_path(&ctx, &pass.levels, p, n);
                    let second = reconstruct_path(&ctx, &pass.levels, &ctx.mirror(p), n);
                    append_mirrored_reverse(&ctx, &mut full, &second);
                    full
                })
        })
    };

    let verdict = match witness {
        Some(moves) => TransferVerdict::Found {
            length: target,
            moves,
        },
        None => TransferVerdict::NoneAt { length: target },
    };
    Ok(TransferOutcome {
        verdict,
        levels: pass.stats,
        cmax_trail: trail,
        last_level: pass.levels.last().cloned().unwrap_or_default(),
    })
}

/// Palindrome search. Along a palindromic solution the symmetry count obeys
/// sym(A_i) >= T - 2(N - i), and the midpoint centroid is pinned to K/2
/// (even) or bounded below by (K - gain)/2 (odd), sharpening the floor.
fn palindrome_search(mut cfg: TransferConfig) -> Result<TransferOutcome, TransferError> {
    let ctx = Ctx::new(cfg.preset, cfg.jumps_only);
    let target = cfg.target;
    let n = target / 2;
    let odd = target % 2 == 1;
    let army = ctx.preset.start().len() as i64;
    let t_sym = if odd { army - 1 } else { army };
    let mut trail = Vec::new();

    // An even length forces a self-mirrored midpoint with centroid exactly
    // K/2; an odd mirror constant rules that out at once.
    if !odd && ctx.k % 2 != 0 {
        return Ok(TransferOutcome {
            verdict: TransferVerdict::NoneAt { length: target },
            levels: Vec::new(),
            cmax_trail: trail,
            last_level: Vec::new(),
        });
    }
    let margin = if odd { ctx.step_gain_cap(n) } else { 0 };
    let min_floor = if odd {
        (ctx.k - margin + 1).div_euclid(2)
    } else {
        ctx.k / 2
    };

    let (pass, value) = certified_pass(
        &ctx,
        n,
        margin,
        min_floor,
        Some(t_sym),
        &mut cfg.budget,
        &mut trail,
    )?;
    let level_n: &[CellSet] = pass.levels.get(n as usize).map_or(&[], |v| &v[..]);

    // Midpoint predicates work on folded representatives: folding commutes
    // with the mirror, so a representative qualifies iff its class does.
    let qualifies_even = |p: &CellSet| ctx.mirror(p) == *p;

    if cfg.enumerate {
        let floor = (ctx.k - value - margin).max(min_floor);
        let resource = |error, stats: &[TransferLevelStat], trail: &[CmaxRecord]| {
            TransferError::Resource {
                error,
                levels: stats.to_vec(),
                cmax_trail: trail.to_vec(),
            }
        };
        let counts = path_counts(&ctx, n, floor, Some(t_sym), false, &mut cfg.budget)
            .map_err(|e| resource(e, &pass.stats, &trail))?;
        // Folding merges a palindrome with its diagonal reflection, and
        // path_counts accumulates both into the representative. Burnside
        // recovers the class count: classes = (all + reflection-fixed) / 2.
        let inv_counts = if ctx.canonical {
            Some(
                path_counts(&ctx, n, floor, Some(t_sym), true, &mut cfg.budget)
                    .map_err(|e| resource(e, &pass.stats, &trail))?,
            )
        } else {
            None
        };
        let empty = FxHashMap::default();
        let at_n = counts.get(n as usize).unwrap_or(&empty);
        let inv_at_n = inv_counts
            .as_ref()
            .map(|c| c.get(n as usize).unwrap_or(&empty));
        let anti = ctx
            .preset
            .board
            .perm(Transform::ReflectXminusY)
            .filter(|_| ctx.canonical);
        let mut raw = 0u64;
        let mut fixed = 0u64;
        let mut witnesses: Vec<Vec<Move>> = Vec::new();
        for p in level_n {
            let middles = if odd {
                palindrome_middles(&ctx, p, cfg.strict_middle)
            } else if qualifies_even(p) {
                vec![Move { from: 0, to: 0 }]
            } else {
                Vec::new()
            };
            if middles.is_empty() {
                continue;
            }
            let paths = at_n.get(p).copied().unwrap_or(0);
            raw += paths * middles.len() as u64;
            if let (Some(inv), Some(perm)) = (inv_at_n, anti) {
                if p.map(perm) == *p {
                    fixed += inv.get(p).copied().unwrap_or(0) * middles.len() as u64;
                }
            }
            for m in middles {
                if witnesses.len() >= 8 {
                    break;
                }
                let mut full = reconstruct_path(&ctx, &pass.levels, p, n);
                let first = full.clone();
                if odd {
                    full.push(m);
                }
                append_mirrored_reverse(&ctx, &mut full, &first);
                witnesses.push(full);
            }
        }
        let count = if ctx.canonical { (raw + fixed) / 2 } else { raw };
        return Ok(TransferOutcome {
            verdict: TransferVerdict::Palindromes { count, witnesses },
            levels: pass.stats,
            cmax_trail: trail,
            last_level: pass.levels.last().cloned().unwrap_or_default(),
        });
    }

    let witness = level_n.iter().find_map(|p| {
        let middle = if odd {
            let m = palindrome_middles(&ctx, p, cfg.strict_middle).into_iter().next();
            m?
        } else if qualifies_even(p) {
            Move { from: 0, to: 0 }
        } else {
            return None;
        };
        let mut full = reconstruct_path(&ctx, &pass.levels, p, n);
        let first = full.clone();
        if odd {
            full.push(middle);
        }
        append_mirrored_reverse(&ctx, &mut full, &first);
        Some(full)
    });

    let verdict = match witness {
        Some(moves) => TransferVerdict::Found {
            length: target,
            moves,
        },
        None => TransferVerdict::NoneAt { length: target },
    };
    Ok(TransferOutcome {
        verdict,
        levels: pass.stats,
        cmax_trail: trail,
        last_level: pass.levels.last().cloned().unwrap_or_default(),
    })
}

/// Forward beam search scored by c(A) + beta * sym(A); stops at the first
/// level containing the goal. A miss is not a nonexistence proof.
fn beam_find(mut cfg: TransferConfig) -> Result<TransferOutcome, TransferError> {
    let ctx = Ctx::new(cfg.preset, cfg.jumps_only);
    let preset = ctx.preset;
    let board = &preset.board;
    let rules = preset.rules;
    // The goal is fold-invariant whenever folding is on.
    let goal = ctx.fold(preset.goal());
    let width = cfg.beam_width.unwrap_or(usize::MAX);
    let beta = cfg.beta;
    let score = |a: &CellSet| centroid(board, a) + beta * ctx.sym(a);

    let mut levels = vec![vec![*preset.start()]];
    let mut stats = vec![TransferLevelStat {
        depth: 0,
        size: 1,
        cmax: Some(centroid(board, preset.start())),
        pruned: 0,
    }];
    for depth in 1..=cfg.target {
        let next = expand_level(
            &levels[depth as usize - 1],
            |a: &CellSet, moves: &mut Vec<Move>, out: &mut Vec<CellSet>| {
                legal_moves_into(board, rules, a, a, ctx.jumps_only, moves);
                for &m in moves.iter() {
                    out.push(ctx.fold(&apply_army(a, m)));
                }
            },
            &mut cfg.budget,
        );
        let mut next = match next {
            Ok(v) => v,
            Err(error) => {
                return Err(TransferError::Resource {
                    error,
                    levels: stats,
                    cmax_trail: Vec::new(),
                })
            }
        };
        let reached_goal = next.binary_search(&goal).is_ok();
        let full = next.len() as u64;
        if next.len() > width {
            next.sort_unstable_by(|a, b| score(b).cmp(&score(a)).then(a.cmp(b)));
            next.truncate(width);
            if reached_goal && !next.contains(&goal) {
                next.push(goal);
            }
            next.sort_unstable();
        }
        stats.push(TransferLevelStat {
            depth,
            size: next.len() as u64,
            cmax: level_cmax(preset, &next),
            pruned: full - next.len() as u64,
        });
        levels.push(next);
        if reached_goal {
            let moves = reconstruct_path(&ctx, &levels, &goal, depth);
            return Ok(TransferOutcome {
                verdict: TransferVerdict::Found {
                    length: depth,
                    moves,
                },
                levels: stats,
                cmax_trail: Vec::new(),
                last_level: Vec::new(),
            });
        }
        if levels.last().unwrap().is_empty() {
            break;
        }
    }
    Ok(TransferOutcome {
        verdict: TransferVerdict::BeamMiss { length: cfg.target },
        levels: stats,
        cmax_trail: Vec::new(),
        last_level: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::board::{Board, Player, RuleSet};
    use rustc_hash::FxHashSet;

    /// 4x4 board, two-man army, goal mirrored across x = y.
    fn toy(rules: RuleSet) -> Preset {
        let board = Board::rect(
            4,
            4,
            CellSet::from_indices([1, 2]),
            CellSet::from_indices([4, 8]),
        )
        .unwrap();
        Preset::from_board(format!("ttoy-{rules:?}"), board, rules, Transform::ReflectXY)
    }

    /// Goal membership of exact-length plain level sets, no pruning.
    fn oracle_exact(preset: &Preset, length: u32, jumps_only: bool) -> bool {
        let mut level: FxHashSet<CellSet> = FxHashSet::default();
        level.insert(*preset.start());
        for _ in 0..length {
            let mut next = FxHashSet::default();
            for a in &level {
                for m in legal_moves(&preset.board, preset.rules, a, a, jumps_only) {
                    next.insert(apply_army(a, m));
                }
            }
            level = next;
        }
        level.contains(preset.goal())
    }

    fn oracle_shortest(preset: &Preset, cap: u32, jumps_only: bool) -> Option<u32> {
        (1..=cap).find(|&len| oracle_exact(preset, len, jumps_only))
    }

    fn prove(preset: &Preset, target: u32) -> TransferOutcome {
        search_transfer(TransferConfig::new(preset, target, TransferMode::ProveNone)).unwrap()
    }

    fn replay(preset: &Preset, moves: &[Move], jumps_only: bool) -> CellSet {
        let mut army = *preset.start();
        for &m in moves {
            assert!(
                legal_moves(&preset.board, preset.rules, &army, &army, jumps_only).contains(&m),
                "illegal {m:?}"
            );
            army = apply_army(&army, m);
        }
        army
    }

    #[test]
    fn prove_matches_oracle_on_toys() {
        for rules in [RuleSet::FourMove, RuleSet::SixMove, RuleSet::EightMove] {
            let p = toy(rules);
            let opt = oracle_shortest(&p, 10, false).unwrap();
            for len in opt.saturating_sub(2)..=opt + 2 {
                let outcome = prove(&p, len);
                let expected = oracle_exact(&p, len, false);
                match outcome.verdict {
                    TransferVerdict::Found { length, ref moves } => {
                        assert!(expected, "{rules:?} len {len}: found but oracle says none");
                        assert_eq!(length, len);
                        assert_eq!(moves.len(), len as usize);
                        assert_eq!(replay(&p, moves, false), *p.goal());
                    }
                    TransferVerdict::NoneAt { .. } => {
                        assert!(!expected, "{rules:?} len {len}: none but oracle finds one");
                    }
                    ref other => panic!("unexpected verdict {other:?}"),
                }
                assert!(outcome.cmax_trail.last().unwrap().self_consistent);
            }
        }
    }

    #[test]
    fn jumps_only_verdicts_match_oracle() {
        let p = toy(RuleSet::SixMove);
        for len in 1..=8 {
            let outcome = search_transfer(TransferConfig {
                jumps_only: true,
                ..TransferConfig::new(&p, len, TransferMode::ProveNone)
            })
            .unwrap();
            let expected = oracle_exact(&p, len, true);
            match outcome.verdict {
                TransferVerdict::Found { ref moves, .. } => {
                    assert!(expected, "len {len}");
                    assert_eq!(replay(&p, moves, true), *p.goal());
                }
                TransferVerdict::NoneAt { .. } => assert!(!expected, "len {len}"),
                ref other => panic!("unexpected verdict {other:?}"),
            }
        }
    }

    #[test]
    fn estimate_starts_at_the_start_centroid() {
        let p = Preset::make("cc10", None).unwrap();
        let rec = estimate_cmax(&p, 0, 1, false).unwrap();
        assert_eq!(rec.value, -60);
        assert!(!rec.self_consistent);

        // An untruncated estimate equals the true level maximum.
        let t = toy(RuleSet::SixMove);
        let brute: i64 = {
            let mut level: FxHashSet<CellSet> = FxHashSet::default();
            level.insert(*t.start());
            for _ in 0..2 {
                let mut next = FxHashSet::default();
                for a in &level {
                    for m in legal_moves(&t.board, t.rules, a, a, false) {
                        next.insert(apply_army(a, m));
                    }
                }
                level = next;
            }
            level.iter().map(|a| centroid(&t.board, a)).max().unwrap()
        };
        assert_eq!(estimate_cmax(&t, 2, 1 << 20, false).unwrap().value, brute);
    }

    #[test]
    fn beam_finds_the_toy_optimum() {
        let p = toy(RuleSet::SixMove);
        let opt = oracle_shortest(&p, 10, false).unwrap();
        for (width, beta) in [(None, 0), (Some(1 << 16), 0), (Some(1 << 16), 2)] {
            let outcome = search_transfer(TransferConfig {
                beam_width: width,
                beta,
                ..TransferConfig::new(&p, 10, TransferMode::Find)
            })
            .unwrap();
            let TransferVerdict::Found { length, ref moves } = outcome.verdict else {
                panic!("beam missed");
            };
            assert_eq!(length, opt);
            assert_eq!(replay(&p, moves, false), *p.goal());
        }
    }

    #[test]
    fn prove_modes_reject_truncation() {
        let p = toy(RuleSet::SixMove);
        let err = search_transfer(TransferConfig {
            beam_width: Some(10),
            ..TransferConfig::new(&p, 6, TransferMode::ProveNone)
        })
        .unwrap_err();
        assert!(matches!(err, TransferError::BeamInProveMode));
    }

    #[test]
    fn palindrome_witnesses_are_palindromic() {
        for rules in [RuleSet::FourMove, RuleSet::SixMove, RuleSet::EightMove] {
            let p = toy(rules);
            let perm = p.board.perm(p.mirror).unwrap();
            let opt = oracle_shortest(&p, 10, false).unwrap();
            let mut found_any = false;
            for len in opt..=opt + 2 {
                let outcome =
                    search_transfer(TransferConfig::new(&p, len, TransferMode::PalindromeProve))
                        .unwrap();
                if let TransferVerdict::Found { length, ref moves } = outcome.verdict {
                    found_any = true;
                    assert_eq!(length, len);
                    assert_eq!(moves.len(), len as usize);
                    assert_eq!(replay(&p, moves, false), *p.goal());
                    // Second half mirrors the first, move for move.
                    for k in 0..(len / 2) as usize {
                        let head = moves[k];
                        let tail = moves[len as usize - 1 - k];
                        assert_eq!(tail.from, perm[head.to as usize]);
                        assert_eq!(tail.to, perm[head.from as usize]);
                    }
                    // A palindromic solution is in particular a solution.
                    match prove(&p, len).verdict {
                        TransferVerdict::Found { .. } => {}
                        ref other => panic!("palindrome without plain solution: {other:?}"),
                    }
                }
            }
            assert!(found_any, "{rules:?}: no palindrome in [{opt}, {}]", opt + 2);
        }
    }

    #[test]
    fn palindrome_enumeration_counts_at_least_the_witness() {
        let p = toy(RuleSet::SixMove);
        let opt = oracle_shortest(&p, 10, false).unwrap();
        for len in opt..=opt + 2 {
            let proved =
                search_transfer(TransferConfig::new(&p, len, TransferMode::PalindromeProve))
                    .unwrap();
            let outcome = search_transfer(TransferConfig {
                enumerate: true,
                ..TransferConfig::new(&p, len, TransferMode::PalindromeFind)
            })
            .unwrap();
            let TransferVerdict::Palindromes {
                count,
                ref witnesses,
            } = outcome.verdict
            else {
                panic!("expected enumeration");
            };
            match proved.verdict {
                TransferVerdict::Found { .. } => {
                    assert!(count >= 1);
                    assert!(!witnesses.is_empty());
                    for w in witnesses {
                        assert_eq!(w.len(), len as usize);
                        assert_eq!(replay(&p, w, false), *p.goal());
                    }
                }
                TransferVerdict::NoneAt { .. } => assert_eq!(count, 0),
                ref other => panic!("unexpected verdict {other:?}"),
            }
        }
    }

    #[test]
    fn strict_middle_is_a_subset_of_weak() {
        let p = toy(RuleSet::SixMove);
        let opt = oracle_shortest(&p, 10, false).unwrap();
        for len in opt..=opt + 3 {
            if len % 2 == 0 {
                continue;
            }
            let run = |strict: bool| {
                let outcome = search_transfer(TransferConfig {
                    strict_middle: strict,
                    enumerate: true,
                    ..TransferConfig::new(&p, len, TransferMode::PalindromeFind)
                })
                .unwrap();
                match outcome.verdict {
                    TransferVerdict::Palindromes { count, .. } => count,
                    ref other => panic!("expected enumeration, got {other:?}"),
                }
            };
            assert!(run(true) <= run(false), "len {len}");
        }
    }

    /// Exact palindromic-solution tally by plain DFS over full move
    /// sequences of length `k`: (all, fixed by the diagonal reflection).
    /// Counts walks, matching the engine's exact-length semantics.
    fn oracle_palindromes(p: &Preset, k: u32) -> (u64, u64) {
        let m_perm = p.board.perm(p.mirror).unwrap();
        let r_perm = p.board.perm(Transform::ReflectXminusY);
        // Distance-to-goal prune; the army move graph is undirected.
        let mut dist: FxHashMap<CellSet, u32> = FxHashMap::default();
        dist.insert(*p.goal(), 0);
        let mut frontier = vec![*p.goal()];
        for d in 1..=k {
            let mut next = Vec::new();
            for a in &frontier {
                for m in legal_moves(&p.board, p.rules, a, a, false) {
                    let b = apply_army(a, m);
                    if !dist.contains_key(&b) {
                        dist.insert(b, d);
                        next.push(b);
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                break;
            }
        }
        fn go(
            p: &Preset,
            dist: &FxHashMap<CellSet, u32>,
            m_perm: &[u16],
            r_perm: Option<&[u16]>,
            k: usize,
            path: &mut Vec<CellSet>,
            tally: &mut (u64, u64),
        ) {
            let depth = path.len() - 1;
            if depth == k {
                if path.last() != Some(p.goal()) {
                    return;
                }
                // Position palindromicity; the mirror is an involution, so
                // checking the first half covers the rest.
                if (0..=k / 2).any(|j| path[k - j] != path[j].map(m_perm)) {
                    return;
                }
                tally.0 += 1;
                if let Some(rp) = r_perm {
                    if path.iter().all(|a| a.map(rp) == *a) {
                        tally.1 += 1;
                    }
                }
                return;
            }
            let cur = *path.last().unwrap();
            let left = (k - depth - 1) as u32;
            for m in legal_moves(&p.board, p.rules, &cur, &cur, false) {
                let b = apply_army(&cur, m);
                if dist.get(&b).map_or(true, |&d| d > left) {
                    continue;
                }
                path.push(b);
                go(p, dist, m_perm, r_perm, k, path, tally);
                path.pop();
            }
        }
        let mut tally = (0, 0);
        let mut path = vec![*p.start()];
        go(p, &dist, m_perm, r_perm, k as usize, &mut path, &mut tally);
        tally
    }

    #[test]
    fn palindrome_counts_match_plain_enumeration() {
        // Mirror-pair bases keep the diagonal fold on; the single-man board
        // also admits solutions fixed by the fold (rides the diagonal), so
        // both terms of the class count (all + fixed) / 2 are exercised.
        let fold2 = Preset::from_board(
            "pfold2".into(),
            Board::rect(
                4,
                4,
                CellSet::from_indices([8, 13]),
                CellSet::from_indices([2, 7]),
            )
            .unwrap(),
            RuleSet::SixMove,
            Transform::Rotate180,
        );
        let fold1 = Preset::from_board(
            "pfold1".into(),
            Board::rect(4, 4, CellSet::from_indices([12]), CellSet::from_indices([3])).unwrap(),
            RuleSet::EightMove,
            Transform::Rotate180,
        );
        let plain = toy(RuleSet::SixMove);
        assert!(fold2.canonical_enabled && fold1.canonical_enabled);
        assert!(!plain.canonical_enabled);

        let mut nonzero = 0u32;
        let mut fixed_seen = 0u32;
        for p in [&fold2, &fold1, &plain] {
            let opt = oracle_shortest(p, 12, false).unwrap();
            for len in opt..=opt + 2 {
                let (all, fixed) = oracle_palindromes(p, len);
                let expected = if p.canonical_enabled {
                    (all + fixed) / 2
                } else {
                    all
                };
                let outcome = search_transfer(TransferConfig {
                    enumerate: true,
                    ..TransferConfig::new(p, len, TransferMode::PalindromeFind)
                })
                .unwrap();
                let TransferVerdict::Palindromes { count, .. } = outcome.verdict else {
                    panic!("expected enumeration");
                };
                assert_eq!(count, expected, "{} len {len}: all {all} fixed {fixed}", p.name);
                nonzero += (count > 0) as u32;
                fixed_seen += (fixed > 0) as u32;
            }
        }
        assert!(nonzero > 0, "sweep never saw a palindrome");
        assert!(fixed_seen > 0, "sweep never saw a reflection-fixed one");
    }

    #[test]
    fn verdicts_are_thread_independent() {
        let p = toy(RuleSet::SixMove);
        let opt = oracle_shortest(&p, 10, false).unwrap();
        let base = prove(&p, opt);
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| prove(&p, opt));
        let moves = |o: &TransferOutcome| match &o.verdict {
            TransferVerdict::Found { moves, .. } => moves.clone(),
            _ => panic!("expected a solution"),
        };
        assert_eq!(moves(&base), moves(&single));
        assert_eq!(base.levels.len(), single.levels.len());
        for (a, b) in base.levels.iter().zip(&single.levels) {
            assert_eq!(a.size, b.size);
            assert_eq!(a.cmax, b.cmax);
        }
    }

    #[test]
    fn memory_cap_reports_partial_stats() {
        let p = toy(RuleSet::SixMove);
        let err = search_transfer(TransferConfig {
            budget: MemoryBudget::bytes(64),
            ..TransferConfig::new(&p, 8, TransferMode::ProveNone)
        })
        .unwrap_err();
        match err {
            TransferError::Resource { levels, .. } => assert!(!levels.is_empty()),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn toy_mirror_maps_start_to_goal() {
        let p = toy(RuleSet::SixMove);
        assert_eq!(p.mirror_set(p.start()), *p.goal());
        assert_eq!(p.board.base(Player::Blue), p.start());
    }
}
