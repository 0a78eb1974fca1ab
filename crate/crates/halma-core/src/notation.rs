//! Solution notation: parsing, palindrome expansion, verification,
//! formatting, ASCII rendering, and the JSON report schema.

use serde::Serialize;
use thiserror::Error;

use crate::board::{Board, CellSet, Player, Preset, RuleSet};
use crate::game::LevelStat;
use crate::movegen::{validate_path, witness_path, Move, MoveKind};
use crate::metrics::{army_symmetry, centroid};
use crate::transfer::{CmaxRecord, TransferLevelStat};

/// One move as written: a dash-joined cell path. A trailing dash marks the
/// written half of a palindrome's middle move.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveToken {
    pub cells: Vec<String>,
    pub half_middle: bool,
}

/// A solution as parsed from text, before palindrome expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub problem: Option<String>,
    pub rules: Option<RuleSet>,
    pub tokens: Vec<MoveToken>,
    /// "(reflect)" present: the written moves are the first half.
    pub reflect: bool,
    /// "(blue wins)" or "(red wins)" annotation.
    pub winner: Option<Player>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NotationError {
    #[error("malformed cell name {0:?}")]
    BadCell(String),
    #[error("move {index}: non-contiguous hop {from}-{to}")]
    NonContiguous {
        index: usize,
        from: String,
        to: String,
    },
    #[error("move {index}: a move needs at least two cells")]
    ShortMove { index: usize },
    #[error("half middle move requires a closing (reflect)")]
    DanglingHalf,
    #[error("only the final written move may end in a dash")]
    HalfNotLast,
    #[error("moves after (reflect)")]
    AfterReflect,
    #[error("no moves")]
    Empty,
}

fn valid_cell_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && !chars.as_str().is_empty()
        && chars.as_str().chars().all(|c| c.is_ascii_digit())
}

/// Parse the text format of solution files: whitespace/comma-separated
/// dash-joined cell paths, `#` comments, parenthesized annotations.
/// "(reflect)" marks a palindromic half, "(blue wins)"/"(red wins)" a game
/// outcome; other annotations are ignored.
pub fn parse_solution(text: &str) -> Result<Solution, NotationError> {
    let mut tokens: Vec<MoveToken> = Vec::new();
    let mut reflect = false;
    let mut winner = None;
    for raw_line in text.lines() {
        let line = raw_line.split('#').next().unwrap();
        let mut rest = line;
        while !rest.is_empty() {
            let (chunk, annotation, tail) = match rest.find('(') {
                Some(open) => {
                    let close = rest[open..].find(')').map(|c| open + c);
                    let inner = match close {
                        Some(c) => &rest[open + 1..c],
                        None => &rest[open + 1..],
                    };
                    (&rest[..open], Some(inner), close.map_or("", |c| &rest[c + 1..]))
                }
                None => (rest, None, ""),
            };
            for word in chunk.split([' ', '\t', ',']).filter(|w| !w.is_empty()) {
                if reflect {
                    return Err(NotationError::AfterReflect);
                }
                let half_middle = word.ends_with('-');
                let body = word.strip_suffix('-').unwrap_or(word);
                let cells: Vec<String> = body.split('-').map(str::to_string).collect();
                for c in &cells {
                    if !valid_cell_name(c) {
                        return Err(NotationError::BadCell(c.clone()));
                    }
                }
                if cells.len() < 2 && !half_middle {
                    return Err(NotationError::ShortMove {
                        index: tokens.len() + 1,
                    });
                }
                tokens.push(MoveToken { cells, half_middle });
            }
            match annotation.map(str::trim) {
                Some("reflect") => reflect = true,
                Some("blue wins") => winner = Some(Player::Blue),
                Some("red wins") => winner = Some(Player::Red),
                _ => {}
            }
            rest = tail;
        }
    }
    if tokens.is_empty() {
        return Err(NotationError::Empty);
    }
    for (i, t) in tokens.iter().enumerate() {
        if t.half_middle {
            if i + 1 != tokens.len() {
                return Err(NotationError::HalfNotLast);
            }
            if !reflect {
                return Err(NotationError::DanglingHalf);
            }
        }
    }
    Ok(Solution {
        problem: None,
        rules: None,
        tokens,
        reflect,
        winner,
    })
}

/// A hop is one step direction or one doubled direction.
fn contiguous(board: &Board, rules: RuleSet, from: u16, to: u16) -> bool {
    let a = board.cell(from);
    let b = board.cell(to);
    let dx = b.x as i16 - a.x as i16;
    let dy = b.y as i16 - a.y as i16;
    rules
        .directions()
        .iter()
        .any(|&(x, y)| {
            (dx, dy) == (x as i16, y as i16) || (dx, dy) == (2 * x as i16, 2 * y as i16)
        })
}

/// Expand a parsed solution into full move paths (cell indices): resolve
/// names against the board, complete a trailing-dash middle move by its own
/// reflected reverse, and append the reflected reverse of every full move
/// when "(reflect)" is present. Every hop is checked for contiguity; the
/// preset's mirror supplies the reflection (the diagonal for most boards,
/// the half turn where the bases face each other through it).
pub fn expand_solution(preset: &Preset, s: &Solution) -> Result<Vec<Vec<u16>>, NotationError> {
    let board = &preset.board;
    let perm = board.perm(preset.mirror).expect("mirror supported");
    let mut written: Vec<Vec<u16>> = Vec::with_capacity(s.tokens.len());
    for t in &s.tokens {
        let mut path = Vec::with_capacity(t.cells.len());
        for name in &t.cells {
            let cell = board
                .parse_cell(name)
                .map_err(|_| NotationError::BadCell(name.clone()))?;
            path.push(board.index(cell));
        }
        written.push(path);
    }

    let half = s.tokens.last().map_or(false, |t| t.half_middle);
    let fulls = if half { written.len() - 1 } else { written.len() };
    let mut paths: Vec<Vec<u16>> = written[..fulls].to_vec();
    if half {
        // c0..ck completes to c0..ck, reflect(c_{k-1}), ..., reflect(c0);
        // the reflected image of the pivot cell is the pivot itself.
        let prefix = &written[fulls];
        let mut full = prefix.clone();
        full.extend(prefix[..prefix.len() - 1].iter().rev().map(|&c| perm[c as usize]));
        paths.push(full);
    }
    if s.reflect {
        for p in written[..fulls].iter().rev() {
            paths.push(p.iter().rev().map(|&c| perm[c as usize]).collect());
        }
    }

    for (i, p) in paths.iter().enumerate() {
        if p.len() < 2 {
            return Err(NotationError::ShortMove { index: i + 1 });
        }
        for hop in p.windows(2) {
            if !contiguous(board, preset.rules, hop[0], hop[1]) {
                return Err(NotationError::NonContiguous {
                    index: i + 1,
                    from: board.cell_name(board.cell(hop[0])),
                    to: board.cell_name(board.cell(hop[1])),
                });
            }
        }
    }
    Ok(paths)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolutionKind {
    Game,
    Transfer,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PlayerCounts {
    pub blue: u32,
    pub red: u32,
}

impl PlayerCounts {
    fn add(&mut self, p: Player) {
        match p {
            Player::Blue => self.blue += 1,
            Player::Red => self.red += 1,
        }
    }
}

/// Replay record of one solution.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerificationReport {
    pub kind: String,
    pub legal: bool,
    /// First violation: move index, path, and the broken rule.
    pub error: Option<String>,
    pub move_count: u32,
    /// Transfer: final army equals the goal. Game: the last move wins.
    pub goal_reached: bool,
    pub winner: Option<String>,
    /// 1-based index of the first winning move.
    pub win_at: Option<u32>,
    pub palindromic: bool,
    pub steps: PlayerCounts,
    pub jumps: PlayerCounts,
    /// Moved army's centroid after each move.
    pub centroid_trace: Vec<i64>,
    /// Moved army's symmetry count after each move.
    pub symmetry_trace: Vec<u32>,
    /// Final cell names, blue then red (transfer: the army under blue).
    pub final_blue: Vec<String>,
    pub final_red: Vec<String>,
}

/// A path as its dash-joined cell names.
pub fn path_token(board: &Board, path: &[u16]) -> String {
    path.iter()
        .map(|&c| board.cell_name(board.cell(c)))
        .collect::<Vec<_>>()
        .join("-")
}

fn set_names(board: &Board, s: &CellSet) -> Vec<String> {
    s.iter().map(|c| board.cell_name(board.cell(c))).collect()
}

/// A transfer solution is palindromic when move k from the end is the
/// reflected reverse of move k from the start, and an odd middle move is
/// its own reflected reverse.
pub fn is_palindromic(preset: &Preset, paths: &[Vec<u16>]) -> bool {
    let perm = preset.board.perm(preset.mirror).expect("mirror supported");
    let l = paths.len();
    (0..(l + 1) / 2).all(|k| {
        let mirrored: Vec<u16> = paths[l - 1 - k].iter().rev().map(|&c| perm[c as usize]).collect();
        paths[k] == mirrored
    })
}

/// Replay a solution move by move, checking full path legality against the
/// occupancy at each instant. Games alternate armies starting with blue;
/// transfers move the blue army from its base toward the goal.
pub fn verify_solution(
    preset: &Preset,
    s: &Solution,
    kind: Option<SolutionKind>,
) -> Result<VerificationReport, NotationError> {
    let paths = expand_solution(preset, s)?;
    let kind = kind.unwrap_or(if s.winner.is_some() {
        SolutionKind::Game
    } else {
        SolutionKind::Transfer
    });
    let board = &preset.board;
    let rules = preset.rules;
    let game = kind == SolutionKind::Game;

    let mut blue = *board.blue_base();
    let mut red = *board.red_base();
    if !game {
        red = CellSet::EMPTY;
    }
    let mut legal = true;
    let mut error = None;
    let mut steps = PlayerCounts::default();
    let mut jumps = PlayerCounts::default();
    let mut centroid_trace = Vec::new();
    let mut symmetry_trace = Vec::new();
    let mut win_at = None;
    let mut played = 0u32;

    for (i, path) in paths.iter().enumerate() {
        let mover = if game && i % 2 == 1 {
            Player::Red
        } else {
            Player::Blue
        };
        let occupied = blue.union(&red);
        let army = if mover == Player::Blue { &blue } else { &red };
        match validate_path(board, rules, &occupied, army, path) {
            Ok(found) => {
                match found {
                    MoveKind::Step => steps.add(mover),
                    MoveKind::JumpChain => jumps.add(mover),
                }
                let army = if mover == Player::Blue {
                    &mut blue
                } else {
                    &mut red
                };
                army.remove(path[0]);
                army.insert(*path.last().unwrap());
                centroid_trace.push(centroid(board, army));
                symmetry_trace.push(army_symmetry(board, preset.mirror, army));
                played += 1;
                if game && win_at.is_none() && *army == *board.base(mover.other()) {
                    win_at = Some(played);
                }
            }
            Err(e) => {
                legal = false;
                error = Some(format!("move {} ({}): {}", i + 1, path_token(board, path), e));
                break;
            }
        }
    }

    let goal_reached = if game {
        legal && win_at == Some(paths.len() as u32)
    } else {
        legal && blue == *preset.goal()
    };
    let winner = match (game, win_at) {
        (true, Some(k)) => Some(if k % 2 == 1 { Player::Blue } else { Player::Red }),
        _ => None,
    };
    Ok(VerificationReport {
        kind: match kind {
            SolutionKind::Game => "game",
            SolutionKind::Transfer => "transfer",
        }
        .to_string(),
        legal,
        error,
        move_count: paths.len() as u32,
        goal_reached,
        winner: winner.map(|w| w.label().to_string()),
        win_at,
        palindromic: !game && legal && is_palindromic(preset, &paths),
        steps,
        jumps,
        centroid_trace,
        symmetry_trace,
        final_blue: set_names(board, &blue),
        final_red: set_names(board, &red),
    })
}

/// Format full move paths in the solution file grammar: dash-joined cells,
/// comma-separated moves, with a winner annotation for games. Parsing the
/// result reproduces the same expanded paths.
pub fn format_solution(preset: &Preset, paths: &[Vec<u16>], winner: Option<Player>) -> String {
    let board = &preset.board;
    let mut out = String::new();
    let mut line_len = 0usize;
    for (i, p) in paths.iter().enumerate() {
        let token = path_token(board, p);
        if i > 0 {
            out.push(',');
            line_len += 1;
            if line_len + 1 + token.len() > 72 {
                out.push('\n');
                line_len = 0;
            } else {
                out.push(' ');
                line_len += 1;
            }
        }
        line_len += token.len();
        out.push_str(&token);
    }
    if let Some(w) = winner {
        out.push_str(&format!(" ({} wins)", w.label()));
    }
    out.push('\n');
    out
}

/// Full witness paths for a game's move list (endpoints), replaying both
/// armies from the start.
pub fn game_paths(preset: &Preset, moves: &[Move]) -> Vec<Vec<u16>> {
    let board = &preset.board;
    let mut blue = *board.blue_base();
    let mut red = *board.red_base();
    let mut paths = Vec::with_capacity(moves.len());
    for (i, &m) in moves.iter().enumerate() {
        let occupied = blue.union(&red);
        let path = witness_path(board, preset.rules, &occupied, m).expect("move is legal");
        paths.push(path);
        let army = if i % 2 == 0 { &mut blue } else { &mut red };
        army.remove(m.from);
        army.insert(m.to);
    }
    paths
}

/// Full witness paths for a transfer's move list.
pub fn transfer_paths(preset: &Preset, moves: &[Move]) -> Vec<Vec<u16>> {
    let mut army = *preset.start();
    let mut paths = Vec::with_capacity(moves.len());
    for &m in moves {
        let path = witness_path(&preset.board, preset.rules, &army, m).expect("move is legal");
        paths.push(path);
        army.remove(m.from);
        army.insert(m.to);
    }
    paths
}

/// ASCII board diagram: men as B/R, empty base cells marked b/r, other
/// cells as dots, with row numbers and column letters.
pub fn render_position(board: &Board, blue: &CellSet, red: &CellSet) -> String {
    let mut out = String::new();
    for y in (0..board.height()).rev() {
        let row = board.height() - y;
        out.push_str(&format!("{:>2} ", row));
        for x in 0..board.width() {
            let c = crate::board::Cell::new(x, y);
            let glyph = if !board.contains(c) {
                ' '
            } else {
                let idx = board.index(c);
                if blue.contains(idx) {
                    'B'
                } else if red.contains(idx) {
                    'R'
                } else if board.blue_base().contains(idx) {
                    'b'
                } else if board.red_base().contains(idx) {
                    'r'
                } else {
                    '.'
                }
            };
            out.push(glyph);
            if x + 1 < board.width() {
                out.push(' ');
            }
        }
        out.push('\n');
    }
    out.push_str("   ");
    for x in 0..board.width() {
        out.push((b'a' + x) as char);
        if x + 1 < board.width() {
            out.push(' ');
        }
    }
    out.push('\n');
    out
}

/// One row of the JSON report's level table.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportLevel {
    pub depth: u32,
    pub size: u64,
    pub cmax: Option<i64>,
    pub pruned: u64,
}

impl From<&LevelStat> for ReportLevel {
    fn from(l: &LevelStat) -> ReportLevel {
        ReportLevel {
            depth: l.depth,
            size: l.size,
            cmax: None,
            pruned: l.pruned,
        }
    }
}

impl From<&TransferLevelStat> for ReportLevel {
    fn from(l: &TransferLevelStat) -> ReportLevel {
        ReportLevel {
            depth: l.depth,
            size: l.size,
            cmax: l.cmax,
            pruned: l.pruned,
        }
    }
}

/// The stable JSON result schema shared by every subcommand. Identical
/// configuration and build produce byte-identical output except runtimeMs.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub problem: String,
    pub rules: String,
    pub board: String,
    pub mode: String,
    pub length: Option<u32>,
    pub verdict: String,
    pub solution: Vec<String>,
    pub levels: Vec<ReportLevel>,
    pub cmax_trail: Vec<CmaxRecord>,
    pub bounds: serde_json::Map<String, serde_json::Value>,
    pub runtime_ms: u64,
    pub threads: usize,
}

impl Report {
    pub fn new(problem: &str, rules: RuleSet, board: &Board, mode: &str) -> Report {
        Report {
            problem: problem.to_string(),
            rules: rules.label().to_string(),
            board: format!(
                "{}x{}, {} cells",
                board.width(),
                board.height(),
                board.cell_count()
            ),
            mode: mode.to_string(),
            length: None,
            verdict: String::new(),
            solution: Vec::new(),
            levels: Vec::new(),
            cmax_trail: Vec::new(),
            bounds: serde_json::Map::new(),
            runtime_ms: 0,
            threads: 0,
        }
    }
}
