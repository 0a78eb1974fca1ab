//! Board geometry: cells, occupancy bitsets, rule sets, transforms and the
//! shipped army presets.
//!
//! Coordinates are 0-based with `x` increasing rightward and `y` increasing
//! upward. The display name of a cell is column letter `'a' + x` plus row
//! number `height - y`, so `a1` is the top-left corner and names match the
//! published solution notation.

use serde::Serialize;
use thiserror::Error;

/// All step/jump directions, ordered so each rule set is a prefix.
pub const DIRECTIONS: [(i8, i8); 8] = [
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (-1, -1),
    (1, -1),
    (-1, 1),
];

/// Move directions for the three board families.
///
/// The direction set is closed under negation: `SixMove` adds the single
/// diagonal axis of Chinese Checkers boards, `EightMove` both diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum RuleSet {
    FourMove,
    SixMove,
    EightMove,
}

impl RuleSet {
    pub fn directions(self) -> &'static [(i8, i8)] {
        match self {
            RuleSet::FourMove => &DIRECTIONS[..4],
            RuleSet::SixMove => &DIRECTIONS[..6],
            RuleSet::EightMove => &DIRECTIONS[..8],
        }
    }

    /// Maximum per-man centroid change of a single step move.
    pub fn ell(self) -> i64 {
        match self {
            RuleSet::FourMove | RuleSet::SixMove => 1,
            RuleSet::EightMove => 2,
        }
    }

    /// Move-count distance between two cells on an empty board
    /// (displacement norm).
    pub fn norm(self, dx: i64, dy: i64) -> i64 {
        match self {
            RuleSet::FourMove => dx.abs() + dy.abs(),
            RuleSet::SixMove => (dx.abs() + dy.abs() + (dx - dy).abs()) / 2,
            RuleSet::EightMove => dx.abs().max(dy.abs()),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RuleSet::FourMove => "4-move",
            RuleSet::SixMove => "6-move",
            RuleSet::EightMove => "8-move",
        }
    }

    pub fn from_arg(s: &str) -> Result<RuleSet, BoardError> {
        match s {
            "4" | "4-move" => Ok(RuleSet::FourMove),
            "6" | "6-move" => Ok(RuleSet::SixMove),
            "8" | "8-move" => Ok(RuleSet::EightMove),
            _ => Err(BoardError::BadRuleSet(s.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Player {
    Blue,
    Red,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Blue => Player::Red,
            Player::Red => Player::Blue,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Player::Blue => "blue",
            Player::Red => "red",
        }
    }
}

/// A board cell. `x` is the column (rightward), `y` the row (upward).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub x: u8,
    pub y: u8,
}

impl Cell {
    pub fn new(x: u8, y: u8) -> Cell {
        Cell { x, y }
    }

    /// Per-cell centroid contribution `x - y`.
    pub fn centroid(self) -> i64 {
        self.x as i64 - self.y as i64
    }
}

/// Geometric symmetries of a board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Transform {
    /// `(x, y) -> (y, x)`; square boards only.
    ReflectXY,
    /// `(x, y) -> (W-1-y, H-1-x)`; an involution on square boards only.
    ReflectXminusY,
    /// `(x, y) -> (W-1-x, H-1-y)`.
    Rotate180,
}

impl Transform {
    /// Image of a cell under the transform on a `width x height` grid.
    pub fn map_cell(self, c: Cell, width: u8, height: u8) -> Cell {
        match self {
            Transform::ReflectXY => Cell::new(c.y, c.x),
            Transform::ReflectXminusY => Cell::new(width - 1 - c.y, height - 1 - c.x),
            Transform::Rotate180 => Cell::new(width - 1 - c.x, height - 1 - c.y),
        }
    }
}

/// Set of board cells as a 256-bit mask; cell index is `y * width + x`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CellSet {
    words: [u64; 4],
}

impl CellSet {
    pub const EMPTY: CellSet = CellSet { words: [0; 4] };

    pub fn contains(&self, idx: u16) -> bool {
        self.words[(idx >> 6) as usize] >> (idx & 63) & 1 != 0
    }

    pub fn insert(&mut self, idx: u16) {
        self.words[(idx >> 6) as usize] |= 1 << (idx & 63);
    }

    pub fn remove(&mut self, idx: u16) {
        self.words[(idx >> 6) as usize] &= !(1 << (idx & 63));
    }

    pub fn len(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words == [0; 4]
    }

    pub fn union(&self, other: &CellSet) -> CellSet {
        let mut w = self.words;
        for i in 0..4 {
            w[i] |= other.words[i];
        }
        CellSet { words: w }
    }

    pub fn intersect(&self, other: &CellSet) -> CellSet {
        let mut w = self.words;
        for i in 0..4 {
            w[i] &= other.words[i];
        }
        CellSet { words: w }
    }

    pub fn minus(&self, other: &CellSet) -> CellSet {
        let mut w = self.words;
        for i in 0..4 {
            w[i] &= !other.words[i];
        }
        CellSet { words: w }
    }

    pub fn is_subset_of(&self, other: &CellSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &CellSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & b == 0)
    }

    /// Raw 256-bit backing words, low cell indices first.
    pub fn words(&self) -> [u64; 4] {
        self.words
    }

    /// Iterate set cell indices in increasing order.
    pub fn iter(&self) -> CellSetIter {
        CellSetIter {
            words: self.words,
            word: 0,
        }
    }

    /// Image under a cell-index permutation.
    pub fn map(&self, perm: &[u16]) -> CellSet {
        let mut out = CellSet::EMPTY;
        for idx in self.iter() {
            out.insert(perm[idx as usize]);
        }
        out
    }

    pub fn from_indices(indices: impl IntoIterator<Item = u16>) -> CellSet {
        let mut s = CellSet::EMPTY;
        for i in indices {
            s.insert(i);
        }
        s
    }
}

impl std::fmt::Debug for CellSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "CellSet{:?}", self.iter().collect::<Vec<_>>())
    }
}

pub struct CellSetIter {
    words: [u64; 4],
    word: usize,
}

impl Iterator for CellSetIter {
    type Item = u16;

    fn next(&mut self) -> Option<u16> {
        while self.word < 4 {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as u16;
                self.words[self.word] &= w - 1;
                return Some((self.word as u16) << 6 | bit);
            }
            self.word += 1;
        }
        None
    }
}

/// A game position: both armies plus the side to move.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GamePos {
    pub blue: CellSet,
    pub red: CellSet,
    pub to_move: Player,
}

impl GamePos {
    pub fn occupied(&self) -> CellSet {
        self.blue.union(&self.red)
    }

    pub fn army(&self, p: Player) -> &CellSet {
        match p {
            Player::Blue => &self.blue,
            Player::Red => &self.red,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BoardError {
    #[error("board dimensions {0}x{1} outside supported range")]
    BadDimensions(u8, u8),
    #[error("unknown rule set {0:?} (expected 4, 6 or 8)")]
    BadRuleSet(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("cell name {0:?} does not parse or lies off the board")]
    BadCell(String),
    #[error("base cell off the board")]
    BaseOffBoard,
    #[error("base regions overlap")]
    BasesOverlap,
    #[error("base regions differ in size")]
    BaseSizeMismatch,
    #[error("ascii grid line {0} malformed: {1}")]
    BadAscii(usize, String),
}

/// An immutable board: dimensions, cell validity mask and the two base
/// regions. Per-cell movement and transform tables are precomputed at
/// construction.
#[derive(Clone, Debug)]
pub struct Board {
    width: u8,
    height: u8,
    cells: CellSet,
    blue_base: CellSet,
    red_base: CellSet,
    step_to: Vec<[i16; 8]>,
    jump_to: Vec<[i16; 8]>,
    cell_centroid: Vec<i16>,
    type_label: Vec<u8>,
    perms: [Option<Vec<u16>>; 3],
}

impl Board {
    /// Build a board from an explicit cell mask and base regions.
    ///
    /// Transform permutation tables are built only for transforms that map
    /// the cell mask onto itself (and, for the reflections, only on square
    /// boards where they are involutions).
    pub fn new(
        width: u8,
        height: u8,
        cells: CellSet,
        blue_base: CellSet,
        red_base: CellSet,
    ) -> Result<Board, BoardError> {
        if width == 0 || height == 0 || (width as u16) * (height as u16) > 256 {
            return Err(BoardError::BadDimensions(width, height));
        }
        if !blue_base.is_subset_of(&cells) || !red_base.is_subset_of(&cells) {
            return Err(BoardError::BaseOffBoard);
        }
        if !blue_base.is_disjoint(&red_base) {
            return Err(BoardError::BasesOverlap);
        }
        if blue_base.len() != red_base.len() {
            return Err(BoardError::BaseSizeMismatch);
        }

        let n = width as usize * height as usize;
        let mut step_to = vec![[-1i16; 8]; n];
        let mut jump_to = vec![[-1i16; 8]; n];
        let mut cell_centroid = vec![0i16; n];
        let mut type_label = vec![0u8; n];

        let in_bounds = |x: i16, y: i16| x >= 0 && x < width as i16 && y >= 0 && y < height as i16;
        let valid = |x: i16, y: i16| in_bounds(x, y) && cells.contains((y * width as i16 + x) as u16);

        for y in 0..height as i16 {
            for x in 0..width as i16 {
                let idx = (y * width as i16 + x) as usize;
                cell_centroid[idx] = (x - y) as i16;
                // Type labels key on column parity and display-row parity;
                // jumps preserve the label, steps always change it.
                let row = height as i16 - y;
                type_label[idx] = match (x & 1, row & 1) {
                    (0, 1) => 0,
                    (1, 1) => 1,
                    (0, 0) => 2,
                    _ => 3,
                };
                if !valid(x, y) {
                    continue;
                }
                for (d, &(dx, dy)) in DIRECTIONS.iter().enumerate() {
                    let (sx, sy) = (x + dx as i16, y + dy as i16);
                    if valid(sx, sy) {
                        step_to[idx][d] = sy * width as i16 + sx;
                        let (jx, jy) = (x + 2 * dx as i16, y + 2 * dy as i16);
                        if valid(jx, jy) {
                            jump_to[idx][d] = jy * width as i16 + jx;
                        }
                    }
                }
            }
        }

        let mut board = Board {
            width,
            height,
            cells,
            blue_base,
            red_base,
            step_to,
            jump_to,
            cell_centroid,
            type_label,
            perms: [None, None, None],
        };
        for (slot, t) in [
            Transform::ReflectXY,
            Transform::ReflectXminusY,
            Transform::Rotate180,
        ]
        .into_iter()
        .enumerate()
        {
            board.perms[slot] = board.build_perm(t);
        }
        Ok(board)
    }

    /// Rectangular board with every cell valid.
    pub fn rect(
        width: u8,
        height: u8,
        blue_base: CellSet,
        red_base: CellSet,
    ) -> Result<Board, BoardError> {
        if width == 0 || height == 0 || (width as u16) * (height as u16) > 256 {
            return Err(BoardError::BadDimensions(width, height));
        }
        let mut cells = CellSet::EMPTY;
        for i in 0..(width as u16 * height as u16) {
            cells.insert(i);
        }
        Board::new(width, height, cells, blue_base, red_base)
    }

    fn build_perm(&self, t: Transform) -> Option<Vec<u16>> {
        match t {
            Transform::ReflectXY | Transform::ReflectXminusY if self.width != self.height => {
                return None
            }
            _ => {}
        }
        let n = self.width as usize * self.height as usize;
        let mut perm = vec![0u16; n];
        for y in 0..self.height {
            for x in 0..self.width {
                let from = self.index(Cell::new(x, y));
                let to = self.index(t.map_cell(Cell::new(x, y), self.width, self.height));
                if self.cells.contains(from) != self.cells.contains(to) {
                    return None;
                }
                perm[from as usize] = to;
            }
        }
        Some(perm)
    }

    pub fn width(&self) -> u8 {
        self.width
    }

    pub fn height(&self) -> u8 {
        self.height
    }

    pub fn cells(&self) -> &CellSet {
        &self.cells
    }

    pub fn cell_count(&self) -> u32 {
        self.cells.len()
    }

    pub fn blue_base(&self) -> &CellSet {
        &self.blue_base
    }

    pub fn red_base(&self) -> &CellSet {
        &self.red_base
    }

    pub fn base(&self, p: Player) -> &CellSet {
        match p {
            Player::Blue => &self.blue_base,
            Player::Red => &self.red_base,
        }
    }

    pub fn index(&self, c: Cell) -> u16 {
        c.y as u16 * self.width as u16 + c.x as u16
    }

    pub fn cell(&self, idx: u16) -> Cell {
        Cell::new((idx % self.width as u16) as u8, (idx / self.width as u16) as u8)
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x < self.width && c.y < self.height && self.cells.contains(self.index(c))
    }

    /// Step destination table: index of `cell + dir`, or -1 if invalid.
    pub(crate) fn step_to(&self, idx: u16, dir: usize) -> i16 {
        self.step_to[idx as usize][dir]
    }

    /// Jump landing table: index of `cell + 2*dir`, or -1 if the landing or
    /// the midpoint is invalid. The midpoint index is `step_to`.
    pub(crate) fn jump_to(&self, idx: u16, dir: usize) -> i16 {
        self.jump_to[idx as usize][dir]
    }

    pub fn cell_centroid(&self, idx: u16) -> i64 {
        self.cell_centroid[idx as usize] as i64
    }

    /// Parity class 0-3 of a cell. Jump moves preserve the label; step moves
    /// always change it.
    pub fn type_label(&self, c: Cell) -> u8 {
        self.type_label[self.index(c) as usize]
    }

    /// Cell-index permutation for a transform, if the transform maps this
    /// board onto itself.
    pub fn perm(&self, t: Transform) -> Option<&[u16]> {
        let slot = match t {
            Transform::ReflectXY => 0,
            Transform::ReflectXminusY => 1,
            Transform::Rotate180 => 2,
        };
        self.perms[slot].as_deref()
    }

    /// Image of a set under a transform supported by this board.
    pub fn transform_set(&self, t: Transform, s: &CellSet) -> Option<CellSet> {
        self.perm(t).map(|p| s.map(p))
    }

    /// Display name of a cell: column letter plus row number counted from
    /// the top, e.g. `a1` for (0, height-1).
    pub fn cell_name(&self, c: Cell) -> String {
        format!("{}{}", (b'a' + c.x) as char, self.height - c.y)
    }

    /// Parse a display name; the cell must lie on the board.
    pub fn parse_cell(&self, s: &str) -> Result<Cell, BoardError> {
        let bad = || BoardError::BadCell(s.to_string());
        let mut chars = s.chars();
        let col = chars.next().ok_or_else(bad)?;
        if !col.is_ascii_lowercase() {
            return Err(bad());
        }
        let x = col as u8 - b'a';
        let row: u16 = chars.as_str().parse().map_err(|_| bad())?;
        if row == 0 || row > self.height as u16 {
            return Err(bad());
        }
        let c = Cell::new(x, self.height - row as u8);
        if !self.contains(c) {
            return Err(bad());
        }
        Ok(c)
    }

    /// Strict mask serialization: one line per row (top row first),
    /// `.` empty, `#` off-board, `B`/`R` base cells.
    pub fn to_ascii(&self) -> String {
        let mut out = String::new();
        for y in (0..self.height).rev() {
            for x in 0..self.width {
                let idx = self.index(Cell::new(x, y));
                out.push(if !self.cells.contains(idx) {
                    '#'
                } else if self.blue_base.contains(idx) {
                    'B'
                } else if self.red_base.contains(idx) {
                    'R'
                } else {
                    '.'
                });
            }
            out.push('\n');
        }
        out
    }

    /// Parse the `to_ascii` format. Lines must be equal length; blank lines
    /// and lines starting with `#` followed by a space are ignored.
    pub fn from_ascii(text: &str) -> Result<Board, BoardError> {
        let rows: Vec<&str> = text
            .lines()
            .map(str::trim_end)
            .filter(|l| !l.is_empty())
            .collect();
        if rows.is_empty() {
            return Err(BoardError::BadAscii(0, "empty grid".to_string()));
        }
        let width = rows[0].len();
        let height = rows.len();
        if width == 0 || width > 26 || width * height > 256 || height > 255 {
            return Err(BoardError::BadDimensions(width.min(255) as u8, height.min(255) as u8));
        }
        let mut cells = CellSet::EMPTY;
        let mut blue = CellSet::EMPTY;
        let mut red = CellSet::EMPTY;
        for (li, line) in rows.iter().enumerate() {
            if line.len() != width {
                return Err(BoardError::BadAscii(li + 1, "ragged line".to_string()));
            }
            let y = (height - 1 - li) as u16;
            for (x, ch) in line.chars().enumerate() {
                let idx = y * width as u16 + x as u16;
                match ch {
                    '#' => continue,
                    '.' => cells.insert(idx),
                    'B' => {
                        cells.insert(idx);
                        blue.insert(idx);
                    }
                    'R' => {
                        cells.insert(idx);
                        red.insert(idx);
                    }
                    other => {
                        return Err(BoardError::BadAscii(li + 1, format!("bad char {other:?}")))
                    }
                }
            }
        }
        Board::new(width as u8, height as u8, cells, blue, red)
    }

    /// Human-readable rendering with row/column labels. Armies draw as
    /// `B`/`R`, unoccupied base cells as `b`/`r`.
    pub fn render(&self, blue: &CellSet, red: &CellSet) -> String {
        let mut out = String::new();
        for y in (0..self.height).rev() {
            let row = self.height - y;
            out.push_str(&format!("{row:>2} "));
            for x in 0..self.width {
                let idx = self.index(Cell::new(x, y));
                let glyph = if !self.cells.contains(idx) {
                    '#'
                } else if blue.contains(idx) {
                    'B'
                } else if red.contains(idx) {
                    'R'
                } else if self.blue_base.contains(idx) {
                    'b'
                } else if self.red_base.contains(idx) {
                    'r'
                } else {
                    '.'
                };
                out.push(glyph);
                if x + 1 < self.width {
                    out.push(' ');
                }
            }
            out.push('\n');
        }
        out.push_str("   ");
        for x in 0..self.width {
            out.push((b'a' + x) as char);
            if x + 1 < self.width {
                out.push(' ');
            }
        }
        out.push('\n');
        out
    }
}

/// A shipped problem instance: board, rule set and the mirror transform
/// relating start to goal.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub board: Board,
    pub rules: RuleSet,
    /// Transform mapping the start army onto the goal army.
    pub mirror: Transform,
    /// True when start and goal are each setwise invariant under
    /// `ReflectXminusY`, enabling canonical dedup in prove searches.
    pub canonical_enabled: bool,
}

pub const PRESET_NAMES: [&str; 8] = [
    "cc10",
    "cc15",
    "cc6",
    "square4",
    "square9",
    "halma19",
    "grasshopper10",
    "checkers12",
];

impl Preset {
    /// Look up a shipped preset. `rules` of `None` selects the preset's
    /// customary rule set.
    pub fn make(name: &str, rules: Option<RuleSet>) -> Result<Preset, BoardError> {
        let (board, default_rules, mirror) = match name {
            "cc10" => (triangle_board(9, 4)?, RuleSet::SixMove, Transform::ReflectXY),
            "cc15" => (triangle_board(9, 5)?, RuleSet::SixMove, Transform::ReflectXY),
            "cc6" => (triangle_board(9, 3)?, RuleSet::SixMove, Transform::ReflectXY),
            "square4" => (square_board(9, 2)?, RuleSet::EightMove, Transform::ReflectXY),
            "square9" => (square_board(9, 3)?, RuleSet::EightMove, Transform::ReflectXY),
            "halma19" => (halma_board()?, RuleSet::EightMove, Transform::ReflectXY),
            "grasshopper10" => (triangle_board(8, 4)?, RuleSet::EightMove, Transform::ReflectXY),
            "checkers12" => (checkers_board()?, RuleSet::FourMove, Transform::Rotate180),
            _ => return Err(BoardError::UnknownPreset(name.to_string())),
        };
        Ok(Preset::from_board(name.to_string(), board, rules.unwrap_or(default_rules), mirror))
    }

    /// Wrap an explicit board (used for reduced test instances). The mirror
    /// must map blue base onto red base.
    pub fn from_board(name: String, board: Board, rules: RuleSet, mirror: Transform) -> Preset {
        debug_assert_eq!(
            board.transform_set(mirror, board.blue_base()),
            Some(*board.red_base())
        );
        let canonical_enabled = match board.perm(Transform::ReflectXminusY) {
            Some(p) => {
                board.blue_base().map(p) == *board.blue_base()
                    && board.red_base().map(p) == *board.red_base()
            }
            None => false,
        };
        Preset {
            name,
            board,
            rules,
            mirror,
            canonical_enabled,
        }
    }

    /// Transfer start army (the blue base).
    pub fn start(&self) -> &CellSet {
        self.board.blue_base()
    }

    /// Transfer goal army (the red base).
    pub fn goal(&self) -> &CellSet {
        self.board.red_base()
    }

    /// Initial game position: both armies on their own bases, blue to move.
    pub fn game_start(&self) -> GamePos {
        GamePos {
            blue: *self.board.blue_base(),
            red: *self.board.red_base(),
            to_move: Player::Blue,
        }
    }

    /// Image of an army under the preset's start/goal mirror.
    pub fn mirror_set(&self, s: &CellSet) -> CellSet {
        s.map(self.board.perm(self.mirror).expect("mirror supported by board"))
    }

    /// Canonical representative of an army under `ReflectXminusY`.
    ///
    /// Requires `canonical_enabled`; the instance must be symmetry-invariant
    /// for canonicalization to be sound.
    pub fn canonical_army(&self, a: &CellSet) -> CellSet {
        assert!(self.canonical_enabled, "instance is not symmetry-invariant");
        let p = self.board.perm(Transform::ReflectXminusY).unwrap();
        (*a).min(a.map(p))
    }

    /// Canonical representative of a game position under `ReflectXminusY`.
    pub fn canonical_game(&self, g: &GamePos) -> GamePos {
        assert!(self.canonical_enabled, "instance is not symmetry-invariant");
        let p = self.board.perm(Transform::ReflectXminusY).unwrap();
        let m = GamePos {
            blue: g.blue.map(p),
            red: g.red.map(p),
            to_move: g.to_move,
        };
        (*g).min(m)
    }
}

/// Corner triangle of side `side` (rows 1..=side, row r holding
/// `side + 1 - r` cells) on a `size x size` board; goal is its reflection.
fn triangle_board(size: u8, side: u8) -> Result<Board, BoardError> {
    let mut start: Vec<Cell> = Vec::new();
    for r in 1..=side {
        for x in 0..=(side - r) {
            start.push(Cell::new(x, size - r));
        }
    }
    rect_with_mirrored_base(size, size, &start)
}

/// Corner `side x side` square on a `size x size` board.
fn square_board(size: u8, side: u8) -> Result<Board, BoardError> {
    let mut start = Vec::new();
    for r in 1..=side {
        for x in 0..side {
            start.push(Cell::new(x, size - r));
        }
    }
    rect_with_mirrored_base(size, size, &start)
}

/// The 19-man Halma corner on a 16x16 board: column heights 5,5,4,3,2.
fn halma_board() -> Result<Board, BoardError> {
    let mut start = Vec::new();
    for (x, rows) in [5u8, 5, 4, 3, 2].into_iter().enumerate() {
        for r in 1..=rows {
            start.push(Cell::new(x as u8, 16 - r));
        }
    }
    rect_with_mirrored_base(16, 16, &start)
}

fn rect_with_mirrored_base(width: u8, height: u8, start: &[Cell]) -> Result<Board, BoardError> {
    let mut blue = CellSet::EMPTY;
    let mut red = CellSet::EMPTY;
    for &c in start {
        blue.insert(c.y as u16 * width as u16 + c.x as u16);
        let m = Transform::ReflectXY.map_cell(c, width, height);
        red.insert(m.y as u16 * width as u16 + m.x as u16);
    }
    Board::rect(width, height, blue, red)
}

/// The 32 playable squares of a checkers board, re-latticed so diagonal
/// checkers moves become orthogonal moves: dark square `(c, r)` (0-based,
/// `c + r` even, row 0 nearest the moving player) maps to
/// `(u, v) = ((c + r) / 2, (r - c) / 2 + 3)` on an 8x7 grid.
///
/// Start is the image of checkers rows 0-2, goal of rows 5-7; the goal is
/// `Rotate180` of the start (the diamond has no diagonal mirror symmetry).
fn checkers_board() -> Result<Board, BoardError> {
    let (width, height) = (8u8, 7u8);
    let mut cells = CellSet::EMPTY;
    let mut blue = CellSet::EMPTY;
    let mut red = CellSet::EMPTY;
    for c in 0..8i16 {
        for r in 0..8i16 {
            if (c + r) % 2 != 0 {
                continue;
            }
            let (u, v) = ((c + r) / 2, (r - c) / 2 + 3);
            let idx = (v * width as i16 + u) as u16;
            cells.insert(idx);
            if r <= 2 {
                blue.insert(idx);
            } else if r >= 5 {
                red.insert(idx);
            }
        }
    }
    Board::new(width, height, cells, blue, red)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells_by_name(board: &Board, names: &[&str]) -> CellSet {
        CellSet::from_indices(
            names
                .iter()
                .map(|n| board.index(board.parse_cell(n).unwrap())),
        )
    }

    #[test]
    fn cell_names_round_trip() {
        let p = Preset::make("cc10", None).unwrap();
        let b = &p.board;
        assert_eq!(b.parse_cell("a1").unwrap(), Cell::new(0, 8));
        assert_eq!(b.parse_cell("i9").unwrap(), Cell::new(8, 0));
        assert_eq!(b.parse_cell("e5").unwrap(), Cell::new(4, 4));
        for idx in b.cells().iter() {
            let c = b.cell(idx);
            assert_eq!(b.parse_cell(&b.cell_name(c)).unwrap(), c);
        }
        assert!(b.parse_cell("j1").is_err());
        assert!(b.parse_cell("a0").is_err());
        assert!(b.parse_cell("a10").is_err());
    }

    #[test]
    fn cc10_start_and_goal_cells() {
        let p = Preset::make("cc10", None).unwrap();
        let start = cells_by_name(
            &p.board,
            &["a1", "b1", "c1", "d1", "a2", "b2", "c2", "a3", "b3", "a4"],
        );
        assert_eq!(*p.start(), start);
        let goal = cells_by_name(
            &p.board,
            &["f9", "g9", "h9", "i9", "g8", "h8", "i8", "h7", "i7", "i6"],
        );
        assert_eq!(*p.goal(), goal);
    }

    #[test]
    fn preset_sizes_and_membership() {
        let cc15 = Preset::make("cc15", None).unwrap();
        assert_eq!(cc15.start().len(), 15);
        for n in ["e1", "d2", "c3", "b4", "a5"] {
            assert!(cc15.start().contains(cc15.board.index(cc15.board.parse_cell(n).unwrap())));
        }
        let halma = Preset::make("halma19", None).unwrap();
        assert_eq!(halma.start().len(), 19);
        for n in ["e2", "c4", "a5", "b5"] {
            assert!(halma.start().contains(halma.board.index(halma.board.parse_cell(n).unwrap())));
        }
        assert_eq!(Preset::make("cc6", None).unwrap().start().len(), 6);
        assert_eq!(Preset::make("square4", None).unwrap().start().len(), 4);
        assert_eq!(Preset::make("square9", None).unwrap().start().len(), 9);
        assert_eq!(Preset::make("grasshopper10", None).unwrap().start().len(), 10);
        let ck = Preset::make("checkers12", None).unwrap();
        assert_eq!(ck.start().len(), 12);
        assert_eq!(ck.board.cell_count(), 32);
        assert!(Preset::make("cc11", None).is_err());
    }

    #[test]
    fn transforms_match_examples() {
        let p = Preset::make("cc10", None).unwrap();
        let b = &p.board;
        let map = |t: Transform, name: &str| {
            b.cell_name(t.map_cell(b.parse_cell(name).unwrap(), 9, 9))
        };
        assert_eq!(map(Transform::ReflectXY, "a1"), "i9");
        assert_eq!(map(Transform::ReflectXminusY, "b1"), "a2");
        assert_eq!(map(Transform::Rotate180, "a1"), "i9");
        assert_eq!(map(Transform::Rotate180, "b1"), "h9");
    }

    #[test]
    fn transforms_are_involutions() {
        for name in PRESET_NAMES {
            let p = Preset::make(name, None).unwrap();
            let b = &p.board;
            for t in [
                Transform::ReflectXY,
                Transform::ReflectXminusY,
                Transform::Rotate180,
            ] {
                let Some(perm) = b.perm(t) else { continue };
                for idx in b.cells().iter() {
                    assert_eq!(perm[perm[idx as usize] as usize], idx);
                }
            }
        }
    }

    #[test]
    fn goal_is_mirror_of_start_for_all_presets() {
        for name in PRESET_NAMES {
            let p = Preset::make(name, None).unwrap();
            assert_eq!(p.mirror_set(p.start()), *p.goal(), "{name}");
            if name == "checkers12" {
                assert_eq!(p.mirror, Transform::Rotate180);
                assert!(p.board.perm(Transform::ReflectXY).is_none());
                assert!(!p.canonical_enabled);
            } else {
                assert_eq!(p.mirror, Transform::ReflectXY);
                assert!(p.canonical_enabled, "{name}");
            }
        }
    }

    #[test]
    fn start_invariant_under_anti_reflection() {
        for name in PRESET_NAMES {
            if name == "checkers12" {
                continue;
            }
            let p = Preset::make(name, None).unwrap();
            let perm = p.board.perm(Transform::ReflectXminusY).unwrap();
            assert_eq!(p.start().map(perm), *p.start(), "{name}");
            assert_eq!(p.goal().map(perm), *p.goal(), "{name}");
        }
    }

    #[test]
    fn type_labels_match_census_rows() {
        let p = Preset::make("cc10", None).unwrap();
        let b = &p.board;
        assert_eq!(
            b.type_label(b.parse_cell("a1").unwrap()),
            b.type_label(b.parse_cell("c1").unwrap())
        );
        // d1 is type 1 and d2 type 3: the opening step converts 1 -> 3.
        assert_eq!(b.type_label(b.parse_cell("d1").unwrap()), 1);
        assert_eq!(b.type_label(b.parse_cell("d2").unwrap()), 3);
        let census = |s: &CellSet| {
            let mut c = [0u32; 4];
            for idx in s.iter() {
                c[b.type_label(b.cell(idx)) as usize] += 1;
            }
            c
        };
        assert_eq!(census(p.start()), [3, 3, 3, 1]);
        assert_eq!(census(p.goal()), [3, 3, 3, 1]);

        let halma = Preset::make("halma19", None).unwrap();
        let hb = &halma.board;
        let census = |s: &CellSet| {
            let mut c = [0u32; 4];
            for idx in s.iter() {
                c[hb.type_label(hb.cell(idx)) as usize] += 1;
            }
            c
        };
        assert_eq!(census(halma.start()), [6, 5, 5, 3]);
        assert_eq!(census(halma.goal()), [3, 5, 5, 6]);
    }

    #[test]
    fn checkers_board_shape() {
        let p = Preset::make("checkers12", None).unwrap();
        let b = &p.board;
        assert_eq!((b.width(), b.height()), (8, 7));
        // Diamond row widths 2,4,6,8,6,4,2 top to bottom.
        let widths: Vec<u32> = (0..7)
            .map(|y| (0..8).filter(|&x| b.contains(Cell::new(x, y))).count() as u32)
            .collect();
        assert_eq!(widths, vec![2, 4, 6, 8, 6, 4, 2]);
        assert_eq!(
            p.board.transform_set(Transform::Rotate180, p.start()).unwrap(),
            *p.goal()
        );
    }

    #[test]
    fn canonical_is_idempotent_and_fixes_symmetric_sets() {
        let p = Preset::make("cc10", None).unwrap();
        assert_eq!(p.canonical_army(p.start()), *p.start());
        let g = p.game_start();
        assert_eq!(p.canonical_game(&g), g);
        let moved = {
            let mut a = *p.start();
            a.remove(p.board.index(p.board.parse_cell("d1").unwrap()));
            a.insert(p.board.index(p.board.parse_cell("d2").unwrap()));
            a
        };
        let c = p.canonical_army(&moved);
        assert_eq!(p.canonical_army(&c), c);
        // The mirror image of d1-d2 is a4-b4; both canonicalize identically.
        let mirrored = {
            let mut a = *p.start();
            a.remove(p.board.index(p.board.parse_cell("a4").unwrap()));
            a.insert(p.board.index(p.board.parse_cell("b4").unwrap()));
            a
        };
        assert_eq!(p.canonical_army(&mirrored), c);
    }

    #[test]
    fn ascii_round_trip() {
        for name in PRESET_NAMES {
            let p = Preset::make(name, None).unwrap();
            let text = p.board.to_ascii();
            let back = Board::from_ascii(&text).unwrap();
            assert_eq!(back.cells(), p.board.cells());
            assert_eq!(back.blue_base(), p.board.blue_base());
            assert_eq!(back.red_base(), p.board.red_base());
        }
    }

    #[test]
    fn board_validation_errors() {
        let mut base = CellSet::EMPTY;
        base.insert(0);
        assert_eq!(
            Board::rect(3, 3, base, base).unwrap_err(),
            BoardError::BasesOverlap
        );
        let mut other = CellSet::EMPTY;
        other.insert(1);
        other.insert(2);
        assert_eq!(
            Board::rect(3, 3, base, other).unwrap_err(),
            BoardError::BaseSizeMismatch
        );
        assert!(Board::rect(26, 26, CellSet::EMPTY, CellSet::EMPTY).is_err());
    }

    #[test]
    fn norms_and_ell() {
        assert_eq!(RuleSet::FourMove.norm(3, -2), 5);
        assert_eq!(RuleSet::EightMove.norm(3, -2), 3);
        assert_eq!(RuleSet::SixMove.norm(3, 2), 3);
        assert_eq!(RuleSet::SixMove.norm(3, -2), 5);
        assert_eq!(RuleSet::SixMove.norm(0, -7), 7);
        assert_eq!(RuleSet::FourMove.ell(), 1);
        assert_eq!(RuleSet::SixMove.ell(), 1);
        assert_eq!(RuleSet::EightMove.ell(), 2);
    }
}
