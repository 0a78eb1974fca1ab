//! Scalar measures on cells and armies: rule-set distances, centroid,
//! symmetry counts, center of mass, average speed, type balance, and
//! state-space sizes.

use num::bigint::BigUint;
use num::rational::Ratio;
use num::One;
use thiserror::Error;

use crate::board::{Board, Cell, CellSet, RuleSet, Transform};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("armies have different sizes ({0} vs {1})")]
    SizeMismatch(u32, u32),
    #[error("move count must be positive")]
    ZeroMoves,
}

/// Rule-set distance between two cells.
pub fn distance(rules: RuleSet, a: Cell, b: Cell) -> i64 {
    rules.norm(b.x as i64 - a.x as i64, b.y as i64 - a.y as i64)
}

/// Minimum rule-set distance over all pairs drawn from two nonempty sets.
/// Allocation-free: called per node inside search bounds.
pub fn army_distance(board: &Board, rules: RuleSet, a: &CellSet, b: &CellSet) -> i64 {
    assert!(!a.is_empty() && !b.is_empty(), "army_distance on empty set");
    let mut best = i64::MAX;
    for ia in a.iter() {
        let ca = board.cell(ia);
        for ib in b.iter() {
            let cb = board.cell(ib);
            best = best.min(distance(rules, ca, cb));
        }
    }
    best
}

/// Sum of x - y over the set. Empty set scores zero.
pub fn centroid(board: &Board, a: &CellSet) -> i64 {
    a.iter().map(|i| board.cell_centroid(i)).sum()
}

/// Number of men whose image under `t` is also in the army.
///
/// Equals the army size exactly when the army is setwise invariant.
/// Panics if the board does not support `t`.
pub fn army_symmetry(board: &Board, t: Transform, a: &CellSet) -> u32 {
    let perm = board.perm(t).expect("transform supported by board");
    a.iter().filter(|&i| a.contains(perm[i as usize])).count() as u32
}

/// Exact mean position of a nonempty army.
pub fn center_of_mass(board: &Board, a: &CellSet) -> (Ratio<i64>, Ratio<i64>) {
    assert!(!a.is_empty(), "center_of_mass on empty set");
    let (mut sx, mut sy) = (0i64, 0i64);
    for i in a.iter() {
        let c = board.cell(i);
        sx += c.x as i64;
        sy += c.y as i64;
    }
    let n = a.len() as i64;
    (Ratio::new(sx, n), Ratio::new(sy, n))
}

/// Average speed of a transfer from army `a` to army `b` in `moves` moves:
/// the rule-set norm of the center-of-mass displacement divided by the move
/// count. Exact because the norms are positively homogeneous, so the norm of
/// a rational vector is the integer norm of the numerators over the common
/// denominator.
pub fn speed(
    board: &Board,
    rules: RuleSet,
    a: &CellSet,
    b: &CellSet,
    moves: i64,
) -> Result<Ratio<i64>, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::SizeMismatch(a.len(), b.len()));
    }
    if moves <= 0 {
        return Err(MetricsError::ZeroMoves);
    }
    assert!(!a.is_empty(), "speed on empty set");
    let sum = |s: &CellSet| {
        let (mut sx, mut sy) = (0i64, 0i64);
        for i in s.iter() {
            let c = board.cell(i);
            sx += c.x as i64;
            sy += c.y as i64;
        }
        (sx, sy)
    };
    let (ax, ay) = sum(a);
    let (bx, by) = sum(b);
    let n = a.len() as i64;
    Ok(Ratio::new(rules.norm(bx - ax, by - ay), n * moves))
}

/// Count of men on each of the four cell types.
pub fn type_census(board: &Board, a: &CellSet) -> [u32; 4] {
    let mut census = [0u32; 4];
    for i in a.iter() {
        census[board.type_label(board.cell(i)) as usize] += 1;
    }
    census
}

/// Spread of a type census: max count minus min count.
pub fn balance_deviation(census: [u32; 4]) -> u32 {
    census.iter().max().unwrap() - census.iter().min().unwrap()
}

/// A census is balanced when no two types differ by more than one.
pub fn is_balanced(census: [u32; 4]) -> bool {
    balance_deviation(census) <= 1
}

/// Number of distinct placements of equal armies on `cells` board cells:
/// cells!/(s!s!(cells-2s)!) for two armies of `army` men each, or the
/// binomial coefficient for a single army.
pub fn state_space_size(cells: u64, army: u64, two_armies: bool) -> BigUint {
    let need = if two_armies { 2 * army } else { army };
    assert!(need <= cells, "armies exceed board");
    let mut count = binomial(cells, army);
    if two_armies {
        count *= binomial(cells - army, army);
    }
    count
}

fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}
