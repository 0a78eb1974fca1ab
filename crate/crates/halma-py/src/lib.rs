//! Python bindings over the core toolkit: preset lookup, closed-form
//! bounds, solution verification, board rendering, and transfer search.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use halma_core::board::{Preset, RuleSet, PRESET_NAMES};
use halma_core::bounds::{game_lower_bound, transfer_lower_bound};
use halma_core::metrics::state_space_size;
use halma_core::movegen::MemoryBudget;
use halma_core::notation::{
    parse_solution, path_token, render_position, transfer_paths, verify_solution, SolutionKind,
};
use halma_core::transfer::{search_transfer, TransferConfig, TransferMode, TransferVerdict};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn preset_of(name: &str, rules: Option<&str>) -> PyResult<Preset> {
    let rules = rules.map(RuleSet::from_arg).transpose().map_err(value_err)?;
    Preset::make(name, rules).map_err(value_err)
}

/// Names of the shipped board presets.
#[pyfunction]
fn preset_names() -> Vec<&'static str> {
    PRESET_NAMES.to_vec()
}

/// Closed-form lower bounds and the exact two-army position count.
#[pyfunction]
#[pyo3(signature = (preset, rules=None))]
fn bounds<'py>(py: Python<'py>, preset: &str, rules: Option<&str>) -> PyResult<Bound<'py, PyDict>> {
    let p = preset_of(preset, rules)?;
    let b = &p.board;
    let d = PyDict::new(py);
    d.set_item(
        "gameLower",
        game_lower_bound(b, p.rules, b.blue_base(), b.red_base()),
    )?;
    d.set_item(
        "transferLower",
        transfer_lower_bound(b, p.rules, p.start(), p.goal()),
    )?;
    d.set_item(
        "stateSpace",
        state_space_size(b.cell_count() as u64, p.start().len() as u64, true),
    )?;
    Ok(d)
}

/// ASCII diagram of the starting position.
#[pyfunction]
#[pyo3(signature = (preset, rules=None))]
fn render(preset: &str, rules: Option<&str>) -> PyResult<String> {
    let p = preset_of(preset, rules)?;
    Ok(render_position(&p.board, p.board.blue_base(), p.board.red_base()))
}

/// Replay a solution text and report the outcome. `kind` of "game" or
/// "transfer" overrides the winner-tag heuristic.
#[pyfunction]
#[pyo3(signature = (preset, text, rules=None, kind=None))]
fn verify<'py>(
    py: Python<'py>,
    preset: &str,
    text: &str,
    rules: Option<&str>,
    kind: Option<&str>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = preset_of(preset, rules)?;
    let s = parse_solution(text).map_err(value_err)?;
    let kind = match kind {
        None => None,
        Some("game") => Some(SolutionKind::Game),
        Some("transfer") => Some(SolutionKind::Transfer),
        Some(other) => return Err(value_err(format!("unknown kind {other:?}"))),
    };
    let v = verify_solution(&p, &s, kind).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("kind", v.kind)?;
    d.set_item("legal", v.legal)?;
    d.set_item("error", v.error)?;
    d.set_item("moves", v.move_count)?;
    d.set_item("goalReached", v.goal_reached)?;
    d.set_item("winner", v.winner)?;
    d.set_item("winAt", v.win_at)?;
    d.set_item("palindromic", v.palindromic)?;
    d.set_item("steps", (v.steps.blue, v.steps.red))?;
    d.set_item("jumps", (v.jumps.blue, v.jumps.red))?;
    Ok(d)
}

/// Army transfer search. Find mode scans up to `length` moves; prove mode
/// decides exactly `length`. Returns a dict with the verdict, the solved
/// length, the move tokens of a witness, and the palindrome count when
/// enumerating.
#[pyfunction]
#[pyo3(signature = (
    preset, length, rules=None, prove=false, palindrome=false,
    enumerate=false, jumps_only=false, beam=None, beta=0, memory_cap=None,
))]
#[allow(clippy::too_many_arguments)]
fn transfer<'py>(
    py: Python<'py>,
    preset: &str,
    length: u32,
    rules: Option<&str>,
    prove: bool,
    palindrome: bool,
    enumerate: bool,
    jumps_only: bool,
    beam: Option<usize>,
    beta: i64,
    memory_cap: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = preset_of(preset, rules)?;
    let mode = match (palindrome, prove) {
        (false, false) => TransferMode::Find,
        (false, true) => TransferMode::ProveNone,
        (true, false) => TransferMode::PalindromeFind,
        (true, true) => TransferMode::PalindromeProve,
    };
    let cfg = TransferConfig {
        preset: &p,
        target: length,
        mode,
        jumps_only,
        beam_width: beam,
        beta,
        strict_middle: true,
        enumerate,
        budget: memory_cap.map_or_else(MemoryBudget::unlimited, MemoryBudget::bytes),
    };
    let outcome = py
        .allow_threads(|| search_transfer(cfg))
        .map_err(value_err)?;
    let d = PyDict::new(py);
    let tokens = |moves: &[halma_core::movegen::Move]| {
        transfer_paths(&p, moves)
            .iter()
            .map(|path| path_token(&p.board, path))
            .collect::<Vec<_>>()
    };
    match outcome.verdict {
        TransferVerdict::Found { length, moves } => {
            d.set_item("verdict", "found")?;
            d.set_item("length", length)?;
            d.set_item("solution", tokens(&moves))?;
        }
        TransferVerdict::NoneAt { length } => {
            d.set_item("verdict", "none")?;
            d.set_item("length", length)?;
        }
        TransferVerdict::BeamMiss { length } => {
            d.set_item("verdict", "beam-miss")?;
            d.set_item("length", length)?;
        }
        TransferVerdict::Palindromes { count, witnesses } => {
            d.set_item("verdict", "palindromes")?;
            d.set_item("count", count)?;
            if let Some(moves) = witnesses.first() {
                d.set_item("solution", tokens(moves))?;
            }
        }
    }
    Ok(d)
}

#[pymodule]
fn halma_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(preset_names, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(transfer, m)?)?;
    Ok(())
}
