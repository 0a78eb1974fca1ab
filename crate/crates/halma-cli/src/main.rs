//! `halma`: searches, bounds, verification, and rendering for Halma-family
//! puzzles. Reports are deterministic for a fixed configuration and build;
//! only runtimeMs varies.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use flate2::write::GzEncoder;
use flate2::Compression;

use halma_core::board::{CellSet, Preset, RuleSet, Transform, PRESET_NAMES};
use halma_core::bounds::BoundReport;
use halma_core::game::{search_game, Filters, GameConfig, GameError, GameMode, GameVerdict};
use halma_core::metrics::state_space_size;
use halma_core::movegen::MemoryBudget;
use halma_core::notation::{
    game_paths, parse_solution, path_token, render_position, transfer_paths, verify_solution,
    Report, ReportLevel, SolutionKind,
};
use halma_core::transfer::{
    search_transfer, TransferConfig, TransferError, TransferMode, TransferVerdict,
};

const EXIT_OK: u8 = 0;
/// Usage, parse, or replay error.
const EXIT_USAGE: u8 = 1;
/// Search ended without a definitive verdict (resource cap or beam miss).
const EXIT_INCONCLUSIVE: u8 = 2;

/// Shortest-game and army-transfer searches on Halma-family boards.
#[derive(Parser)]
#[command(name = "halma", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search cooperative games: find a shortest win, prove none, or count
    Game(GameArgs),
    /// Search army transfers: find, prove, or count palindromes
    Transfer(TransferArgs),
    /// Closed-form lower bounds and the position-space count
    Bound(BoundArgs),
    /// Replay a solution file and check every move
    Verify(VerifyArgs),
    /// Draw a preset's starting position
    Render(RenderArgs),
    /// List the shipped presets
    Presets,
}

#[derive(Args)]
struct Common {
    /// Preset name (see `halma presets`)
    #[arg(long)]
    preset: String,
    /// Move rules override: 4, 6, or 8
    #[arg(long)]
    rules: Option<String>,
    /// Report format: text or json
    #[arg(long, default_value = "text", value_parser = ["text", "json"])]
    format: String,
    /// Write the report to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchCommon {
    /// Worker thread count
    #[arg(long, env = "HALMA_THREADS")]
    threads: Option<usize>,
    /// Memory cap: bytes, or with a k/m/g suffix
    #[arg(long, env = "HALMA_MEMORY_CAP", default_value = "8g")]
    memory_cap: String,
    /// Write a gzip checkpoint of the last sealed level (prove runs)
    #[arg(long, value_name = "PATH")]
    checkpoint: Option<PathBuf>,
}

#[derive(Args)]
struct GameArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchCommon,
    /// Exhaust every length up to the target; a none verdict is a proof
    #[arg(long)]
    prove: bool,
    /// Stop at the first, hence shortest, win within the target (default)
    #[arg(long)]
    find: bool,
    /// Count winning move sequences of exactly the target length
    #[arg(long)]
    count: bool,
    /// Largest game length to search
    #[arg(long, value_name = "N")]
    max_length: Option<u32>,
    /// Exact game length (count mode)
    #[arg(long, value_name = "N", conflicts_with = "max_length")]
    length: Option<u32>,
    /// Find-mode heuristics by id (1, 4, 5), comma separated; these can
    /// miss solutions, so prove and count runs reject them
    #[arg(long, value_delimiter = ',', value_name = "IDS")]
    filters: Vec<u8>,
}

#[derive(Args)]
struct TransferArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    search: SearchCommon,
    /// Decide the exact target length with a certified two-sided search
    #[arg(long)]
    prove: bool,
    /// Search forward up to the target length (default)
    #[arg(long)]
    find: bool,
    /// Restrict to palindromic solutions
    #[arg(long)]
    palindrome: bool,
    /// Count palindromic solutions instead of stopping at one
    #[arg(long, requires = "palindrome")]
    enumerate: bool,
    /// Jump moves only
    #[arg(long)]
    jumps_only: bool,
    /// Target length in moves
    #[arg(long, value_name = "N")]
    length: Option<u32>,
    /// Alias of --length
    #[arg(long, value_name = "N", conflicts_with = "length")]
    max_length: Option<u32>,
    /// Keep the strongest M positions per level (find mode only)
    #[arg(long, value_name = "M")]
    beam: Option<usize>,
    /// Symmetry weight in the beam score c(A) + beta * sym(A)
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    beta: i64,
    /// Accept any middle move reaching the mirrored position instead of
    /// requiring a self-mirrored witness path
    #[arg(long)]
    weak_middle: bool,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Solution file (see corpus/README.md for the grammar)
    #[arg(value_name = "FILE")]
    file: PathBuf,
    /// Replay as a game or a transfer; default follows the winner tag
    #[arg(long, value_parser = ["game", "transfer"])]
    kind: Option<String>,
}

#[derive(Args)]
struct RenderArgs {
    /// Preset name (see `halma presets`)
    #[arg(long)]
    preset: String,
    /// Move rules override: 4, 6, or 8
    #[arg(long)]
    rules: Option<String>,
    /// Leave the armies off to show the base outlines
    #[arg(long)]
    empty: bool,
    /// Write the diagram to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests arrive as errors; keep them exit 0.
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.cmd {
        Cmd::Game(args) => run_game(args),
        Cmd::Transfer(args) => run_transfer(args),
        Cmd::Bound(args) => run_bound(args),
        Cmd::Verify(args) => run_verify(args),
        Cmd::Render(args) => run_render(args),
        Cmd::Presets => run_presets(),
    };
    ExitCode::from(code.unwrap_or_else(|msg| {
        eprintln!("error: {msg}");
        EXIT_USAGE
    }))
}

fn make_preset(name: &str, rules: Option<&str>) -> Result<Preset, String> {
    let rules = match rules {
        Some(r) => Some(RuleSet::from_arg(r).map_err(|e| e.to_string())?),
        None => None,
    };
    Preset::make(name, rules).map_err(|e| e.to_string())
}

fn parse_memory(s: &str) -> Result<u64, String> {
    let t = s.trim().to_ascii_lowercase();
    let t = t.strip_suffix("ib").or_else(|| t.strip_suffix('b')).unwrap_or(&t);
    let (digits, mult) = match t.as_bytes().last() {
        Some(b'k') => (&t[..t.len() - 1], 1u64 << 10),
        Some(b'm') => (&t[..t.len() - 1], 1 << 20),
        Some(b'g') => (&t[..t.len() - 1], 1 << 30),
        Some(b't') => (&t[..t.len() - 1], 1 << 40),
        _ => (&t[..], 1),
    };
    let n: u64 = digits
        .trim()
        .parse()
        .map_err(|_| format!("bad memory cap {s:?}"))?;
    n.checked_mul(mult).ok_or_else(|| format!("memory cap {s:?} overflows"))
}

fn init_threads(n: Option<usize>) -> usize {
    if let Some(n) = n.filter(|&n| n > 0) {
        // Errors mean the global pool already exists; keep its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    rayon::current_num_threads()
}

fn mirror_label(t: Transform) -> &'static str {
    match t {
        Transform::ReflectXY => "diagonal",
        Transform::ReflectXminusY => "antidiagonal",
        Transform::Rotate180 => "half-turn",
    }
}

/// Emit the finished report and map the verdict to an exit code.
fn emit(mut report: Report, t0: Instant, threads: usize, common: &Common, code: u8) -> Result<u8, String> {
    report.runtime_ms = t0.elapsed().as_millis() as u64;
    report.threads = threads;
    let text = if common.format == "json" {
        let mut s = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
        s.push('\n');
        s
    } else {
        report_text(&report)
    };
    write_out(common.out.as_deref(), &text)?;
    Ok(code)
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_text(r: &Report) -> String {
    let mut s = String::new();
    s.push_str(&format!("problem: {}\n", r.problem));
    s.push_str(&format!("board: {} ({} rules)\n", r.board, r.rules));
    s.push_str(&format!("mode: {}\n", r.mode));
    s.push_str(&format!("verdict: {}\n", r.verdict));
    if let Some(len) = r.length {
        s.push_str(&format!("length: {len}\n"));
    }
    if !r.solution.is_empty() {
        s.push_str(&format!("solution: {}\n", r.solution.join(", ")));
    }
    if !r.levels.is_empty() {
        s.push_str("levels (depth size cmax pruned):\n");
        for l in &r.levels {
            let cmax = l.cmax.map_or("-".to_string(), |c| c.to_string());
            s.push_str(&format!("  {:>3} {:>12} {:>6} {:>12}\n", l.depth, l.size, cmax, l.pruned));
        }
    }
    if !r.cmax_trail.is_empty() {
        s.push_str("centroid ceiling trail:\n");
        for c in &r.cmax_trail {
            let tag = if c.self_consistent { "certified" } else { "restart" };
            s.push_str(&format!("  n={} value={} {}\n", c.n, c.value, tag));
        }
    }
    for (k, v) in &r.bounds {
        s.push_str(&format!("{k}: {v}\n"));
    }
    s.push_str(&format!("runtime: {} ms, threads: {}\n", r.runtime_ms, r.threads));
    s
}

/// Checkpoint: gzip of a "depth=N count=K words=W" header line plus the
/// positions as little-endian u64 words, W words each.
fn write_checkpoint(
    path: &Path,
    depth: u32,
    words_per: usize,
    positions: impl ExactSizeIterator<Item = [u64; 4]> + Clone,
) -> Result<(), String> {
    let err = |e: std::io::Error| format!("{}: {e}", path.display());
    let file = fs::File::create(path).map_err(err)?;
    let mut gz = GzEncoder::new(file, Compression::default());
    let count = if words_per == 8 {
        positions.len() / 2
    } else {
        positions.len()
    };
    writeln!(gz, "depth={depth} count={count} words={words_per}").map_err(err)?;
    for words in positions {
        for w in words {
            gz.write_all(&w.to_le_bytes()).map_err(err)?;
        }
    }
    gz.finish().map_err(err)?;
    Ok(())
}

fn run_game(args: GameArgs) -> Result<u8, String> {
    let preset = make_preset(&args.common.preset, args.common.rules.as_deref())?;
    let mode = match (args.prove, args.find, args.count) {
        (true, false, false) => GameMode::ProveNone,
        (false, _, false) => GameMode::FindOne,
        (false, false, true) => GameMode::CountAll,
        _ => return Err("pick one of --prove, --find, --count".into()),
    };
    let target = args
        .max_length
        .or(args.length)
        .ok_or("a target length is required (--max-length or --length)")?;
    let filters = Filters::from_ids(&args.filters).map_err(|e| e.to_string())?;
    if filters.any() && mode != GameMode::FindOne {
        return Err("filters can miss solutions; they apply to --find only".into());
    }
    let budget = MemoryBudget::bytes(parse_memory(&args.search.memory_cap)?);
    let threads = init_threads(args.search.threads);

    let mode_str = match mode {
        GameMode::ProveNone => "prove",
        GameMode::FindOne => "find",
        GameMode::CountAll => "count",
    };
    let t0 = Instant::now();
    let mut report = Report::new(
        &format!("{} game", args.common.preset),
        preset.rules,
        &preset.board,
        mode_str,
    );
    let outcome = match search_game(GameConfig {
        preset: &preset,
        target,
        mode,
        filters,
        budget,
    }) {
        Ok(o) => o,
        Err(GameError::Resource { error, levels }) => {
            report.levels = levels.iter().map(ReportLevel::from).collect();
            report.verdict = format!("inconclusive: {error}");
            return emit(report, t0, threads, &args.common, EXIT_INCONCLUSIVE);
        }
        Err(e) => return Err(e.to_string()),
    };

    report.levels = outcome.levels.iter().map(ReportLevel::from).collect();
    match outcome.verdict {
        GameVerdict::Found { length, winner, moves } => {
            report.length = Some(length);
            report.verdict = format!("found: {} wins in {} moves", winner.label(), length);
            let paths = game_paths(&preset, &moves);
            report.solution = paths.iter().map(|p| path_token(&preset.board, p)).collect();
        }
        GameVerdict::NoneWithin { target } => {
            report.verdict = format!("none within {target} moves");
        }
        GameVerdict::Count { sequences } => {
            report.length = Some(target);
            report.verdict = format!("{sequences} winning sequences");
        }
    }
    if let Some(cp) = &args.search.checkpoint {
        if let Some(last) = outcome.level_sets.last() {
            let depth = outcome.level_sets.len() as u32 - 1;
            let words = last
                .iter()
                .flat_map(|p| [p.blue.words(), p.red.words()])
                .collect::<Vec<_>>();
            write_checkpoint(cp, depth, 8, words.into_iter())?;
        }
    }
    emit(report, t0, threads, &args.common, EXIT_OK)
}

fn run_transfer(args: TransferArgs) -> Result<u8, String> {
    let preset = make_preset(&args.common.preset, args.common.rules.as_deref())?;
    if args.prove && args.find {
        return Err("pick one of --prove, --find".into());
    }
    let mode = match (args.palindrome, args.prove) {
        (false, false) => TransferMode::Find,
        (false, true) => TransferMode::ProveNone,
        (true, false) => TransferMode::PalindromeFind,
        (true, true) => TransferMode::PalindromeProve,
    };
    if args.prove && args.beam.is_some() {
        return Err("prove runs are exhaustive; clear --beam".into());
    }
    let target = args
        .length
        .or(args.max_length)
        .ok_or("a target length is required (--length)")?;
    let budget = MemoryBudget::bytes(parse_memory(&args.search.memory_cap)?);
    let threads = init_threads(args.search.threads);

    let mode_str = match mode {
        TransferMode::Find => "find",
        TransferMode::ProveNone => "prove",
        TransferMode::PalindromeFind => "palindrome-find",
        TransferMode::PalindromeProve => "palindrome-prove",
    };
    let t0 = Instant::now();
    let mut report = Report::new(
        &format!(
            "{} transfer{}",
            args.common.preset,
            if args.jumps_only { ", jumps only" } else { "" }
        ),
        preset.rules,
        &preset.board,
        mode_str,
    );
    let outcome = match search_transfer(TransferConfig {
        preset: &preset,
        target,
        mode,
        jumps_only: args.jumps_only,
        beam_width: args.beam,
        beta: args.beta,
        strict_middle: !args.weak_middle,
        enumerate: args.enumerate,
        budget,
    }) {
        Ok(o) => o,
        Err(TransferError::Resource { error, levels, cmax_trail }) => {
            report.levels = levels.iter().map(ReportLevel::from).collect();
            report.cmax_trail = cmax_trail;
            report.verdict = format!("inconclusive: {error}");
            return emit(report, t0, threads, &args.common, EXIT_INCONCLUSIVE);
        }
        Err(e) => return Err(e.to_string()),
    };

    report.levels = outcome.levels.iter().map(ReportLevel::from).collect();
    report.cmax_trail = outcome.cmax_trail;
    let mut code = EXIT_OK;
    match outcome.verdict {
        TransferVerdict::Found { length, moves } => {
            report.length = Some(length);
            report.verdict = format!("found: {length} moves");
            let paths = transfer_paths(&preset, &moves);
            report.solution = paths.iter().map(|p| path_token(&preset.board, p)).collect();
        }
        TransferVerdict::NoneAt { length } => {
            report.verdict = format!("none at {length} moves");
        }
        TransferVerdict::BeamMiss { length } => {
            report.verdict = format!("beam missed within {length} moves; not a nonexistence proof");
            code = EXIT_INCONCLUSIVE;
        }
        TransferVerdict::Palindromes { count, witnesses } => {
            report.verdict = format!(
                "{count} palindromic solution{}",
                if count == 1 { "" } else { "s" }
            );
            if let Some(moves) = witnesses.first() {
                report.length = Some(target);
                let paths = transfer_paths(&preset, moves);
                report.solution = paths.iter().map(|p| path_token(&preset.board, p)).collect();
            }
        }
    }
    if let Some(cp) = &args.search.checkpoint {
        if !outcome.last_level.is_empty() {
            let depth = report.levels.last().map_or(0, |l| l.depth);
            let words = outcome
                .last_level
                .iter()
                .map(CellSet::words)
                .collect::<Vec<_>>();
            write_checkpoint(cp, depth, 4, words.into_iter())?;
        }
    }
    emit(report, t0, threads, &args.common, code)
}

fn run_bound(args: BoundArgs) -> Result<u8, String> {
    let preset = make_preset(&args.common.preset, args.common.rules.as_deref())?;
    let board = &preset.board;
    let t0 = Instant::now();
    let mut report = Report::new(
        &format!("{} bounds", args.common.preset),
        preset.rules,
        board,
        "bound",
    );

    let game = BoundReport::game_lower(board, preset.rules, board.blue_base(), board.red_base());
    let transfer = BoundReport::transfer_lower(board, preset.rules, preset.start(), preset.goal());
    let step = BoundReport::centroid_step(board, preset.rules, preset.start());
    let states = state_space_size(board.cell_count() as u64, preset.start().len() as u64, true);
    report.verdict = format!(
        "gameLower {}, transferLower {}, states {}",
        game.value,
        transfer.value,
        approx(&states.to_string())
    );
    let to_json = |b: &BoundReport| serde_json::to_value(b).expect("bound serializes");
    report.bounds.insert("gameLowerBound".into(), to_json(&game));
    report.bounds.insert("transferLowerBound".into(), to_json(&transfer));
    report.bounds.insert("centroidStepBound".into(), to_json(&step));
    report.bounds.insert("stateSpaceSize".into(), states.to_string().into());
    report
        .bounds
        .insert("stateSpaceApprox".into(), approx(&states.to_string()).into());
    emit(report, t0, 1, &args.common, EXIT_OK)
}

/// "867049...383" -> "8.67e23".
fn approx(digits: &str) -> String {
    let mut it = digits.chars();
    let head = it.next().unwrap();
    let tail: String = it.take(2).collect();
    format!("{head}.{tail}e{}", digits.len() - 1)
}

fn run_verify(args: VerifyArgs) -> Result<u8, String> {
    let preset = make_preset(&args.common.preset, args.common.rules.as_deref())?;
    let text = fs::read_to_string(&args.file)
        .map_err(|e| format!("{}: {e}", args.file.display()))?;
    let t0 = Instant::now();
    let solution = parse_solution(&text).map_err(|e| e.to_string())?;
    let kind = args.kind.as_deref().map(|k| match k {
        "game" => SolutionKind::Game,
        _ => SolutionKind::Transfer,
    });
    let v = verify_solution(&preset, &solution, kind).map_err(|e| e.to_string())?;

    let mut report = Report::new(
        &format!("{} {}", args.common.preset, v.kind),
        preset.rules,
        &preset.board,
        "verify",
    );
    report.length = Some(v.move_count);
    report.verdict = if v.legal {
        let mut parts = vec!["legal".to_string()];
        parts.push(if v.goal_reached {
            "goal reached".into()
        } else {
            "goal not reached".into()
        });
        if let (Some(w), Some(at)) = (&v.winner, v.win_at) {
            parts.push(format!("{w} wins at move {at}"));
        }
        if v.palindromic {
            parts.push("palindromic".into());
        }
        parts.push(format!(
            "steps blue {} red {}, jumps blue {} red {}",
            v.steps.blue, v.steps.red, v.jumps.blue, v.jumps.red
        ));
        parts.join("; ")
    } else {
        format!("illegal: {}", v.error.as_deref().unwrap_or("unknown"))
    };
    let s = solution;
    let paths = halma_core::notation::expand_solution(&preset, &s).map_err(|e| e.to_string())?;
    report.solution = paths.iter().map(|p| path_token(&preset.board, p)).collect();
    let code = if v.legal { EXIT_OK } else { EXIT_USAGE };
    emit(report, t0, 1, &args.common, code)
}

fn run_render(args: RenderArgs) -> Result<u8, String> {
    let preset = make_preset(&args.preset, args.rules.as_deref())?;
    let board = &preset.board;
    let art = if args.empty {
        render_position(board, &CellSet::EMPTY, &CellSet::EMPTY)
    } else {
        render_position(board, board.blue_base(), board.red_base())
    };
    write_out(args.out.as_deref(), &art)?;
    Ok(EXIT_OK)
}

fn run_presets() -> Result<u8, String> {
    println!(
        "{:<14} {:>7} {:>6} {:>5}  {:<7} {}",
        "name", "board", "cells", "army", "rules", "mirror"
    );
    for name in PRESET_NAMES {
        let p = Preset::make(name, None).expect("shipped preset");
        println!(
            "{:<14} {:>4}x{:<2} {:>6} {:>5}  {:<7} {}",
            name,
            p.board.width(),
            p.board.height(),
            p.board.cell_count(),
            p.start().len(),
            p.rules.label(),
            mirror_label(p.mirror),
        );
    }
    Ok(EXIT_OK)
}
