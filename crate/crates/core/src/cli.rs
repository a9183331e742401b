//! Command-line front end. Exit status 0 on success, 1 on domain errors,
//! 2 on usage and parse errors; diagnostics go to the error stream.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::{self, FileError};
use crate::code::TableCode;
use crate::codec::{self, CodeBehavior};
use crate::compose::{self, CompositeCode};
use crate::rates;
use crate::search::{self, SearchConfig, SearchError};
use crate::state::MemoryState;
use crate::verify;

#[derive(Debug, Parser)]
#[command(name = "womkit", version, about = "Write-once memory code toolkit")]
pub struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Property report and rate of a code.
    Verify { code: String },
    /// Write a message sequence starting from erased memory.
    Encode {
        code: String,
        #[arg(long, value_delimiter = ',', required = true)]
        messages: Vec<u64>,
    },
    /// Generation and message held by a state.
    Decode {
        code: String,
        #[arg(long)]
        state: String,
        #[arg(long)]
        generation: Option<usize>,
    },
    /// Concatenate an inner and an outer synchronous code.
    Compose(ComposeArgs),
    /// Bounds, partition searches and search-built codes.
    #[command(subcommand)]
    Search(SearchCommand),
    /// Generation-level rewrites of a code.
    #[command(subcommand)]
    Transform(TransformCommand),
    /// Rate loss of synchronous codes against nondecodable ones.
    #[command(subcommand)]
    Rates(RatesCommand),
    /// Built-in codes.
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Seeded random write sequences with full checking.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
struct ComposeArgs {
    inner: String,
    outer: String,
    /// Apply the construction this many times, always with the same outer code.
    #[arg(long, default_value_t = 1)]
    iterate: usize,
    /// Print the generation-recovery and decoding steps for `--state`.
    #[arg(long)]
    trace: bool,
    /// Composite state, as blocks separated by commas or one digit string.
    #[arg(long)]
    state: Option<String>,
    /// Write this message on top of `--state` (or erased memory).
    #[arg(long)]
    message: Option<u64>,
    /// Expand the reachable states into a table and save it.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FuzzArgs {
    code: String,
    /// Compose `code` with this outer code first.
    #[arg(long)]
    outer: Option<String>,
    #[arg(long, default_value_t = 1)]
    iterate: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    sequences: usize,
}

#[derive(Debug, Subcommand)]
enum SearchCommand {
    /// Closed-form bound, B and optionally the exact A for one weight slice.
    Bound {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: u32,
        #[arg(long = "exact-A", alias = "exact-a")]
        exact_a: bool,
    },
    /// Laminar code from largest partitions of each weight slice.
    Greedy {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// CSV of closed form, B and A for every slice up to `--n-max`.
    Table {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        i_max: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Save each A witness partition here as JSON.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Rate-maximising single-cell synchronous code.
    SingleCell {
        #[arg(long)]
        q: u8,
        #[arg(long)]
        t: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum TransformCommand {
    /// Add a first generation holding only the all-zero state.
    PrependZero {
        code: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Merge generations `i..=j`.
    Merge {
        code: String,
        #[arg(long)]
        range: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Split a generation; groups of 1-based class indices separated by `;`.
    Split {
        code: String,
        #[arg(long)]
        gen: usize,
        #[arg(long)]
        groups: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Re-split one generation into a given number of classes.
    Reorganize {
        code: String,
        #[arg(long)]
        gen: usize,
        #[arg(long)]
        classes: usize,
        /// Classes to move into the previous generation first.
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum RatesCommand {
    /// Rate-loss table for a preset.
    Table {
        #[arg(long)]
        preset: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum CatalogCommand {
    /// One line per entry.
    List,
    /// Properties and class table of an entry.
    Show { id: String },
    /// Write an entry as a JSON code file.
    Export {
        id: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn io_fail(e: io::Error) -> Failure {
    Failure::Usage(format!("i/o error: {e}"))
}

fn file_fail(e: FileError) -> Failure {
    match e {
        FileError::Schema(_) => domain(e),
        _ => usage(e),
    }
}

fn search_fail(e: SearchError) -> Failure {
    match e {
        SearchError::BadInput(_) => usage(e),
        _ => domain(e),
    }
}

/// Runs the tool on `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn load_code(spec: &str) -> Result<TableCode, Failure> {
    match spec.strip_prefix("catalog:") {
        Some(id) => catalog::entry(id).map(|e| e.table).map_err(usage),
        None => catalog::read_code_file(spec).map_err(file_fail),
    }
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(io_fail),
        None => out.write_all(text.as_bytes()).map_err(io_fail),
    }
}

fn parse_state(q: u8, text: &str) -> Result<MemoryState, Failure> {
    MemoryState::parse(q, text).map_err(usage)
}

fn parse_blocks(q: u8, block_len: usize, text: &str) -> Result<Vec<MemoryState>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() > 1
        && parts
            .iter()
            .all(|p| p.len() == block_len && p.chars().all(|c| c.is_ascii_digit()))
    {
        return parts.iter().map(|p| parse_state(q, p)).collect();
    }
    Ok(parse_state(q, text)?.blocks(block_len))
}

fn blocks_text(blocks: &[MemoryState]) -> String {
    blocks.iter().map(|b| b.to_text()).collect::<Vec<_>>().join(",")
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match cmd {
        Command::Verify { code } => cmd_verify(&code, out),
        Command::Encode { code, messages } => cmd_encode(&code, &messages, out),
        Command::Decode {
            code,
            state,
            generation,
        } => cmd_decode(&code, &state, generation, out),
        Command::Compose(a) => cmd_compose(a, out),
        Command::Search(s) => cmd_search(s, out),
        Command::Transform(t) => cmd_transform(t, out),
        Command::Rates(RatesCommand::Table { preset, output }) => {
            let reports = rates::preset_reports(&preset).map_err(usage)?;
            let mut buf = Vec::new();
            rates::write_csv(&reports, &mut buf).map_err(domain)?;
            emit(&String::from_utf8(buf).expect("utf-8"), output.as_deref(), out)
        }
        Command::Catalog(c) => cmd_catalog(c, out),
        Command::Fuzz(a) => cmd_fuzz(a, out),
    }
}

fn cmd_verify(spec: &str, out: &mut dyn Write) -> Result<(), Failure> {
    let code = load_code(spec)?;
    let p = verify::properties(&code);
    let w = |out: &mut dyn Write| -> io::Result<()> {
        writeln!(out, "code {}", code.params())?;
        writeln!(out, "valid {}", p.is_valid)?;
        writeln!(out, "decodable {}", p.is_decodable)?;
        writeln!(out, "synchronous {}", p.is_synchronous)?;
        writeln!(out, "laminar {}", p.is_laminar)?;
        writeln!(out, "fixed-rate {}", p.is_fixed_rate)?;
        writeln!(out, "all-zero {}", p.contains_all_zero)?;
        writeln!(out, "rate {}", rates::fixed(code.params().wom_rate(), 4))
    };
    w(out).map_err(io_fail)?;
    match verify::verify_wom(&code) {
        Ok(_) => Ok(()),
        Err(v) => Err(domain(format!("invalid code: {v}"))),
    }
}

fn cmd_encode(spec: &str, messages: &[u64], out: &mut dyn Write) -> Result<(), Failure> {
    let code = load_code(spec)?;
    let trace = codec::run_write_sequence(&code, messages).map_err(domain)?;
    writeln!(out, "write 0: {}", code.zero_state()).map_err(io_fail)?;
    for (k, (m, s)) in messages.iter().zip(&trace).enumerate() {
        writeln!(out, "write {}: m={m} -> {s}", k + 1).map_err(io_fail)?;
    }
    Ok(())
}

fn cmd_decode(spec: &str, state: &str, generation: Option<usize>, out: &mut dyn Write) -> Result<(), Failure> {
    let code = load_code(spec)?;
    let s = parse_state(code.q(), state)?;
    if s.len() != code.n() {
        return Err(usage(format!("state {s} does not have length {}", code.n())));
    }
    let pairs: Vec<(usize, u64)> = match generation {
        Some(g) => vec![(g, code.decode(g, &s).map_err(domain)?)],
        None if verify::check_synchronous(&code).is_ok() => {
            let g = code.generation_of(&s).map_err(domain)?;
            if g == 0 {
                return Err(domain(codec::CodecError::NothingWritten));
            }
            vec![(g, code.decode(g, &s).map_err(domain)?)]
        }
        None => {
            let occ = code.occurrences(&s);
            if occ.is_empty() {
                return Err(domain(codec::CodecError::NotInAnyImage { state: s }));
            }
            occ.iter().map(|&(g, m)| (g, m as u64)).collect()
        }
    };
    for (g, m) in pairs {
        writeln!(out, "generation {g} message {m}").map_err(io_fail)?;
    }
    Ok(())
}

fn build_composite(inner: &str, outer: &str, iterate: usize) -> Result<CompositeCode, Failure> {
    if iterate == 0 {
        return Err(usage("--iterate must be at least 1"));
    }
    let outer: Arc<dyn CodeBehavior> = Arc::new(load_code(outer)?);
    let mut code: Arc<dyn CodeBehavior> = Arc::new(load_code(inner)?);
    for _ in 1..iterate {
        code = Arc::new(compose::compose(code, outer.clone()).map_err(domain)?);
    }
    compose::compose(code, outer).map_err(domain)
}

fn cmd_compose(a: ComposeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let c = build_composite(&a.inner, &a.outer, a.iterate)?;
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io_fail);
    w(out, format!("parameters {}", c.params()))?;
    w(out, format!("rate {}", rates::fixed(c.params().wom_rate(), 4)))?;
    if c.outer().params().q() == 2 {
        w(out, format!("theorem rate {}", rates::fixed(c.theorem_rate(), 4)))?;
    }
    let ip = c.inner().params().clone();
    let blocks = match &a.state {
        Some(s) => parse_blocks(ip.q(), ip.n(), s)?,
        None => vec![MemoryState::zeros(ip.q(), ip.n()); c.outer().params().n()],
    };
    if blocks.len() != c.outer().params().n() {
        return Err(usage(format!(
            "expected {} blocks of length {}",
            c.outer().params().n(),
            ip.n()
        )));
    }
    if a.trace {
        w(out, format!("state {}", blocks_text(&blocks)))?;
        let gens: Vec<String> = blocks
            .iter()
            .map(|b| c.inner().generation_of(b).map(|g| g.to_string()))
            .collect::<Result<_, _>>()
            .map_err(domain)?;
        w(out, format!("block generations {}", gens.join(",")))?;
        let view = c.recover(&blocks).map_err(domain)?;
        let r = &view.read_view;
        w(out, format!("p={}", r.p))?;
        w(out, format!("b'={}", r.b_prime))?;
        w(out, format!("l={}", r.l))?;
        w(out, format!("i={}", r.i))?;
        if r.l > 0 {
            let d = c.decode_blocks(&blocks).map_err(domain)?;
            w(out, format!("m={}", d.m))?;
            w(out, format!("m'={}", d.m_prime))?;
            w(out, format!("m1={}", d.m1))?;
        }
        if view.rolled_over && r.l > 0 {
            w(out, format!("next write opens stage p={}", view.write_view.p))?;
        }
    }
    if let Some(m1) = a.message {
        let next = c.encode_blocks(&blocks, m1).map_err(domain)?;
        w(out, format!("encode m1={m1} -> {}", blocks_text(&next)))?;
    }
    if let Some(path) = a.output {
        let table = c.to_table(1_000_000).map_err(domain)?;
        catalog::write_code_file(&table, &path).map_err(file_fail)?;
    }
    Ok(())
}

fn cmd_search(s: SearchCommand, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = SearchConfig::default();
    let w = |out: &mut dyn Write, s: String| writeln!(out, "{s}").map_err(io_fail);
    match s {
        SearchCommand::Bound { q, n, i, exact_a } => {
            w(out, format!("q={q} n={n} i={i}"))?;
            if q == 2 && (1..=n as u32).contains(&i) && n <= 16 {
                w(
                    out,
                    format!("closed_form {}", search::bound_closed_form(n as u64, i as u64)),
                )?;
            }
            let b = search::bound_b(q, n, i, &cfg).map_err(search_fail)?;
            let class = if b.min_class_exact() {
                b.class_upper.to_string()
            } else {
                format!("{}..{}", b.class_lower, b.class_upper)
            };
            w(out, format!("min_class {class}"))?;
            match b.value() {
                Some(v) => w(out, format!("B {v}"))?,
                None => w(out, format!("B {}..{} incomplete", b.range().0, b.range().1))?,
            }
            if exact_a {
                match search::max_partition(q, n, i, &cfg) {
                    Ok(r) if r.exact => w(out, format!("A {}", r.partition.len()))?,
                    Ok(r) => w(out, format!("A >= {} not exact", r.partition.len()))?,
                    Err(SearchError::BudgetExhausted { best }) => {
                        w(out, format!("A >= {} budget exhausted", best.map_or(0, |p| p.len())))?
                    }
                    Err(e) => return Err(search_fail(e)),
                }
            }
            Ok(())
        }
        SearchCommand::Greedy { q, n, t, output } => {
            let g = search::greedy_laminar(q, n, t, &cfg).map_err(search_fail)?;
            let json = catalog::code_to_json(&g.code);
            match output {
                Some(p) => {
                    std::fs::write(&p, json).map_err(io_fail)?;
                    w(out, format!("{}", g.code.params()))
                }
                None => emit(&json, None, out),
            }
        }
        SearchCommand::Table {
            q,
            n_max,
            i_max,
            output,
            witness_dir,
        } => {
            let mut recs = search::bound_table(q, n_max, i_max, &cfg).map_err(search_fail)?;
            if let Some(dir) = witness_dir {
                std::fs::create_dir_all(&dir).map_err(io_fail)?;
                for r in &mut recs {
                    if let Some(p) = &r.a_witness {
                        let name = format!("A_{}_{}_{}.json", r.q, r.n, r.i);
                        let text = serde_json::to_string_pretty(p).expect("plain data");
                        std::fs::write(dir.join(&name), text).map_err(io_fail)?;
                        r.witness_file = Some(name);
                    }
                }
            }
            let mut buf = Vec::new();
            search::write_bound_csv(&recs, &mut buf).map_err(domain)?;
            emit(&String::from_utf8(buf).expect("utf-8"), output.as_deref(), out)
        }
        SearchCommand::SingleCell { q, t, output } => {
            let c = search::single_cell_assignment(q, t).map_err(search_fail)?;
            match output {
                Some(p) => catalog::write_code_file(&c.to_table(), &p).map_err(file_fail)?,
                None => {
                    w(out, format!("code {}", c.params()))?;
                    w(out, format!("rate {}", rates::fixed(c.rate(), 4)))?;
                    for (k, run) in c.levels.iter().enumerate() {
                        let lv: Vec<String> = run.iter().map(u8::to_string).collect();
                        w(out, format!("generation {} levels {}", k + 1, lv.join(",")))?;
                    }
                }
            }
            Ok(())
        }
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| usage(format!("range {text:?} is not of the form i:j")))?;
    let p = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("bad range bound {s:?}")))
    };
    Ok((p(a)?, p(b)?))
}

fn parse_groups(text: &str) -> Result<Vec<Vec<usize>>, Failure> {
    text.split(';')
        .map(|g| {
            g.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<usize>()
                        .map_err(|_| usage(format!("bad class index {s:?}")))
                })
                .collect()
        })
        .collect()
}

fn cmd_transform(t: TransformCommand, out: &mut dyn Write) -> Result<(), Failure> {
    let (code, output) = match t {
        TransformCommand::PrependZero { code, output } => (
            compose::prepend_zero_generation(&load_code(&code)?).map_err(domain)?,
            output,
        ),
        TransformCommand::Merge { code, range, output } => {
            let (i, j) = parse_range(&range)?;
            (
                compose::merge_generations(&load_code(&code)?, i, j).map_err(domain)?,
                output,
            )
        }
        TransformCommand::Split {
            code,
            gen,
            groups,
            output,
        } => {
            let groups = parse_groups(&groups)?;
            (
                compose::split_generation(&load_code(&code)?, gen, &groups).map_err(domain)?,
                output,
            )
        }
        TransformCommand::Reorganize {
            code,
            gen,
            classes,
            extra,
            output,
        } => {
            let cfg = SearchConfig::default();
            let c = load_code(&code)?;
            (
                search::reorganize_with_extra(&c, gen, classes, extra, &cfg).map_err(search_fail)?,
                output,
            )
        }
    };
    emit(&catalog::code_to_json(&code), output.as_deref(), out)
}

fn cmd_catalog(c: CatalogCommand, out: &mut dyn Write) -> Result<(), Failure> {
    match c {
        CatalogCommand::List => {
            let all = catalog::load_catalog().map_err(domain)?;
            for e in all {
                writeln!(out, "{}\t{}\t{}", e.id, e.params, rates::fixed(e.expected_rate, 4)).map_err(io_fail)?;
            }
            Ok(())
        }
        CatalogCommand::Show { id } => {
            let e = catalog::entry(&id).map_err(usage)?;
            let p = e.expected;
            let text = format!(
                "id {}\nparameters {}\nrate {}\nvalid {}\ndecodable {}\nsynchronous {}\nlaminar {}\nfixed-rate {}\nall-zero {}\nprovenance {}\n{}",
                e.id,
                e.params,
                rates::fixed(e.expected_rate, 4),
                p.is_valid,
                p.is_decodable,
                p.is_synchronous,
                p.is_laminar,
                p.is_fixed_rate,
                p.contains_all_zero,
                e.provenance,
                catalog::code_to_json(&e.table)
            );
            emit(&text, None, out)
        }
        CatalogCommand::Export { id, output } => {
            let e = catalog::entry(&id).map_err(usage)?;
            emit(&catalog::code_to_json(&e.table), output.as_deref(), out)
        }
    }
}

fn cmd_fuzz(a: FuzzArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let code: Arc<dyn CodeBehavior> = match &a.outer {
        Some(outer) => Arc::new(build_composite(&a.code, outer, a.iterate)?),
        None => Arc::new(load_code(&a.code)?),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let params = code.params().clone();
    for k in 0..a.sequences {
        let seq: Vec<u64> = (1..=params.t()).map(|g| rng.random_range(1..=params.size(g))).collect();
        codec::run_write_sequence(code.as_ref(), &seq).map_err(|e| domain(format!("sequence {k} {seq:?}: {e}")))?;
    }
    writeln!(out, "code {}", params).map_err(io_fail)?;
    writeln!(out, "seed {} sequences {} ok", a.seed, a.sequences).map_err(io_fail)
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run(std::env::args_os(), &mut out, &mut err)
}
