use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cdindex_core::cdindex::order_independent_cd_index;
use cdindex_core::ncpoly::Monomial;
use cdindex_core::sweep::{all_intervals, evaluate, evaluate_all, ScanConfig, ScanRecord};
use cdindex_core::{
    complete_cd_index_under, export_dot, BruhatInterval, CdIndexError, CdMonomial, CoxeterError,
    FlipError, IntervalError, OrderSpec, Permutation, PolyError, ReflectionOrder, TSetTable,
};
use clap::{Parser, Subcommand};
use serde_json::json;

const DEFAULT_MAX_N: usize = 7;
const SCAN_MAX_N: usize = 6;
const SCAN_CHUNK: usize = 64;

#[derive(Parser)]
#[command(name = "cdindex", version, about = "Complete cd-index and flip checks for Bruhat intervals of S_n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the complete cd-index of [u, v] as JSON.
    Compute {
        u: String,
        v: String,
        /// lex, rev or word:<csv> (a reduced word of the longest element)
        #[arg(long, default_value = "lex")]
        order: String,
        /// Recompute under reverse lex and a reduced-word order and require equality.
        #[arg(long)]
        all_orders: bool,
    },
    /// Print T_M, its reverse-order counterpart and the flip pairing.
    Tset {
        u: String,
        v: String,
        monomial: String,
        #[arg(long, default_value = "lex")]
        order: String,
        /// Start vertex w in [u, v]; defaults to u.
        #[arg(long)]
        from: Option<String>,
    },
    /// Run every check on one interval and print the record.
    Verify {
        u: String,
        v: String,
        #[arg(long, default_value = "lex")]
        order: String,
    },
    /// Check every interval of S_n up to a length difference, as JSON lines.
    Scan {
        #[arg(long)]
        n: usize,
        /// Largest length difference l(v) - l(u); defaults to all.
        #[arg(long)]
        max_length: Option<usize>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep the complete records already in --out and skip their intervals.
        #[arg(long, requires = "out")]
        resume: bool,
        /// Record per-interval wall time.
        #[arg(long)]
        timing: bool,
        #[arg(long, default_value = "lex")]
        order: String,
    },
    /// Print the labeled Bruhat graph of [u, v] in DOT format.
    Dot {
        u: String,
        v: String,
        #[arg(long, default_value = "lex")]
        order: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
    FlipUndefined(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
            Failure::FlipUndefined(_) => 4,
            Failure::Io(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Internal(m) | Failure::FlipUndefined(m) | Failure::Io(m) => m,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<CoxeterError> for Failure {
    fn from(e: CoxeterError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<IntervalError> for Failure {
    fn from(e: IntervalError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::Parse(_) => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

impl From<CdIndexError> for Failure {
    fn from(e: CdIndexError) -> Self {
        match e {
            CdIndexError::Coxeter(e) => e.into(),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<FlipError> for Failure {
    fn from(e: FlipError) -> Self {
        match e {
            FlipError::FlipUndefined { .. } => Failure::FlipUndefined(e.to_string()),
            FlipError::NotInInterval(_) => Failure::Usage(e.to_string()),
            FlipError::CdIndex(e) => e.into(),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Internal(e.to_string())
    }
}

fn max_n() -> Result<usize, Failure> {
    match std::env::var("CDINDEX_MAX_N") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("CDINDEX_MAX_N is not a number: {s:?}"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn check_rank(n: usize) -> Result<(), Failure> {
    let max = max_n()?;
    if n > max {
        return Err(Failure::Usage(format!("S_{n} exceeds the configured maximum S_{max} (CDINDEX_MAX_N)")));
    }
    Ok(())
}

fn interval(u: &str, v: &str) -> Result<BruhatInterval, Failure> {
    let u: Permutation = u.parse()?;
    let v: Permutation = v.parse()?;
    check_rank(u.rank().max(v.rank()))?;
    Ok(BruhatInterval::build(u, v)?)
}

fn order(spec: &str, n: usize) -> Result<(ReflectionOrder, String), Failure> {
    let spec: OrderSpec = spec.parse()?;
    Ok((spec.build(n)?, spec.to_string()))
}

fn print_json(value: serde_json::Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, &value)?;
    writeln!(out)?;
    Ok(())
}

fn compute(u: &str, v: &str, order_spec: &str, all_orders: bool) -> Result<u8, Failure> {
    let iv = interval(u, v)?;
    let (ord, id) = order(order_spec, iv.lower().rank())?;
    let psi = complete_cd_index_under(&iv, &ord)?;
    if all_orders {
        let other = order_independent_cd_index(&iv)?;
        if other != psi {
            return Err(Failure::Internal(format!("cd-index of [{u}, {v}] under {id} differs from lex")));
        }
    }
    print_json(serde_json::to_value(psi.to_report(&id))?)?;
    Ok(0)
}

fn tset(u: &str, v: &str, monomial: &str, order_spec: &str, from: Option<&str>) -> Result<u8, Failure> {
    let iv = interval(u, v)?;
    let (ord, id) = order(order_spec, iv.lower().rank())?;
    let mono: CdMonomial = monomial.parse()?;
    let w: Permutation = match from {
        Some(w) => w.parse()?,
        None => iv.lower(),
    };
    if iv.index_of(&w).is_none() {
        return Err(Failure::Usage(format!("{w} is not in [{u}, {v}]")));
    }
    let span = iv.upper().length() - w.length();
    let mut t = Vec::new();
    let mut t_bar = Vec::new();
    let mut pairs = Vec::new();
    if span > 0 && mono.degree() % 2 == (span - 1) % 2 {
        let mut table = TSetTable::new(&iv, &ord);
        let word = mono.to_ad();
        t = table.compute_t(w, &mono)?.iter().map(|x| x.rank_string(&ord)).collect();
        t_bar = table.compute_t_bar(w, &mono)?.iter().map(|x| x.rank_string(&ord)).collect();
        pairs = table
            .flip_pairs(w, &word)?
            .iter()
            .map(|(a, b)| [a.rank_string(&ord), b.rank_string(&ord)])
            .collect();
    }
    print_json(json!({
        "u": iv.lower().to_string(),
        "v": iv.upper().to_string(),
        "from": w.to_string(),
        "monomial": mono.to_string(),
        "order": id,
        "t": t,
        "t_bar": t_bar,
        "pairs": pairs,
    }))?;
    Ok(0)
}

fn record_exit(records: &[ScanRecord]) -> u8 {
    if records.iter().any(|r| r.has_errors()) {
        3
    } else if records.iter().any(|r| r.violations() > 0) {
        1
    } else if records.iter().any(|r| r.flip_undefined()) {
        4
    } else {
        0
    }
}

fn verify(u: &str, v: &str, order_spec: &str) -> Result<u8, Failure> {
    let iv = interval(u, v)?;
    let (ord, id) = order(order_spec, iv.lower().rank())?;
    let cfg = ScanConfig { order: ord, order_id: id, timing: false };
    let record = evaluate(iv.lower(), iv.upper(), &cfg);
    print_json(serde_json::to_value(&record)?)?;
    Ok(record_exit(std::slice::from_ref(&record)))
}

/// Reads the complete records of an earlier run and truncates anything
/// after the last of them.
fn load_existing(path: &Path, order_id: &str) -> Result<Vec<ScanRecord>, Failure> {
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    let mut reader = BufReader::new(file);
    let mut records = Vec::new();
    let mut keep = 0u64;
    let mut line = String::new();
    loop {
        line.clear();
        let read = reader.read_line(&mut line)?;
        if read == 0 || !line.ends_with('\n') {
            break;
        }
        let Ok(record) = serde_json::from_str::<ScanRecord>(line.trim_end()) else {
            break;
        };
        if record.order != order_id {
            return Err(Failure::Usage(format!(
                "{} holds records for order {}, not {order_id}",
                path.display(),
                record.order
            )));
        }
        records.push(record);
        keep += read as u64;
    }
    OpenOptions::new().write(true).open(path)?.set_len(keep)?;
    Ok(records)
}

fn write_records(out: &mut dyn Write, records: &[ScanRecord]) -> Result<(), Failure> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

fn scan(
    n: usize,
    max_length: Option<usize>,
    out: Option<&Path>,
    resume: bool,
    timing: bool,
    order_spec: &str,
) -> Result<u8, Failure> {
    check_rank(n)?;
    if !(2..=SCAN_MAX_N).contains(&n) {
        return Err(Failure::Usage(format!("scan needs 2 <= n <= {SCAN_MAX_N}, got {n}")));
    }
    let (ord, id) = order(order_spec, n)?;
    let max_length = max_length.unwrap_or(n * (n - 1) / 2);
    let mut done = Vec::new();
    let mut sink: Box<dyn Write> = match out {
        Some(path) => {
            if resume {
                done = load_existing(path, &id)?;
            }
            let file = OpenOptions::new()
                .create(true)
                .write(true)
                .append(resume)
                .truncate(!resume)
                .open(path)?;
            Box::new(io::BufWriter::new(file))
        }
        None => Box::new(io::BufWriter::new(io::stdout().lock())),
    };
    let seen: std::collections::HashSet<_> = done.iter().map(|r| r.key()).collect();
    let todo: Vec<_> = all_intervals(n, max_length)?
        .into_iter()
        .filter(|(u, v)| !seen.contains(&(v.length() - u.length(), u.to_string(), v.to_string())))
        .collect();
    let cfg = ScanConfig { order: ord, order_id: id, timing };
    let mut all = done;
    for chunk in todo.chunks(SCAN_CHUNK) {
        let records = evaluate_all(chunk, &cfg);
        write_records(sink.as_mut(), &records)?;
        all.extend(records);
    }
    let violations: usize = all.iter().map(|r| r.violations()).sum();
    let strong: usize = all.iter().map(|r| r.strong_flip_violations()).sum();
    eprintln!(
        "scanned {} intervals of S_{n}: {violations} violations, {strong} strong-flip violations",
        all.len()
    );
    Ok(record_exit(&all))
}

fn dot(u: &str, v: &str, order_spec: &str, out: Option<&Path>) -> Result<u8, Failure> {
    let iv = interval(u, v)?;
    let (ord, _) = order(order_spec, iv.lower().rank())?;
    let text = export_dot(&iv, &ord);
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Compute { u, v, order, all_orders } => compute(&u, &v, &order, all_orders),
        Command::Tset { u, v, monomial, order, from } => tset(&u, &v, &monomial, &order, from.as_deref()),
        Command::Verify { u, v, order } => verify(&u, &v, &order),
        Command::Scan { n, max_length, out, resume, timing, order } => {
            scan(n, max_length, out.as_deref(), resume, timing, &order)
        }
        Command::Dot { u, v, order, out } => dot(&u, &v, &order, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
