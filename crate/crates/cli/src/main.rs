use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use hwl_core::bound::{
    count_identities, lower_bound_report, random_sweep, s_sequence, SweepSummary,
};
use hwl_core::cube::{theta_half_type, theta_opt, VertexSet};
use hwl_core::embed::{
    gray_cycle_wirelength, gray_embedding, gray_identities_check, gray_type_formula,
    type_sequence_of, wirelength, wirelength_by_cuts, Embedding, Host,
};
use hwl_core::oracle::{
    brute_min_cycle_wl, brute_theta, brute_theta_kt, compute_five_cube_table,
    half_type_theta_check, small_cube_report, ScanConfig, Symmetry,
};
use hwl_core::report::{Check, Report};
use hwl_core::takagi::{
    lemma_suite_takagi_with, parse_rational, verify_certificate_grids_with,
    verify_half_type_grid_with, GridReport, Parabola,
};
use hwl_core::{Error, Rational, Result};

#[derive(Parser, Debug)]
#[command(
    name = "hwl",
    version,
    about = "Cycle wirelength of hypercubes: computations and exact checks"
)]
struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true, env = "HWL_THREADS")]
    threads: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Override the parabola curvature (mutation testing).
    #[arg(long, global = true, hide = true)]
    parabola_curvature: Option<String>,

    /// Override the parabola peak (mutation testing).
    #[arg(long, global = true, hide = true)]
    parabola_peak: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum HostArg {
    Cycle,
    Path,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Formula,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Series {
    /// Types of the cycle windows.
    Types,
    /// The Gray-code arrangement `s_i`.
    S,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the reflected Gray code embedding.
    Gray {
        #[arg(long)]
        n: u32,
    },
    /// Wirelength of an embedding (Gray when no file is given).
    Wirelength {
        #[arg(long)]
        n: Option<u32>,
        /// Embedding JSON file, or `sample` for the bundled n=6 embedding.
        #[arg(long)]
        embedding: Option<String>,
        #[arg(long, value_enum, default_value = "cycle")]
        host: HostArg,
    },
    /// Edge boundary of a set, or the optimum θ(n,k) / θ(n,k,t).
    Theta {
        /// Vertex set JSON `{"n":..,"bits":"0x.."}`.
        #[arg(long, conflicts_with_all = ["n", "k", "t"])]
        set: Option<PathBuf>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long, value_enum, default_value = "formula")]
        mode: Mode,
    },
    /// Exhaustive θ(5,k,t) table against 32·f(k/32).
    ThetaTable {
        #[arg(long, default_value_t = 5)]
        n: u32,
    },
    /// Type sequence `i,t_i` of an embedding's cycle windows.
    TypeSeq {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        embedding: Option<String>,
        #[arg(long, value_enum, default_value = "types")]
        series: Series,
    },
    /// Exact re-run of the depth-12 grid scans plus the range grid at `--depth`.
    VerifyGrid {
        #[arg(long, default_value_t = 12)]
        depth: u32,
    },
    /// Lemma and identity checks; closed forms up to `--n`, dyadic sweeps up to 12.
    VerifyLemmas {
        #[arg(long, default_value_t = 40)]
        n: u32,
    },
    /// Stage series of the lower-bound chain for one embedding.
    BoundPipeline {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        embedding: Option<String>,
    },
    /// The lower-bound chain on seeded random embeddings.
    RandomSweep {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive minimum cycle wirelength (n <= 3).
    Search {
        #[arg(long)]
        n: u32,
    },
    /// Every check in one run, with a summary table.
    VerifyAll {
        /// Sections to skip: gray,counts,lemmas,grids,halftype,oracle,search,sweep.
        #[arg(long, value_delimiter = ',')]
        skip: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        count: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

const SECTIONS: [&str; 8] = [
    "gray", "counts", "lemmas", "grids", "halftype", "oracle", "search", "sweep",
];

struct Ctx {
    format: Option<Format>,
    out: Option<PathBuf>,
    workers: usize,
    parabola: Parabola<Rational>,
}

impl Ctx {
    fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    /// Writes the main output to `--out` or stdout.
    fn emit(&self, body: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, body)?,
            None => std::io::stdout().write_all(body.as_bytes())?,
        }
        Ok(())
    }

    /// Secondary output: stdout when the main output went to a file.
    fn note(&self, line: &str) {
        if self.out.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }

    fn scan_config(&self) -> ScanConfig {
        ScanConfig {
            workers: self.workers,
            symmetry: Symmetry::Complement,
            progress: None,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn load_embedding(spec: &str) -> Result<Embedding> {
    if spec == "sample" {
        return Ok(Embedding::sample());
    }
    Embedding::from_json(&fs::read_to_string(spec)?)
}

/// Embedding from `--embedding`, else the Gray embedding of `--n`.
fn embedding_arg(n: Option<u32>, embedding: Option<&str>) -> Result<Embedding> {
    match (n, embedding) {
        (_, Some(spec)) => {
            let eta = load_embedding(spec)?;
            if let Some(n) = n.filter(|&n| n != eta.dim()) {
                return Err(Error::Usage(format!(
                    "--n {n} does not match embedding dimension {}",
                    eta.dim()
                )));
            }
            Ok(eta)
        }
        (Some(n), None) => gray_embedding(n),
        (None, None) => Err(Error::Usage("give --n or --embedding".into())),
    }
}

fn verification(report: &Report) -> Result<()> {
    if let Some(c) = report.failures().next() {
        return Err(Error::verification(
            c.name.clone(),
            c.witness.clone().unwrap_or_default(),
        ));
    }
    Ok(())
}

fn cmd_gray(ctx: &Ctx, n: u32) -> Result<()> {
    let xi = gray_embedding(n)?;
    match ctx.format_or(Format::Json) {
        Format::Csv => {
            let mut body = String::from("vertex,label\n");
            for (v, l) in xi.labels().iter().enumerate() {
                body.push_str(&format!("{v},{l}\n"));
            }
            ctx.emit(&body)
        }
        _ => ctx.emit(&to_json(&xi.to_file(1))?),
    }
}

#[derive(Serialize)]
struct WirelengthOut {
    n: u32,
    host: Host,
    wirelength: u64,
    wirelength_by_cuts: u64,
    gray_formula: Option<u64>,
}

fn cmd_wirelength(ctx: &Ctx, n: Option<u32>, embedding: Option<&str>, host: HostArg) -> Result<()> {
    let eta = embedding_arg(n, embedding)?;
    let host = match host {
        HostArg::Cycle => Host::Cycle,
        HostArg::Path => Host::Path,
    };
    let wl = wirelength(&eta, host)?;
    let cuts = wirelength_by_cuts(&eta, host)?;
    let out = WirelengthOut {
        n: eta.dim(),
        host,
        wirelength: wl,
        wirelength_by_cuts: cuts,
        gray_formula: (host == Host::Cycle).then(|| gray_cycle_wirelength(eta.dim())),
    };
    match ctx.format_or(Format::Json) {
        Format::Text => ctx.emit(&format!("{wl}\n"))?,
        Format::Csv => ctx.emit(&format!("n,host,wirelength\n{},{host},{wl}\n", eta.dim()))?,
        Format::Json => ctx.emit(&to_json(&out)?)?,
    }
    if wl != cuts {
        return Err(Error::verification(
            "wirelength by cuts",
            format!("{wl} vs {cuts}"),
        ));
    }
    Ok(())
}

#[derive(Serialize)]
struct ThetaOut {
    n: u32,
    k: u64,
    t: Option<u64>,
    mode: &'static str,
    theta: Option<u64>,
}

#[derive(Serialize)]
struct SetOut {
    n: u32,
    size: u64,
    boundary: u64,
    #[serde(rename = "type")]
    type_: u64,
}

fn cmd_theta(
    ctx: &Ctx,
    set: Option<&PathBuf>,
    n: Option<u32>,
    k: Option<u64>,
    t: Option<u64>,
    mode: Mode,
) -> Result<()> {
    if let Some(path) = set {
        let s: VertexSet = serde_json::from_str(&fs::read_to_string(path)?)?;
        let out = SetOut {
            n: s.dim(),
            size: s.len(),
            boundary: s.boundary_size(),
            type_: s.type_of(),
        };
        return match ctx.format_or(Format::Text) {
            Format::Json => ctx.emit(&to_json(&out)?),
            Format::Csv => ctx.emit(&format!(
                "n,size,boundary,type\n{},{},{},{}\n",
                out.n, out.size, out.boundary, out.type_
            )),
            Format::Text => ctx.emit(&format!("{}\n", out.boundary)),
        };
    }
    let (Some(n), Some(k)) = (n, k) else {
        return Err(Error::Usage("give --set, or --n and --k".into()));
    };
    let theta = match (mode, t) {
        (Mode::Formula, None) => Some(theta_opt(n, k)?),
        (Mode::Formula, Some(t)) => {
            if n < 3 || k != 1 << (n - 1) {
                return Err(Error::Usage(
                    "the closed form for θ(n,k,t) needs n >= 3 and k = 2^(n-1)".into(),
                ));
            }
            Some(theta_half_type(n, t)?)
        }
        (Mode::Brute, None) => Some(brute_theta(n, k, &ctx.scan_config())?),
        (Mode::Brute, Some(t)) => brute_theta_kt(n, k, t, &ctx.scan_config())?,
    };
    let out = ThetaOut {
        n,
        k,
        t,
        mode: if mode == Mode::Formula {
            "formula"
        } else {
            "brute"
        },
        theta,
    };
    match ctx.format_or(Format::Text) {
        Format::Json => ctx.emit(&to_json(&out)?),
        Format::Csv => ctx.emit(&format!(
            "n,k,t,theta\n{n},{k},{},{}\n",
            t.map_or(String::new(), |t| t.to_string()),
            theta.map_or(String::new(), |v| v.to_string())
        )),
        Format::Text => ctx.emit(&theta.map_or("infeasible\n".to_string(), |v| format!("{v}\n"))),
    }
}

fn cmd_theta_table(ctx: &Ctx, n: u32) -> Result<()> {
    if n != 5 {
        return Err(Error::Usage("the table is defined for n = 5 only".into()));
    }
    let (table, _) = compute_five_cube_table(&ctx.scan_config())?;
    match ctx.format_or(Format::Csv) {
        Format::Json => ctx.emit(&to_json(&table)?)?,
        _ => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            ctx.emit(&String::from_utf8_lossy(&buf))?;
        }
    }
    let report = table.verify_with(&ctx.parabola);
    ctx.note(&report.to_string());
    verification(&report)
}

fn cmd_type_seq(ctx: &Ctx, n: Option<u32>, embedding: Option<&str>, series: Series) -> Result<()> {
    let (values, header) = match series {
        Series::S => {
            let n = n.ok_or_else(|| Error::Usage("--series s needs --n".into()))?;
            (s_sequence(n)?, "i,s_i")
        }
        Series::Types => {
            let eta = embedding_arg(n, embedding)?;
            (type_sequence_of(&eta)?.values().to_vec(), "i,t_i")
        }
    };
    match ctx.format_or(Format::Csv) {
        Format::Json => ctx.emit(&to_json(&values)?)?,
        _ => {
            let mut body = format!("{header}\n");
            for (i, v) in values.iter().enumerate() {
                body.push_str(&format!("{},{v}\n", i + 1));
            }
            ctx.emit(&body)?;
        }
    }
    if series == Series::Types && embedding.is_none() {
        let n = n.expect("checked by embedding_arg");
        if n >= 3 && values != gray_type_formula(n) {
            return Err(Error::verification(
                "Gray type sequence",
                format!("{values:?}"),
            ));
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct GridOut {
    main: GridReport,
    strict: GridReport,
    range: GridReport,
}

fn grid_reports(ctx: &Ctx, depth: u32) -> Result<GridOut> {
    let (main, strict) = verify_certificate_grids_with(&ctx.parabola)?;
    let range = verify_half_type_grid_with(depth, &ctx.parabola)?;
    Ok(GridOut {
        main,
        strict,
        range,
    })
}

fn cmd_verify_grid(ctx: &Ctx, depth: u32) -> Result<()> {
    let out = grid_reports(ctx, depth)?;
    ctx.emit(&to_json(&out)?)?;
    let mut report = Report::new();
    for g in [&out.main, &out.strict, &out.range] {
        ctx.note(&format!(
            "{}  {}  min gap {} ≈ {:.6} at {:?}",
            if g.pass { "PASS" } else { "FAIL" },
            g.region,
            g.min_gap,
            g.min_gap_f64(),
            g.argmin
        ));
        report.push(g.to_check());
    }
    verification(&report)
}

fn lemma_report(ctx: &Ctx, n: u32) -> Result<Report> {
    let dyadic = n.min(12);
    let mut report = count_identities(dyadic)?;
    report.extend(lemma_suite_takagi_with(n, &ctx.parabola)?);
    Ok(report)
}

fn cmd_verify_lemmas(ctx: &Ctx, n: u32) -> Result<()> {
    let report = lemma_report(ctx, n)?;
    match ctx.format_or(Format::Text) {
        Format::Json => ctx.emit(&to_json(&report)?)?,
        _ => ctx.emit(&report.to_string())?,
    }
    verification(&report)
}

#[derive(Serialize)]
struct PipelineSummary<'a> {
    n: u32,
    label: hwl_core::bound::VerdictLabel,
    verdict: bool,
    align_mode: hwl_core::bound::AlignMode,
    sums: &'a hwl_core::bound::StageSums,
    gray_total: u64,
    diagnostics: &'a [String],
}

fn cmd_bound_pipeline(ctx: &Ctx, n: Option<u32>, embedding: Option<&str>) -> Result<()> {
    let eta = embedding_arg(n, embedding)?;
    let r = lower_bound_report(&eta)?;
    let summary = PipelineSummary {
        n: r.n,
        label: r.label,
        verdict: r.verdict,
        align_mode: r.align_mode,
        sums: &r.sums,
        gray_total: r.gray_total,
        diagnostics: &r.diagnostics,
    };
    match ctx.format_or(Format::Csv) {
        Format::Json => ctx.emit(&to_json(&r)?)?,
        _ => {
            let mut buf = Vec::new();
            r.write_csv(&mut buf)?;
            ctx.emit(&String::from_utf8_lossy(&buf))?;
            ctx.note(to_json(&summary)?.trim_end());
        }
    }
    verification(&r.checks)
}

fn sweep_check(s: &SweepSummary) -> Check {
    let name = format!(
        "n={}: lower-bound chain on {} random embeddings",
        s.n, s.count
    );
    if s.passed() {
        Check::pass(name, s.count)
    } else {
        Check::fail(
            name,
            s.count,
            format!(
                "chain failures {:?}, type-sequence failures {:?}, min WL {}",
                s.failures, s.type_sequence_failures, s.min_wirelength
            ),
        )
    }
}

fn cmd_random_sweep(ctx: &Ctx, n: u32, count: u64, seed: u64) -> Result<()> {
    let s = random_sweep(n, count, seed)?;
    match ctx.format_or(Format::Json) {
        Format::Text => ctx.emit(&format!("{}\n", if s.passed() { "PASS" } else { "FAIL" }))?,
        _ => ctx.emit(&to_json(&s)?)?,
    }
    let mut report = Report::new();
    report.push(sweep_check(&s));
    verification(&report)
}

#[derive(Serialize)]
struct SearchOut {
    n: u32,
    wirelength: u64,
    formula: u64,
    witness: hwl_core::embed::EmbeddingFile,
}

fn search_check(n: u32) -> Result<(Check, SearchOut)> {
    let (wl, eta) = brute_min_cycle_wl(n)?;
    let formula = gray_cycle_wirelength(n);
    let name = format!("n={n}: exhaustive minimum cycle wirelength = {formula}");
    let check = if wl == formula && wirelength(&eta, Host::Cycle)? == wl {
        Check::pass(name, hwl_core::oracle::cycle_arrangement_count(n))
    } else {
        Check::fail(name, 1, format!("minimum {wl}"))
    };
    Ok((
        check,
        SearchOut {
            n,
            wirelength: wl,
            formula,
            witness: eta.to_file(1),
        },
    ))
}

fn cmd_search(ctx: &Ctx, n: u32) -> Result<()> {
    let (check, out) = search_check(n)?;
    ctx.emit(&to_json(&out)?)?;
    let mut report = Report::new();
    report.push(check);
    verification(&report)
}

fn run_section(ctx: &Ctx, name: &str, count: u64, seed: u64) -> Result<Report> {
    let mut report = Report::new();
    match name {
        "gray" => {
            for n in 3..=12 {
                report.extend(gray_identities_check(n)?);
            }
        }
        "counts" => report.extend(count_identities(12)?),
        "lemmas" => report.extend(lemma_suite_takagi_with(40, &ctx.parabola)?),
        "grids" => {
            let (main, strict) = verify_certificate_grids_with(&ctx.parabola)?;
            report.push(main.to_check());
            report.push(strict.to_check());
        }
        "halftype" => {
            for n in 3..=12 {
                report.push(verify_half_type_grid_with(n, &ctx.parabola)?.to_check());
            }
        }
        "oracle" => {
            let cfg = ctx.scan_config();
            report.extend(small_cube_report(&cfg)?);
            let (table, scans) = compute_five_cube_table(&cfg)?;
            report.extend(table.verify_with(&ctx.parabola));
            report.push(hwl_core::oracle::harper_agreement_check(&scans));
            report.push(hwl_core::oracle::split_bound_check(&scans));
            report.push(half_type_theta_check(5, &scans, &cfg)?);
        }
        "search" => {
            for n in 2..=3 {
                report.push(search_check(n)?.0);
            }
        }
        "sweep" => {
            for n in [5, 6] {
                report.push(sweep_check(&random_sweep(n, count, seed)?));
            }
        }
        other => return Err(Error::Usage(format!("unknown section {other:?}"))),
    }
    Ok(report)
}

fn cmd_verify_all(ctx: &Ctx, skip: &[String], count: u64, seed: u64) -> Result<()> {
    if let Some(bad) = skip.iter().find(|s| !SECTIONS.contains(&s.as_str())) {
        return Err(Error::Usage(format!(
            "unknown section {bad:?}; known: {}",
            SECTIONS.join(",")
        )));
    }
    let mut all = Report::new();
    let mut body = String::new();
    for name in SECTIONS {
        if skip.iter().any(|s| s == name) {
            body.push_str(&format!("SKIP  {name}\n"));
            continue;
        }
        let start = Instant::now();
        let report = run_section(ctx, name, count, seed)?;
        eprintln!("{name}: {:.1}s", start.elapsed().as_secs_f64());
        let status = if report.passed() { "PASS" } else { "FAIL" };
        body.push_str(&format!(
            "{status}  {name}  ({} checks)\n",
            report.checks.len()
        ));
        for c in report.failures() {
            body.push_str(&format!(
                "      {}: {}\n",
                c.name,
                c.witness.as_deref().unwrap_or("")
            ));
        }
        all.extend(report);
    }
    match ctx.format_or(Format::Text) {
        Format::Json => ctx.emit(&to_json(&all)?)?,
        _ => ctx.emit(&body)?,
    }
    verification(&all)
}

fn parabola_from(cli: &Cli) -> Result<Parabola<Rational>> {
    let mut f = Parabola::<Rational>::standard();
    if let Some(c) = &cli.parabola_curvature {
        f.curvature = parse_rational(c)?;
    }
    if let Some(p) = &cli.parabola_peak {
        f.peak = parse_rational(p)?;
    }
    Ok(f)
}

fn run(cli: Cli) -> Result<()> {
    let workers = match cli.threads {
        Some(0) => return Err(Error::Usage("--threads must be at least 1".into())),
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, |p| p.get()),
    };
    // Ignore failure: the global pool may already exist in the same process.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global();
    let ctx = Ctx {
        format: cli.format,
        out: cli.out.clone(),
        workers,
        parabola: parabola_from(&cli)?,
    };
    match &cli.command {
        Command::Gray { n } => cmd_gray(&ctx, *n),
        Command::Wirelength { n, embedding, host } => {
            cmd_wirelength(&ctx, *n, embedding.as_deref(), *host)
        }
        Command::Theta { set, n, k, t, mode } => cmd_theta(&ctx, set.as_ref(), *n, *k, *t, *mode),
        Command::ThetaTable { n } => cmd_theta_table(&ctx, *n),
        Command::TypeSeq {
            n,
            embedding,
            series,
        } => cmd_type_seq(&ctx, *n, embedding.as_deref(), *series),
        Command::VerifyGrid { depth } => cmd_verify_grid(&ctx, *depth),
        Command::VerifyLemmas { n } => cmd_verify_lemmas(&ctx, *n),
        Command::BoundPipeline { n, embedding } => {
            cmd_bound_pipeline(&ctx, *n, embedding.as_deref())
        }
        Command::RandomSweep { n, count, seed } => cmd_random_sweep(&ctx, *n, *count, *seed),
        Command::Search { n } => cmd_search(&ctx, *n),
        Command::VerifyAll { skip, count, seed } => cmd_verify_all(&ctx, skip, *count, *seed),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hwl: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
