use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sgrover::bloch::{band, finite_quotient_check, QuotientReport};
use sgrover::complex::{parse_complex_bytes, Complex, Generator, Mode};
use sgrover::linalg::{BasisIndex, LinearMap};
use sgrover::operators::{build_discriminant, build_edge_ops, build_g_walk, lap_down, lap_up, laplacian, Basis};
use sgrover::spectra::{eigvals_hermitian, eigvals_unitary, EigKind, SpectrumReport, CLUSTER_TOL};
use sgrover::walk::{
    down_report, eigenfunction_report, eigenvalue_one_function, ordered_report, symmetric_f, up_report, FChoice,
};
use sgrover::{verify, Error};

#[derive(Parser)]
#[command(name = "sgrover", version, about = "Grover walks and discriminants on simplicial complexes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the standing assumptions (pure, strongly connected) and print simplex counts.
    Validate(Source),
    /// Print an operator matrix with its basis labels.
    Matrix(OpArgs),
    /// Eigenvalues with multiplicities.
    Spectrum(OpArgs),
    /// Run every identity and equivalence check on one complex.
    Verify {
        #[command(flatten)]
        src: Source,
        /// Residual tolerance for the identity checks.
        #[arg(long, default_value_t = verify::IDENTITY_TOL)]
        identity_tol: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Evolve a stationary state and tabulate finding probabilities.
    Walk(WalkArgs),
    /// Band curves of the cylinder symbols.
    Bloch(BlochArgs),
}

#[derive(Args)]
struct Source {
    /// Named generator: simplex, skeleton, sphere, fig5, cylinder-strip, moebius-strip, cylinder3, random.
    #[arg(long = "gen", conflicts_with = "input", required_unless_present = "input")]
    generator: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    /// Facet file: one simplex per line, whitespace-separated vertex labels, `#` comments.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Seed for the random generator and randomized checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Skip the pure / strongly connected requirement.
    #[arg(long)]
    allow_degenerate: bool,
}

impl Source {
    fn load(&self) -> Result<Complex, Error> {
        let c = match (&self.generator, &self.input) {
            (Some(name), _) => Generator::from_name(name, self.n, self.k, self.m, Some(self.seed))?.build()?,
            (None, Some(path)) => {
                let bytes = fs::read(path)
                    .map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
                parse_complex_bytes(&bytes)?
            }
            (None, None) => return Err(Error::InvalidParams("need --gen or --input".into())),
        };
        Ok(c.with_override(self.allow_degenerate))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, json: impl Serialize, csv: impl FnOnce() -> String) -> Result<(), Error> {
        let text = match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&json).map_err(|e| Error::Numeric(e.to_string()))?;
                s.push('\n');
                s
            }
            Format::Csv => csv(),
        };
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| Error::Precondition(format!("{}: {e}", p.display()))),
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Error::Precondition(e.to_string())),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Op {
    DiscUp,
    DiscDown,
    Lap,
    LapUp,
    LapDown,
    WalkUp,
    WalkDown,
    GWalk,
    Dg,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Full,
    Reduced,
}

#[derive(Args)]
struct OpArgs {
    #[command(flatten)]
    src: Source,
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum)]
    op: Op,
    /// Basis for discriminants; Laplacians are always reduced.
    #[arg(long, value_enum, default_value = "reduced")]
    basis: BasisArg,
    /// Clustering tolerance for multiplicities.
    #[arg(long, default_value_t = CLUSTER_TOL)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

fn build_op(c: &Complex, a: &OpArgs) -> Result<(LinearMap, EigKind), Error> {
    let basis = match a.basis {
        BasisArg::Full => Basis::Full,
        BasisArg::Reduced => Basis::Reduced,
    };
    let q = a.q;
    let lap = |f: fn(&Complex, usize) -> sgrover::linalg::CMat| -> Result<(LinearMap, EigKind), Error> {
        if q > c.dim() {
            return Err(Error::DimensionOutOfRange { q, lo: 0, hi: c.dim() });
        }
        Ok((LinearMap::square(BasisIndex::reduced(c, q, None), f(c, q))?, EigKind::Hermitian))
    };
    match a.op {
        Op::DiscUp => Ok((build_discriminant(c, q, Mode::Up, basis)?, EigKind::Hermitian)),
        Op::DiscDown => Ok((build_discriminant(c, q, Mode::Down, basis)?, EigKind::Hermitian)),
        Op::Lap => lap(laplacian),
        Op::LapUp => lap(lap_up),
        Op::LapDown => lap(lap_down),
        Op::WalkUp => Ok((build_edge_ops(c, q, Mode::Up)?.u, EigKind::Unitary)),
        Op::WalkDown => Ok((build_edge_ops(c, q, Mode::Down)?.u, EigKind::Unitary)),
        Op::GWalk => Ok((build_g_walk(c, q)?.g, EigKind::Unitary)),
        Op::Dg => Ok((build_g_walk(c, q)?.discriminant(), EigKind::Hermitian)),
    }
}

fn cmd_matrix(a: &OpArgs) -> Result<(), Error> {
    let c = a.src.load()?;
    let (m, _) = build_op(&c, a)?;
    a.out.emit(m.to_json(), || m.to_csv())
}

fn cmd_spectrum(a: &OpArgs) -> Result<(), Error> {
    positive("--tol", a.tol)?;
    let c = a.src.load()?;
    let (m, kind) = build_op(&c, a)?;
    let raw = match kind {
        EigKind::Hermitian => eigvals_hermitian(&m.mat)?.into_iter().map(sgrover::linalg::c).collect(),
        EigKind::Unitary => eigvals_unitary(&m.mat)?,
    };
    let rep = SpectrumReport::from_values(raw, kind, m.rows.space, a.tol);
    a.out.emit(&rep, || {
        let mut s = String::from("re,im,multiplicity\n");
        for e in &rep.eigenvalues {
            s.push_str(&format!("{},{},{}\n", e.re, e.im, e.multiplicity));
        }
        s
    })
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WalkKindArg {
    Up,
    Down,
    Ordered,
    OrderedFpp1,
}

#[derive(Clone, Copy, ValueEnum)]
enum FArg {
    Constant,
    Random,
    Fsigma,
    Auto,
}

#[derive(Args)]
struct WalkArgs {
    #[command(flatten)]
    src: Source,
    /// Dimension of the initial function f (for ordered-fpp1: dimension of the ordered walk).
    #[arg(long)]
    q: usize,
    #[arg(long, value_enum)]
    kind: WalkKindArg,
    /// Initial function; defaults to constant, or fsigma for ordered-fpp1.
    #[arg(long, value_enum)]
    f: Option<FArg>,
    #[arg(long, default_value_t = 20)]
    steps: usize,
    /// Residual tolerance for stationarity and the probability identities.
    #[arg(long, default_value_t = sgrover::walk::IDENTITY_TOL)]
    identity_tol: f64,
    #[command(flatten)]
    out: Output,
}

fn positive(flag: &str, v: f64) -> Result<(), Error> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{flag} must be positive")))
    }
}

fn cmd_walk(a: &WalkArgs) -> Result<bool, Error> {
    positive("--identity-tol", a.identity_tol)?;
    let c = a.src.load()?;
    let fpp1 = a.kind == WalkKindArg::OrderedFpp1;
    let choice = match a.f.unwrap_or(if fpp1 { FArg::Fsigma } else { FArg::Constant }) {
        FArg::Constant => FChoice::Constant,
        FArg::Random => FChoice::Random(a.src.seed),
        FArg::Fsigma => FChoice::FSigma,
        FArg::Auto => FChoice::Auto,
    };
    let rep = if fpp1 {
        let f = eigenvalue_one_function(&c, a.q, choice)?;
        eigenfunction_report(&c, a.q, &f, a.steps)?
    } else {
        if a.q > c.dim() {
            return Err(Error::DimensionOutOfRange { q: a.q, lo: 0, hi: c.dim() });
        }
        let f = symmetric_f(&c, a.q, choice)?;
        match a.kind {
            WalkKindArg::Up => up_report(&c, a.q, &f, a.steps)?,
            WalkKindArg::Down => down_report(&c, a.q, &f, a.steps)?,
            _ => ordered_report(&c, a.q, &f, a.steps)?,
        }
    }
    .with_tolerance(a.identity_tol);
    a.out.emit(&rep, || rep.table.to_csv())?;
    Ok(rep.pass)
}

#[derive(Args)]
struct BlochArgs {
    /// Which down discriminant: 1 or 2.
    #[arg(long)]
    dq: usize,
    #[arg(long, default_value_t = 360)]
    samples: usize,
    /// Also compare with the periodic quotient cylinder3(N).
    #[arg(long)]
    quotient: Option<usize>,
    #[command(flatten)]
    out: Output,
}

#[derive(Serialize)]
struct BlochOut {
    band: sgrover::bloch::BandReport,
    quotient: Option<QuotientReport>,
}

fn cmd_bloch(a: &BlochArgs) -> Result<bool, Error> {
    let b = band(a.dq, a.samples)?;
    let quotient = a.quotient.map(finite_quotient_check).transpose()?;
    let ok = quotient.as_ref().is_none_or(|q| q.pass);
    if let Some(q) = &quotient {
        eprintln!(
            "quotient N={}: d2 {} (max diff {:.3e}), d1 {} (max diff {:.3e})",
            q.n,
            if q.d2_match { "match" } else { "MISMATCH" },
            q.d2_max_diff,
            if q.d1_match { "match" } else { "MISMATCH" },
            q.d1_max_diff
        );
    }
    let out = BlochOut { band: b, quotient };
    a.out.emit(&out, || out.band.to_csv())?;
    Ok(ok)
}

fn init_threads() {
    if let Some(n) = std::env::var("SGROVER_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // ignore a second initialization; the pool is global
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.cmd {
        Cmd::Validate(src) => {
            let c = src.load()?;
            let r = c.validate();
            println!("{}", serde_json::to_string_pretty(&r).map_err(|e| Error::Numeric(e.to_string()))?);
            if !r.ok() && !src.allow_degenerate {
                c.require_assumptions()?;
            }
            Ok(true)
        }
        Cmd::Matrix(a) => cmd_matrix(&a).map(|_| true),
        Cmd::Spectrum(a) => cmd_spectrum(&a).map(|_| true),
        Cmd::Verify { src, identity_tol, out } => {
            positive("--identity-tol", identity_tol)?;
            let c = src.load()?;
            let rep = verify::suite(&c, src.seed)?.with_tolerance(identity_tol);
            out.emit(&rep, || {
                let mut s = String::from("check,status,residual,detail\n");
                for k in &rep.checks {
                    s.push_str(&format!(
                        "{},{:?},{},\"{}\"\n",
                        k.name,
                        k.status,
                        k.residual.map(|r| r.to_string()).unwrap_or_default(),
                        k.detail.replace('"', "\"\"")
                    ));
                }
                s
            })?;
            for f in rep.failures() {
                eprintln!("FAIL {}: {}", f.name, f.detail);
            }
            Ok(rep.pass)
        }
        Cmd::Walk(a) => cmd_walk(&a),
        Cmd::Bloch(a) => cmd_bloch(&a),
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(5),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
