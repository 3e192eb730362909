//! Command-line front end of the `tre` binary.
//!
//! Exit codes: 0 on success, 1 when a verification check fails, 2 on usage,
//! parse or domain errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Result;
use crate::matfun::{trace_norm_distance, RankTolerance, Tolerances};
use crate::renyi::trre;
use crate::statefile::read_state_file;
use crate::states::DensityMatrix;
use crate::tre::{
    relative_entropy_to_mix, telescopic_relative_entropy, tre_limit_one, tre_limit_zero, tre_pure_closed_form,
    PureTREInputs,
};
use crate::verify::{run_fuzz, FuzzConfig, DEFAULT_SLACK};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// `a` values of the figure series.
pub const FIGURE_A_VALUES: [f64; 6] = [0.01, 0.1, 0.3, 0.5, 0.7, 0.9];
pub const FIGURE_POINTS: usize = 101;

#[derive(Parser, Debug)]
#[command(name = "tre", version, about = "Telescopic relative entropy toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate S_a, T, the limits S_0/S_1 and optionally Q_{p,a} for two states.
    Compute {
        /// State file for rho.
        #[arg(long)]
        rho: PathBuf,
        /// State file for sigma.
        #[arg(long)]
        sigma: PathBuf,
        #[arg(short, long)]
        a: f64,
        /// Renyi parameter in (0,1); adds Q_{p,a}.
        #[arg(short, long)]
        p: Option<f64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Report entropies in bits instead of nats.
        #[arg(long)]
        bits: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the data series of a figure as CSV.
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        /// Grid points along the horizontal axis.
        #[arg(long, default_value_t = FIGURE_POINTS)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the randomized inequality checks.
    Verify {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 4])]
        dims: Vec<usize>,
        /// Trials per dimension.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, env = "TRE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_SLACK, allow_hyphen_values = true)]
        slack: f64,
        #[arg(long, value_delimiter = ',')]
        a_grid: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        p_grid: Option<Vec<f64>>,
        /// Sample faithful pairs only.
        #[arg(long)]
        faithful_only: bool,
        /// Report path; the report goes to stdout otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed form of S_a for two pure states at trace distance t.
    Pure {
        #[arg(short, long)]
        t: f64,
        #[arg(short, long)]
        a: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
}

#[derive(Debug, Serialize)]
struct ToleranceInfo {
    rank_epsilon: f64,
    rank_mode: &'static str,
    support: f64,
    orthogonality: f64,
}

impl ToleranceInfo {
    fn for_dim(dim: usize) -> Self {
        let tol = Tolerances::default();
        let rank: RankTolerance = tol.rank_for(dim);
        Self {
            rank_epsilon: rank.epsilon_rank,
            rank_mode: "relative",
            support: tol.support,
            orthogonality: tol.orthogonality,
        }
    }
}

/// Output of `tre compute`.
#[derive(Debug, Serialize)]
pub struct ComputeRecord {
    pub dim: usize,
    pub a: f64,
    pub p: Option<f64>,
    pub units: &'static str,
    pub s_a: f64,
    pub trace_distance: f64,
    pub s0: f64,
    pub s1: f64,
    pub q: Option<f64>,
    /// `S(ρ||aρ+(1−a)σ)`; `None` when infinite.
    pub relative_entropy: Option<f64>,
    /// `−log(a)·T`.
    pub relative_entropy_bound: Option<f64>,
    tolerances: ToleranceInfo,
}

impl ComputeRecord {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64, p: Option<f64>, bits: bool) -> Result<Self> {
        let s_a = telescopic_relative_entropy(rho, sigma, a)?;
        let t = trace_norm_distance(rho, sigma)?;
        let q = p.map(|p| trre(rho, sigma, p, a)).transpose()?;
        let unit = if bits { std::f64::consts::LN_2 } else { 1.0 };
        let (relative_entropy, relative_entropy_bound) = if a > 0.0 {
            (
                Some(relative_entropy_to_mix(rho, sigma, a)? / unit),
                Some(-a.ln() * t / unit),
            )
        } else {
            match crate::tre::relative_entropy(rho, sigma)?.finite() {
                Some(v) => (Some(v / unit), None),
                None => (None, None),
            }
        };
        Ok(Self {
            dim: rho.dim(),
            a,
            p,
            units: if bits { "bits" } else { "nats" },
            s_a,
            trace_distance: t,
            s0: tre_limit_zero(rho, sigma)?,
            s1: tre_limit_one(rho, sigma)?,
            q,
            relative_entropy,
            relative_entropy_bound,
            tolerances: ToleranceInfo::for_dim(rho.dim()),
        })
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(String::new, |x| x.to_string());
        let mut s = format!(
            "# s_a, trace_distance, s0, s1, q are unitless; relative_entropy and relative_entropy_bound in {}\n",
            self.units
        );
        s.push_str("dim,a,p,s_a,trace_distance,s0,s1,q,relative_entropy,relative_entropy_bound\n");
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            self.dim,
            self.a,
            opt(self.p),
            self.s_a,
            self.trace_distance,
            self.s0,
            self.s1,
            opt(self.q),
            opt(self.relative_entropy),
            opt(self.relative_entropy_bound)
        );
        s
    }
}

/// Output of `tre pure`.
#[derive(Debug, Serialize)]
pub struct PureRecord {
    pub t: f64,
    pub a: f64,
    pub w: f64,
    pub s_a: f64,
    /// Common value `t²` of the `a → 0` and `a → 1` limits.
    pub limit: f64,
}

impl PureRecord {
    pub fn new(t: f64, a: f64) -> Result<Self> {
        let inputs = PureTREInputs::new(t, a)?;
        Ok(Self {
            t,
            a,
            w: inputs.w,
            s_a: tre_pure_closed_form(t, a)?,
            limit: t * t,
        })
    }

    pub fn to_csv(&self) -> String {
        format!(
            "# pure pair at trace distance t; limit is t^2\nt,a,w,s_a,limit\n{},{},{},{},{}\n",
            self.t, self.a, self.w, self.s_a, self.limit
        )
    }
}

/// Parameters of a figure series.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    pub points: usize,
    /// Curves of `fig1a`/`fig1b`; unused by the `fig2` series.
    pub a_values: Vec<f64>,
}

/// A CSV table with a leading comment line.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureTable {
    pub comment: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl FigureTable {
    pub fn to_csv(&self) -> String {
        let mut s = format!("# {}\n{}\n", self.comment, self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    /// Column by header name.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

fn grid(points: usize) -> Vec<f64> {
    (0..points).map(|k| k as f64 / (points - 1) as f64).collect()
}

impl FigureSpec {
    pub fn new(id: FigureId) -> Self {
        Self {
            id,
            points: FIGURE_POINTS,
            a_values: FIGURE_A_VALUES.to_vec(),
        }
    }

    pub fn table(&self) -> Result<FigureTable> {
        if self.points < 2 {
            return Err(crate::Error::ParameterOutOfRange {
                name: "points",
                value: self.points as f64,
                range: "[2, inf)",
            });
        }
        match self.id {
            FigureId::Fig1a | FigureId::Fig1b => {
                let rho = if self.id == FigureId::Fig1a {
                    DensityMatrix::from_diagonal(&[1.0, 0.0])?
                } else {
                    DensityMatrix::from_diagonal(&[2.0 / 3.0, 1.0 / 3.0])?
                };
                let mut header = vec!["x".to_string()];
                header.extend(self.a_values.iter().map(|a| format!("a={a}")));
                let mut rows = Vec::with_capacity(self.points);
                for x in grid(self.points) {
                    let sigma = DensityMatrix::from_diagonal(&[x, 1.0 - x])?;
                    let mut row = vec![x];
                    for &a in &self.a_values {
                        row.push(telescopic_relative_entropy(&rho, &sigma, a)?);
                    }
                    rows.push(row);
                }
                let rho_desc = if self.id == FigureId::Fig1a {
                    "|0><0|"
                } else {
                    "diag(2/3,1/3)"
                };
                Ok(FigureTable {
                    comment: format!("x; S_a(rho||sigma) with rho={rho_desc}, sigma=diag(x,1-x), one column per a"),
                    header,
                    rows,
                })
            }
            FigureId::Fig2a | FigureId::Fig2b => {
                let rho = DensityMatrix::maximally_mixed(2)?;
                let sigma = if self.id == FigureId::Fig2a {
                    DensityMatrix::from_diagonal(&[0.0, 1.0])?
                } else {
                    DensityMatrix::from_diagonal(&[0.2, 0.8])?
                };
                // a = 0 and a = 1 evaluate the closed-form limits
                let rows = grid(self.points)
                    .into_iter()
                    .map(|a| Ok(vec![a, telescopic_relative_entropy(&rho, &sigma, a)?]))
                    .collect::<Result<Vec<_>>>()?;
                let sigma_desc = if self.id == FigureId::Fig2a {
                    "|1><1|"
                } else {
                    "diag(1/5,4/5)"
                };
                Ok(FigureTable {
                    comment: format!("a; S_a(rho||sigma) with rho=I/2, sigma={sigma_desc}; endpoints are S_0 and S_1"),
                    header: vec!["a".to_string(), "s_a".to_string()],
                    rows,
                })
            }
        }
    }
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> std::result::Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("records serialize") + "\n"
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> std::result::Result<i32, String> {
    match cmd {
        Command::Compute {
            rho,
            sigma,
            a,
            p,
            format,
            bits,
            out,
        } => {
            let r = read_state_file(&rho).map_err(|e| format!("rho: {e}"))?;
            let s = read_state_file(&sigma).map_err(|e| format!("sigma: {e}"))?;
            let rec = ComputeRecord::new(&r, &s, a, p, bits).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => json(&rec),
                Format::Csv => rec.to_csv(),
            };
            emit(out.as_deref(), &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Figure { id, points, out } => {
            let spec = FigureSpec {
                points,
                ..FigureSpec::new(id)
            };
            let table = spec.table().map_err(|e| e.to_string())?;
            emit(out.as_deref(), &table.to_csv(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            dims,
            trials,
            seed,
            slack,
            a_grid,
            p_grid,
            faithful_only,
            out,
        } => {
            let defaults = FuzzConfig::default();
            let config = FuzzConfig {
                dims,
                trials,
                seed,
                slack,
                a_grid: a_grid.unwrap_or(defaults.a_grid),
                p_grid: p_grid.unwrap_or(defaults.p_grid),
                include_rank_deficient: !faithful_only,
            };
            let report = run_fuzz(&config).map_err(|e| e.to_string())?;
            emit(out.as_deref(), &(report.to_json() + "\n"), stdout)?;
            for c in &report.checks {
                let worst = c.worst_margin.map_or_else(|| "error".to_string(), |m| format!("{m:e}"));
                let _ = writeln!(
                    stderr,
                    "{} {:<16} trials={} failures={} tight={} worst_margin={}",
                    if c.passed { "PASS" } else { "FAIL" },
                    serde_json::to_value(c.name).expect("name").as_str().unwrap_or_default(),
                    c.trials,
                    c.failures,
                    c.tight,
                    worst
                );
            }
            Ok(if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::Pure { t, a, format } => {
            let rec = PureRecord::new(t, a).map_err(|e| e.to_string())?;
            let text = match format {
                Format::Json => json(&rec),
                Format::Csv => rec.to_csv(),
            };
            stdout.write_all(text.as_bytes()).map_err(|e| e.to_string())?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = stdout.write_all(rendered.as_bytes());
                return EXIT_OK;
            }
            let _ = stderr.write_all(rendered.as_bytes());
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}
