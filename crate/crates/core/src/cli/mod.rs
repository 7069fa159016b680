//! Command-line front end.

pub mod cache;
pub mod report;
mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cuspidal::{absolutely_cuspidal, ip_general, CuspidalTable};
use crate::error::{Error, Result};
use crate::gkm::{gkm_dims, EngineConfig, WeightFunction};
use crate::kac::{field::MAX_Q, hua_kac, oracle_kac_table, Flavour, KacTable, DEFAULT_FIELDS};
use crate::nakajima::lw_decompose;
use crate::poly::QPoly;
use crate::quiver::{DimVector, Quiver};
use crate::roots::{canonical_decomposition_with, RootTables};
use cache::Cache;
use report::{Report, Section};

#[derive(Parser, Debug)]
#[command(name = "qgk", version, about = "Kac, cuspidal and GKM character tables for quivers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    pub format: Format,

    /// Memo directory; overrides QGK_CACHE_DIR.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads for the parallel engines.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Hua,
    Oracle,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Quiver JSON file.
    pub quiver: PathBuf,

    #[arg(long, default_value_t = 4)]
    pub bound: u32,

    #[arg(long, default_value = "plain")]
    pub flavour: Flavour,

    /// Prime powers for the finite-field oracle.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_FIELDS.to_vec())]
    pub fields: Vec<u32>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sigma, Phi+ and root classes.
    Roots(Common),
    /// Kac polynomials.
    Kac {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Hua)]
        method: Method,
    },
    /// Absolutely cuspidal and cuspidal polynomials.
    Cuspidal(Common),
    /// Intersection Poincaré polynomials.
    Ip {
        #[command(flatten)]
        common: Common,
        /// A single dimension vector; all up to the bound when absent.
        #[arg(long)]
        dim: Option<String>,
    },
    /// Canonical decompositions.
    CanonicalDecomp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: Option<String>,
    },
    /// Graded dimensions of the positive half of a GKM algebra.
    GkmDims {
        #[command(flatten)]
        common: Common,
        /// Weight function JSON: {"weights": {"1,0": "1", ...}}.
        #[arg(long, conflicts_with = "from_kac")]
        weights: Option<PathBuf>,
        /// Use the absolutely cuspidal polynomials as weight function.
        #[arg(long)]
        from_kac: bool,
    },
    /// Lowest-weight decomposition of a framed character.
    NakajimaDecomp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        framing: String,
    },
    /// Runs the invariant suite.
    Verify(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Roots(c) | Command::Cuspidal(c) | Command::Verify(c) => c,
            Command::Kac { common, .. }
            | Command::Ip { common, .. }
            | Command::CanonicalDecomp { common, .. }
            | Command::GkmDims { common, .. }
            | Command::NakajimaDecomp { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Roots(_) => "roots",
            Command::Kac { .. } => "kac",
            Command::Cuspidal(_) => "cuspidal",
            Command::Ip { .. } => "ip",
            Command::CanonicalDecomp { .. } => "canonical-decomp",
            Command::GkmDims { .. } => "gkm-dims",
            Command::NakajimaDecomp { .. } => "nakajima-decomp",
            Command::Verify(_) => "verify",
        }
    }

    /// Everything besides the quiver that determines the output.
    fn request(&self, extra: &str) -> String {
        let c = self.common();
        let extra_args = match self {
            Command::Kac { method, .. } => format!("method={method:?}"),
            Command::Ip { dim, .. } | Command::CanonicalDecomp { dim, .. } => format!("dim={dim:?}"),
            Command::GkmDims { from_kac, .. } => format!("from_kac={from_kac} weights={extra}"),
            Command::NakajimaDecomp { framing, .. } => format!("framing={framing}"),
            _ => String::new(),
        };
        format!(
            "{}\nbound={}\nflavour={}\nfields={:?}\n{extra_args}\n",
            self.name(),
            c.bound,
            c.flavour,
            c.fields
        )
    }
}

fn validate(c: &Common) -> Result<()> {
    if c.bound < 1 {
        return Err(Error::InvalidArgument("--bound must be at least 1".into()));
    }
    let mut seen = c.fields.clone();
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != c.fields.len() {
        return Err(Error::InvalidArgument("--fields must be distinct".into()));
    }
    if let Some(v) = c
        .fields
        .iter()
        .find(|&&v| v > MAX_Q || crate::kac::field::prime_power(v).is_none())
    {
        return Err(Error::InvalidArgument(format!("{v} is not a prime power <= {MAX_Q}")));
    }
    Ok(())
}

fn dim_key(d: &DimVector) -> String {
    d.to_string()
}

fn poly_section(name: &str, rows: impl IntoIterator<Item = (DimVector, QPoly)>, var: &str) -> Section {
    let mut s = Section::new(name, &["dimvector", "polynomial"]);
    for (d, p) in rows {
        s.push(vec![dim_key(&d), p.render_var(var)]);
    }
    s
}

fn kac_table(q: &Quiver, c: &Common, method: Method) -> Result<KacTable> {
    match (method, c.flavour) {
        (Method::Hua, Flavour::Plain) => hua_kac(q, c.bound),
        (Method::Hua, f) => Err(Error::InvalidArgument(format!(
            "Hua's formula gives the plain flavour only; use --method oracle for {f}"
        ))),
        (Method::Oracle, f) => oracle_kac_table(q, c.bound, f, &c.fields),
    }
}

fn cuspidal_table(q: &Quiver, c: &Common) -> Result<CuspidalTable> {
    absolutely_cuspidal(q, c.bound, c.flavour, &c.fields, EngineConfig::default())
}

fn read_weights(q: &Quiver, tables: &RootTables, path: &Path) -> Result<WeightFunction> {
    #[derive(serde::Deserialize)]
    #[serde(deny_unknown_fields)]
    struct File {
        weights: BTreeMap<String, String>,
    }
    let file: File = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let mut map = BTreeMap::new();
    for (d, p) in file.weights {
        map.insert(q.parse_dim(&d)?, p.parse::<QPoly>()?);
    }
    WeightFunction::new(tables, map)
}

fn execute(cmd: &Command, q: &Quiver) -> Result<Report> {
    let c = cmd.common();
    let mut r = Report::new(cmd.name());
    r.note(format!("bound={} flavour={}", c.bound, c.flavour));
    match cmd {
        Command::Roots(_) => {
            let t = RootTables::for_quiver(q, c.bound);
            let mut s = Section::new("phi+", &["dimvector", "class", "p", "sigma"]);
            for e in t.phi_plus() {
                s.push(vec![
                    dim_key(&e.dim),
                    e.class.name().to_string(),
                    e.p.to_string(),
                    if e.in_sigma { "yes" } else { "no" }.to_string(),
                ]);
            }
            r.sections.push(s);
        }
        Command::Kac { method, .. } => {
            let t = kac_table(q, c, *method)?;
            r.note("A_d(q)");
            r.sections.push(poly_section(
                "kac",
                t.iter()
                    .filter(|(_, a)| !a.is_zero())
                    .map(|(d, a)| (d.clone(), a.clone())),
                "q",
            ));
        }
        Command::Cuspidal(_) => {
            let t = cuspidal_table(q, c)?;
            r.sections.push(poly_section("C_abs", t.abs.clone(), "q"));
            r.sections.push(poly_section("C", t.cusp.clone(), "q"));
        }
        Command::Ip { dim, .. } => {
            let dims = match dim {
                Some(s) => vec![q.parse_dim(s)?],
                None => DimVector::all_up_to(q.rank(), c.bound, None)
                    .into_iter()
                    .skip(1)
                    .collect(),
            };
            let bound = dims.iter().map(DimVector::total).max().unwrap_or(1).max(1);
            let t = absolutely_cuspidal(q, bound, c.flavour, &c.fields, EngineConfig::default())?;
            r.note("IP(v): v^j counts classes in full cohomological degree j, shifted so that smooth points of an n-dimensional component contribute v^-n");
            let rows = dims
                .into_iter()
                .map(|d| Ok((d.clone(), ip_general(&t, &d)?)))
                .collect::<Result<Vec<_>>>()?;
            r.sections.push(poly_section("ip", rows, "v"));
        }
        Command::CanonicalDecomp { dim, .. } => {
            let dims = match dim {
                Some(s) => vec![q.parse_dim(s)?],
                None => DimVector::all_up_to(q.rank(), c.bound, None)
                    .into_iter()
                    .skip(1)
                    .collect(),
            };
            let bound = dims.iter().map(DimVector::total).max().unwrap_or(1).max(1);
            let t = RootTables::for_quiver(q, bound);
            let mut s = Section::new("canonical", &["dimvector", "decomposition"]);
            for d in dims {
                let parts = canonical_decomposition_with(&t, &d, &|_| {})?;
                let text: Vec<String> = parts
                    .iter()
                    .map(|(p, m)| {
                        if *m == 1 {
                            format!("{p:?}")
                        } else {
                            format!("{m}*{p:?}")
                        }
                    })
                    .collect();
                s.push(vec![dim_key(&d), text.join(" + ")]);
            }
            r.sections.push(s);
        }
        Command::GkmDims { weights, from_kac, .. } => {
            let tables = RootTables::for_quiver(q, c.bound);
            let w = match (weights, from_kac) {
                (Some(path), _) => read_weights(q, &tables, path)?,
                (None, true) => {
                    let t = cuspidal_table(q, c)?;
                    WeightFunction::new(&tables, t.abs)?
                }
                (None, false) => return Err(Error::InvalidArgument("gkm-dims needs --weights or --from-kac".into())),
            };
            let table = gkm_dims(&tables, &w, c.bound, EngineConfig::default())?;
            r.note("dim n+_d as sum_j dim q^(j/2)");
            let dims = DimVector::all_up_to(q.rank(), c.bound, None).into_iter().skip(1);
            r.sections.push(poly_section(
                "gkm",
                dims.map(|d| (d.clone(), table.dims(&d))).filter(|(_, p)| !p.is_zero()),
                "q",
            ));
        }
        Command::NakajimaDecomp { framing, .. } => {
            let f = q.parse_dim(framing)?;
            let out = lw_decompose(q, &f, c.bound, EngineConfig::default())?;
            r.note(format!("framing={f}; characters in q^-1 convention"));
            r.sections.push(poly_section(
                "framed",
                out.framed.iter().map(|(d, p)| (d.clone(), p.clone())),
                "q",
            ));
            let mut blocks = Section::new("blocks", &["dimvector", "multiplicity", "weight"]);
            let mut chars = Section::new("chL", &["block", "dimvector", "polynomial"]);
            for b in &out.blocks {
                let w: Vec<String> = b.weight.iter().map(i64::to_string).collect();
                blocks.push(vec![dim_key(&b.dim), b.multiplicity.render(), w.join(",")]);
                for (e, p) in b.chl.iter() {
                    chars.push(vec![dim_key(&b.dim), dim_key(e), p.render()]);
                }
            }
            r.sections.push(blocks);
            r.sections.push(chars);
        }
        Command::Verify(_) => {
            let mut s = Section::new("verify", &["property", "status", "detail"]);
            for (name, outcome) in verify::run_suite(q, c)? {
                let (status, detail) = match outcome {
                    Ok(()) => ("PASS", String::new()),
                    Err(e) => ("FAIL", e),
                };
                s.push(vec![name.to_string(), status.to_string(), detail]);
            }
            r.sections.push(s);
        }
    }
    Ok(r)
}

fn run_parsed(cli: &Cli) -> Result<Report> {
    let c = cli.command.common();
    validate(c)?;
    let text = std::fs::read_to_string(&c.quiver)?;
    let q = Quiver::from_json(&text)?;
    let weights_text = match &cli.command {
        Command::GkmDims { weights: Some(p), .. } => std::fs::read_to_string(p)?,
        _ => String::new(),
    };
    let cache = match cli.command {
        Command::Verify(_) => None,
        _ => Cache::resolve(cli.cache_dir.as_deref()),
    };
    let key = Cache::key(&q.to_json(), &cli.command.request(&weights_text));
    if let Some(hit) = cache.as_ref().and_then(|c| c.load(&key)) {
        return Ok(hit);
    }
    let report = with_threads(cli.threads, || execute(&cli.command, &q))??;
    if let Some(cache) = &cache {
        cache.store(&key, &report)?;
    }
    Ok(report)
}

#[cfg(feature = "parallel")]
fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn with_threads<T: Send>(_threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    Ok(f())
}

/// Parses `args`, runs the command and writes the report. Returns the exit
/// code: 0 on success, 1 on invalid input, 2 on a failed internal assertion.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run_parsed(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Tsv => report.to_tsv(),
                Format::Json => report.to_json(),
            };
            let _ = out.write_all(text.as_bytes());
            let failed = report
                .sections
                .iter()
                .filter(|s| s.name == "verify")
                .flat_map(|s| &s.rows)
                .any(|row| row[1] == "FAIL");
            if failed {
                2
            } else {
                0
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

/// 2 for a failed internal assertion, 1 for anything the user can fix.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_internal() {
        2
    } else {
        1
    }
}
