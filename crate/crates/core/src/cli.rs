//! Command-line front end. [`run`] is what the `gvkit` binary executes; it
//! takes its output streams as arguments so it can be driven in-process.
//!
//! Artifacts go to `--out` (or stdout); human-readable summaries go to
//! stderr. Exit codes: 0 success, 1 usage, 2 schema, 3 failed check.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cech::Nerve;
use crate::grr::{self, Cy3Data, GrrModel, RandomPath};
use crate::gvgw;
use crate::k3hilb;
use crate::schema::{
    self, CechJson, ChernJson, ConfigJson, CoverJson, GvTableJson, GwTableJson, K3ReportJson,
    ParityBatchJson, ParityJson, ParityRunJson,
};

pub const CONFIG_ENV: &str = "GVKIT_CONFIG";

const DEFAULT_KMAX: u32 = 5;
const DEFAULT_GMAX: u32 = 3;
const DEFAULT_HMAX: u32 = 3;
const DEFAULT_DMAX: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "gvkit", version, about = "Exact Gopakumar-Vafa toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format (default csv).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GV invariants of K3 fiber classes, checked against the KKV product.
    K3 {
        /// Largest fiber degree k (default 5).
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// GW invariants from a GV table.
    Gw {
        /// GV table JSON file (a k3 JSON report is accepted).
        #[arg(long)]
        gv: PathBuf,
        /// Largest genus g (default 3).
        #[arg(long)]
        gmax: Option<u32>,
        /// Largest degree d (default 5).
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// GV invariants from a GW table.
    GvInvert {
        /// GW table JSON file.
        #[arg(long)]
        gw: PathBuf,
        /// Largest genus h (default 3).
        #[arg(long)]
        hmax: Option<u32>,
        /// Largest degree d (default 5).
        #[arg(long)]
        dmax: Option<u32>,
    },
    /// Parity of c1 of the determinant of Ext_pi(E, E).
    Parity {
        /// Chern data JSON file.
        #[arg(long, required_unless_present = "random", conflicts_with = "random")]
        chern: Option<PathBuf>,
        /// Check this many seeded random datasets instead of a file.
        #[arg(long)]
        random: Option<u32>,
        /// Seed for --random (default 0).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Obstruction class and square-root torsor of a cover.
    Cech {
        /// Cover JSON file.
        #[arg(long)]
        cover: PathBuf,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Schema(String),
    Check(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Schema(_) => 2,
            CliError::Check(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
/// `config` is the path from `GVKIT_CONFIG`, if set.
pub fn run<I, T>(args: I, config: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
        }
    };
    match execute(&cli, config, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.code()
        }
    }
}

struct Settings {
    config: ConfigJson,
    format: Format,
}

impl Settings {
    fn load(cli: &Cli, path: Option<&Path>) -> Result<Self> {
        let config = match path {
            Some(p) => schema::parse::<ConfigJson>(&read(p)?)
                .map_err(|e| CliError::Schema(format!("{}: {e}", p.display())))?,
            None => ConfigJson::default(),
        };
        let format = match (cli.format, config.format.as_deref()) {
            (Some(f), _) => f,
            (None, Some("csv")) | (None, None) => Format::Csv,
            (None, Some("json")) => Format::Json,
            (None, Some(other)) => {
                return Err(CliError::Schema(format!("config field `format`: unknown format `{other}`")))
            }
        };
        Ok(Self { config, format })
    }

    fn pick(flag: Option<u32>, config: Option<u32>, default: u32) -> u32 {
        flag.or(config).unwrap_or(default)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    schema::parse(&read(path)?).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, stdout: &mut dyn Write, body: &[u8]) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => stdout
            .write_all(body)
            .map_err(|e| CliError::Usage(format!("cannot write to stdout: {e}"))),
    }
}

fn csv_bytes<R: Serialize>(header: &[&str], rows: impl IntoIterator<Item = R>) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory write")
}

fn execute(cli: &Cli, config: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let settings = Settings::load(cli, config)?;
    let out = cli.out.as_deref();
    let format = settings.format;
    let cfg = &settings.config;
    match &cli.command {
        Command::K3 { kmax } => cmd_k3(Settings::pick(*kmax, cfg.kmax, DEFAULT_KMAX), format, out, stdout, stderr),
        Command::Gw { gv, gmax, dmax } => cmd_gw(
            gv,
            Settings::pick(*gmax, cfg.gmax, DEFAULT_GMAX),
            Settings::pick(*dmax, cfg.dmax, DEFAULT_DMAX),
            format,
            out,
            stdout,
        ),
        Command::GvInvert { gw, hmax, dmax } => cmd_gv_invert(
            gw,
            Settings::pick(*hmax, cfg.hmax, DEFAULT_HMAX),
            Settings::pick(*dmax, cfg.dmax, DEFAULT_DMAX),
            format,
            out,
            stdout,
        ),
        Command::Parity { chern: Some(path), .. } => cmd_parity(path, format, out, stdout, stderr),
        Command::Parity { random, seed, .. } => {
            let count = random.expect("clap enforces --chern or --random");
            cmd_parity_random(count, seed.or(cfg.seed).unwrap_or(0), format, out, stdout, stderr)
        }
        Command::Cech { cover } => cmd_cech(cover, format, out, stdout, stderr),
    }
}

fn cmd_k3(kmax: u32, format: Format, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    if kmax == 0 {
        return Err(CliError::Usage("--kmax must be at least 1".into()));
    }
    let (gv, kkv, mismatch) = match k3hilb::verify_kkv(kmax).map_err(|e| CliError::Check(e.to_string()))? {
        Ok(rep) => (rep.gv, rep.kkv, None),
        Err(m) => {
            let text = m.to_string();
            (m.report.gv, m.report.kkv, Some(text))
        }
    };
    let body = match format {
        Format::Json => schema::to_json(&K3ReportJson::new(&gv, &kkv, mismatch.is_none())).into_bytes(),
        Format::Csv => {
            let rows = [&gv, &kkv]
                .into_iter()
                .flat_map(|t| t.rows().into_iter().map(move |(h, k, n)| (t.provenance.to_string(), h, k, n.to_string())));
            csv_bytes(&["source", "h", "k", "n"], rows)
        }
    };
    emit(out, stdout, &body)?;
    match mismatch {
        None => {
            let _ = writeln!(stderr, "KKV check passed: n_h(k) = r_h(k) for all h <= k <= {kmax}");
            Ok(0)
        }
        Some(m) => Err(CliError::Check(m)),
    }
}

fn cmd_gw(gv_path: &Path, gmax: u32, dmax: u32, format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    if dmax == 0 {
        return Err(CliError::Usage("--dmax must be at least 1".into()));
    }
    let table: GvTableJson = parse_file(gv_path)?;
    let gv = table
        .to_invariants()
        .map_err(|e| CliError::Schema(format!("{}: {e}", gv_path.display())))?;
    let gw = gvgw::gv_to_gw(&gv, gmax, dmax).map_err(|e| CliError::Usage(e.to_string()))?;
    let json = GwTableJson::from_invariants(&gw);
    let body = match format {
        Format::Json => schema::to_json(&json).into_bytes(),
        Format::Csv => csv_bytes(
            &["g", "d", "num", "den"],
            json.entries
                .iter()
                .map(|e| (e.g, e.d, e.num.0.to_string(), e.den.0.to_string())),
        ),
    };
    emit(out, stdout, &body)?;
    Ok(0)
}

fn cmd_gv_invert(gw_path: &Path, hmax: u32, dmax: u32, format: Format, out: Option<&Path>, stdout: &mut dyn Write) -> Result<i32> {
    if dmax == 0 {
        return Err(CliError::Usage("--dmax must be at least 1".into()));
    }
    let table: GwTableJson = parse_file(gw_path)?;
    let gw = table
        .to_invariants()
        .map_err(|e| CliError::Schema(format!("{}: {e}", gw_path.display())))?;
    let gv = gvgw::gw_to_gv(&gw, hmax, dmax).map_err(|e| match e {
        gvgw::GvgwError::NonIntegral { .. } => CliError::Check(e.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    let json = GvTableJson::from_invariants(&gv);
    let body = match format {
        Format::Json => schema::to_json(&json).into_bytes(),
        Format::Csv => csv_bytes(
            &["h", "k", "n"],
            json.entries.iter().map(|e| (e.h, e.k, e.n.0.to_string())),
        ),
    };
    emit(out, stdout, &body)?;
    Ok(0)
}

fn x_term_rows<'a>(quantity: &'a str, terms: &'a [schema::XTermJson]) -> impl Iterator<Item = (String, String, String, String)> + 'a {
    terms.iter().map(move |t| {
        (
            quantity.to_owned(),
            t.x_monomial.join("*"),
            t.num.0.to_string(),
            t.den.0.to_string(),
        )
    })
}

fn cmd_parity(path: &Path, format: Format, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let input: ChernJson = parse_file(path)?;
    let (model, cd) = input
        .to_model()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let report = model.parity_check(&cd).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let json = ParityJson::new(&model, &cd, &report);
    let body = match format {
        Format::Json => schema::to_json(&json).into_bytes(),
        Format::Csv => {
            let mut rows: Vec<_> = x_term_rows("c1", &json.c1).collect();
            if let (Some(a), Some(i)) = (&json.alpha2_square, &json.index_c1) {
                rows.extend(x_term_rows("alpha2_square", a));
                rows.extend(x_term_rows("index_c1", i));
            }
            csv_bytes(&["quantity", "x_monomial", "num", "den"], rows)
        }
    };
    emit(out, stdout, &body)?;
    let _ = writeln!(stderr, "c1 = {}", model.display_x(&report.c1));
    match report.even {
        Some(true) => {
            let _ = writeln!(stderr, "integral: yes, even: yes");
            Ok(0)
        }
        Some(false) => Err(CliError::Check("c1 is integral but not divisible by 2".into())),
        None => Err(CliError::Check("c1 is not integral".into())),
    }
}

fn cmd_parity_random(
    count: u32,
    seed: u64,
    format: Format,
    out: Option<&Path>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32> {
    let batch = random_parity_batch(count, seed);
    let failures = batch.runs.iter().filter(|r| !(r.even && r.reduced_even)).count();
    let body = match format {
        Format::Json => schema::to_json(&batch).into_bytes(),
        Format::Csv => csv_bytes(
            &["index", "path", "cy3", "rank", "even", "reduced_even", "c1"],
            batch.runs.iter().map(|r| {
                let c1: Vec<String> = r
                    .c1
                    .iter()
                    .map(|t| {
                        let c = crate::series::Rational::new(t.num.0.clone(), t.den.0.clone());
                        format!("{}*{}", schema::show_rational(&c), t.x_monomial.join("*"))
                    })
                    .collect();
                (r.index, &r.path, &r.cy3, r.rank.0.to_string(), r.even, r.reduced_even, c1.join(" + "))
            }),
        ),
    };
    emit(out, stdout, &body)?;
    if failures == 0 {
        let _ = writeln!(stderr, "{count} random datasets (seed {seed}): all even");
        Ok(0)
    } else {
        Err(CliError::Check(format!("{failures} of {count} random datasets are not even")))
    }
}

/// Seeded corpus alternating between the `α₁ = 0` path and the general path.
pub fn random_parity_batch(count: u32, seed: u64) -> ParityBatchJson {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let presets = Cy3Data::presets();
    let runs = (0..count)
        .map(|index| {
            let (name, cy) = &presets[index as usize % presets.len()];
            let model = GrrModel::with_divisors(&["x1", "x2"], cy.clone()).expect("valid model");
            let path = if index % 2 == 0 { RandomPath::Alpha1Zero } else { RandomPath::General };
            let cd = grr::random_chern_data(&model, &mut rng, path);
            let direct = model.parity_check(&cd).expect("generated data are integral");
            let reduced = match path {
                RandomPath::Alpha1Zero => direct.clone(),
                RandomPath::General => {
                    let red = model.det_twist_reduce(&cd).expect("reduction keeps degrees");
                    model.parity_check(&red).expect("generated data are integral")
                }
            };
            ParityRunJson {
                index,
                path: match path {
                    RandomPath::Alpha1Zero => "alpha1-zero".into(),
                    RandomPath::General => "general".into(),
                },
                cy3: (*name).to_owned(),
                rank: cd.rank.clone().into(),
                even: direct.even == Some(true),
                reduced_even: reduced.even == Some(true),
                c1: schema::x_terms(&model, &direct.c1),
            }
        })
        .collect();
    ParityBatchJson { seed, runs }
}

fn cmd_cech(path: &Path, format: Format, out: Option<&Path>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let cover: CoverJson = parse_file(path)?;
    let schema_err = |e: &dyn fmt::Display| CliError::Schema(format!("{}: {e}", path.display()));
    cover.check_face_keys().map_err(|e| schema_err(&e))?;
    let nerve: Nerve = cover.nerve().map_err(|e| schema_err(&e))?;
    let sigma = cover.sigma(&nerve).map_err(|e| schema_err(&e))?;
    let json = CechJson::new(&nerve, &sigma);
    let body = match format {
        Format::Json => schema::to_json(&json).into_bytes(),
        Format::Csv => {
            let opt = |b: Option<bool>| b.map_or(String::new(), |b| b.to_string());
            let mut rows = vec![
                ("cocycle".to_owned(), String::new(), json.cocycle.to_string()),
                ("trivial".to_owned(), String::new(), opt(json.trivial)),
                ("h1_dim".to_owned(), String::new(), json.h1_dim.to_string()),
                ("h2_dim".to_owned(), String::new(), json.h2_dim.to_string()),
                ("torsor_count".to_owned(), String::new(), json.torsor_count.clone()),
            ];
            if let Some(v) = &json.violation {
                rows.push(("violation".to_owned(), v.join(","), String::new()));
            }
            if let Some(w) = &json.witness {
                rows.extend(w.iter().map(|(k, v)| ("witness".to_owned(), k.clone(), v.to_string())));
            }
            csv_bytes(&["field", "face", "value"], rows)
        }
    };
    emit(out, stdout, &body)?;
    match (json.cocycle, json.trivial) {
        (false, _) => Err(CliError::Check(format!(
            "sign data is not a cocycle on {}",
            json.violation.unwrap_or_default().join(",")
        ))),
        (true, Some(true)) => {
            let _ = writeln!(stderr, "obstruction class vanishes; {} inequivalent square roots", json.torsor_count);
            Ok(0)
        }
        (true, _) => {
            let _ = writeln!(stderr, "obstruction class is nontrivial; no square root exists");
            Ok(0)
        }
    }
}
