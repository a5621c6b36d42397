use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use polycomm::lmcomm::{classify, comm_image_bound, LMGroup};
use polycomm::polyfun::{polyline_csv, PolyFun};
use polycomm::ratcore::{format_rational, parse_rational, Lattice, QMatrix, QVector};
use polycomm::starlang::{
    build_polyfun, fellow_traveller_check, finite_to_one_check, format_word, verify_length_bound,
    StarredLanguage,
};
use polycomm::Error;

/// Exact tools for polyhedral functions, starred languages and
/// commensurators of free abelian groups.
#[derive(Parser)]
#[command(name = "polycomm", version)]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format (csv applies to `levelset` and `eval`).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify G(A, L) from a matrix file.
    Classify {
        matrix: PathBuf,
        /// Lattice file; defaults to Z^n ∩ A⁻¹Z^n.
        #[arg(long)]
        lattice: Option<PathBuf>,
    },
    /// Build the polyhedral function and ξ certificate of a language.
    BuildPolyfun { language: PathBuf },
    /// Check the length bound and the bounded-scale language properties.
    Verify {
        language: PathBuf,
        #[arg(long, default_value_t = 20, allow_negative_numbers = true)]
        max_len: i64,
    },
    /// Evaluate a function at a point given as "x,y,...".
    Eval {
        function: PathBuf,
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
    /// Restrict a function along the columns of a matrix.
    Restrict { function: PathBuf, basis: PathBuf },
    /// List the linear symmetries of a function.
    Symmetries { function: PathBuf },
    /// Symmetries of a function restricted to a sublattice.
    CommImage { function: PathBuf, basis: PathBuf },
    /// Vertices of the level set f = c of a planar function.
    Levelset {
        function: PathBuf,
        #[arg(allow_hyphen_values = true)]
        level: String,
    },
}

/// A failure tagged with its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

const VIOLATION: u8 = 1;
const PARSE: u8 = 2;
const SEMANTIC: u8 = 3;
const CERTIFICATE: u8 = 4;

fn fail(code: u8, error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code,
        error: error.into(),
    }
}

fn semantic(e: Error) -> Failure {
    let code = match e {
        Error::DependentBranch { .. } => CERTIFICATE,
        Error::ParseRational(_) | Error::Ragged { .. } => PARSE,
        _ => SEMANTIC,
    };
    fail(code, e)
}

type CmdResult = Result<Output, Failure>;

/// Text to emit plus the exit status to finish with.
struct Output {
    text: String,
    code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }

    fn json<T: Serialize>(value: &T) -> Self {
        Output::ok(serde_json::to_string_pretty(value).expect("serializable") + "\n")
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(|e| fail(PARSE, e))?;
    serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(|e| fail(PARSE, e))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value, what: &str) -> Result<T, Failure> {
    serde_json::from_value(v).map_err(|e| fail(PARSE, anyhow!("invalid {what}: {e}")))
}

/// Accepts `{"rows": [[...]]}` or a bare list of rows.
fn matrix_from(v: Value) -> Result<QMatrix, Failure> {
    let v = if v.is_array() { json!({ "rows": v }) } else { v };
    from_value(v, "matrix")
}

/// Accepts `{"ambient_dim", "basis"}` or a bare list of basis rows.
fn lattice_from(v: Value) -> Result<Lattice, Failure> {
    if let Value::Array(rows) = &v {
        let n = rows
            .first()
            .and_then(Value::as_array)
            .map(Vec::len)
            .ok_or_else(|| fail(PARSE, anyhow!("lattice basis must be a nonempty list of rows")))?;
        return from_value(json!({ "ambient_dim": n, "basis": v }), "lattice");
    }
    from_value(v, "lattice")
}

/// A matrix file may wrap the matrix under a key.
fn matrix_file(path: &Path, key: &str) -> Result<(QMatrix, Option<Value>), Failure> {
    let v = read_json(path)?;
    match v {
        Value::Object(mut map) if map.contains_key(key) => {
            let m = matrix_from(map.remove(key).unwrap())?;
            Ok((m, map.remove("L")))
        }
        other => Ok((matrix_from(other)?, None)),
    }
}

fn load_polyfun(path: &Path) -> Result<PolyFun, Failure> {
    let mut v = read_json(path)?;
    if let Some(inner) = v.get_mut("polyfun") {
        v = inner.take();
    }
    let f: PolyFun = from_value(v, "polyhedral function")?;
    f.require_valid().map_err(semantic)?;
    Ok(f)
}

fn load_language(path: &Path) -> Result<StarredLanguage, Failure> {
    from_value(read_json(path)?, "language")
}

fn cmd_classify(matrix: &Path, lattice: Option<&Path>) -> CmdResult {
    let (a, inline) = matrix_file(matrix, "A")?;
    let l = match (lattice, inline) {
        (Some(p), _) => {
            let mut v = read_json(p)?;
            if let Some(inner) = v.get_mut("L") {
                v = inner.take();
            }
            Some(lattice_from(v)?)
        }
        (None, Some(v)) => Some(lattice_from(v)?),
        (None, None) => None,
    };
    let g = match l {
        Some(l) => LMGroup::new(a, l),
        None => LMGroup::with_domain_lattice(a),
    }
    .map_err(|e| fail(SEMANTIC, e))?;
    let mut out = serde_json::to_value(classify(&g)).expect("serializable");
    out["L"] = serde_json::to_value(g.lattice()).expect("serializable");
    Ok(Output::json(&out))
}

fn cmd_build(language: &Path) -> CmdResult {
    let lang = load_language(language)?;
    let built = build_polyfun(&lang).map_err(semantic)?;
    Ok(Output::json(&built))
}

fn cmd_verify(language: &Path, max_len: i64) -> CmdResult {
    let max_len = usize::try_from(max_len)
        .map_err(|_| fail(PARSE, anyhow!("--max-len must be nonnegative")))?;
    let lang = load_language(language)?;
    let built = build_polyfun(&lang).map_err(semantic)?;
    let bound = verify_length_bound(&lang, &built.polyfun, &built.certificate.xi, max_len);
    let fto = finite_to_one_check(&lang, max_len);
    let ft = fellow_traveller_check(&lang, max_len);
    let report = json!({
        "max_len": max_len,
        "xi": format_rational(&built.certificate.xi),
        "polyfun_valid": built.validation.valid,
        "length_bound": bound,
        "finite_to_one": fto,
        "fellow_traveller": ft,
    });
    let mut out = Output::json(&report);
    if !bound.passed {
        out.code = VIOLATION;
        if let Some(v) = bound.violations.first() {
            eprintln!(
                "length bound violated by {} (branch {}, length {}, f = {}, xi = {})",
                format_word(&v.word),
                v.branch,
                v.length,
                format_rational(&v.value),
                format_rational(&bound.xi)
            );
        }
    }
    Ok(out)
}

fn parse_point(s: &str) -> Result<QVector, Failure> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).map_err(|e| fail(PARSE, e)))
        .collect::<Result<Vec<_>, _>>()
        .map(QVector::new)
}

fn cmd_eval(function: &Path, point: &str, format: Option<Format>) -> CmdResult {
    let f = load_polyfun(function)?;
    let v = parse_point(point)?;
    if v.dim() != f.dim() {
        return Err(fail(
            PARSE,
            anyhow!("point has {} coordinates, function is on R^{}", v.dim(), f.dim()),
        ));
    }
    let value = format_rational(&f.eval(&v));
    Ok(match format {
        Some(Format::Json) => Output::json(&json!({ "point": v, "value": value })),
        _ => Output::ok(value + "\n"),
    })
}

fn cmd_restrict(function: &Path, basis: &Path) -> CmdResult {
    let f = load_polyfun(function)?;
    let (b, _) = matrix_file(basis, "B")?;
    let g = f.restrict(&b).map_err(semantic)?;
    Ok(Output::json(&g))
}

fn cmd_symmetries(function: &Path) -> CmdResult {
    let f = load_polyfun(function)?;
    let group = f.symmetry_group().map_err(semantic)?;
    Ok(Output::json(&json!({ "order": group.len(), "group": group })))
}

fn cmd_comm_image(function: &Path, basis: &Path) -> CmdResult {
    let f = load_polyfun(function)?;
    let (b, _) = matrix_file(basis, "B")?;
    let bound = comm_image_bound(&f, &b).map_err(semantic)?;
    Ok(Output::json(&bound))
}

fn cmd_levelset(function: &Path, level: &str, format: Option<Format>) -> CmdResult {
    let f = load_polyfun(function)?;
    let c = parse_rational(level.trim()).map_err(|e| fail(PARSE, e))?;
    let poly = f.level_set_polyline(&c).map_err(semantic)?;
    Ok(match format {
        Some(Format::Json) => Output::json(&json!({ "level": format_rational(&c), "vertices": poly })),
        _ => Output::ok(polyline_csv(&poly)),
    })
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Classify { matrix, lattice } => cmd_classify(matrix, lattice.as_deref()),
        Command::BuildPolyfun { language } => cmd_build(language),
        Command::Verify { language, max_len } => cmd_verify(language, *max_len),
        Command::Eval { function, point } => cmd_eval(function, point, cli.format),
        Command::Restrict { function, basis } => cmd_restrict(function, basis),
        Command::Symmetries { function } => cmd_symmetries(function),
        Command::CommImage { function, basis } => cmd_comm_image(function, basis),
        Command::Levelset { function, level } => cmd_levelset(function, level, cli.format),
    }
}

fn configure_threads() {
    if let Ok(s) = std::env::var("POLYCOMM_THREADS") {
        match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("ignoring POLYCOMM_THREADS={s:?}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(&cli) {
        Ok(out) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &out.text).with_context(|| format!("writing {}", path.display())),
                None => std::io::stdout()
                    .write_all(out.text.as_bytes())
                    .context("writing stdout"),
            };
            if let Err(e) = written {
                eprintln!("error: {e:#}");
                return ExitCode::from(PARSE);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
