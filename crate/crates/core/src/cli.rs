//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 processing. Every command is
//! deterministic given its flags; output files are written to a temporary
//! sibling and renamed into place.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::eval::{self, CurvatureReport, EvalError};
use crate::imgio::{self, BinaryImage, ImageError, DEFAULT_THRESHOLD};
use crate::spline::Interpolant;
use crate::warper::{self, GenerateOptions, ParamOverrides, WarpError, WarpMode};
use crate::warpfield::{self, FieldError, WarpType};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_PROCESSING: i32 = 3;

pub const BATCH_SUMMARY: &str = "batch_summary.json";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Processing(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Processing(_) => EXIT_PROCESSING,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Processing(m) => m,
        }
    }
}

impl From<ImageError> for CliError {
    fn from(e: ImageError) -> Self {
        match e {
            ImageError::InvalidDimensions { .. } => CliError::Processing(e.to_string()),
            _ => CliError::Io(e.to_string()),
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Processing(e.to_string()),
        }
    }
}

impl From<WarpError> for CliError {
    fn from(e: WarpError) -> Self {
        match e {
            WarpError::Image(e) => e.into(),
            WarpError::Field(e) => e.into(),
            _ => CliError::Processing(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Processing(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "docwarp",
    version,
    about = "Synthetic warped document images and dewarping metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Warp one flat page.
    Generate(GenerateArgs),
    /// Warp every page of a directory for several types and replicates.
    Batch(BatchArgs),
    /// Headline-curvature RMSE between real and synthetic warps.
    EvalCurvature(EvalCurvatureArgs),
    /// Pixel-wise binarization metrics between ground truth and a result.
    EvalBinmetrics(EvalBinArgs),
}

/// Flags shared by `generate` and `batch`; also the keys of a `--config` file.
#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct WarpFlags {
    /// Seed for parameter sampling (base seed in batch mode).
    #[arg(long)]
    seed: Option<u64>,
    /// Row interpolant: monotone (default) or natural.
    #[arg(long, value_parser = ["monotone", "natural"])]
    spline: Option<String>,
    /// Smoothing penalty for the natural spline.
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    /// Pixel mapping: backward (default) or forward.
    #[arg(long, value_parser = ["forward", "backward"])]
    mode: Option<String>,
    /// Grayscale inputs are binarized below this intensity.
    #[arg(long)]
    threshold: Option<u8>,
}

impl WarpFlags {
    fn merge(self, cfg: WarpFlags) -> WarpFlags {
        WarpFlags {
            seed: self.seed.or(cfg.seed),
            spline: self.spline.or(cfg.spline),
            lambda: self.lambda.or(cfg.lambda),
            mode: self.mode.or(cfg.mode),
            threshold: self.threshold.or(cfg.threshold),
        }
    }

    fn interpolant(&self) -> Result<Interpolant, CliError> {
        match (self.spline.as_deref(), self.lambda) {
            (None | Some("monotone"), None) => Ok(Interpolant::Monotone),
            (None | Some("monotone"), Some(_)) => Err(CliError::Usage("--lambda requires --spline natural".into())),
            (Some("natural"), lambda) => {
                let lambda = lambda.unwrap_or(0.0);
                if !(lambda >= 0.0 && lambda.is_finite()) {
                    return Err(CliError::Usage(format!("--lambda must be >= 0, got {lambda}")));
                }
                Ok(Interpolant::Natural { lambda })
            }
            (Some(other), _) => Err(CliError::Usage(format!("unknown spline {other:?}"))),
        }
    }

    fn mode(&self) -> Result<WarpMode, CliError> {
        self.mode
            .as_deref()
            .map_or(Ok(WarpMode::default()), |m| m.parse().map_err(CliError::Usage))
    }
}

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct GenerateArgs {
    /// Flat binary page (PBM, or PGM to be thresholded).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Warped PBM to write.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Warp type I, II, III or IV (default I).
    #[arg(long = "type")]
    #[serde(rename = "type")]
    warp_type: Option<String>,
    #[arg(long)]
    p1: Option<f64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p3: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p4: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p5: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p6: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p7: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p8: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p9: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p10: Option<f64>,
    /// Manifest path (default: output path with a .json extension).
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Also write the displacement field as CSV.
    #[arg(long)]
    field_csv: Option<PathBuf>,
    #[command(flatten)]
    #[serde(flatten)]
    warp: WarpFlags,
    /// JSON file with defaults for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct BatchArgs {
    /// Directory of flat PNM pages.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Directory for warped pages, manifests and the batch summary.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Comma-separated warp types (default: all four).
    #[arg(long, value_delimiter = ',')]
    types: Option<Vec<String>>,
    /// Replicates per input and type.
    #[arg(long)]
    count: Option<usize>,
    /// Worker threads (default: logical CPUs).
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    #[serde(flatten)]
    warp: WarpFlags,
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalCurvatureArgs {
    /// Real capture: an image, or a directory paired with --synth by file name.
    #[arg(long)]
    real: PathBuf,
    /// Synthetic warp: an image or a directory.
    #[arg(long)]
    synth: PathBuf,
    /// Write the report as JSON to this path ("-" for standard output).
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<u8>,
}

#[derive(Debug, Args)]
struct EvalBinArgs {
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    result: PathBuf,
    /// Rows to skip at the top of the result canvas before comparing.
    #[arg(long)]
    offset: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    threshold: Option<u8>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Batch(a) => cmd_batch(a, out, err),
        Command::EvalCurvature(a) => cmd_eval_curvature(a, out, err),
        Command::EvalBinmetrics(a) => cmd_eval_binmetrics(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            if matches!(e, CliError::Usage(_)) {
                let _ = writeln!(err, "run `docwarp --help` for usage");
            }
            e.code()
        }
    }
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else { return Ok(T::default()) };
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// Writes `bytes` to a temporary sibling of `path`, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    let result = fs::write(&tmp, bytes).and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

fn io_at(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn load_binary(path: &Path, threshold: Option<u8>) -> Result<BinaryImage, CliError> {
    imgio::load_image(path)
        .map(|img| img.into_binary(threshold.unwrap_or(DEFAULT_THRESHOLD)))
        .map_err(|e| match CliError::from(e) {
            CliError::Io(m) if !m.contains(&*path.to_string_lossy()) => {
                CliError::Io(format!("{}: {m}", path.display()))
            }
            other => other,
        })
}

fn parse_type(s: &str) -> Result<WarpType, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn cmd_generate(args: GenerateArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg: GenerateArgs = load_config(args.config.as_deref())?;
    let input = args
        .input
        .or(cfg.input)
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let output = args
        .output
        .or(cfg.output)
        .ok_or_else(|| CliError::Usage("--output is required".into()))?;
    let warp = args.warp.merge(cfg.warp);
    let warp_type = parse_type(args.warp_type.or(cfg.warp_type).as_deref().unwrap_or("I"))?;
    let overrides = ParamOverrides {
        p1: args.p1.or(cfg.p1),
        p2: args.p2.or(cfg.p2),
        p3: args.p3.or(cfg.p3),
        p4: args.p4.or(cfg.p4),
        p5: args.p5.or(cfg.p5),
        p6: args.p6.or(cfg.p6),
        p7: args.p7.or(cfg.p7),
        p8: args.p8.or(cfg.p8),
        p9: args.p9.or(cfg.p9),
        p10: args.p10.or(cfg.p10),
    };
    for p in [overrides.p1, overrides.p2].into_iter().flatten() {
        warpfield::WarpPositionParams::new(p, 0.5)
            .map_err(|_| CliError::Usage(format!("--p1/--p2 must be one of 0.1..0.9, got {p}")))?;
    }
    let opts = GenerateOptions {
        warp_type,
        seed: warp.seed.unwrap_or(0),
        interpolant: warp.interpolant()?,
        mode: warp.mode()?,
        overrides,
    };
    let manifest_path = args
        .manifest
        .or(cfg.manifest)
        .unwrap_or_else(|| output.with_extension("json"));
    let field_csv = args.field_csv.or(cfg.field_csv);

    let img = load_binary(&input, warp.threshold)?;
    let g = warper::generate(&img, &input.to_string_lossy(), &opts)?;
    write_atomic(&output, &imgio::encode_p4(&g.image)).map_err(io_at(&output))?;
    write_atomic(&manifest_path, g.manifest.to_json().as_bytes()).map_err(io_at(&manifest_path))?;
    if let Some(csv) = field_csv {
        let mut buf = Vec::new();
        warpfield::write_field_csv(&g.field, &mut buf)?;
        write_atomic(&csv, &buf).map_err(io_at(&csv))?;
    }
    let m = &g.manifest;
    writeln!(
        out,
        "{} -> {} type {} p1 {} p2 {} p3 {} p6 {} p7 {} p10 {} offset {} size {}x{}",
        input.display(),
        output.display(),
        m.warp_type,
        m.p1,
        m.p2,
        m.p3,
        m.p6,
        m.p7,
        m.p10,
        m.offset,
        m.out_rows,
        m.out_cols
    )?;
    Ok(EXIT_OK)
}

/// FNV-1a over `file \0 type \0 replicate`.
pub fn stable_seed_hash(file: &str, warp_type: WarpType, replicate: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let key = format!("{file}\0{warp_type}\0{replicate}");
    for b in key.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub source: String,
    pub image: String,
    pub manifest: String,
    #[serde(rename = "type")]
    pub warp_type: WarpType,
    pub replicate: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchFailure {
    pub source: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub outputs: Vec<BatchEntry>,
    pub failures: Vec<BatchFailure>,
}

fn is_pnm(path: &Path) -> bool {
    path.is_file()
        && path
            .extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| matches!(e.to_ascii_lowercase().as_str(), "pbm" | "pgm" | "pnm"))
}

fn list_pnm(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_at(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| is_pnm(p))
        .collect();
    files.sort();
    Ok(files)
}

struct BatchJob {
    types: Vec<WarpType>,
    count: usize,
    base_seed: u64,
    interpolant: Interpolant,
    mode: WarpMode,
    threshold: Option<u8>,
    output: PathBuf,
}

impl BatchJob {
    fn run_file(&self, path: &Path) -> Result<Vec<BatchEntry>, CliError> {
        let img = load_binary(path, self.threshold)?;
        let file = path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let stem = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let mut entries = Vec::new();
        for &t in &self.types {
            for rep in 0..self.count {
                let seed = self.base_seed.wrapping_add(stable_seed_hash(&file, t, rep));
                let opts = GenerateOptions {
                    warp_type: t,
                    seed,
                    interpolant: self.interpolant,
                    mode: self.mode,
                    overrides: ParamOverrides::default(),
                };
                // Warping already parallelises per input file; keep each page on one thread.
                let g = warper::generate_with(crate::par::Exec::Sequential, &img, &file, &opts)?;
                let image_name = format!("{stem}_{t}_{rep}.pbm");
                let manifest_name = format!("{stem}_{t}_{rep}.json");
                let image_path = self.output.join(&image_name);
                let manifest_path = self.output.join(&manifest_name);
                write_atomic(&image_path, &imgio::encode_p4(&g.image)).map_err(io_at(&image_path))?;
                write_atomic(&manifest_path, g.manifest.to_json().as_bytes()).map_err(io_at(&manifest_path))?;
                log::info!("wrote {}", image_path.display());
                entries.push(BatchEntry {
                    source: file.clone(),
                    image: image_name,
                    manifest: manifest_name,
                    warp_type: t,
                    replicate: rep,
                    seed,
                });
            }
        }
        Ok(entries)
    }
}

fn run_jobs<F>(jobs: usize, files: &[PathBuf], f: F) -> Vec<Result<Vec<BatchEntry>, CliError>>
where
    F: Fn(&Path) -> Result<Vec<BatchEntry>, CliError> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
            return pool.install(|| files.par_iter().map(|p| f(p)).collect());
        }
    }
    let _ = jobs;
    files.iter().map(|p| f(p)).collect()
}

fn cmd_batch(args: BatchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let cfg: BatchArgs = load_config(args.config.as_deref())?;
    let input = args
        .input
        .or(cfg.input)
        .ok_or_else(|| CliError::Usage("--input is required".into()))?;
    let output = args
        .output
        .or(cfg.output)
        .ok_or_else(|| CliError::Usage("--output is required".into()))?;
    let warp = args.warp.merge(cfg.warp);
    let types = match args.types.or(cfg.types) {
        Some(list) => list.iter().map(|s| parse_type(s)).collect::<Result<Vec<_>, _>>()?,
        None => WarpType::ALL.to_vec(),
    };
    if types.is_empty() {
        return Err(CliError::Usage("--types must name at least one type".into()));
    }
    let count = args.count.or(cfg.count).unwrap_or(1);
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    let jobs = args
        .jobs
        .or(cfg.jobs)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if jobs == 0 {
        return Err(CliError::Usage("--jobs must be at least 1".into()));
    }
    if !input.is_dir() {
        return Err(CliError::Usage(format!("input {} is not a directory", input.display())));
    }
    fs::create_dir_all(&output).map_err(io_at(&output))?;
    if fs::canonicalize(&input).ok() == fs::canonicalize(&output).ok() {
        return Err(CliError::Usage("input and output directories must differ".into()));
    }
    let files = list_pnm(&input)?;
    if files.is_empty() {
        return Err(CliError::Usage(format!("no PNM files in {}", input.display())));
    }

    let job = BatchJob {
        types,
        count,
        base_seed: warp.seed.unwrap_or(0),
        interpolant: warp.interpolant()?,
        mode: warp.mode()?,
        threshold: warp.threshold,
        output: output.clone(),
    };
    let results = run_jobs(jobs, &files, |p| job.run_file(p));

    let mut summary = BatchSummary {
        outputs: Vec::new(),
        failures: Vec::new(),
    };
    let mut code = EXIT_OK;
    for (path, res) in files.iter().zip(results) {
        match res {
            Ok(entries) => summary.outputs.extend(entries),
            Err(e) => {
                writeln!(err, "error: {}: {}", path.display(), e.message())?;
                code = code.max(e.code()).max(EXIT_IO);
                summary.failures.push(BatchFailure {
                    source: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
                    error: e.message().to_string(),
                });
            }
        }
    }
    let summary_path = output.join(BATCH_SUMMARY);
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    write_atomic(&summary_path, text.as_bytes()).map_err(io_at(&summary_path))?;
    writeln!(
        out,
        "{} outputs, {} failures; summary at {}",
        summary.outputs.len(),
        summary.failures.len(),
        summary_path.display()
    )?;
    Ok(code)
}

#[derive(Debug, Serialize)]
struct CurvaturePairResult {
    name: String,
    report: Option<CurvatureReport>,
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct CurvatureRun {
    pairs: Vec<CurvaturePairResult>,
    pooled_rc: Option<f64>,
    mean_rc: Option<f64>,
}

fn curvature_pairs(real: &Path, synth: &Path) -> Result<Vec<(String, PathBuf, PathBuf)>, CliError> {
    match (real.is_dir(), synth.is_dir()) {
        (false, false) => {
            let name = real.file_name().unwrap_or_default().to_string_lossy().into_owned();
            Ok(vec![(name, real.to_path_buf(), synth.to_path_buf())])
        }
        (true, true) => {
            let index = |dir: &Path| -> Result<BTreeMap<String, PathBuf>, CliError> {
                Ok(list_pnm(dir)?
                    .into_iter()
                    .map(|p| (p.file_name().unwrap_or_default().to_string_lossy().into_owned(), p))
                    .collect())
            };
            let (r, s) = (index(real)?, index(synth)?);
            let unpaired: Vec<&String> = r
                .keys()
                .filter(|k| !s.contains_key(*k))
                .chain(s.keys().filter(|k| !r.contains_key(*k)))
                .collect();
            if !unpaired.is_empty() {
                return Err(CliError::Usage(format!("unpaired files: {unpaired:?}")));
            }
            if r.is_empty() {
                return Err(CliError::Usage("no PNM files to compare".into()));
            }
            Ok(r.into_iter()
                .map(|(name, rp)| (name.clone(), rp, s[&name].clone()))
                .collect())
        }
        _ => Err(CliError::Usage(
            "--real and --synth must both be files or both be directories".into(),
        )),
    }
}

fn write_json_to(path: &Path, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    if path.as_os_str() == "-" {
        out.write_all(text.as_bytes())?;
    } else {
        write_atomic(path, text.as_bytes()).map_err(io_at(path))?;
    }
    Ok(())
}

fn cmd_eval_curvature(args: EvalCurvatureArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let pairs = curvature_pairs(&args.real, &args.synth)?;
    let mut run = CurvatureRun {
        pairs: Vec::new(),
        pooled_rc: None,
        mean_rc: None,
    };
    let mut code = EXIT_OK;
    for (name, real, synth) in pairs {
        let outcome = load_binary(&real, args.threshold)
            .and_then(|r| Ok((r, load_binary(&synth, args.threshold)?)))
            .and_then(|(r, s)| CurvatureReport::compare(&r, &s).map_err(CliError::from));
        match outcome {
            Ok(report) => {
                writeln!(out, "{name}")?;
                for (i, p) in report.lines.iter().enumerate() {
                    writeln!(out, "  line {}  C_r {:+.6e}  C_s {:+.6e}", i + 1, p.real, p.synth)?;
                }
                writeln!(out, "  R_c {:.6e}", report.rc)?;
                run.pairs.push(CurvaturePairResult {
                    name,
                    report: Some(report),
                    error: None,
                });
            }
            Err(e) => {
                writeln!(err, "error: {name}: {}", e.message())?;
                code = code.max(e.code());
                run.pairs.push(CurvaturePairResult {
                    name,
                    report: None,
                    error: Some(e.message().to_string()),
                });
            }
        }
    }
    let reports: Vec<CurvatureReport> = run.pairs.iter().filter_map(|p| p.report.clone()).collect();
    if let Some((pooled, mean)) = eval::aggregate_rc(&reports) {
        run.pooled_rc = Some(pooled);
        run.mean_rc = Some(mean);
        writeln!(
            out,
            "pairs {}  pooled R_c {:.6e}  mean R_c {:.6e}",
            reports.len(),
            pooled,
            mean
        )?;
    }
    if let Some(path) = &args.json {
        let text = serde_json::to_string_pretty(&run).expect("report serializes") + "\n";
        write_json_to(path, &text, out)?;
    }
    Ok(code)
}

fn cmd_eval_binmetrics(args: EvalBinArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let gt = load_binary(&args.gt, args.threshold)?;
    let mut res = load_binary(&args.result, args.threshold)?;
    let same = gt.rows() == res.rows() && gt.cols() == res.cols();
    match args.offset {
        Some(offset) => {
            if res.cols() != gt.cols() || offset + gt.rows() > res.rows() {
                return Err(CliError::Usage(format!(
                    "result {}x{} cannot hold ground truth {}x{} at offset {offset}",
                    res.rows(),
                    res.cols(),
                    gt.rows(),
                    gt.cols()
                )));
            }
            res = res.crop_rows(offset, gt.rows())?;
        }
        None if !same => {
            return Err(CliError::Usage(format!(
                "size mismatch: ground truth {}x{}, result {}x{} (use --offset)",
                gt.rows(),
                gt.cols(),
                res.rows(),
                res.cols()
            )))
        }
        None => {}
    }
    let report = eval::evaluate_pair(&gt, &res)?;
    match &args.json {
        Some(path) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
            write_json_to(path, &text, out)?;
            if path.as_os_str() != "-" {
                out.write_all(report.table().as_bytes())?;
            }
        }
        None => out.write_all(report.table().as_bytes())?,
    }
    Ok(EXIT_OK)
}
