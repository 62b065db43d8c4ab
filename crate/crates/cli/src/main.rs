use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use sizefn::experiment::{self, ExperimentConfig};
use sizefn::imaging::{self, Adjacency, MeasuringFunction, Side};
use sizefn::mv::{self, Decomposition};
use sizefn::sizefn::{cornerpoints_from_grid, SizeFunctionGrid};
use sizefn::{Error, FilteredGraph};

/// Size functions of filtered graphs and binary shapes, and occlusion experiments.
#[derive(Parser)]
#[command(name = "sizefn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size-function grid (CSV) and cornerpoints (JSON) of a graph or PBM image.
    Compute {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Measuring function for image input.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=8))]
        phi: u8,
        /// What to print when --out is not given.
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Mayer-Vietoris report over the critical grid of a decomposition.
    ///
    /// The input is a decomposition file, or a PBM image together with
    /// --occlude, which covers the image with a visible band.
    MvCheck {
        input: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=8))]
        phi: u8,
        #[arg(long, value_parser = parse_occlusion)]
        occlude: Option<(Side, f64)>,
    },
    /// Common-cornerpoint matrices under visible occlusion.
    Fingerprint {
        manifest: PathBuf,
        #[command(flatten)]
        experiment: ExperimentArgs,
    },
    /// Nearest-neighbour recognition rates under invisible occlusion.
    Recognize {
        manifest: PathBuf,
        #[command(flatten)]
        experiment: ExperimentArgs,
    },
    /// Writes the bundled synthetic shapes and their manifest to a directory.
    Corpus { dir: PathBuf },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_parser = parse_adjacency, default_value = "4")]
    adjacency: Adjacency,
    /// Output directory; results go to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    common: Common,
    /// `<top|left>:<fraction>`; repeatable. Defaults to top and left at 0.2, 0.3, 0.4, 0.6.
    #[arg(long, value_parser = parse_occlusion)]
    occlude: Vec<(Side, f64)>,
    /// Matching tolerance, relative to the magnitude of the compared values.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn parse_adjacency(s: &str) -> Result<Adjacency, String> {
    match s {
        "4" => Ok(Adjacency::Four),
        "8" => Ok(Adjacency::Eight),
        _ => Err(format!("adjacency must be 4 or 8, got `{s}`")),
    }
}

fn parse_occlusion(s: &str) -> Result<(Side, f64), String> {
    let (side, fraction) = s
        .split_once(':')
        .ok_or_else(|| format!("expected <top|left>:<fraction>, got `{s}`"))?;
    let side: Side = side.parse().map_err(|e: Error| e.to_string())?;
    let fraction: f64 = fraction
        .parse()
        .map_err(|_| format!("invalid fraction `{fraction}`"))?;
    if !(0.0..=1.0).contains(&fraction) {
        return Err(format!("fraction must be in [0, 1], got {fraction}"));
    }
    Ok((side, fraction))
}

fn is_pbm(data: &[u8]) -> bool {
    matches!(data.get(..2), Some(b"P1") | Some(b"P4"))
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).map_err(|source| {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
        .into()
    })
}

/// Writes `files` into `out` when given, otherwise prints `stdout_text`.
fn emit(out: Option<&Path>, files: &[(&str, &str)], stdout_text: &str) -> anyhow::Result<()> {
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for (name, content) in files {
                let path = dir.join(name);
                fs::write(&path, content).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        None => print!("{stdout_text}"),
    }
    Ok(())
}

fn compute(input: &Path, common: &Common, phi: u8, format: Format) -> anyhow::Result<()> {
    let data = read(input)?;
    let graph = if is_pbm(&data) {
        let img = imaging::decode_pbm(&data)?;
        imaging::pixel_graph(&img, MeasuringFunction::new(phi)?, common.adjacency)?
    } else {
        let text = String::from_utf8(data).map_err(|_| Error::Parse {
            line: 0,
            message: "graph file is not UTF-8".into(),
        })?;
        FilteredGraph::parse(&text)?
    };
    let grid = SizeFunctionGrid::new(&graph);
    let csv = grid.to_csv();
    let json = cornerpoints_from_grid(&grid).to_json();
    let stdout_text = match format {
        Format::Csv => &csv,
        Format::Json => &json,
    };
    emit(
        common.out.as_deref(),
        &[("grid.csv", &csv), ("cornerpoints.json", &json)],
        stdout_text,
    )
}

fn mv_check(
    input: &Path,
    common: &Common,
    phi: u8,
    occlude: Option<(Side, f64)>,
) -> anyhow::Result<()> {
    let data = read(input)?;
    let d = if is_pbm(&data) {
        let Some((side, fraction)) = occlude else {
            bail!("image input needs --occlude <side>:<fraction>");
        };
        let img = imaging::decode_pbm(&data)?;
        imaging::occlude_visible(&img, side, fraction, common.adjacency)?
            .decomposition(MeasuringFunction::new(phi)?)?
    } else {
        let text = String::from_utf8(data).map_err(|_| Error::Parse {
            line: 0,
            message: "decomposition file is not UTF-8".into(),
        })?;
        Decomposition::parse(&text)?
    };
    if let Err(violations) = mv::validate(&d) {
        for v in &violations {
            eprintln!("sizefn: {v}");
        }
        return Err(Error::InvalidDecomposition(violations).into());
    }
    let report = mv::mv_report_csv(&d);
    if mv::mv_grid(&d)
        .iter()
        .any(|(_, _, r)| r.identity_residual() != 0)
    {
        bail!("relation residual is nonzero; report follows\n{report}");
    }
    emit(
        common.out.as_deref(),
        &[("mv_report.csv", &report)],
        &report,
    )
}

fn experiment_setup(
    manifest: &Path,
    args: &ExperimentArgs,
) -> anyhow::Result<(Vec<experiment::CorpusEntry>, ExperimentConfig)> {
    if args.tol.is_nan() || args.tol < 0.0 {
        bail!("--tol must be >= 0");
    }
    let corpus = experiment::load_manifest(manifest)?;
    for e in &corpus {
        if !e.image.is_usable() {
            eprintln!("sizefn: warning: {} has no black pixels", e.path.display());
        }
    }
    let mut config = ExperimentConfig {
        tol: args.tol,
        adjacency: args.common.adjacency,
        ..ExperimentConfig::default()
    };
    if !args.occlude.is_empty() {
        config.occlusions = args.occlude.clone();
    }
    Ok((corpus, config))
}

fn fingerprint(manifest: &Path, args: &ExperimentArgs) -> anyhow::Result<()> {
    let (corpus, config) = experiment_setup(manifest, args)?;
    if corpus.iter().any(|e| !e.image.is_usable()) {
        bail!("fingerprinting needs every corpus image to have black pixels");
    }
    let matrices = experiment::fingerprint(&corpus, &config)?;
    let mut files = Vec::new();
    let mut stdout_text = String::new();
    for m in &matrices {
        for &i in &m.skipped {
            eprintln!(
                "sizefn: warning: skipped {} at {}:{}",
                m.names[i], m.side, m.fraction
            );
        }
        let name = format!("fingerprint_{}_{}.csv", m.side, m.fraction);
        let csv = m.to_csv();
        stdout_text.push_str(&format!("## {}:{}\n{csv}", m.side, m.fraction));
        files.push((name, csv));
    }
    let refs: Vec<(&str, &str)> = files
        .iter()
        .map(|(n, c)| (n.as_str(), c.as_str()))
        .collect();
    emit(args.common.out.as_deref(), &refs, &stdout_text)
}

fn recognize(manifest: &Path, args: &ExperimentArgs) -> anyhow::Result<()> {
    let (corpus, config) = experiment_setup(manifest, args)?;
    let results = experiment::recognize(&corpus, &config)?;
    let csv = experiment::recognition_csv(&results);
    emit(
        args.common.out.as_deref(),
        &[("recognition.csv", &csv)],
        &csv,
    )
}

fn write_corpus(dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut manifest = String::new();
    for (name, img) in imaging::synthetic::corpus() {
        let file = format!("{name}.pbm");
        fs::write(dir.join(&file), img.to_p1()).with_context(|| format!("writing {file}"))?;
        manifest.push_str(&format!("{name} {file}\n"));
    }
    fs::write(dir.join("manifest.txt"), manifest).context("writing manifest")?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(
            Error::Parse { .. } | Error::Pbm { .. } | Error::InvalidGraph(_) | Error::Io { .. },
        ) => 2,
        Some(Error::InvalidDecomposition(_)) => 3,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Compute {
            input,
            common,
            phi,
            format,
        } => compute(input, common, *phi, *format),
        Command::MvCheck {
            input,
            common,
            phi,
            occlude,
        } => mv_check(input, common, *phi, *occlude),
        Command::Fingerprint {
            manifest,
            experiment,
        } => fingerprint(manifest, experiment),
        Command::Recognize {
            manifest,
            experiment,
        } => recognize(manifest, experiment),
        Command::Corpus { dir } => write_corpus(dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("sizefn: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
