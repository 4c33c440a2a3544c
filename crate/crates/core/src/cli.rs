//! The `ldpc-cat` command-line front end.
//!
//! Every subcommand writes JSON (or CSV for tables) to stdout or to `--out`.
//! Exit codes: 0 on success, 2 on usage or input errors, 3 when a
//! computation fails or stops on a time limit.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::decoder::{BPConfig, OSDConfig};
use crate::distance::{
    distance_auto, distance_bruteforce, distance_sat, DistanceResult, EmbeddedSolver,
    ExternalSolver, SatOptions, SolverHandle, DEFAULT_BRUTEFORCE_CAP,
};
use crate::error::{Error, Result};
use crate::estimator::{
    ldpccat_family_footprint, paper_ldpccat_fit, qldpc_footprint, repcat_footprint,
    surface_footprint, FootprintResult,
};
use crate::experiments::{
    fit_ansatz, fit_ansatz_pinned_a, read_sweep_csv, run_memory_experiment, write_sweep_csv,
    DecoderSettings, FitPoint, FitResult, StopRule, SweepRow,
};
use crate::lattice::{build_code, table1_family, write_alist, Boundary, CodeFile, LatticeCode};
use crate::noise::NoiseModel;
use crate::search::{
    optimize_row_shapes, pareto_by_distance, row_candidates, scan_single_shapes, write_records_csv,
    DistanceOptions, OptimizeConfig, OptimizeResult,
};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FAILURE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "ldpc-cat", version, about = "Local phase-flip LDPC codes for cat qubits")]
pub struct Cli {
    /// Worker threads for search and simulate (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BoundaryArg {
    Periodic,
    Planar,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Periodic => Boundary::Periodic,
            BoundaryArg::Planar => Boundary::Planar,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum MethodArg {
    Brute,
    Sat,
    Auto,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Phen,
    Generic,
    Cat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnsatzArg {
    P,
    Kappa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArchArg {
    Surface,
    Qldpc,
    Repcat,
    Ldpccat,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan all 511 shapes of the 3x3 window on an H x L lattice.
    Search {
        #[arg(long = "H")]
        height: usize,
        #[arg(long = "L")]
        width: usize,
        #[arg(long, value_enum, default_value = "periodic")]
        boundary: BoundaryArg,
        /// CSV destination (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Keep only the best record per distance.
        #[arg(long)]
        pareto: bool,
        #[arg(long, default_value_t = 24)]
        bruteforce_cap: usize,
        /// Record no distance for codes with more logical qubits.
        #[arg(long)]
        k_limit: Option<usize>,
    },
    /// Optimize one pointed shape per row for the largest distance.
    Optimize {
        #[arg(long = "H")]
        height: usize,
        #[arg(long = "L")]
        width: usize,
        #[arg(long, default_value_t = 4)]
        weight: usize,
        /// External DIMACS solver (embedded solver when absent).
        #[arg(long)]
        solver: Option<PathBuf>,
        #[arg(long)]
        max_distance: Option<usize>,
        /// Overall time limit in seconds.
        #[arg(long)]
        deadline: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact minimum distance of a code file.
    Distance {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        method: MethodArg,
        /// Write the DIMACS query at weight d - 1 here (SAT route).
        #[arg(long)]
        dimacs_out: Option<PathBuf>,
        #[arg(long)]
        solver: Option<PathBuf>,
        /// Per-query SAT time limit in seconds.
        #[arg(long)]
        timeout: Option<f64>,
        /// Largest k enumerated by brute force.
        #[arg(long, default_value_t = DEFAULT_BRUTEFORCE_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte-Carlo memory experiment with BP+OSD decoding.
    Simulate {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Physical error rate (phen, generic).
        #[arg(long)]
        p: Option<f64>,
        /// Measurement error rate (phen; defaults to p).
        #[arg(long)]
        q: Option<f64>,
        /// kappa_1 / kappa_2 (cat).
        #[arg(long)]
        kappa: Option<f64>,
        /// Mean photon number (cat).
        #[arg(long, default_value_t = 11.0)]
        nbar: f64,
        #[arg(long)]
        rounds: usize,
        /// Distance used for the per-round rate (defaults to the round count).
        #[arg(long)]
        distance: Option<usize>,
        #[arg(long, default_value_t = 100)]
        target_failures: u64,
        #[arg(long, default_value_t = 10_000_000)]
        max_shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = BPConfig::default().max_iters)]
        max_iters: usize,
        #[arg(long, default_value_t = OSDConfig::default().order)]
        osd_order: usize,
        /// Append the result as a row of this sweep CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the logical-error ansatz to a sweep CSV.
    Fit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        ansatz: AnsatzArg,
        /// Use only rows of this model.
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        /// Hold the prefactor A fixed.
        #[arg(long)]
        pin_a: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Physical-qubit footprint of a fault-tolerant memory.
    Estimate {
        #[arg(long, value_enum)]
        arch: ArchArg,
        /// Physical error rate (surface, qldpc).
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Number of logical qubits.
        #[arg(long, default_value_t = 100)]
        nl: usize,
        /// Target logical error per qubit and cycle.
        #[arg(long, default_value_t = 1e-8)]
        target: f64,
        /// kappa_1 / kappa_2 (repcat, ldpccat).
        #[arg(long, default_value_t = 1e-4)]
        kappa: f64,
        /// Mean photon number (ldpccat).
        #[arg(long, default_value_t = 11.0)]
        nbar: f64,
        /// Table I row of the LDPC-cat family.
        #[arg(long, default_value_t = 5)]
        row: usize,
        /// Ansatz parameters for ldpccat (default: the [136,34,22] fit).
        #[arg(long, num_args = 3, value_names = ["A", "B", "C"])]
        fit: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value = "json")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a Table I code as a JSON code file.
    ExportCode {
        /// `table1-row1` ... `table1-row5`.
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 0)]
        ell: usize,
        #[arg(long)]
        planar: bool,
        /// Also write the parity-check matrix in alist format.
        #[arg(long)]
        alist: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: {e}");
        }
    }
    match execute(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Input and usage problems map to 2, everything else to 3.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidShape(_)
        | Error::InvalidModel(_)
        | Error::OutOfRange(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::Csv(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(&text, out)
}

fn solver_for(path: Option<&Path>) -> Box<dyn SolverHandle> {
    match path {
        Some(p) => Box::new(ExternalSolver::new(p)),
        None => match ExternalSolver::from_env() {
            Some(s) => Box::new(s),
            None => Box::new(EmbeddedSolver),
        },
    }
}

fn secs(s: Option<f64>) -> Result<Option<Duration>> {
    s.map(|v| {
        Duration::try_from_secs_f64(v)
            .map_err(|_| Error::OutOfRange(format!("invalid duration {v} s")))
    })
    .transpose()
}

pub fn read_code(path: &Path) -> Result<LatticeCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    CodeFile::from_json(&text)?.to_code()
}

#[derive(Serialize)]
struct DistanceReport {
    n: usize,
    k: usize,
    #[serde(flatten)]
    result: DistanceResult,
}

#[derive(Serialize)]
struct OptimizeReport {
    #[serde(rename = "H")]
    height: usize,
    #[serde(rename = "L")]
    width: usize,
    n: usize,
    k: usize,
    #[serde(flatten)]
    result: OptimizeResult,
    certified: DistanceResult,
}

fn model_from_args(
    model: ModelArg,
    p: Option<f64>,
    q: Option<f64>,
    kappa: Option<f64>,
    nbar: f64,
) -> Result<NoiseModel> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::InvalidModel(format!("--{name} is required for this model")))
    };
    Ok(match model {
        ModelArg::Phen => NoiseModel::phenomenological(need(p, "p")?, q),
        ModelArg::Generic => NoiseModel::generic(need(p, "p")?),
        ModelArg::Cat => NoiseModel::cat(nbar, need(kappa, "kappa")?),
    })
}

fn model_label(m: ModelArg) -> &'static str {
    match m {
        ModelArg::Phen => "phen",
        ModelArg::Generic => "generic",
        ModelArg::Cat => "cat",
    }
}

fn fit_points(rows: &[SweepRow], ansatz: AnsatzArg, model: Option<ModelArg>) -> Result<Vec<FitPoint>> {
    let selected: Vec<&SweepRow> = rows
        .iter()
        .filter(|r| match model {
            Some(m) => r.model == model_label(m),
            None => match ansatz {
                AnsatzArg::Kappa => r.model == "cat",
                AnsatzArg::P => r.model != "cat",
            },
        })
        .collect();
    let mut models: Vec<&str> = selected.iter().map(|r| r.model.as_str()).collect();
    models.sort_unstable();
    models.dedup();
    if models.len() > 1 {
        return Err(Error::Parse(format!(
            "field `model`: rows mix {models:?}; choose one with --model"
        )));
    }
    Ok(selected.iter().map(|r| r.fit_point()).collect())
}

fn append_sweep_row(path: &Path, row: &SweepRow) -> Result<()> {
    let fresh = !path.exists() || std::fs::metadata(path)?.len() == 0;
    let file = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
    if fresh {
        write_sweep_csv(std::slice::from_ref(row), file)
    } else {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
        w.serialize(row)?;
        w.flush()?;
        Ok(())
    }
}

fn estimate(arch: ArchArg, args: &EstimateArgs) -> Result<Vec<FootprintResult>> {
    let one = |a: ArchArg| -> Result<FootprintResult> {
        match a {
            ArchArg::Surface => surface_footprint(args.eps, args.nl, args.target),
            ArchArg::Qldpc => qldpc_footprint(args.eps, args.nl),
            ArchArg::Repcat => repcat_footprint(args.kappa, args.nl, args.target),
            ArchArg::Ldpccat => {
                let fit = match &args.fit {
                    Some(v) => FitResult::from_params(v[0], v[1], v[2]),
                    None => paper_ldpccat_fit(),
                };
                let (_, mut fp) =
                    ldpccat_family_footprint(args.row, &fit, args.nbar, args.kappa, args.nl)?;
                fp.target = Some(args.target);
                fp.target_met = fp.eps_l <= args.target;
                Ok(fp)
            }
            ArchArg::All => unreachable!(),
        }
    };
    match arch {
        ArchArg::All => [ArchArg::Surface, ArchArg::Qldpc, ArchArg::Repcat, ArchArg::Ldpccat]
            .into_iter()
            .map(one)
            .collect(),
        a => Ok(vec![one(a)?]),
    }
}

struct EstimateArgs {
    eps: f64,
    nl: usize,
    target: f64,
    kappa: f64,
    nbar: f64,
    row: usize,
    fit: Option<Vec<f64>>,
}

fn footprint_csv(rows: &[FootprintResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "arch", "n_logical", "distance", "nbar", "eps_l", "eps_phase", "eps_bit", "data_qubits",
        "total_qubits", "target", "target_met",
    ])?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for r in rows {
        w.write_record([
            serde_json::to_value(r.arch)?.as_str().unwrap_or_default().to_string(),
            r.n_logical.to_string(),
            opt(r.distance.map(|d| d.to_string())),
            opt(r.nbar.map(|x| x.to_string())),
            format!("{:e}", r.eps_l),
            opt(r.eps_phase.map(|x| format!("{x:e}"))),
            opt(r.eps_bit.map(|x| format!("{x:e}"))),
            opt(r.data_qubits.map(|x| x.to_string())),
            r.total_qubits.to_string(),
            opt(r.target.map(|x| format!("{x:e}"))),
            r.target_met.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn execute(cmd: &Command) -> Result<i32> {
    match cmd {
        Command::Search { height, width, boundary, out, pareto, bruteforce_cap, k_limit } => {
            let opts = DistanceOptions {
                bruteforce_cap: *bruteforce_cap,
                k_limit: *k_limit,
                ..Default::default()
            };
            let mut records = scan_single_shapes(*height, *width, (*boundary).into(), &opts)?;
            if *pareto {
                records = pareto_by_distance(&records);
            }
            let mut buf = Vec::new();
            write_records_csv(&records, &mut buf)?;
            emit(&String::from_utf8_lossy(&buf), out.as_deref())?;
            Ok(0)
        }
        Command::Optimize { height, width, weight, solver, max_distance, deadline, out } => {
            let mut cfg = OptimizeConfig::weight4();
            if *weight != 4 {
                cfg.candidates = row_candidates(&[*weight], cfg.seed_rows + 1);
            }
            cfg.max_distance = *max_distance;
            cfg.deadline = secs(*deadline)?;
            let solver = solver_for(solver.as_deref());
            let result = optimize_row_shapes(*height, *width, &cfg, solver.as_ref())?;
            let code = build_code(*height, *width, &result.row_shapes, Boundary::Periodic)?;
            let certified = distance_auto(&code, solver.as_ref(), DEFAULT_BRUTEFORCE_CAP)?;
            let report = OptimizeReport {
                height: *height,
                width: *width,
                n: code.n(),
                k: code.k(),
                result,
                certified,
            };
            emit_json(&report, out.as_deref())?;
            Ok(0)
        }
        Command::Distance { code, method, dimacs_out, solver, timeout, cap, out } => {
            let code = read_code(code)?;
            let solver = solver_for(solver.as_deref());
            let sat_opts = SatOptions {
                timeout: secs(*timeout)?,
                symmetry_breaking: false,
                dimacs_out: dimacs_out.clone(),
            };
            let result = match method {
                MethodArg::Brute => distance_bruteforce(&code, (*cap).max(code.k()))?,
                MethodArg::Sat => distance_sat(&code, solver.as_ref(), None, &sat_opts)?,
                MethodArg::Auto if code.k() <= *cap && dimacs_out.is_none() => {
                    distance_bruteforce(&code, *cap)?
                }
                MethodArg::Auto => distance_sat(&code, solver.as_ref(), None, &sat_opts)?,
            };
            let complete = result.complete;
            emit_json(&DistanceReport { n: code.n(), k: code.k(), result }, out.as_deref())?;
            if !complete {
                eprintln!("error: SAT query timed out; d is only an upper bound");
                return Ok(EXIT_FAILURE);
            }
            Ok(0)
        }
        Command::Simulate {
            code,
            model,
            p,
            q,
            kappa,
            nbar,
            rounds,
            distance,
            target_failures,
            max_shots,
            seed,
            max_iters,
            osd_order,
            csv,
            out,
        } => {
            let code = read_code(code)?;
            let noise = model_from_args(*model, *p, *q, *kappa, *nbar)?;
            if *rounds == 0 {
                return Err(Error::OutOfRange("field `rounds` must be at least 1".into()));
            }
            let stop = StopRule { target_failures: *target_failures, max_shots: *max_shots };
            let mut settings = DecoderSettings::with_max_iters(*max_iters);
            settings.osd.order = *osd_order;
            let d = distance.unwrap_or(*rounds);
            let result = run_memory_experiment(&code, d, &noise, *rounds, &stop, &settings, *seed)?;
            if let Some(path) = csv {
                append_sweep_row(path, &SweepRow::from(&result))?;
            }
            emit_json(&result, out.as_deref())?;
            Ok(0)
        }
        Command::Fit { input, ansatz, model, pin_a, out } => {
            let file = File::open(input)
                .map_err(|e| Error::Parse(format!("{}: {e}", input.display())))?;
            let rows = read_sweep_csv(BufReader::new(file))?;
            let points = fit_points(&rows, *ansatz, *model)?;
            let fit = match pin_a {
                Some(a) => fit_ansatz_pinned_a(&points, *a)?,
                None => fit_ansatz(&points)?,
            };
            emit_json(&fit, out.as_deref())?;
            Ok(0)
        }
        Command::Estimate { arch, eps, nl, target, kappa, nbar, row, fit, format, out } => {
            let args = EstimateArgs {
                eps: *eps,
                nl: *nl,
                target: *target,
                kappa: *kappa,
                nbar: *nbar,
                row: *row,
                fit: fit.clone(),
            };
            let rows = estimate(*arch, &args)?;
            match format {
                FormatArg::Csv => emit(&footprint_csv(&rows)?, out.as_deref())?,
                FormatArg::Json if *arch == ArchArg::All => emit_json(&rows, out.as_deref())?,
                FormatArg::Json => emit_json(&rows[0], out.as_deref())?,
            }
            Ok(0)
        }
        Command::ExportCode { family, ell, planar, alist, out } => {
            let row: usize = family
                .strip_prefix("table1-row")
                .and_then(|r| r.parse().ok())
                .ok_or_else(|| {
                    Error::Parse(format!("field `family`: expected table1-rowN, got `{family}`"))
                })?;
            let fam = table1_family(row)?;
            let code = if *planar { fam.planar_code(*ell) } else { fam.code(*ell) };
            if let Some(path) = alist {
                write_alist(&code, BufWriter::new(File::create(path)?))?;
            }
            let mut text = CodeFile::from(&code).to_json()?;
            text.push('\n');
            emit(&text, out.as_deref())?;
            Ok(0)
        }
    }
}
