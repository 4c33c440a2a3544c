use std::path::PathBuf;
use std::process::Command;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Duration;

use splr::{Certificate, SolveIF, Solver, SolverError};

use super::cnf::Cnf;
use crate::error::{Error, Result};

/// Environment variable naming an external DIMACS solver binary.
pub const SOLVER_ENV: &str = "LDPC_CAT_SAT_SOLVER";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatAnswer {
    /// Model indexed by `variable - 1`.
    Sat(Vec<bool>),
    Unsat,
    /// Gave up (timeout or resource limit).
    Unknown,
}

/// Anything able to decide a [`Cnf`].
pub trait SolverHandle: Send + Sync {
    fn solve(&self, cnf: &Cnf, timeout: Option<Duration>) -> Result<SatAnswer>;
    fn name(&self) -> String;
}

/// In-process CDCL solver.
#[derive(Clone, Copy, Debug, Default)]
pub struct EmbeddedSolver;

impl SolverHandle for EmbeddedSolver {
    fn solve(&self, cnf: &Cnf, timeout: Option<Duration>) -> Result<SatAnswer> {
        if cnf.clauses.iter().any(|c| c.is_empty()) {
            return Ok(SatAnswer::Unsat);
        }
        if cnf.clauses.is_empty() || cnf.num_vars == 0 {
            return Ok(SatAnswer::Sat(vec![false; cnf.num_vars]));
        }
        let mut config = splr::Config::default();
        config.quiet_mode = true;
        if let Some(t) = timeout {
            config.c_timeout = t.as_secs_f64().max(1.0);
        }
        // Pin the variable count: a unit clause on the last variable's
        // tautology keeps unused variables in the model.
        let mut clauses = cnf.clauses.clone();
        let top = cnf.num_vars as i32;
        clauses.push(vec![top, -top]);
        let result = match Solver::try_from((config, clauses.as_slice())) {
            Ok(mut solver) => solver.solve(),
            Err(Ok(cert)) => Ok(cert),
            Err(Err(e)) => Err(e),
        };
        match result {
            Ok(Certificate::SAT(lits)) => {
                let mut model = vec![false; cnf.num_vars];
                for l in lits {
                    let v = l.unsigned_abs() as usize;
                    if v >= 1 && v <= cnf.num_vars {
                        model[v - 1] = l > 0;
                    }
                }
                Ok(SatAnswer::Sat(model))
            }
            Ok(Certificate::UNSAT) => Ok(SatAnswer::Unsat),
            Err(SolverError::EmptyClause) | Err(SolverError::RootLevelConflict(_)) => {
                Ok(SatAnswer::Unsat)
            }
            Err(SolverError::TimeOut) => Ok(SatAnswer::Unknown),
            Err(e) => Err(Error::Solver(format!("embedded solver failed: {e}"))),
        }
    }

    fn name(&self) -> String {
        "embedded".into()
    }
}

/// A solver binary speaking the competition protocol: DIMACS file as the
/// last argument, `s SATISFIABLE` / `s UNSATISFIABLE` and `v` model lines on
/// stdout.
#[derive(Clone, Debug)]
pub struct ExternalSolver {
    pub path: PathBuf,
    pub args: Vec<String>,
}

impl ExternalSolver {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self { path: path.into(), args: Vec::new() }
    }

    /// The solver named by the environment, if any.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(SOLVER_ENV).map(Self::new)
    }
}

static FILE_COUNTER: AtomicUsize = AtomicUsize::new(0);

impl SolverHandle for ExternalSolver {
    fn solve(&self, cnf: &Cnf, timeout: Option<Duration>) -> Result<SatAnswer> {
        let file = std::env::temp_dir().join(format!(
            "ldpc-cat-{}-{}.cnf",
            std::process::id(),
            FILE_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        cnf.write_dimacs(std::io::BufWriter::new(std::fs::File::create(&file)?))?;
        let mut cmd = Command::new(&self.path);
        cmd.args(&self.args);
        if let Some(t) = timeout {
            // Understood by the common solvers; others ignore unknown env.
            cmd.env("SAT_TIMEOUT", t.as_secs().to_string());
        }
        let output = cmd.arg(&file).output();
        let _ = std::fs::remove_file(&file);
        let output = output.map_err(|e| {
            Error::Solver(format!("cannot run {}: {e}", self.path.display()))
        })?;
        parse_solver_output(&String::from_utf8_lossy(&output.stdout), cnf.num_vars)
    }

    fn name(&self) -> String {
        self.path.display().to_string()
    }
}

/// Parses competition-format solver output.
pub fn parse_solver_output(text: &str, num_vars: usize) -> Result<SatAnswer> {
    let mut status = None;
    let mut model = vec![false; num_vars];
    for line in text.lines() {
        let line = line.trim();
        if let Some(s) = line.strip_prefix("s ") {
            status = Some(s.trim().to_string());
        } else if let Some(v) = line.strip_prefix("v ") {
            for tok in v.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| Error::Solver(format!("bad model literal `{tok}`")))?;
                let var = lit.unsigned_abs() as usize;
                if var >= 1 && var <= num_vars {
                    model[var - 1] = lit > 0;
                }
            }
        }
    }
    match status.as_deref() {
        Some("SATISFIABLE") => Ok(SatAnswer::Sat(model)),
        Some("UNSATISFIABLE") => Ok(SatAnswer::Unsat),
        Some("UNKNOWN") | None => Ok(SatAnswer::Unknown),
        Some(other) => Err(Error::Solver(format!("unexpected status `{other}`"))),
    }
}

/// The external solver from the environment, or the embedded one.
pub fn default_solver() -> Box<dyn SolverHandle> {
    match ExternalSolver::from_env() {
        Some(s) => Box::new(s),
        None => Box::new(EmbeddedSolver),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_small_instances() {
        let sat = Cnf { num_vars: 3, clauses: vec![vec![1, 2], vec![-1], vec![-2, 3]] };
        match EmbeddedSolver.solve(&sat, None).unwrap() {
            SatAnswer::Sat(m) => assert!(sat.is_satisfied_by(&m)),
            other => panic!("{other:?}"),
        }
        let unsat = Cnf { num_vars: 1, clauses: vec![vec![1], vec![-1]] };
        assert_eq!(EmbeddedSolver.solve(&unsat, None).unwrap(), SatAnswer::Unsat);
        let deeper = Cnf {
            num_vars: 2,
            clauses: vec![vec![1, 2], vec![1, -2], vec![-1, 2], vec![-1, -2]],
        };
        assert_eq!(EmbeddedSolver.solve(&deeper, None).unwrap(), SatAnswer::Unsat);
    }

    #[test]
    fn competition_output() {
        let out = "c hello\ns SATISFIABLE\nv 1 -2\nv 3 0\n";
        assert_eq!(
            parse_solver_output(out, 3).unwrap(),
            SatAnswer::Sat(vec![true, false, true])
        );
        assert_eq!(parse_solver_output("s UNSATISFIABLE\n", 2).unwrap(), SatAnswer::Unsat);
        assert_eq!(parse_solver_output("", 2).unwrap(), SatAnswer::Unknown);
    }
}
