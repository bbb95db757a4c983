use std::io::Read;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use super::SolveResult;
use crate::error::{Error, Result};
use crate::logicir::{Assignment, Lit};
use crate::omega::shell_quote;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceFormat {
    Dimacs,
    Qdimacs,
}

/// A solver invoked through `sh -c`. `{file}` in the template is replaced
/// by the instance path; without it the path is appended.
#[derive(Debug, Clone)]
pub struct ExternalSolver {
    pub command: String,
    pub timeout: Option<Duration>,
}

impl ExternalSolver {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalSolver { command: command.into(), timeout: None }
    }

    fn command_line(&self, path: &str) -> String {
        let quoted = shell_quote(path);
        if self.command.contains("{file}") {
            self.command.replace("{file}", &quoted)
        } else {
            format!("{} {}", self.command, quoted)
        }
    }
}

/// Runs the solver on `instance`. Exit status 10 means satisfiable and 20
/// unsatisfiable. For DIMACS the model comes from `v` lines; for QDIMACS
/// from `V` lines (or `v` lines), covering the outer block only.
pub fn solve_external(
    solver: &ExternalSolver,
    instance: &str,
    format: InstanceFormat,
    cancel: Option<&AtomicBool>,
) -> Result<SolveResult> {
    let suffix = match format {
        InstanceFormat::Dimacs => ".cnf",
        InstanceFormat::Qdimacs => ".qdimacs",
    };
    let mut file = tempfile::Builder::new().prefix("bosy-").suffix(suffix).tempfile()?;
    std::io::Write::write_all(&mut file, instance.as_bytes())?;
    let path = file.path().to_string_lossy().into_owned();
    let cmdline = solver.command_line(&path);
    log::debug!("running external solver: {cmdline}");

    let mut command = Command::new("sh");
    command.arg("-c").arg(&cmdline).stdin(Stdio::null()).stdout(Stdio::piped()).stderr(Stdio::null());
    #[cfg(unix)]
    std::os::unix::process::CommandExt::process_group(&mut command, 0);
    let mut child = command
        .spawn()
        .map_err(|e| Error::Solver(format!("cannot start `{cmdline}`: {e}")))?;

    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });

    let deadline = solver.timeout.map(|t| Instant::now() + t);
    let status = loop {
        if let Some(status) = child.try_wait()? {
            break status;
        }
        let cancelled = cancel.is_some_and(|c| c.load(Ordering::Relaxed));
        let expired = deadline.is_some_and(|d| Instant::now() >= d);
        if cancelled || expired {
            kill_tree(&mut child);
            return Err(if cancelled { Error::Cancelled } else { Error::Timeout });
        }
        std::thread::sleep(Duration::from_millis(5));
    };
    let output = reader
        .join()
        .map_err(|_| Error::Solver("output reader panicked".into()))??;

    let (verdict_line, model) = parse_output(&output)?;
    let sat = match status.code() {
        Some(10) => true,
        Some(20) => false,
        other => {
            return Err(Error::Solver(format!(
                "`{cmdline}` exited with status {}",
                other.map_or("signal".to_string(), |c| c.to_string())
            )))
        }
    };
    if let Some(v) = verdict_line {
        if v != sat {
            return Err(Error::UnparseableOutput("verdict line contradicts exit status".into()));
        }
    }
    if !sat {
        return Ok(SolveResult::Unsat);
    }
    if format == InstanceFormat::Dimacs && model.assigned().next().is_none() && has_vars(instance) {
        return Err(Error::UnparseableOutput("satisfiable but no model lines".into()));
    }
    Ok(SolveResult::Sat(model))
}

/// Kills the shell and everything it started.
fn kill_tree(child: &mut std::process::Child) {
    #[cfg(unix)]
    {
        let _ = Command::new("kill")
            .args(["-KILL", "--", &format!("-{}", child.id())])
            .stderr(Stdio::null())
            .status();
    }
    let _ = child.kill();
    let _ = child.wait();
}

fn has_vars(instance: &str) -> bool {
    instance
        .lines()
        .find(|l| l.starts_with("p "))
        .and_then(|l| l.split_whitespace().nth(2))
        .and_then(|n| n.parse::<u32>().ok())
        .is_some_and(|n| n > 0)
}

/// Parses solver stdout into the optional verdict line and the model.
fn parse_output(text: &str) -> Result<(Option<bool>, Assignment)> {
    let mut verdict = None;
    let mut model = Assignment::default();
    for line in text.lines() {
        let line = line.trim();
        let mut words = line.split_whitespace();
        match words.next() {
            None | Some("c") => {}
            Some("s") => {
                let rest: Vec<&str> = words.collect();
                verdict = match rest.as_slice() {
                    ["SATISFIABLE"] => Some(true),
                    ["UNSATISFIABLE"] => Some(false),
                    // QDIMACS output format: s cnf <0|1> ...
                    ["cnf", v, ..] => Some(*v == "1"),
                    _ => return Err(Error::UnparseableOutput(line.to_string())),
                };
            }
            Some("v") | Some("V") => {
                for w in words {
                    let x: i32 = w.parse().map_err(|_| Error::UnparseableOutput(line.to_string()))?;
                    if x != 0 {
                        let l = Lit::from_dimacs(x);
                        model.set(l.var(), l.is_positive());
                    }
                }
            }
            Some(_) if line.starts_with('c') => {}
            Some(_) => return Err(Error::UnparseableOutput(line.to_string())),
        }
    }
    Ok((verdict, model))
}
